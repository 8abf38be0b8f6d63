//! Exact pseudo-polynomial solver.
//!
//! [`compute_dp`] builds the recursion tree: a one-element instance is a leaf,
//! a single-set family is re-expressed through its partitioned instance, and
//! otherwise the instance splits on a maximal set `X` into `I ∩ X` and
//! `I \ X`, whose tables are convolved under the cap `k(S)`. Every node keeps
//! its table so a witness for any finite root cell can be recovered by
//! walking back down the tree.

use std::sync::Arc;

use thiserror::Error;

use crate::matroid::{FamilySet, LaminarInstance};
use crate::table::{convolve, singleton_table, CostValue, DpTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DpError {
    #[error("cell ({q}, {t}) has no witness")]
    UnreachableCell { q: usize, t: u64 },
}

/// A selection of elements with its cached totals. `members` are sorted
/// indices into the instance the solution answers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Solution {
    pub members: Vec<usize>,
    pub cost: u64,
    pub profit: u64,
}

impl Solution {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Totals `members` under the instance's costs and profits.
    pub fn evaluate(instance: &LaminarInstance, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        let elements = instance.elements();
        let cost = members.iter().map(|&i| elements[i].cost).sum();
        let profit = members.iter().map(|&i| elements[i].profit).sum();
        Self {
            members,
            cost,
            profit,
        }
    }

    pub fn ids<'a>(&self, instance: &'a LaminarInstance) -> Vec<&'a str> {
        self.members
            .iter()
            .map(|&i| instance.elements()[i].id.as_str())
            .collect()
    }

    /// Re-derives totals, independence and the budget bound.
    pub fn verify(&self, instance: &LaminarInstance) -> Result<(), String> {
        if self.members.iter().any(|&i| i >= instance.len()) {
            return Err("solution references an element outside the instance".into());
        }
        let fresh = Self::evaluate(instance, self.members.clone());
        if fresh.members != self.members {
            return Err("solution members are not sorted and distinct".into());
        }
        if fresh.cost != self.cost || fresh.profit != self.profit {
            return Err(format!(
                "cached totals (cost {}, profit {}) differ from recomputed (cost {}, profit {})",
                self.cost, self.profit, fresh.cost, fresh.profit
            ));
        }
        if !instance.is_independent(&self.members).unwrap_or(false) {
            return Err("solution is not independent".into());
        }
        if self.cost > instance.budget() {
            return Err(format!(
                "cost {} exceeds budget {}",
                self.cost,
                instance.budget()
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum NodeKind {
    /// The empty instance.
    Empty,
    Singleton {
        element: usize,
    },
    /// Single-set family, solved through its partitioned instance.
    Partition {
        child: Box<DecompositionNode>,
    },
    /// Split on the maximal set `pivot`; `left` is `I ∩ X`, `right` is `I \ X`.
    Split {
        pivot: FamilySet,
        left: Box<DecompositionNode>,
        right: Box<DecompositionNode>,
    },
}

/// One call of the recursion. `elements` are indices into the root instance
/// (the instance passed to [`compute_dp`]), in id order; `pivot` members use
/// the same indexing.
#[derive(Debug, Clone)]
pub struct DecompositionNode {
    pub kind: NodeKind,
    pub elements: Vec<usize>,
    pub family_len: usize,
    pub capacity: u64,
    table: Arc<DpTable>,
}

impl DecompositionNode {
    pub fn table(&self) -> &DpTable {
        &self.table
    }

    /// Number of recursive calls that produced this subtree, itself included.
    pub fn node_count(&self) -> usize {
        1 + match &self.kind {
            NodeKind::Empty | NodeKind::Singleton { .. } => 0,
            NodeKind::Partition { child } => child.node_count(),
            NodeKind::Split { left, right, .. } => left.node_count() + right.node_count(),
        }
    }

    /// Stored cells summed over every distinct table in the subtree.
    pub fn total_cells(&self) -> usize {
        match &self.kind {
            NodeKind::Empty | NodeKind::Singleton { .. } => self.table.cell_count(),
            // shares its child's table
            NodeKind::Partition { child } => child.total_cells(),
            NodeKind::Split { left, right, .. } => {
                self.table.cell_count() + left.total_cells() + right.total_cells()
            }
        }
    }

    pub fn depth(&self) -> usize {
        1 + match &self.kind {
            NodeKind::Empty | NodeKind::Singleton { .. } => 0,
            NodeKind::Partition { child } => child.depth(),
            NodeKind::Split { left, right, .. } => left.depth().max(right.depth()),
        }
    }
}

/// Largest profit any independent set of `instance` can reach: the sum of
/// the `min(k(S), |S|)` largest profits.
pub fn profit_bound(instance: &LaminarInstance) -> u64 {
    let mut profits: Vec<u64> = instance.elements().iter().map(|e| e.profit).collect();
    profits.sort_unstable_by(|a, b| b.cmp(a));
    let take = usize::try_from(instance.root_capacity()).unwrap_or(usize::MAX);
    profits.iter().take(take).sum()
}

/// Which maximal set a split node pivots on. Any choice yields the same
/// table; only the tree shape and the recovered witnesses differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// The maximal set whose smallest member id is least.
    #[default]
    LeastMember,
    /// The maximal set whose smallest member id is greatest.
    GreatestMember,
}

impl PivotRule {
    fn pick(self, instance: &LaminarInstance) -> usize {
        match self {
            PivotRule::LeastMember => instance
                .find_maximal_set()
                .expect("family has a proper set"),
            PivotRule::GreatestMember => (1..instance.family().len())
                .filter(|&i| instance.parent(i) == Some(0))
                .max_by_key(|&i| instance.family()[i].members[0])
                .expect("family has a proper set"),
        }
    }
}

/// Computes the full table of `instance` and the recursion tree behind it.
pub fn compute_dp(instance: &LaminarInstance) -> DecompositionNode {
    compute_dp_with(instance, PivotRule::default())
}

pub fn compute_dp_with(instance: &LaminarInstance, rule: PivotRule) -> DecompositionNode {
    let origin: Vec<usize> = (0..instance.len()).collect();
    build(instance, origin, rule)
}

fn build(instance: &LaminarInstance, origin: Vec<usize>, rule: PivotRule) -> DecompositionNode {
    let n = instance.len();
    let family_len = instance.family().len();
    let capacity = instance.root_capacity();

    if n == 0 {
        let mut table = DpTable::new(0, 0, 0);
        table.set(0, 0, CostValue::Finite(0));
        return DecompositionNode {
            kind: NodeKind::Empty,
            elements: origin,
            family_len,
            capacity,
            table: Arc::new(table),
        };
    }

    if n == 1 {
        return DecompositionNode {
            kind: NodeKind::Singleton { element: origin[0] },
            elements: origin,
            family_len,
            capacity,
            table: Arc::new(singleton_table(&instance.elements()[0])),
        };
    }

    if family_len == 1 {
        let partitioned = instance
            .partitioned_instance()
            .expect("single-set family over several elements");
        let child = build(&partitioned, origin.clone(), rule);
        return DecompositionNode {
            table: Arc::clone(&child.table),
            kind: NodeKind::Partition {
                child: Box::new(child),
            },
            elements: origin,
            family_len,
            capacity,
        };
    }

    let pivot = rule.pick(instance);
    let inside = instance
        .restrict_intersection(pivot)
        .expect("pivot is maximal");
    let outside = instance
        .restrict_difference(pivot)
        .expect("pivot is a proper subset");

    let pivot_set = &instance.family()[pivot];
    let mut in_pivot = vec![false; n];
    for &e in &pivot_set.members {
        in_pivot[e] = true;
    }
    let (left_origin, right_origin): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| in_pivot[i]);
    let left_origin: Vec<usize> = left_origin.into_iter().map(|i| origin[i]).collect();
    let right_origin: Vec<usize> = right_origin.into_iter().map(|i| origin[i]).collect();
    let pivot = FamilySet {
        name: pivot_set.name.clone(),
        members: left_origin.clone(),
        capacity: pivot_set.capacity,
    };

    let left = build(&inside, left_origin, rule);
    let right = build(&outside, right_origin, rule);
    let table = convolve(
        &left.table,
        &right.table,
        capacity,
        n,
        profit_bound(instance),
    )
    .expect("child tables are consistent with the parent");

    DecompositionNode {
        kind: NodeKind::Split {
            pivot,
            left: Box::new(left),
            right: Box::new(right),
        },
        elements: origin,
        family_len,
        capacity,
        table: Arc::new(table),
    }
}

/// Recovers a witness for cell `(q, t)` of `root`'s table: `q` elements of
/// total profit `t` and total cost equal to the cell. At each split the first
/// `(q1, t1)` in lexicographic order whose child cells add up is taken.
pub fn backtrack(root: &DecompositionNode, q: usize, t: u64) -> Result<Solution, DpError> {
    let CostValue::Finite(cost) = root.table.get(q, t) else {
        return Err(DpError::UnreachableCell { q, t });
    };
    let mut members = Vec::with_capacity(q);
    collect(root, q, t, cost, &mut members);
    members.sort_unstable();
    Ok(Solution {
        members,
        cost,
        profit: t,
    })
}

fn collect(node: &DecompositionNode, q: usize, t: u64, cost: u64, out: &mut Vec<usize>) {
    match &node.kind {
        NodeKind::Empty => debug_assert_eq!((q, t), (0, 0)),
        NodeKind::Singleton { element } => {
            if q == 1 {
                out.push(*element);
            }
        }
        NodeKind::Partition { child } => collect(child, q, t, cost, out),
        NodeKind::Split { left, right, .. } => {
            for q1 in 0..=q.min(left.table.row_cap()) {
                let q2 = q - q1;
                if q2 > right.table.row_cap() {
                    continue;
                }
                for t1 in 0..=t.min(left.table.profit_cap()) {
                    let CostValue::Finite(a) = left.table.get(q1, t1) else {
                        continue;
                    };
                    if a <= cost && right.table.get(q2, t - t1) == CostValue::Finite(cost - a) {
                        collect(left, q1, t1, a, out);
                        collect(right, q2, t - t1, cost - a, out);
                        return;
                    }
                }
            }
            unreachable!("finite cell ({q}, {t}) has a decomposition");
        }
    }
}

/// The finite cell with cost within `budget` and the largest profit; ties go
/// to the smaller cardinality. `None` only if nothing is affordable, which
/// cannot happen since `(0, 0)` costs nothing.
pub fn best_feasible(root: &DecompositionNode, budget: u64) -> Option<(usize, u64)> {
    let mut best: Option<(usize, u64)> = None;
    for (q, t, cost) in root.table.finite_cells() {
        if cost <= budget && best.is_none_or(|(_, bt)| t > bt) {
            best = Some((q, t));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{Element, RawInstance, RawSet};

    fn inst(
        elements: &[(&str, u64, u64)],
        family: &[(&str, &[&str], u64)],
        budget: u64,
    ) -> LaminarInstance {
        LaminarInstance::new(RawInstance {
            elements: elements
                .iter()
                .map(|&(id, c, p)| Element::new(id, c, p))
                .collect(),
            family: family
                .iter()
                .map(|&(name, members, capacity)| RawSet {
                    name: name.into(),
                    members: members.iter().map(|s| s.to_string()).collect(),
                    capacity,
                })
                .collect(),
            budget,
        })
        .unwrap()
    }

    #[test]
    fn singleton_node() {
        let i = inst(&[("e", 4, 7)], &[], 10);
        let root = compute_dp(&i);
        assert!(matches!(root.kind, NodeKind::Singleton { element: 0 }));
        assert_eq!(root.table().get(1, 7), CostValue::Finite(4));
        assert_eq!(root.node_count(), 1);
        let s = backtrack(&root, 1, 7).unwrap();
        assert_eq!(s.members, vec![0]);
        assert_eq!((s.cost, s.profit), (4, 7));
    }

    #[test]
    fn empty_instance_has_trivial_table() {
        let i = LaminarInstance::new(RawInstance::default()).unwrap();
        let root = compute_dp(&i);
        assert!(matches!(root.kind, NodeKind::Empty));
        assert_eq!(root.table().get(0, 0), CostValue::Finite(0));
        assert_eq!(best_feasible(&root, 0), Some((0, 0)));
        assert_eq!(backtrack(&root, 0, 0).unwrap(), Solution::empty());
    }

    #[test]
    fn five_element_recursion_shape() {
        let ids = ["1", "2", "3", "4", "5"];
        let elements: Vec<(&str, u64, u64)> = ids.iter().map(|&id| (id, 1, 1)).collect();
        let i = inst(
            &elements,
            &[("S", &ids, 3), ("A", &["2", "3"], 1), ("B", &["4", "5"], 1)],
            10,
        );
        let root = compute_dp(&i);
        let NodeKind::Split { pivot, left, right } = &root.kind else {
            panic!("root should split");
        };
        assert_eq!(pivot.name, "A");
        // I ∩ {2,3} has the single set {2,3}: partition into {2} and {3}
        assert!(matches!(left.kind, NodeKind::Partition { .. }));
        let NodeKind::Split {
            pivot,
            left: l2,
            right: r2,
        } = &right.kind
        else {
            panic!("I \\ X should split on B");
        };
        assert_eq!(pivot.name, "B");
        assert!(matches!(l2.kind, NodeKind::Partition { .. }));
        assert!(matches!(r2.kind, NodeKind::Singleton { .. }));

        fn leaves(node: &DecompositionNode, out: &mut Vec<usize>) {
            match &node.kind {
                NodeKind::Singleton { element } => out.push(*element),
                NodeKind::Partition { child } => leaves(child, out),
                NodeKind::Split { left, right, .. } => {
                    leaves(left, out);
                    leaves(right, out);
                }
                NodeKind::Empty => {}
            }
        }
        let mut l = Vec::new();
        leaves(&root, &mut l);
        l.sort_unstable();
        assert_eq!(l, vec![0, 1, 2, 3, 4]);
        assert!(root.node_count() <= 15);
    }

    #[test]
    fn backtrack_zero_cell_is_empty() {
        let i = inst(&[("a", 1, 2), ("b", 5, 2)], &[], 10);
        let root = compute_dp(&i);
        let s = backtrack(&root, 0, 0).unwrap();
        assert!(s.members.is_empty());
        assert_eq!(s.cost, 0);
        assert_eq!(
            backtrack(&root, 2, 3),
            Err(DpError::UnreachableCell { q: 2, t: 3 })
        );
    }

    #[test]
    fn best_feasible_nothing_affordable() {
        let i = inst(&[("a", 1, 2), ("b", 5, 2)], &[], 0);
        let root = compute_dp(&i);
        assert_eq!(best_feasible(&root, 0), Some((0, 0)));
    }

    #[test]
    fn best_feasible_takes_everything() {
        let i = inst(&[("a", 1, 2), ("b", 5, 3)], &[("S", &["a", "b"], 2)], 6);
        let root = compute_dp(&i);
        assert_eq!(best_feasible(&root, 6), Some((2, 5)));
        let s = backtrack(&root, 2, 5).unwrap();
        s.verify(&i).unwrap();
    }

    #[test]
    fn best_feasible_prefers_fewer_elements_on_ties() {
        let i = inst(&[("a", 1, 0), ("b", 1, 4)], &[], 5);
        let root = compute_dp(&i);
        assert_eq!(best_feasible(&root, 5), Some((1, 4)));
    }

    #[test]
    fn profit_bound_respects_root_capacity() {
        let i = inst(
            &[("a", 1, 2), ("b", 1, 9), ("c", 1, 5)],
            &[("S", &["a", "b", "c"], 2)],
            5,
        );
        assert_eq!(profit_bound(&i), 14);
    }

    #[test]
    fn verify_catches_bad_solutions() {
        let i = inst(&[("a", 3, 2), ("b", 5, 3)], &[("S", &["a", "b"], 1)], 6);
        assert!(Solution::evaluate(&i, vec![0, 1]).verify(&i).is_err());
        let s = Solution {
            members: vec![1],
            cost: 5,
            profit: 2,
        };
        assert!(s.verify(&i).is_err());
        assert!(Solution::evaluate(&i, vec![1]).verify(&i).is_ok());
    }
}
