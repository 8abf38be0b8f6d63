//! Laminar families, laminar matroid independence, and the restriction
//! operations the exact dynamic program recurses on.
//!
//! A [`LaminarInstance`] is always canonical: elements are sorted by id, the
//! ground set is present in the family (stored first), and no two family sets
//! share the same members. Element references inside an instance are plain
//! indices into [`LaminarInstance::elements`], so index order equals id order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Name given to the ground set when the input family does not contain it.
pub const GROUND_SET_NAME: &str = "S";

/// A ground-set item.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    pub id: String,
    pub cost: u64,
    pub profit: u64,
}

impl Element {
    pub fn new(id: impl Into<String>, cost: u64, profit: u64) -> Self {
        Self {
            id: id.into(),
            cost,
            profit,
        }
    }
}

/// A member of a canonical laminar family. `members` holds sorted, distinct
/// indices into the owning instance's element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilySet {
    pub name: String,
    pub members: Vec<usize>,
    pub capacity: u64,
}

impl FamilySet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, element: usize) -> bool {
        self.members.binary_search(&element).is_ok()
    }
}

/// A family set as written by a user: members are element ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSet {
    pub name: String,
    pub members: Vec<String>,
    pub capacity: u64,
}

/// Unvalidated instance data, straight from a parser or a generator.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawInstance {
    pub elements: Vec<Element>,
    pub family: Vec<RawSet>,
    pub budget: u64,
}

/// Identifies a family set in diagnostics. `position` is the index in the
/// raw input family, when the set came from the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetRef {
    pub name: String,
    pub position: Option<usize>,
}

impl fmt::Display for SetRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some(pos) => write!(f, "'{}' (family[{}])", self.name, pos),
            None => write!(f, "'{}'", self.name),
        }
    }
}

/// One failed instance invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("sets {first} and {second} are neither disjoint nor nested")]
    NonLaminarPair { first: SetRef, second: SetRef },
    #[error("set {0} is empty")]
    EmptySet(SetRef),
    #[error("sets {first} and {second} have identical members")]
    DuplicateSet { first: SetRef, second: SetRef },
    #[error("unknown element '{id}' referenced by {set}")]
    UnknownElement { set: SetRef, id: String },
    #[error("set {0} has capacity 0; capacities must be positive")]
    NonpositiveCapacity(SetRef),
    #[error("element id '{0}' appears more than once")]
    DuplicateElement(String),
    #[error("total element cost does not fit in 64 bits")]
    CostOverflow,
    #[error("total element profit does not fit in 64 bits")]
    ProfitOverflow,
}

/// Outcome of [`validate_laminar`]: every violated condition, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid laminar instance");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("element index {0} is not in the ground set")]
    UnknownElement(usize),
    #[error("unknown element id '{0}'")]
    UnknownId(String),
    #[error("the family has no set other than the ground set")]
    NoProperSet,
    #[error("family set {0} is not a maximal proper set")]
    NotMaximal(usize),
    #[error("removing the set leaves an empty ground set")]
    EmptyRemainder,
    #[error("partitioning requires a single-set family over at least two elements")]
    Precondition,
}

/// Sum of `values`, or `None` when it does not fit. The budget sentinel
/// `u64::MAX` is reserved so encoded costs (`cost + 1`) never overflow.
fn checked_total(values: impl Iterator<Item = u64>) -> Option<u64> {
    let mut total: u64 = 0;
    for v in values {
        total = total.checked_add(v)?;
    }
    (total < u64::MAX).then_some(total)
}

/// Size of the intersection of two sorted index lists.
fn intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Resolved set: sorted member indices plus its diagnostic handle.
struct Resolved {
    set_ref: SetRef,
    members: Vec<usize>,
    capacity: u64,
}

/// Resolves raw sets against the element list. Reports unknown ids, empty
/// sets and zero capacities; sets with those problems are left out.
fn resolve(raw: &RawInstance, violations: &mut Vec<Violation>) -> (Vec<Element>, Vec<Resolved>) {
    let mut elements = raw.elements.clone();
    elements.sort_by(|a, b| a.id.cmp(&b.id));
    for pair in elements.windows(2) {
        if pair[0].id == pair[1].id {
            violations.push(Violation::DuplicateElement(pair[0].id.clone()));
        }
    }
    elements.dedup_by(|a, b| a.id == b.id);

    if checked_total(elements.iter().map(|e| e.cost)).is_none() {
        violations.push(Violation::CostOverflow);
    }
    if checked_total(elements.iter().map(|e| e.profit)).is_none() {
        violations.push(Violation::ProfitOverflow);
    }

    let mut sets = Vec::with_capacity(raw.family.len());
    for (position, set) in raw.family.iter().enumerate() {
        let set_ref = SetRef {
            name: set.name.clone(),
            position: Some(position),
        };
        let mut ok = true;
        if set.capacity == 0 {
            violations.push(Violation::NonpositiveCapacity(set_ref.clone()));
            ok = false;
        }
        if set.members.is_empty() {
            violations.push(Violation::EmptySet(set_ref.clone()));
            ok = false;
        }
        let mut members = Vec::with_capacity(set.members.len());
        for id in &set.members {
            match elements.binary_search_by(|e| e.id.as_str().cmp(id)) {
                Ok(idx) => members.push(idx),
                Err(_) => {
                    violations.push(Violation::UnknownElement {
                        set: set_ref.clone(),
                        id: id.clone(),
                    });
                    ok = false;
                }
            }
        }
        members.sort_unstable();
        members.dedup();
        if ok {
            sets.push(Resolved {
                set_ref,
                members,
                capacity: set.capacity,
            });
        }
    }
    (elements, sets)
}

fn laminar_violations(sets: &[Resolved], violations: &mut Vec<Violation>) {
    for (i, x) in sets.iter().enumerate() {
        for y in &sets[i + 1..] {
            let common = intersection_len(&x.members, &y.members);
            if common != 0 && common != x.members.len() && common != y.members.len() {
                violations.push(Violation::NonLaminarPair {
                    first: x.set_ref.clone(),
                    second: y.set_ref.clone(),
                });
            }
        }
    }
}

/// Checks every instance invariant on raw input without repairing anything:
/// laminarity, non-empty sets, known element ids, positive capacities, no
/// duplicate sets and no duplicate element ids. A missing ground set is not
/// a violation; loading adds it.
pub fn validate_laminar(raw: &RawInstance) -> ValidationReport {
    let mut violations = Vec::new();
    let (_, sets) = resolve(raw, &mut violations);
    for (i, x) in sets.iter().enumerate() {
        for y in &sets[i + 1..] {
            if x.members == y.members {
                violations.push(Violation::DuplicateSet {
                    first: x.set_ref.clone(),
                    second: y.set_ref.clone(),
                });
            }
        }
    }
    laminar_violations(&sets, &mut violations);
    ValidationReport { violations }
}

/// A validated, canonical instance of the budgeted laminar matroid problem.
///
/// The family is stored as a forest: `parent[i]` is the index of the minimal
/// strict superset of `family[i]`. The ground set sits at index 0 and is the
/// only root. The empty instance has no elements and an empty family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaminarInstance {
    elements: Vec<Element>,
    family: Vec<FamilySet>,
    parent: Vec<Option<usize>>,
    budget: u64,
}

impl LaminarInstance {
    /// Canonicalizes and validates raw input. Duplicate member sets are
    /// merged keeping the smallest capacity, and a ground set with capacity
    /// `|S|` is added when the family lacks one.
    pub fn new(raw: RawInstance) -> Result<Self, ValidationReport> {
        let mut violations = Vec::new();
        let (elements, sets) = resolve(&raw, &mut violations);

        let mut merged: BTreeMap<Vec<usize>, Resolved> = BTreeMap::new();
        for set in sets {
            match merged.get_mut(&set.members) {
                Some(existing) => existing.capacity = existing.capacity.min(set.capacity),
                None => {
                    merged.insert(set.members.clone(), set);
                }
            }
        }
        let sets: Vec<Resolved> = merged.into_values().collect();
        laminar_violations(&sets, &mut violations);
        if !violations.is_empty() {
            return Err(ValidationReport { violations });
        }

        let n = elements.len();
        let mut family: Vec<FamilySet> = sets
            .into_iter()
            .map(|s| FamilySet {
                name: s.set_ref.name,
                members: s.members,
                capacity: s.capacity,
            })
            .collect();
        if n > 0 && !family.iter().any(|s| s.members.len() == n) {
            family.push(FamilySet {
                name: GROUND_SET_NAME.to_string(),
                members: (0..n).collect(),
                capacity: n as u64,
            });
        }
        Ok(Self::from_parts(elements, family, raw.budget))
    }

    /// Assembles an instance from a family already known to be laminar,
    /// duplicate-free and to contain the ground set. Orders the family
    /// canonically and computes the forest.
    fn from_parts(elements: Vec<Element>, mut family: Vec<FamilySet>, budget: u64) -> Self {
        let n = elements.len();
        // ground first, then lexicographic by members
        family.sort_by(|a, b| {
            (a.members.len() != n)
                .cmp(&(b.members.len() != n))
                .then_with(|| a.members.cmp(&b.members))
        });
        debug_assert!(n == 0 || family[0].members.len() == n);

        let mut by_size: Vec<usize> = (0..family.len()).collect();
        by_size.sort_by(|&a, &b| family[b].members.len().cmp(&family[a].members.len()));
        let mut innermost: Vec<Option<usize>> = vec![None; n];
        let mut parent = vec![None; family.len()];
        for &idx in &by_size {
            let set = &family[idx];
            parent[idx] = innermost[set.members[0]];
            for &e in &set.members {
                innermost[e] = Some(idx);
            }
        }
        Self {
            elements,
            family,
            parent,
            budget,
        }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn family(&self) -> &[FamilySet] {
        &self.family
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Minimal strict superset of `family[set]`, or `None` for the ground set.
    pub fn parent(&self, set: usize) -> Option<usize> {
        self.parent[set]
    }

    /// The ground set S, absent only for the empty instance.
    pub fn ground(&self) -> Option<&FamilySet> {
        self.family.first()
    }

    /// k(S); zero for the empty instance.
    pub fn root_capacity(&self) -> u64 {
        self.ground().map_or(0, |s| s.capacity)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.elements
            .binary_search_by(|e| e.id.as_str().cmp(id))
            .ok()
    }

    pub fn total_cost(&self) -> u64 {
        self.elements.iter().map(|e| e.cost).sum()
    }

    pub fn total_profit(&self) -> u64 {
        self.elements.iter().map(|e| e.profit).sum()
    }

    pub fn max_profit(&self) -> u64 {
        self.elements.iter().map(|e| e.profit).max().unwrap_or(0)
    }

    /// Same structure and costs with profits replaced. `profits` is indexed
    /// like [`Self::elements`].
    pub fn with_profits(&self, profits: &[u64]) -> Self {
        assert_eq!(profits.len(), self.elements.len());
        let mut out = self.clone();
        for (e, &p) in out.elements.iter_mut().zip(profits) {
            e.profit = p;
        }
        out
    }

    /// Keeps only the elements selected by `keep` (indexed like the element
    /// list), dropping sets that become empty and re-canonicalizing.
    pub fn retain_elements(&self, keep: impl Fn(&Element) -> bool) -> Self {
        let raw = self.to_raw();
        let kept: Vec<Element> = raw.elements.into_iter().filter(|e| keep(e)).collect();
        let family = raw
            .family
            .into_iter()
            .filter_map(|mut s| {
                s.members
                    .retain(|id| kept.binary_search_by(|e| e.id.cmp(id)).is_ok());
                (!s.members.is_empty()).then_some(s)
            })
            .collect();
        Self::new(RawInstance {
            elements: kept,
            family,
            budget: raw.budget,
        })
        .expect("removing elements preserves laminarity")
    }

    /// The instance as raw data, with member ids spelled out.
    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            elements: self.elements.clone(),
            family: self
                .family
                .iter()
                .map(|s| RawSet {
                    name: s.name.clone(),
                    members: s
                        .members
                        .iter()
                        .map(|&i| self.elements[i].id.clone())
                        .collect(),
                    capacity: s.capacity,
                })
                .collect(),
            budget: self.budget,
        }
    }

    /// Re-checks every invariant, including presence of the ground set.
    pub fn validate(&self) -> ValidationReport {
        let mut report = validate_laminar(&self.to_raw());
        if !self.elements.is_empty() && self.ground().map(FamilySet::len) != Some(self.len()) {
            report.violations.push(Violation::EmptySet(SetRef {
                name: GROUND_SET_NAME.to_string(),
                position: None,
            }));
        }
        report
    }

    pub fn indices_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>, MatroidError> {
        ids.iter()
            .map(|id| {
                self.index_of(id.as_ref())
                    .ok_or_else(|| MatroidError::UnknownId(id.as_ref().to_string()))
            })
            .collect()
    }

    /// True iff `|candidate ∩ X| ≤ k(X)` for every family set X.
    pub fn is_independent(&self, candidate: &[usize]) -> Result<bool, MatroidError> {
        let mut chosen = vec![false; self.len()];
        for &e in candidate {
            if e >= self.len() {
                return Err(MatroidError::UnknownElement(e));
            }
            chosen[e] = true;
        }
        Ok(self.family.iter().all(|set| {
            let count = set.members.iter().filter(|&&e| chosen[e]).count() as u64;
            count <= set.capacity
        }))
    }

    /// [`Self::is_independent`] over element ids.
    pub fn is_independent_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<bool, MatroidError> {
        self.is_independent(&self.indices_of(ids)?)
    }

    /// A set of `F \ {S}` contained in no other set of `F \ {S}`. Among
    /// several, the one whose smallest member id is least.
    pub fn find_maximal_set(&self) -> Result<usize, MatroidError> {
        (1..self.family.len())
            .filter(|&i| self.parent[i] == Some(0))
            .min_by_key(|&i| self.family[i].members[0])
            .ok_or(MatroidError::NoProperSet)
    }

    fn check_maximal(&self, set: usize) -> Result<(), MatroidError> {
        if set == 0 || set >= self.family.len() || self.parent[set] != Some(0) {
            return Err(MatroidError::NotMaximal(set));
        }
        Ok(())
    }

    /// Sub-instance over the elements outside `mask`-marked positions (or
    /// inside, depending on `inside`), with members re-indexed.
    fn sub_elements(&self, mask: &[bool], inside: bool) -> (Vec<Element>, Vec<Option<usize>>) {
        let mut remap = vec![None; self.len()];
        let mut elements = Vec::new();
        for (i, e) in self.elements.iter().enumerate() {
            if mask[i] == inside {
                remap[i] = Some(elements.len());
                elements.push(e.clone());
            }
        }
        (elements, remap)
    }

    fn mask_of(&self, set: usize) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        for &e in &self.family[set].members {
            mask[e] = true;
        }
        mask
    }

    fn remapped(set: &FamilySet, remap: &[Option<usize>]) -> FamilySet {
        FamilySet {
            name: set.name.clone(),
            members: set
                .members
                .iter()
                .map(|&e| remap[e].expect("member inside the restriction"))
                .collect(),
            capacity: set.capacity,
        }
    }

    /// `I ∩ X`: ground set X, family `{Y ∈ F : Y ⊆ X}`, data inherited.
    pub fn restrict_intersection(&self, set: usize) -> Result<Self, MatroidError> {
        self.check_maximal(set)?;
        let mask = self.mask_of(set);
        let (elements, remap) = self.sub_elements(&mask, true);
        // any Y ≠ S meeting X lies inside X, since X is maximal
        let family = (1..self.family.len())
            .filter(|&i| mask[self.family[i].members[0]])
            .map(|i| Self::remapped(&self.family[i], &remap))
            .collect();
        Ok(Self::from_parts(elements, family, self.budget))
    }

    /// `I \ X`: ground set `S \ X`, family `{Y ∈ F : Y ⊆ S \ X} ∪ {S \ X}`.
    /// The set `S \ X` keeps its own capacity when already in F and gets
    /// k(S) otherwise.
    pub fn restrict_difference(&self, set: usize) -> Result<Self, MatroidError> {
        self.check_maximal(set)?;
        let mask = self.mask_of(set);
        let (elements, remap) = self.sub_elements(&mask, false);
        if elements.is_empty() {
            return Err(MatroidError::EmptyRemainder);
        }
        let mut family: Vec<FamilySet> = (1..self.family.len())
            .filter(|&i| !mask[self.family[i].members[0]])
            .map(|i| Self::remapped(&self.family[i], &remap))
            .collect();
        if !family.iter().any(|s| s.members.len() == elements.len()) {
            let ground = &self.family[0];
            family.push(FamilySet {
                name: format!("{}\\{}", ground.name, self.family[set].name),
                members: (0..elements.len()).collect(),
                capacity: ground.capacity,
            });
        }
        Ok(Self::from_parts(elements, family, self.budget))
    }

    /// For a single-set family over at least two elements, the equivalent
    /// instance with family `{S1, S2, S}`, all capacities k(S). S1 holds the
    /// first `⌈|S|/2⌉` elements in id order.
    pub fn partitioned_instance(&self) -> Result<Self, MatroidError> {
        let n = self.len();
        if self.family.len() != 1 || n <= 1 {
            return Err(MatroidError::Precondition);
        }
        let ground = &self.family[0];
        let split = n.div_ceil(2);
        let family = vec![
            ground.clone(),
            FamilySet {
                name: format!("{}.1", ground.name),
                members: (0..split).collect(),
                capacity: ground.capacity,
            },
            FamilySet {
                name: format!("{}.2", ground.name),
                members: (split..n).collect(),
                capacity: ground.capacity,
            },
        ];
        Ok(Self::from_parts(self.elements.clone(), family, self.budget))
    }
}
