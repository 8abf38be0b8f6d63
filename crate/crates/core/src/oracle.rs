//! Brute-force references. Every subset of the ground set is visited through
//! a binary counter in element-id order; nothing here reuses the solver code.

use thiserror::Error;

use crate::dp::Solution;
use crate::matroid::LaminarInstance;
use crate::table::{CostValue, DpTable};

pub const DEFAULT_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {size} elements; the brute-force limit is {limit}")]
    TooLarge { size: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub limit: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            limit: DEFAULT_LIMIT,
        }
    }
}

struct Enumerator {
    costs: Vec<u64>,
    profits: Vec<u64>,
    sets: Vec<(u64, u32)>,
}

impl Enumerator {
    fn new(instance: &LaminarInstance, config: &OracleConfig) -> Result<Self, OracleError> {
        let size = instance.len();
        if size > config.limit || size >= 64 {
            return Err(OracleError::TooLarge {
                size,
                limit: config.limit.min(63),
            });
        }
        let sets = instance
            .family()
            .iter()
            .map(|s| {
                let mask = s.members.iter().fold(0u64, |m, &e| m | (1 << e));
                (mask, u32::try_from(s.capacity).unwrap_or(u32::MAX))
            })
            .collect();
        Ok(Self {
            costs: instance.elements().iter().map(|e| e.cost).collect(),
            profits: instance.elements().iter().map(|e| e.profit).collect(),
            sets,
        })
    }

    fn independent(&self, subset: u64) -> bool {
        self.sets
            .iter()
            .all(|&(mask, cap)| (subset & mask).count_ones() <= cap)
    }

    fn total(values: &[u64], subset: u64) -> u64 {
        (0..values.len())
            .filter(|&i| subset >> i & 1 == 1)
            .map(|i| values[i])
            .sum()
    }

    fn subsets(&self) -> impl Iterator<Item = u64> + '_ {
        (0..1u64 << self.costs.len()).filter(|&s| self.independent(s))
    }
}

fn members_of(subset: u64) -> Vec<usize> {
    (0..64).filter(|&i| subset >> i & 1 == 1).collect()
}

/// An optimal solution by exhaustive search: maximum profit, then minimum
/// cost, then the lexicographically smallest id list.
pub fn enumerate_opt(
    instance: &LaminarInstance,
    config: &OracleConfig,
) -> Result<Solution, OracleError> {
    let en = Enumerator::new(instance, config)?;
    let mut best = Solution::empty();
    for subset in en.subsets() {
        let cost = Enumerator::total(&en.costs, subset);
        if cost > instance.budget() {
            continue;
        }
        let candidate = Solution {
            members: members_of(subset),
            cost,
            profit: Enumerator::total(&en.profits, subset),
        };
        let better = candidate.profit > best.profit
            || (candidate.profit == best.profit
                && (candidate.cost < best.cost
                    || (candidate.cost == best.cost && candidate.members < best.members)));
        if better {
            best = candidate;
        }
    }
    Ok(best)
}

/// The minimum-cost table by grouping every independent subset by
/// `(size, profit)`.
pub fn enumerate_table(
    instance: &LaminarInstance,
    config: &OracleConfig,
) -> Result<DpTable, OracleError> {
    let en = Enumerator::new(instance, config)?;
    let n = instance.len();
    let mut table = DpTable::new(n, n, instance.total_profit());
    for subset in en.subsets() {
        let q = subset.count_ones() as usize;
        let t = Enumerator::total(&en.profits, subset);
        let c = Enumerator::total(&en.costs, subset);
        table.relax(q, t, CostValue::Finite(c));
    }
    Ok(table)
}

/// Textbook 0/1 knapsack over capacities: best profit within `budget`.
/// Runs in `O(n · budget)`.
pub fn knapsack_opt(items: &[(u64, u64)], budget: u64) -> u64 {
    let budget = usize::try_from(budget).expect("budget fits in memory");
    let mut best = vec![0u64; budget + 1];
    for &(cost, profit) in items {
        let Ok(cost) = usize::try_from(cost) else {
            continue;
        };
        if cost > budget {
            continue;
        }
        for b in (cost..=budget).rev() {
            best[b] = best[b].max(best[b - cost] + profit);
        }
    }
    best[budget]
}
