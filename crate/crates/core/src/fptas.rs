//! Profit-rounding approximation scheme on top of the exact table.
//!
//! Profits are rounded down to multiples of `α = ε · max p / |S|`, which
//! shrinks the profit axis to `O(|S| / ε)` while losing less than
//! `ε · max p ≤ ε · OPT` in total. All rounding is done in exact integer
//! arithmetic.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::dp::{backtrack, best_feasible, compute_dp, DecompositionNode, Solution};
use crate::matroid::LaminarInstance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FptasError {
    #[error("epsilon must be positive")]
    ZeroEpsilon,
    #[error("invalid epsilon '{0}': expected a positive decimal such as 0.1")]
    BadEpsilon(String),
    #[error("all profits are zero; rounding is undefined")]
    ZeroProfit,
    #[error("rounded profits do not fit in 64 bits; epsilon is too small")]
    ScaleTooLarge,
}

/// The error parameter, held as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Epsilon(Ratio<u64>);

impl Epsilon {
    pub fn new(numer: u64, denom: u64) -> Result<Self, FptasError> {
        if numer == 0 || denom == 0 {
            return Err(FptasError::ZeroEpsilon);
        }
        Ok(Self(Ratio::new(numer, denom)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    /// With `ε ≥ 1` the guarantee `(1 − ε) · OPT` says nothing.
    pub fn is_vacuous(&self) -> bool {
        self.numer() >= self.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl FromStr for Epsilon {
    type Err = FptasError;

    /// Parses a plain decimal (`0.25`, `2`, `.5`) into an exact fraction.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FptasError::BadEpsilon(s.to_string());
        let text = s.trim();
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        if frac_part.len() > 18 {
            return Err(bad());
        }
        let denom = 10u64.pow(frac_part.len() as u32);
        let int_value: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac_value: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let numer = int_value
            .checked_mul(denom)
            .and_then(|v| v.checked_add(frac_value))
            .ok_or_else(bad)?;
        Self::new(numer, denom)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

/// Scale factor and per-element profits of one rounding. The profit vectors
/// are indexed like the elements of the rounded instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundingContext {
    pub epsilon: Epsilon,
    /// `|S|` of the instance that was rounded.
    pub size: usize,
    pub max_profit: u64,
    /// `ε · max p / |S|`, reduced.
    pub alpha: Ratio<BigUint>,
    pub original_profits: Vec<u64>,
    pub rounded_profits: Vec<u64>,
}

impl RoundingContext {
    pub fn alpha_string(&self) -> String {
        format!("{}/{}", self.alpha.numer(), self.alpha.denom())
    }

    pub fn max_rounded(&self) -> u64 {
        self.rounded_profits.iter().copied().max().unwrap_or(0)
    }

    /// `⌊|S| / ε⌋`, the largest value a rounded profit can take.
    pub fn rounded_ceiling(&self) -> u64 {
        (self.size as u128 * self.epsilon.denom() as u128 / self.epsilon.numer() as u128) as u64
    }

    /// Checks `α · p̄ ≤ p < α · (p̄ + 1)` for every element.
    pub fn brackets_hold(&self) -> bool {
        let num = self.alpha.numer();
        let den = self.alpha.denom();
        self.original_profits
            .iter()
            .zip(&self.rounded_profits)
            .all(|(&p, &r)| {
                let p = BigUint::from(p) * den;
                let low = BigUint::from(r) * num;
                let high = BigUint::from(r + 1) * num;
                low <= p && p < high
            })
    }
}

/// Drops every element whose cost alone exceeds the budget.
pub fn preprocess(instance: &LaminarInstance) -> LaminarInstance {
    let budget = instance.budget();
    if instance.elements().iter().all(|e| e.cost <= budget) {
        return instance.clone();
    }
    instance.retain_elements(|e| e.cost <= budget)
}

/// Replaces each profit `p` by `⌊p / α⌋` with `α = ε · max p / |S|`.
pub fn round_profits(
    instance: &LaminarInstance,
    epsilon: &Epsilon,
) -> Result<(LaminarInstance, RoundingContext), FptasError> {
    let max_profit = instance.max_profit();
    if max_profit == 0 {
        return Err(FptasError::ZeroProfit);
    }
    let size = instance.len();
    // p / α = p · den(ε) · |S| / (num(ε) · max p)
    let scale_num = BigUint::from(epsilon.denom()) * BigUint::from(size);
    let scale_den = BigUint::from(epsilon.numer()) * BigUint::from(max_profit);
    let original_profits: Vec<u64> = instance.elements().iter().map(|e| e.profit).collect();
    let rounded_profits = original_profits
        .iter()
        .map(|&p| (BigUint::from(p) * &scale_num / &scale_den).to_u64())
        .collect::<Option<Vec<u64>>>()
        .ok_or(FptasError::ScaleTooLarge)?;
    // the rounded table sums up to |S| of these
    rounded_profits
        .iter()
        .try_fold(0u64, |acc, &p| acc.checked_add(p))
        .ok_or(FptasError::ScaleTooLarge)?;

    let alpha = Ratio::new(
        BigUint::from(epsilon.numer()) * BigUint::from(max_profit),
        BigUint::from(epsilon.denom()) * BigUint::from(size),
    );
    let rounded = instance.with_profits(&rounded_profits);
    Ok((
        rounded,
        RoundingContext {
            epsilon: *epsilon,
            size,
            max_profit,
            alpha,
            original_profits,
            rounded_profits,
        },
    ))
}

/// Size figures of one dynamic-programming run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DpStats {
    /// Elements left after preprocessing.
    pub size: usize,
    pub root_rows: usize,
    pub profit_axis_len: u64,
    /// Stored cells over all tables of the recursion tree.
    pub table_cells: usize,
    pub recursive_calls: usize,
}

impl DpStats {
    fn of(root: &DecompositionNode, size: usize) -> Self {
        Self {
            size,
            root_rows: root.table().row_cap() + 1,
            profit_axis_len: root.table().profit_axis_len(),
            table_cells: root.total_cells(),
            recursive_calls: root.node_count(),
        }
    }
}

/// A solver answer. `solution` indexes the instance given to the solver and
/// carries original profits.
#[derive(Debug, Clone)]
pub struct Approximation {
    pub solution: Solution,
    /// Profit of the solution under rounded profits (approximate mode only).
    pub rounded_profit: Option<u64>,
    pub rounding: Option<RoundingContext>,
    pub stats: DpStats,
}

fn lift(original: &LaminarInstance, reduced: &LaminarInstance, found: &Solution) -> Solution {
    let members = found
        .members
        .iter()
        .map(|&i| {
            original
                .index_of(&reduced.elements()[i].id)
                .expect("preprocessing keeps ids")
        })
        .collect();
    Solution::evaluate(original, members)
}

fn run_table(reduced: &LaminarInstance) -> (Solution, DpStats) {
    let root = compute_dp(reduced);
    let (q, t) = best_feasible(&root, reduced.budget()).expect("(0, 0) is always affordable");
    let found = backtrack(&root, q, t).expect("best cell is finite");
    (found, DpStats::of(&root, reduced.len()))
}

/// Returns a feasible solution with profit at least `(1 − ε) · OPT`.
pub fn solve(instance: &LaminarInstance, epsilon: &Epsilon) -> Result<Approximation, FptasError> {
    let reduced = preprocess(instance);
    if reduced.max_profit() == 0 {
        return Ok(Approximation {
            solution: Solution::empty(),
            rounded_profit: Some(0),
            rounding: None,
            stats: DpStats {
                size: reduced.len(),
                ..DpStats::default()
            },
        });
    }
    let (rounded, rounding) = round_profits(&reduced, epsilon)?;
    let (found, stats) = run_table(&rounded);
    Ok(Approximation {
        solution: lift(instance, &rounded, &found),
        rounded_profit: Some(found.profit),
        rounding: Some(rounding),
        stats,
    })
}

/// Optimal solution by the exact table on original profits.
pub fn solve_exact(instance: &LaminarInstance) -> Approximation {
    let reduced = preprocess(instance);
    let (found, stats) = run_table(&reduced);
    Approximation {
        solution: lift(instance, &reduced, &found),
        rounded_profit: None,
        rounding: None,
        stats,
    }
}
