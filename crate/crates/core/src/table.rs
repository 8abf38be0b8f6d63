//! Dense `(cardinality, profit) → minimum cost` tables and the min-plus
//! convolution that merges the tables of two disjoint sub-instances.

use std::fmt;

use thiserror::Error;

use crate::matroid::Element;

/// A table cell: the minimum cost of a witness, or no witness at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostValue {
    Finite(u64),
    Unreachable,
}

impl CostValue {
    pub fn is_finite(self) -> bool {
        matches!(self, CostValue::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            CostValue::Finite(c) => Some(c),
            CostValue::Unreachable => None,
        }
    }

    // Cells are stored as `cost + 1`, with 0 reserved for `Unreachable`.
    // Instance validation keeps total cost below `u64::MAX`.
    fn encode(self) -> u64 {
        match self {
            CostValue::Finite(c) => c + 1,
            CostValue::Unreachable => 0,
        }
    }

    fn decode(raw: u64) -> Self {
        match raw {
            0 => CostValue::Unreachable,
            c => CostValue::Finite(c - 1),
        }
    }
}

impl std::ops::Add for CostValue {
    type Output = CostValue;

    fn add(self, rhs: CostValue) -> CostValue {
        match (self, rhs) {
            (CostValue::Finite(a), CostValue::Finite(b)) => CostValue::Finite(a + b),
            _ => CostValue::Unreachable,
        }
    }
}

impl PartialOrd for CostValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// `Unreachable` compares greater than every finite cost.
impl Ord for CostValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.encode()
            .wrapping_sub(1)
            .cmp(&other.encode().wrapping_sub(1))
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostValue::Finite(c) => write!(f, "{c}"),
            CostValue::Unreachable => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("axis mismatch: {0}")]
    AxisMismatch(String),
}

/// Minimum-cost table of one (sub-)instance.
///
/// Logically the table covers `q ∈ 0..=q_max` and every `t ≥ 0`. Only rows
/// `0..=row_cap` and columns `0..=profit_cap` are stored; every cell outside
/// that window is `Unreachable`. `row_cap` is `min(q_max, k(S'))`.
#[derive(Clone)]
pub struct DpTable {
    q_max: usize,
    row_cap: usize,
    profit_cap: u64,
    width: usize,
    cells: Vec<u64>,
}

impl DpTable {
    /// All-unreachable table.
    pub fn new(q_max: usize, row_cap: usize, profit_cap: u64) -> Self {
        let row_cap = row_cap.min(q_max);
        let width = usize::try_from(profit_cap)
            .ok()
            .and_then(|p| p.checked_add(1))
            .expect("profit axis fits in memory");
        let len = (row_cap + 1)
            .checked_mul(width)
            .expect("table size fits in memory");
        Self {
            q_max,
            row_cap,
            profit_cap,
            width,
            cells: vec![0; len],
        }
    }

    /// Cardinality axis bound, the element count of the sub-instance.
    pub fn q_max(&self) -> usize {
        self.q_max
    }

    /// Highest stored row.
    pub fn row_cap(&self) -> usize {
        self.row_cap
    }

    /// Highest stored profit column.
    pub fn profit_cap(&self) -> u64 {
        self.profit_cap
    }

    pub fn profit_axis_len(&self) -> u64 {
        self.profit_cap + 1
    }

    /// Number of stored cells.
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn get(&self, q: usize, t: u64) -> CostValue {
        if q > self.row_cap || t > self.profit_cap {
            return CostValue::Unreachable;
        }
        CostValue::decode(self.cells[q * self.width + t as usize])
    }

    /// Panics if `(q, t)` lies outside the stored window.
    pub fn set(&mut self, q: usize, t: u64, value: CostValue) {
        assert!(
            q <= self.row_cap && t <= self.profit_cap,
            "cell ({q}, {t}) out of range"
        );
        self.cells[q * self.width + t as usize] = value.encode();
    }

    /// Lowers the cell to `value` if that is cheaper.
    pub fn relax(&mut self, q: usize, t: u64, value: CostValue) {
        if value < self.get(q, t) {
            self.set(q, t, value);
        }
    }

    fn raw_row(&self, q: usize) -> &[u64] {
        &self.cells[q * self.width..(q + 1) * self.width]
    }

    /// First and last finite column of row `q`.
    fn finite_span(&self, q: usize) -> Option<(usize, usize)> {
        let row = self.raw_row(q);
        let lo = row.iter().position(|&c| c != 0)?;
        let hi = row.iter().rposition(|&c| c != 0)?;
        Some((lo, hi))
    }

    /// Finite cells as `(q, t, cost)`, ordered by `q` then `t`.
    pub fn finite_cells(&self) -> impl Iterator<Item = (usize, u64, u64)> + '_ {
        (0..=self.row_cap).flat_map(move |q| {
            self.raw_row(q)
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(move |(t, &c)| (q, t as u64, c - 1))
        })
    }

    /// Largest cost among finite cells.
    pub fn max_finite(&self) -> Option<u64> {
        self.cells
            .iter()
            .copied()
            .max()
            .filter(|&c| c != 0)
            .map(|c| c - 1)
    }
}

/// Two tables are equal when every logical cell matches, regardless of how
/// much of the unreachable margin each one stores.
impl PartialEq for DpTable {
    fn eq(&self, other: &Self) -> bool {
        if self.q_max != other.q_max {
            return false;
        }
        let rows = self.row_cap.max(other.row_cap);
        let cols = self.profit_cap.max(other.profit_cap);
        (0..=rows).all(|q| (0..=cols).all(|t| self.get(q, t) == other.get(q, t)))
    }
}

impl Eq for DpTable {}

impl fmt::Debug for DpTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DpTable")
            .field("q_max", &self.q_max)
            .field("row_cap", &self.row_cap)
            .field("profit_cap", &self.profit_cap)
            .field("finite", &self.finite_cells().collect::<Vec<_>>())
            .finish()
    }
}

/// Table of a one-element instance: `(0,0) → 0` and `(1, p(e)) → c(e)`.
pub fn singleton_table(element: &Element) -> DpTable {
    let mut table = DpTable::new(1, 1, element.profit);
    table.set(0, 0, CostValue::Finite(0));
    table.set(1, element.profit, CostValue::Finite(element.cost));
    table
}

/// Merges the tables of two disjoint sub-instances:
///
/// `out[q][t] = min_{q1+q2=q, t1+t2=t} left[q1][t1] + right[q2][t2]` for
/// `q ≤ cap`, and `Unreachable` above `cap`.
///
/// `q_out` must equal `left.q_max() + right.q_max()`. `t_out` may be smaller
/// than the sum of the child profit axes, but no finite combination may land
/// beyond it.
pub fn convolve(
    left: &DpTable,
    right: &DpTable,
    cap: u64,
    q_out: usize,
    t_out: u64,
) -> Result<DpTable, TableError> {
    if q_out != left.q_max + right.q_max {
        return Err(TableError::AxisMismatch(format!(
            "q_out = {q_out} but children span {} + {} elements",
            left.q_max, right.q_max
        )));
    }
    let row_cap = usize::try_from(cap).unwrap_or(usize::MAX).min(q_out);
    let mut out = DpTable::new(q_out, row_cap, t_out);

    let right_spans: Vec<Option<(usize, usize)>> =
        (0..=right.row_cap).map(|q| right.finite_span(q)).collect();

    for q1 in 0..=left.row_cap.min(row_cap) {
        let Some((lo1, hi1)) = left.finite_span(q1) else {
            continue;
        };
        let left_row = left.raw_row(q1);
        let q2_max = right.row_cap.min(row_cap - q1);
        for (q2, span) in right_spans.iter().enumerate().take(q2_max + 1) {
            let Some((lo2, hi2)) = *span else {
                continue;
            };
            if (hi1 + hi2) as u64 > t_out {
                return Err(TableError::AxisMismatch(format!(
                    "profit {} reachable at q = {} exceeds t_out = {t_out}",
                    hi1 + hi2,
                    q1 + q2
                )));
            }
            let src = &right.raw_row(q2)[lo2..=hi2];
            let q = q1 + q2;
            let row_start = q * out.width;
            for (t1, &a) in left_row.iter().enumerate().take(hi1 + 1).skip(lo1) {
                if a == 0 {
                    continue;
                }
                // (a - 1) + (s - 1) + 1 is the encoding of the summed cost
                let a = a - 1;
                let start = row_start + t1 + lo2;
                let dst = &mut out.cells[start..start + src.len()];
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        let v = a + s;
                        if *d == 0 || v < *d {
                            *d = v;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
