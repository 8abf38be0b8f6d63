//! Benchmark sweep over instance size and epsilon, one CSV row per run.

use std::io::Write;
use std::time::Instant;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::fptas::{solve, solve_exact, Epsilon, FptasError};
use crate::generate::{gen_special, GenError, GenParams, Kind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Fptas,
    Exact,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Fptas => "fptas",
            Mode::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub epsilons: Vec<Epsilon>,
    pub mode: Mode,
    pub kind: Kind,
    /// Template for every instance; `n` is overwritten per grid point.
    pub params: GenParams,
}

/// One benchmark measurement; field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub seed: u64,
    pub n: usize,
    pub family_size: usize,
    pub epsilon: String,
    pub mode: String,
    pub profit: u64,
    /// Certified lower bound on `profit / OPT`.
    pub opt_ratio_lb: String,
    pub table_cells: usize,
    pub recursive_calls: usize,
    pub wall_ms: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Fptas(#[from] FptasError),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

/// Runs the grid in order (sizes outer, epsilons inner) and streams rows to
/// `out`. In exact mode the epsilon list is ignored and each size runs once.
pub fn run_bench<W: Write>(config: &BenchConfig, out: W) -> Result<Vec<BenchRow>, BenchError> {
    let mut writer = csv::Writer::from_writer(out);
    let mut rows = Vec::new();
    for &n in &config.sizes {
        let params = GenParams {
            n,
            ..config.params.clone()
        };
        let instance = gen_special(config.kind, &params)?;
        let epsilons: Vec<Option<Epsilon>> = match config.mode {
            Mode::Exact => vec![None],
            Mode::Fptas => config.epsilons.iter().copied().map(Some).collect(),
        };
        for eps in epsilons {
            let start = Instant::now();
            let answer = match &eps {
                Some(e) => solve(&instance, e)?,
                None => solve_exact(&instance),
            };
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;

            // OPT ≤ α · (p̄(T) + |S|) from the rounding bound
            let ratio = match (&answer.rounding, answer.rounded_profit) {
                (Some(ctx), Some(rounded)) => {
                    let upper =
                        ctx.alpha.clone() * num_bigint::BigUint::from(rounded + ctx.size as u64);
                    let upper = upper.to_f64().unwrap_or(f64::INFINITY);
                    if upper <= 0.0 {
                        1.0
                    } else {
                        (answer.solution.profit as f64 / upper).min(1.0)
                    }
                }
                _ => 1.0,
            };
            let row = BenchRow {
                seed: params.seed,
                n,
                family_size: instance.family().len(),
                epsilon: eps.map_or("0".to_string(), |e| format!("{}", e.to_f64())),
                mode: config.mode.name().to_string(),
                profit: answer.solution.profit,
                opt_ratio_lb: format!("{ratio:.6}"),
                table_cells: answer.stats.table_cells,
                recursive_calls: answer.stats.recursive_calls,
                wall_ms,
            };
            writer.serialize(&row)?;
            writer.flush().map_err(csv::Error::from)?;
            rows.push(row);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_row_count() {
        let config = BenchConfig {
            sizes: vec![5, 8],
            epsilons: vec!["0.5".parse().unwrap(), "0.1".parse().unwrap()],
            mode: Mode::Fptas,
            kind: Kind::RandomLaminar,
            params: GenParams {
                seed: 1,
                ..GenParams::default()
            },
        };
        let mut buf = Vec::new();
        let rows = run_bench(&config, &mut buf).unwrap();
        assert_eq!(rows.len(), 4);
        let text = String::from_utf8(buf).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(
            header,
            "seed,n,family_size,epsilon,mode,profit,opt_ratio_lb,table_cells,recursive_calls,wall_ms"
        );
        assert_eq!(text.lines().count(), 5);
        for row in &rows {
            let lb: f64 = row.opt_ratio_lb.parse().unwrap();
            assert!((0.0..=1.0).contains(&lb));
        }
    }
}
