//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use blm::bench::{run_bench, BenchConfig, Mode};
use blm::generate::{gen_special, GenParams, Kind};
use blm::oracle::{enumerate_opt, enumerate_table, knapsack_opt, OracleConfig};
use blm::{compute_dp, solve, solve_exact, Epsilon, LaminarInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{independent_by_counting, random_any, random_groups, random_laminar, subsets};

type Outcome = Result<String, String>;

/// Collects failures; keeps the first few messages.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: usize,
    messages: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.messages.len() < 5 {
                self.messages.push(message());
            }
        }
    }

    fn finish(self, what: &str) -> Outcome {
        if self.failures == 0 {
            Ok(format!("{} {what}", self.checks))
        } else {
            Err(format!(
                "{} of {} {what} failed: {}",
                self.failures,
                self.checks,
                self.messages.join("; ")
            ))
        }
    }
}

const EPSILONS: [&str; 3] = ["0.5", "0.1", "0.01"];

/// Criteria 1, 3 (exact half) and 4 share one pass over the instances.
fn exact_tables(feasibility: &mut Tally) -> (Outcome, Outcome) {
    let mut tables = Tally::default();
    let mut calls = Tally::default();
    for seed in 0..1000 {
        let inst = random_laminar(seed, 10, 8);
        let root = compute_dp(&inst);
        let expected = enumerate_table(&inst, &OracleConfig::default()).expect("small");
        tables.check(*root.table() == expected, || {
            format!("seed {seed}: tables differ")
        });
        calls.check(root.node_count() <= 3 * inst.len(), || {
            format!(
                "seed {seed}: {} calls for |S| = {}",
                root.node_count(),
                inst.len()
            )
        });
        let answer = solve_exact(&inst);
        feasibility.check(answer.solution.verify(&inst).is_ok(), || {
            format!("exact seed {seed}: {:?}", answer.solution.verify(&inst))
        });
    }
    (
        tables.finish("instances with table equal to the brute-force table"),
        calls.finish("instances within 3|S| recursive calls"),
    )
}

/// Criteria 2, 3 (approximate half) and 5.
fn approximation(feasibility: &mut Tally) -> (Outcome, Outcome) {
    let mut guarantee = Tally::default();
    let mut axis = Tally::default();
    for seed in 0..500 {
        let inst = random_any(10_000 + seed, 10, 100);
        let opt = enumerate_opt(&inst, &OracleConfig::default()).expect("small");
        for text in EPSILONS {
            let eps: Epsilon = text.parse().expect("epsilon");
            let answer = solve(&inst, &eps).expect("solvable");
            let got = answer.solution.profit as u128;
            let (n, d) = (eps.numer() as u128, eps.denom() as u128);
            // got ≥ (1 − n/d)·opt, cross-multiplied
            guarantee.check(got * d >= (d - n) * opt.profit as u128, || {
                format!("seed {seed} eps {text}: {got} vs OPT {}", opt.profit)
            });
            feasibility.check(answer.solution.verify(&inst).is_ok(), || {
                format!(
                    "fptas seed {seed} eps {text}: {:?}",
                    answer.solution.verify(&inst)
                )
            });
            if let Some(ctx) = &answer.rounding {
                let size = answer.stats.size as u128;
                let ceiling = (size * d / n) as u64;
                let max_rounded = ctx.rounded_profits.iter().copied().max().unwrap_or(0);
                axis.check(max_rounded <= ceiling, || {
                    format!("seed {seed} eps {text}: max rounded {max_rounded} > {ceiling}")
                });
                let bound = answer.stats.size as u64 * ceiling + 1;
                axis.check(answer.stats.profit_axis_len <= bound, || {
                    format!(
                        "seed {seed} eps {text}: axis {} > {bound}",
                        answer.stats.profit_axis_len
                    )
                });
            }
        }
    }
    (
        guarantee.finish("runs with profit >= (1 - eps) OPT"),
        axis.finish("rounded-axis checks"),
    )
}

fn special_cases() -> Outcome {
    let mut tally = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for seed in 0..200 {
        let n = rng.gen_range(1..=18);
        let params = GenParams {
            n,
            seed,
            costs: 0..=40,
            profits: 0..=40,
            ..GenParams::default()
        };
        let mut inst = gen_special(Kind::Knapsack, &params).expect("knapsack");
        let total = inst.total_cost();
        inst = LaminarInstance::new(blm::RawInstance {
            budget: rng.gen_range(0..=total),
            ..inst.to_raw()
        })
        .expect("valid");
        let items: Vec<(u64, u64)> = inst.elements().iter().map(|e| (e.cost, e.profit)).collect();
        let expected = knapsack_opt(&items, inst.budget());
        let got = solve_exact(&inst).solution.profit;
        tally.check(got == expected, || {
            format!("knapsack seed {seed}: {got} vs {expected}")
        });
    }
    for seed in 0..200 {
        let n = rng.gen_range(1..=12);
        let groups = random_groups(&mut rng, n);
        for kind in [Kind::MultipleChoice, Kind::Cardinality] {
            let params = GenParams {
                n,
                seed,
                costs: 1..=30,
                profits: 0..=30,
                k: Some(rng.gen_range(1..=n as u64)),
                groups: groups.clone(),
                budget: None,
                ..GenParams::default()
            };
            let inst = gen_special(kind, &params).expect("special");
            let expected = enumerate_opt(&inst, &OracleConfig::default())
                .expect("small")
                .profit;
            let got = solve_exact(&inst).solution.profit;
            tally.check(got == expected, || {
                format!("{kind} seed {seed}: {got} vs {expected}")
            });
        }
    }
    tally.finish("special-case instances matching their oracle")
}

fn check_split(inst: &LaminarInstance, label: &str, tally: &mut Tally) {
    let cap = inst.root_capacity();
    for x in 1..inst.family().len() {
        if inst.parent(x) != Some(0) {
            continue;
        }
        let inside = inst.restrict_intersection(x).expect("maximal");
        let outside = inst.restrict_difference(x).expect("maximal");
        let set = &inst.family()[x];
        for q in subsets(inst.len()) {
            let (q1, q2): (Vec<usize>, Vec<usize>) = q.iter().partition(|e| set.contains(**e));
            let ok1 = inside
                .is_independent(&common::reindex(inst, &inside, &q1))
                .expect("ids");
            let ok2 = outside
                .is_independent(&common::reindex(inst, &outside, &q2))
                .expect("ids");
            let whole = independent_by_counting(inst, &q);
            let fits = q.len() as u64 <= cap;
            tally.check(!(ok1 && ok2 && fits) || whole, || {
                format!("{label}: split on {} unsound for {q:?}", set.name)
            });
            tally.check(!whole || (ok1 && ok2), || {
                format!("{label}: split on {} incomplete for {q:?}", set.name)
            });
        }
    }
}

fn check_partition(inst: &LaminarInstance, label: &str, tally: &mut Tally) {
    if inst.family().len() != 1 || inst.len() < 2 {
        return;
    }
    let parted = inst.partitioned_instance().expect("single set");
    for q in subsets(inst.len()) {
        let a = independent_by_counting(inst, &q);
        let b = independent_by_counting(&parted, &common::reindex(inst, &parted, &q));
        tally.check(a == b, || format!("{label}: independence differs on {q:?}"));
    }
    let brute = enumerate_table(&parted, &OracleConfig::default()).expect("small");
    tally.check(*compute_dp(inst).table() == brute, || {
        format!("{label}: table differs from partitioned brute force")
    });
    tally.check(
        *compute_dp(&parted).table() == *compute_dp(inst).table(),
        || format!("{label}: partitioned table differs"),
    );
}

fn structural() -> Outcome {
    let mut tally = Tally::default();
    let mut fixtures = 0;
    for (name, inst) in common::valid_fixtures() {
        if inst.len() > 8 {
            continue;
        }
        fixtures += 1;
        check_split(&inst, &name, &mut tally);
        check_partition(&inst, &name, &mut tally);
    }
    for seed in 0..300 {
        let inst = random_any(20_000 + seed, 8, 8);
        let label = format!("seed {seed}");
        check_split(&inst, &label, &mut tally);
        check_partition(&inst, &label, &mut tally);
    }
    tally.finish(&format!(
        "split/partition checks over {fixtures} fixtures and 300 random instances"
    ))
}

fn scaling() -> Outcome {
    let sizes = [100, 200, 400];
    let mut totals = [0.0f64; 3];
    let start = Instant::now();
    for seed in 1..=5 {
        let config = BenchConfig {
            sizes: sizes.to_vec(),
            epsilons: vec!["0.25".parse().expect("epsilon")],
            mode: Mode::Fptas,
            kind: Kind::RandomLaminar,
            params: GenParams {
                seed,
                cap_max: Some(8),
                ..GenParams::default()
            },
        };
        let rows = run_bench(&config, std::io::sink()).map_err(|e| e.to_string())?;
        for (total, row) in totals.iter_mut().zip(&rows) {
            *total += row.wall_ms;
        }
    }
    let elapsed = start.elapsed();
    let ratios = [totals[1] / totals[0], totals[2] / totals[1]];
    let summary = format!(
        "totals {:.1} / {:.1} / {:.1} ms, growth {:.2}x and {:.2}x per doubling, {:.1} s overall",
        totals[0],
        totals[1],
        totals[2],
        ratios[0],
        ratios[1],
        elapsed.as_secs_f64()
    );
    if ratios.iter().all(|&r| r <= 40.0) && elapsed < Duration::from_secs(600) {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome, Duration)> = Vec::new();
    let mut feasibility = Tally::default();

    let start = Instant::now();
    let (tables, calls) = exact_tables(&mut feasibility);
    let t1 = start.elapsed();
    let start = Instant::now();
    let (guarantee, axis) = approximation(&mut feasibility);
    let t2 = start.elapsed();
    results.push(("1 exact table equivalence", tables, t1));
    results.push(("2 approximation guarantee", guarantee, t2));
    results.push((
        "3 feasibility of every solution",
        feasibility.finish("solutions re-verified"),
        Duration::ZERO,
    ));
    results.push(("4 recursive-call bound", calls, Duration::ZERO));
    results.push(("5 rounded-axis bound", axis, Duration::ZERO));

    let start = Instant::now();
    let outcome = special_cases();
    results.push(("6 special-case regression", outcome, start.elapsed()));
    let start = Instant::now();
    let outcome = structural();
    results.push(("7 structural invariants", outcome, start.elapsed()));
    let start = Instant::now();
    let outcome = scaling();
    results.push(("8 scaling smoke test", outcome, start.elapsed()));

    let mut failed = 0;
    for (name, outcome, time) in &results {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} criterion {name}: {detail} [{:.2} s]",
            time.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
