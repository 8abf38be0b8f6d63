//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use blm::generate::{generate, GenParams, Kind};
use blm::io::parse_instance;
use blm::LaminarInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture_text(name: &str) -> String {
    fs::read_to_string(fixture_dir().join(name)).expect("fixture exists")
}

pub fn fixture(name: &str) -> LaminarInstance {
    parse_instance(&fixture_text(name)).expect("fixture is valid")
}

/// Every fixture that loads as a valid instance, sorted by file name.
pub fn valid_fixtures() -> Vec<(String, LaminarInstance)> {
    let mut names: Vec<String> = fs::read_dir(fixture_dir())
        .expect("fixture dir")
        .map(|e| {
            e.expect("dir entry")
                .file_name()
                .to_string_lossy()
                .into_owned()
        })
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
        .into_iter()
        .filter_map(|n| parse_instance(&fixture_text(&n)).ok().map(|i| (n, i)))
        .collect()
}

/// A seeded random laminar instance with `1..=max_n` elements, costs and
/// profits in `0..=max_value`, and a budget anywhere from 0 to just above
/// the total cost.
pub fn random_laminar(seed: u64, max_n: usize, max_value: u64) -> LaminarInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let params = GenParams {
        n: rng.gen_range(1..=max_n),
        seed,
        costs: 0..=max_value,
        profits: 0..=max_value,
        depth: rng.gen_range(1..=4),
        branching: rng.gen_range(1..=3),
        ..GenParams::default()
    };
    with_random_budget(Kind::RandomLaminar, &params, &mut rng)
}

/// Like [`random_laminar`] but drawn from every generator kind.
pub fn random_any(seed: u64, max_n: usize, max_value: u64) -> LaminarInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51_7cc1_b727_220a);
    let kind = match rng.gen_range(0..5) {
        0 => Kind::Knapsack,
        1 => Kind::Cardinality,
        2 => Kind::MultipleChoice,
        3 => Kind::Partition,
        _ => return random_laminar(seed, max_n, max_value),
    };
    let n = rng.gen_range(1..=max_n);
    let groups = random_groups(&mut rng, n);
    let group_capacities = groups
        .iter()
        .map(|&g| rng.gen_range(1..=g as u64))
        .collect();
    let params = GenParams {
        n,
        seed,
        costs: 0..=max_value,
        profits: 0..=max_value,
        k: Some(rng.gen_range(1..=n as u64)),
        groups,
        group_capacities,
        ..GenParams::default()
    };
    with_random_budget(kind, &params, &mut rng)
}

/// Random positive group sizes summing to `n`.
pub fn random_groups(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut groups = Vec::new();
    let mut left = n;
    while left > 0 {
        let g = rng.gen_range(1..=left.min(4));
        groups.push(g);
        left -= g;
    }
    groups
}

fn with_random_budget(kind: Kind, params: &GenParams, rng: &mut ChaCha8Rng) -> LaminarInstance {
    let mut file = generate(kind, params).expect("generator parameters are valid");
    let total: u64 = file.elements.iter().map(|e| e.cost).sum();
    file.budget = rng.gen_range(0..=total + 1);
    file.into_instance().expect("generated instance is valid")
}

/// Index lists of every subset of `0..n`, by bitmask.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

/// Independence by direct counting against every family set.
pub fn independent_by_counting(instance: &LaminarInstance, subset: &[usize]) -> bool {
    instance.family().iter().all(|set| {
        let hits = subset.iter().filter(|i| set.members.contains(i)).count() as u64;
        hits <= set.capacity
    })
}

/// Maps element indices of `from` to indices of `to` through element ids.
pub fn reindex(from: &LaminarInstance, to: &LaminarInstance, members: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = members
        .iter()
        .map(|&i| to.index_of(&from.elements()[i].id).expect("id present"))
        .collect();
    out.sort_unstable();
    out
}
