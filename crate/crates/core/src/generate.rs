//! Seeded instance generators for the special cases of the problem: plain
//! knapsack, cardinality-constrained knapsack, multiple-choice knapsack,
//! partition-matroid knapsack, and random laminar families.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::io::{ElementRecord, InstanceFile, SetRecord};
use crate::matroid::{LaminarInstance, GROUND_SET_NAME};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("bad generator parameters: {0}")]
    BadParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Knapsack,
    Cardinality,
    MultipleChoice,
    Partition,
    RandomLaminar,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Knapsack => "knapsack",
            Kind::Cardinality => "cardinality",
            Kind::MultipleChoice => "multiple_choice",
            Kind::Partition => "partition",
            Kind::RandomLaminar => "random_laminar",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "knapsack" => Kind::Knapsack,
            "cardinality" => Kind::Cardinality,
            "multiple_choice" | "multiple-choice" => Kind::MultipleChoice,
            "partition" => Kind::Partition,
            "random_laminar" | "random-laminar" => Kind::RandomLaminar,
            other => return Err(GenError::BadParams(format!("unknown kind '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    /// Element count; ignored by the grouped kinds, which use `groups`.
    pub n: usize,
    pub seed: u64,
    pub costs: RangeInclusive<u64>,
    pub profits: RangeInclusive<u64>,
    /// Budget; `None` means half the total cost, rounded down.
    pub budget: Option<u64>,
    /// Cardinality bound for `cardinality`.
    pub k: Option<u64>,
    /// Group sizes for `multiple_choice` and `partition`.
    pub groups: Vec<usize>,
    /// Group capacities for `partition`, one per group.
    pub group_capacities: Vec<u64>,
    /// Nesting depth below the ground set for `random_laminar`.
    pub depth: usize,
    /// Upper bound on the children of a set for `random_laminar`.
    pub branching: usize,
    /// Upper bound on random capacities for `random_laminar`; `None` allows
    /// up to the set's size.
    pub cap_max: Option<u64>,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            n: 10,
            seed: 0,
            costs: 1..=100,
            profits: 1..=100,
            budget: None,
            k: None,
            groups: Vec::new(),
            group_capacities: Vec::new(),
            depth: 3,
            branching: 3,
            cap_max: None,
        }
    }
}

/// Spreadsheet-style group labels: a, b, …, z, aa, ab, …
fn group_label(mut index: usize) -> String {
    let mut label = Vec::new();
    loop {
        label.push(b'a' + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    label.reverse();
    String::from_utf8(label).expect("ascii")
}

fn numbered_ids(n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("e{i:0width$}")).collect()
}

fn check_range(name: &str, range: &RangeInclusive<u64>) -> Result<(), GenError> {
    if range.start() > range.end() {
        return Err(GenError::BadParams(format!("empty {name} range")));
    }
    Ok(())
}

fn ground(ids: &[String], capacity: u64) -> SetRecord {
    SetRecord {
        name: GROUND_SET_NAME.to_string(),
        members: ids.to_vec(),
        capacity,
    }
}

/// Generates a seeded instance file; the seed and kind are recorded in its
/// metadata.
pub fn generate(kind: Kind, params: &GenParams) -> Result<InstanceFile, GenError> {
    check_range("cost", &params.costs)?;
    check_range("profit", &params.profits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let (ids, family) = match kind {
        Kind::Knapsack | Kind::Cardinality | Kind::RandomLaminar if params.n == 0 => {
            return Err(GenError::BadParams("n must be positive".into()));
        }
        Kind::Knapsack => {
            let ids = numbered_ids(params.n);
            let family = vec![ground(&ids, params.n as u64)];
            (ids, family)
        }
        Kind::Cardinality => {
            let k = params
                .k
                .ok_or_else(|| GenError::BadParams("cardinality needs k".into()))?;
            if k == 0 {
                return Err(GenError::BadParams("k must be positive".into()));
            }
            let ids = numbered_ids(params.n);
            let family = vec![ground(&ids, k)];
            (ids, family)
        }
        Kind::MultipleChoice | Kind::Partition => {
            if params.groups.is_empty() || params.groups.contains(&0) {
                return Err(GenError::BadParams("groups must be non-empty sizes".into()));
            }
            let capacities = if kind == Kind::Partition {
                if params.group_capacities.len() != params.groups.len()
                    || params.group_capacities.contains(&0)
                {
                    return Err(GenError::BadParams(
                        "partition needs one positive capacity per group".into(),
                    ));
                }
                params.group_capacities.clone()
            } else {
                vec![1; params.groups.len()]
            };
            let mut ids = Vec::new();
            let mut family = Vec::new();
            for (g, (&size, &capacity)) in params.groups.iter().zip(&capacities).enumerate() {
                let label = group_label(g);
                let members: Vec<String> = (1..=size).map(|j| format!("{label}{j}")).collect();
                ids.extend(members.iter().cloned());
                family.push(SetRecord {
                    name: label,
                    members,
                    capacity,
                });
            }
            // a single group spanning everything is already the ground set
            if params.groups.len() > 1 {
                family.push(ground(&ids, ids.len() as u64));
            }
            (ids, family)
        }
        Kind::RandomLaminar => {
            let ids = numbered_ids(params.n);
            let family = random_laminar(&ids, params, &mut rng);
            (ids, family)
        }
    };

    let elements: Vec<ElementRecord> = ids
        .iter()
        .map(|id| ElementRecord {
            id: id.clone(),
            cost: rng.gen_range(params.costs.clone()),
            profit: rng.gen_range(params.profits.clone()),
        })
        .collect();
    let budget = params
        .budget
        .unwrap_or_else(|| elements.iter().map(|e| e.cost).sum::<u64>() / 2);

    let mut metadata = BTreeMap::new();
    metadata.insert(
        "generator".to_string(),
        serde_json::Value::from(kind.name()),
    );
    metadata.insert("seed".to_string(), serde_json::Value::from(params.seed));
    Ok(InstanceFile {
        budget,
        elements,
        family,
        metadata: Some(metadata),
    })
}

/// [`generate`], loaded as an instance.
pub fn gen_special(kind: Kind, params: &GenParams) -> Result<LaminarInstance, GenError> {
    Ok(generate(kind, params)?
        .into_instance()
        .expect("generators emit valid instances"))
}

fn random_capacity(rng: &mut ChaCha8Rng, size: usize, cap_max: Option<u64>) -> u64 {
    let hi = cap_max.map_or(size as u64, |c| c.min(size as u64)).max(1);
    rng.gen_range(1..=hi)
}

/// Shuffles the elements, then carves nested contiguous blocks of the
/// shuffled order into sets. Each level cuts its block into at most
/// `branching + 1` chunks and turns each chunk into a set with probability
/// 3/4.
fn random_laminar(ids: &[String], params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<SetRecord> {
    let mut order: Vec<String> = ids.to_vec();
    order.shuffle(rng);
    let mut family = vec![ground(ids, random_capacity(rng, ids.len(), params.cap_max))];
    let mut counter = 0usize;
    carve(&order, params.depth, params, rng, &mut family, &mut counter);
    family
}

fn carve(
    block: &[String],
    depth: usize,
    params: &GenParams,
    rng: &mut ChaCha8Rng,
    family: &mut Vec<SetRecord>,
    counter: &mut usize,
) {
    if depth == 0 || block.len() < 2 || params.branching == 0 {
        return;
    }
    let cuts = rng.gen_range(1..=params.branching).min(block.len() - 1);
    let mut points: Vec<usize> = (1..block.len()).collect();
    points.shuffle(rng);
    let mut points: Vec<usize> = points.into_iter().take(cuts).collect();
    points.sort_unstable();
    points.insert(0, 0);
    points.push(block.len());
    for w in points.windows(2) {
        let chunk = &block[w[0]..w[1]];
        if !rng.gen_bool(0.75) {
            continue;
        }
        let mut members = chunk.to_vec();
        members.sort();
        *counter += 1;
        family.push(SetRecord {
            name: format!("X{counter}"),
            members,
            capacity: random_capacity(rng, chunk.len(), params.cap_max),
        });
        carve(chunk, depth - 1, params, rng, family, counter);
    }
}
