//! Instance files and solver reports.
//!
//! Instances are JSON objects:
//!
//! ```json
//! {
//!   "budget": 10,
//!   "elements": [{"id": "a", "cost": 3, "profit": 5}],
//!   "family": [{"name": "X", "members": ["a"], "capacity": 1}],
//!   "metadata": {"generator": "knapsack", "seed": 7}
//! }
//! ```
//!
//! `family` and `metadata` are optional; unknown keys are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fptas::Approximation;
use crate::matroid::{Element, LaminarInstance, RawInstance, RawSet, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementRecord {
    pub id: String,
    pub cost: u64,
    pub profit: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetRecord {
    pub name: String,
    pub members: Vec<String>,
    pub capacity: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub budget: u64,
    pub elements: Vec<ElementRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub family: Vec<SetRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<BTreeMap<String, serde_json::Value>>,
}

impl InstanceFile {
    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            elements: self
                .elements
                .iter()
                .map(|e| Element::new(e.id.clone(), e.cost, e.profit))
                .collect(),
            family: self
                .family
                .iter()
                .map(|s| RawSet {
                    name: s.name.clone(),
                    members: s.members.clone(),
                    capacity: s.capacity,
                })
                .collect(),
            budget: self.budget,
        }
    }

    pub fn from_instance(instance: &LaminarInstance) -> Self {
        let raw = instance.to_raw();
        Self {
            budget: raw.budget,
            elements: raw
                .elements
                .into_iter()
                .map(|e| ElementRecord {
                    id: e.id,
                    cost: e.cost,
                    profit: e.profit,
                })
                .collect(),
            family: raw
                .family
                .into_iter()
                .map(|s| SetRecord {
                    name: s.name,
                    members: s.members,
                    capacity: s.capacity,
                })
                .collect(),
            metadata: None,
        }
    }

    pub fn into_instance(&self) -> Result<LaminarInstance, ValidationReport> {
        LaminarInstance::new(self.to_raw())
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("instance files serialize");
        text.push('\n');
        text
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid instance:\n{0}")]
    Invalid(ValidationReport),
}

pub fn parse_file(text: &str) -> Result<InstanceFile, ParseError> {
    serde_json::from_str(text).map_err(|err| {
        let (line, column) = (err.line(), err.column());
        // serde_json appends the position to its message
        let message = err.to_string();
        let message = message
            .rsplit_once(" at line ")
            .map_or(message.clone(), |(m, _)| m.to_string());
        match err.classify() {
            serde_json::error::Category::Data => ParseError::Schema {
                line,
                column,
                message,
            },
            _ => ParseError::Syntax {
                line,
                column,
                message,
            },
        }
    })
}

/// Parses, canonicalizes and validates an instance file.
pub fn parse_instance(text: &str) -> Result<LaminarInstance, ParseError> {
    parse_file(text)?
        .into_instance()
        .map_err(ParseError::Invalid)
}

pub fn serialize_instance(instance: &LaminarInstance) -> String {
    InstanceFile::from_instance(instance).to_json()
}

/// Everything one solver run reports. Profits and costs are in the units of
/// the input instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub mode: String,
    pub solution: Vec<String>,
    pub profit: u64,
    pub cost: u64,
    pub budget: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounded_profit: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    pub table_rows: usize,
    pub table_columns: u64,
    pub table_cells: usize,
    pub recursive_calls: usize,
    pub wall_ms: f64,
}

impl SolveReport {
    pub fn from_answer(
        mode: &str,
        instance: &LaminarInstance,
        answer: &Approximation,
        epsilon: Option<String>,
        wall_ms: f64,
    ) -> Self {
        Self {
            mode: mode.to_string(),
            solution: answer
                .solution
                .ids(instance)
                .into_iter()
                .map(str::to_string)
                .collect(),
            profit: answer.solution.profit,
            cost: answer.solution.cost,
            budget: instance.budget(),
            rounded_profit: answer.rounded_profit,
            epsilon,
            alpha: answer.rounding.as_ref().map(|r| r.alpha_string()),
            table_rows: answer.stats.root_rows,
            table_columns: answer.stats.profit_axis_len,
            table_cells: answer.stats.table_cells,
            recursive_calls: answer.stats.recursive_calls,
            wall_ms,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let line = |out: &mut String, key: &str, value: String| {
            out.push_str(&format!("{key:<16}{value}\n"));
        };
        line(&mut out, "mode", self.mode.clone());
        line(
            &mut out,
            "solution",
            format!("{{{}}}", self.solution.join(", ")),
        );
        line(&mut out, "profit", self.profit.to_string());
        line(&mut out, "cost", format!("{} / {}", self.cost, self.budget));
        if let Some(p) = self.rounded_profit {
            line(&mut out, "rounded profit", p.to_string());
        }
        if let Some(e) = &self.epsilon {
            line(&mut out, "epsilon", e.clone());
        }
        if let Some(a) = &self.alpha {
            line(&mut out, "alpha", a.clone());
        }
        line(
            &mut out,
            "root table",
            format!("{} x {}", self.table_rows, self.table_columns),
        );
        line(&mut out, "table cells", self.table_cells.to_string());
        line(&mut out, "calls", self.recursive_calls.to_string());
        line(&mut out, "wall ms", format!("{:.3}", self.wall_ms));
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }
}
