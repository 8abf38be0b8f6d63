//! Solvers for the budgeted laminar matroid independent set problem: pick a
//! maximum-profit set of elements whose total cost fits a budget and which
//! respects a cardinality cap on every set of a laminar family.
//!
//! * [`dp`] computes the exact `(cardinality, profit) → min cost` table by
//!   recursing over the laminar family, in pseudo-polynomial time.
//! * [`fptas`] rounds profits and reuses the exact table to get a
//!   `(1 − ε)`-approximation in time polynomial in the input and `1/ε`.
//! * [`oracle`] is the brute-force reference used to check both.

pub mod bench;
pub mod cli;
pub mod dp;
pub mod fptas;
pub mod generate;
pub mod io;
pub mod matroid;
pub mod oracle;
pub mod table;

pub use dp::{
    backtrack, best_feasible, compute_dp, compute_dp_with, DecompositionNode, NodeKind, PivotRule,
    Solution,
};
pub use fptas::{solve, solve_exact, Approximation, Epsilon};
pub use matroid::{validate_laminar, Element, FamilySet, LaminarInstance, RawInstance, RawSet};
pub use table::{convolve, singleton_table, CostValue, DpTable};
