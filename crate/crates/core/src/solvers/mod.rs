//! Colorings and independent sets: exact search, randomized heuristics, and
//! a properness checker.

mod chromatic;
mod coloring;
mod independence;

pub use chromatic::exact_chromatic_number;
pub use coloring::{
    ceil_kth_root, greedy_coloring, split_coloring, verify_coloring, Coloring, ColoringCheck, SplitColoring,
};
pub use independence::{exact_independence_number, greedy_independent_set};

use serde::{Deserialize, Serialize};

/// Default node budget for the exact solvers.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    IndependentSet { vertices: Vec<u32> },
    Coloring(Coloring),
}

/// Outcome of an exact search. When `exact` is false the node budget ran
/// out: for independence `value` is the largest set found, for coloring it
/// is the size of the best coloring known and `lower_bound` holds what the
/// search ruled out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub value: usize,
    pub exact: bool,
    pub lower_bound: usize,
    pub nodes_explored: u64,
    pub budget: u64,
    pub certificate: Certificate,
}

impl SolveResult {
    pub fn budget_exhausted(&self) -> bool {
        !self.exact
    }

    pub fn independent_set(&self) -> Option<&[u32]> {
        match &self.certificate {
            Certificate::IndependentSet { vertices } => Some(vertices),
            Certificate::Coloring(_) => None,
        }
    }

    pub fn coloring(&self) -> Option<&Coloring> {
        match &self.certificate {
            Certificate::Coloring(c) => Some(c),
            Certificate::IndependentSet { .. } => None,
        }
    }
}
