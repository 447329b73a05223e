//! Nearly disjoint clique systems: constructions over finite fields, the
//! random greedy linear packing process, exact and randomized coloring and
//! independence solvers, and cap census in affine planes.

pub mod algebra;
pub mod audit;
mod bitset;
pub mod caps;
pub mod constructions;
pub mod error;
pub mod hypergraph;
pub mod io;
pub mod process;
pub mod rng;
pub mod solvers;

pub use algebra::{interpolate, FiniteField, Polynomial};
pub use caps::{CapReport, CapTrace, MixingCheck};
pub use constructions::{IncidencePlane, RestrictionResult};
pub use error::{Error, Result};
pub use hypergraph::{CliqueSystem, DegreeReport, KGraph, Provenance};
pub use process::{ProcessStats, ProcessTrace, StopReason};
pub use solvers::{Coloring, SolveResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
