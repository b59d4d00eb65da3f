//! Shift-minimizing data placement for single-port racetrack memories.
//!
//! Variables accessed through one domain block cluster are assigned distinct
//! offsets so that consecutive accesses land close to each other and the
//! track needs few shift operations. The crate provides the cost model,
//! constructive heuristics, exact solvers (exhaustive search, branch and
//! bound, and an ILP model exporter), a genetic refinement stage, and a
//! benchmark harness over trace files.

pub mod error;
pub mod exact;
pub mod genetic;
pub mod harness;
pub mod heuristics;
pub mod model;

pub use error::{Error, Result};
pub use model::{
    total_cost, total_cost_via_graph, AccessGraph, AccessSequence, DbcConfig, Placement, VarId,
    VariableSet,
};
