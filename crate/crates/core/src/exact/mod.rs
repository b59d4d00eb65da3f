//! Exact placement: exhaustive search, branch and bound, and the integer
//! linear program for external MILP solvers.

mod bnb;
mod brute_force;
mod ilp;

pub use bnb::branch_and_bound;
pub use brute_force::{brute_force_exhaustive, brute_force_optimal, DEFAULT_MAX_N};
pub use ilp::{build_ilp, export_lp, Family, IlpModel, IlpSolution, IlpVar, Row, Sense, VarKind};

use crate::model::Placement;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// The returned cost is the global minimum.
    Optimal,
    /// Search stopped early; the placement is the best one seen.
    BestFound,
    /// Nothing to place.
    InfeasibleInput,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::BestFound => "best-found",
            Status::InfeasibleInput => "infeasible-input",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactResult {
    pub placement: Placement,
    pub cost: u64,
    pub status: Status,
    /// Permutations (exhaustive search) or search nodes (branch and bound)
    /// visited.
    pub explored: u64,
}
