use super::{ExactResult, Status};
use crate::error::{Error, Result};
use crate::model::{total_cost_via_graph, AccessGraph, Placement};

pub const DEFAULT_MAX_N: usize = 10;

/// Enumerates every offset vector with variable 0 in the lower half of the
/// track. Mirroring a placement preserves its cost, so this still reaches
/// the optimum. Among optimal placements the lexicographically smallest
/// offset vector is returned.
pub fn brute_force_optimal(graph: &AccessGraph, max_n: usize) -> Result<ExactResult> {
    enumerate(graph, max_n, true)
}

/// Same as [`brute_force_optimal`] without the mirror pruning.
pub fn brute_force_exhaustive(graph: &AccessGraph, max_n: usize) -> Result<ExactResult> {
    enumerate(graph, max_n, false)
}

fn enumerate(graph: &AccessGraph, max_n: usize, prune_mirror: bool) -> Result<ExactResult> {
    let n = graph.num_vertices();
    if n > max_n {
        return Err(Error::Capacity { n, max: max_n });
    }
    let first_limit = if prune_mirror && n > 0 { (n - 1) / 2 } else { usize::MAX };

    let mut offsets: Vec<usize> = (0..n).collect();
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut explored = 0u64;
    loop {
        if n > 0 && offsets[0] > first_limit {
            break;
        }
        explored += 1;
        let placement = Placement::from_offsets(offsets.clone())?;
        let cost = total_cost_via_graph(&placement, graph)?;
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, offsets.clone()));
        }
        if !next_permutation(&mut offsets) {
            break;
        }
    }

    let (cost, offsets) = best.unwrap_or((0, Vec::new()));
    Ok(ExactResult {
        placement: Placement::from_offsets(offsets)?,
        cost,
        status: Status::Optimal,
        explored,
    })
}

/// Advances to the next lexicographic permutation; false after the last.
fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let Some(i) = (0..xs.len() - 1).rev().find(|&i| xs[i] < xs[i + 1]) else {
        return false;
    };
    let j = (i + 1..xs.len()).rev().find(|&j| xs[j] > xs[i]).unwrap();
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}
