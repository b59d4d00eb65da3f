//! Placement heuristics.
//!
//! All heuristics are deterministic. Whenever an argmax has several winners
//! the lowest variable index is taken. Vertices without any incident edge
//! cannot influence the cost, so the group-based heuristics run on the
//! connected vertices only and append the isolated ones at the end in index
//! order.

mod chen;
mod mwpc;
mod ofu;
mod shifts_reduce;
mod tie_break;

pub use chen::{chen, chen_tb, chen_tb_traced, ChenTbTrace};
pub use mwpc::mwpc_greedy;
pub use ofu::ofu;
pub use shifts_reduce::{shifts_reduce, Grouping};
pub use tie_break::{tie_break, TieBreak};

use crate::error::{Error, Result};
use crate::model::{AccessGraph, Placement, VarId};

/// Vertex-to-group weight: total edge weight between `v` and the members of
/// `group`.
pub fn vertex_to_group_weight(graph: &AccessGraph, v: VarId, group: &[VarId]) -> Result<u64> {
    if group.contains(&v) {
        return Err(Error::domain(format!("{v} is already a member of the group")));
    }
    Ok(group.iter().map(|&u| graph.weight(u, v)).sum())
}

/// Assigns offset `i` to `order[i]`.
pub fn assign_offsets(order: &[VarId]) -> Result<Placement> {
    Placement::from_order(order)
}

/// Unplaced vertices plus incrementally maintained adjacency to one group.
struct Pool {
    remaining: Vec<bool>,
    left: usize,
}

impl Pool {
    fn new(n: usize, members: &[usize]) -> Self {
        let mut remaining = vec![false; n];
        for &v in members {
            remaining[v] = true;
        }
        Pool {
            remaining,
            left: members.len(),
        }
    }

    fn is_empty(&self) -> bool {
        self.left == 0
    }

    fn take(&mut self, v: usize) {
        debug_assert!(self.remaining[v]);
        self.remaining[v] = false;
        self.left -= 1;
    }

    /// Remaining vertex maximising `score`, lowest index on ties.
    fn argmax(&self, score: impl Fn(usize) -> u64) -> Option<usize> {
        let mut best: Option<(usize, u64)> = None;
        for (v, _) in self.remaining.iter().enumerate().filter(|(_, &r)| r) {
            let s = score(v);
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((v, s));
            }
        }
        best.map(|(v, _)| v)
    }
}

/// Adds `v`'s edge weights into an α accumulator.
fn absorb(graph: &AccessGraph, alpha: &mut [u64], v: usize) {
    for &(u, w) in graph.neighbors(v) {
        alpha[u] += w;
    }
}

/// Splits vertices into those with at least one edge and isolated ones.
fn split_isolated(graph: &AccessGraph) -> (Vec<usize>, Vec<usize>) {
    (0..graph.num_vertices()).partition(|&v| graph.vertex_weights()[v] > 0)
}

fn finish(mut order: Vec<usize>, isolated: Vec<usize>) -> Placement {
    order.extend(isolated);
    let order: Vec<VarId> = order.into_iter().map(VarId::new).collect();
    Placement::from_order(&order).expect("heuristic produced a permutation")
}
