//! Depth-first branch and bound over offsets `0, 1, 2, ...`.
//!
//! At depth `d` the next free offset is `d` and every unplaced variable will
//! land at `d` or later. A placed variable `u` at offset `o` and an unplaced
//! neighbour therefore contribute at least `w * (d - o)`, and two unplaced
//! neighbours at least `w`. Adding both to the exact cost among placed
//! variables gives an admissible bound that is updated in O(degree) per
//! move.

use std::time::{Duration, Instant};

use super::{ExactResult, Status};
use crate::heuristics::{chen, chen_tb, mwpc_greedy, shifts_reduce};
use crate::model::{AccessGraph, Placement};

const CLOCK_CHECK_INTERVAL: u64 = 4096;

/// Exact search seeded with the best heuristic placement. Without a budget
/// the search always completes and the status is [`Status::Optimal`].
pub fn branch_and_bound(graph: &AccessGraph, budget: Option<Duration>) -> ExactResult {
    let n = graph.num_vertices();
    if n == 0 {
        return ExactResult {
            placement: Placement::identity(0),
            cost: 0,
            status: Status::InfeasibleInput,
            explored: 0,
        };
    }

    let (incumbent, incumbent_cost) = [chen(graph), chen_tb(graph), shifts_reduce(graph), mwpc_greedy(graph)]
        .into_iter()
        .map(|p| {
            let c = graph.cost_of_offsets(p.offsets());
            (p, c)
        })
        .min_by_key(|(_, c)| *c)
        .unwrap();

    if budget == Some(Duration::ZERO) {
        return ExactResult {
            placement: incumbent,
            cost: incumbent_cost,
            status: Status::BestFound,
            explored: 0,
        };
    }

    let mut candidates: Vec<usize> = (0..n).collect();
    candidates.sort_by(|&a, &b| {
        graph.vertex_weights()[b]
            .cmp(&graph.vertex_weights()[a])
            .then(a.cmp(&b))
    });

    let mut search = Search {
        graph,
        anchor: candidates[0],
        candidates,
        placed: vec![false; n],
        offsets: vec![0; n],
        pull: vec![0; n],
        pull_pos: vec![0; n],
        frontier: 0,
        frontier_pos: 0,
        free_weight: graph.total_weight(),
        cost: 0,
        best_cost: incumbent_cost,
        best: None,
        explored: 0,
        deadline: budget.map(|b| Instant::now() + b),
        timed_out: false,
    };
    search.descend(0);

    let status = if search.timed_out {
        Status::BestFound
    } else {
        Status::Optimal
    };
    let (placement, cost) = match search.best {
        Some(offsets) => (
            Placement::from_offsets(offsets).expect("search assigns distinct offsets"),
            search.best_cost,
        ),
        None => (incumbent, incumbent_cost),
    };
    ExactResult {
        placement,
        cost,
        status,
        explored: search.explored,
    }
}

struct Search<'g> {
    graph: &'g AccessGraph,
    candidates: Vec<usize>,
    /// Kept in the lower half of the track to skip mirror images.
    anchor: usize,
    placed: Vec<bool>,
    offsets: Vec<usize>,
    /// Edge weight from each variable to the placed ones.
    pull: Vec<u64>,
    /// Same, weighted by the placed neighbour's offset.
    pull_pos: Vec<u64>,
    /// Sums of `pull` and `pull_pos` over unplaced variables.
    frontier: u64,
    frontier_pos: u64,
    /// Total weight of edges between unplaced variables.
    free_weight: u64,
    cost: u64,
    best_cost: u64,
    best: Option<Vec<usize>>,
    explored: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize) {
        let n = self.graph.num_vertices();
        if depth == n {
            if self.cost < self.best_cost {
                self.best_cost = self.cost;
                self.best = Some(self.offsets.clone());
            }
            return;
        }
        if !self.placed[self.anchor] && depth > (n - 1) / 2 {
            return;
        }

        for i in 0..self.candidates.len() {
            let v = self.candidates[i];
            if self.placed[v] {
                continue;
            }
            self.explored += 1;
            if self.explored.is_multiple_of(CLOCK_CHECK_INTERVAL) {
                if let Some(deadline) = self.deadline {
                    if Instant::now() >= deadline {
                        self.timed_out = true;
                    }
                }
            }
            if self.timed_out {
                return;
            }

            self.place(v, depth);
            let next = depth as u64 + 1;
            let bound = self.cost + next * self.frontier - self.frontier_pos + self.free_weight;
            if bound < self.best_cost {
                self.descend(depth + 1);
            }
            self.unplace(v, depth);
            if self.timed_out {
                return;
            }
        }
    }

    fn place(&mut self, v: usize, offset: usize) {
        let d = offset as u64;
        self.cost += d * self.pull[v] - self.pull_pos[v];
        self.frontier -= self.pull[v];
        self.frontier_pos -= self.pull_pos[v];
        self.free_weight -= self.graph.vertex_weights()[v] - self.pull[v];
        self.placed[v] = true;
        self.offsets[v] = offset;
        for &(u, w) in self.graph.neighbors(v) {
            self.pull[u] += w;
            self.pull_pos[u] += w * d;
            if !self.placed[u] {
                self.frontier += w;
                self.frontier_pos += w * d;
            }
        }
    }

    fn unplace(&mut self, v: usize, offset: usize) {
        let d = offset as u64;
        for &(u, w) in self.graph.neighbors(v) {
            self.pull[u] -= w;
            self.pull_pos[u] -= w * d;
            if !self.placed[u] {
                self.frontier -= w;
                self.frontier_pos -= w * d;
            }
        }
        self.placed[v] = false;
        self.free_weight += self.graph.vertex_weights()[v] - self.pull[v];
        self.frontier += self.pull[v];
        self.frontier_pos += self.pull_pos[v];
        self.cost -= d * self.pull[v] - self.pull_pos[v];
    }
}
