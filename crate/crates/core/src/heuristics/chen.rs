use super::tie_break::resolve;
use super::{absorb, finish, split_isolated, Pool};
use crate::model::{AccessGraph, Placement};

/// Single-group heuristic: seed with the heaviest vertex, then keep appending
/// the vertex with the largest adjacency to the group built so far.
pub fn chen(graph: &AccessGraph) -> Placement {
    let (active, isolated) = split_isolated(graph);
    finish(chen_order(graph, &active), isolated)
}

pub(super) fn chen_order(graph: &AccessGraph, active: &[usize]) -> Vec<usize> {
    let mut pool = Pool::new(graph.num_vertices(), active);
    let mut alpha = vec![0u64; graph.num_vertices()];
    let mut group = Vec::with_capacity(active.len());

    let Some(seed) = pool.argmax(|v| graph.vertex_weights()[v]) else {
        return group;
    };
    pool.take(seed);
    absorb(graph, &mut alpha, seed);
    group.push(seed);

    while let Some(next) = pool.argmax(|v| alpha[v]) {
        pool.take(next);
        absorb(graph, &mut alpha, next);
        group.push(next);
    }
    group
}

/// Which branches fired during a Chen-TB run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChenTbTrace {
    /// The first two seeds were swapped.
    pub initial_swap: bool,
    /// Tie-break calls that found equal adjacency.
    pub ties: usize,
    /// Tie-break calls that reordered the two outermost elements.
    pub tie_swaps: usize,
}

/// Chen's heuristic with seed reordering and intra-group tie-breaking.
pub fn chen_tb(graph: &AccessGraph) -> Placement {
    chen_tb_traced(graph).0
}

pub fn chen_tb_traced(graph: &AccessGraph) -> (Placement, ChenTbTrace) {
    let (active, isolated) = split_isolated(graph);
    let mut trace = ChenTbTrace::default();
    if active.len() < 3 {
        return (finish(chen_order(graph, &active), isolated), trace);
    }

    let mut pool = Pool::new(graph.num_vertices(), &active);
    let mut alpha = vec![0u64; graph.num_vertices()];
    let mut group = Vec::with_capacity(active.len());
    let place = |v: usize, pool: &mut Pool, alpha: &mut Vec<u64>, group: &mut Vec<usize>| {
        pool.take(v);
        absorb(graph, alpha, v);
        group.push(v);
    };

    let v0 = pool.argmax(|v| graph.vertex_weights()[v]).unwrap();
    place(v0, &mut pool, &mut alpha, &mut group);
    let v1 = pool.argmax(|v| alpha[v]).unwrap();
    place(v1, &mut pool, &mut alpha, &mut group);
    let v2 = pool.argmax(|v| alpha[v]).unwrap();
    place(v2, &mut pool, &mut alpha, &mut group);

    let mut fixed = if graph.w(v0, v2) > graph.w(v1, v2) {
        group.swap(0, 1);
        trace.initial_swap = true;
        v0
    } else {
        v1
    };

    while let Some(next) = pool.argmax(|v| alpha[v]) {
        let last = *group.last().unwrap();
        place(next, &mut pool, &mut alpha, &mut group);
        let r = resolve(graph, next, last, fixed, &mut group);
        fixed = r.fixed;
        trace.ties += r.tied as usize;
        trace.tie_swaps += r.swapped as usize;
    }

    (finish(group, isolated), trace)
}
