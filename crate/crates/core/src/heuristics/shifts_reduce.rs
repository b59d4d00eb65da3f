//! Two-sided group expansion.
//!
//! The heaviest vertex sits at index 0 shared by a left and a right group.
//! Each further vertex is picked by its adjacency to both groups together
//! (global adjacency) and attached to whichever side it is more adjacent to
//! (local adjacency). Sides therefore grow outwards, and the weakly connected
//! vertices drift to the far ends.

use super::chen::chen_order;
use super::tie_break::resolve;
use super::{absorb, finish, split_isolated, Pool};
use crate::model::{AccessGraph, Placement, VarId};

/// Final state of the two groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grouping {
    /// Left group from its outer end to the shared centre, inclusive.
    pub left: Vec<VarId>,
    /// Right group from the shared centre, inclusive, to its outer end.
    pub right: Vec<VarId>,
    pub fixed_left: VarId,
    pub fixed_right: VarId,
    pub last_left: VarId,
    pub last_right: VarId,
}

impl Grouping {
    /// Left group followed by the right group without the shared centre.
    pub fn merged(&self) -> Vec<VarId> {
        self.left
            .iter()
            .chain(self.right.iter().skip(1))
            .copied()
            .collect()
    }
}

pub fn shifts_reduce(graph: &AccessGraph) -> Placement {
    let (active, isolated) = split_isolated(graph);
    match grouping(graph, &active) {
        Some(groups) => finish(
            groups.merged().into_iter().map(VarId::index).collect(),
            isolated,
        ),
        None => finish(chen_order(graph, &active), isolated),
    }
}

impl Grouping {
    /// Runs the group expansion. `None` when fewer than three vertices have
    /// an incident edge.
    pub fn build(graph: &AccessGraph) -> Option<Grouping> {
        grouping(graph, &split_isolated(graph).0)
    }
}

fn grouping(graph: &AccessGraph, active: &[usize]) -> Option<Grouping> {
    if active.len() < 3 {
        return None;
    }
    let n = graph.num_vertices();
    let mut pool = Pool::new(n, active);
    let mut alpha_left = vec![0u64; n];
    let mut alpha_right = vec![0u64; n];
    // Both sides store their outer end last, so prepending to the left
    // group is a push.
    let mut left = Vec::new();
    let mut right = Vec::new();

    let centre = pool.argmax(|v| graph.vertex_weights()[v])?;
    pool.take(centre);
    left.push(centre);
    right.push(centre);
    absorb(graph, &mut alpha_left, centre);
    absorb(graph, &mut alpha_right, centre);

    let mut last_right = pool.argmax(|v| alpha_right[v])?;
    pool.take(last_right);
    right.push(last_right);
    absorb(graph, &mut alpha_right, last_right);

    // Adjacency to the right group minus the vertex just added, i.e. to the
    // centre alone.
    let mut last_left = pool.argmax(|v| graph.w(v, centre))?;
    pool.take(last_left);
    left.push(last_left);
    absorb(graph, &mut alpha_left, last_left);

    let mut fixed_left = centre;
    let mut fixed_right = centre;

    while !pool.is_empty() {
        let next = pool
            .argmax(|v| alpha_left[v] + alpha_right[v] - graph.w(v, centre))
            .unwrap();
        pool.take(next);

        let go_left = match alpha_left[next].cmp(&alpha_right[next]) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => graph.w(next, last_left) > graph.w(next, last_right),
        };

        if go_left {
            left.push(next);
            absorb(graph, &mut alpha_left, next);
            let r = resolve(graph, next, last_left, fixed_left, &mut left);
            last_left = r.last;
            fixed_left = r.fixed;
        } else {
            right.push(next);
            absorb(graph, &mut alpha_right, next);
            let r = resolve(graph, next, last_right, fixed_right, &mut right);
            last_right = r.last;
            fixed_right = r.fixed;
        }
    }

    left.reverse();
    let ids = |v: Vec<usize>| v.into_iter().map(VarId::new).collect::<Vec<_>>();
    Some(Grouping {
        left: ids(left),
        right: ids(right),
        fixed_left: VarId::new(fixed_left),
        fixed_right: VarId::new(fixed_right),
        last_left: VarId::new(last_left),
        last_right: VarId::new(last_right),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heuristics::ofu;
    use crate::model::AccessSequence;

    #[test]
    fn worked_example_grouping() {
        let s = AccessSequence::intern(&["a", "b", "a", "b", "a", "c"]).unwrap();
        let g = AccessGraph::from_sequence(&s);
        let groups = Grouping::build(&g).unwrap();
        let (a, b, c) = (VarId::new(0), VarId::new(1), VarId::new(2));
        assert_eq!(groups.left, vec![c, a]);
        assert_eq!(groups.right, vec![a, b]);
        assert_eq!(groups.merged(), vec![c, a, b]);

        let p = shifts_reduce(&g);
        assert_eq!(p.offsets(), &[1, 2, 0]);
        assert_eq!(g.cost_of_offsets(p.offsets()), 5);
    }

    #[test]
    fn path_walk_is_laid_out_contiguously() {
        for n in 3..=7 {
            let walk: Vec<usize> = (0..n).collect();
            let s = AccessSequence::from_indices(n, &walk).unwrap();
            let g = AccessGraph::from_sequence(&s);
            let sr = g.cost_of_offsets(shifts_reduce(&g).offsets());
            let base = g.cost_of_offsets(ofu(&s).offsets());
            assert_eq!(base, n as u64 - 1);
            // every edge costs at least one shift, so n - 1 is optimal
            assert_eq!(sr, base);
        }
    }

    #[test]
    fn small_instances_fall_back_to_chen() {
        let g = AccessGraph::from_edges(4, &[(1, 3, 2)]).unwrap();
        assert!(Grouping::build(&g).is_none());
        assert_eq!(shifts_reduce(&g), crate::heuristics::chen(&g));
    }
}
