//! Greedy maximum-weight path cover, the classic offset-assignment baseline.
//!
//! Edges are scanned by decreasing weight (ties by endpoint indices) and kept
//! when both endpoints still have path degree below two and the edge does not
//! close a cycle. The resulting paths, isolated vertices included, are laid
//! out one after another ordered by their smallest member; each path is
//! walked starting from its lower-indexed endpoint.

use crate::model::{AccessGraph, Placement, VarId};

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Edges accepted into the path cover, in acceptance order.
pub(crate) fn cover_edges(graph: &AccessGraph) -> Vec<(usize, usize)> {
    let n = graph.num_vertices();
    let mut edges = graph.edges().to_vec();
    edges.sort_by(|a, b| b.weight.cmp(&a.weight).then((a.u, a.v).cmp(&(b.u, b.v))));

    let mut degree = vec![0u8; n];
    let mut sets = DisjointSets::new(n);
    let mut accepted = Vec::new();
    for e in edges {
        if degree[e.u] < 2 && degree[e.v] < 2 && sets.union(e.u, e.v) {
            degree[e.u] += 1;
            degree[e.v] += 1;
            accepted.push((e.u, e.v));
        }
    }
    accepted
}

pub fn mwpc_greedy(graph: &AccessGraph) -> Placement {
    let n = graph.num_vertices();
    let mut links: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, v) in cover_edges(graph) {
        links[u].push(v);
        links[v].push(u);
    }

    // Every path is entered once, from its endpoint with the lower index,
    // which is found by scanning vertices in index order. Paths are then
    // sorted by their minimum member.
    let mut visited = vec![false; n];
    let mut paths: Vec<(usize, Vec<usize>)> = Vec::new();
    for start in 0..n {
        if visited[start] || links[start].len() > 1 {
            continue;
        }
        let mut path = vec![start];
        visited[start] = true;
        let (mut prev, mut cur) = (usize::MAX, start);
        while let Some(&next) = links[cur].iter().find(|&&x| x != prev) {
            visited[next] = true;
            path.push(next);
            prev = cur;
            cur = next;
        }
        let min = *path.iter().min().unwrap();
        paths.push((min, path));
    }
    paths.sort_by_key(|(min, _)| *min);

    let order: Vec<VarId> = paths
        .into_iter()
        .flat_map(|(_, p)| p)
        .map(VarId::new)
        .collect();
    Placement::from_order(&order).expect("path cover spans every vertex")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_becomes_single_path() {
        // a-b(4), a-c(1)
        let g = AccessGraph::from_edges(3, &[(0, 1, 4), (0, 2, 1)]).unwrap();
        let p = mwpc_greedy(&g);
        assert_eq!(p.offsets(), &[1, 0, 2]);
        assert_eq!(g.cost_of_offsets(p.offsets()), 5);
    }

    #[test]
    fn single_vertex() {
        let g = AccessGraph::from_edges(1, &[]).unwrap();
        assert_eq!(mwpc_greedy(&g).offsets(), &[0]);
    }

    #[test]
    fn triangle_rejects_cycle_edge() {
        let g = AccessGraph::from_edges(3, &[(0, 1, 2), (1, 2, 2), (0, 2, 2)]).unwrap();
        assert_eq!(cover_edges(&g), vec![(0, 1), (0, 2)]);
        assert_eq!(mwpc_greedy(&g).order(), [1, 0, 2].map(VarId::new).as_slice());
    }

    #[test]
    fn degree_limit_and_path_concatenation() {
        // star centred on 0 with four leaves: only two leaves attach
        let g = AccessGraph::from_edges(5, &[(0, 1, 5), (0, 2, 4), (0, 3, 3), (0, 4, 2)]).unwrap();
        assert_eq!(cover_edges(&g), vec![(0, 1), (0, 2)]);
        // paths: [1, 0, 2] (min 0), [3], [4]
        assert_eq!(mwpc_greedy(&g).order(), [1, 0, 2, 3, 4].map(VarId::new).as_slice());
    }
}
