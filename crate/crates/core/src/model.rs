//! Sequences, access graphs, placements and the two shift-cost evaluators.
//!
//! A placement assigns every variable a distinct offset `0..n` inside one
//! domain block cluster. Moving the access port from offset `i` to offset `j`
//! costs `|i - j|` shifts, and the cost of a sequence is the sum over all
//! adjacent accesses. The same number can be computed from the access graph
//! as `sum over u < v of w(u, v) * |offset(u) - offset(v)|`; both routes are
//! kept and cross-checked everywhere.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Dense 0-based index of an interned variable.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(usize);

impl VarId {
    pub const fn new(index: usize) -> Self {
        VarId(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Interning table mapping identifier strings to contiguous [`VarId`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariableSet {
    names: Vec<String>,
    lookup: HashMap<String, VarId>,
}

impl VariableSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from declared names, in declaration order. Duplicates
    /// are rejected.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut set = Self::new();
        for name in names {
            let name = name.as_ref();
            if set.get(name).is_some() {
                return Err(Error::domain(format!("duplicate variable `{name}`")));
            }
            set.intern(name)?;
        }
        Ok(set)
    }

    /// Returns the id of `name`, allocating the next index on first sight.
    pub fn intern(&mut self, name: &str) -> Result<VarId> {
        if name.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "empty identifier".into(),
            });
        }
        if let Some(&id) = self.lookup.get(name) {
            return Ok(id);
        }
        let id = VarId(self.names.len());
        self.names.push(name.to_owned());
        self.lookup.insert(name.to_owned(), id);
        Ok(id)
    }

    pub fn get(&self, name: &str) -> Option<VarId> {
        self.lookup.get(name).copied()
    }

    pub fn name(&self, id: VarId) -> Option<&str> {
        self.names.get(id.0).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.names.len()).map(VarId)
    }
}

/// An ordered trace of variable references over its own variable set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessSequence {
    vars: VariableSet,
    accesses: Vec<VarId>,
}

impl AccessSequence {
    /// Interns raw identifiers, numbering variables by first occurrence.
    pub fn intern<S: AsRef<str>>(raw: &[S]) -> Result<Self> {
        Self::with_declared(VariableSet::new(), raw)
    }

    /// Like [`AccessSequence::intern`] but starts from a declared variable
    /// set. Identifiers not in `declared` are appended to it.
    pub fn with_declared<S: AsRef<str>>(declared: VariableSet, raw: &[S]) -> Result<Self> {
        let mut vars = declared;
        let accesses = raw
            .iter()
            .map(|tok| vars.intern(tok.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(AccessSequence { vars, accesses })
    }

    /// Builds a sequence over `n` anonymous variables named `v0..v{n-1}`.
    pub fn from_indices(n: usize, accesses: &[usize]) -> Result<Self> {
        if let Some(&bad) = accesses.iter().find(|&&a| a >= n) {
            return Err(Error::domain(format!(
                "access to variable {bad} outside 0..{n}"
            )));
        }
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let vars = VariableSet::from_names(&names)?;
        Ok(AccessSequence {
            vars,
            accesses: accesses.iter().map(|&a| VarId(a)).collect(),
        })
    }

    pub fn variables(&self) -> &VariableSet {
        &self.vars
    }

    pub fn accesses(&self) -> &[VarId] {
        &self.accesses
    }

    /// Sequence length `m`.
    pub fn len(&self) -> usize {
        self.accesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accesses.is_empty()
    }

    /// Variable count `n`.
    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// Number of adjacent positions referencing the same variable twice.
    pub fn immediate_repeats(&self) -> usize {
        self.accesses.windows(2).filter(|w| w[0] == w[1]).count()
    }
}

/// One undirected edge with `u < v`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: u64,
}

/// Undirected weighted access graph.
///
/// `weight(u, v)` counts how often `u` and `v` are accessed back to back.
/// Edges are kept both as a dense matrix (for constant-time lookups in the
/// heuristics) and as a sorted edge list (for cost evaluation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessGraph {
    n: usize,
    weights: Vec<u64>,
    vertex_weights: Vec<u64>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, u64)>>,
}

impl AccessGraph {
    pub fn from_sequence(seq: &AccessSequence) -> Self {
        let n = seq.num_vars();
        let mut weights = vec![0u64; n * n];
        for pair in seq.accesses().windows(2) {
            let (a, b) = (pair[0].0, pair[1].0);
            if a != b {
                weights[a * n + b] += 1;
                weights[b * n + a] += 1;
            }
        }
        Self::from_dense(n, weights)
    }

    /// Builds a graph from `(u, v, w)` triples; repeated pairs accumulate.
    pub fn from_edges(n: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        let mut weights = vec![0u64; n * n];
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::domain(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop on vertex {u}")));
            }
            weights[u * n + v] += w;
            weights[v * n + u] += w;
        }
        Ok(Self::from_dense(n, weights))
    }

    fn from_dense(n: usize, weights: Vec<u64>) -> Self {
        let mut vertex_weights = vec![0u64; n];
        let mut edges = Vec::new();
        let mut adjacency = vec![Vec::new(); n];
        for u in 0..n {
            for v in 0..n {
                let w = weights[u * n + v];
                if w == 0 {
                    continue;
                }
                vertex_weights[u] += w;
                adjacency[u].push((v, w));
                if u < v {
                    edges.push(Edge { u, v, weight: w });
                }
            }
        }
        AccessGraph {
            n,
            weights,
            vertex_weights,
            edges,
            adjacency,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn weight(&self, u: VarId, v: VarId) -> u64 {
        self.weights[u.0 * self.n + v.0]
    }

    pub(crate) fn w(&self, u: usize, v: usize) -> u64 {
        self.weights[u * self.n + v]
    }

    pub fn vertex_weight(&self, v: VarId) -> u64 {
        self.vertex_weights[v.0]
    }

    pub fn vertex_weights(&self) -> &[u64] {
        &self.vertex_weights
    }

    /// Non-zero edges with `u < v`, sorted by `(u, v)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Non-zero neighbours of `v` in ascending index order.
    pub fn neighbors(&self, v: usize) -> &[(usize, u64)] {
        &self.adjacency[v]
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Graph cost of an offsets vector, unchecked. `offsets` must have one
    /// entry per vertex.
    pub(crate) fn cost_of_offsets(&self, offsets: &[usize]) -> u64 {
        self.edges
            .iter()
            .map(|e| e.weight * offsets[e.u].abs_diff(offsets[e.v]) as u64)
            .sum()
    }
}

/// Bijection from variables to offsets `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    offsets: Vec<usize>,
    order: Vec<VarId>,
}

impl Placement {
    /// `offsets[i]` is the offset of variable `i`.
    pub fn from_offsets(offsets: Vec<usize>) -> Result<Self> {
        let n = offsets.len();
        let mut order = vec![None; n];
        for (var, &off) in offsets.iter().enumerate() {
            match order.get_mut(off) {
                Some(slot @ None) => *slot = Some(VarId(var)),
                Some(Some(other)) => {
                    return Err(Error::domain(format!(
                        "offset {off} assigned to both {other} and v{var}"
                    )))
                }
                None => {
                    return Err(Error::domain(format!(
                        "offset {off} of v{var} outside 0..{n}"
                    )))
                }
            }
        }
        Ok(Placement {
            offsets,
            order: order.into_iter().map(Option::unwrap).collect(),
        })
    }

    /// Assigns offset `i` to `order[i]`. Fails unless `order` is a permutation
    /// of `0..order.len()`.
    pub fn from_order(order: &[VarId]) -> Result<Self> {
        let n = order.len();
        let mut offsets = vec![usize::MAX; n];
        for (pos, &var) in order.iter().enumerate() {
            match offsets.get_mut(var.0) {
                Some(slot) if *slot == usize::MAX => *slot = pos,
                Some(_) => return Err(Error::domain(format!("{var} appears twice in order"))),
                None => return Err(Error::domain(format!("{var} outside 0..{n}"))),
            }
        }
        Ok(Placement {
            offsets,
            order: order.to_vec(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Placement {
            offsets: (0..n).collect(),
            order: (0..n).map(VarId).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn offset(&self, v: VarId) -> Option<usize> {
        self.offsets.get(v.0).copied()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Variables listed by ascending offset.
    pub fn order(&self) -> &[VarId] {
        &self.order
    }

    /// Mirror image: offset `o` becomes `n - 1 - o`.
    pub fn reversed(&self) -> Self {
        let n = self.len();
        let mut order = self.order.clone();
        order.reverse();
        Placement {
            offsets: self.offsets.iter().map(|&o| n - 1 - o).collect(),
            order,
        }
    }

    /// Shift count between the offsets of `u` and `v`.
    pub fn shift_distance(&self, u: VarId, v: VarId) -> Result<u64> {
        match (self.offset(u), self.offset(v)) {
            (Some(a), Some(b)) => Ok(a.abs_diff(b) as u64),
            _ => Err(Error::domain(format!(
                "variable {} not covered by a placement of size {}",
                if self.offset(u).is_none() { u } else { v },
                self.len()
            ))),
        }
    }
}

/// Shifts needed to serve `seq` under `placement`, summed over adjacent
/// accesses. The port starts aligned with the first access.
pub fn total_cost(placement: &Placement, seq: &AccessSequence) -> Result<u64> {
    let mut cost = 0u64;
    for pair in seq.accesses().windows(2) {
        cost += placement.shift_distance(pair[0], pair[1])?;
    }
    if seq.len() == 1 {
        placement.shift_distance(seq.accesses()[0], seq.accesses()[0])?;
    }
    Ok(cost)
}

/// Same quantity as [`total_cost`], computed from the access graph.
pub fn total_cost_via_graph(placement: &Placement, graph: &AccessGraph) -> Result<u64> {
    if placement.len() != graph.num_vertices() {
        return Err(Error::domain(format!(
            "placement covers {} variables but graph has {}",
            placement.len(),
            graph.num_vertices()
        )));
    }
    Ok(graph.cost_of_offsets(placement.offsets()))
}

/// Geometry of one domain block cluster.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct DbcConfig {
    /// Maximum number of variables (domains per track), `N`.
    pub domains_per_track: usize,
    /// Tracks per cluster, i.e. bits per stored item, `M`.
    pub bits_per_item: usize,
}

impl DbcConfig {
    pub fn new(domains_per_track: usize, bits_per_item: usize) -> Result<Self> {
        if domains_per_track == 0 || bits_per_item == 0 {
            return Err(Error::domain("DBC dimensions must be at least 1"));
        }
        Ok(DbcConfig {
            domains_per_track,
            bits_per_item,
        })
    }

    pub fn admits(&self, n: usize) -> bool {
        n <= self.domains_per_track
    }
}

impl Default for DbcConfig {
    fn default() -> Self {
        DbcConfig {
            domains_per_track: 64,
            bits_per_item: 32,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[usize]) -> Vec<VarId> {
        v.iter().map(|&i| VarId(i)).collect()
    }

    #[test]
    fn interning_numbers_by_first_occurrence() {
        let s = AccessSequence::intern(&["a", "b", "a"]).unwrap();
        assert_eq!(s.variables().get("a"), Some(VarId(0)));
        assert_eq!(s.variables().get("b"), Some(VarId(1)));
        assert_eq!(s.accesses(), ids(&[0, 1, 0]).as_slice());

        let s = AccessSequence::intern::<&str>(&[]).unwrap();
        assert!(s.is_empty());
        assert!(s.variables().is_empty());

        let s = AccessSequence::intern(&["x", "x", "y"]).unwrap();
        assert_eq!(s.num_vars(), 2);
        assert_eq!(s.accesses(), ids(&[0, 0, 1]).as_slice());
    }

    #[test]
    fn empty_token_is_a_parse_error() {
        let err = AccessSequence::intern(&["a", ""]).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn graph_weights_by_direct_scan() {
        let s = AccessSequence::intern(&["a", "b", "a"]).unwrap();
        let g = AccessGraph::from_sequence(&s);
        assert_eq!(g.weight(VarId(0), VarId(1)), 2);

        let s = AccessSequence::intern(&["a", "a", "a"]).unwrap();
        let g = AccessGraph::from_sequence(&s);
        assert_eq!(g.total_weight(), 0);
        assert_eq!(g.weight(VarId(0), VarId(0)), 0);

        let s = AccessSequence::intern(&["a", "b", "a", "b", "a", "c"]).unwrap();
        let g = AccessGraph::from_sequence(&s);
        let (a, b, c) = (VarId(0), VarId(1), VarId(2));
        assert_eq!(g.weight(a, b), 4);
        assert_eq!(g.weight(a, c), 1);
        assert_eq!(g.weight(b, c), 0);
        assert_eq!(g.vertex_weight(a), 5);
    }

    #[test]
    fn shift_distance_is_absolute_difference() {
        // a..f at offsets 0..5
        let p = Placement::identity(6);
        assert_eq!(p.shift_distance(VarId(1), VarId(3)).unwrap(), 2);
        assert_eq!(p.shift_distance(VarId(2), VarId(2)).unwrap(), 0);
        assert_eq!(p.shift_distance(VarId(0), VarId(5)).unwrap(), 5);
        assert!(p.shift_distance(VarId(0), VarId(6)).is_err());
    }

    #[test]
    fn sequence_cost_examples() {
        let s = AccessSequence::intern(&["a", "b", "a", "c"]).unwrap();
        let p = Placement::identity(3);
        assert_eq!(total_cost(&p, &s).unwrap(), 4);
        let g = AccessGraph::from_sequence(&s);
        assert_eq!(total_cost_via_graph(&p, &g).unwrap(), 4);

        let s = AccessSequence::intern(&["q"; 9]).unwrap();
        assert_eq!(total_cost(&Placement::identity(1), &s).unwrap(), 0);

        let s = AccessSequence::intern(&["a", "b", "a", "b", "a", "c"]).unwrap();
        // b:0, a:1, c:2
        let p = Placement::from_offsets(vec![1, 0, 2]).unwrap();
        assert_eq!(total_cost(&p, &s).unwrap(), 5);
    }

    #[test]
    fn graph_cost_examples() {
        let g = AccessGraph::from_edges(3, &[]).unwrap();
        for p in [vec![0, 1, 2], vec![2, 0, 1]] {
            let p = Placement::from_offsets(p).unwrap();
            assert_eq!(total_cost_via_graph(&p, &g).unwrap(), 0);
        }
        let g = AccessGraph::from_edges(3, &[(0, 1, 4), (0, 2, 1)]).unwrap();
        let p = Placement::from_offsets(vec![1, 0, 2]).unwrap();
        assert_eq!(total_cost_via_graph(&p, &g).unwrap(), 5);
        assert!(total_cost_via_graph(&Placement::identity(2), &g).is_err());
    }

    #[test]
    fn uncovered_variable_is_a_domain_error() {
        let s = AccessSequence::intern(&["a", "b", "c"]).unwrap();
        assert!(matches!(
            total_cost(&Placement::identity(2), &s),
            Err(Error::Domain(_))
        ));
        let s = AccessSequence::intern(&["a", "b"]).unwrap();
        assert!(total_cost(&Placement::identity(1), &AccessSequence::intern(&["a"]).unwrap()).is_ok());
        assert!(total_cost(&Placement::identity(1), &s).is_err());
    }

    #[test]
    fn placement_rejects_non_bijections() {
        assert!(Placement::from_offsets(vec![0, 0]).is_err());
        assert!(Placement::from_offsets(vec![0, 2]).is_err());
        assert!(Placement::from_order(&ids(&[1, 1])).is_err());
        assert!(Placement::from_order(&ids(&[0, 3])).is_err());
        let p = Placement::from_order(&ids(&[2, 0, 1])).unwrap();
        assert_eq!(p.offsets(), &[1, 2, 0]);
        assert_eq!(p.offsets().iter().sum::<usize>(), 3);
    }

    #[test]
    fn dbc_admissibility() {
        assert!(DbcConfig::new(0, 32).is_err());
        let dbc = DbcConfig::new(4, 32).unwrap();
        assert!(dbc.admits(4));
        assert!(!dbc.admits(5));
    }
}
