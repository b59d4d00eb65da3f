use crate::error::{Error, Result};
use crate::model::{AccessGraph, VarId};

/// Outcome of resolving the order of the two outermost group elements.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct TieBreak {
    /// New outermost element of the group.
    pub last: VarId,
    /// New fixed element, adjacent to `last`.
    pub fixed: VarId,
    /// Both candidates had equal adjacency with the rest of the group.
    pub tied: bool,
    /// The incoming vertex was moved inwards past the previous last one.
    pub swapped: bool,
}

/// Intra-group tie-break.
///
/// `group` must end with `[.., v_k, v_s]`: `v_k` was the outermost element
/// and `v_s` has just been placed beyond it. Adjacency is measured against
/// the rest of the group, i.e. excluding both `v_k` and `v_s`. On a tie the
/// vertex with the larger edge weight to `v_fix` ends up next to `v_fix`;
/// equal weights keep arrival order.
pub fn tie_break(
    graph: &AccessGraph,
    v_s: VarId,
    v_k: VarId,
    v_fix: VarId,
    group: &mut [VarId],
) -> Result<TieBreak> {
    let len = group.len();
    if len < 2 || group[len - 1] != v_s || group[len - 2] != v_k {
        return Err(Error::domain(format!(
            "group must end with {v_k} followed by {v_s}"
        )));
    }
    let mut idx: Vec<usize> = group.iter().map(|v| v.index()).collect();
    let out = resolve(graph, v_s.index(), v_k.index(), v_fix.index(), &mut idx);
    for (slot, v) in group.iter_mut().zip(idx) {
        *slot = VarId::new(v);
    }
    Ok(TieBreak {
        last: VarId::new(out.last),
        fixed: VarId::new(out.fixed),
        tied: out.tied,
        swapped: out.swapped,
    })
}

pub(super) struct Resolved {
    pub last: usize,
    pub fixed: usize,
    pub tied: bool,
    pub swapped: bool,
}

pub(super) fn resolve(
    graph: &AccessGraph,
    v_s: usize,
    v_k: usize,
    v_fix: usize,
    group: &mut [usize],
) -> Resolved {
    let len = group.len();
    let rest = &group[..len - 2];
    let alpha_s: u64 = rest.iter().map(|&u| graph.w(u, v_s)).sum();
    let alpha_k: u64 = rest.iter().map(|&u| graph.w(u, v_k)).sum();

    if alpha_s == alpha_k {
        if graph.w(v_s, v_fix) > graph.w(v_k, v_fix) {
            group.swap(len - 1, len - 2);
            return Resolved {
                last: v_k,
                fixed: v_s,
                tied: true,
                swapped: true,
            };
        }
        return Resolved {
            last: v_s,
            fixed: v_k,
            tied: true,
            swapped: false,
        };
    }
    Resolved {
        last: v_s,
        fixed: v_k,
        tied: false,
        swapped: false,
    }
}
