use crate::model::{AccessSequence, Placement, VarId};

/// Order of first use. Variables that never appear in the sequence follow in
/// declaration order.
pub fn ofu(seq: &AccessSequence) -> Placement {
    let n = seq.num_vars();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for &v in seq.accesses() {
        if !seen[v.index()] {
            seen[v.index()] = true;
            order.push(v);
        }
    }
    order.extend((0..n).filter(|&v| !seen[v]).map(VarId::new));
    Placement::from_order(&order).expect("first-use order is a permutation")
}
