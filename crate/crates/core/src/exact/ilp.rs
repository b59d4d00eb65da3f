//! Integer linear program for optimal placement.
//!
//! Every unordered pair `i < j` gets integers `p, q >= 0` with
//! `beta_i - beta_j + p - q = 0`, so `p + q = |beta_i - beta_j|` once at most
//! one of them is non-zero. Binaries `a, b` enforce that:
//!
//! ```text
//! c1:  beta_i - beta_j + p - q = 0
//! c3:  a <= p <= n a
//! c4:  b <= q <= n b
//! c5:  0 <= a + b <= 1
//! c6:  p + q >= 1                       (distinct offsets)
//! c7:  0 <= beta_i <= n - 1             (variable bounds)
//! c8:  sum beta_i = n (n - 1) / 2
//! min  sum over w_ij > 0 of w_ij (p + q)
//! ```
//!
//! The big-M constant is `n`; `n - 1` would also be valid and slightly
//! tighter. With `encode_theta`, offsets are additionally expressed through
//! assignment binaries `theta_i_o` with one offset per variable, one variable
//! per offset, and `beta_i = sum o * theta_i_o`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{AccessGraph, Placement};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum VarKind {
    Integer,
    Binary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpVar {
    pub name: String,
    pub kind: VarKind,
    pub lower: i64,
    pub upper: Option<i64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn as_str(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// One linear row: `sum coef * var  sense  rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(i64, usize)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// Constraint families. Offset bounds are carried as variable bounds.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    C1,
    C3,
    C4,
    C5,
    C6,
    C8,
    ThetaRow,
    ThetaColumn,
    ThetaLink,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub family: Family,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpModel {
    n: usize,
    encode_theta: bool,
    vars: Vec<IlpVar>,
    index: HashMap<String, usize>,
    constraints: Vec<Constraint>,
    objective: Vec<(i64, usize)>,
}

/// Decoded solver output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpSolution {
    pub placement: Placement,
    /// Objective recomputed from the integral `p + q` values.
    pub objective: u64,
    /// Pairs where both `p` and `q` are non-zero.
    pub complementarity_violations: usize,
}

pub fn build_ilp(graph: &AccessGraph, encode_theta: bool) -> Result<IlpModel> {
    let n = graph.num_vertices();
    if n < 2 {
        return Err(Error::domain(format!(
            "ILP model needs at least two variables, got {n}"
        )));
    }
    let big_m = n as i64;
    let mut model = IlpModel {
        n,
        encode_theta,
        vars: Vec::new(),
        index: HashMap::new(),
        constraints: Vec::new(),
        objective: Vec::new(),
    };

    let beta: Vec<usize> = (0..n)
        .map(|i| model.add_var(format!("beta_{i}"), VarKind::Integer, 0, Some(big_m - 1)))
        .collect();

    for i in 0..n {
        for j in i + 1..n {
            let p = model.add_var(format!("p_{i}_{j}"), VarKind::Integer, 0, None);
            let q = model.add_var(format!("q_{i}_{j}"), VarKind::Integer, 0, None);
            let a = model.add_var(format!("a_{i}_{j}"), VarKind::Binary, 0, Some(1));
            let b = model.add_var(format!("b_{i}_{j}"), VarKind::Binary, 0, Some(1));
            let tag = format!("{i}_{j}");
            let row = |suffix: &str, terms: Vec<(i64, usize)>, sense, rhs| Row {
                name: format!("{suffix}_{tag}"),
                terms,
                sense,
                rhs,
            };

            model.push(
                Family::C1,
                vec![row(
                    "c1",
                    vec![(1, beta[i]), (-1, beta[j]), (1, p), (-1, q)],
                    Sense::Eq,
                    0,
                )],
            );
            model.push(
                Family::C3,
                vec![
                    row("c3_lo", vec![(1, p), (-1, a)], Sense::Ge, 0),
                    row("c3_hi", vec![(1, p), (-big_m, a)], Sense::Le, 0),
                ],
            );
            model.push(
                Family::C4,
                vec![
                    row("c4_lo", vec![(1, q), (-1, b)], Sense::Ge, 0),
                    row("c4_hi", vec![(1, q), (-big_m, b)], Sense::Le, 0),
                ],
            );
            model.push(
                Family::C5,
                vec![
                    row("c5_lo", vec![(1, a), (1, b)], Sense::Ge, 0),
                    row("c5_hi", vec![(1, a), (1, b)], Sense::Le, 1),
                ],
            );
            model.push(
                Family::C6,
                vec![row("c6", vec![(1, p), (1, q)], Sense::Ge, 1)],
            );

            let w = graph.w(i, j);
            if w > 0 {
                model.objective.push((w as i64, p));
                model.objective.push((w as i64, q));
            }
        }
    }

    model.push(
        Family::C8,
        vec![Row {
            name: "c8".into(),
            terms: beta.iter().map(|&b| (1, b)).collect(),
            sense: Sense::Eq,
            rhs: big_m * (big_m - 1) / 2,
        }],
    );

    if encode_theta {
        let theta: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|o| model.add_var(format!("theta_{i}_{o}"), VarKind::Binary, 0, Some(1)))
                    .collect()
            })
            .collect();
        for (i, row) in theta.iter().enumerate() {
            model.push(
                Family::ThetaRow,
                vec![Row {
                    name: format!("assign_var_{i}"),
                    terms: row.iter().map(|&t| (1, t)).collect(),
                    sense: Sense::Eq,
                    rhs: 1,
                }],
            );
        }
        for o in 0..n {
            model.push(
                Family::ThetaColumn,
                vec![Row {
                    name: format!("assign_off_{o}"),
                    terms: theta.iter().map(|row| (1, row[o])).collect(),
                    sense: Sense::Eq,
                    rhs: 1,
                }],
            );
        }
        for i in 0..n {
            let mut terms = vec![(1, beta[i])];
            terms.extend((1..n).map(|o| (-(o as i64), theta[i][o])));
            model.push(
                Family::ThetaLink,
                vec![Row {
                    name: format!("link_{i}"),
                    terms,
                    sense: Sense::Eq,
                    rhs: 0,
                }],
            );
        }
    }

    Ok(model)
}

impl IlpModel {
    fn add_var(&mut self, name: String, kind: VarKind, lower: i64, upper: Option<i64>) -> usize {
        let idx = self.vars.len();
        self.index.insert(name.clone(), idx);
        self.vars.push(IlpVar {
            name,
            kind,
            lower,
            upper,
        });
        idx
    }

    fn push(&mut self, family: Family, rows: Vec<Row>) {
        self.constraints.push(Constraint { family, rows });
    }

    pub fn num_offsets(&self) -> usize {
        self.n
    }

    pub fn encodes_theta(&self) -> bool {
        self.encode_theta
    }

    pub fn vars(&self) -> &[IlpVar] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(i64, usize)] {
        &self.objective
    }

    pub fn count(&self, family: Family) -> usize {
        self.constraints.iter().filter(|c| c.family == family).count()
    }

    pub fn count_kind(&self, kind: VarKind) -> usize {
        self.vars.iter().filter(|v| v.kind == kind).count()
    }

    /// Offset variables carrying the `0 <= beta <= n - 1` bounds.
    pub fn bounded_offsets(&self) -> usize {
        self.vars
            .iter()
            .filter(|v| v.name.starts_with("beta_") && v.upper.is_some())
            .count()
    }

    pub fn rows(&self) -> impl Iterator<Item = &Row> {
        self.constraints.iter().flat_map(|c| c.rows.iter())
    }

    /// Right-hand side of the offset-sum constraint.
    pub fn offset_sum_rhs(&self) -> i64 {
        self.rows().find(|r| r.name == "c8").map_or(0, |r| r.rhs)
    }

    /// Maps solver values (by variable name) back to a placement.
    ///
    /// Values are rounded to the nearest integer. Fails if an offset is
    /// missing or the offsets do not form a permutation.
    pub fn decode(&self, values: &HashMap<String, f64>) -> Result<IlpSolution> {
        let get = |name: &str| -> Result<i64> {
            values
                .get(name)
                .map(|v| v.round() as i64)
                .ok_or_else(|| Error::Solver(format!("solution lacks a value for `{name}`")))
        };
        let mut offsets = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let b = get(&format!("beta_{i}"))?;
            if b < 0 {
                return Err(Error::domain(format!("negative offset {b} for beta_{i}")));
            }
            offsets.push(b as usize);
        }
        let placement = Placement::from_offsets(offsets)?;

        let mut violations = 0;
        let mut pq = HashMap::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let p = get(&format!("p_{i}_{j}"))?;
                let q = get(&format!("q_{i}_{j}"))?;
                if p.min(q) != 0 {
                    violations += 1;
                }
                pq.insert(self.var_index(&format!("p_{i}_{j}")).unwrap(), p);
                pq.insert(self.var_index(&format!("q_{i}_{j}")).unwrap(), q);
            }
        }
        let objective = self
            .objective
            .iter()
            .map(|&(c, v)| c * pq[&v])
            .sum::<i64>()
            .max(0) as u64;

        Ok(IlpSolution {
            placement,
            objective,
            complementarity_violations: violations,
        })
    }
}

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, terms: &[(i64, usize)], vars: &[IlpVar]) {
    for (k, &(coef, var)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let name = &vars[var].name;
        let mag = coef.unsigned_abs();
        let sign = match (k, coef < 0) {
            (0, false) => "",
            (0, true) => "- ",
            (_, false) => " + ",
            (_, true) => " - ",
        };
        if mag == 1 {
            let _ = write!(out, "{sign}{name}");
        } else {
            let _ = write!(out, "{sign}{mag} {name}");
        }
    }
}

/// Renders the model in CPLEX LP format. Output depends only on the model.
pub fn export_lp(model: &IlpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ shift-minimizing placement, n = {}{}",
        model.n,
        if model.encode_theta { ", theta encoding" } else { "" }
    );
    out.push_str("Minimize\n obj: ");
    if model.objective.is_empty() {
        out.push_str("0 beta_0");
    } else {
        write_terms(&mut out, &model.objective, &model.vars);
    }
    out.push_str("\nSubject To\n");
    for row in model.rows() {
        let _ = write!(out, " {}: ", row.name);
        write_terms(&mut out, &row.terms, &model.vars);
        let _ = writeln!(out, " {} {}", row.sense.as_str(), row.rhs);
    }

    out.push_str("Bounds\n");
    for v in model.vars.iter().filter(|v| v.kind == VarKind::Integer) {
        match v.upper {
            Some(u) => {
                let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, u);
            }
            None => {
                let _ = writeln!(out, " {} >= {}", v.name, v.lower);
            }
        }
    }

    for (header, kind) in [("General", VarKind::Integer), ("Binary", VarKind::Binary)] {
        let _ = writeln!(out, "{header}");
        let names: Vec<&str> = model
            .vars
            .iter()
            .filter(|v| v.kind == kind)
            .map(|v| v.name.as_str())
            .collect();
        for chunk in names.chunks(TERMS_PER_LINE) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> AccessGraph {
        AccessGraph::from_edges(3, &[(0, 1, 4), (0, 2, 1)]).unwrap()
    }

    #[test]
    fn structure_for_three_variables() {
        let m = build_ilp(&triangle(), false).unwrap();
        // 3 pairs x (p, q, a, b) + 3 offsets
        assert_eq!(m.vars().len(), 15);
        assert_eq!(m.count_kind(VarKind::Binary), 6);
        assert_eq!(m.count_kind(VarKind::Integer), 9);
        let pair_constraints: usize = [Family::C1, Family::C3, Family::C4, Family::C5, Family::C6]
            .iter()
            .map(|&f| m.count(f))
            .sum();
        assert_eq!(pair_constraints, 15);
        assert_eq!(m.bounded_offsets(), 3);
        assert_eq!(m.count(Family::C8), 1);
        // only the two weighted pairs enter the objective
        assert_eq!(m.objective().len(), 4);
    }

    #[test]
    fn offset_sum_rhs() {
        let g = AccessGraph::from_edges(6, &[]).unwrap();
        assert_eq!(build_ilp(&g, false).unwrap().offset_sum_rhs(), 15);
    }

    #[test]
    fn too_small() {
        let g = AccessGraph::from_edges(1, &[]).unwrap();
        assert!(matches!(build_ilp(&g, false), Err(Error::Domain(_))));
    }

    #[test]
    fn theta_encoding_adds_assignment() {
        let m = build_ilp(&triangle(), true).unwrap();
        assert_eq!(m.count_kind(VarKind::Binary), 6 + 9);
        assert_eq!(m.count(Family::ThetaRow), 3);
        assert_eq!(m.count(Family::ThetaColumn), 3);
        assert_eq!(m.count(Family::ThetaLink), 3);
        let lp = export_lp(&m);
        assert!(lp.contains(" link_2: beta_2 - theta_2_1 - 2 theta_2_2 = 0\n"));
    }

    #[test]
    fn single_pair_export() {
        let g = AccessGraph::from_edges(2, &[(0, 1, 3)]).unwrap();
        let lp = export_lp(&build_ilp(&g, false).unwrap());
        assert_eq!(lp.matches("p_0_1 + q_0_1 >= 1").count(), 1);
        assert!(lp.contains(" obj: 3 p_0_1 + 3 q_0_1\n"));
        assert!(lp.contains(" c1_0_1: beta_0 - beta_1 + p_0_1 - q_0_1 = 0\n"));
        assert!(lp.contains(" c3_hi_0_1: p_0_1 - 2 a_0_1 <= 0\n"));
        assert!(lp.contains(" c8: beta_0 + beta_1 = 1\n"));
        assert!(lp.contains(" 0 <= beta_1 <= 1\n"));
        assert!(lp.ends_with("End\n"));
    }

    #[test]
    fn export_is_deterministic() {
        let g = triangle();
        let a = export_lp(&build_ilp(&g, false).unwrap());
        let b = export_lp(&build_ilp(&g, false).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn decode_checks_permutation_and_complementarity() {
        let m = build_ilp(&triangle(), false).unwrap();
        let mut values: HashMap<String, f64> = HashMap::new();
        // b:0, a:1, c:2
        for (name, v) in [
            ("beta_0", 1.0),
            ("beta_1", 0.0),
            ("beta_2", 2.0),
            ("p_0_1", 0.0),
            ("q_0_1", 1.0),
            ("p_0_2", 1.0),
            ("q_0_2", 0.0),
            ("p_1_2", 2.0),
            ("q_1_2", 0.0),
        ] {
            values.insert(name.into(), v);
        }
        let sol = m.decode(&values).unwrap();
        assert_eq!(sol.objective, 5);
        assert_eq!(sol.complementarity_violations, 0);
        assert_eq!(sol.placement.offsets(), &[1, 0, 2]);

        values.insert("beta_2".into(), 1.0);
        assert!(m.decode(&values).is_err());
    }
}
