#![allow(dead_code)]

use std::collections::HashMap;
use std::time::Duration;

use microlp::{ComparisonOp, OptimizationDirection, Problem, Variable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trackplace::{AccessGraph, AccessSequence};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform accesses over `n` variables, each used at least once.
pub fn random_sequence(rng: &mut ChaCha8Rng, n: usize, m: usize) -> AccessSequence {
    assert!(m >= n);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.extend((n..m).map(|_| rng.gen_range(0..n)));
    idx.shuffle(rng);
    AccessSequence::from_indices(n, &idx).unwrap()
}

/// A random instance with `n` in `n_range` and `m` in `m_range`.
pub fn fuzz_instance(
    rng: &mut ChaCha8Rng,
    n_range: std::ops::RangeInclusive<usize>,
    m_range: std::ops::RangeInclusive<usize>,
) -> (AccessSequence, AccessGraph) {
    let n = rng.gen_range(n_range);
    let m = rng.gen_range(m_range).max(n);
    let seq = random_sequence(rng, n, m);
    let g = AccessGraph::from_sequence(&seq);
    (seq, g)
}

/// Locality-structured trace. Variables sit on a hidden random line; each
/// step usually moves to a near neighbour on that line, sometimes repeats a
/// recent access and occasionally jumps anywhere.
pub fn markov_sequence(rng: &mut ChaCha8Rng, n: usize, m: usize) -> AccessSequence {
    let mut line: Vec<usize> = (0..n).collect();
    line.shuffle(rng);
    let mut pos = rng.gen_range(0..n);
    let mut recent: Vec<usize> = Vec::new();
    let mut idx = Vec::with_capacity(m);
    for _ in 0..m {
        let r: f64 = rng.gen();
        pos = if r < 0.65 {
            let step = rng.gen_range(1..=3) as isize * if rng.gen::<bool>() { 1 } else { -1 };
            (pos as isize + step).clamp(0, n as isize - 1) as usize
        } else if r < 0.9 && !recent.is_empty() {
            *recent.choose(rng).unwrap()
        } else {
            rng.gen_range(0..n)
        };
        idx.push(line[pos]);
        recent.push(pos);
        if recent.len() > 6 {
            recent.remove(0);
        }
    }
    AccessSequence::from_indices(n, &idx).unwrap()
}

#[derive(Debug)]
pub struct LpSolution {
    pub objective: f64,
    pub values: HashMap<String, f64>,
}

/// Reads the CPLEX LP subset written by the exporter and solves it with
/// microlp. The model is built from the text alone.
pub fn solve_lp_text(text: &str, time_limit: Duration) -> Result<LpSolution, String> {
    let lp = parse_lp(text)?;
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    problem.set_time_limit(time_limit);
    let mut vars: HashMap<&str, Variable> = HashMap::new();
    for name in &lp.order {
        let obj = lp.objective.get(name).copied().unwrap_or(0.0);
        let (lo, hi) = lp.bounds.get(name).copied().unwrap_or((0.0, f64::INFINITY));
        let v = if lp.binary.contains(name) {
            problem.add_binary_var(obj)
        } else if lp.general.contains(name) {
            let hi = if hi.is_finite() { hi as i32 } else { i32::MAX };
            problem.add_integer_var(obj, (lo as i32, hi))
        } else {
            problem.add_var(obj, (lo, hi))
        };
        vars.insert(name.as_str(), v);
    }
    for row in &lp.rows {
        let expr: Vec<(Variable, f64)> = row.terms.iter().map(|(c, name)| (vars[name.as_str()], *c)).collect();
        let op = match row.sense.as_str() {
            "<=" => ComparisonOp::Le,
            ">=" => ComparisonOp::Ge,
            "=" => ComparisonOp::Eq,
            other => return Err(format!("unknown sense {other}")),
        };
        problem.add_constraint(expr, op, row.rhs);
    }
    let outcome = problem.solve().map_err(|e| e.to_string())?;
    if !outcome.is_optimal() {
        return Err(format!("solver stopped: {:?}", outcome.termination_reason()));
    }
    let sol = outcome.solution().unwrap();
    let values = lp
        .order
        .iter()
        .map(|name| (name.clone(), sol.var_value(vars[name.as_str()])))
        .collect();
    Ok(LpSolution {
        objective: sol.objective(),
        values,
    })
}

#[derive(Default)]
struct LpText {
    order: Vec<String>,
    objective: HashMap<String, f64>,
    rows: Vec<LpRow>,
    bounds: HashMap<String, (f64, f64)>,
    general: Vec<String>,
    binary: Vec<String>,
}

struct LpRow {
    terms: Vec<(f64, String)>,
    sense: String,
    rhs: f64,
}

impl LpText {
    fn see(&mut self, name: &str) {
        if !self.order.iter().any(|n| n == name) {
            self.order.push(name.to_owned());
        }
    }
}

#[derive(PartialEq)]
enum Section {
    None,
    Objective,
    Constraints,
    Bounds,
    General,
    Binary,
    End,
}

fn parse_lp(text: &str) -> Result<LpText, String> {
    let mut lp = LpText::default();
    let mut section = Section::None;
    let mut tokens: Vec<String> = Vec::new();
    let mut obj_tokens: Vec<String> = Vec::new();

    for raw in text.lines() {
        let line = raw.split('\\').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let next = match line.to_ascii_lowercase().as_str() {
            "minimize" => Some(Section::Objective),
            "subject to" => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "general" | "generals" => Some(Section::General),
            "binary" | "binaries" => Some(Section::Binary),
            "end" => Some(Section::End),
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let words = line.split_whitespace().map(str::to_owned);
        match section {
            Section::Objective => obj_tokens.extend(words),
            Section::Constraints => tokens.extend(words),
            Section::Bounds => {
                let w: Vec<&str> = line.split_whitespace().collect();
                match w.as_slice() {
                    [lo, "<=", name, "<=", hi] => {
                        let b = (num(lo)?, num(hi)?);
                        lp.bounds.insert(name.to_string(), b);
                        lp.see(name);
                    }
                    [name, ">=", lo] => {
                        lp.bounds.insert(name.to_string(), (num(lo)?, f64::INFINITY));
                        lp.see(name);
                    }
                    _ => return Err(format!("unsupported bound `{line}`")),
                }
            }
            Section::General => lp.general.extend(words),
            Section::Binary => lp.binary.extend(words),
            Section::None | Section::End => return Err(format!("text outside a section: `{line}`")),
        }
    }

    // objective: optional label, then terms
    let mut obj = obj_tokens.as_slice();
    if obj.first().is_some_and(|t| t.ends_with(':')) {
        obj = &obj[1..];
    }
    for (c, name) in parse_terms(obj)? {
        lp.see(&name);
        *lp.objective.entry(name).or_default() += c;
    }

    let mut rest = tokens.as_slice();
    while !rest.is_empty() {
        if rest[0].ends_with(':') {
            rest = &rest[1..];
        }
        let sense_at = rest
            .iter()
            .position(|t| t == "<=" || t == ">=" || t == "=")
            .ok_or("constraint without sense")?;
        let terms = parse_terms(&rest[..sense_at])?;
        for (_, name) in &terms {
            lp.see(name);
        }
        let rhs = num(rest.get(sense_at + 1).ok_or("missing rhs")?)?;
        lp.rows.push(LpRow {
            terms,
            sense: rest[sense_at].clone(),
            rhs,
        });
        rest = &rest[sense_at + 2..];
    }
    for name in lp.general.clone().iter().chain(lp.binary.clone().iter()) {
        lp.see(name);
    }
    Ok(lp)
}

fn num(s: &str) -> Result<f64, String> {
    s.parse().map_err(|_| format!("bad number `{s}`"))
}

fn parse_terms(tokens: &[String]) -> Result<Vec<(f64, String)>, String> {
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    for t in tokens {
        match t.as_str() {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            _ => {
                if let Ok(c) = t.parse::<f64>() {
                    coef = Some(c);
                } else {
                    terms.push((sign * coef.unwrap_or(1.0), t.clone()));
                    sign = 1.0;
                    coef = None;
                }
            }
        }
    }
    Ok(terms)
}
