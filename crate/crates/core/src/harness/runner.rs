use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::report::{RunReport, RunRow};
use super::solver::ExternalSolver;
use super::traces::TraceFile;
use super::{bin_by_length, categorize_sequence, estimate_energy, EnergyModel};
use crate::error::{Error, Result};
use crate::exact::{branch_and_bound, build_ilp, export_lp};
use crate::genetic::{ga_refine, GaConfig};
use crate::heuristics::{chen, chen_tb, mwpc_greedy, ofu, shifts_reduce};
use crate::model::{total_cost, total_cost_via_graph, AccessGraph, AccessSequence, DbcConfig, Placement};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Ofu,
    Mwpc,
    Chen,
    ChenTb,
    ShiftsReduce,
    Ga,
    Bnb,
    IlpExport,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Ofu,
        Algorithm::Mwpc,
        Algorithm::Chen,
        Algorithm::ChenTb,
        Algorithm::ShiftsReduce,
        Algorithm::Ga,
        Algorithm::Bnb,
        Algorithm::IlpExport,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Ofu => "ofu",
            Algorithm::Mwpc => "mwpc",
            Algorithm::Chen => "chen",
            Algorithm::ChenTb => "chen_tb",
            Algorithm::ShiftsReduce => "shifts_reduce",
            Algorithm::Ga => "ga",
            Algorithm::Bnb => "bnb",
            Algorithm::IlpExport => "ilp",
        }
    }

    /// Parses a comma-separated list; `ofu` is always included.
    pub fn parse_list(list: &str) -> Result<Vec<Algorithm>> {
        let mut algos = vec![Algorithm::Ofu];
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let a: Algorithm = name.parse()?;
            if !algos.contains(&a) {
                algos.push(a);
            }
        }
        Ok(algos)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ofu" => Algorithm::Ofu,
            "mwpc" => Algorithm::Mwpc,
            "chen" => Algorithm::Chen,
            "chen_tb" | "chen-tb" => Algorithm::ChenTb,
            "shifts_reduce" | "shifts-reduce" => Algorithm::ShiftsReduce,
            "ga" => Algorithm::Ga,
            "bnb" => Algorithm::Bnb,
            "ilp" | "ilp-export" | "ilp_export" => Algorithm::IlpExport,
            other => return Err(Error::Usage(format!("unknown algorithm `{other}`"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub dbc: DbcConfig,
    pub energy: EnergyModel,
    /// Branch-and-bound time limit per sequence; `None` runs to completion.
    pub bnb_budget: Option<Duration>,
    /// Directory receiving one LP file per sequence.
    pub ilp_export_dir: Option<PathBuf>,
    pub ilp_budget: Option<Duration>,
    pub solver: Option<ExternalSolver>,
    /// Record wall-clock runtimes. Disable for byte-reproducible reports.
    pub record_runtime: bool,
    /// Overrides the per-instance default GA parameters (the seed is still
    /// derived per sequence).
    pub ga: Option<GaConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            dbc: DbcConfig::default(),
            energy: EnergyModel::default(),
            bnb_budget: Some(Duration::from_secs(10)),
            ilp_export_dir: None,
            ilp_budget: Some(Duration::from_secs(3 * 3600)),
            solver: None,
            record_runtime: true,
            ga: None,
        }
    }
}

struct WorkItem<'t> {
    benchmark: &'t str,
    sequence_id: usize,
    global_index: usize,
    seq: &'t AccessSequence,
}

/// Runs every algorithm on every sequence. Sequences are processed in
/// parallel; the report is assembled in a fixed order.
pub fn run_matrix(traces: &TraceFile, algorithms: &[Algorithm], cfg: &RunConfig) -> Result<RunReport> {
    let mut algos = vec![Algorithm::Ofu];
    for &a in algorithms {
        if !algos.contains(&a) {
            algos.push(a);
        }
    }
    if algos.contains(&Algorithm::IlpExport) && cfg.ilp_export_dir.is_none() {
        return Err(Error::Usage("the ilp algorithm needs an export directory".into()));
    }
    if let Some(dir) = &cfg.ilp_export_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }

    let mut items = Vec::new();
    for bench in &traces.benchmarks {
        for (sequence_id, seq) in bench.sequences.iter().enumerate() {
            items.push(WorkItem {
                benchmark: &bench.name,
                sequence_id,
                global_index: items.len(),
                seq,
            });
        }
    }

    let results: Vec<Result<(Vec<RunRow>, Vec<String>)>> = items
        .par_iter()
        .map(|item| run_sequence(item, &algos, cfg))
        .collect();

    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for r in results {
        let (r, w) = r?;
        rows.extend(r);
        warnings.extend(w);
    }
    Ok(RunReport::new(rows, warnings))
}

fn run_sequence(item: &WorkItem<'_>, algos: &[Algorithm], cfg: &RunConfig) -> Result<(Vec<RunRow>, Vec<String>)> {
    let seq = item.seq;
    let (n, m) = (seq.num_vars(), seq.len());
    if (m as u64).checked_mul(n as u64).is_none() {
        return Err(Error::domain(format!(
            "{}#{}: m * n overflows the cost type",
            item.benchmark, item.sequence_id
        )));
    }
    let graph = AccessGraph::from_sequence(seq);
    let label = format!("{}#{}", item.benchmark, item.sequence_id);

    let evaluate = |algo: Algorithm, p: &Placement| -> Result<u64> {
        let by_seq = total_cost(p, seq)?;
        let by_graph = total_cost_via_graph(p, &graph)?;
        if by_seq != by_graph {
            return Err(Error::Invariant(format!(
                "{label} {algo}: sequence cost {by_seq} != graph cost {by_graph} for offsets {:?}",
                p.offsets()
            )));
        }
        Ok(by_seq)
    };

    let ofu_placement = ofu(seq);
    let ofu_cost = evaluate(Algorithm::Ofu, &ofu_placement)?;

    let mut rows = Vec::with_capacity(algos.len());
    let mut warnings = Vec::new();
    for &algo in algos {
        let started = Instant::now();
        let outcome: Outcome = match algo {
            Algorithm::Ofu => Outcome::placed(ofu_placement.clone(), "ok"),
            Algorithm::Mwpc => Outcome::placed(mwpc_greedy(&graph), "ok"),
            Algorithm::Chen => Outcome::placed(chen(&graph), "ok"),
            Algorithm::ChenTb => Outcome::placed(chen_tb(&graph), "ok"),
            Algorithm::ShiftsReduce => Outcome::placed(shifts_reduce(&graph), "ok"),
            Algorithm::Ga => {
                let seeds = [ofu_placement.clone(), chen_tb(&graph), shifts_reduce(&graph)];
                let mut ga_cfg = cfg.ga.clone().unwrap_or_else(|| GaConfig::for_size(n, 0));
                ga_cfg.rng_seed = cfg.seed ^ item.global_index as u64;
                Outcome::placed(ga_refine(&graph, &seeds, &ga_cfg)?, "ok")
            }
            Algorithm::Bnb => {
                if n == 0 {
                    Outcome::placed(Placement::identity(0), "optimal")
                } else {
                    let r = branch_and_bound(&graph, cfg.bnb_budget);
                    Outcome::placed(r.placement, r.status.as_str())
                }
            }
            Algorithm::IlpExport => run_ilp(item, &graph, cfg)?,
        };
        let runtime = started.elapsed();

        let shifts = match &outcome.placement {
            Some(p) => Some(evaluate(algo, p)?),
            None => None,
        };
        if let (Some(expected), Some(actual)) = (outcome.expected_cost, shifts) {
            if expected != actual {
                return Err(Error::Invariant(format!(
                    "{label} ilp: solver objective {expected} != evaluated cost {actual}"
                )));
            }
        }

        rows.push(RunRow {
            benchmark: item.benchmark.to_owned(),
            sequence_id: item.sequence_id,
            n,
            m,
            algorithm: algo.as_str().to_owned(),
            shifts,
            reduction_vs_ofu: shifts.and_then(|s| reduction(s, ofu_cost)),
            runtime_us: cfg.record_runtime.then_some(runtime.as_micros() as u64),
            energy_pj: shifts.map(|s| estimate_energy(s, &cfg.energy)),
            length_bin: bin_by_length(m).to_owned(),
            category: categorize_sequence(m).as_str().to_owned(),
            dbc_violation: !cfg.dbc.admits(n),
            status: outcome.status,
        });
    }

    if n > 1 && single_use(seq) {
        for row in &rows {
            if let Some(s) = row.shifts {
                if s != ofu_cost {
                    warnings.push(format!(
                        "{label}: every variable is accessed once, yet {} costs {s} shifts vs {ofu_cost} for ofu",
                        row.algorithm
                    ));
                }
            }
        }
    }
    Ok((rows, warnings))
}

struct Outcome {
    placement: Option<Placement>,
    status: String,
    expected_cost: Option<u64>,
}

impl Outcome {
    fn placed(p: Placement, status: &str) -> Self {
        Outcome {
            placement: Some(p),
            status: status.to_owned(),
            expected_cost: None,
        }
    }
}

fn run_ilp(item: &WorkItem<'_>, graph: &AccessGraph, cfg: &RunConfig) -> Result<Outcome> {
    let n = graph.num_vertices();
    if n < 2 {
        return Ok(Outcome::placed(Placement::identity(n), "trivial"));
    }
    let dir = cfg.ilp_export_dir.as_ref().expect("checked by run_matrix");
    let stem = format!("{}_{}", sanitize(item.benchmark), item.sequence_id);
    let lp_path = dir.join(format!("{stem}.lp"));
    let model = build_ilp(graph, false)?;
    fs::write(&lp_path, export_lp(&model)).map_err(|e| Error::io(&lp_path, e))?;

    let Some(solver) = &cfg.solver else {
        return Ok(Outcome {
            placement: None,
            status: "exported-only".into(),
            expected_cost: None,
        });
    };
    let sol_path = dir.join(format!("{stem}.sol"));
    let out = match solver.solve(&lp_path, &sol_path, cfg.ilp_budget) {
        Ok(out) => out,
        Err(Error::Solver(_)) | Err(Error::Io { .. }) => {
            return Ok(Outcome {
                placement: None,
                status: "solver-failed".into(),
                expected_cost: None,
            })
        }
        Err(e) => return Err(e),
    };
    let solution = model.decode(&out.values).map_err(|e| {
        Error::Invariant(format!("{}#{} ilp: {e}", item.benchmark, item.sequence_id))
    })?;
    if solution.complementarity_violations > 0 {
        return Err(Error::Invariant(format!(
            "{}#{} ilp: {} pairs with both p and q non-zero",
            item.benchmark, item.sequence_id, solution.complementarity_violations
        )));
    }
    Ok(Outcome {
        placement: Some(solution.placement),
        status: format!("ilp-{}", out.status),
        expected_cost: Some(solution.objective),
    })
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn single_use(seq: &AccessSequence) -> bool {
    seq.len() == seq.num_vars()
}

/// `1 - shifts / ofu`, undefined when the baseline is zero.
pub(crate) fn reduction(shifts: u64, ofu: u64) -> Option<f64> {
    (ofu > 0).then(|| 1.0 - shifts as f64 / ofu as f64)
}
