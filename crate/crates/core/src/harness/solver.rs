//! External MILP solver hand-off.
//!
//! The solver is any shell command template containing `{lp}` (input model)
//! and `{sol}` (solution output) placeholders, and optionally `{budget}`
//! (time limit in seconds). The solution file holds one `name value` pair
//! per line; an optional `status <word>` line reports solver status, and `#`
//! starts a comment.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Duration;

use crate::error::{Error, Result};

/// Environment variable holding the solver command template.
pub const SOLVER_ENV: &str = "TRACKPLACE_SOLVER";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalSolver {
    template: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOutput {
    pub status: String,
    pub values: HashMap<String, f64>,
}

impl ExternalSolver {
    pub fn new(template: impl Into<String>) -> Result<Self> {
        let template = template.into();
        if !template.contains("{lp}") || !template.contains("{sol}") {
            return Err(Error::Usage(format!(
                "solver template `{template}` must contain {{lp}} and {{sol}}"
            )));
        }
        Ok(ExternalSolver { template })
    }

    /// Reads the template from [`SOLVER_ENV`], if set and non-empty.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var(SOLVER_ENV) {
            Ok(t) if !t.trim().is_empty() => Self::new(t).map(Some),
            _ => Ok(None),
        }
    }

    pub fn solve(&self, lp: &Path, sol: &Path, budget: Option<Duration>) -> Result<SolverOutput> {
        let budget = budget.map_or_else(|| "0".to_owned(), |b| b.as_secs().to_string());
        let command = self
            .template
            .replace("{lp}", &lp.display().to_string())
            .replace("{sol}", &sol.display().to_string())
            .replace("{budget}", &budget);
        let output = Command::new("sh")
            .arg("-c")
            .arg(&command)
            .output()
            .map_err(|e| Error::Solver(format!("cannot run `{command}`: {e}")))?;
        if !output.status.success() {
            return Err(Error::Solver(format!(
                "`{command}` exited with {}: {}",
                output.status,
                String::from_utf8_lossy(&output.stderr).trim()
            )));
        }
        let text = fs::read_to_string(sol).map_err(|e| Error::io(sol, e))?;
        parse_solution(&text)
    }
}

pub fn parse_solution(text: &str) -> Result<SolverOutput> {
    let mut status = "unknown".to_owned();
    let mut values = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let (Some(key), Some(value), None) = (words.next(), words.next(), words.next()) else {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected `name value`, got `{line}`"),
            });
        };
        if key == "status" {
            status = value.to_owned();
            continue;
        }
        let v: f64 = value.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            msg: format!("`{value}` is not a number"),
        })?;
        values.insert(key.to_owned(), v);
    }
    Ok(SolverOutput { status, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solution_format() {
        let out = parse_solution("# header\nstatus optimal\nbeta_0 1\nbeta_1 0.0000001\n").unwrap();
        assert_eq!(out.status, "optimal");
        assert_eq!(out.values["beta_0"], 1.0);
        assert!(parse_solution("beta_0\n").is_err());
        assert!(parse_solution("beta_0 x\n").is_err());
    }

    #[test]
    fn template_needs_placeholders() {
        assert!(ExternalSolver::new("highs {lp}").is_err());
        assert!(ExternalSolver::new("solve {lp} {sol}").is_ok());
    }

    #[test]
    fn failing_command_is_a_solver_error() {
        let dir = std::env::temp_dir();
        let s = ExternalSolver::new("false {lp} {sol}").unwrap();
        let err = s
            .solve(&dir.join("none.lp"), &dir.join("none.sol"), None)
            .unwrap_err();
        assert!(matches!(err, Error::Solver(_)));
    }
}
