//! Plain-text trace format.
//!
//! ```text
//! # comment to end of line
//! @name gsm          start (or resume) benchmark `gsm`
//! a b a b a c        one access sequence per non-empty line
//! ```
//!
//! Sequences before the first `@name` belong to a benchmark named after the
//! file stem. Each sequence interns its own variables.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::AccessSequence;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Benchmark {
    pub name: String,
    pub sequences: Vec<AccessSequence>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFile {
    pub path: PathBuf,
    pub benchmarks: Vec<Benchmark>,
}

impl TraceFile {
    pub fn num_sequences(&self) -> usize {
        self.benchmarks.iter().map(|b| b.sequences.len()).sum()
    }
}

/// Source of trace files. Other on-disk formats can be adapted by
/// implementing this trait.
pub trait TraceReader {
    fn read(&self, path: &Path) -> Result<TraceFile>;
}

#[derive(Copy, Clone, Debug, Default)]
pub struct TextTraceReader;

impl TraceReader for TextTraceReader {
    fn read(&self, path: &Path) -> Result<TraceFile> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "traces".into());
        Ok(TraceFile {
            path: path.to_owned(),
            benchmarks: parse_trace_str(&text, &stem)?,
        })
    }
}

pub fn parse_traces(path: impl AsRef<Path>) -> Result<TraceFile> {
    TextTraceReader.read(path.as_ref())
}

pub fn parse_trace_str(text: &str, default_name: &str) -> Result<Vec<Benchmark>> {
    let mut benchmarks: Vec<Benchmark> = Vec::new();
    let mut current: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };

        if let Some(directive) = line.strip_prefix('@') {
            let mut words = directive.split_whitespace();
            match (words.next(), words.next(), words.next()) {
                (Some("name"), Some(id), None) => {
                    current = Some(match benchmarks.iter().position(|b| b.name == id) {
                        Some(pos) => pos,
                        None => {
                            benchmarks.push(Benchmark {
                                name: id.to_owned(),
                                sequences: Vec::new(),
                            });
                            benchmarks.len() - 1
                        }
                    });
                }
                (Some("name"), None, _) => return Err(err("`@name` needs a benchmark id".into())),
                (Some("name"), Some(_), Some(extra)) => {
                    return Err(err(format!("unexpected `{extra}` after benchmark id")))
                }
                _ => return Err(err(format!("unknown directive `@{directive}`"))),
            }
            continue;
        }

        let tokens: Vec<&str> = line.split_whitespace().collect();
        if let Some(bad) = tokens.iter().find(|t| t.starts_with('@')) {
            return Err(err(format!("identifier `{bad}` may not start with `@`")));
        }
        let seq = AccessSequence::intern(&tokens).map_err(|e| match e {
            Error::Parse { msg, .. } => err(msg),
            other => other,
        })?;

        let slot = match current {
            Some(pos) => pos,
            None => {
                benchmarks.push(Benchmark {
                    name: default_name.to_owned(),
                    sequences: Vec::new(),
                });
                let pos = benchmarks.len() - 1;
                current = Some(pos);
                pos
            }
        };
        benchmarks[slot].sequences.push(seq);
    }
    Ok(benchmarks)
}
