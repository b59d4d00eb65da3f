//! Benchmark harness: trace ingestion, the algorithm run matrix, aggregation
//! and report emission.

mod report;
mod runner;
mod solver;
mod traces;

pub use report::{emit_report, emit_summary, render_csv, render_json, render_summary_csv, Format, RunReport, RunRow, SummaryRow};
pub use runner::{run_matrix, Algorithm, RunConfig};
pub use solver::{parse_solution, ExternalSolver, SolverOutput, SOLVER_ENV};
pub use traces::{parse_trace_str, parse_traces, Benchmark, TextTraceReader, TraceFile, TraceReader};

/// Shift energy per item: shifting one domain costs `per_domain_shift_energy`
/// picojoules and an item spans `bits_per_item` tracks shifted together.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct EnergyModel {
    pub per_domain_shift_energy: f64,
    pub bits_per_item: u32,
}

impl Default for EnergyModel {
    fn default() -> Self {
        EnergyModel {
            per_domain_shift_energy: 0.5,
            bits_per_item: 32,
        }
    }
}

/// Shift energy in picojoules.
pub fn estimate_energy(shifts: u64, model: &EnergyModel) -> f64 {
    shifts as f64 * model.bits_per_item as f64 * model.per_domain_shift_energy
}

pub const LENGTH_BINS: [&str; 6] = ["0-70", "71-140", "141-300", "301-500", "501-800", ">800"];

/// Sequence-length bin label.
pub fn bin_by_length(m: usize) -> &'static str {
    match m {
        0..=70 => LENGTH_BINS[0],
        71..=140 => LENGTH_BINS[1],
        141..=300 => LENGTH_BINS[2],
        301..=500 => LENGTH_BINS[3],
        501..=800 => LENGTH_BINS[4],
        _ => LENGTH_BINS[5],
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Short,
    Long,
    VeryLong,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Short => "short",
            Category::Long => "long",
            Category::VeryLong => "very-long",
        }
    }
}

/// short: up to 140 accesses, long: up to 300, very-long: beyond.
pub fn categorize_sequence(m: usize) -> Category {
    match m {
        0..=140 => Category::Short,
        141..=300 => Category::Long,
        _ => Category::VeryLong,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy() {
        let rm = EnergyModel::default();
        assert_eq!(estimate_energy(1, &rm), 16.0);
        assert_eq!(estimate_energy(0, &rm), 0.0);
        assert_eq!(estimate_energy(100, &rm), 1600.0);
    }

    #[test]
    fn bins() {
        assert_eq!(bin_by_length(60), "0-70");
        assert_eq!(bin_by_length(70), "0-70");
        assert_eq!(bin_by_length(71), "71-140");
        assert_eq!(bin_by_length(300), "141-300");
        assert_eq!(bin_by_length(500), "301-500");
        assert_eq!(bin_by_length(650), "501-800");
        assert_eq!(bin_by_length(800), "501-800");
        assert_eq!(bin_by_length(801), ">800");
    }

    #[test]
    fn categories() {
        assert_eq!(categorize_sequence(0), Category::Short);
        assert_eq!(categorize_sequence(100), Category::Short);
        assert_eq!(categorize_sequence(140), Category::Short);
        assert_eq!(categorize_sequence(200), Category::Long);
        assert_eq!(categorize_sequence(300), Category::Long);
        assert_eq!(categorize_sequence(301), Category::VeryLong);
    }
}
