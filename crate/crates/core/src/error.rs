use thiserror::Error;

use crate::complex::ValidationReport;
use crate::garland::AxiomReport;

pub type Result<T, E = GarlandError> = std::result::Result<T, E>;

/// Pipeline stage that produced an error. The CLI maps stages onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Parse,
    Validate,
    Structure,
    Numeric,
    Usage,
}

#[derive(Debug, Error)]
pub enum GarlandError {
    #[error("{0}")]
    Parse(String),

    #[error("invalid complex: {}", summarize(.0))]
    InvalidComplex(Box<ValidationReport>),

    #[error("level {level}: cell {cell} has no {}-dimensional coface", .level + 1)]
    Purity { level: usize, cell: u64 },

    #[error("level {level} is not available for a complex of dimension {dim}")]
    Level { level: usize, dim: usize },

    #[error("link graph construction failed: {0}")]
    LinkGraph(String),

    #[error("garland axioms violated: {}", .0.first_failure().unwrap_or_default())]
    Axiom(Box<AxiomReport>),

    #[error("no (P5)-compatible orientation on transversal component {component}: edge labeled by cell {cell} between {b} and {b_prime}")]
    Obstruction {
        component: usize,
        cell: u64,
        b: u64,
        b_prime: u64,
    },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NonConvergence { sweeps: usize, off_norm: f64 },

    #[error("sampler gave up after {attempts} attempts: {reason}")]
    RejectionCap { attempts: u64, reason: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("not a simplicial complex on its vertex set: {0}")]
    NotVertexComplex(String),
}

impl GarlandError {
    pub fn stage(&self) -> Stage {
        match self {
            GarlandError::Parse(_) => Stage::Parse,
            GarlandError::InvalidComplex(_) | GarlandError::NotVertexComplex(_) => Stage::Validate,
            GarlandError::Purity { .. }
            | GarlandError::Level { .. }
            | GarlandError::LinkGraph(_)
            | GarlandError::Axiom(_)
            | GarlandError::Obstruction { .. } => Stage::Structure,
            GarlandError::NonConvergence { .. } => Stage::Numeric,
            GarlandError::RejectionCap { .. } | GarlandError::Parameter(_) => Stage::Usage,
        }
    }
}

fn summarize(report: &ValidationReport) -> String {
    match report.violations.first() {
        Some(v) => format!(
            "{} ({} violation{} total)",
            v.message,
            report.violations.len(),
            if report.violations.len() == 1 {
                ""
            } else {
                "s"
            }
        ),
        None => "no violations".to_string(),
    }
}
