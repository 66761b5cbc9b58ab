use crate::linalg::{LinalgError, C64};
use crate::model::{StructureTag, Violation};

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("input violates its structure: {}", join(.0))]
    InvalidStructure(Vec<Violation>),
    #[error("no mapping exists: {0}")]
    InfeasibleMapping(String),
    #[error("structure {0} is not supported by this operation")]
    UnsupportedTag(StructureTag),
    #[error("polynomial is not palindromic (defect {defect:.3e})")]
    NotPalindromic { defect: f64 },
    #[error("report carries no perturbations")]
    MissingPerturbations,
    #[error("lambda = {lambda} is not admissible: {reason}")]
    LambdaNotAdmissible { lambda: C64, reason: String },
    #[error("could not build an admissible lambda family after {attempts} attempts")]
    FamilyConstructionFailed { attempts: usize },
    #[error("objective decreases without bound along the search range")]
    Unbounded,
    #[error("no start satisfies the feasibility guards")]
    NoFeasibleStart,
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
