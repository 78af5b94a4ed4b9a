//! Ideals, quotients, subalgebras, the generalized-effect-algebra round trip
//! and the representing MV-algebra.

mod gea;
mod ideals;
mod lattice;
mod representing;
mod subalgebra;

pub use gea::{gea_to_emv, to_gea, GeaTable, RDP_LIMIT};
pub use ideals::{
    chain_heights, ideal_generated, is_ideal, maximal_ideals, maximal_ideals_bruteforce, quotient,
    radical, radical_and_infinitesimals, radical_and_infinitesimals_symbolic, Ideal, Quotient,
    SymbolicRadical, ORACLE_LIMIT,
};
pub use lattice::{monoid_reconstruct, ReconstructedLattice};
pub use representing::{representing_checks, representing_mv, RepresentingReport};
pub use subalgebra::{subalgebra, subalgebra_closure};

use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("the zero algebra has no maximal ideals")]
    ZeroAlgebra,
    #[error("ideal is not proper")]
    ImproperIdeal,
    #[error("set is not an ideal: {detail}")]
    NotAnIdeal { witness: Vec<String>, detail: String },
    #[error("ideal relation is not a congruence at ({x}, {y})")]
    NotACongruence { x: String, y: String },
    #[error("set is not a subalgebra: closure adds {missing}")]
    NotSubalgebra { missing: String },
    #[error("generalized effect algebra axiom {axiom} fails")]
    GeaAxiom {
        axiom: &'static str,
        witness: Vec<String>,
    },
    #[error("Riesz decomposition fails")]
    RdpViolation { witness: Vec<String> },
    #[error("{x} and {y} have no join or no meet")]
    NotLattice { x: String, y: String },
    #[error("no Boolean element lies above {x}")]
    NoBooleanCover { x: String },
    #[error("{x} ⊕ {y} depends on the Boolean element chosen")]
    SumDependsOnCover { x: String, y: String },
    #[error("hypothesis {axiom} fails: {detail}")]
    HypothesisFailure {
        axiom: String,
        witness: Vec<String>,
        detail: String,
    },
    #[error("internal disagreement: {detail}")]
    Disagreement { detail: String, witness: Vec<String> },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl StructureError {
    pub fn code(&self) -> &'static str {
        match self {
            StructureError::Algebra(e) => e.code(),
            StructureError::ZeroAlgebra => "ZeroAlgebra",
            StructureError::ImproperIdeal => "ImproperIdeal",
            StructureError::NotAnIdeal { .. } => "NotAnIdeal",
            StructureError::NotACongruence { .. } => "NotACongruence",
            StructureError::NotSubalgebra { .. } => "NotSubalgebra",
            StructureError::GeaAxiom { .. } => "GeaAxiom",
            StructureError::RdpViolation { .. } => "RdpViolation",
            StructureError::NotLattice { .. } => "NotLattice",
            StructureError::NoBooleanCover { .. } => "NoBooleanCover",
            StructureError::SumDependsOnCover { .. } => "SumDependsOnCover",
            StructureError::HypothesisFailure { .. } => "HypothesisFailure",
            StructureError::Disagreement { .. } => "DisagreementBug",
            StructureError::Unsupported(_) => "Unsupported",
        }
    }

    pub fn witness(&self) -> Vec<String> {
        match self {
            StructureError::Algebra(e) => e.witness(),
            StructureError::NotAnIdeal { witness, .. }
            | StructureError::GeaAxiom { witness, .. }
            | StructureError::RdpViolation { witness }
            | StructureError::HypothesisFailure { witness, .. }
            | StructureError::Disagreement { witness, .. } => witness.clone(),
            StructureError::NotACongruence { x, y }
            | StructureError::NotLattice { x, y }
            | StructureError::SumDependsOnCover { x, y } => vec![x.clone(), y.clone()],
            StructureError::NotSubalgebra { missing } => vec![missing.clone()],
            StructureError::NoBooleanCover { x } => vec![x.clone()],
            _ => Vec::new(),
        }
    }
}
