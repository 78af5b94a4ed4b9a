//! States, state-morphisms and pre-states.

mod classify;
mod finite;
mod horn_tarski;
mod symbolic;

pub use classify::{classify_prestate, classify_symbolic, ClassReport, PreStateClass};
pub use finite::{
    check_state, join_criterion, km_decompose, meet_criterion, oplus_criterion, state_identities,
    state_morphisms, state_polytope, StateCheck, StateSpace, StateVec,
};
pub use horn_tarski::{horn_tarski_extend, horn_tarski_extend_morphism};
pub use symbolic::{
    extend_to_representing, morphism_name, restrict_to_inner, Restriction, SymbolicState, Tail,
};

use std::collections::BTreeMap;

use ratlp::{LpError, Rat};

use crate::algebra::{AlgebraError, FiniteEmv};
use crate::structure::StructureError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatesError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("expected {expected} values, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a state: {reason}")]
    NotAState { reason: String, witness: Vec<String> },
    #[error("not a state on the subalgebra: {reason}")]
    NotAStateOnSub { reason: String, witness: Vec<String> },
    #[error("not additive: {detail}")]
    NotAdditive { witness: Vec<String>, detail: String },
    #[error("no convex decomposition over the state-morphisms")]
    DecompositionInfeasible,
    #[error("extension problem is infeasible: {detail}")]
    Infeasible { detail: String },
    #[error("total mass {mass} exceeds 1")]
    MassExceedsOne { mass: String },
    #[error("invalid functional: {0}")]
    InvalidState(String),
    #[error("unsupported carrier: {0}")]
    UnsupportedCarrier(String),
    #[error("internal disagreement: {detail}")]
    Disagreement { detail: String, witness: Vec<String> },
}

impl StatesError {
    pub fn code(&self) -> &'static str {
        match self {
            StatesError::Algebra(e) => e.code(),
            StatesError::Structure(e) => e.code(),
            StatesError::Lp(LpError::DimensionMismatch { .. }) => "DimensionMismatch",
            StatesError::Lp(_) => "LpError",
            StatesError::DimensionMismatch { .. } => "DimensionMismatch",
            StatesError::NotAState { .. } => "NotAState",
            StatesError::NotAStateOnSub { .. } => "NotAStateOnSub",
            StatesError::NotAdditive { .. } => "NotAdditive",
            StatesError::DecompositionInfeasible => "DecompositionInfeasible",
            StatesError::Infeasible { .. } => "Infeasible",
            StatesError::MassExceedsOne { .. } => "MassExceedsOne",
            StatesError::InvalidState(_) => "InvalidState",
            StatesError::UnsupportedCarrier(_) => "UnsupportedCarrier",
            StatesError::Disagreement { .. } => "DisagreementBug",
        }
    }

    pub fn witness(&self) -> Vec<String> {
        match self {
            StatesError::Algebra(e) => e.witness(),
            StatesError::Structure(e) => e.witness(),
            StatesError::NotAState { witness, .. }
            | StatesError::NotAStateOnSub { witness, .. }
            | StatesError::NotAdditive { witness, .. }
            | StatesError::Disagreement { witness, .. } => witness.clone(),
            StatesError::MassExceedsOne { mass } => vec![mass.clone()],
            _ => Vec::new(),
        }
    }
}

/// Reads a dense vector from `{label: value}`; every label must occur.
pub fn values_from_labels(
    m: &FiniteEmv,
    values: &BTreeMap<String, Rat>,
) -> Result<Vec<Rat>, StatesError> {
    let mut out = vec![None; m.size()];
    for (label, v) in values {
        let i = m.index_of(label).ok_or_else(|| AlgebraError::ForeignElement {
            element: label.clone(),
        })?;
        out[i] = Some(v.clone());
    }
    let found = out.iter().filter(|v| v.is_some()).count();
    if found != m.size() {
        return Err(StatesError::DimensionMismatch {
            expected: m.size(),
            found,
        });
    }
    Ok(out.into_iter().map(Option::unwrap).collect())
}

/// `{label: value}` for a dense vector.
pub fn values_to_labels(m: &FiniteEmv, values: &[Rat]) -> BTreeMap<String, Rat> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| (m.label(i).to_string(), v.clone()))
        .collect()
}
