use std::collections::BTreeMap;

use ratlp::Rat;
use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteEmv, SymbolicEmv};
use crate::states::{classify_symbolic, morphism_name, PreStateClass, StateSpace, StatesError, SymbolicState};

use super::MeasuresError;

/// A finitely supported probability measure on the state-morphisms, plus a
/// point mass at `s_∞` on representing algebras.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub weights: BTreeMap<String, Rat>,
    pub inf: Rat,
}

impl DiscreteMeasure {
    pub fn total(&self) -> Rat {
        self.weights.values().cloned().sum::<Rat>() + self.inf.clone()
    }
}

/// Id of the `i`-th state-morphism of a finite algebra.
pub fn finite_morphism_id(i: usize) -> String {
    format!("t{i}")
}

/// `μ_s` on a finite algebra: the convex weights of `s` over the
/// state-morphisms, zero weights dropped.
pub fn integral_represent(m: &FiniteEmv, s: &[Rat]) -> Result<DiscreteMeasure, MeasuresError> {
    let space = StateSpace::new(m)?;
    let w = space.decompose(s)?;
    let morphisms = space.morphisms();
    for (x, target) in s.iter().enumerate() {
        let back: Rat = w.iter().zip(morphisms).map(|(wi, t)| wi * &t[x]).sum();
        if back != *target {
            return Err(MeasuresError::Disagreement {
                detail: "integral does not reproduce the state".into(),
                witness: vec![m.label(x).to_string()],
            });
        }
    }
    let weights = w
        .into_iter()
        .enumerate()
        .filter(|(_, wi)| !wi.is_zero())
        .map(|(i, wi)| (finite_morphism_id(i), wi))
        .collect();
    Ok(DiscreteMeasure {
        weights,
        inf: Rat::zero(),
    })
}

/// `μ_s` for a state on finite subsets or on its representing algebra,
/// checked against `s` on `enumerate(budget)`.
pub fn integral_represent_symbolic(
    fam: &SymbolicEmv,
    s: &SymbolicState,
    budget: usize,
) -> Result<DiscreteMeasure, MeasuresError> {
    let supported = match fam {
        SymbolicEmv::FinSubsets => true,
        SymbolicEmv::Representing(inner) => **inner == SymbolicEmv::FinSubsets,
        _ => false,
    };
    if !supported {
        return Err(MeasuresError::UnsupportedCarrier(fam.name()));
    }
    s.validate(fam)?;
    if s.has_tail() {
        return Err(MeasuresError::NotFiniteSupport);
    }
    let class = classify_symbolic(fam, s, budget.min(6), 0)?.class;
    if !matches!(class, PreStateClass::State | PreStateClass::StateMorphism) {
        return Err(StatesError::NotAState {
            reason: format!("classified as {class:?}"),
            witness: Vec::new(),
        }
        .into());
    }
    let base = s.merged_base();
    for x in fam.enumerate(budget) {
        let mut back = &s.inf * &SymbolicState::infinity().eval(fam, &x)?;
        for (n, w) in &base {
            back += w * &SymbolicState::morphism(*n).eval(fam, &x)?;
        }
        if back != s.eval(fam, &x)? {
            return Err(MeasuresError::Disagreement {
                detail: "integral does not reproduce the state".into(),
                witness: vec![x.to_string()],
            });
        }
    }
    Ok(DiscreteMeasure {
        weights: base.into_iter().map(|(n, w)| (morphism_name(fam, n), w)).collect(),
        inf: s.inf.clone(),
    })
}
