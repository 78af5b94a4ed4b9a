use ratlp::{solve, FeasOutcome, Rat};

use crate::algebra::FiniteEmv;
use crate::structure::{ideal_generated, subalgebra, subalgebra_closure};

use super::{StateSpace, StateVec, StatesError};

/// Sorts `(element, value)` pairs and checks that the elements form a
/// subalgebra carrying a state; returns the sorted elements, the values in
/// that order, and the subalgebra.
fn prepare(
    m: &FiniteEmv,
    sub: &[usize],
    s0: &[Rat],
) -> Result<(Vec<usize>, Vec<Rat>, FiniteEmv), StatesError> {
    if sub.len() != s0.len() {
        return Err(StatesError::DimensionMismatch {
            expected: sub.len(),
            found: s0.len(),
        });
    }
    let mut pairs: Vec<(usize, Rat)> = sub.iter().copied().zip(s0.iter().cloned()).collect();
    pairs.sort_by_key(|(x, _)| *x);
    pairs.dedup_by_key(|(x, _)| *x);
    if pairs.len() != sub.len() {
        return Err(StatesError::InvalidState("subalgebra elements repeat".into()));
    }
    let elems: Vec<usize> = pairs.iter().map(|(x, _)| *x).collect();
    if let Some(&x) = elems.iter().find(|&&x| x >= m.size()) {
        return Err(StatesError::InvalidState(format!("element index {x} out of range")));
    }
    let closure = subalgebra_closure(m, &elems)?;
    if closure != elems {
        let missing = closure
            .iter()
            .find(|x| elems.binary_search(x).is_err())
            .map(|&x| m.label(x).to_string())
            .unwrap_or_default();
        return Err(crate::structure::StructureError::NotSubalgebra { missing }.into());
    }
    let values: Vec<Rat> = pairs.into_iter().map(|(_, v)| v).collect();
    let m0 = subalgebra(m, &elems)?;
    if m0.size() == 1 {
        return Err(StatesError::NotAStateOnSub {
            reason: "the zero subalgebra carries no state".into(),
            witness: vec![m.label(0).to_string()],
        });
    }
    let space0 = StateSpace::new(&m0)?;
    if let Some((reason, witness)) = space0.state_violation(&values)? {
        return Err(StatesError::NotAStateOnSub { reason, witness });
    }
    Ok((elems, values, m0))
}

fn check_agreement(
    m: &FiniteEmv,
    elems: &[usize],
    values: &[Rat],
    s: &[Rat],
) -> Result<(), StatesError> {
    match elems.iter().zip(values).find(|(&x, v)| s[x] != **v) {
        Some((&x, _)) => Err(StatesError::Disagreement {
            detail: "extension differs on the subalgebra".into(),
            witness: vec![m.label(x).to_string()],
        }),
        None => Ok(()),
    }
}

/// Extends a state on the subalgebra `sub` (values `s0`, aligned with
/// `sub`) to a state on `m` by pinning the state polytope on `sub`.
pub fn horn_tarski_extend(m: &FiniteEmv, sub: &[usize], s0: &[Rat]) -> Result<StateVec, StatesError> {
    let (elems, values, _) = prepare(m, sub, s0)?;
    let space = StateSpace::new(m)?;
    let mut sys = space.polytope().clone();
    for (&x, v) in elems.iter().zip(&values) {
        sys.fix(x, v.clone())?;
    }
    let s = match solve(&sys, None)?.outcome {
        FeasOutcome::Feasible(p) => p,
        FeasOutcome::Infeasible(cert) => {
            let (combo, rhs) = cert.combine(&sys);
            return Err(StatesError::Infeasible {
                detail: format!(
                    "certificate (valid: {}) combines rows to {:?} = {rhs}",
                    cert.verify(&sys),
                    combo.iter().map(Rat::to_string).collect::<Vec<_>>()
                ),
            });
        }
    };
    if let Some((reason, witness)) = space.state_violation(&s)? {
        return Err(StatesError::Disagreement {
            detail: format!("solver point is not a state: {reason}"),
            witness,
        });
    }
    check_agreement(m, &elems, &values, &s)?;
    Ok(s)
}

/// Extends a state-morphism on `sub` to a state-morphism on `m` through a
/// maximal ideal containing its kernel and meeting `sub` exactly in it.
pub fn horn_tarski_extend_morphism(
    m: &FiniteEmv,
    sub: &[usize],
    s0: &[Rat],
) -> Result<StateVec, StatesError> {
    let (elems, values, m0) = prepare(m, sub, s0)?;
    if let Some((x, y)) = super::meet_criterion(&m0, &values)? {
        return Err(StatesError::NotAStateOnSub {
            reason: "not a state-morphism".into(),
            witness: vec![m0.label(x).to_string(), m0.label(y).to_string()],
        });
    }
    let kernel0: Vec<usize> = elems
        .iter()
        .zip(&values)
        .filter(|(_, v)| v.is_zero())
        .map(|(&x, _)| x)
        .collect();
    let generated = ideal_generated(m, &kernel0);
    let space = StateSpace::new(m)?;
    let found = space.maximal_ideals().iter().position(|ideal| {
        generated.is_subset(ideal)
            && elems
                .iter()
                .all(|&x| ideal.contains(x) == kernel0.contains(&x))
    });
    let Some(i) = found else {
        return Err(StatesError::Infeasible {
            detail: "no maximal ideal extends the kernel".into(),
        });
    };
    let s = space.morphisms()[i].clone();
    check_agreement(m, &elems, &values, &s)?;
    Ok(s)
}
