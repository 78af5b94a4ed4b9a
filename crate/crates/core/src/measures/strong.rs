use std::collections::{BTreeMap, BTreeSet};

use ratlp::Rat;

use crate::algebra::{Element, SymbolicEmv};
use crate::states::SymbolicState;

use super::MeasuresError;

/// Largest subset size on which the join formula is cross-checked.
const CHECK_ARITY: usize = 5;

fn weights(m: &SymbolicState) -> Result<BTreeMap<u64, Rat>, MeasuresError> {
    if m.tail.is_some() {
        return Err(MeasuresError::NotFiniteSupport);
    }
    if !m.inf.is_zero() {
        return Err(MeasuresError::InvalidMeasure("infinity weight on finite subsets".into()));
    }
    let w = m.merged_base();
    if let Some((n, v)) = w.iter().find(|(_, v)| v.is_negative()) {
        return Err(MeasuresError::InvalidMeasure(format!("weight {v} of s_{n} is negative")));
    }
    Ok(w)
}

fn subsets_up_to(items: &[u64], k: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &x in items {
        let grown: Vec<Vec<u64>> = out
            .iter()
            .filter(|s| s.len() < k)
            .map(|s| {
                let mut t = s.clone();
                t.push(x);
                t
            })
            .collect();
        out.extend(grown);
    }
    out
}

/// Join of two finite-support measures on finite subsets: the coordinatewise
/// maximum of weights, checked against `max {m1(A1) + m2(A2) : A = A1 ⊔ A2}`
/// on every subset of the joint support with at most five elements.
pub fn strong_join_t(m1: &SymbolicState, m2: &SymbolicState) -> Result<SymbolicState, MeasuresError> {
    let (w1, w2) = (weights(m1)?, weights(m2)?);
    let support: BTreeSet<u64> = w1.keys().chain(w2.keys()).copied().collect();
    let zero = Rat::zero();
    let base: Vec<(u64, Rat)> = support
        .iter()
        .map(|n| {
            let a = w1.get(n).unwrap_or(&zero).clone();
            let b = w2.get(n).unwrap_or(&zero).clone();
            (*n, a.max(b))
        })
        .filter(|(_, w)| !w.is_zero())
        .collect();
    let join = SymbolicState::finite(&base);
    let t = SymbolicEmv::FinSubsets;
    let items: Vec<u64> = support.into_iter().collect();
    for a in subsets_up_to(&items, CHECK_ARITY) {
        let formula = (0u32..1 << a.len())
            .map(|mask| {
                let (a1, a2): (Vec<(usize, u64)>, Vec<(usize, u64)>) =
                    a.iter().copied().enumerate().partition(|(i, _)| mask & (1 << i) != 0);
                let a1 = Element::set(a1.into_iter().map(|(_, x)| x));
                let a2 = Element::set(a2.into_iter().map(|(_, x)| x));
                Ok(m1.eval(&t, &a1)? + m2.eval(&t, &a2)?)
            })
            .collect::<Result<Vec<Rat>, MeasuresError>>()?
            .into_iter()
            .max()
            .expect("at least the trivial split");
        let set = Element::set(a.iter().copied());
        if join.eval(&t, &set)? != formula {
            return Err(MeasuresError::Disagreement {
                detail: "coordinatewise join differs from the decomposition formula".into(),
                witness: vec![set.to_string()],
            });
        }
    }
    Ok(join)
}
