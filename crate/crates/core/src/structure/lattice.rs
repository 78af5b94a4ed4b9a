use crate::algebra::{verify_finite, AxiomId, FiniteEmv};

use super::StructureError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructedLattice {
    pub join: Vec<Vec<usize>>,
    pub meet: Vec<Vec<usize>>,
}

/// Rebuilds `∨` and `∧` from `⊕` alone:
/// `x ∨ y = (x ⊙_a λ_a(y)) ⊕ y` and `x ∧ y = λ_a(λ_a(x) ∨ λ_a(y))`, with `a`
/// the least idempotent above `x ⊕ y`.
///
/// The hypotheses (commutative naturally ordered monoid, MV intervals,
/// idempotent cover) are checked first; the result must equal the lattice
/// tables of the natural order.
pub fn monoid_reconstruct(m: &FiniteEmv) -> Result<ReconstructedLattice, StructureError> {
    let report = verify_finite(m);
    let hypotheses = [
        AxiomId::Commutativity,
        AxiomId::Associativity,
        AxiomId::NeutralElement,
        AxiomId::PartialOrder,
        AxiomId::IntervalClosure,
        AxiomId::TopAbsorption,
        AxiomId::LambdaMinimum,
        AxiomId::Involution,
        AxiomId::Chang,
        AxiomId::IdempotentCover,
    ];
    if let Some(v) = report.violations.iter().find(|v| hypotheses.contains(&v.axiom)) {
        return Err(StructureError::HypothesisFailure {
            axiom: format!("{:?}", v.axiom),
            witness: v.witness.clone(),
            detail: v.detail.clone(),
        });
    }
    let n = m.size();
    for x in 0..n {
        for y in 0..n {
            if !m.leq(x, y) {
                continue;
            }
            for z in 0..n {
                if !m.leq(m.oplus(x, z), m.oplus(y, z)) {
                    return Err(StructureError::HypothesisFailure {
                        axiom: "OrderedMonoid".into(),
                        witness: [x, y, z].iter().map(|&e| m.label(e).to_string()).collect(),
                        detail: "x <= y but x ⊕ z is not below y ⊕ z".into(),
                    });
                }
            }
        }
    }

    let join_in = |a: usize, x: usize, y: usize| -> Result<usize, StructureError> {
        let ly = m.lambda(a, y)?;
        Ok(m.oplus(m.odot_with(a, x, ly)?, y))
    };
    let mut join = vec![vec![0; n]; n];
    let mut meet = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            let a = m.idempotent_above(m.oplus(x, y))?;
            join[x][y] = join_in(a, x, y)?;
            let j = join_in(a, m.lambda(a, x)?, m.lambda(a, y)?)?;
            meet[x][y] = m.lambda(a, j)?;
        }
    }

    let order = m.natural_order()?;
    if join != order.join_rows() || meet != order.meet_rows() {
        let (x, y) = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| join[x][y] != order.join(x, y) || meet[x][y] != order.meet(x, y))
            .expect("tables differ somewhere");
        return Err(StructureError::Disagreement {
            detail: "reconstructed lattice differs from the natural order".into(),
            witness: vec![m.label(x).to_string(), m.label(y).to_string()],
        });
    }
    Ok(ReconstructedLattice { join, meet })
}
