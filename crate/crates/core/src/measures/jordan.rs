use ratlp::Rat;
use serde::{Deserialize, Serialize};

use crate::algebra::FiniteEmv;

use super::{MeasureSpace, MeasuresError, SignedMeasureVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JordanOp {
    Join,
    Meet,
    Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JordanReport {
    pub join: SignedMeasureVec,
    pub meet: SignedMeasureVec,
    /// `m1⁺ = m1 ∨ 0`.
    pub pos: SignedMeasureVec,
    /// `m1⁻ = −(m1 ∧ 0)`.
    pub neg: SignedMeasureVec,
}

/// `m1 <=⁺ m2`: pointwise order.
pub fn leq_plus(m1: &[Rat], m2: &[Rat]) -> bool {
    m1.len() == m2.len() && m1.iter().zip(m2).all(|(a, b)| a <= b)
}

fn negate(m: &[Rat]) -> SignedMeasureVec {
    m.iter().map(|v| -v).collect()
}

impl MeasureSpace<'_> {
    /// `x ↦ max {m1(x1) + m2(x2) : x = x1 + x2}` (or `min` for the meet).
    fn two_part(&self, m1: &[Rat], m2: &[Rat], join: bool) -> SignedMeasureVec {
        let n = self.algebra().size();
        (0..n)
            .map(|x| {
                let values = (0..n).filter_map(|x1| {
                    self.difference(x, x1).map(|x2| &m1[x1] + &m2[x2])
                });
                if join { values.max() } else { values.min() }.expect("0 + x = x")
            })
            .collect()
    }

    /// Join by two-part decompositions, checked against the
    /// sup-construction of the pointwise maximum.
    pub fn join(&self, m1: &[Rat], m2: &[Rat]) -> Result<SignedMeasureVec, MeasuresError> {
        self.require_additive(m1)?;
        self.require_additive(m2)?;
        let join = self.two_part(m1, m2, true);
        let d: Vec<Rat> = m1.iter().zip(m2).map(|(a, b)| a.clone().max(b.clone())).collect();
        if self.sup_construction(&d)? != join {
            return Err(MeasuresError::Disagreement {
                detail: "decomposition join differs from the sup-construction".into(),
                witness: Vec::new(),
            });
        }
        Ok(join)
    }

    /// Meet by two-part decompositions, checked against `−((−m1) ∨ (−m2))`.
    pub fn meet(&self, m1: &[Rat], m2: &[Rat]) -> Result<SignedMeasureVec, MeasuresError> {
        self.require_additive(m1)?;
        self.require_additive(m2)?;
        let meet = self.two_part(m1, m2, false);
        let d: Vec<Rat> = m1.iter().zip(m2).map(|(a, b)| -(a.clone().min(b.clone()))).collect();
        if negate(&self.sup_construction(&d)?) != meet {
            return Err(MeasuresError::Disagreement {
                detail: "decomposition meet differs from the sup-construction".into(),
                witness: Vec::new(),
            });
        }
        Ok(meet)
    }

    /// `(m⁺, m⁻)` with `m = m⁺ − m⁻`, both positive measures.
    pub fn jordan_parts(&self, m: &[Rat]) -> Result<(SignedMeasureVec, SignedMeasureVec), MeasuresError> {
        let zero = vec![Rat::zero(); m.len()];
        let pos = self.join(m, &zero)?;
        let neg = negate(&self.meet(m, &zero)?);
        let recombined: Vec<Rat> = pos.iter().zip(&neg).map(|(p, q)| p - q).collect();
        if recombined != m || pos.iter().chain(&neg).any(Rat::is_negative) {
            return Err(MeasuresError::Disagreement {
                detail: "Jordan decomposition does not recombine to the measure".into(),
                witness: Vec::new(),
            });
        }
        Ok((pos, neg))
    }
}

/// Join, meet and the Jordan decomposition of `m1`.
pub fn jordan_lattice(m: &FiniteEmv, m1: &[Rat], m2: &[Rat]) -> Result<JordanReport, MeasuresError> {
    let space = MeasureSpace::new(m)?;
    let join = space.join(m1, m2)?;
    let meet = space.meet(m1, m2)?;
    let (pos, neg) = space.jordan_parts(m1)?;
    Ok(JordanReport { join, meet, pos, neg })
}
