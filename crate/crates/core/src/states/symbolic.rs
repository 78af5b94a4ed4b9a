use std::collections::BTreeMap;

use ratlp::Rat;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, Element, SymbolicEmv};

use super::StatesError;

/// Geometric weights `λ_n = c·q^(n − n0)` for `n >= n0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tail {
    pub n0: u64,
    pub c: Rat,
    pub q: Rat,
}

impl Tail {
    pub fn weight(&self, n: u64) -> Rat {
        if n < self.n0 {
            return Rat::zero();
        }
        let exp = u32::try_from(n - self.n0).unwrap_or(u32::MAX);
        &self.c * &self.q.pow(exp)
    }

    /// `c / (1 − q)`.
    pub fn mass(&self) -> Rat {
        &self.c / &(Rat::one() - &self.q)
    }

    fn is_trivial(&self) -> bool {
        self.c.is_zero()
    }
}

/// `Σ λ_n s_n + λ_∞ s_∞` with finitely many explicit weights and an
/// optional geometric tail; `s_n` is the `n`-th coordinate morphism.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolicState {
    #[serde(default)]
    pub base: Vec<(u64, Rat)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<Tail>,
    #[serde(default = "Rat::zero")]
    pub inf: Rat,
}

/// Display name of the `n`-th state-morphism of a family.
pub fn morphism_name(fam: &SymbolicEmv, n: u64) -> String {
    match fam {
        SymbolicEmv::Representing(_) => format!("~s_{n}"),
        _ => format!("s_{n}"),
    }
}

fn coordinate_family(fam: &SymbolicEmv) -> bool {
    matches!(fam, SymbolicEmv::FinSubsets | SymbolicEmv::FinSupport { .. })
}

impl SymbolicState {
    pub fn zero() -> Self {
        SymbolicState {
            base: Vec::new(),
            tail: None,
            inf: Rat::zero(),
        }
    }

    /// `Σ weights_i s_{n_i}`.
    pub fn finite(weights: &[(u64, Rat)]) -> Self {
        SymbolicState {
            base: weights.to_vec(),
            ..SymbolicState::zero()
        }
    }

    /// The state-morphism `s_n`.
    pub fn morphism(n: u64) -> Self {
        SymbolicState::finite(&[(n, Rat::one())])
    }

    /// `s_∞` on a representing algebra.
    pub fn infinity() -> Self {
        SymbolicState {
            inf: Rat::one(),
            ..SymbolicState::zero()
        }
    }

    pub fn has_tail(&self) -> bool {
        self.tail.as_ref().is_some_and(|t| !t.is_trivial())
    }

    /// Weight of `s_n`.
    pub fn weight(&self, n: u64) -> Rat {
        let explicit: Rat = self
            .base
            .iter()
            .filter(|(k, _)| *k == n)
            .map(|(_, w)| w.clone())
            .sum();
        match &self.tail {
            Some(t) => explicit + t.weight(n),
            None => explicit,
        }
    }

    /// Explicit weights merged by index, zeros dropped.
    pub fn merged_base(&self) -> BTreeMap<u64, Rat> {
        let mut out: BTreeMap<u64, Rat> = BTreeMap::new();
        for (n, w) in &self.base {
            *out.entry(*n).or_insert_with(Rat::zero) += w.clone();
        }
        out.retain(|_, w| !w.is_zero());
        out
    }

    /// Mass of the coordinate part: explicit weights plus the tail sum.
    pub fn mass(&self) -> Rat {
        let explicit: Rat = self.base.iter().map(|(_, w)| w.clone()).sum();
        match &self.tail {
            Some(t) => explicit + t.mass(),
            None => explicit,
        }
    }

    /// `mass + λ_∞`.
    pub fn total(&self) -> Rat {
        self.mass() + self.inf.clone()
    }

    /// Nonnegative weights, a tail ratio in `(0,1)`, and no infinity weight
    /// outside representing algebras.
    pub fn validate(&self, fam: &SymbolicEmv) -> Result<(), StatesError> {
        let supported = coordinate_family(fam)
            || matches!(fam, SymbolicEmv::Representing(inner) if coordinate_family(inner));
        if !supported {
            return Err(StatesError::UnsupportedCarrier(fam.name()));
        }
        if let Some((n, w)) = self.base.iter().find(|(_, w)| w.is_negative()) {
            return Err(StatesError::InvalidState(format!("weight {w} of s_{n} is negative")));
        }
        if let Some(t) = &self.tail {
            if t.c.is_negative() {
                return Err(StatesError::InvalidState("tail scale is negative".into()));
            }
            if !t.q.is_positive() || t.q >= Rat::one() {
                return Err(StatesError::InvalidState("tail ratio must lie in (0,1)".into()));
            }
        }
        if self.inf.is_negative() {
            return Err(StatesError::InvalidState("infinity weight is negative".into()));
        }
        if !self.inf.is_zero() && coordinate_family(fam) {
            return Err(StatesError::InvalidState(
                "infinity weight needs a representing algebra".into(),
            ));
        }
        Ok(())
    }

    /// Value at an element of `fam`.
    pub fn eval(&self, fam: &SymbolicEmv, x: &Element) -> Result<Rat, StatesError> {
        let foreign = || -> StatesError {
            AlgebraError::ForeignElement {
                element: x.to_string(),
            }
            .into()
        };
        if !fam.contains(x) {
            return Err(foreign());
        }
        match (fam, x) {
            (SymbolicEmv::FinSubsets, Element::Set(s)) => Ok(s.iter().map(|&n| self.weight(n)).sum()),
            (SymbolicEmv::FinSupport { k }, Element::Map(f)) => Ok(f
                .iter()
                .map(|(&n, &level)| self.weight(n) * Rat::new(level as i64, *k as i64))
                .sum()),
            (SymbolicEmv::Representing(inner), Element::Direct(y)) => self.eval(inner, y),
            (SymbolicEmv::Representing(inner), Element::Complement(y)) => {
                Ok(self.total() - self.eval(inner, y)?)
            }
            (SymbolicEmv::FinSubsets | SymbolicEmv::FinSupport { .. }, _)
            | (SymbolicEmv::Representing(_), _) => Err(foreign()),
            (SymbolicEmv::ChangLex, _) => Err(StatesError::UnsupportedCarrier(fam.name())),
        }
    }
}

fn inner_of(fam: &SymbolicEmv) -> Result<&SymbolicEmv, StatesError> {
    match fam {
        SymbolicEmv::Representing(inner) => Ok(inner),
        other => Err(StatesError::UnsupportedCarrier(format!(
            "{} is not a representing algebra",
            other.name()
        ))),
    }
}

/// The unique state on the representing algebra extending a pre-state on
/// `inner`: the same weights and `λ_∞ = 1 − mass`.
pub fn extend_to_representing(
    inner: &SymbolicEmv,
    s: &SymbolicState,
) -> Result<SymbolicState, StatesError> {
    let n = SymbolicEmv::representing(inner.clone())?;
    s.validate(inner)?;
    let mass = s.mass();
    if mass > Rat::one() {
        return Err(StatesError::MassExceedsOne {
            mass: mass.to_string(),
        });
    }
    let extended = SymbolicState {
        inf: Rat::one() - mass,
        ..s.clone()
    };
    extended.validate(&n)?;
    Ok(extended)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Restriction {
    pub state: SymbolicState,
    pub mass: Rat,
    /// The restriction attains 1, i.e. the infinity weight vanishes and the
    /// coordinate mass is carried by finitely many weights.
    pub is_state: bool,
}

/// Restricts a state on a representing algebra to its inner algebra.
pub fn restrict_to_inner(fam: &SymbolicEmv, s: &SymbolicState) -> Result<Restriction, StatesError> {
    let inner = inner_of(fam)?;
    s.validate(fam)?;
    let total = s.total();
    if total > Rat::one() {
        return Err(StatesError::MassExceedsOne {
            mass: total.to_string(),
        });
    }
    if !total.is_one() {
        return Err(StatesError::NotAState {
            reason: format!("total mass {total} on {}", fam.name()),
            witness: vec![total.to_string()],
        });
    }
    let state = SymbolicState {
        inf: Rat::zero(),
        ..s.clone()
    };
    state.validate(inner)?;
    let mass = state.mass();
    let is_state = mass.is_one() && !state.has_tail();
    Ok(Restriction {
        state,
        mass,
        is_state,
    })
}
