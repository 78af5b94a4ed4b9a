use ratlp::{affine_rank, solve, vertex_test, Bounds, FeasOutcome, LinSystem, Rat};
use serde::Serialize;

use crate::algebra::FiniteEmv;
use crate::structure::{chain_heights, is_ideal, maximal_ideals, quotient, Ideal, StructureError};

use super::StatesError;

/// Values indexed by the finite carrier.
pub type StateVec = Vec<Rat>;

/// Defined sums `x + y = z` with `0 < x <= y` in index order.
fn defined_sums(m: &FiniteEmv) -> Result<Vec<(usize, usize, usize)>, StatesError> {
    let n = m.size();
    let mut out = Vec::new();
    for x in 1..n {
        for y in x..n {
            if let Some(z) = m.partial_add(x, y)? {
                out.push((x, y, z));
            }
        }
    }
    Ok(out)
}

fn polytope_from(m: &FiniteEmv, sums: &[(usize, usize, usize)]) -> Result<LinSystem, StatesError> {
    let mut sys = LinSystem::new();
    for x in 0..m.size() {
        sys.add_var(m.label(x), Bounds::unit());
    }
    sys.fix(0, Rat::zero())?;
    sys.fix(m.top()?, Rat::one())?;
    for &(x, y, z) in sums {
        sys.add_row(
            [(x, Rat::one()), (y, Rat::one()), (z, -Rat::one())],
            Rat::zero(),
        )?;
    }
    Ok(sys)
}

/// One `[0,1]` variable per element, `s(0) = 0`, `s(top) = 1`, and
/// `s(x) + s(y) = s(x + y)` for every defined sum.
pub fn state_polytope(m: &FiniteEmv) -> Result<LinSystem, StatesError> {
    polytope_from(m, &defined_sums(m)?)
}

fn wit(m: &FiniteEmv, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| m.label(x).to_string()).collect()
}

fn first_pair(
    m: &FiniteEmv,
    mut bad: impl FnMut(usize, usize) -> Result<bool, StatesError>,
) -> Result<Option<(usize, usize)>, StatesError> {
    let n = m.size();
    for x in 0..n {
        for y in x..n {
            if bad(x, y)? {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// First pair with `s(x ∧ y) ≠ min(s(x), s(y))`.
pub fn meet_criterion(m: &FiniteEmv, s: &[Rat]) -> Result<Option<(usize, usize)>, StatesError> {
    let order = m.natural_order()?;
    first_pair(m, |x, y| {
        Ok(s[order.meet(x, y)] != s[x].clone().min(s[y].clone()))
    })
}

/// First pair with `s(x ∨ y) ≠ max(s(x), s(y))`.
pub fn join_criterion(m: &FiniteEmv, s: &[Rat]) -> Result<Option<(usize, usize)>, StatesError> {
    let order = m.natural_order()?;
    first_pair(m, |x, y| {
        Ok(s[order.join(x, y)] != s[x].clone().max(s[y].clone()))
    })
}

/// First pair with `s(x ⊕ y) ≠ min(s(x) + s(y), 1)`.
pub fn oplus_criterion(m: &FiniteEmv, s: &[Rat]) -> Result<Option<(usize, usize)>, StatesError> {
    first_pair(m, |x, y| {
        Ok(s[m.oplus(x, y)] != (&s[x] + &s[y]).min(Rat::one()))
    })
}

/// First pair violating `s(x ∨ y) + s(x ∧ y) = s(x) + s(y)` or
/// `s(x ⊕ y) + s(x ⊙ y) = s(x) + s(y)`.
pub fn state_identities(m: &FiniteEmv, s: &[Rat]) -> Result<Option<(usize, usize)>, StatesError> {
    let order = m.natural_order()?;
    let ops = m.derived()?;
    first_pair(m, |x, y| {
        let sum = &s[x] + &s[y];
        let lattice = &s[order.join(x, y)] + &s[order.meet(x, y)];
        let monoid = &s[m.oplus(x, y)] + &s[ops.odot(x, y)];
        Ok(lattice != sum || monoid != sum)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateCheck {
    pub in_unit_interval: bool,
    pub is_additive: bool,
    /// A defined sum `x + y` with `s(x + y) ≠ s(x) + s(y)`.
    pub additivity_witness: Option<(usize, usize)>,
    pub attains_one: bool,
    pub is_state: bool,
    /// A state satisfying `s(x ∧ y) = min(s(x), s(y))` on every pair.
    pub is_morphism: bool,
    pub morphism_witness: Option<(usize, usize)>,
    /// A vertex of the state polytope.
    pub is_extremal: bool,
    pub kernel: Vec<usize>,
    pub kernel_is_maximal: bool,
}

/// Precomputed data for repeated state computations on one algebra.
#[derive(Debug, Clone)]
pub struct StateSpace<'a> {
    m: &'a FiniteEmv,
    sums: Vec<(usize, usize, usize)>,
    polytope: LinSystem,
    maximal: Vec<Ideal>,
    morphisms: Vec<StateVec>,
}

impl<'a> StateSpace<'a> {
    pub fn new(m: &'a FiniteEmv) -> Result<Self, StatesError> {
        let maximal = maximal_ideals(m)?;
        let sums = defined_sums(m)?;
        let polytope = polytope_from(m, &sums)?;
        let mut morphisms = Vec::with_capacity(maximal.len());
        for ideal in &maximal {
            let q = quotient(m, ideal)?;
            let heights = chain_heights(&q.algebra).ok_or_else(|| StructureError::Disagreement {
                detail: "quotient by a maximal ideal is not a chain".into(),
                witness: ideal.labels(m),
            })?;
            let h = *heights.iter().max().expect("nonempty quotient") as i64;
            let s: StateVec = (0..m.size())
                .map(|x| Rat::new(heights[q.projection[x]] as i64, h))
                .collect();
            morphisms.push(s);
        }
        let space = StateSpace {
            m,
            sums,
            polytope,
            maximal,
            morphisms,
        };
        for s in &space.morphisms {
            let laws = [meet_criterion(m, s)?, join_criterion(m, s)?, oplus_criterion(m, s)?];
            if let Some((x, y)) = laws.into_iter().flatten().next() {
                return Err(StatesError::Disagreement {
                    detail: "enumerated state-morphism breaks a morphism law".into(),
                    witness: wit(m, &[x, y]),
                });
            }
            if !space.polytope.is_feasible_point(s) {
                return Err(StatesError::Disagreement {
                    detail: "enumerated state-morphism is not a state".into(),
                    witness: Vec::new(),
                });
            }
        }
        Ok(space)
    }

    pub fn algebra(&self) -> &FiniteEmv {
        self.m
    }

    pub fn polytope(&self) -> &LinSystem {
        &self.polytope
    }

    pub fn maximal_ideals(&self) -> &[Ideal] {
        &self.maximal
    }

    /// State-morphisms, one per maximal ideal, in ideal order.
    pub fn morphisms(&self) -> &[StateVec] {
        &self.morphisms
    }

    fn dims(&self, f: &[Rat]) -> Result<(), StatesError> {
        if f.len() != self.m.size() {
            return Err(StatesError::DimensionMismatch {
                expected: self.m.size(),
                found: f.len(),
            });
        }
        Ok(())
    }

    /// First failure of additivity, `(0, 0)` standing for `s(0) ≠ 0`.
    pub fn additivity_witness(&self, f: &[Rat]) -> Option<(usize, usize)> {
        if !f[0].is_zero() {
            return Some((0, 0));
        }
        self.sums
            .iter()
            .find(|&&(x, y, z)| &f[x] + &f[y] != f[z])
            .map(|&(x, y, _)| (x, y))
    }

    /// `None` for a state, otherwise the reason and a witness.
    pub fn state_violation(&self, f: &[Rat]) -> Result<Option<(String, Vec<String>)>, StatesError> {
        self.dims(f)?;
        let m = self.m;
        if let Some(x) = f.iter().position(|v| v.is_negative() || *v > Rat::one()) {
            return Ok(Some((format!("value {} outside [0,1]", f[x]), wit(m, &[x]))));
        }
        if let Some((x, y)) = self.additivity_witness(f) {
            let detail = if (x, y) == (0, 0) {
                "s(0) ≠ 0".to_string()
            } else {
                let z = m.oplus(x, y);
                format!("s({}) + s({}) ≠ s({})", m.label(x), m.label(y), m.label(z))
            };
            return Ok(Some((detail, wit(m, &[x, y]))));
        }
        let top = m.top()?;
        if !f[top].is_one() {
            return Ok(Some(("value 1 is not attained".into(), wit(m, &[top]))));
        }
        Ok(None)
    }

    /// Additivity, range, morphism criterion, kernel maximality and the
    /// vertex test; for states the last three must agree.
    pub fn check(&self, f: &[Rat]) -> Result<StateCheck, StatesError> {
        self.dims(f)?;
        let m = self.m;
        let n = m.size();
        let in_unit_interval = f.iter().all(|v| !v.is_negative() && *v <= Rat::one());
        let additivity_witness = self.additivity_witness(f);
        let is_additive = additivity_witness.is_none();
        let attains_one = f.iter().any(Rat::is_one);
        let is_state = in_unit_interval && is_additive && f[m.top()?].is_one();
        let morphism_witness = meet_criterion(m, f)?;
        let is_morphism = is_state && morphism_witness.is_none();
        let kernel: Vec<usize> = (0..n).filter(|&x| f[x].is_zero()).collect();
        let kernel_ideal = Ideal::from_elements(n, kernel.iter().copied());
        let kernel_is_maximal = self.maximal.contains(&kernel_ideal);
        let is_extremal = vertex_test(f, &self.polytope)?;
        if is_state {
            if !is_ideal(m, &kernel_ideal) {
                return Err(StatesError::Disagreement {
                    detail: "kernel of a state is not an ideal".into(),
                    witness: kernel_ideal.labels(m),
                });
            }
            if is_morphism != kernel_is_maximal || is_morphism != is_extremal {
                return Err(StatesError::Disagreement {
                    detail: format!(
                        "morphism criterion {is_morphism}, maximal kernel {kernel_is_maximal}, vertex {is_extremal}"
                    ),
                    witness: f.iter().map(Rat::to_string).collect(),
                });
            }
        }
        Ok(StateCheck {
            in_unit_interval,
            is_additive,
            additivity_witness,
            attains_one,
            is_state,
            is_morphism,
            morphism_witness,
            is_extremal,
            kernel,
            kernel_is_maximal,
        })
    }

    /// The unique convex weights over [`StateSpace::morphisms`] giving `s`.
    pub fn decompose(&self, s: &[Rat]) -> Result<Vec<Rat>, StatesError> {
        if let Some((reason, witness)) = self.state_violation(s)? {
            return Err(StatesError::NotAState { reason, witness });
        }
        let k = self.morphisms.len();
        let mut sys = LinSystem::new();
        for i in 0..k {
            sys.add_var(format!("w{i}"), Bounds::non_negative());
        }
        sys.add_row((0..k).map(|i| (i, Rat::one())), Rat::one())?;
        for (x, target) in s.iter().enumerate() {
            sys.add_row(
                (0..k).map(|i| (i, self.morphisms[i][x].clone())),
                target.clone(),
            )?;
        }
        let weights = match solve(&sys, None)?.outcome {
            FeasOutcome::Feasible(w) => w,
            FeasOutcome::Infeasible(_) => return Err(StatesError::DecompositionInfeasible),
        };
        let rank = affine_rank(&self.morphisms)?;
        if rank + 1 != k {
            return Err(StatesError::Disagreement {
                detail: format!("state-morphisms have affine rank {rank}, expected {}", k - 1),
                witness: Vec::new(),
            });
        }
        for (x, target) in s.iter().enumerate() {
            let back: Rat = (0..k).map(|i| &weights[i] * &self.morphisms[i][x]).sum();
            if back != *target {
                return Err(StatesError::Disagreement {
                    detail: "decomposition does not reproduce the state".into(),
                    witness: wit(self.m, &[x]),
                });
            }
        }
        Ok(weights)
    }
}

/// State-morphisms of a finite algebra, one per maximal ideal:
/// `s(x) = height(x/I) / height(top/I)`.
pub fn state_morphisms(m: &FiniteEmv) -> Result<Vec<StateVec>, StatesError> {
    Ok(StateSpace::new(m)?.morphisms)
}

pub fn check_state(m: &FiniteEmv, f: &[Rat]) -> Result<StateCheck, StatesError> {
    StateSpace::new(m)?.check(f)
}

/// Convex weights over [`state_morphisms`] reproducing `s` exactly.
pub fn km_decompose(m: &FiniteEmv, s: &[Rat]) -> Result<Vec<Rat>, StatesError> {
    StateSpace::new(m)?.decompose(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    fn prod21() -> FiniteEmv {
        FiniteEmv::product(&[FiniteEmv::chain(2), FiniteEmv::chain(1)])
    }

    #[test]
    fn chain_has_one_morphism() {
        let ms = state_morphisms(&FiniteEmv::chain(2)).unwrap();
        assert_eq!(ms, vec![vec![r(0, 1), r(1, 2), r(1, 1)]]);
    }

    #[test]
    fn product_morphisms() {
        let p = prod21();
        let ms = state_morphisms(&p).unwrap();
        assert_eq!(ms.len(), 2);
        let half_i: StateVec = (0..6).map(|x| r((x / 2) as i64, 2)).collect();
        let j: StateVec = (0..6).map(|x| r((x % 2) as i64, 1)).collect();
        assert!(ms.contains(&half_i));
        assert!(ms.contains(&j));
    }

    #[test]
    fn boolean_morphisms_are_atom_indicators() {
        let ms = state_morphisms(&FiniteEmv::boolean(2)).unwrap();
        let ind = |bit: usize| -> StateVec { (0..4).map(|x| r(((x >> bit) & 1) as i64, 1)).collect() };
        assert_eq!(ms, vec![ind(0), ind(1)]);
    }

    #[test]
    fn check_state_examples() {
        let c = FiniteEmv::chain(2);
        let rep = check_state(&c, &[r(0, 1), r(1, 2), r(1, 1)]).unwrap();
        assert!(rep.is_state && rep.is_morphism && rep.is_extremal && rep.kernel_is_maximal);

        let p = prod21();
        let mid: StateVec = (0..6).map(|x| r((x / 2) as i64, 4) + r((x % 2) as i64, 2)).collect();
        let rep = check_state(&p, &mid).unwrap();
        assert!(rep.is_state && !rep.is_morphism && !rep.is_extremal && !rep.kernel_is_maximal);
        let (x, y) = rep.morphism_witness.unwrap();
        let meet = p.meet(x, y).unwrap();
        assert_ne!(mid[meet], mid[x].clone().min(mid[y].clone()));

        let rep = check_state(&c, &[r(0, 1), r(1, 4), r(1, 1)]).unwrap();
        assert!(!rep.is_additive && !rep.is_state);
        assert_eq!(rep.additivity_witness, Some((1, 1)));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            check_state(&FiniteEmv::chain(2), &[r(0, 1)]),
            Err(StatesError::DimensionMismatch { expected: 3, found: 1 })
        ));
    }

    #[test]
    fn decomposition_examples() {
        let p = prod21();
        let space = StateSpace::new(&p).unwrap();
        let mid: StateVec = (0..6).map(|x| r((x / 2) as i64, 4) + r((x % 2) as i64, 2)).collect();
        assert_eq!(space.decompose(&mid).unwrap(), vec![r(1, 2), r(1, 2)]);
        for (i, t) in space.morphisms().iter().enumerate() {
            let w = space.decompose(t).unwrap();
            for (j, wj) in w.iter().enumerate() {
                assert_eq!(*wj, if i == j { r(1, 1) } else { r(0, 1) });
            }
        }
        let b = FiniteEmv::boolean(2);
        let w = km_decompose(&b, &[r(0, 1), r(1, 3), r(2, 3), r(1, 1)]).unwrap();
        assert_eq!(w, vec![r(1, 3), r(2, 3)]);
        assert!(matches!(
            km_decompose(&b, &[r(0, 1), r(1, 3), r(1, 3), r(1, 1)]),
            Err(StatesError::NotAState { .. })
        ));
    }

    #[test]
    fn identities_hold_for_morphisms() {
        let p = FiniteEmv::product(&[FiniteEmv::chain(2), FiniteEmv::chain(2)]);
        for s in state_morphisms(&p).unwrap() {
            assert_eq!(state_identities(&p, &s).unwrap(), None);
        }
    }
}
