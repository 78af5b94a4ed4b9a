use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratlp::Rat;
use serde::Serialize;

use crate::algebra::{Element, FiniteEmv, SymbolicEmv, PAIR_CAP};

use super::{StateSpace, StatesError, SymbolicState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PreStateClass {
    Zero,
    PreStateNotStrong,
    StrongPreStateNotState,
    State,
    StateMorphism,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub class: PreStateClass,
    /// `sup {f(x)}` in closed form.
    pub sup: Rat,
    pub attained: bool,
    /// A pair with `f(x ∧ y) ≠ min(f(x), f(y))`, if one was found.
    pub morphism_witness: Option<Vec<String>>,
    /// Sample bound used on symbolic carriers.
    pub budget: Option<usize>,
    pub sample_size: Option<usize>,
}

fn class_of(sup: &Rat, attained: bool, morphism: bool) -> PreStateClass {
    if sup.is_zero() {
        PreStateClass::Zero
    } else if !attained {
        PreStateClass::PreStateNotStrong
    } else if !sup.is_one() {
        PreStateClass::StrongPreStateNotState
    } else if morphism {
        PreStateClass::StateMorphism
    } else {
        PreStateClass::State
    }
}

/// Classifies an additive `[0,1]`-valued functional on a finite algebra.
pub fn classify_prestate(m: &FiniteEmv, f: &[Rat]) -> Result<ClassReport, StatesError> {
    let space = StateSpace::new(m)?;
    if f.len() != m.size() {
        return Err(StatesError::DimensionMismatch {
            expected: m.size(),
            found: f.len(),
        });
    }
    if let Some((x, y)) = space.additivity_witness(f) {
        return Err(StatesError::NotAdditive {
            witness: vec![m.label(x).to_string(), m.label(y).to_string()],
            detail: format!("at ({}, {})", m.label(x), m.label(y)),
        });
    }
    if let Some(v) = f.iter().find(|v| v.is_negative() || **v > Rat::one()) {
        return Err(StatesError::InvalidState(format!("value {v} outside [0,1]")));
    }
    let sup = f.iter().cloned().max().expect("nonempty carrier");
    let witness = super::meet_criterion(m, f)?;
    let class = class_of(&sup, true, witness.is_none());
    if matches!(class, PreStateClass::State | PreStateClass::StateMorphism) {
        let check = space.check(f)?;
        if check.is_morphism != (class == PreStateClass::StateMorphism) {
            return Err(StatesError::Disagreement {
                detail: "classification and state check differ".into(),
                witness: Vec::new(),
            });
        }
    }
    Ok(ClassReport {
        class,
        sup,
        attained: true,
        morphism_witness: witness.map(|(x, y)| vec![m.label(x).to_string(), m.label(y).to_string()]),
        budget: None,
        sample_size: None,
    })
}

fn sample_pairs(len: usize, seed: u64) -> Vec<(usize, usize)> {
    if len * len <= PAIR_CAP {
        return (0..len).flat_map(|x| (0..len).map(move |y| (x, y))).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..PAIR_CAP)
        .map(|_| (rng.gen_range(0..len), rng.gen_range(0..len)))
        .collect()
}

/// Single nonzero weight equal to 1.
fn is_structural_morphism(fam: &SymbolicEmv, f: &SymbolicState) -> bool {
    let base = f.merged_base();
    let single = !f.has_tail() && base.len() == 1 && base.values().all(Rat::is_one);
    match fam {
        SymbolicEmv::Representing(_) => {
            (single && f.inf.is_zero()) || (f.inf.is_one() && base.is_empty() && !f.has_tail())
        }
        _ => single,
    }
}

/// Classifies a symbolic pre-state. Additivity and the morphism criterion
/// are checked on pairs from `enumerate(budget)` (a seeded sample when there
/// are too many); the supremum comes from the weights.
pub fn classify_symbolic(
    fam: &SymbolicEmv,
    f: &SymbolicState,
    budget: usize,
    seed: u64,
) -> Result<ClassReport, StatesError> {
    f.validate(fam)?;
    let total = f.total();
    if total > Rat::one() {
        return Err(StatesError::MassExceedsOne {
            mass: total.to_string(),
        });
    }
    let sample = fam.enumerate(budget);
    let values: Vec<Rat> = sample
        .iter()
        .map(|x| f.eval(fam, x))
        .collect::<Result<_, _>>()?;
    let pairs = sample_pairs(sample.len(), seed);
    let mut witness: Option<Vec<String>> = None;
    for &(i, j) in &pairs {
        let (x, y): (&Element, &Element) = (&sample[i], &sample[j]);
        if let Some(z) = fam.partial_add(x, y)? {
            if f.eval(fam, &z)? != &values[i] + &values[j] {
                return Err(StatesError::NotAdditive {
                    witness: vec![x.to_string(), y.to_string()],
                    detail: format!("f({x} + {y}) ≠ f({x}) + f({y})"),
                });
            }
        }
        if witness.is_none() {
            let meet = fam.meet(x, y)?;
            if f.eval(fam, &meet)? != values[i].clone().min(values[j].clone()) {
                witness = Some(vec![x.to_string(), y.to_string()]);
            }
        }
    }
    let (sup, attained) = match fam {
        SymbolicEmv::Representing(_) => (total, true),
        _ => (f.mass(), !f.has_tail()),
    };
    let structural = is_structural_morphism(fam, f);
    if structural && witness.is_some() {
        return Err(StatesError::Disagreement {
            detail: "a coordinate morphism fails the meet criterion".into(),
            witness: witness.unwrap_or_default(),
        });
    }
    Ok(ClassReport {
        class: class_of(&sup, attained, structural),
        sup,
        attained,
        morphism_witness: witness,
        budget: Some(budget),
        sample_size: Some(sample.len()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::Tail;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    #[test]
    fn subset_examples() {
        let t = SymbolicEmv::FinSubsets;
        let geo = SymbolicState {
            base: vec![],
            tail: Some(Tail { n0: 1, c: r(1, 2), q: r(1, 2) }),
            inf: r(0, 1),
        };
        let rep = classify_symbolic(&t, &geo, 6, 0).unwrap();
        assert_eq!(rep.class, PreStateClass::PreStateNotStrong);
        assert_eq!(rep.sup, r(1, 1));

        let s = SymbolicState::finite(&[(1, r(1, 3)), (4, r(2, 3))]);
        assert_eq!(classify_symbolic(&t, &s, 6, 0).unwrap().class, PreStateClass::State);

        let half = SymbolicState::finite(&[(1, r(1, 2))]);
        let rep = classify_symbolic(&t, &half, 6, 0).unwrap();
        assert_eq!(rep.class, PreStateClass::StrongPreStateNotState);
        assert_eq!(rep.sup, r(1, 2));

        assert_eq!(
            classify_symbolic(&t, &SymbolicState::morphism(2), 6, 0).unwrap().class,
            PreStateClass::StateMorphism
        );
        assert_eq!(
            classify_symbolic(&t, &SymbolicState::zero(), 6, 0).unwrap().class,
            PreStateClass::Zero
        );
    }

    #[test]
    fn representing_morphisms() {
        let n = SymbolicEmv::representing(SymbolicEmv::FinSubsets).unwrap();
        for s in [SymbolicState::infinity(), SymbolicState::morphism(2)] {
            let rep = classify_symbolic(&n, &s, 4, 0).unwrap();
            assert_eq!(rep.class, PreStateClass::StateMorphism);
            assert!(rep.morphism_witness.is_none());
        }
        let mix = SymbolicState {
            base: vec![(1, r(1, 2))],
            tail: None,
            inf: r(1, 2),
        };
        let rep = classify_symbolic(&n, &mix, 4, 0).unwrap();
        assert_eq!(rep.class, PreStateClass::State);
        assert!(rep.morphism_witness.is_some());
    }

    #[test]
    fn finite_examples() {
        let c = FiniteEmv::chain(2);
        let f = |v: [i64; 3], q| v.iter().map(|&p| r(p, q)).collect::<Vec<_>>();
        assert_eq!(classify_prestate(&c, &f([0, 1, 2], 2)).unwrap().class, PreStateClass::StateMorphism);
        assert_eq!(
            classify_prestate(&c, &f([0, 1, 2], 4)).unwrap().class,
            PreStateClass::StrongPreStateNotState
        );
        assert_eq!(classify_prestate(&c, &f([0, 0, 0], 1)).unwrap().class, PreStateClass::Zero);
        assert!(matches!(
            classify_prestate(&c, &f([0, 1, 4], 4)),
            Err(StatesError::NotAdditive { .. })
        ));
        let b = FiniteEmv::boolean(2);
        let s = vec![r(0, 1), r(1, 3), r(2, 3), r(1, 1)];
        assert_eq!(classify_prestate(&b, &s).unwrap().class, PreStateClass::State);
    }
}
