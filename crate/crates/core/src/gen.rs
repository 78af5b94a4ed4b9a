//! Seeded generators for states, signed measures and table mutations.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratlp::{solve, Bounds, FeasOutcome, LinSystem, Objective, Rat};

use crate::algebra::FiniteEmv;
use crate::measures::{leq_plus, MeasureSpace, SignedMeasureVec};
use crate::states::StateVec;

/// Deterministic source of random test objects.
#[derive(Debug, Clone)]
pub struct Gen {
    rng: ChaCha8Rng,
}

fn combine(coeffs: &[Rat], points: &[Vec<Rat>]) -> Vec<Rat> {
    let n = points.first().map_or(0, Vec::len);
    (0..n)
        .map(|x| coeffs.iter().zip(points).map(|(c, p)| c * &p[x]).sum())
        .collect()
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A small rational `p/q` with `p` in `lo..=hi` and `q` in `1..=6`.
    pub fn rational(&mut self, lo: i64, hi: i64) -> Rat {
        let p = self.rng.gen_range(lo..=hi);
        let q = self.rng.gen_range(1..=6);
        Rat::new(p, q)
    }

    /// Nonnegative rational weights summing to 1.
    pub fn convex_weights(&mut self, k: usize) -> Vec<Rat> {
        loop {
            let raw: Vec<i64> = (0..k).map(|_| self.rng.gen_range(0..=12)).collect();
            let total: i64 = raw.iter().sum();
            if total > 0 {
                return raw.iter().map(|&w| Rat::new(w, total)).collect();
            }
        }
    }

    /// A random convex combination of `points`, with its weights.
    pub fn convex_combination(&mut self, points: &[StateVec]) -> (Vec<Rat>, StateVec) {
        let w = self.convex_weights(points.len());
        let s = combine(&w, points);
        (w, s)
    }

    /// An optimum of a random objective over `polytope`: an LP-feasible
    /// point found without reference to any morphism list.
    pub fn lp_point(&mut self, polytope: &LinSystem) -> Option<Vec<Rat>> {
        let terms = (0..polytope.num_vars())
            .map(|j| (j, Rat::from_integer(self.rng.gen_range(-9..=9))))
            .collect();
        let solved = solve(polytope, Some(&Objective::maximize(terms))).ok()?;
        match solved.outcome {
            FeasOutcome::Feasible(p) => Some(p),
            FeasOutcome::Infeasible(_) => None,
        }
    }

    /// A uniformly random subset of `0..n`.
    pub fn subset(&mut self, n: usize) -> Vec<usize> {
        (0..n).filter(|_| self.rng.gen_bool(0.5)).collect()
    }

    /// A single-entry change `(i, j, v)` of the `⊕`-table with a new value.
    pub fn mutation(&mut self, m: &FiniteEmv) -> (usize, usize, usize) {
        let n = m.size();
        let i = self.rng.gen_range(0..n);
        let j = self.rng.gen_range(0..n);
        let current = m.oplus(i, j);
        let choices: Vec<usize> = (0..n).filter(|&v| v != current).collect();
        (i, j, *choices.choose(&mut self.rng).expect("n >= 2"))
    }

    /// An additive function with `m(0) = 0` and one random pinned value,
    /// found by solving the additivity system.
    pub fn additive_perturbation(&mut self, space: &MeasureSpace) -> Option<SignedMeasureVec> {
        let m = space.algebra();
        let n = m.size();
        let mut sys = LinSystem::new();
        for x in 0..n {
            sys.add_var(m.label(x), Bounds::free());
        }
        sys.fix(0, Rat::zero()).ok()?;
        for &(x, y, z) in space.sums() {
            if x != 0 && y != 0 && x <= y {
                sys.add_row(
                    [(x, Rat::one()), (y, Rat::one()), (z, -Rat::one())],
                    Rat::zero(),
                )
                .ok()?;
            }
        }
        let pin = self.rng.gen_range(1..n);
        let value = self.rational(-5, 5);
        sys.fix(pin, value).ok()?;
        solve(&sys, None).ok()?.outcome.point().map(<[Rat]>::to_vec)
    }

    /// Integer combination (coefficients in `-3..=3`) of `morphisms` plus an
    /// additive perturbation.
    pub fn signed_measure(&mut self, space: &MeasureSpace, morphisms: &[StateVec]) -> SignedMeasureVec {
        let coeffs: Vec<Rat> = morphisms
            .iter()
            .map(|_| Rat::from_integer(self.rng.gen_range(-3..=3)))
            .collect();
        let base = combine(&coeffs, morphisms);
        match self.additive_perturbation(space) {
            Some(p) => base.iter().zip(&p).map(|(a, b)| a + b).collect(),
            None => base,
        }
    }

    /// A nonnegative combination of `morphisms`.
    pub fn positive_measure(&mut self, morphisms: &[StateVec], scale: i64) -> SignedMeasureVec {
        let coeffs: Vec<Rat> = morphisms.iter().map(|_| self.rational(0, scale)).collect();
        combine(&coeffs, morphisms)
    }

    /// A measure above both `m1` and `m2`, built as `m1 + p` for a random
    /// positive `p`, widening the range until the bound holds.
    pub fn upper_bound(
        &mut self,
        m1: &[Rat],
        m2: &[Rat],
        morphisms: &[StateVec],
    ) -> SignedMeasureVec {
        let mut scale = 4;
        loop {
            let p = self.positive_measure(morphisms, scale);
            let u: SignedMeasureVec = m1.iter().zip(&p).map(|(a, b)| a + b).collect();
            if leq_plus(m2, &u) {
                return u;
            }
            scale *= 2;
        }
    }
}
