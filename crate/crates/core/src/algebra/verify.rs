use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{AlgebraError, Carrier, Element, FiniteEmv, SymbolicEmv};

/// Sampled pair instances per symbolic check when the sample is large.
pub const PAIR_CAP: usize = 40_000;
/// Sampled triple instances per symbolic check when the sample is large.
pub const TRIPLE_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomId {
    Commutativity,
    Associativity,
    NeutralElement,
    PartialOrder,
    NaturalOrder,
    Lattice,
    Distributivity,
    IntervalClosure,
    TopAbsorption,
    LambdaMinimum,
    LambdaResiduation,
    Involution,
    Chang,
    IdempotentCover,
    OdotIndependence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: AxiomId,
    pub witness: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
    pub checked: BTreeMap<AxiomId, u64>,
    /// Sampling bound used for symbolic carriers.
    pub budget: Option<usize>,
    /// Whether every instance of every axiom was tested.
    pub exhaustive: bool,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated(&self, axiom: AxiomId) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

struct Recorder {
    violations: Vec<Violation>,
    checked: BTreeMap<AxiomId, u64>,
}

impl Recorder {
    fn new() -> Self {
        Recorder {
            violations: Vec::new(),
            checked: BTreeMap::new(),
        }
    }

    fn check(&mut self, axiom: AxiomId, ok: bool, witness: &[&str], detail: impl FnOnce() -> String) {
        *self.checked.entry(axiom).or_insert(0) += 1;
        if !ok {
            self.violations.push(Violation {
                axiom,
                witness: witness.iter().map(|s| s.to_string()).collect(),
                detail: detail(),
            });
        }
    }

    /// `f` returns `Ok(None)` on success and a failure description otherwise.
    fn check_with(
        &mut self,
        axiom: AxiomId,
        witness: &[&Element],
        f: impl FnOnce() -> Result<Option<String>, AlgebraError>,
    ) {
        *self.checked.entry(axiom).or_insert(0) += 1;
        let detail = match f() {
            Ok(None) => return,
            Ok(Some(d)) => d,
            Err(e) => e.to_string(),
        };
        self.violations.push(Violation {
            axiom,
            witness: witness.iter().map(|e| e.to_string()).collect(),
            detail,
        });
    }

    fn finish(self, budget: Option<usize>, exhaustive: bool) -> AxiomReport {
        AxiomReport {
            violations: self.violations,
            checked: self.checked,
            budget,
            exhaustive,
        }
    }
}

/// Exhaustive check of every EMV axiom on a finite table.
pub fn verify_finite(m: &FiniteEmv) -> AxiomReport {
    use AxiomId::*;
    let n = m.size();
    let l = |x: usize| m.label(x);
    let mut r = Recorder::new();

    for x in 0..n {
        r.check(NeutralElement, m.oplus(x, 0) == x && m.oplus(0, x) == x, &[l(x)], || {
            format!("{} ⊕ 0 = {}, 0 ⊕ {} = {}", l(x), l(m.oplus(x, 0)), l(x), l(m.oplus(0, x)))
        });
    }
    for x in 0..n {
        for y in (x + 1)..n {
            let (a, b) = (m.oplus(x, y), m.oplus(y, x));
            r.check(Commutativity, a == b, &[l(x), l(y)], || {
                format!("{} ⊕ {} = {} but {} ⊕ {} = {}", l(x), l(y), l(a), l(y), l(x), l(b))
            });
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let a = m.oplus(m.oplus(x, y), z);
                let b = m.oplus(x, m.oplus(y, z));
                r.check(Associativity, a == b, &[l(x), l(y), l(z)], || {
                    format!("(x ⊕ y) ⊕ z = {} but x ⊕ (y ⊕ z) = {}", l(a), l(b))
                });
            }
        }
    }

    for x in 0..n {
        r.check(PartialOrder, m.leq(x, x), &[l(x)], || format!("{} is not below itself", l(x)));
        for y in (x + 1)..n {
            let anti = !(m.leq(x, y) && m.leq(y, x));
            r.check(PartialOrder, anti, &[l(x), l(y)], || {
                format!("{} <= {} and {} <= {}", l(x), l(y), l(y), l(x))
            });
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let ok = !(m.leq(x, y) && m.leq(y, z)) || m.leq(x, z);
                r.check(PartialOrder, ok, &[l(x), l(y), l(z)], || {
                    format!("transitivity fails: {} <= {} <= {}", l(x), l(y), l(z))
                });
            }
        }
    }

    let mut lattice_ok = true;
    for x in 0..n {
        for y in x..n {
            let ok = m.lub(x, y).is_some() && m.glb(x, y).is_some();
            lattice_ok &= ok;
            r.check(Lattice, ok, &[l(x), l(y)], || {
                format!("{} and {} lack a join or a meet", l(x), l(y))
            });
        }
    }
    if lattice_ok {
        let join = |a, b| m.lub(a, b).expect("checked");
        let meet = |a, b| m.glb(a, b).expect("checked");
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = meet(x, join(y, z));
                    let rhs = join(meet(x, y), meet(x, z));
                    r.check(Distributivity, lhs == rhs, &[l(x), l(y), l(z)], || {
                        format!("x ∧ (y ∨ z) = {} but (x ∧ y) ∨ (x ∧ z) = {}", l(lhs), l(rhs))
                    });
                }
            }
        }
    }

    for a in m.idempotents() {
        let below: Vec<usize> = (0..n).filter(|&x| m.leq(x, a)).collect();
        let lam: BTreeMap<usize, usize> = below
            .iter()
            .filter_map(|&x| m.lambda(a, x).ok().map(|z| (x, z)))
            .collect();
        for &x in &below {
            r.check(LambdaMinimum, lam.contains_key(&x), &[l(a), l(x)], || {
                format!("no least z <= {} with z ⊕ {} = {}", l(a), l(x), l(a))
            });
            r.check(TopAbsorption, m.oplus(x, a) == a, &[l(a), l(x)], || {
                format!("{} ⊕ {} = {}", l(x), l(a), l(m.oplus(x, a)))
            });
            if let Some(&z) = lam.get(&x) {
                let back = lam.get(&z).copied();
                r.check(Involution, back == Some(x), &[l(a), l(x)], || match back {
                    Some(b) => format!("λ_{}(λ_{}({})) = {} ≠ {}", l(a), l(a), l(x), l(b), l(x)),
                    None => format!("λ_{}({}) = {} has no complement", l(a), l(x), l(z)),
                });
            }
        }
        for &x in &below {
            for &y in &below {
                let s = m.oplus(x, y);
                r.check(IntervalClosure, m.leq(s, a), &[l(a), l(x), l(y)], || {
                    format!("{} ⊕ {} = {} leaves [0,{}]", l(x), l(y), l(s), l(a))
                });
                // x ⊕ (x ⊕ y*)* = y ⊕ (y ⊕ x*)*
                let side = |p: usize, q: usize| {
                    let inner = m.oplus(p, *lam.get(&q)?);
                    Some(m.oplus(p, *lam.get(&inner)?))
                };
                let (lhs, rhs) = (side(x, y), side(y, x));
                r.check(Chang, lhs.is_some() && lhs == rhs, &[l(a), l(x), l(y)], || {
                    match (lhs, rhs) {
                        (Some(p), Some(q)) => format!("Chang identity in [0,{}]: {} ≠ {}", l(a), l(p), l(q)),
                        _ => format!("Chang identity in [0,{}] is undefined", l(a)),
                    }
                });
            }
        }
    }

    for x in 0..n {
        let ok = (0..n).any(|a| m.is_idempotent(a) && m.leq(x, a));
        r.check(IdempotentCover, ok, &[l(x)], || format!("no idempotent above {}", l(x)));
    }
    r.finish(None, true)
}

enum Tuples {
    All(usize),
    Sampled(Vec<Vec<usize>>),
}

fn tuples(len: usize, arity: u32, cap: usize, rng: &mut ChaCha8Rng) -> Tuples {
    let full = len.checked_pow(arity);
    match full {
        Some(total) if total <= cap => Tuples::All(len),
        _ => Tuples::Sampled(
            (0..cap)
                .map(|_| (0..arity).map(|_| rng.gen_range(0..len)).collect())
                .collect(),
        ),
    }
}

fn for_each_tuple(t: &Tuples, arity: usize, mut f: impl FnMut(&[usize])) {
    match t {
        Tuples::All(len) => {
            let total = len.pow(arity as u32);
            let mut idx = vec![0; arity];
            for mut code in 0..total {
                for slot in idx.iter_mut().rev() {
                    *slot = code % len;
                    code /= len;
                }
                f(&idx);
            }
        }
        Tuples::Sampled(list) => list.iter().for_each(|t| f(t)),
    }
}

fn fail_unless(ok: bool, detail: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(detail)
}

/// Checks the axioms on tuples drawn from `enumerate(budget)`; exhaustive
/// over pairs and triples when those fit under the caps, otherwise a seeded
/// sample.
pub fn verify_symbolic(m: &SymbolicEmv, budget: usize, seed: u64) -> AxiomReport {
    use AxiomId::*;
    let sample = m.enumerate(budget);
    let len = sample.len();
    let zero = m.zero();
    let top = m.top();
    let mut r = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for x in &sample {
        r.check_with(NeutralElement, &[x], || {
            let s = m.oplus(x, &zero)?;
            Ok(fail_unless(s == *x, || format!("x ⊕ 0 = {s}")))
        });
        r.check_with(PartialOrder, &[x], || {
            Ok(fail_unless(m.leq(x, x)?, || "not reflexive".into()))
        });
        r.check_with(IdempotentCover, &[x], || {
            let a = m.idempotent_above(x)?;
            Ok(fail_unless(m.is_idempotent(&a)? && m.leq(x, &a)?, || {
                format!("{a} is not an idempotent cover")
            }))
        });
        let mut covers = vec![m.idempotent_above(x)];
        if let Some(t) = &top {
            covers.push(Ok(t.clone()));
        }
        for a in covers {
            let Ok(a) = a else { continue };
            r.check_with(LambdaResiduation, &[&a, x], || {
                let s = m.oplus(&m.lambda(&a, x)?, x)?;
                Ok(fail_unless(s == a, || format!("λ_a(x) ⊕ x = {s}")))
            });
            r.check_with(Involution, &[&a, x], || {
                let back = m.lambda(&a, &m.lambda(&a, x)?)?;
                Ok(fail_unless(back == *x, || format!("λ_a(λ_a(x)) = {back}")))
            });
            r.check_with(TopAbsorption, &[&a, x], || {
                let s = m.oplus(x, &a)?;
                Ok(fail_unless(s == a, || format!("x ⊕ a = {s}")))
            });
        }
    }

    let pairs = tuples(len, 2, PAIR_CAP, &mut rng);
    let mut exhaustive = matches!(pairs, Tuples::All(_));
    for_each_tuple(&pairs, 2, |t| {
        let (x, y) = (&sample[t[0]], &sample[t[1]]);
        r.check_with(Commutativity, &[x, y], || {
            let (a, b) = (m.oplus(x, y)?, m.oplus(y, x)?);
            Ok(fail_unless(a == b, || format!("x ⊕ y = {a} but y ⊕ x = {b}")))
        });
        r.check_with(PartialOrder, &[x, y], || {
            let both = m.leq(x, y)? && m.leq(y, x)?;
            Ok(fail_unless(!both || x == y, || "antisymmetry fails".into()))
        });
        r.check_with(NaturalOrder, &[x, y], || {
            let s = m.oplus(x, y)?;
            if !m.leq(x, &s)? {
                return Ok(Some(format!("x is not below x ⊕ y = {s}")));
            }
            if m.leq(x, y)? {
                let a = m.idempotent_above(y)?;
                let z = m.odot(y, &m.lambda(&a, x)?)?;
                let w = m.oplus(x, &z)?;
                return Ok(fail_unless(w == *y, || format!("x ⊕ (y ⊙ λ_a(x)) = {w}")));
            }
            Ok(None)
        });
        r.check_with(Lattice, &[x, y], || {
            let j = m.join(x, y)?;
            let mt = m.meet(x, y)?;
            let bounds = m.leq(x, &j)? && m.leq(y, &j)? && m.leq(&mt, x)? && m.leq(&mt, y)?;
            let consistent = m.leq(x, y)? == (j == *y) && m.leq(x, y)? == (mt == *x);
            let absorb = m.join(x, &mt)? == *x && m.meet(x, &j)? == *x;
            Ok(fail_unless(bounds && consistent && absorb, || {
                format!("join {j} / meet {mt} are not lattice operations")
            }))
        });
        let idx = t[0] * 7 + t[1] * 13 + 1;
        let w = &sample[idx % len];
        r.check_with(IntervalClosure, &[x, y], || {
            let a = m.idempotent_above(&m.join(x, y)?)?;
            let s = m.oplus(x, y)?;
            Ok(fail_unless(m.leq(&s, &a)?, || format!("x ⊕ y = {s} leaves [0,{a}]")))
        });
        r.check_with(Chang, &[x, y], || {
            let a = m.idempotent_above(&m.join(x, y)?)?;
            let side = |p: &Element, q: &Element| -> Result<Element, AlgebraError> {
                let inner = m.oplus(p, &m.lambda(&a, q)?)?;
                m.oplus(p, &m.lambda(&a, &inner)?)
            };
            let (lhs, rhs) = (side(x, y)?, side(y, x)?);
            Ok(fail_unless(lhs == rhs, || format!("{lhs} ≠ {rhs}")))
        });
        r.check_with(OdotIndependence, &[x, y, w], || {
            let a = m.idempotent_above(&m.join(x, y)?)?;
            let b = m.idempotent_above(&m.join(&a, w)?)?;
            let (p, q) = (m.odot_with(&a, x, y)?, m.odot_with(&b, x, y)?);
            if p != q {
                return Ok(Some(format!("⊙ in [0,{a}] gives {p}, in [0,{b}] gives {q}")));
            }
            if let Some(t) = &top {
                let tq = m.odot_with(t, x, y)?;
                return Ok(fail_unless(tq == p, || format!("⊙ in [0,top] gives {tq}")));
            }
            Ok(None)
        });
        r.check_with(LambdaMinimum, &[x, y], || {
            let a = m.idempotent_above(x)?;
            if m.leq(y, &a)? && m.oplus(y, x)? == a {
                let lx = m.lambda(&a, x)?;
                return Ok(fail_unless(m.leq(&lx, y)?, || format!("λ_a(x) = {lx} is not least")));
            }
            Ok(None)
        });
    });

    let triples = tuples(len, 3, TRIPLE_CAP, &mut rng);
    exhaustive &= matches!(triples, Tuples::All(_));
    for_each_tuple(&triples, 3, |t| {
        let (x, y, z) = (&sample[t[0]], &sample[t[1]], &sample[t[2]]);
        r.check_with(Associativity, &[x, y, z], || {
            let a = m.oplus(&m.oplus(x, y)?, z)?;
            let b = m.oplus(x, &m.oplus(y, z)?)?;
            Ok(fail_unless(a == b, || format!("(x ⊕ y) ⊕ z = {a} but x ⊕ (y ⊕ z) = {b}")))
        });
        r.check_with(PartialOrder, &[x, y, z], || {
            let ok = !(m.leq(x, y)? && m.leq(y, z)?) || m.leq(x, z)?;
            Ok(fail_unless(ok, || "transitivity fails".into()))
        });
        r.check_with(Distributivity, &[x, y, z], || {
            let lhs = m.meet(x, &m.join(y, z)?)?;
            let rhs = m.join(&m.meet(x, y)?, &m.meet(x, z)?)?;
            Ok(fail_unless(lhs == rhs, || format!("x ∧ (y ∨ z) = {lhs} but (x ∧ y) ∨ (x ∧ z) = {rhs}")))
        });
        r.check_with(Lattice, &[x, y, z], || {
            if m.leq(x, z)? && m.leq(y, z)? && !m.leq(&m.join(x, y)?, z)? {
                return Ok(Some("join is not least".into()));
            }
            if m.leq(z, x)? && m.leq(z, y)? && !m.leq(z, &m.meet(x, y)?)? {
                return Ok(Some("meet is not greatest".into()));
            }
            Ok(None)
        });
    });

    r.finish(Some(budget), exhaustive)
}

/// Finite carriers are checked exhaustively; `budget` and `seed` only apply
/// to symbolic families.
pub fn verify_axioms(carrier: &Carrier, budget: usize, seed: u64) -> AxiomReport {
    match carrier {
        Carrier::Finite(m) => verify_finite(m),
        Carrier::Symbolic(s) => verify_symbolic(s, budget, seed),
    }
}
