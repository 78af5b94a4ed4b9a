use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{AlgebraError, Element};

/// The built-in infinite families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolicEmv {
    /// Finite subsets of the naturals; `⊕` is union.
    FinSubsets,
    /// Finitely supported maps into the chain `{0..k}`, truncated addition.
    FinSupport { k: u32 },
    /// Chang's algebra `Γ(ℤ ×lex ℤ, (1,0))`: elements `(0,m)` and `(1,-m)`.
    ChangLex,
    /// The MV-algebra in which the inner (top-free) algebra is a maximal ideal.
    Representing(Box<SymbolicEmv>),
}

fn foreign(e: &Element) -> AlgebraError {
    AlgebraError::ForeignElement {
        element: e.to_string(),
    }
}

/// Signed position of a ChangLex element in the lex order.
fn lex_key(b: u8, m: u64) -> (u8, i128) {
    if b == 0 {
        (0, m as i128)
    } else {
        (1, -(m as i128))
    }
}

fn merge_sets(x: &[u64], y: &[u64], keep_both_only: bool) -> Vec<u64> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let ord = match (x.get(i), y.get(j)) {
            (Some(a), Some(b)) => a.cmp(b),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match ord {
            Ordering::Equal => {
                out.push(x[i]);
                i += 1;
                j += 1;
            }
            Ordering::Less => {
                if !keep_both_only {
                    out.push(x[i]);
                }
                i += 1;
            }
            Ordering::Greater => {
                if !keep_both_only {
                    out.push(y[j]);
                }
                j += 1;
            }
        }
    }
    out
}

impl SymbolicEmv {
    /// Builds the representing algebra of a top-free family.
    pub fn representing(inner: SymbolicEmv) -> Result<Self, AlgebraError> {
        if inner.top().is_some() {
            return Err(AlgebraError::HasTop);
        }
        Ok(SymbolicEmv::Representing(Box::new(inner)))
    }

    pub fn name(&self) -> String {
        match self {
            SymbolicEmv::FinSubsets => "finsubsets".into(),
            SymbolicEmv::FinSupport { k } => format!("finsupport({k})"),
            SymbolicEmv::ChangLex => "changlex".into(),
            SymbolicEmv::Representing(inner) => format!("representing({})", inner.name()),
        }
    }

    pub fn zero(&self) -> Element {
        match self {
            SymbolicEmv::FinSubsets => Element::Set(Vec::new()),
            SymbolicEmv::FinSupport { .. } => Element::Map(BTreeMap::new()),
            SymbolicEmv::ChangLex => Element::lex(0, 0),
            SymbolicEmv::Representing(inner) => Element::direct(inner.zero()),
        }
    }

    pub fn top(&self) -> Option<Element> {
        match self {
            SymbolicEmv::FinSubsets | SymbolicEmv::FinSupport { .. } => None,
            SymbolicEmv::ChangLex => Some(Element::lex(1, 0)),
            SymbolicEmv::Representing(inner) => Some(Element::complement(inner.zero())),
        }
    }

    pub fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (SymbolicEmv::FinSubsets, Element::Set(_)) => true,
            (SymbolicEmv::FinSupport { k }, Element::Map(m)) => {
                m.values().all(|&l| l >= 1 && l <= *k)
            }
            (SymbolicEmv::ChangLex, Element::Lex { b, .. }) => *b <= 1,
            (SymbolicEmv::Representing(inner), Element::Direct(x) | Element::Complement(x)) => {
                inner.contains(x)
            }
            _ => false,
        }
    }

    fn check(&self, e: &Element) -> Result<(), AlgebraError> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(foreign(e))
        }
    }

    /// Swaps `Direct` and `Complement`; only meaningful on representing algebras.
    pub fn negate(&self, e: &Element) -> Result<Element, AlgebraError> {
        self.check(e)?;
        match e {
            Element::Direct(x) => Ok(Element::Complement(x.clone())),
            Element::Complement(x) => Ok(Element::Direct(x.clone())),
            _ => match self.top() {
                Some(top) => self.lambda(&top, e),
                None => Err(foreign(e)),
            },
        }
    }

    pub fn oplus(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (self, x, y) {
            (SymbolicEmv::FinSubsets, Element::Set(a), Element::Set(b)) => {
                Element::Set(merge_sets(a, b, false))
            }
            (SymbolicEmv::FinSupport { k }, Element::Map(a), Element::Map(b)) => {
                let mut out = a.clone();
                for (i, l) in b {
                    let e = out.entry(*i).or_insert(0);
                    *e = (*e + l).min(*k);
                }
                Element::Map(out)
            }
            (SymbolicEmv::ChangLex, Element::Lex { b: b1, m: m1 }, Element::Lex { b: b2, m: m2 }) => {
                match (b1, b2) {
                    (0, 0) => Element::lex(0, m1 + m2),
                    (0, 1) | (1, 0) => {
                        let (up, down) = if *b1 == 0 { (*m1, *m2) } else { (*m2, *m1) };
                        if up >= down {
                            Element::lex(1, 0)
                        } else {
                            Element::lex(1, down - up)
                        }
                    }
                    _ => Element::lex(1, 0),
                }
            }
            (SymbolicEmv::Representing(inner), _, _) => match (x, y) {
                (Element::Direct(a), Element::Direct(b)) => Element::direct(inner.oplus(a, b)?),
                (Element::Direct(a), Element::Complement(b))
                | (Element::Complement(b), Element::Direct(a)) => {
                    let idem = inner.idempotent_above(&inner.join(a, b)?)?;
                    let la = inner.lambda(&idem, a)?;
                    Element::complement(inner.odot(b, &la)?)
                }
                (Element::Complement(a), Element::Complement(b)) => {
                    Element::complement(inner.odot(a, b)?)
                }
                _ => unreachable!("membership checked above"),
            },
            _ => unreachable!("membership checked above"),
        })
    }

    pub fn leq(&self, x: &Element, y: &Element) -> Result<bool, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (self, x, y) {
            (SymbolicEmv::FinSubsets, Element::Set(a), Element::Set(b)) => {
                merge_sets(a, b, true).len() == a.len()
            }
            (SymbolicEmv::FinSupport { .. }, Element::Map(a), Element::Map(b)) => a
                .iter()
                .all(|(i, l)| b.get(i).is_some_and(|m| l <= m)),
            (SymbolicEmv::ChangLex, Element::Lex { b: b1, m: m1 }, Element::Lex { b: b2, m: m2 }) => {
                lex_key(*b1, *m1) <= lex_key(*b2, *m2)
            }
            (SymbolicEmv::Representing(_), _, _) => {
                let top = self.top().expect("representing algebras have a top");
                self.oplus(&self.negate(x)?, y)? == top
            }
            _ => unreachable!("membership checked above"),
        })
    }

    pub fn join(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (self, x, y) {
            (SymbolicEmv::FinSubsets, Element::Set(a), Element::Set(b)) => {
                Element::Set(merge_sets(a, b, false))
            }
            (SymbolicEmv::FinSupport { .. }, Element::Map(a), Element::Map(b)) => {
                let mut out = a.clone();
                for (i, l) in b {
                    let e = out.entry(*i).or_insert(0);
                    *e = (*e).max(*l);
                }
                Element::Map(out)
            }
            (SymbolicEmv::ChangLex, _, _) => {
                if self.leq(x, y)? {
                    y.clone()
                } else {
                    x.clone()
                }
            }
            // x ∨ y = x ⊕ (x ⊕ y*)*
            (SymbolicEmv::Representing(_), _, _) => {
                let inner = self.oplus(x, &self.negate(y)?)?;
                self.oplus(x, &self.negate(&inner)?)?
            }
            _ => unreachable!("membership checked above"),
        })
    }

    pub fn meet(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (self, x, y) {
            (SymbolicEmv::FinSubsets, Element::Set(a), Element::Set(b)) => {
                Element::Set(merge_sets(a, b, true))
            }
            (SymbolicEmv::FinSupport { .. }, Element::Map(a), Element::Map(b)) => {
                Element::map(a.iter().map(|(i, l)| (*i, (*l).min(*b.get(i).unwrap_or(&0)))))
            }
            (SymbolicEmv::ChangLex, _, _) => {
                if self.leq(x, y)? {
                    x.clone()
                } else {
                    y.clone()
                }
            }
            // x ∧ y = (x* ∨ y*)*
            (SymbolicEmv::Representing(_), _, _) => {
                let j = self.join(&self.negate(x)?, &self.negate(y)?)?;
                self.negate(&j)?
            }
            _ => unreachable!("membership checked above"),
        })
    }

    pub fn is_idempotent(&self, a: &Element) -> Result<bool, AlgebraError> {
        Ok(self.oplus(a, a)? == *a)
    }

    /// The least idempotent above `x`.
    pub fn idempotent_above(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.check(x)?;
        Ok(match (self, x) {
            (SymbolicEmv::FinSubsets, _) => x.clone(),
            (SymbolicEmv::FinSupport { k }, Element::Map(m)) => {
                Element::map(m.keys().map(|i| (*i, *k)))
            }
            (SymbolicEmv::ChangLex, Element::Lex { b, m }) => {
                if *b == 0 && *m == 0 {
                    x.clone()
                } else {
                    Element::lex(1, 0)
                }
            }
            (SymbolicEmv::Representing(inner), Element::Direct(y)) => {
                Element::direct(inner.idempotent_above(y)?)
            }
            (SymbolicEmv::Representing(_), _) => self.top().expect("representing has a top"),
            _ => unreachable!("membership checked above"),
        })
    }

    /// `λ_a(x)`, the least `z <= a` with `z ⊕ x = a`, by the family rule.
    pub fn lambda(&self, a: &Element, x: &Element) -> Result<Element, AlgebraError> {
        if !self.is_idempotent(a)? {
            return Err(AlgebraError::NotIdempotent { a: a.to_string() });
        }
        if !self.leq(x, a)? {
            return Err(AlgebraError::NotBelow {
                x: x.to_string(),
                a: a.to_string(),
            });
        }
        Ok(match (self, a, x) {
            (SymbolicEmv::FinSubsets, Element::Set(sa), Element::Set(sx)) => {
                Element::Set(sa.iter().copied().filter(|i| sx.binary_search(i).is_err()).collect())
            }
            (SymbolicEmv::FinSupport { .. }, Element::Map(ma), Element::Map(mx)) => Element::map(
                ma.iter()
                    .map(|(i, l)| (*i, l - mx.get(i).copied().unwrap_or(0))),
            ),
            (SymbolicEmv::ChangLex, Element::Lex { b: ba, .. }, Element::Lex { b, m }) => {
                if *ba == 0 {
                    Element::lex(0, 0)
                } else {
                    Element::lex(1 - b, *m)
                }
            }
            // a ⊙ x* = (a* ⊕ x)*
            (SymbolicEmv::Representing(_), _, _) => {
                let s = self.oplus(&self.negate(a)?, x)?;
                self.negate(&s)?
            }
            _ => unreachable!("membership checked above"),
        })
    }

    /// `λ_a(λ_a(x) ⊕ λ_a(y))` for an explicit idempotent `a >= x, y`.
    pub fn odot_with(&self, a: &Element, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        let s = self.oplus(&self.lambda(a, x)?, &self.lambda(a, y)?)?;
        self.lambda(a, &s)
    }

    /// `x ⊙ y`, computed in the least idempotent above `x ∨ y`.
    pub fn odot(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        let a = self.idempotent_above(&self.join(x, y)?)?;
        self.odot_with(&a, x, y)
    }

    /// `x + y`, defined iff `x ⊙ y = 0`.
    pub fn partial_add(&self, x: &Element, y: &Element) -> Result<Option<Element>, AlgebraError> {
        if self.odot(x, y)? == self.zero() {
            Ok(Some(self.oplus(x, y)?))
        } else {
            Ok(None)
        }
    }

    /// A finite, duplicate-free sample of canonical elements.
    ///
    /// Subsets and supports range over `{1..=bound}`; ChangLex magnitudes
    /// over `0..=bound`; representing algebras list all `Direct` images of
    /// the inner sample followed by all `Complement`s.
    pub fn enumerate(&self, bound: usize) -> Vec<Element> {
        match self {
            SymbolicEmv::FinSubsets => (0u64..1 << bound)
                .map(|mask| {
                    Element::Set(
                        (0..bound as u64)
                            .filter(|b| mask & (1 << b) != 0)
                            .map(|b| b + 1)
                            .collect(),
                    )
                })
                .collect(),
            SymbolicEmv::FinSupport { k } => {
                let base = *k as usize + 1;
                let count = base.pow(bound as u32);
                (0..count)
                    .map(|mut code| {
                        let mut levels = Vec::with_capacity(bound);
                        for i in 0..bound {
                            levels.push(((i as u64) + 1, (code % base) as u32));
                            code /= base;
                        }
                        Element::map(levels)
                    })
                    .collect()
            }
            SymbolicEmv::ChangLex => (0..=1u8)
                .flat_map(|b| (0..=bound as u64).map(move |m| Element::lex(b, m)))
                .collect(),
            SymbolicEmv::Representing(inner) => {
                let base = inner.enumerate(bound);
                let mut out: Vec<Element> = base.iter().cloned().map(Element::direct).collect();
                out.extend(base.into_iter().map(Element::complement));
                out
            }
        }
    }
}
