use serde::Serialize;

use crate::algebra::{verify_symbolic, AlgebraError, AxiomReport, Element, SymbolicEmv};

use super::StructureError;

/// The representing MV-algebra of a top-free symbolic family.
pub fn representing_mv(m: &SymbolicEmv) -> Result<SymbolicEmv, StructureError> {
    Ok(SymbolicEmv::representing(m.clone())?)
}

/// Sample-scale evidence that the inner algebra sits in its representing
/// algebra as a maximal ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepresentingReport {
    pub budget: usize,
    pub sample_size: usize,
    pub axioms: AxiomReport,
    /// `Direct` elements are closed under `⊕`.
    pub direct_sum_closed: bool,
    /// Everything below a `Direct` element is `Direct`.
    pub direct_down_closed: bool,
    /// Each `Complement(x)` together with `Direct(x)` sums to the top.
    pub complement_generates: bool,
    /// Mixed sums agree for every idempotent cover in the sample.
    pub mixed_sum_independent: bool,
    pub failures: Vec<String>,
}

impl RepresentingReport {
    pub fn holds(&self) -> bool {
        self.axioms.is_clean()
            && self.direct_sum_closed
            && self.direct_down_closed
            && self.complement_generates
            && self.mixed_sum_independent
    }
}

fn is_direct(e: &Element) -> bool {
    matches!(e, Element::Direct(_))
}

/// Builds `N` over `inner` and checks it on `enumerate(budget)`.
pub fn representing_checks(
    inner: &SymbolicEmv,
    budget: usize,
    seed: u64,
) -> Result<RepresentingReport, StructureError> {
    let n = representing_mv(inner)?;
    let top = n.top().expect("representing algebras have a top");
    let axioms = verify_symbolic(&n, budget, seed);
    let sample = n.enumerate(budget);
    let inner_sample = inner.enumerate(budget);
    let directs: Vec<&Element> = sample.iter().filter(|e| is_direct(e)).collect();
    let mut failures = Vec::new();

    let mut direct_sum_closed = true;
    for x in &directs {
        for y in &directs {
            if !is_direct(&n.oplus(x, y)?) {
                direct_sum_closed = false;
                failures.push(format!("{x} ⊕ {y} leaves the Direct part"));
            }
        }
    }

    let mut direct_down_closed = true;
    for y in &directs {
        for x in &sample {
            if !is_direct(x) && n.leq(x, y)? {
                direct_down_closed = false;
                failures.push(format!("{x} <= {y}"));
            }
        }
    }

    let mut complement_generates = true;
    for x in &inner_sample {
        let s = n.oplus(&Element::complement(x.clone()), &Element::direct(x.clone()))?;
        if s != top {
            complement_generates = false;
            failures.push(format!("Complement({x}) ⊕ Direct({x}) = {s}"));
        }
    }

    let mut mixed_sum_independent = true;
    for (i, x) in inner_sample.iter().enumerate() {
        for y in &inner_sample {
            let w = &inner_sample[(i * 5 + 3) % inner_sample.len()];
            let mixed = |a: &Element| -> Result<Element, AlgebraError> {
                Ok(Element::complement(inner.odot(y, &inner.lambda(a, x)?)?))
            };
            let a = inner.idempotent_above(&inner.join(x, y)?)?;
            let b = inner.idempotent_above(&inner.join(&a, w)?)?;
            let (p, q) = (mixed(&a)?, mixed(&b)?);
            let direct = n.oplus(&Element::direct(x.clone()), &Element::complement(y.clone()))?;
            if p != q || p != direct {
                mixed_sum_independent = false;
                failures.push(format!("Direct({x}) ⊕ Complement({y}) depends on the cover"));
            }
        }
    }

    Ok(RepresentingReport {
        budget,
        sample_size: sample.len(),
        axioms,
        direct_sum_closed,
        direct_down_closed,
        complement_generates,
        mixed_sum_independent,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finsubsets_is_a_maximal_ideal_at_sample_scale() {
        let rep = representing_checks(&SymbolicEmv::FinSubsets, 3, 0).unwrap();
        assert!(rep.holds(), "{:?}", rep.failures);
        assert_eq!(rep.sample_size, 16);
    }

    #[test]
    fn top_algebras_are_refused() {
        assert!(matches!(
            representing_mv(&SymbolicEmv::ChangLex),
            Err(StructureError::Algebra(AlgebraError::HasTop))
        ));
    }
}
