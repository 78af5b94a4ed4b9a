use crate::algebra::FiniteEmv;

use super::StructureError;

/// Least subset containing `seed ∪ {0}` closed under `⊕`, `∨`, `∧` and
/// `λ_b(x)` for idempotents `b` and `x <= b` already in the subset.
pub fn subalgebra_closure(m: &FiniteEmv, seed: &[usize]) -> Result<Vec<usize>, StructureError> {
    let order = m.natural_order()?;
    let n = m.size();
    let mut inside = vec![false; n];
    inside[0] = true;
    for &x in seed {
        inside[x] = true;
    }
    loop {
        let current: Vec<usize> = (0..n).filter(|&x| inside[x]).collect();
        let mut fresh = Vec::new();
        for &x in &current {
            for &y in &current {
                fresh.push(m.oplus(x, y));
                fresh.push(order.join(x, y));
                fresh.push(order.meet(x, y));
                if m.is_idempotent(x) && m.leq(y, x) {
                    fresh.push(m.lambda(x, y)?);
                }
            }
        }
        let mut changed = false;
        for z in fresh {
            if !inside[z] {
                inside[z] = true;
                changed = true;
            }
        }
        if !changed {
            return Ok(current);
        }
    }
}

/// The subalgebra on `elements` as a standalone table, with the original
/// labels. `elements` must already be closed.
pub fn subalgebra(m: &FiniteEmv, elements: &[usize]) -> Result<FiniteEmv, StructureError> {
    let mut sorted = elements.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let closure = subalgebra_closure(m, &sorted)?;
    if let Some(&extra) = closure.iter().find(|x| sorted.binary_search(x).is_err()) {
        return Err(StructureError::NotSubalgebra {
            missing: m.label(extra).to_string(),
        });
    }
    let pos = |x: usize| sorted.binary_search(&x).expect("closed under ⊕");
    let rows = sorted
        .iter()
        .map(|&x| sorted.iter().map(|&y| pos(m.oplus(x, y))).collect())
        .collect();
    let labels = sorted.iter().map(|&x| m.label(x).to_string()).collect();
    Ok(FiniteEmv::from_table(rows)?.with_labels(labels)?)
}
