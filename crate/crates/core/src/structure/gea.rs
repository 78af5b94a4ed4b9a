use crate::algebra::FiniteEmv;

use super::StructureError;

/// Largest carrier on which the Riesz decomposition property is checked
/// exhaustively.
pub const RDP_LIMIT: usize = 9;

/// A finite generalized effect algebra: a partial addition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeaTable {
    n: usize,
    plus: Vec<Option<usize>>,
    labels: Vec<String>,
}

impl GeaTable {
    pub fn new(rows: Vec<Vec<Option<usize>>>, labels: Vec<String>) -> Result<Self, StructureError> {
        let n = rows.len();
        if labels.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(StructureError::Unsupported("partial table is not square".into()));
        }
        if rows.iter().flatten().flatten().any(|&v| v >= n) {
            return Err(StructureError::Unsupported("partial table entry out of range".into()));
        }
        Ok(GeaTable {
            n,
            plus: rows.into_iter().flatten().collect(),
            labels,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn plus(&self, x: usize, y: usize) -> Option<usize> {
        self.plus[x * self.n + y]
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn rows(&self) -> Vec<Vec<Option<usize>>> {
        self.plus.chunks(self.n).map(<[Option<usize>]>::to_vec).collect()
    }

    /// The unique `z` with `x + z = y`, if `x <= y`.
    pub fn difference(&self, y: usize, x: usize) -> Option<usize> {
        (0..self.n).find(|&z| self.plus(x, z) == Some(y))
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.difference(y, x).is_some()
    }

    fn wit(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.labels[x].clone()).collect()
    }

    /// Commutativity, associativity, neutrality, cancellation, positivity.
    pub fn check_axioms(&self) -> Result<(), StructureError> {
        let n = self.n;
        let fail = |axiom, xs: &[usize]| {
            Err(StructureError::GeaAxiom {
                axiom,
                witness: self.wit(xs),
            })
        };
        for x in 0..n {
            if self.plus(x, 0) != Some(x) {
                return fail("neutral", &[x]);
            }
            for y in 0..n {
                if self.plus(x, y) != self.plus(y, x) {
                    return fail("commutative", &[x, y]);
                }
                if self.plus(x, y) == Some(0) && (x != 0 || y != 0) {
                    return fail("positive", &[x, y]);
                }
                for z in 0..n {
                    if let Some(xy) = self.plus(x, y) {
                        if let Some(lhs) = self.plus(xy, z) {
                            let rhs = self.plus(y, z).and_then(|yz| self.plus(x, yz));
                            if rhs != Some(lhs) {
                                return fail("associative", &[x, y, z]);
                            }
                        }
                    }
                    if y < z && self.plus(x, y).is_some() && self.plus(x, y) == self.plus(x, z) {
                        return fail("cancellative", &[x, y, z]);
                    }
                }
            }
        }
        Ok(())
    }

    /// Every `x1 + x2 = y1 + y2` refines through some `c11, c12, c21, c22`.
    pub fn check_rdp(&self) -> Result<(), StructureError> {
        let n = self.n;
        for x1 in 0..n {
            for x2 in 0..n {
                let Some(s) = self.plus(x1, x2) else { continue };
                for y1 in 0..n {
                    let Some(y2) = self.difference(s, y1) else { continue };
                    let refined = (0..n).any(|c11| {
                        let step = || {
                            let c12 = self.difference(x1, c11)?;
                            let c21 = self.difference(y1, c11)?;
                            let c22 = self.difference(x2, c21)?;
                            (self.plus(c12, c22)? == y2).then_some(())
                        };
                        step().is_some()
                    });
                    if !refined {
                        return Err(StructureError::RdpViolation {
                            witness: self.wit(&[x1, x2, y1, y2]),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn bound(&self, x: usize, y: usize, upper: bool) -> Option<usize> {
        let rel = |a, b| if upper { self.leq(a, b) } else { self.leq(b, a) };
        let cands: Vec<usize> = (0..self.n).filter(|&u| rel(x, u) && rel(y, u)).collect();
        cands
            .iter()
            .copied()
            .find(|&c| cands.iter().all(|&u| rel(c, u)))
    }
}

/// The partial addition `x + y = x ⊕ y` when `x ⊙ y = 0`. The GEA axioms are
/// always checked, and RDP as well up to [`RDP_LIMIT`] elements; the GEA
/// order must equal the natural order.
pub fn to_gea(m: &FiniteEmv) -> Result<GeaTable, StructureError> {
    let n = m.size();
    let mut rows = vec![vec![None; n]; n];
    for (x, row) in rows.iter_mut().enumerate() {
        for (y, slot) in row.iter_mut().enumerate() {
            *slot = m.partial_add(x, y)?;
        }
    }
    let gea = GeaTable::new(rows, m.labels().to_vec())?;
    gea.check_axioms()?;
    for x in 0..n {
        for y in 0..n {
            if gea.leq(x, y) != m.leq(x, y) {
                return Err(StructureError::Disagreement {
                    detail: "GEA order differs from the natural order".into(),
                    witness: gea.wit(&[x, y]),
                });
            }
        }
    }
    if n <= RDP_LIMIT {
        gea.check_rdp()?;
    }
    Ok(gea)
}

/// Rebuilds `⊕` as `x + (y ∧ (a - x))` for a Boolean `a >= x, y`, checking
/// that every Boolean cover gives the same value.
pub fn gea_to_emv(e: &GeaTable) -> Result<FiniteEmv, StructureError> {
    let n = e.size();
    e.check_axioms()?;
    let mut meet = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            match (e.bound(x, y, true), e.bound(x, y, false)) {
                (Some(_), Some(m)) => meet[x * n + y] = m,
                _ => {
                    return Err(StructureError::NotLattice {
                        x: e.label(x).to_string(),
                        y: e.label(y).to_string(),
                    })
                }
            }
        }
    }
    if n <= RDP_LIMIT {
        e.check_rdp()?;
    }
    // a is Boolean iff a ∧ (b - a) = 0 for every b >= a
    let boolean: Vec<usize> = (0..n)
        .filter(|&a| {
            (0..n).all(|b| match e.difference(b, a) {
                Some(d) => meet[a * n + d] == 0,
                None => true,
            })
        })
        .collect();
    let mut rows = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            let covers: Vec<usize> = boolean
                .iter()
                .copied()
                .filter(|&a| e.leq(x, a) && e.leq(y, a))
                .collect();
            if covers.is_empty() {
                return Err(StructureError::NoBooleanCover {
                    x: e.label(x).to_string(),
                });
            }
            let mut value = None;
            for a in covers {
                let ax = e.difference(a, x).expect("x <= a");
                let v = e.plus(x, meet[y * n + ax]);
                if v.is_none() || (value.is_some() && value != v) {
                    return Err(StructureError::SumDependsOnCover {
                        x: e.label(x).to_string(),
                        y: e.label(y).to_string(),
                    });
                }
                value = v;
            }
            rows[x][y] = value.expect("at least one cover");
        }
    }
    Ok(FiniteEmv::from_table(rows)?.with_labels(e.labels.clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_partial_addition() {
        let g = to_gea(&FiniteEmv::chain(2)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = (i + j <= 2).then_some(i + j);
                assert_eq!(g.plus(i, j), expected);
            }
        }
    }

    #[test]
    fn boolean_partial_addition_is_disjoint_union() {
        let g = to_gea(&FiniteEmv::boolean(2)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = (i & j == 0).then_some(i | j);
                assert_eq!(g.plus(i, j), expected);
            }
        }
    }

    #[test]
    fn round_trips() {
        for m in [
            FiniteEmv::chain(2),
            FiniteEmv::boolean(2),
            FiniteEmv::product(&[FiniteEmv::chain(2), FiniteEmv::chain(1)]),
        ] {
            let back = gea_to_emv(&to_gea(&m).unwrap()).unwrap();
            assert_eq!(back.table_rows(), m.table_rows());
        }
    }

    #[test]
    fn rdp_failure_is_reported() {
        // two four-element Boolean blocks glued at 0 and 1: a + a' = b + b'
        // has no common refinement
        let t = |x: usize, y: usize| -> Option<usize> {
            match (x, y) {
                (0, v) | (v, 0) => Some(v),
                (1, 2) | (2, 1) | (3, 4) | (4, 3) => Some(5),
                _ => None,
            }
        };
        let rows = (0..6).map(|x| (0..6).map(|y| t(x, y)).collect()).collect();
        let g = GeaTable::new(rows, (0..6).map(|i| i.to_string()).collect()).unwrap();
        assert!(g.check_axioms().is_ok());
        assert!(matches!(g.check_rdp(), Err(StructureError::RdpViolation { .. })));
    }
}
