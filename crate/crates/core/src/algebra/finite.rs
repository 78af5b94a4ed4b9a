use std::sync::OnceLock;

use super::AlgebraError;

/// Lattice tables of the natural order `x <= y iff x ⊕ z = y for some z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalOrder {
    n: usize,
    join: Vec<usize>,
    meet: Vec<usize>,
}

impl NaturalOrder {
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n + y]
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n + y]
    }

    pub fn join_rows(&self) -> Vec<Vec<usize>> {
        self.join.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn meet_rows(&self) -> Vec<Vec<usize>> {
        self.meet.chunks(self.n).map(<[usize]>::to_vec).collect()
    }
}

/// Operations that need a valid lattice and a top idempotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedOps {
    pub top: usize,
    pub idempotents: Vec<usize>,
    /// `λ_top(x)` for every `x`.
    pub complement: Vec<usize>,
    n: usize,
    odot: Vec<usize>,
}

impl DerivedOps {
    pub fn odot(&self, x: usize, y: usize) -> usize {
        self.odot[x * self.n + y]
    }
}

/// A finite EMV-algebra given by its `⊕`-table; element 0 is the zero.
///
/// Everything else (order, lattice, `λ_a`, `⊙`, partial `+`) is derived from
/// the table on first use. Tables are not validated on construction; see
/// [`verify_finite`](super::verify_finite).
#[derive(Debug, Clone)]
pub struct FiniteEmv {
    n: usize,
    table: Vec<usize>,
    labels: Vec<String>,
    leq: Vec<bool>,
    order: OnceLock<Result<NaturalOrder, AlgebraError>>,
    ops: OnceLock<Result<DerivedOps, AlgebraError>>,
}

impl PartialEq for FiniteEmv {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.table == other.table && self.labels == other.labels
    }
}

impl Eq for FiniteEmv {}

impl FiniteEmv {
    /// Wraps a square table whose entries are indices into the carrier.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self, AlgebraError> {
        let n = rows.len();
        if n == 0 {
            return Err(AlgebraError::MalformedTable("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(AlgebraError::MalformedTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(AlgebraError::MalformedTable(format!(
                        "entry ({i},{j}) = {v} is out of range"
                    )));
                }
            }
            table.extend_from_slice(row);
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Ok(Self::from_parts(n, table, labels))
    }

    fn from_parts(n: usize, table: Vec<usize>, labels: Vec<String>) -> Self {
        let mut leq = vec![false; n * n];
        for x in 0..n {
            for z in 0..n {
                leq[x * n + table[x * n + z]] = true;
            }
        }
        FiniteEmv {
            n,
            table,
            labels,
            leq,
            order: OnceLock::new(),
            ops: OnceLock::new(),
        }
    }

    /// The Łukasiewicz chain `{0, 1, ..., k}` with truncated addition.
    pub fn chain(k: usize) -> Self {
        let n = k + 1;
        let table = (0..n * n).map(|c| (c / n + c % n).min(k)).collect();
        Self::from_parts(n, table, (0..n).map(|i| i.to_string()).collect())
    }

    /// The Boolean algebra of subsets of `{0, ..., m-1}`, indexed by bitmask.
    pub fn boolean(m: u32) -> Self {
        let n = 1usize << m;
        let table = (0..n * n).map(|c| (c / n) | (c % n)).collect();
        let labels = (0..n)
            .map(|mask| {
                let members: Vec<String> = (0..m)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| b.to_string())
                    .collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        Self::from_parts(n, table, labels)
    }

    /// Direct product; indices run lexicographically with the first factor
    /// most significant.
    pub fn product(factors: &[FiniteEmv]) -> Self {
        let sizes: Vec<usize> = factors.iter().map(|f| f.n).collect();
        let n: usize = sizes.iter().product();
        let split = |mut idx: usize| {
            let mut coords = vec![0; sizes.len()];
            for (slot, &size) in coords.iter_mut().zip(&sizes).rev() {
                *slot = idx % size;
                idx /= size;
            }
            coords
        };
        let coords: Vec<Vec<usize>> = (0..n).map(split).collect();
        let join_idx = |c: &[usize]| c.iter().zip(&sizes).fold(0, |acc, (v, s)| acc * s + v);
        let mut table = Vec::with_capacity(n * n);
        for x in &coords {
            for y in &coords {
                let sum: Vec<usize> = factors
                    .iter()
                    .zip(x.iter().zip(y))
                    .map(|(f, (a, b))| f.oplus(*a, *b))
                    .collect();
                table.push(join_idx(&sum));
            }
        }
        let labels = coords
            .iter()
            .map(|c| {
                let parts: Vec<&str> = c
                    .iter()
                    .zip(factors)
                    .map(|(v, f)| f.label(*v))
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect();
        Self::from_parts(n, table, labels)
    }

    /// Replaces the element labels; lengths must match.
    pub fn with_labels(self, labels: Vec<String>) -> Result<Self, AlgebraError> {
        if labels.len() != self.n {
            return Err(AlgebraError::MalformedTable(format!(
                "{} labels for {} elements",
                labels.len(),
                self.n
            )));
        }
        Ok(Self::from_parts(self.n, self.table, labels))
    }

    /// Copy with the single entry `(i, j)` of the table set to `v`.
    pub fn mutated(&self, i: usize, j: usize, v: usize) -> Result<Self, AlgebraError> {
        if i >= self.n || j >= self.n || v >= self.n {
            return Err(AlgebraError::MalformedTable(format!(
                "mutation ({i},{j}) -> {v} is out of range"
            )));
        }
        let mut table = self.table.clone();
        table[i * self.n + j] = v;
        Ok(Self::from_parts(self.n, table, self.labels.clone()))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn oplus(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `x <= y` in the natural order; total even on corrupt tables.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.n + y]
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.oplus(a, a) == a
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| self.is_idempotent(a)).collect()
    }

    /// Least upper bound of `x, y` in the natural order, if one exists.
    pub fn lub(&self, x: usize, y: usize) -> Option<usize> {
        self.extremal_bound(x, y, true)
    }

    /// Greatest lower bound of `x, y` in the natural order, if one exists.
    pub fn glb(&self, x: usize, y: usize) -> Option<usize> {
        self.extremal_bound(x, y, false)
    }

    fn extremal_bound(&self, x: usize, y: usize, upper: bool) -> Option<usize> {
        let rel = |a: usize, b: usize| if upper { self.leq(a, b) } else { self.leq(b, a) };
        let bounds: Vec<usize> = (0..self.n)
            .filter(|&u| rel(x, u) && rel(y, u))
            .collect();
        let mut best = *bounds.first()?;
        for &u in &bounds {
            if rel(u, best) {
                best = u;
            }
        }
        bounds.iter().all(|&u| rel(best, u)).then_some(best)
    }

    fn wit(&self, x: usize) -> String {
        self.labels[x].clone()
    }

    /// Join and meet tables, or the first witness that the natural order is
    /// not a distributive lattice.
    pub fn natural_order(&self) -> Result<&NaturalOrder, AlgebraError> {
        self.order
            .get_or_init(|| self.compute_order())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn compute_order(&self) -> Result<NaturalOrder, AlgebraError> {
        let n = self.n;
        for x in 0..n {
            if !self.leq(x, x) {
                return Err(AlgebraError::NotPartialOrder {
                    x: self.wit(x),
                    y: self.wit(x),
                });
            }
            for y in 0..n {
                if x != y && self.leq(x, y) && self.leq(y, x) {
                    return Err(AlgebraError::NotPartialOrder {
                        x: self.wit(x),
                        y: self.wit(y),
                    });
                }
                if self.leq(x, y) {
                    if let Some(z) = (0..n).find(|&z| self.leq(y, z) && !self.leq(x, z)) {
                        return Err(AlgebraError::NotPartialOrder {
                            x: self.wit(x),
                            y: self.wit(z),
                        });
                    }
                }
            }
        }
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                match (self.lub(x, y), self.glb(x, y)) {
                    (Some(j), Some(m)) => {
                        join[x * n + y] = j;
                        meet[x * n + y] = m;
                    }
                    _ => {
                        return Err(AlgebraError::NotALattice {
                            x: self.wit(x),
                            y: self.wit(y),
                        })
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = meet[x * n + join[y * n + z]];
                    let rhs = join[meet[x * n + y] * n + meet[x * n + z]];
                    if lhs != rhs {
                        return Err(AlgebraError::NotDistributive {
                            x: self.wit(x),
                            y: self.wit(y),
                            z: self.wit(z),
                        });
                    }
                }
            }
        }
        Ok(NaturalOrder { n, join, meet })
    }

    pub fn join(&self, x: usize, y: usize) -> Result<usize, AlgebraError> {
        Ok(self.natural_order()?.join(x, y))
    }

    pub fn meet(&self, x: usize, y: usize) -> Result<usize, AlgebraError> {
        Ok(self.natural_order()?.meet(x, y))
    }

    /// `λ_a(x)`: the least `z <= a` with `z ⊕ x = a`, found by scanning.
    pub fn lambda(&self, a: usize, x: usize) -> Result<usize, AlgebraError> {
        if !self.is_idempotent(a) {
            return Err(AlgebraError::NotIdempotent { a: self.wit(a) });
        }
        if !self.leq(x, a) {
            return Err(AlgebraError::NotBelow {
                x: self.wit(x),
                a: self.wit(a),
            });
        }
        let candidates: Vec<usize> = (0..self.n)
            .filter(|&z| self.leq(z, a) && self.oplus(z, x) == a)
            .collect();
        candidates
            .iter()
            .copied()
            .find(|&c| candidates.iter().all(|&z| self.leq(c, z)))
            .ok_or_else(|| AlgebraError::NoMinimum {
                a: self.wit(a),
                x: self.wit(x),
            })
    }

    /// `λ_a(λ_a(x) ⊕ λ_a(y))` for an explicit idempotent `a >= x, y`.
    pub fn odot_with(&self, a: usize, x: usize, y: usize) -> Result<usize, AlgebraError> {
        let lx = self.lambda(a, x)?;
        let ly = self.lambda(a, y)?;
        self.lambda(a, self.oplus(lx, ly))
    }

    /// Top element, idempotents, top complement and `⊙` table.
    pub fn derived(&self) -> Result<&DerivedOps, AlgebraError> {
        self.ops
            .get_or_init(|| self.compute_ops())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn compute_ops(&self) -> Result<DerivedOps, AlgebraError> {
        let order = self.natural_order()?;
        let n = self.n;
        let top = (0..n).fold(0, |acc, x| order.join(acc, x));
        if !self.is_idempotent(top) {
            let x = (0..n)
                .find(|&x| !(0..n).any(|a| self.is_idempotent(a) && self.leq(x, a)))
                .unwrap_or(top);
            return Err(AlgebraError::NoIdempotentCover { x: self.wit(x) });
        }
        let complement = (0..n)
            .map(|x| self.lambda(top, x))
            .collect::<Result<Vec<_>, _>>()?;
        let mut odot = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let s = self.oplus(complement[x], complement[y]);
                odot.push(self.lambda(top, s)?);
            }
        }
        Ok(DerivedOps {
            top,
            idempotents: self.idempotents(),
            complement,
            n,
            odot,
        })
    }

    pub fn top(&self) -> Result<usize, AlgebraError> {
        Ok(self.derived()?.top)
    }

    pub fn odot(&self, x: usize, y: usize) -> Result<usize, AlgebraError> {
        Ok(self.derived()?.odot(x, y))
    }

    /// `x + y`, defined iff `x ⊙ y = 0`.
    pub fn partial_add(&self, x: usize, y: usize) -> Result<Option<usize>, AlgebraError> {
        Ok((self.odot(x, y)? == 0).then(|| self.oplus(x, y)))
    }

    /// Minimal nonzero idempotents.
    pub fn idempotent_atoms(&self) -> Vec<usize> {
        let nonzero: Vec<usize> = self.idempotents().into_iter().filter(|&a| a != 0).collect();
        nonzero
            .iter()
            .copied()
            .filter(|&e| !nonzero.iter().any(|&f| f != e && self.leq(f, e)))
            .collect()
    }

    /// Least idempotent above `x`.
    pub fn idempotent_above(&self, x: usize) -> Result<usize, AlgebraError> {
        let above: Vec<usize> = self
            .idempotents()
            .into_iter()
            .filter(|&a| self.leq(x, a))
            .collect();
        above
            .iter()
            .copied()
            .find(|&c| above.iter().all(|&a| self.leq(c, a)))
            .ok_or_else(|| AlgebraError::NoIdempotentCover { x: self.wit(x) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_two_operations() {
        let c = FiniteEmv::chain(2);
        assert_eq!(c.table_rows(), vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]]);
        assert!(c.leq(1, 2));
        assert_eq!(c.lambda(2, 1).unwrap(), 1);
        assert_eq!(c.lambda(2, 0).unwrap(), 2);
        assert_eq!(c.odot(1, 1).unwrap(), 0);
        assert_eq!(c.odot(2, 1).unwrap(), 1);
        assert_eq!(c.partial_add(1, 1).unwrap(), Some(2));
        assert_eq!(c.partial_add(2, 1).unwrap(), None);
        assert_eq!(c.idempotents(), vec![0, 2]);
        assert_eq!(c.top().unwrap(), 2);
    }

    #[test]
    fn boolean_lattice_and_labels() {
        let b = FiniteEmv::boolean(2);
        assert_eq!(b.labels(), ["{}", "{0}", "{1}", "{0,1}"]);
        assert_eq!(b.join(1, 2).unwrap(), 3);
        assert_eq!(b.meet(1, 2).unwrap(), 0);
        assert_eq!(b.idempotents(), vec![0, 1, 2, 3]);
        assert_eq!(b.idempotent_atoms(), vec![1, 2]);
    }

    #[test]
    fn product_layout() {
        let p = FiniteEmv::product(&[FiniteEmv::chain(2), FiniteEmv::chain(1)]);
        assert_eq!(p.size(), 6);
        assert_eq!(p.labels(), ["(0,0)", "(0,1)", "(1,0)", "(1,1)", "(2,0)", "(2,1)"]);
        let at = |l: &str| p.index_of(l).unwrap();
        assert_eq!(p.oplus(at("(1,1)"), at("(1,0)")), at("(2,1)"));
        let idem: Vec<&str> = p.idempotents().iter().map(|&i| p.label(i)).collect();
        assert_eq!(idem, ["(0,0)", "(0,1)", "(2,0)", "(2,1)"]);
    }

    #[test]
    fn lambda_errors() {
        let c = FiniteEmv::chain(2);
        assert!(matches!(c.lambda(1, 0), Err(AlgebraError::NotIdempotent { .. })));
        assert!(matches!(c.lambda(0, 1), Err(AlgebraError::NotBelow { .. })));
    }

    #[test]
    fn mutated_chain_degenerates() {
        let m = FiniteEmv::chain(2).mutated(1, 1, 1).unwrap();
        assert!(m.is_idempotent(1));
        assert_eq!(m.lambda(2, 1).unwrap(), 2);
        assert_eq!(m.lambda(2, 2).unwrap(), 0);
    }

    #[test]
    fn malformed_tables() {
        assert!(FiniteEmv::from_table(vec![vec![0, 1], vec![1]]).is_err());
        assert!(FiniteEmv::from_table(vec![vec![0, 2], vec![2, 1]]).is_err());
        assert!(FiniteEmv::from_table(vec![]).is_err());
    }
}
