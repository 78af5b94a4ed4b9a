use std::collections::HashMap;

use ratlp::Rat;
use serde::Serialize;

use crate::algebra::FiniteEmv;

use super::{MeasuresError, SignedMeasureVec};

/// `target = parts[0] + parts[1] + ...` with nonzero parts in index order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Decomposition {
    pub target: usize,
    pub parts: Vec<usize>,
}

/// Partial-addition data of a finite algebra: differences, heights and all
/// decompositions of every element.
#[derive(Debug, Clone)]
pub struct MeasureSpace<'a> {
    m: &'a FiniteEmv,
    /// `diff[x][p] = Some(z)` iff `p + z = x`.
    diff: Vec<Vec<Option<usize>>>,
    sums: Vec<(usize, usize, usize)>,
    heights: Vec<usize>,
    decomps: Vec<Vec<Vec<usize>>>,
}

type Memo = HashMap<(usize, usize, usize), Vec<Vec<usize>>>;

impl<'a> MeasureSpace<'a> {
    pub fn new(m: &'a FiniteEmv) -> Result<Self, MeasuresError> {
        let n = m.size();
        let mut diff = vec![vec![None; n]; n];
        let mut sums = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if let Some(z) = m.partial_add(x, y)? {
                    diff[z][x] = Some(y);
                    sums.push((x, y, z));
                }
            }
        }
        let mut by_size: Vec<usize> = (0..n).collect();
        by_size.sort_by_key(|&x| (0..n).filter(|&y| m.leq(y, x)).count());
        let mut heights = vec![0; n];
        for &x in &by_size {
            heights[x] = (0..n)
                .filter(|&y| y != x && m.leq(y, x))
                .map(|y| heights[y] + 1)
                .max()
                .unwrap_or(0);
        }
        let mut space = MeasureSpace {
            m,
            diff,
            sums,
            heights,
            decomps: Vec::new(),
        };
        let mut memo = Memo::new();
        space.decomps = (0..n)
            .map(|x| space.enumerate(x, 1, space.heights[x], &mut memo))
            .collect();
        Ok(space)
    }

    pub fn algebra(&self) -> &FiniteEmv {
        self.m
    }

    /// Length of the longest strictly increasing chain from 0 to `x`.
    pub fn height(&self, x: usize) -> usize {
        self.heights[x]
    }

    /// `z` with `p + z = x`, if `p <= x`.
    pub fn difference(&self, x: usize, p: usize) -> Option<usize> {
        self.diff[x][p]
    }

    /// Every defined sum `x + y = z`.
    pub fn sums(&self) -> &[(usize, usize, usize)] {
        &self.sums
    }

    /// Sorted part lists of `x` with every part at least `min` and at most
    /// `left` parts.
    fn enumerate(&self, x: usize, min: usize, left: usize, memo: &mut Memo) -> Vec<Vec<usize>> {
        if x == 0 {
            return vec![Vec::new()];
        }
        if left == 0 {
            return Vec::new();
        }
        if let Some(hit) = memo.get(&(x, min, left)) {
            return hit.clone();
        }
        let mut out = Vec::new();
        for p in min.max(1)..self.m.size() {
            let Some(rest) = self.diff[x][p] else { continue };
            if rest == 0 {
                out.push(vec![p]);
                continue;
            }
            for tail in self.enumerate(rest, p, left - 1, memo) {
                let mut parts = Vec::with_capacity(tail.len() + 1);
                parts.push(p);
                parts.extend(tail);
                out.push(parts);
            }
        }
        memo.insert((x, min, left), out.clone());
        out
    }

    /// All decompositions of `x`, complete since no decomposition has more
    /// than `height(x)` parts.
    pub fn decompositions(&self, x: usize) -> &[Vec<usize>] {
        &self.decomps[x]
    }

    fn wit(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.m.label(x).to_string()).collect()
    }

    pub(crate) fn dims(&self, f: &[Rat]) -> Result<(), MeasuresError> {
        if f.len() != self.m.size() {
            return Err(MeasuresError::DimensionMismatch {
                expected: self.m.size(),
                found: f.len(),
            });
        }
        Ok(())
    }

    /// Fails unless `f(x + y) = f(x) + f(y)` on every defined sum.
    pub fn require_additive(&self, f: &[Rat]) -> Result<(), MeasuresError> {
        self.dims(f)?;
        match self.sums.iter().find(|&&(x, y, z)| f[z] != &f[x] + &f[y]) {
            Some(&(x, y, z)) => Err(MeasuresError::NotAdditive {
                witness: self.wit(&[x, y]),
                detail: format!(
                    "m({}) + m({}) ≠ m({})",
                    self.m.label(x),
                    self.m.label(y),
                    self.m.label(z)
                ),
            }),
            None => Ok(()),
        }
    }

    /// `m(x) = max Σ d(parts)` over all decompositions of `x`.
    pub fn sup_construction(&self, d: &[Rat]) -> Result<SignedMeasureVec, MeasuresError> {
        self.dims(d)?;
        if let Some(&(x, y, z)) = self.sums.iter().find(|&&(x, y, z)| d[z] > &d[x] + &d[y]) {
            return Err(MeasuresError::NotSubadditive {
                witness: self.wit(&[x, y]),
                detail: format!(
                    "d({}) > d({}) + d({})",
                    self.m.label(z),
                    self.m.label(x),
                    self.m.label(y)
                ),
            });
        }
        let m: SignedMeasureVec = self
            .decomps
            .iter()
            .map(|ds| {
                ds.iter()
                    .map(|parts| parts.iter().map(|&p| d[p].clone()).sum::<Rat>())
                    .max()
                    .expect("every element has a decomposition")
            })
            .collect();
        self.require_additive(&m).map_err(|e| MeasuresError::Disagreement {
            detail: format!("sup-construction is not additive: {e}"),
            witness: e.witness(),
        })?;
        Ok(m)
    }
}

/// Canonical decompositions of `x` into at most `max_parts` nonzero parts.
pub fn decompositions(
    m: &FiniteEmv,
    x: usize,
    max_parts: usize,
) -> Result<Vec<Decomposition>, MeasuresError> {
    let space = MeasureSpace::new(m)?;
    let mut memo = Memo::new();
    Ok(space
        .enumerate(x, 1, max_parts, &mut memo)
        .into_iter()
        .map(|parts| Decomposition { target: x, parts })
        .collect())
}

/// The signed measure `x ↦ sup D(x)` built from a subadditive `d`.
pub fn sup_construction(m: &FiniteEmv, d: &[Rat]) -> Result<SignedMeasureVec, MeasuresError> {
    MeasureSpace::new(m)?.sup_construction(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64) -> Rat {
        Rat::from_integer(p)
    }

    fn parts(ds: &[Decomposition]) -> Vec<Vec<usize>> {
        ds.iter().map(|d| d.parts.clone()).collect()
    }

    #[test]
    fn decomposition_examples() {
        let c = FiniteEmv::chain(2);
        assert_eq!(parts(&decompositions(&c, 2, 2).unwrap()), vec![vec![1, 1], vec![2]]);
        assert_eq!(parts(&decompositions(&c, 2, 1).unwrap()), vec![vec![2]]);
        let b = FiniteEmv::boolean(2);
        assert_eq!(parts(&decompositions(&b, 3, 4).unwrap()), vec![vec![1, 2], vec![3]]);
        assert_eq!(parts(&decompositions(&b, 1, 4).unwrap()), vec![vec![1]]);
        assert_eq!(parts(&decompositions(&b, 0, 4).unwrap()), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn heights() {
        let p = FiniteEmv::product(&[FiniteEmv::chain(2), FiniteEmv::chain(1)]);
        let s = MeasureSpace::new(&p).unwrap();
        assert_eq!(s.height(p.top().unwrap()), 3);
        assert_eq!(s.decompositions(p.top().unwrap()).len(), 4);
    }

    #[test]
    fn sup_construction_examples() {
        let b = FiniteEmv::boolean(2);
        let d = vec![r(0), r(2), r(3), r(3)];
        let m = sup_construction(&b, &d).unwrap();
        assert_eq!(m, vec![r(0), r(2), r(3), r(5)]);

        let c = FiniteEmv::chain(2);
        let additive = vec![r(0), r(1), r(2)];
        assert_eq!(sup_construction(&c, &additive).unwrap(), additive);

        assert!(matches!(
            sup_construction(&c, &[r(0), r(1), r(3)]),
            Err(MeasuresError::NotSubadditive { .. })
        ));
    }
}
