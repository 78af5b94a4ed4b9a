use crate::algebra::{Element, FiniteEmv, SymbolicEmv};

use super::StructureError;

/// Largest carrier on which [`maximal_ideals`] is cross-checked against the
/// subset-enumeration oracle.
pub const ORACLE_LIMIT: usize = 12;

/// A subset of a finite carrier, stored as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    members: Vec<bool>,
}

impl Ideal {
    pub fn from_elements(n: usize, elements: impl IntoIterator<Item = usize>) -> Self {
        let mut members = vec![false; n];
        for x in elements {
            members[x] = true;
        }
        Ideal { members }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members[x]
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&x| self.members[x]).collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn carrier_size(&self) -> usize {
        self.members.len()
    }

    pub fn is_proper(&self) -> bool {
        self.members.iter().any(|&b| !b)
    }

    pub fn intersect(&self, other: &Ideal) -> Ideal {
        Ideal {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| *a && *b)
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.members.iter().zip(&other.members).all(|(a, b)| !a || *b)
    }

    pub fn labels(&self, m: &FiniteEmv) -> Vec<String> {
        self.elements().iter().map(|&x| m.label(x).to_string()).collect()
    }
}

/// Contains 0, is down-closed and is closed under `⊕`.
pub fn is_ideal(m: &FiniteEmv, set: &Ideal) -> bool {
    let n = m.size();
    if !set.contains(0) {
        return false;
    }
    let els = set.elements();
    let down = els.iter().all(|&y| (0..n).all(|x| !m.leq(x, y) || set.contains(x)));
    down && els
        .iter()
        .all(|&x| els.iter().all(|&y| set.contains(m.oplus(x, y))))
}

/// The least ideal containing `generators`.
pub fn ideal_generated(m: &FiniteEmv, generators: &[usize]) -> Ideal {
    let n = m.size();
    let mut members = vec![false; n];
    members[0] = true;
    for &g in generators {
        members[g] = true;
    }
    loop {
        let mut changed = false;
        let current: Vec<usize> = (0..n).filter(|&x| members[x]).collect();
        for &y in &current {
            for x in 0..n {
                if !members[x] && m.leq(x, y) {
                    members[x] = true;
                    changed = true;
                }
            }
            for &z in &current {
                let s = m.oplus(y, z);
                if !members[s] {
                    members[s] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ideal { members };
        }
    }
}

/// Maximal ideals by subset enumeration; `None` above [`ORACLE_LIMIT`].
pub fn maximal_ideals_bruteforce(m: &FiniteEmv) -> Option<Vec<Ideal>> {
    let n = m.size();
    if n > ORACLE_LIMIT {
        return None;
    }
    let proper: Vec<Ideal> = (0u32..(1 << n))
        .map(|mask| Ideal::from_elements(n, (0..n).filter(|b| mask & (1 << b) != 0)))
        .filter(|set| set.is_proper() && is_ideal(m, set))
        .collect();
    let mut maximal: Vec<Ideal> = proper
        .iter()
        .filter(|i| !proper.iter().any(|j| j != *i && i.is_subset(j)))
        .cloned()
        .collect();
    maximal.sort();
    Some(maximal)
}

/// `I_e = {x : x ∧ e = 0}` for each atom `e` of the idempotents, in atom
/// order; cross-checked against subset enumeration on small carriers.
pub fn maximal_ideals(m: &FiniteEmv) -> Result<Vec<Ideal>, StructureError> {
    let n = m.size();
    if n == 1 {
        return Err(StructureError::ZeroAlgebra);
    }
    let order = m.natural_order()?;
    let mut out: Vec<Ideal> = Vec::new();
    for e in m.idempotent_atoms() {
        let ideal = Ideal::from_elements(n, (0..n).filter(|&x| order.meet(x, e) == 0));
        if !out.contains(&ideal) {
            out.push(ideal);
        }
    }
    if let Some(mut oracle) = maximal_ideals_bruteforce(m) {
        let mut sorted = out.clone();
        sorted.sort();
        oracle.sort();
        if sorted != oracle {
            return Err(StructureError::Disagreement {
                detail: format!(
                    "atom construction gives {} maximal ideals, enumeration gives {}",
                    sorted.len(),
                    oracle.len()
                ),
                witness: Vec::new(),
            });
        }
    }
    Ok(out)
}

/// Intersection of all maximal ideals.
pub fn radical(m: &FiniteEmv) -> Result<Ideal, StructureError> {
    let ideals = maximal_ideals(m)?;
    let n = m.size();
    Ok(ideals
        .iter()
        .fold(Ideal::from_elements(n, 0..n), |acc, i| acc.intersect(i)))
}

/// `x` with `k·x` defined for every `k`. In a finite carrier the multiples
/// of a nonzero `x` strictly increase, so `n` steps decide it.
fn finite_infinitesimal(m: &FiniteEmv, x: usize) -> Result<bool, StructureError> {
    let mut acc = x;
    for _ in 0..m.size() {
        match m.partial_add(acc, x)? {
            Some(next) => acc = next,
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// `(Rad, Infinit)`; they must coincide.
pub fn radical_and_infinitesimals(m: &FiniteEmv) -> Result<(Ideal, Ideal), StructureError> {
    let rad = radical(m)?;
    let n = m.size();
    let mut inf = Vec::new();
    for x in 0..n {
        if finite_infinitesimal(m, x)? {
            inf.push(x);
        }
    }
    let infinit = Ideal::from_elements(n, inf);
    if rad != infinit {
        let witness = (0..n)
            .find(|&x| rad.contains(x) != infinit.contains(x))
            .map(|x| vec![m.label(x).to_string()])
            .unwrap_or_default();
        return Err(StructureError::Disagreement {
            detail: "radical and infinitesimals differ".into(),
            witness,
        });
    }
    Ok((rad, infinit))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicRadical {
    pub sample: Vec<Element>,
    pub radical: Vec<Element>,
    pub infinitesimals: Vec<Element>,
}

/// Membership in the common kernel of the family's state-morphisms.
fn in_radical(fam: &SymbolicEmv, x: &Element) -> bool {
    match (fam, x) {
        (SymbolicEmv::FinSubsets, Element::Set(s)) => s.is_empty(),
        (SymbolicEmv::FinSupport { .. }, Element::Map(m)) => m.is_empty(),
        (SymbolicEmv::ChangLex, Element::Lex { b, .. }) => *b == 0,
        (SymbolicEmv::Representing(inner), Element::Direct(y)) => in_radical(inner, y),
        _ => false,
    }
}

/// Steps after which repeated addition of a non-infinitesimal has failed.
fn iteration_bound(fam: &SymbolicEmv) -> usize {
    match fam {
        SymbolicEmv::FinSubsets => 2,
        SymbolicEmv::FinSupport { k } => *k as usize + 2,
        SymbolicEmv::ChangLex => 64,
        SymbolicEmv::Representing(inner) => iteration_bound(inner),
    }
}

/// Radical and infinitesimals restricted to `enumerate(bound)`.
///
/// ChangLex multiples of `(0,m)` never become undefined, so there the
/// algebraic rule decides and the iteration only confirms it.
pub fn radical_and_infinitesimals_symbolic(
    fam: &SymbolicEmv,
    bound: usize,
) -> Result<SymbolicRadical, StructureError> {
    let sample = fam.enumerate(bound);
    let mut radical = Vec::new();
    let mut infinitesimals = Vec::new();
    for x in &sample {
        if in_radical(fam, x) {
            radical.push(x.clone());
        }
        let mut acc = x.clone();
        let mut survived = true;
        for _ in 0..iteration_bound(fam) {
            match fam.partial_add(&acc, x)? {
                Some(next) => acc = next,
                None => {
                    survived = false;
                    break;
                }
            }
        }
        let infinitesimal = match (fam, x) {
            (SymbolicEmv::ChangLex, Element::Lex { b, .. }) => {
                let rule = *b == 0;
                if rule && !survived {
                    return Err(StructureError::Disagreement {
                        detail: "a (0,m) multiple became undefined".into(),
                        witness: vec![x.to_string()],
                    });
                }
                rule
            }
            _ => survived,
        };
        if infinitesimal {
            infinitesimals.push(x.clone());
        }
    }
    if radical != infinitesimals {
        return Err(StructureError::Disagreement {
            detail: "radical and infinitesimals differ on the sample".into(),
            witness: sample
                .iter()
                .find(|x| radical.contains(x) != infinitesimals.contains(x))
                .map(|x| vec![x.to_string()])
                .unwrap_or_default(),
        });
    }
    Ok(SymbolicRadical {
        sample,
        radical,
        infinitesimals,
    })
}

/// `M/I` with its projection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: FiniteEmv,
    /// Members of each class, classes ordered by least member.
    pub classes: Vec<Vec<usize>>,
    pub projection: Vec<usize>,
}

/// Quotient by `x ~ y iff x <= y ⊕ i and y <= x ⊕ j` for some `i, j ∈ I`.
pub fn quotient(m: &FiniteEmv, ideal: &Ideal) -> Result<Quotient, StructureError> {
    let n = m.size();
    if !is_ideal(m, ideal) {
        return Err(StructureError::NotAnIdeal {
            witness: ideal.labels(m),
            detail: "not down-closed and ⊕-closed".into(),
        });
    }
    if !ideal.is_proper() {
        return Err(StructureError::ImproperIdeal);
    }
    let members = ideal.elements();
    let below_with_slack = |x: usize, y: usize| members.iter().any(|&i| m.leq(x, m.oplus(y, i)));
    let mut projection = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if projection[x] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let class: Vec<usize> = (x..n)
            .filter(|&y| below_with_slack(x, y) && below_with_slack(y, x))
            .collect();
        for &y in &class {
            if projection[y] != usize::MAX {
                return Err(StructureError::NotACongruence {
                    x: m.label(x).to_string(),
                    y: m.label(y).to_string(),
                });
            }
            projection[y] = c;
        }
        classes.push(class);
    }
    let k = classes.len();
    let mut rows = vec![vec![0; k]; k];
    for (ci, a) in classes.iter().enumerate() {
        for (cj, b) in classes.iter().enumerate() {
            rows[ci][cj] = projection[m.oplus(a[0], b[0])];
        }
    }
    for x in 0..n {
        for y in 0..n {
            if projection[m.oplus(x, y)] != rows[projection[x]][projection[y]] {
                return Err(StructureError::NotACongruence {
                    x: m.label(x).to_string(),
                    y: m.label(y).to_string(),
                });
            }
        }
    }
    let labels = classes.iter().map(|c| m.label(c[0]).to_string()).collect();
    let algebra = FiniteEmv::from_table(rows)?.with_labels(labels)?;
    Ok(Quotient {
        algebra,
        classes,
        projection,
    })
}

/// Number of strictly smaller elements, if the natural order is a chain.
pub fn chain_heights(m: &FiniteEmv) -> Option<Vec<usize>> {
    let n = m.size();
    let total = (0..n).all(|x| (0..n).all(|y| m.leq(x, y) || m.leq(y, x)));
    total.then(|| {
        (0..n)
            .map(|x| (0..n).filter(|&y| y != x && m.leq(y, x)).count())
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn by_labels(m: &FiniteEmv, labels: &[&str]) -> Ideal {
        Ideal::from_elements(m.size(), labels.iter().map(|l| m.index_of(l).unwrap()))
    }

    #[test]
    fn generated_ideals() {
        let c = FiniteEmv::chain(2);
        assert_eq!(ideal_generated(&c, &[]).elements(), vec![0]);
        assert_eq!(ideal_generated(&c, &[1]).elements(), vec![0, 1, 2]);
        let p = FiniteEmv::product(&[FiniteEmv::chain(2), FiniteEmv::chain(1)]);
        let g = ideal_generated(&p, &[p.index_of("(1,0)").unwrap()]);
        assert_eq!(g, by_labels(&p, &["(0,0)", "(1,0)", "(2,0)"]));
    }

    #[test]
    fn maximal_ideal_examples() {
        let c = FiniteEmv::chain(2);
        assert_eq!(maximal_ideals(&c).unwrap(), vec![Ideal::from_elements(3, [0])]);
        let p = FiniteEmv::product(&[FiniteEmv::chain(2), FiniteEmv::chain(1)]);
        let got = maximal_ideals(&p).unwrap();
        assert_eq!(got.len(), 2);
        assert!(got.contains(&by_labels(&p, &["(0,0)", "(0,1)"])));
        assert!(got.contains(&by_labels(&p, &["(0,0)", "(1,0)", "(2,0)"])));
        let b = FiniteEmv::boolean(2);
        assert_eq!(
            maximal_ideals(&b).unwrap(),
            vec![Ideal::from_elements(4, [0, 2]), Ideal::from_elements(4, [0, 1])]
        );
        assert_eq!(maximal_ideals(&FiniteEmv::chain(0)), Err(StructureError::ZeroAlgebra));
    }

    #[test]
    fn radical_examples() {
        let (rad, inf) = radical_and_infinitesimals(&FiniteEmv::chain(2)).unwrap();
        assert_eq!(rad.elements(), vec![0]);
        assert_eq!(inf, rad);
        let t = radical_and_infinitesimals_symbolic(&SymbolicEmv::FinSubsets, 6).unwrap();
        assert_eq!(t.radical, vec![Element::set([])]);
        let c = radical_and_infinitesimals_symbolic(&SymbolicEmv::ChangLex, 20).unwrap();
        assert_eq!(c.radical.len(), 21);
        assert!(c.radical.iter().all(|x| matches!(x, Element::Lex { b: 0, .. })));
        assert_eq!(c.infinitesimals, c.radical);
    }

    #[test]
    fn quotient_examples() {
        let p = FiniteEmv::product(&[FiniteEmv::chain(2), FiniteEmv::chain(1)]);
        let second_zero = by_labels(&p, &["(0,0)", "(1,0)", "(2,0)"]);
        let q = quotient(&p, &second_zero).unwrap();
        assert_eq!(q.algebra.table_rows(), FiniteEmv::chain(1).table_rows());
        assert_eq!(chain_heights(&q.algebra), Some(vec![0, 1]));
        let c = FiniteEmv::chain(2);
        let same = quotient(&c, &Ideal::from_elements(3, [0])).unwrap();
        assert_eq!(same.algebra.table_rows(), c.table_rows());
        assert_eq!(same.projection, vec![0, 1, 2]);
        assert_eq!(
            quotient(&c, &Ideal::from_elements(3, [0, 1, 2])).unwrap_err(),
            StructureError::ImproperIdeal
        );
    }
}
