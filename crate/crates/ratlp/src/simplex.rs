//! Two-phase primal simplex over exact rationals with Bland's rule.
//!
//! The bounded system is rewritten in standard form `A'x = b', x >= 0`:
//! a variable with a lower bound `l` becomes `l + w`, one with only an upper
//! bound `u` becomes `u - w`, a free variable becomes `p - q`, and a variable
//! with both bounds gets an extra row `w + slack = u - l`. Every row receives
//! an artificial column, so the artificial block of the tableau always holds
//! the current basis inverse. Phase I duals give the infeasibility
//! certificate.

use serde::{Deserialize, Serialize};

use crate::{Bounds, LinSystem, LpError, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    pub terms: Vec<(usize, Rat)>,
    pub sense: Sense,
}

impl Objective {
    pub fn maximize(terms: Vec<(usize, Rat)>) -> Self {
        Objective {
            terms,
            sense: Sense::Max,
        }
    }

    pub fn minimize(terms: Vec<(usize, Rat)>) -> Self {
        Objective {
            terms,
            sense: Sense::Min,
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.terms.iter().map(|(j, c)| c * &point[*j]).sum()
    }
}

/// Row multipliers `y` proving that no point in the bound box satisfies the
/// rows: with `r = y^T A`, the largest value of `r . v` over the box is
/// strictly below `y^T b`. Without bounds this reads `0 = c` with `c != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub multipliers: Vec<Rat>,
}

impl Certificate {
    /// The combined row `(y^T A, y^T b)`.
    pub fn combine(&self, sys: &LinSystem) -> (Vec<Rat>, Rat) {
        let mut coeffs = vec![Rat::zero(); sys.num_vars()];
        let mut rhs = Rat::zero();
        for (row, y) in sys.rows().iter().zip(&self.multipliers) {
            if y.is_zero() {
                continue;
            }
            for (j, c) in &row.terms {
                coeffs[*j] += y * c;
            }
            rhs += y * &row.rhs;
        }
        (coeffs, rhs)
    }

    /// Exact check of the certificate against `sys`.
    pub fn verify(&self, sys: &LinSystem) -> bool {
        if self.multipliers.len() != sys.num_rows() {
            return false;
        }
        let (coeffs, rhs) = self.combine(sys);
        let mut box_max = Rat::zero();
        for (j, r) in coeffs.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let b = sys.bounds(j);
            let bound = if r.is_positive() { &b.upper } else { &b.lower };
            match bound {
                Some(v) => box_max += r * v,
                None => return false,
            }
        }
        box_max < rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeasOutcome {
    Feasible(Vec<Rat>),
    Infeasible(Certificate),
}

impl FeasOutcome {
    pub fn point(&self) -> Option<&[Rat]> {
        match self {
            FeasOutcome::Feasible(p) => Some(p),
            FeasOutcome::Infeasible(_) => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasOutcome::Feasible(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solved {
    pub outcome: FeasOutcome,
    /// Optimal objective value, when an objective was given and the system is feasible.
    pub value: Option<Rat>,
}

/// How an original variable is recovered from standard-form columns.
#[derive(Debug, Clone)]
enum VarMap {
    /// `v = offset + sign * x[col]`
    Shifted { col: usize, offset: Rat, negate: bool },
    /// `v = x[pos] - x[neg]`
    Split { pos: usize, neg: usize },
}

struct StandardForm {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    /// +1 / -1 applied to each row so that the rhs is non-negative.
    flip: Vec<bool>,
    n_struct: usize,
    vars: Vec<VarMap>,
    /// Original row count; later rows are bound rows.
    n_orig: usize,
}

fn standard_form(sys: &LinSystem) -> StandardForm {
    let mut vars = Vec::with_capacity(sys.num_vars());
    let mut n_struct = 0;
    let mut bound_rows: Vec<(usize, usize, Rat)> = Vec::new(); // (w col, slack col, u - l)
    for j in 0..sys.num_vars() {
        let Bounds { lower, upper } = sys.bounds(j);
        match (lower, upper) {
            (Some(l), u) => {
                let col = n_struct;
                n_struct += 1;
                if let Some(u) = u {
                    let slack = n_struct;
                    n_struct += 1;
                    bound_rows.push((col, slack, u - l));
                }
                vars.push(VarMap::Shifted {
                    col,
                    offset: l.clone(),
                    negate: false,
                });
            }
            (None, Some(u)) => {
                vars.push(VarMap::Shifted {
                    col: n_struct,
                    offset: u.clone(),
                    negate: true,
                });
                n_struct += 1;
            }
            (None, None) => {
                vars.push(VarMap::Split {
                    pos: n_struct,
                    neg: n_struct + 1,
                });
                n_struct += 2;
            }
        }
    }

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for row in sys.rows() {
        let mut dense = vec![Rat::zero(); n_struct];
        let mut b = row.rhs.clone();
        for (j, c) in &row.terms {
            match &vars[*j] {
                VarMap::Shifted {
                    col,
                    offset,
                    negate,
                } => {
                    b -= c * offset;
                    dense[*col] = if *negate { -c } else { c.clone() };
                }
                VarMap::Split { pos, neg } => {
                    dense[*pos] = c.clone();
                    dense[*neg] = -c;
                }
            }
        }
        rows.push(dense);
        rhs.push(b);
    }
    let n_orig = rows.len();
    for (col, slack, width) in bound_rows {
        let mut dense = vec![Rat::zero(); n_struct];
        dense[col] = Rat::one();
        dense[slack] = Rat::one();
        rows.push(dense);
        rhs.push(width);
    }
    let mut flip = vec![false; rows.len()];
    for i in 0..rows.len() {
        if rhs[i].is_negative() {
            flip[i] = true;
            rhs[i] = -&rhs[i];
            for c in rows[i].iter_mut() {
                *c = -&*c;
            }
        }
    }
    StandardForm {
        rows,
        rhs,
        flip,
        n_struct,
        vars,
        n_orig,
    }
}

struct Tableau {
    /// m rows over `n_struct + m` columns (structural, then artificial).
    t: Vec<Vec<Rat>>,
    b: Vec<Rat>,
    basis: Vec<usize>,
    n_struct: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn new(sf: &StandardForm) -> Self {
        let m = sf.rows.len();
        let mut t = Vec::with_capacity(m);
        for (i, row) in sf.rows.iter().enumerate() {
            let mut full = row.clone();
            full.extend((0..m).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
            t.push(full);
        }
        Tableau {
            t,
            b: sf.rhs.clone(),
            basis: (0..m).map(|i| sf.n_struct + i).collect(),
            n_struct: sf.n_struct,
        }
    }

    fn n_cols(&self) -> usize {
        self.n_struct + self.t.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        if !p.is_one() {
            let inv = p.recip();
            for v in self.t[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            self.b[r] *= &inv;
        }
        let pivot_row = self.t[r].clone();
        let pivot_b = self.b[r].clone();
        for i in 0..self.t.len() {
            if i == r || self.t[i][c].is_zero() {
                continue;
            }
            let f = self.t[i][c].clone();
            for (v, pv) in self.t[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.b[i] -= &f * &pivot_b;
        }
        self.basis[r] = c;
    }

    /// Simplex multipliers `c_B^T B^{-1}`, read off the artificial block.
    fn duals(&self, cost: &[Rat]) -> Vec<Rat> {
        let m = self.t.len();
        (0..m)
            .map(|i| {
                let col = self.n_struct + i;
                self.basis
                    .iter()
                    .enumerate()
                    .map(|(r, &bc)| &cost[bc] * &self.t[r][col])
                    .sum()
            })
            .collect()
    }

    fn reduced_cost(&self, cost: &[Rat], j: usize) -> Rat {
        let mut d = cost[j].clone();
        for (r, &bc) in self.basis.iter().enumerate() {
            if !cost[bc].is_zero() && !self.t[r][j].is_zero() {
                d -= &cost[bc] * &self.t[r][j];
            }
        }
        d
    }

    /// Minimizes `cost . x` over columns `0..allowed`, Bland's rule throughout.
    fn run(&mut self, cost: &[Rat], allowed: usize) -> PhaseEnd {
        loop {
            let mut in_basis = vec![false; self.n_cols()];
            for &bc in &self.basis {
                in_basis[bc] = true;
            }
            let entering =
                (0..allowed).find(|&j| !in_basis[j] && self.reduced_cost(cost, j).is_negative());
            let Some(c) = entering else {
                return PhaseEnd::Optimal;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for r in 0..self.t.len() {
                let a = &self.t[r][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.b[r] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return PhaseEnd::Unbounded,
            }
        }
    }

    fn column_values(&self) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.n_cols()];
        for (r, &bc) in self.basis.iter().enumerate() {
            x[bc] = self.b[r].clone();
        }
        x
    }
}

fn recover(sf: &StandardForm, x: &[Rat]) -> Vec<Rat> {
    sf.vars
        .iter()
        .map(|vm| match vm {
            VarMap::Shifted {
                col,
                offset,
                negate,
            } => {
                if *negate {
                    offset - &x[*col]
                } else {
                    offset + &x[*col]
                }
            }
            VarMap::Split { pos, neg } => &x[*pos] - &x[*neg],
        })
        .collect()
}

/// Solves `sys`, optionally optimizing `objective`.
///
/// Deterministic: identical inputs produce identical pivot sequences.
pub fn solve(sys: &LinSystem, objective: Option<&Objective>) -> Result<Solved, LpError> {
    if let Some(obj) = objective {
        if let Some((j, _)) = obj.terms.iter().find(|(j, _)| *j >= sys.num_vars()) {
            return Err(LpError::UndeclaredVariable(*j));
        }
    }
    let sf = standard_form(sys);
    let m = sf.rows.len();
    let mut tab = Tableau::new(&sf);

    // Phase I: minimize the sum of artificials.
    let mut phase1 = vec![Rat::zero(); sf.n_struct + m];
    for c in phase1.iter_mut().skip(sf.n_struct) {
        *c = Rat::one();
    }
    tab.run(&phase1, sf.n_struct + m);
    let infeasibility: Rat = tab
        .basis
        .iter()
        .zip(&tab.b)
        .filter(|(bc, _)| **bc >= sf.n_struct)
        .map(|(_, v)| v.clone())
        .sum();
    if infeasibility.is_positive() {
        let y = tab.duals(&phase1);
        let multipliers = (0..sf.n_orig)
            .map(|i| if sf.flip[i] { -&y[i] } else { y[i].clone() })
            .collect();
        let cert = Certificate { multipliers };
        debug_assert!(cert.verify(sys));
        return Ok(Solved {
            outcome: FeasOutcome::Infeasible(cert),
            value: None,
        });
    }

    // Drive zero-level artificials out of the basis where possible.
    for r in 0..m {
        if tab.basis[r] >= sf.n_struct {
            if let Some(c) = (0..sf.n_struct).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, c);
            }
        }
    }

    let Some(obj) = objective else {
        let point = recover(&sf, &tab.column_values());
        return Ok(Solved {
            outcome: FeasOutcome::Feasible(point),
            value: None,
        });
    };

    // Phase II over structural columns only; artificials never re-enter.
    let mut cost = vec![Rat::zero(); sf.n_struct + m];
    for (j, c) in &obj.terms {
        let c = match obj.sense {
            Sense::Min => c.clone(),
            Sense::Max => -c,
        };
        match &sf.vars[*j] {
            VarMap::Shifted { col, negate, .. } => {
                cost[*col] += if *negate { -&c } else { c };
            }
            VarMap::Split { pos, neg } => {
                cost[*neg] -= &c;
                cost[*pos] += c;
            }
        }
    }
    match tab.run(&cost, sf.n_struct) {
        PhaseEnd::Unbounded => Err(LpError::Unbounded),
        PhaseEnd::Optimal => {
            let point = recover(&sf, &tab.column_values());
            let value = obj.eval(&point);
            Ok(Solved {
                outcome: FeasOutcome::Feasible(point),
                value: Some(value),
            })
        }
    }
}
