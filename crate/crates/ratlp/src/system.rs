use serde::{Deserialize, Serialize};

use crate::{LpError, Rat};

/// Optional lower and upper bound on one variable.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Bounds {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Rat>,
}

impl Bounds {
    pub fn free() -> Self {
        Bounds::default()
    }

    pub fn non_negative() -> Self {
        Bounds {
            lower: Some(Rat::zero()),
            upper: None,
        }
    }

    /// The box `0 <= v <= 1`.
    pub fn unit() -> Self {
        Bounds {
            lower: Some(Rat::zero()),
            upper: Some(Rat::one()),
        }
    }

    pub fn contains(&self, v: &Rat) -> bool {
        self.lower.as_ref().is_none_or(|l| v >= l) && self.upper.as_ref().is_none_or(|u| v <= u)
    }
}

/// One equality constraint `sum coeff_j * v_j = rhs`, stored sparsely with
/// ascending variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub terms: Vec<(usize, Rat)>,
    pub rhs: Rat,
}

impl Row {
    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.terms.iter().map(|(j, c)| c * &point[*j]).sum()
    }

    pub fn coeff(&self, var: usize) -> Rat {
        self.terms
            .iter()
            .find(|(j, _)| *j == var)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }
}

/// A system of linear equalities over bounded variables.
///
/// Rows keep insertion order; pivoting depends on it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinSystem {
    labels: Vec<String>,
    bounds: Vec<Bounds>,
    rows: Vec<Row>,
}

impl LinSystem {
    pub fn new() -> Self {
        LinSystem::default()
    }

    pub fn add_var(&mut self, label: impl Into<String>, bounds: Bounds) -> usize {
        self.labels.push(label.into());
        self.bounds.push(bounds);
        self.labels.len() - 1
    }

    /// Adds `sum terms = rhs`. Repeated variables are merged and zero
    /// coefficients dropped.
    pub fn add_row<I>(&mut self, terms: I, rhs: Rat) -> Result<usize, LpError>
    where
        I: IntoIterator<Item = (usize, Rat)>,
    {
        let mut merged: Vec<(usize, Rat)> = Vec::new();
        for (j, c) in terms {
            if j >= self.labels.len() {
                return Err(LpError::UndeclaredVariable(j));
            }
            match merged.iter_mut().find(|(k, _)| *k == j) {
                Some((_, acc)) => *acc += c,
                None => merged.push((j, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        merged.sort_by_key(|(j, _)| *j);
        self.rows.push(Row { terms: merged, rhs });
        Ok(self.rows.len() - 1)
    }

    /// Pins `v = value`.
    pub fn fix(&mut self, var: usize, value: Rat) -> Result<usize, LpError> {
        self.add_row([(var, Rat::one())], value)
    }

    pub fn num_vars(&self) -> usize {
        self.labels.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn bounds(&self, var: usize) -> &Bounds {
        &self.bounds[var]
    }

    pub fn label(&self, var: usize) -> &str {
        &self.labels[var]
    }

    /// `row(point) - rhs` for every row.
    pub fn residuals(&self, point: &[Rat]) -> Vec<Rat> {
        self.rows.iter().map(|r| r.eval(point) - &r.rhs).collect()
    }

    /// True when `point` satisfies every row and every bound exactly.
    pub fn is_feasible_point(&self, point: &[Rat]) -> bool {
        point.len() == self.num_vars()
            && self.residuals(point).iter().all(Rat::is_zero)
            && point.iter().zip(&self.bounds).all(|(v, b)| b.contains(v))
    }
}
