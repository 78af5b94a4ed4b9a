use crate::{LinSystem, LpError, Rat};

/// Rank of a dense matrix by exact Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        let pivot: Vec<Rat> = rows[rank].iter().map(|v| v * &inv).collect();
        for r in (rank + 1)..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            for (v, pv) in rows[r].iter_mut().zip(&pivot) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Affine rank of a point set: the rank of the differences from the first
/// point. An empty set has rank 0.
pub fn affine_rank(points: &[Vec<Rat>]) -> Result<usize, LpError> {
    let Some(first) = points.first() else {
        return Ok(0);
    };
    let dim = first.len();
    let mut diffs = Vec::with_capacity(points.len().saturating_sub(1));
    for p in &points[1..] {
        if p.len() != dim {
            return Err(LpError::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        diffs.push(p.iter().zip(first).map(|(a, b)| a - b).collect());
    }
    Ok(rank(diffs))
}

/// True iff `point` is feasible for `sys` and the constraints active at it
/// (all rows plus every bound met with equality) have full column rank,
/// i.e. `point` is a vertex of the feasible polyhedron.
pub fn vertex_test(point: &[Rat], sys: &LinSystem) -> Result<bool, LpError> {
    if point.len() != sys.num_vars() {
        return Err(LpError::DimensionMismatch {
            expected: sys.num_vars(),
            found: point.len(),
        });
    }
    if !sys.is_feasible_point(point) {
        return Ok(false);
    }
    let n = sys.num_vars();
    let mut active: Vec<Vec<Rat>> = sys
        .rows()
        .iter()
        .map(|row| {
            let mut dense = vec![Rat::zero(); n];
            for (j, c) in &row.terms {
                dense[*j] = c.clone();
            }
            dense
        })
        .collect();
    for (j, v) in point.iter().enumerate() {
        let b = sys.bounds(j);
        let tight = b.lower.as_ref() == Some(v) || b.upper.as_ref() == Some(v);
        if tight {
            let mut unit = vec![Rat::zero(); n];
            unit[j] = Rat::one();
            active.push(unit);
        }
    }
    Ok(rank(active) == n)
}
