use nalgebra::{DMatrix, DVector};

use super::Vector;

fn columns(cols: &[Vector], rows: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

/// Solve the square system `A x = b` given by rows; `None` when singular.
pub fn solve_square(rows: &[Vector], b: &[f64]) -> Option<Vector> {
    let n = rows.len();
    let a = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let lu = a.lu();
    let x = lu.solve(&DVector::from_column_slice(b))?;
    let scale = rows.iter().flatten().fold(1.0_f64, |m, v| m.max(v.abs()));
    // Reject nearly singular systems: check the residual and the pivot size.
    let det = lu.determinant().abs();
    if !det.is_finite() || det < 1e-12 * scale.powi(n as i32) {
        return None;
    }
    Some(x.iter().copied().collect())
}

/// Least squares coefficients of `y` in the span of `cols`; `None` when the
/// columns are linearly dependent.
pub fn least_squares(cols: &[Vector], y: &[f64]) -> Option<Vector> {
    if cols.is_empty() {
        return Some(Vec::new());
    }
    let a = columns(cols, y.len());
    let gram = a.transpose() * &a;
    let rhs = a.transpose() * DVector::from_column_slice(y);
    let chol = gram.clone().cholesky()?;
    let min_diag = (0..gram.nrows()).map(|i| chol.l()[(i, i)]).fold(f64::INFINITY, f64::min);
    let max_diag = (0..gram.nrows()).map(|i| gram[(i, i)]).fold(0.0, f64::max).sqrt();
    if min_diag <= 1e-10 * max_diag.max(1e-300) {
        return None;
    }
    Some(chol.solve(&rhs).iter().copied().collect())
}

/// Orthonormal basis of the null space of the matrix with the given rows.
pub fn null_space(rows: &[Vector], n: usize) -> Vec<Vector> {
    if rows.is_empty() {
        return (0..n).map(|i| unit_vec(n, i)).collect();
    }
    let m = rows.len();
    // Pad to a square-or-tall matrix so the SVD exposes all right singular vectors.
    let r = m.max(n);
    let a = DMatrix::from_fn(r, n, |i, j| if i < m { rows[i][j] } else { 0.0 });
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().fold(0.0_f64, |x, s| x.max(*s));
    let tol = 1e-9 * smax.max(1.0);
    let mut out = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s <= tol {
            out.push(vt.row(k).iter().copied().collect());
        }
    }
    out
}

/// Orthonormal basis of the span of `vs`.
pub fn orthonormal_basis(vs: &[Vector], n: usize) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = super::dot(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let nv = super::norm2(v).max(1e-300);
        let nw = super::norm2(&w);
        if nw > 1e-9 * nv {
            basis.push(super::scale(&w, 1.0 / nw));
        }
        if basis.len() == n {
            break;
        }
    }
    basis
}

/// Points are affinely independent.
pub fn affine_independent(points: &[Vector]) -> bool {
    if points.len() <= 1 {
        return true;
    }
    let diffs: Vec<Vector> = points[1..].iter().map(|p| super::sub(p, &points[0])).collect();
    orthonormal_basis(&diffs, points[0].len()).len() == diffs.len()
}

fn unit_vec(n: usize, i: usize) -> Vector {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_a_row() {
        let ns = null_space(&[vec![1.0, 1.0]], 2);
        assert_eq!(ns.len(), 1);
        assert!((ns[0][0] + ns[0][1]).abs() < 1e-12);
    }

    #[test]
    fn least_squares_projection() {
        let c = least_squares(&[vec![1.0, 0.0]], &[3.0, 4.0]).unwrap();
        assert!((c[0] - 3.0).abs() < 1e-12);
        assert!(least_squares(&[vec![1.0, 0.0], vec![2.0, 0.0]], &[1.0, 1.0]).is_none());
    }

    #[test]
    fn singular_square_system() {
        assert!(solve_square(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 2.0]).is_none());
        let x = solve_square(&[vec![2.0, 0.0], vec![0.0, 4.0]], &[1.0, 2.0]).unwrap();
        assert_eq!(x, vec![0.5, 0.5]);
    }
}
