//! Moore-Penrose pseudoinverse and Penrose-condition classification.
//!
//! [`pinv`] goes through the SVD; [`pinv_oracle`] computes the same matrix
//! through a rank factorization obtained from column-pivoted elimination,
//! deliberately sharing no code with the Jacobi path so the two can check
//! each other.

use crate::error::{Error, Result};
use crate::matrix::{relative_residual, Field, Matrix};
use crate::svd::{compute_svd_with, default_rank_tol};
use num_complex::Complex64;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use std::collections::BTreeMap;

/// Default relative tolerance for deciding whether a Penrose condition holds.
pub const DEFAULT_CLASS_TOL: f64 = 1e-8;

/// Which of the four Penrose conditions a candidate `X` satisfies for a
/// matrix `A`, together with the raw residuals so callers can re-threshold:
///
/// 1. `A X A = A`
/// 2. `X A X = X`
/// 3. `(A X)* = A X`
/// 4. `(X A)* = X A`
#[derive(Clone, Debug)]
pub struct InverseClass {
    residuals: [f64; 4],
    tol: f64,
}

impl InverseClass {
    /// Residual of condition `i` (1-based), relative to `1 + norm` of the target.
    pub fn residual(&self, i: usize) -> f64 {
        assert!((1..=4).contains(&i), "Penrose conditions are numbered 1..=4");
        self.residuals[i - 1]
    }

    pub fn residuals(&self) -> [f64; 4] {
        self.residuals
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Does condition `i` (1-based) hold at the classification tolerance?
    pub fn has(&self, i: usize) -> bool {
        self.residual(i) <= self.tol
    }

    /// The sorted set of satisfied condition indices.
    pub fn satisfied(&self) -> Vec<usize> {
        (1..=4).filter(|&i| self.has(i)).collect()
    }

    /// True iff the satisfied set is exactly `set`.
    pub fn is_exactly(&self, set: &[usize]) -> bool {
        self.satisfied() == set
    }

    /// True iff every index in `set` is satisfied.
    pub fn contains_all(&self, set: &[usize]) -> bool {
        set.iter().all(|&i| self.has(i))
    }
}

impl Serialize for InverseClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("InverseClass", 3)?;
        st.serialize_field("satisfied", &self.satisfied())?;
        let residuals: BTreeMap<String, f64> = (1..=4)
            .map(|i| (i.to_string(), self.residual(i)))
            .collect();
        st.serialize_field("residuals", &residuals)?;
        st.serialize_field("tol", &self.tol)?;
        st.end()
    }
}

/// Pseudoinverse via the SVD with the default rank tolerance.
///
/// ```
/// use rolab::{penrose_conditions, pinv, Matrix};
///
/// let a = Matrix::real(&[&[1.0, 1.0]]);
/// let x = pinv(&a);
/// assert!(x.approx_eq(&Matrix::real(&[&[0.5], &[0.5]]), 1e-13));
/// let class = penrose_conditions(&a, &x, 1e-10).unwrap();
/// assert!(class.is_exactly(&[1, 2, 3, 4]));
/// ```
pub fn pinv(a: &Matrix) -> Matrix {
    pinv_with(a, default_rank_tol(a.rows(), a.cols()))
}

/// Pseudoinverse via the SVD: `X = V diag(1/sigma) U*` on the rank part.
pub fn pinv_with(a: &Matrix, rank_tol: f64) -> Matrix {
    let svd = compute_svd_with(a, rank_tol);
    let r = svd.rank();
    if r == 0 {
        return Matrix::zeros(a.cols(), a.rows(), a.field());
    }
    let inv_sigma: Vec<f64> = svd.sigma().iter().map(|&s| 1.0 / s).collect();
    svd.right_vectors()
        * Matrix::generalized_diag(r, r, &inv_sigma, a.field())
        * svd.left_vectors().adjoint()
}

/// Pseudoinverse through a rank factorization `A = S T` with `S` of full
/// column rank and `T` of full row rank, obtained from column-pivoted
/// elimination: `pinv(A) = T* (T T*)^-1 (S* S)^-1 S*`. Independent of the
/// SVD path.
pub fn pinv_oracle(a: &Matrix) -> Matrix {
    let (m, n) = a.shape();
    let max_col_norm = (0..n)
        .map(|j| a.column(j).fro_norm())
        .fold(0.0, f64::max);
    let threshold = m.max(n) as f64 * f64::EPSILON * max_col_norm;
    if max_col_norm == 0.0 {
        return Matrix::zeros(n, m, a.field());
    }

    // Reduced row echelon form, choosing at each step the remaining column
    // with the largest trailing norm and the largest entry inside it.
    let mut w = a.as_complex();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0;
    while row < m {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if pivot_cols.contains(&j) {
                continue;
            }
            let norm: f64 = (row..m)
                .map(|i| w.get(i, j).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if best.is_none_or(|(_, b)| norm > b) {
                best = Some((j, norm));
            }
        }
        let Some((col, norm)) = best else { break };
        if norm <= threshold {
            break;
        }
        let pivot_row = (row..m)
            .max_by(|&i, &k| {
                w.get(i, col)
                    .norm()
                    .partial_cmp(&w.get(k, col).norm())
                    .unwrap()
            })
            .unwrap();
        if pivot_row != row {
            for j in 0..n {
                let tmp = w.get(row, j);
                w.set(row, j, w.get(pivot_row, j));
                w.set(pivot_row, j, tmp);
            }
        }
        let pivot = w.get(row, col);
        for j in 0..n {
            let v = w.get(row, j) / pivot;
            w.set(row, j, v);
        }
        for i in 0..m {
            if i == row {
                continue;
            }
            let factor = w.get(i, col);
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let v = w.get(i, j) - factor * w.get(row, j);
                w.set(i, j, v);
            }
        }
        pivot_cols.push(col);
        row += 1;
    }

    let r = pivot_cols.len();
    if r == 0 {
        return Matrix::zeros(n, m, a.field());
    }
    let s_cols: Vec<Matrix> = pivot_cols.iter().map(|&j| a.column(j)).collect();
    let refs: Vec<&Matrix> = s_cols.iter().collect();
    let s = Matrix::hstack(&refs);
    let t = Matrix::from_fn(r, n, w.field(), |i, j| w.get(i, j));

    // pinv(S) = (S*S)^-1 S*, pinv(T) = T* (T T*)^-1, both r x r Hermitian
    // positive definite systems.
    let pinv_s = solve_hpd(&(s.adjoint() * &s), &s.adjoint());
    let pinv_t = solve_hpd(&(&t * t.adjoint()), &t).adjoint();
    let x = pinv_t * pinv_s;
    if a.field() == Field::Real {
        // elimination keeps real data real; restore the tag
        Matrix::from_fn(n, m, Field::Real, |i, j| Complex64::new(x.get(i, j).re, 0.0))
    } else {
        x
    }
}

/// Solve `H X = B` for Hermitian positive definite `H` by Cholesky.
#[allow(clippy::needless_range_loop)]
fn solve_hpd(h: &Matrix, b: &Matrix) -> Matrix {
    let r = h.rows();
    assert!(h.is_square() && b.rows() == r);
    let mut l = vec![vec![Complex64::new(0.0, 0.0); r]; r];
    for j in 0..r {
        let mut d = h.get(j, j).re;
        for k in 0..j {
            d -= l[j][k].norm_sqr();
        }
        assert!(d > 0.0, "matrix is not positive definite");
        l[j][j] = Complex64::new(d.sqrt(), 0.0);
        for i in j + 1..r {
            let mut v = h.get(i, j);
            for k in 0..j {
                v -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = v / l[j][j];
        }
    }
    let mut x = b.as_complex();
    // forward substitution L Y = B
    for j in 0..x.cols() {
        for i in 0..r {
            let mut v = x.get(i, j);
            for k in 0..i {
                v -= l[i][k] * x.get(k, j);
            }
            x.set(i, j, v / l[i][i]);
        }
        // back substitution L* X = Y
        for i in (0..r).rev() {
            let mut v = x.get(i, j);
            for k in i + 1..r {
                v -= l[k][i].conj() * x.get(k, j);
            }
            x.set(i, j, v / l[i][i]);
        }
    }
    x
}

/// Evaluate the four Penrose conditions of candidate `x` against `a`.
/// Residuals are relative to `1 + norm` of the respective target.
pub fn penrose_conditions(a: &Matrix, x: &Matrix, tol: f64) -> Result<InverseClass> {
    if x.rows() != a.cols() || x.cols() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "candidate inverse is {}x{}, expected {}x{}",
            x.rows(),
            x.cols(),
            a.cols(),
            a.rows()
        )));
    }
    let ax = a * x;
    let xa = x * a;
    let r1 = (&ax * a - a).fro_norm() / (1.0 + a.fro_norm());
    let r2 = (&xa * x - x).fro_norm() / (1.0 + x.fro_norm());
    let r3 = (ax.adjoint() - &ax).fro_norm() / (1.0 + ax.fro_norm());
    let r4 = (xa.adjoint() - &xa).fro_norm() / (1.0 + xa.fro_norm());
    Ok(InverseClass {
        residuals: [r1, r2, r3, r4],
        tol,
    })
}

/// True iff `p` is idempotent and Hermitian at the given tolerance.
pub fn is_orthogonal_projection(p: &Matrix, tol: f64) -> Result<bool> {
    if !p.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "projection candidate is {}x{}",
            p.rows(),
            p.cols()
        )));
    }
    Ok(orthogonal_projection_residual(p) <= tol)
}

/// Max of the idempotency and Hermitian-ness relative residuals.
pub fn orthogonal_projection_residual(p: &Matrix) -> f64 {
    assert!(p.is_square());
    let idem = relative_residual(&(p * p), p);
    let herm = relative_residual(&p.adjoint(), p);
    idem.max(herm)
}
