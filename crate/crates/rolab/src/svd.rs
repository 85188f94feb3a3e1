//! Singular value decomposition and the family of all decompositions of a
//! fixed matrix.
//!
//! The factorization is computed by one-sided Jacobi orthogonalization of
//! the columns (of the adjoint when the matrix is wide), which keeps high
//! relative accuracy for small singular values and realizes the defining
//! relation `u_i = A v_i / sigma_i` directly. Right singular vectors get a
//! canonical phase so repeated runs return identical factors. The residual
//! freedom of the decomposition (a unitary mix inside every repeated
//! singular-value block plus arbitrary rotations of the two null spaces)
//! is exposed through [`group_spectrum`] and [`reparametrize_svd`].

use crate::error::{Error, Result};
use crate::matrix::{Field, Matrix, DEFAULT_TOL};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use std::ops::Range;

/// Threshold below which a column entry is ignored when fixing phases.
const PHASE_EPS: f64 = 1e-12;

/// Full singular value decomposition `A = U diag(sigma) V*` with square
/// unitary `U`, `V` and the positive singular values sorted non-increasing.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    u: Matrix,
    sigma: Vec<f64>,
    v: Matrix,
}

impl SvdFactors {
    pub(crate) fn new(u: Matrix, sigma: Vec<f64>, v: Matrix) -> SvdFactors {
        debug_assert!(u.is_square() && v.is_square());
        debug_assert!(sigma.len() <= u.rows().min(v.rows()));
        SvdFactors { u, sigma, v }
    }

    /// Left unitary factor, `m x m`.
    pub fn u(&self) -> &Matrix {
        &self.u
    }

    /// Right unitary factor, `n x n`.
    pub fn v(&self) -> &Matrix {
        &self.v
    }

    /// Positive singular values, non-increasing.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    /// Shape `(m, n)` of the decomposed matrix.
    pub fn shape(&self) -> (usize, usize) {
        (self.u.rows(), self.v.rows())
    }

    /// The generalized diagonal `m x n` middle factor.
    pub fn sigma_matrix(&self) -> Matrix {
        let (m, n) = self.shape();
        let field = self.u.field().promote(self.v.field());
        Matrix::generalized_diag(m, n, &self.sigma, field)
    }

    /// `U diag(sigma) V*`.
    pub fn reconstruct(&self) -> Matrix {
        &self.u * self.sigma_matrix() * self.v.adjoint()
    }

    /// First `rank` columns of `U`.
    pub fn left_vectors(&self) -> Matrix {
        self.u.columns(0..self.rank())
    }

    /// First `rank` columns of `V`.
    pub fn right_vectors(&self) -> Matrix {
        self.v.columns(0..self.rank())
    }

    /// Columns of `V` spanning the null space of the matrix.
    pub fn null_right(&self) -> Matrix {
        self.v.columns(self.rank()..self.v.cols())
    }

    /// Columns of `U` spanning the null space of the adjoint.
    pub fn null_left(&self) -> Matrix {
        self.u.columns(self.rank()..self.u.cols())
    }

    /// Drop singular values at or below an absolute floor, reclassifying
    /// their columns as null directions. A matrix formed as a product
    /// carries rounding noise at the scale of its factors' norms; its own
    /// largest singular value cannot tell that noise from signal, so the
    /// caller supplies the floor.
    pub fn with_sigma_floor(mut self, floor: f64) -> SvdFactors {
        let keep = self.sigma.iter().take_while(|&&s| s > floor).count();
        self.sigma.truncate(keep);
        self
    }
}

impl Serialize for SvdFactors {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SvdFactors", 3)?;
        st.serialize_field("u", &self.u)?;
        st.serialize_field("sigma", &self.sigma)?;
        st.serialize_field("v", &self.v)?;
        st.end()
    }
}

/// Grouping of the singular values into blocks of (numerically) equal
/// values, plus the dimensions of the two null spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralBlocks {
    pub blocks: Vec<Range<usize>>,
    pub null_dim_right: usize,
    pub null_dim_left: usize,
}

/// Default relative gap below which adjacent singular values share a block.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;

pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}

/// SVD with the default rank tolerance `max(m, n) * eps` relative to the
/// largest singular value.
///
/// ```
/// use rolab::{compute_svd, Matrix};
///
/// let a = Matrix::real(&[&[3.0, 0.0], &[0.0, -4.0], &[0.0, 0.0]]);
/// let svd = compute_svd(&a);
/// assert_eq!(svd.rank(), 2);
/// assert!((svd.sigma()[0] - 4.0).abs() < 1e-13);
/// assert!((svd.sigma()[1] - 3.0).abs() < 1e-13);
/// assert!(svd.reconstruct().approx_eq(&a, 1e-12));
/// ```
pub fn compute_svd(a: &Matrix) -> SvdFactors {
    compute_svd_with(a, default_rank_tol(a.rows(), a.cols()))
}

/// SVD with an explicit relative rank tolerance.
///
/// The rank is the number of singular values above `rank_tol * sigma_max`;
/// a zero matrix yields rank 0 with identity `U`, `V`. Columns of `V` past
/// the rank span the null space, columns of `U` past the rank span the
/// null space of the adjoint.
pub fn compute_svd_with(a: &Matrix, rank_tol: f64) -> SvdFactors {
    assert!(!a.is_empty(), "SVD of an empty matrix");
    let (m, n) = a.shape();
    let field = a.field();

    let adjoint_path = m < n;
    let g = if adjoint_path { a.adjoint() } else { a.clone() };

    let (w_cols, acc) = one_sided_jacobi(&g);
    let g_cols = g.cols();

    let norms: Vec<f64> = w_cols.iter().map(|c| column_norm(c)).collect();
    let mut order: Vec<usize> = (0..g_cols).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap().then(i.cmp(&j)));
    let sigma_max = norms[order[0]];

    if sigma_max == 0.0 {
        return SvdFactors::new(
            Matrix::identity(m, field),
            Vec::new(),
            Matrix::identity(n, field),
        );
    }

    let rank = order
        .iter()
        .take_while(|&&i| norms[i] > rank_tol * sigma_max)
        .count();
    let sigma: Vec<f64> = order.iter().take(rank).map(|&i| norms[i]).collect();

    // Accumulated rotations give an exactly unitary factor on the tall side;
    // the normalized nonzero columns of W give the other side's singular
    // vectors, completed to a unitary basis.
    let acc_sorted = permute_columns(&acc, &order, g_cols);
    let w_unit = {
        let cols: Vec<Matrix> = order[..rank]
            .iter()
            .map(|&i| column_matrix(&w_cols[i], field).scale(1.0 / norms[i]))
            .collect();
        let refs: Vec<&Matrix> = cols.iter().collect();
        Matrix::hstack(&refs)
    };

    let (mut u, mut v);
    if adjoint_path {
        // g = A*, so acc spans the coordinates of A's rows: U = acc, V from W.
        u = acc_sorted;
        let completion = complete_orthonormal(&w_unit).expect("jacobi output orthonormal");
        v = Matrix::hstack(&[&w_unit, &completion]);
    } else {
        v = acc_sorted;
        let completion = complete_orthonormal(&w_unit).expect("jacobi output orthonormal");
        u = Matrix::hstack(&[&w_unit, &completion]);
    }

    canonicalize_phases(&mut u, &mut v, rank);
    SvdFactors::new(u, sigma, v)
}

fn column_norm(c: &[Complex64]) -> f64 {
    c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn column_matrix(c: &[Complex64], field: Field) -> Matrix {
    Matrix::from_fn(c.len(), 1, field, |i, _| c[i])
}

fn permute_columns(m: &Matrix, order: &[usize], take: usize) -> Matrix {
    let cols: Vec<Matrix> = order[..take].iter().map(|&j| m.column(j)).collect();
    let refs: Vec<&Matrix> = cols.iter().collect();
    Matrix::hstack(&refs)
}

/// Orthogonalize the columns of `g` by two-column rotations from the right.
/// Returns the rotated columns of `g` and the accumulated unitary factor.
fn one_sided_jacobi(g: &Matrix) -> (Vec<Vec<Complex64>>, Matrix) {
    let (m, n) = g.shape();
    let mut w: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..m).map(|i| g.get(i, j)).collect())
        .collect();
    let mut acc: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();

    let conv_tol = f64::EPSILON * (m as f64).sqrt().max(1.0);
    // Columns of a rank-deficient matrix get ground down sweep after sweep;
    // once below this floor their direction carries no information and the
    // inner products turn subnormal, where phase extraction breaks down.
    // Freezing them keeps the accumulated factor unitary and lets the loop
    // terminate. The floor is far below any representable singular value
    // gap, so relative accuracy of genuine columns is untouched.
    let freeze = f64::EPSILON * f64::EPSILON * g.fro_norm();
    let max_sweeps = 100;

    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (app, aqq, apq) = {
                    let (cp, cq) = (&w[p], &w[q]);
                    let mut app = 0.0;
                    let mut aqq = 0.0;
                    let mut apq = Complex64::new(0.0, 0.0);
                    for i in 0..m {
                        app += cp[i].norm_sqr();
                        aqq += cq[i].norm_sqr();
                        apq += cp[i].conj() * cq[i];
                    }
                    (app, aqq, apq)
                };
                let (norm_p, norm_q) = (app.sqrt(), aqq.sqrt());
                if norm_p <= freeze || norm_q <= freeze {
                    continue;
                }
                let abs_g = apq.norm();
                if abs_g <= conv_tol * norm_p * norm_q {
                    continue;
                }
                rotated = true;
                let phase = apq / abs_g;
                let tau = (aqq - app) / (2.0 * abs_g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s, phase);
                rotate_pair(&mut acc, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let field = g.field();
    let acc_mat = Matrix::from_fn(n, n, field, |i, j| acc[j][i]);
    (w, acc_mat)
}

/// Apply the unitary `[[c, s*phase], [-s*conj(phase), c]]` to columns `p`, `q`.
fn rotate_pair(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    let phase_conj = phase.conj();
    for i in 0..cp.len() {
        let xp = cp[i];
        let xq = cq[i];
        cp[i] = c * xp - s * phase_conj * xq;
        cq[i] = s * phase * xp + c * xq;
    }
}

/// Make the first entry of each right singular vector with modulus above
/// 1e-12 real and positive; the paired left vector absorbs the same phase.
fn canonicalize_phases(u: &mut Matrix, v: &mut Matrix, rank: usize) {
    for j in 0..v.cols() {
        if let Some(alpha) = leading_phase(v, j) {
            v.scale_column(j, alpha.conj());
            if j < rank {
                u.scale_column(j, alpha.conj());
            }
        }
    }
    for j in rank..u.cols() {
        if let Some(alpha) = leading_phase(u, j) {
            u.scale_column(j, alpha.conj());
        }
    }
}

fn leading_phase(m: &Matrix, j: usize) -> Option<Complex64> {
    for i in 0..m.rows() {
        let v = m.get(i, j);
        if v.norm() > PHASE_EPS {
            return Some(v / v.norm());
        }
    }
    None
}

/// Group the singular values of `svd` into blocks of equal values with the
/// default gap tolerance.
pub fn group_spectrum(svd: &SvdFactors) -> SpectralBlocks {
    group_spectrum_with(svd, DEFAULT_GAP_TOL)
}

/// Consecutive singular values share a block iff their gap is at most
/// `gap_tol * sigma_1`.
pub fn group_spectrum_with(svd: &SvdFactors, gap_tol: f64) -> SpectralBlocks {
    let sigma = svd.sigma();
    let (m, n) = svd.shape();
    let r = sigma.len();
    let mut blocks = Vec::new();
    if r > 0 {
        let scale = sigma[0];
        let mut start = 0;
        for i in 1..r {
            if sigma[i - 1] - sigma[i] > gap_tol * scale {
                blocks.push(start..i);
                start = i;
            }
        }
        blocks.push(start..r);
    }
    SpectralBlocks {
        blocks,
        null_dim_right: n - r,
        null_dim_left: m - r,
    }
}

/// Produce another valid decomposition of the same matrix by rotating each
/// repeated-singular-value block of `V` with the matching entry of `q_list`
/// and the two null spaces with `q_null_right` / `q_null_left`. The first
/// `rank` columns of the new `U` are recomputed as `A v_i / sigma_i`; the
/// singular values are unchanged.
pub fn reparametrize_svd(
    svd: &SvdFactors,
    blocks: &SpectralBlocks,
    q_list: &[Matrix],
    q_null_right: &Matrix,
    q_null_left: &Matrix,
) -> Result<SvdFactors> {
    if q_list.len() != blocks.blocks.len() {
        return Err(Error::BlockShapeMismatch(format!(
            "{} block rotations for {} blocks",
            q_list.len(),
            blocks.blocks.len()
        )));
    }
    for (q, block) in q_list.iter().zip(&blocks.blocks) {
        if q.shape() != (block.len(), block.len()) {
            return Err(Error::BlockShapeMismatch(format!(
                "rotation {:?} for block of size {}",
                q.shape(),
                block.len()
            )));
        }
        check_unitary(q)?;
    }
    for (q, dim, name) in [
        (q_null_right, blocks.null_dim_right, "right"),
        (q_null_left, blocks.null_dim_left, "left"),
    ] {
        if q.shape() != (dim, dim) {
            return Err(Error::BlockShapeMismatch(format!(
                "{name} null rotation {:?} for null dimension {dim}",
                q.shape()
            )));
        }
        if dim > 0 {
            check_unitary(q)?;
        }
    }

    let r = svd.rank();
    let field = q_list
        .iter()
        .chain([q_null_right, q_null_left])
        .fold(svd.v().field(), |acc, q| acc.promote(q.field()));

    // V' = V * diag(Q_1, ..., Q_p, Q_null_right)
    let n = svd.v().rows();
    let mut big = Matrix::zeros(n, n, field);
    for (q, block) in q_list.iter().zip(&blocks.blocks) {
        embed(&mut big, q, block.start);
    }
    embed(&mut big, q_null_right, r);
    let v_new = svd.v() * big;

    let a = svd.reconstruct();
    let mut u_parts: Vec<Matrix> = Vec::new();
    if r > 0 {
        let cols: Vec<Matrix> = (0..r)
            .map(|i| (&a * v_new.column(i)).scale(1.0 / svd.sigma()[i]))
            .collect();
        let refs: Vec<&Matrix> = cols.iter().collect();
        u_parts.push(Matrix::hstack(&refs));
    }
    let m = svd.u().rows();
    if m > r {
        u_parts.push(svd.u().columns(r..m) * q_null_left);
    }
    let refs: Vec<&Matrix> = u_parts.iter().collect();
    let u_new = Matrix::hstack(&refs);

    Ok(SvdFactors::new(
        promote_to(u_new, field),
        svd.sigma().to_vec(),
        promote_to(v_new, field),
    ))
}

fn promote_to(m: Matrix, field: Field) -> Matrix {
    if field == Field::Complex {
        m.as_complex()
    } else {
        m
    }
}

fn embed(target: &mut Matrix, block: &Matrix, offset: usize) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            target.set(offset + i, offset + j, block.get(i, j));
        }
    }
}

fn check_unitary(q: &Matrix) -> Result<()> {
    let gram = q.adjoint() * q;
    let eye = Matrix::identity(q.cols(), q.field());
    let dev = (&gram - &eye).fro_norm();
    if !gram.approx_eq(&eye, DEFAULT_TOL) {
        return Err(Error::NotUnitary(dev));
    }
    Ok(())
}

/// Full Householder QR: `a = Q R` with square unitary `Q`.
pub(crate) fn householder_qr(a: &Matrix) -> (Matrix, Matrix) {
    let (m, n) = a.shape();
    let field = a.field();
    let mut r = a.clone();
    // reflectors stored as (start row, normalized direction, beta)
    let mut reflectors: Vec<(usize, Vec<Complex64>, f64)> = Vec::new();

    for k in 0..m.min(n) {
        let mut x: Vec<Complex64> = (k..m).map(|i| r.get(i, k)).collect();
        let normx = column_norm(&x);
        if normx <= f64::EPSILON * a.fro_norm().max(1.0) * 1e-2 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * normx;
        x[0] -= alpha;
        let vnorm_sqr: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        if vnorm_sqr == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sqr;
        // apply H = I - beta v v* to the trailing columns of R
        for j in k..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (ii, vi) in x.iter().enumerate() {
                dot += vi.conj() * r.get(k + ii, j);
            }
            dot *= beta;
            for (ii, vi) in x.iter().enumerate() {
                let cur = r.get(k + ii, j);
                r.set(k + ii, j, cur - dot * vi);
            }
        }
        reflectors.push((k, x, beta));
    }

    // Q = H_1 ... H_p applied to the identity, built by applying the
    // reflectors in reverse to I.
    let mut q = Matrix::identity(m, field);
    for (k, v, beta) in reflectors.iter().rev() {
        for j in 0..m {
            let mut dot = Complex64::new(0.0, 0.0);
            for (ii, vi) in v.iter().enumerate() {
                dot += vi.conj() * q.get(k + ii, j);
            }
            dot *= *beta;
            for (ii, vi) in v.iter().enumerate() {
                let cur = q.get(k + ii, j);
                q.set(k + ii, j, cur - dot * vi);
            }
        }
    }
    (q, r)
}

/// Complete a set of orthonormal columns to a unitary basis: returns `N`
/// with `[M N]` unitary and `M* N = 0`. Fails with `NotOrthonormal` when
/// the input columns are not orthonormal.
pub fn complete_orthonormal(m: &Matrix) -> Result<Matrix> {
    let (n, k) = m.shape();
    if k == 0 {
        return Ok(Matrix::identity(n, m.field()));
    }
    if k > n {
        return Err(Error::NotOrthonormal(f64::INFINITY));
    }
    let gram = m.adjoint() * m;
    let eye = Matrix::identity(k, m.field());
    if !gram.approx_eq(&eye, DEFAULT_TOL) {
        return Err(Error::NotOrthonormal((&gram - &eye).fro_norm()));
    }
    let (q, _) = householder_qr(m);
    Ok(q.columns(k..n))
}

fn gaussian(rows: usize, cols: usize, field: Field, rng: &mut impl Rng) -> Matrix {
    Matrix::from_fn(rows, cols, field, |_, _| match field {
        Field::Real => Complex64::new(rng.sample(StandardNormal), 0.0),
        Field::Complex => Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
    })
}

/// Haar-distributed unitary (orthogonal over the reals): QR of an i.i.d.
/// Gaussian matrix with the triangular factor's diagonal phases absorbed
/// into `Q`. Deterministic for a fixed generator state.
pub fn random_unitary(n: usize, field: Field, rng: &mut impl Rng) -> Matrix {
    if n == 0 {
        return Matrix::zeros(0, 0, field);
    }
    let g = gaussian(n, n, field, rng);
    let (mut q, r) = householder_qr(&g);
    for j in 0..n {
        let d = r.get(j, j);
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.scale_column(j, phase);
    }
    q
}

/// `n x k` matrix with Haar-distributed orthonormal columns, `k <= n`.
pub fn random_orthonormal(n: usize, k: usize, field: Field, rng: &mut impl Rng) -> Matrix {
    assert!(k <= n, "cannot fit {k} orthonormal columns in dimension {n}");
    if k == 0 {
        return Matrix::zeros(n, 0, field);
    }
    let g = gaussian(n, k, field, rng);
    let (mut q, r) = householder_qr(&g);
    for j in 0..k {
        let d = r.get(j, j);
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.scale_column(j, phase);
    }
    q.columns(0..k)
}

/// Random `m x n` matrix of exact rank `r` with integer singular values
/// drawn from `1..=r`, built from Haar factors.
pub fn random_matrix_with_rank(
    m: usize,
    n: usize,
    r: usize,
    field: Field,
    rng: &mut impl Rng,
) -> Matrix {
    assert!(r <= m.min(n), "rank exceeds dimensions");
    let u = random_unitary(m, field, rng);
    let v = random_unitary(n, field, rng);
    let sigma: Vec<f64> = (0..r).map(|_| rng.gen_range(1..=r.max(1)) as f64).collect();
    u * Matrix::generalized_diag(m, n, &sigma, field) * v.adjoint()
}
