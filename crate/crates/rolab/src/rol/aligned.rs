//! Aligned decompositions for a pair satisfying the full law.
//!
//! When `pinv(AB) = pinv(B) pinv(A)`, both Gram operators restrict cleanly:
//! `A*A` maps `range(B)` and `null(B*)` into themselves, and `BB*` does the
//! same for `range(A*)` and `null(A)`. Diagonalizing the restrictions and
//! lifting the eigenvectors back yields decompositions of `A` and `B` in
//! which every leading singular vector of one factor lies inside the range
//! or the null space of the other.

use super::{check_conformable, formed_pinv, rol_residual, Tolerances};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pinv::pinv;
use crate::subspace::{null_basis, range_basis, Subspace};
use crate::svd::{complete_orthonormal, compute_svd, SvdFactors};

/// Relative tie tolerance for ordering lifted eigenvectors with equal
/// eigenvalues; tight enough to keep the singular values non-increasing.
const TIE_TOL: f64 = 1e-12;

/// Decompositions of `A` and `B` realized from the restricted Gram
/// operators, plus the index sets of the leading singular vectors that lie
/// in the partner's range (rather than its null space).
#[derive(Clone, Debug)]
pub struct AlignedSvds {
    pub a: SvdFactors,
    pub b: SvdFactors,
    /// Indices `i < rank(A)` with `v_{A,i}` outside `null(B*)`.
    pub j_a: Vec<usize>,
    /// Indices `i < rank(B)` with `u_{B,i}` outside `null(A)`.
    pub j_b: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Origin {
    PartnerRange,
    PartnerNull,
}

/// Eigenpairs of `gram` restricted to the subspace, lifted back to the
/// ambient space. The restriction must be invariant for this to be exact;
/// eigenvalues come back sorted non-increasing, zeros included.
fn restricted_eigenpairs(gram: &Matrix, space: &Subspace) -> Vec<(f64, Matrix)> {
    let d = space.dim();
    if d == 0 {
        return Vec::new();
    }
    let basis = space.basis();
    let small = basis.adjoint() * gram * basis;
    let svd = compute_svd(&small);
    let mut lambdas = svd.sigma().to_vec();
    lambdas.resize(d, 0.0);
    (0..d)
        .map(|i| (lambdas[i], basis * svd.v().column(i)))
        .collect()
}

/// Merge two lifted eigenpair lists into a full factor basis: sort by
/// eigenvalue descending, and inside ties put the partner-range vectors
/// first.
fn merged_basis(
    from_range: Vec<(f64, Matrix)>,
    from_null: Vec<(f64, Matrix)>,
) -> Vec<(f64, Matrix, Origin)> {
    let mut all: Vec<(f64, Matrix, Origin)> = from_range
        .into_iter()
        .map(|(l, v)| (l, v, Origin::PartnerRange))
        .chain(
            from_null
                .into_iter()
                .map(|(l, v)| (l, v, Origin::PartnerNull)),
        )
        .collect();
    all.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let scale = all.first().map_or(0.0, |e| e.0).max(1.0);
    // stable partition of each tie run: range vectors before null vectors
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j + 1 < all.len() && all[j].0 - all[j + 1].0 <= TIE_TOL * scale {
            j += 1;
        }
        if j > i {
            all[i..=j].sort_by_key(|e| match e.2 {
                Origin::PartnerRange => 0,
                Origin::PartnerNull => 1,
            });
        }
        i = j + 1;
    }
    all
}

/// Assemble one factor's bases from the merged eigenbasis of its Gram
/// operator. `source` maps a unit eigenvector with eigenvalue `lambda > 0`
/// to the paired singular vector: `source(v) / sqrt(lambda)`. Returns
/// `(eigen side, paired side, sigma, partner-range indices)`.
fn factors_from_eigenbasis(
    merged: &[(f64, Matrix, Origin)],
    rank: usize,
    paired_dim: usize,
    source: impl Fn(&Matrix) -> Matrix,
) -> (Matrix, Matrix, Vec<f64>, Vec<usize>) {
    let sigma: Vec<f64> = merged[..rank].iter().map(|e| e.0.sqrt()).collect();
    let cols: Vec<&Matrix> = merged.iter().map(|e| &e.1).collect();
    let eigen_side = Matrix::hstack(&cols);

    let mut paired_cols: Vec<Matrix> = Vec::with_capacity(rank);
    for (i, entry) in merged[..rank].iter().enumerate() {
        paired_cols.push(source(&entry.1).scale(1.0 / sigma[i]));
    }
    let paired = if rank > 0 {
        let refs: Vec<&Matrix> = paired_cols.iter().collect();
        let lead = Matrix::hstack(&refs);
        let completion = complete_orthonormal(&lead).expect("paired vectors orthonormal");
        Matrix::hstack(&[&lead, &completion])
    } else {
        Matrix::identity(paired_dim, eigen_side.field())
    };

    let j: Vec<usize> = (0..rank)
        .filter(|&i| merged[i].2 == Origin::PartnerRange)
        .collect();
    (eigen_side, paired, sigma, j)
}

/// Compute aligned decompositions of `A` and `B`. Fails with
/// `RolNotSatisfied` when the pair does not satisfy the full law.
pub fn aligned_svds(a: &Matrix, b: &Matrix, tols: &Tolerances) -> Result<AlignedSvds> {
    check_conformable(a, b)?;
    let ab = a * b;
    let residual = rol_residual(
        &formed_pinv(&ab, a.fro_norm() * b.fro_norm()),
        &(pinv(b) * pinv(a)),
    );
    if residual > tols.residual {
        return Err(Error::RolNotSatisfied(residual));
    }

    let r_a = compute_svd(a).rank();
    let r_b = compute_svd(b).rank();

    // A: eigenbasis of A*A split along range(B) ⊕ null(B*); the eigen side
    // is V_A, the paired side is U_A.
    let a_star_a = a.adjoint() * a;
    let merged_a = merged_basis(
        restricted_eigenpairs(&a_star_a, &range_basis(b)),
        restricted_eigenpairs(&a_star_a, &null_basis(&b.adjoint())),
    );
    let (v_a, u_a, sigma_a, j_a) = factors_from_eigenbasis(&merged_a, r_a, a.rows(), |v| a * v);

    // B: eigenbasis of BB* split along range(A*) ⊕ null(A); the eigen side
    // is U_B, the paired side is V_B.
    let b_b_star = b * b.adjoint();
    let merged_b = merged_basis(
        restricted_eigenpairs(&b_b_star, &range_basis(&a.adjoint())),
        restricted_eigenpairs(&b_b_star, &null_basis(a)),
    );
    let (u_b, v_b, sigma_b, j_b) =
        factors_from_eigenbasis(&merged_b, r_b, b.cols(), |u| b.adjoint() * u);

    Ok(AlignedSvds {
        a: SvdFactors::new(u_a, sigma_a, v_a),
        b: SvdFactors::new(u_b, sigma_b, v_b),
        j_a,
        j_b,
    })
}
