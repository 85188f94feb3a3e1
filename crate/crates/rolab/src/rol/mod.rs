//! The reverse-order-law toolkit.
//!
//! Everything here revolves around one question about a conformable pair
//! `(A, B)`: which Penrose conditions does `pinv(B) pinv(A)` satisfy for
//! the product `AB`? The module provides
//!
//! - [`classify_pair`]: the full report with every equivalent condition
//!   for the law evaluated independently (the predicates must agree; the
//!   report records whether they do);
//! - [`twelve_way_suite`] / [`classify_123_124`]: the equivalence batteries
//!   for the `{1,2}` and `{1,2,3}` / `{1,2,4}` weakenings;
//! - [`construct_partner`] and friends: for a fixed `A`, build `B` of
//!   chosen rank and size so a chosen class holds, out of the singular
//!   vectors of `A`;
//! - [`aligned_svds`]: for a pair satisfying the law, decompositions in
//!   which the singular vectors of each factor split between the range
//!   and null space of the other;
//! - [`derived_rols_check`]: the battery of laws implied for derived
//!   products such as `(AB)B*` or `A*(AB)`.

mod aligned;
mod construct;
mod report;
mod suites;

pub use aligned::{aligned_svds, AlignedSvds};
pub use construct::{
    construct_pair_12, construct_pair_123, construct_pair_124, construct_partner,
    construct_partner_left, ConstructionPlan, SigmaSpec,
};
pub use report::{AngleClass, Check, CommuteChecks, GrevilleChecks, RolReport};
pub use suites::{block_form_check, classify_123_124, derived_rols_check, twelve_way_suite,
    Cls123124, TwelveWay};

use crate::error::{Error, Result};
use crate::matrix::{relative_residual, Matrix};
use crate::pinv::{orthogonal_projection_residual, penrose_conditions, pinv};
use crate::subspace::{
    angles_all_0_or_right, containment_residual, intersect, principal_angles, range_basis,
    Subspace, DEFAULT_ANGLE_TOL,
};
use crate::svd::{compute_svd, default_rank_tol, SvdFactors};

/// Residual and angle tolerances used by the classifiers.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Relative residual below which an identity is accepted.
    pub residual: f64,
    /// Radians within which an angle counts as 0 or as a right angle.
    pub angle: f64,
}

impl Default for Tolerances {
    fn default() -> Tolerances {
        Tolerances {
            residual: 1e-8,
            angle: DEFAULT_ANGLE_TOL,
        }
    }
}

impl Tolerances {
    pub fn with_residual(residual: f64) -> Tolerances {
        Tolerances {
            residual,
            ..Tolerances::default()
        }
    }
}

pub(crate) fn check_conformable(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot form the product of {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// Residual of the law itself: `||pinv(AB) - pinv(B) pinv(A)||_F` relative
/// to `||pinv(AB)||_F` (raw when the product pseudoinverse is zero).
pub(crate) fn rol_residual(pinv_ab: &Matrix, candidate: &Matrix) -> f64 {
    let diff = (pinv_ab - candidate).fro_norm();
    let scale = pinv_ab.fro_norm();
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Decomposition of a matrix formed as a product, with the rank decided
/// against the product's formation noise: singular values at or below
/// `max(dims) * eps * formation_scale` are zero. `formation_scale` is the
/// product of the factors' Frobenius norms.
pub(crate) fn formed_svd(product: &Matrix, formation_scale: f64) -> SvdFactors {
    let floor = default_rank_tol(product.rows(), product.cols()) * formation_scale;
    compute_svd(product).with_sigma_floor(floor)
}

pub(crate) fn formed_rank(product: &Matrix, formation_scale: f64) -> usize {
    formed_svd(product, formation_scale).rank()
}

/// Range basis with the formation-aware rank decision.
pub(crate) fn formed_range(product: &Matrix, formation_scale: f64) -> Subspace {
    Subspace::from_basis_unchecked(formed_svd(product, formation_scale).left_vectors())
}

/// Pseudoinverse with the formation-aware rank decision.
pub(crate) fn formed_pinv(product: &Matrix, formation_scale: f64) -> Matrix {
    let svd = formed_svd(product, formation_scale);
    let r = svd.rank();
    if r == 0 {
        return Matrix::zeros(product.cols(), product.rows(), product.field());
    }
    let inv_sigma: Vec<f64> = svd.sigma().iter().map(|&s| 1.0 / s).collect();
    svd.right_vectors()
        * Matrix::generalized_diag(r, r, &inv_sigma, product.field())
        * svd.left_vectors().adjoint()
}

/// Greville's three conditions for the full law: the two range inclusions
/// `range(A*AB) <= range(B)`, `range(BB*A*) <= range(A*)`, and the identity
/// `pinv(A) A B B* A* A B pinv(B) = B B* A* A`. Each is evaluated
/// independently; they hold or fail together with the law.
pub fn greville_check(a: &Matrix, b: &Matrix, tol: f64) -> Result<(bool, bool, bool)> {
    let checks = greville_residuals(a, b)?;
    Ok((
        checks.0 <= tol,
        checks.1 <= tol,
        checks.2 <= tol,
    ))
}

pub(crate) fn greville_residuals(a: &Matrix, b: &Matrix) -> Result<(f64, f64, f64)> {
    check_conformable(a, b)?;
    let a_star = a.adjoint();
    let b_star = b.adjoint();
    let (na, nb) = (a.fro_norm(), b.fro_norm());

    let r1 = containment_residual(
        &range_basis(b),
        &formed_range(&(&a_star * a * b), na * na * nb),
    );
    let r2 = containment_residual(
        &range_basis(&a_star),
        &formed_range(&(b * &b_star * &a_star), nb * nb * na),
    );

    let pa = pinv(a);
    let pb = pinv(b);
    let lhs = &pa * a * b * &b_star * &a_star * a * b * &pb;
    let rhs = b * &b_star * &a_star * a;
    let r3 = relative_residual(&lhs, &rhs);
    Ok((r1, r2, r3))
}

/// Classify a conformable pair against the full reverse-order law.
///
/// Every predicate known to be equivalent to the law is evaluated on its
/// own numerical route; `consistent` records whether all of them agreed.
pub fn classify_pair(a: &Matrix, b: &Matrix, tols: &Tolerances) -> Result<RolReport> {
    check_conformable(a, b)?;
    let tol = tols.residual;

    let (na, nb) = (a.fro_norm(), b.fro_norm());
    let ab = a * b;
    let pinv_ab = formed_pinv(&ab, na * nb);
    let pa = pinv(a);
    let pb = pinv(b);
    let candidate = &pb * &pa;

    let penrose = penrose_conditions(&ab, &candidate, tol)?;
    let residual = rol_residual(&pinv_ab, &candidate);
    let full_rol = residual <= tol;

    let (g1, g2, g3) = greville_residuals(a, b)?;
    let greville = GrevilleChecks {
        range_a_star_a_b_in_b: Check::at(g1, tol),
        range_b_b_star_a_star_in_a_star: Check::at(g2, tol),
        identity: Check::at(g3, tol),
    };

    let a_star_a = a.adjoint() * a;
    let b_b_star = b * b.adjoint();
    let paa = &pa * a;
    let bpb = b * &pb;
    let commute = CommuteChecks {
        proj_a_with_b_gram: Check::at(
            relative_residual(&(&paa * &b_b_star), &(&b_b_star * &paa)),
            tol,
        ),
        proj_b_with_a_gram: Check::at(
            relative_residual(&(&bpb * &a_star_a), &(&a_star_a * &bpb)),
            tol,
        ),
    };

    let projection = Check::at(
        orthogonal_projection_residual(&(b * &pinv_ab * a)),
        tol,
    );

    let squared = {
        // the law for the Gram pair (A*A, BB*); the candidate is checked
        // through the defining Penrose identities, which stay conditioned
        // like the other predicates, where a direct comparison of two
        // computed pseudoinverses would square the conditioning
        let prod = &a_star_a * &b_b_star;
        let candidate_sq = formed_pinv(&b_b_star, nb * nb) * formed_pinv(&a_star_a, na * na);
        let cls = penrose_conditions(&prod, &candidate_sq, tol)?;
        let residual = cls.residuals().iter().fold(0.0_f64, |acc, &r| acc.max(r));
        Check::at(residual, tol)
    };

    let svd_a = compute_svd(a);
    let svd_b = compute_svd(b);
    let range_a_star = range_basis(&a.adjoint());
    let range_b = range_basis(b);
    let cap = intersect(&range_a_star, &range_b)?;
    let greville_all =
        greville.range_a_star_a_b_in_b.pass && greville.range_b_b_star_a_star_in_a_star.pass
            && greville.identity.pass;
    let block_form = suites::block_form_from_parts(&svd_a, &svd_b, cap.dim(), greville_all, tol);

    let angle_class = if range_a_star.dim() == 0 || range_b.dim() == 0 {
        AngleClass {
            angles: Vec::new(),
            all_zero_or_right: true,
            zero_count: 0,
            degenerate: true,
        }
    } else {
        let spectrum = principal_angles(&range_a_star, &range_b)?;
        AngleClass {
            all_zero_or_right: angles_all_0_or_right(&spectrum, tols.angle),
            zero_count: spectrum.zero_count(tols.angle),
            angles: spectrum.angles().to_vec(),
            degenerate: false,
        }
    };

    let rank_ab = formed_rank(&ab, na * nb);

    let report = RolReport {
        m: a.rows(),
        n: a.cols(),
        k: b.cols(),
        rank_a: svd_a.rank(),
        rank_b: svd_b.rank(),
        rank_ab,
        dim_intersection: cap.dim(),
        tol,
        angle_tol: tols.angle,
        rol_residual: residual,
        full_rol,
        penrose,
        greville,
        commute,
        projection,
        squared,
        block_form,
        angle_class,
        consistent: false,
    };
    let consistent = report.equivalent_predicates().windows(2).all(|w| w[0] == w[1]);
    Ok(RolReport {
        consistent,
        ..report
    })
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::matrix::Field;
    use crate::svd::random_matrix_with_rank;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn greville_fails_for_the_mismatch_pair() {
        let (a, b) = rank_one_mismatch_pair();
        assert_eq!(greville_check(&a, &b, 1e-8).unwrap(), (false, false, false));
    }

    #[test]
    fn greville_holds_for_the_noncommuting_pair() {
        let (a, b) = noncommuting_full_rol_pair();
        assert_eq!(greville_check(&a, &b, 1e-8).unwrap(), (true, true, true));
    }

    #[test]
    fn greville_holds_when_b_is_the_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let a = random_matrix_with_rank(5, 4, 2, Field::Complex, &mut rng);
        let b = a.adjoint();
        assert_eq!(greville_check(&a, &b, 1e-8).unwrap(), (true, true, true));
    }

    #[test]
    fn classify_reports_the_half_residual() {
        let (a, b) = rank_one_mismatch_pair();
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert!((report.rol_residual - 0.5).abs() < 1e-14);
        assert!(!report.full_rol);
        assert!(!report.penrose.has(1));
        assert!(report.consistent);
        assert_eq!(report.rank_ab, 1);
    }

    #[test]
    fn classify_confirms_the_noncommuting_pair() {
        let (a, b) = noncommuting_full_rol_pair();
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert!(report.full_rol, "residual {}", report.rol_residual);
        assert!(report.penrose.is_exactly(&[1, 2, 3, 4]));
        assert!(report.consistent);
        assert_eq!(report.rank_a, 3);
        assert_eq!(report.rank_b, 2);
        assert_eq!(report.rank_ab, 2);
        assert_eq!(report.dim_intersection, 2);

        // the Gram operators genuinely do not commute: [A*A, BB*] is 81
        // times a fixed skew pattern
        let commutator = a.adjoint() * &a * &b * b.adjoint() - &b * b.adjoint() * a.adjoint() * &a;
        let pattern = Matrix::real(&[
            &[0.0, -1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
        ])
        .scale(81.0);
        assert!(commutator.approx_eq(&pattern, 1e-12));
        assert!(commutator.fro_norm() > 100.0);
    }

    #[test]
    fn classify_grades_the_geometric_pair() {
        let (a, b) = geometric_12_pair();
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert!(report.penrose.is_exactly(&[1, 2]));
        assert!(!report.full_rol);
        assert!(!report.projection.pass);
        assert!(report.consistent);
        let angles = &report.angle_class.angles;
        assert_eq!(angles.len(), 2);
        assert!(angles[0] < 1e-10);
        assert!((angles[1] - FRAC_PI_2).abs() < 1e-10);
        assert!(report.angle_class.all_zero_or_right);
        assert_eq!(report.rank_ab, 1);
        assert_eq!(report.dim_intersection, 1);
    }

    #[test]
    fn classify_zero_product_pair_holds_trivially() {
        let (a, b) = zero_product_pair();
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert!(report.full_rol);
        assert!(report.consistent);
        assert_eq!(report.rank_ab, 0);
        assert_eq!(report.dim_intersection, 0);
        // both factors nonzero, so angles exist and are all right
        assert!(report.angle_class.all_zero_or_right);
        assert_eq!(report.angle_class.zero_count, 0);
    }

    #[test]
    fn classify_degenerate_zero_factor() {
        let a = Matrix::zeros(2, 3, Field::Real);
        let b = Matrix::real(&[&[1.0], &[0.0], &[0.0]]);
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert!(report.full_rol);
        assert!(report.consistent);
        assert!(report.angle_class.degenerate);
    }

    #[test]
    fn classify_rejects_nonconformable_pairs() {
        let a = Matrix::zeros(2, 3, Field::Real);
        let b = Matrix::zeros(2, 2, Field::Real);
        assert!(matches!(
            classify_pair(&a, &b, &Tolerances::default()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn classify_is_consistent_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..20 {
            let field = if trial % 2 == 0 { Field::Real } else { Field::Complex };
            let a = random_matrix_with_rank(6, 5, 3, field, &mut rng);
            let b = random_matrix_with_rank(5, 7, 4, field, &mut rng);
            let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
            assert!(report.consistent, "trial {trial}");
            assert!(!report.full_rol, "random pairs almost surely fail the law");
        }
    }
}
