//! Constructors that realize a chosen inverse class.
//!
//! [`construct_partner`] builds, for a fixed `A`, a partner `B` of chosen
//! rank and width satisfying the full law: the leading left singular
//! vectors of `B` are a unitary mix of selected right singular vectors of
//! `A` padded with directions from `null(A)`. [`construct_pair_12`] builds
//! a pair whose ranges meet at prescribed principal angles {0, right} so
//! only the `{1,2}` class holds generically, and [`construct_pair_123`] /
//! [`construct_pair_124`] span `range(B)` by singular vectors of `A`
//! (resp. the adjoint mirror) so exactly the one-sided class is certain.

use crate::error::{Error, Result};
use crate::matrix::{Field, Matrix};
use crate::svd::{complete_orthonormal, compute_svd, random_orthonormal, random_unitary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Singular values for a constructed factor.
#[derive(Clone, Debug)]
pub enum SigmaSpec {
    /// Positive values supplied by the caller, one per rank.
    Given(Vec<f64>),
    /// Random integers in `1..=rank`, drawn from the plan's seed.
    RandomIntegers,
}

/// Free data of the partner construction.
#[derive(Clone, Debug)]
pub struct ConstructionPlan {
    /// Number of right singular vectors of `A` recycled into the partner.
    pub j_size: usize,
    /// Explicit index set into the right singular vectors; `None` means the
    /// first `j_size`.
    pub j_indices: Option<Vec<usize>>,
    /// Number of additional directions drawn from `null(A)`; the partner's
    /// rank is `j_size + extra_null_dirs`.
    pub extra_null_dirs: usize,
    /// Column count of the partner.
    pub target_cols: usize,
    pub sigma: SigmaSpec,
    /// Mix the recycled singular vectors by a random unitary (the general
    /// case) rather than keeping them axis-aligned.
    pub mix_recycled: bool,
    pub seed: u64,
}

impl ConstructionPlan {
    pub fn new(j_size: usize, extra_null_dirs: usize, target_cols: usize, seed: u64) -> Self {
        ConstructionPlan {
            j_size,
            j_indices: None,
            extra_null_dirs,
            target_cols,
            sigma: SigmaSpec::RandomIntegers,
            mix_recycled: true,
            seed,
        }
    }

    pub fn with_sigma(mut self, sigma: Vec<f64>) -> Self {
        self.sigma = SigmaSpec::Given(sigma);
        self
    }

    pub fn rank(&self) -> usize {
        self.j_size + self.extra_null_dirs
    }
}

fn sigma_values(spec: &SigmaSpec, rank: usize, rng: &mut impl Rng) -> Result<Vec<f64>> {
    match spec {
        SigmaSpec::Given(values) => {
            if values.len() != rank {
                return Err(Error::PlanInfeasible(format!(
                    "{} singular values for rank {rank}",
                    values.len()
                )));
            }
            if values.iter().any(|&v| v <= 0.0) {
                return Err(Error::PlanInfeasible(
                    "singular values must be positive".into(),
                ));
            }
            Ok(values.clone())
        }
        SigmaSpec::RandomIntegers => Ok((0..rank)
            .map(|_| rng.gen_range(1..=rank.max(1)) as f64)
            .collect()),
    }
}

/// For a fixed `A`, build `B` with `rank(B) = j_size + extra_null_dirs`
/// such that the full reverse-order law holds for `(A, B)` and
/// `rank(AB) = j_size`.
///
/// ```
/// use rolab::{classify_pair, construct_partner, ConstructionPlan, Matrix, Tolerances};
///
/// let a = Matrix::real(&[&[2.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
/// let b = construct_partner(&a, &ConstructionPlan::new(1, 1, 4, 42)).unwrap();
/// let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
/// assert!(report.full_rol);
/// assert_eq!(report.rank_b, 2);
/// assert_eq!(report.rank_ab, 1);
/// ```
pub fn construct_partner(a: &Matrix, plan: &ConstructionPlan) -> Result<Matrix> {
    let svd = compute_svd(a);
    let n = a.cols();
    let r_a = svd.rank();
    let s = plan.j_size;
    let t = plan.extra_null_dirs;
    let r_b = plan.rank();
    let k = plan.target_cols;

    if s > r_a {
        return Err(Error::PlanInfeasible(format!(
            "cannot recycle {s} singular vectors of a rank-{r_a} matrix"
        )));
    }
    if t > n - r_a {
        return Err(Error::PlanInfeasible(format!(
            "cannot draw {t} directions from a null space of dimension {}",
            n - r_a
        )));
    }
    if k == 0 {
        return Err(Error::PlanInfeasible("partner needs at least one column".into()));
    }
    if r_b > n.min(k) {
        return Err(Error::PlanInfeasible(format!(
            "rank {r_b} exceeds min(n, k) = {}",
            n.min(k)
        )));
    }

    let indices: Vec<usize> = match &plan.j_indices {
        Some(list) => {
            if list.len() != s {
                return Err(Error::PlanInfeasible(format!(
                    "{} explicit indices for j_size {s}",
                    list.len()
                )));
            }
            let mut sorted = list.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != s || list.iter().any(|&i| i >= r_a) {
                return Err(Error::PlanInfeasible(
                    "explicit indices must be distinct and below the rank".into(),
                ));
            }
            list.clone()
        }
        None => (0..s).collect(),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let field = a.field();
    let sigma_b = sigma_values(&plan.sigma, r_b, &mut rng)?;

    let v_a = svd.v();
    let recycled_cols: Vec<Matrix> = indices.iter().map(|&i| v_a.column(i)).collect();
    let mut parts: Vec<Matrix> = Vec::new();
    if s > 0 {
        let refs: Vec<&Matrix> = recycled_cols.iter().collect();
        let recycled = Matrix::hstack(&refs);
        parts.push(if plan.mix_recycled {
            &recycled * random_unitary(s, field, &mut rng)
        } else {
            recycled
        });
    }
    if t > 0 {
        parts.push(v_a.columns(r_a..r_a + t));
    }
    // the remaining columns of V_A complete the basis exactly
    for i in (0..r_a).filter(|i| !indices.contains(i)) {
        parts.push(v_a.column(i));
    }
    if r_a + t < n {
        parts.push(v_a.columns(r_a + t..n));
    }
    let refs: Vec<&Matrix> = parts.iter().collect();
    let u_b = Matrix::hstack(&refs);
    debug_assert_eq!(u_b.shape(), (n, n));

    let v_b = random_unitary(k, field, &mut rng);
    Ok(&u_b * Matrix::generalized_diag(n, k, &sigma_b, field) * v_b.adjoint())
}

/// Mirror of [`construct_partner`]: for a fixed `B`, build `A` (with
/// `plan.target_cols` rows) such that the full law holds for `(A, B)`.
/// The recycled vectors are now left singular vectors of `B`.
pub fn construct_partner_left(b: &Matrix, plan: &ConstructionPlan) -> Result<Matrix> {
    construct_partner(&b.adjoint(), plan).map(|p| p.adjoint())
}

fn check_pair_dims(
    dims: (usize, usize, usize),
    ranks: (usize, usize),
    shared: usize,
) -> Result<()> {
    let (m, n, k) = dims;
    let (r_a, r_b) = ranks;
    if shared > r_a.min(r_b) {
        return Err(Error::PlanInfeasible(format!(
            "shared dimension {shared} exceeds min rank {}",
            r_a.min(r_b)
        )));
    }
    if r_a > m.min(n) {
        return Err(Error::PlanInfeasible(format!(
            "rank {r_a} exceeds min(m, n) = {}",
            m.min(n)
        )));
    }
    if r_b > n.min(k) {
        return Err(Error::PlanInfeasible(format!(
            "rank {r_b} exceeds min(n, k) = {}",
            n.min(k)
        )));
    }
    if r_a + r_b - shared > n {
        return Err(Error::PlanInfeasible(format!(
            "ranks {r_a} + {r_b} - {shared} shared exceed the inner dimension {n}"
        )));
    }
    Ok(())
}

fn random_integer_sigma(rank: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..rank)
        .map(|_| rng.gen_range(1..=rank.max(1)) as f64)
        .collect()
}

/// Build a pair `(A, B)` whose ranges `range(A*)` and `range(B)` share an
/// `n_shared`-dimensional subspace and meet at right angles elsewhere, with
/// both leading bases remixed by random unitaries. `pinv(B) pinv(A)` is
/// then a `{1,2}`-inverse of `AB` with `rank(AB) = n_shared`, and
/// generically nothing stronger.
pub fn construct_pair_12(
    dims: (usize, usize, usize),
    ranks: (usize, usize),
    n_shared: usize,
    seed: u64,
    field: Field,
) -> Result<(Matrix, Matrix)> {
    check_pair_dims(dims, ranks, n_shared)?;
    let (m, n, k) = dims;
    let (r_a, r_b) = ranks;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let shared = random_orthonormal(n, n_shared, field, &mut rng);
    let v_a = Matrix::hstack(&[&shared, &complete_orthonormal(&shared).expect("orthonormal")]);
    let null_a_basis = complete_orthonormal(&v_a.columns(0..r_a)).expect("orthonormal");
    let u_b_lead = Matrix::hstack(&[&shared, &null_a_basis.columns(0..r_b - n_shared)]);
    let u_b = Matrix::hstack(&[
        &u_b_lead,
        &complete_orthonormal(&u_b_lead).expect("orthonormal"),
    ]);

    // remix inside the leading blocks so the shared subspace is generically
    // not spanned by individual singular vectors
    let v_a = Matrix::hstack(&[
        &(v_a.columns(0..r_a) * random_unitary(r_a, field, &mut rng)),
        &v_a.columns(r_a..n),
    ]);
    let u_b = Matrix::hstack(&[
        &(u_b.columns(0..r_b) * random_unitary(r_b, field, &mut rng)),
        &u_b.columns(r_b..n),
    ]);

    let sigma_a = random_integer_sigma(r_a, &mut rng);
    let sigma_b = random_integer_sigma(r_b, &mut rng);
    let u_a = random_unitary(m, field, &mut rng);
    let v_b = random_unitary(k, field, &mut rng);

    let a = &u_a * Matrix::generalized_diag(m, n, &sigma_a, field) * v_a.adjoint();
    let b = &u_b * Matrix::generalized_diag(n, k, &sigma_b, field) * v_b.adjoint();
    Ok((a, b))
}

/// Build a pair for which `pinv(B) pinv(A)` is certainly a
/// `{1,2,3}`-inverse of `AB`: `range(B)` is spanned by a unitary mix of
/// `r_B` right singular vectors of `A`, of which exactly `n_shared` lie in
/// `range(A*)` and the rest in `null(A)`. The `{1,2,4}` class fails
/// generically.
pub fn construct_pair_123(
    dims: (usize, usize, usize),
    ranks: (usize, usize),
    n_shared: usize,
    seed: u64,
    field: Field,
) -> Result<(Matrix, Matrix)> {
    check_pair_dims(dims, ranks, n_shared)?;
    let (m, n, k) = dims;
    let (r_a, r_b) = ranks;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let v_a = random_unitary(n, field, &mut rng);
    // r_b consecutive singular vectors of A, overlapping the leading r_a in
    // exactly n_shared directions
    let start = r_a - n_shared;
    let picked = v_a.columns(start..start + r_b);
    let range_b = &picked * random_unitary(r_b, field, &mut rng);
    let u_b = Matrix::hstack(&[
        &range_b,
        &complete_orthonormal(&range_b).expect("orthonormal"),
    ]);

    let sigma_a = random_integer_sigma(r_a, &mut rng);
    let sigma_b = random_integer_sigma(r_b, &mut rng);
    let u_a = random_unitary(m, field, &mut rng);
    let v_b = random_unitary(k, field, &mut rng);

    let a = &u_a * Matrix::generalized_diag(m, n, &sigma_a, field) * v_a.adjoint();
    let b = &u_b * Matrix::generalized_diag(n, k, &sigma_b, field) * v_b.adjoint();
    Ok((a, b))
}

/// Adjoint mirror of [`construct_pair_123`]: the returned pair certainly
/// satisfies the `{1,2,4}` class, and `{1,2,3}` fails generically.
pub fn construct_pair_124(
    dims: (usize, usize, usize),
    ranks: (usize, usize),
    n_shared: usize,
    seed: u64,
    field: Field,
) -> Result<(Matrix, Matrix)> {
    let (m, n, k) = dims;
    let (r_a, r_b) = ranks;
    let (a1, b1) = construct_pair_123((k, n, m), (r_b, r_a), n_shared, seed, field)?;
    Ok((b1.adjoint(), a1.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::super::{classify_pair, fixtures, Tolerances};
    use super::*;
    use crate::rol::suites::classify_123_124;
    use crate::subspace::{principal_angles, range_basis};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn empty_recycle_set_gives_zero_product() {
        let (a, _) = fixtures::noncommuting_full_rol_pair();
        let plan = ConstructionPlan::new(0, 1, 3, 9);
        let b = construct_partner(&a, &plan).unwrap();
        assert_eq!(b.shape(), (4, 3));
        assert_eq!(compute_svd(&b).rank(), 1);
        assert!((&a * &b).fro_norm() < 1e-12);
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert!(report.full_rol);
        assert!((crate::pinv::pinv(&b) * crate::pinv::pinv(&a)).fro_norm() < 1e-12);
    }

    #[test]
    fn partner_for_the_printed_matrix() {
        let (a, _) = fixtures::noncommuting_full_rol_pair();
        let plan = ConstructionPlan::new(1, 1, 4, 3);
        let b = construct_partner(&a, &plan).unwrap();
        assert_eq!(b.shape(), (4, 4));
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert_eq!(report.rank_b, 2);
        assert_eq!(report.rank_ab, 1);
        assert!(report.full_rol, "residual {}", report.rol_residual);
    }

    #[test]
    fn partner_respects_explicit_indices_and_given_sigma() {
        let (a, _) = fixtures::noncommuting_full_rol_pair();
        let plan = ConstructionPlan {
            j_size: 2,
            j_indices: Some(vec![0, 2]),
            extra_null_dirs: 0,
            target_cols: 5,
            sigma: SigmaSpec::Given(vec![4.0, 0.25]),
            mix_recycled: true,
            seed: 17,
        };
        let b = construct_partner(&a, &plan).unwrap();
        let svd = compute_svd(&b);
        assert_eq!(svd.rank(), 2);
        assert!((svd.sigma()[0] - 4.0).abs() < 1e-12);
        assert!((svd.sigma()[1] - 0.25).abs() < 1e-12);
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert!(report.full_rol);
        assert_eq!(report.rank_ab, 2);
    }

    #[test]
    fn partner_rejects_budget_violations() {
        let (a, _) = fixtures::noncommuting_full_rol_pair(); // 3x4, rank 3
        assert!(matches!(
            construct_partner(&a, &ConstructionPlan::new(4, 0, 4, 0)),
            Err(Error::PlanInfeasible(_))
        ));
        assert!(matches!(
            construct_partner(&a, &ConstructionPlan::new(1, 2, 4, 0)),
            Err(Error::PlanInfeasible(_))
        ));
        assert!(matches!(
            construct_partner(&a, &ConstructionPlan::new(2, 0, 1, 0)),
            Err(Error::PlanInfeasible(_))
        ));
        assert!(matches!(
            construct_partner(&a, &ConstructionPlan::new(2, 0, 4, 0).with_sigma(vec![1.0])),
            Err(Error::PlanInfeasible(_))
        ));
        assert!(matches!(
            construct_partner(&a, &ConstructionPlan::new(2, 0, 4, 0).with_sigma(vec![1.0, -1.0])),
            Err(Error::PlanInfeasible(_))
        ));
    }

    #[test]
    fn left_partner_mirrors_the_construction() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        let b = crate::svd::random_matrix_with_rank(5, 6, 3, Field::Complex, &mut rng);
        // rank(B) = 3, B is 5x6; build A with 4 rows recycling 2 vectors
        let plan = ConstructionPlan::new(2, 1, 4, 8);
        let a = construct_partner_left(&b, &plan).unwrap();
        assert_eq!(a.shape(), (4, 5));
        assert_eq!(compute_svd(&a).rank(), 3);
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert!(report.full_rol, "residual {}", report.rol_residual);
    }

    #[test]
    fn left_partner_of_identity_is_trivial() {
        let b = Matrix::identity(4, Field::Real);
        let plan = ConstructionPlan::new(2, 0, 3, 4);
        let a = construct_partner_left(&b, &plan).unwrap();
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert!(report.full_rol);
    }

    #[test]
    fn left_partner_with_empty_recycle_set_kills_the_product() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let b = crate::svd::random_matrix_with_rank(5, 4, 2, Field::Real, &mut rng);
        let a = construct_partner_left(&b, &ConstructionPlan::new(0, 2, 3, 21)).unwrap();
        assert!((&a * &b).fro_norm() < 1e-12);
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert!(report.full_rol);
    }

    #[test]
    fn fifty_seeds_give_strictly_12_pairs() {
        // the {1,2} class is certain; escaping the stronger classes is only
        // generic, so a draw landing in the measure-zero set is redrawn
        // once with the next seed and the event recorded
        let tols = Tolerances::default();
        let mut degenerate_seeds = Vec::new();
        for seed in 0..50u64 {
            let field = if seed % 2 == 0 { Field::Real } else { Field::Complex };
            let mut cls = None;
            for attempt in [seed, seed + 1] {
                let (a, b) =
                    construct_pair_12((10, 8, 9), (3, 4), 2, attempt, field).unwrap();
                let c = classify_123_124(&a, &b, &tols).unwrap();
                assert!(c.is12, "seed {attempt}: the {{1,2}} class is guaranteed");
                if c.is1234 {
                    degenerate_seeds.push(attempt);
                    continue;
                }
                cls = Some(c);
                break;
            }
            let cls = cls.expect("two consecutive degenerate draws");
            assert!(!cls.is1234, "seed {seed}");
        }
        if !degenerate_seeds.is_empty() {
            println!("degenerate draws redrawn once: {degenerate_seeds:?}");
        }
    }

    #[test]
    fn pair_12_has_the_designed_angles() {
        let (a, b) = construct_pair_12((9, 7, 8), (3, 4), 2, 5, Field::Real).unwrap();
        let spec = principal_angles(&range_basis(&a.adjoint()), &range_basis(&b)).unwrap();
        let angles = spec.angles();
        assert_eq!(angles.len(), 3);
        assert!(angles[0] < 1e-9 && angles[1] < 1e-9);
        assert!((angles[2] - FRAC_PI_2).abs() < 1e-9);
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert_eq!(report.rank_ab, 2);
        let cls = classify_123_124(&a, &b, &Tolerances::default()).unwrap();
        assert!(cls.is12);
        assert!(!cls.is1234, "remixed intersection should break the full law");
    }

    #[test]
    fn pair_12_with_no_overlap_gives_zero_product() {
        let (a, b) = construct_pair_12((6, 5, 4), (2, 2), 0, 3, Field::Real).unwrap();
        assert!((&a * &b).fro_norm() < 1e-10);
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert!(report.full_rol);
    }

    #[test]
    fn pair_123_is_certain_and_one_sided() {
        let (a, b) = construct_pair_123((9, 7, 8), (3, 4), 2, 11, Field::Real).unwrap();
        assert_eq!(compute_svd(&a).rank(), 3);
        assert_eq!(compute_svd(&b).rank(), 4);
        let cls = classify_123_124(&a, &b, &Tolerances::default()).unwrap();
        assert!(cls.is123, "{cls:?}");
        assert!(cls.consistent);
        assert!(!cls.is124, "mirror class should fail generically");
    }

    #[test]
    fn pair_123_with_full_overlap_inside_range_gives_full_law() {
        // every chosen vector lies inside range(A*): the full law is certain
        let (a, b) = construct_pair_123((8, 6, 7), (4, 3), 3, 13, Field::Complex).unwrap();
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        assert!(report.full_rol, "residual {}", report.rol_residual);
    }

    #[test]
    fn pair_124_mirrors_123() {
        let (a, b) = construct_pair_124((9, 7, 8), (3, 4), 2, 11, Field::Real).unwrap();
        assert_eq!(a.shape(), (9, 7));
        assert_eq!(b.shape(), (7, 8));
        assert_eq!(compute_svd(&a).rank(), 3);
        assert_eq!(compute_svd(&b).rank(), 4);
        let cls = classify_123_124(&a, &b, &Tolerances::default()).unwrap();
        assert!(cls.is124, "{cls:?}");
        assert!(!cls.is123);
        assert!(cls.consistent);
    }

    #[test]
    fn pair_constructors_reject_infeasible_geometry() {
        assert!(matches!(
            construct_pair_12((4, 3, 4), (3, 3), 1, 0, Field::Real),
            Err(Error::PlanInfeasible(_))
        ));
        assert!(matches!(
            construct_pair_123((4, 3, 4), (2, 2), 3, 0, Field::Real),
            Err(Error::PlanInfeasible(_))
        ));
    }
}
