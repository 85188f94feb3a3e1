//! Property tests for the algebraic invariants: adjoint/product interplay,
//! unitary invariance, pseudoinverse identities, the unconditional
//! `{1,2}` families, and agreement of the equivalence batteries on
//! arbitrary inputs.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rolab::*;

fn arb_field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Real), Just(Field::Complex)]
}

/// Dense matrix with entries in [-2, 2], dims in 1..=max.
fn arb_matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max, arb_field(), any::<u64>()).prop_map(|(m, n, field, seed)| {
        dense(m, n, field, seed)
    })
}

fn dense(m: usize, n: usize, field: Field, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(m, n, field, |_, _| {
        let re = rng.gen_range(-2.0..2.0);
        let im = if field == Field::Complex {
            rng.gen_range(-2.0..2.0)
        } else {
            0.0
        };
        num_complex::Complex64::new(re, im)
    })
}

/// Conformable pair (A: m x n, B: n x k).
fn arb_pair(max: usize) -> impl Strategy<Value = (Matrix, Matrix)> {
    (1..=max, 1..=max, 1..=max, arb_field(), any::<u64>()).prop_map(
        |(m, n, k, field, seed)| {
            (dense(m, n, field, seed), dense(n, k, field, seed.wrapping_add(1)))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_reverses_products((a, b) in arb_pair(6)) {
        let lhs = (&a * &b).adjoint();
        let rhs = b.adjoint() * a.adjoint();
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn fro_norm_is_unitarily_invariant(a in arb_matrix(6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_unitary(a.rows(), a.field(), &mut rng);
        let rotated = &q * &a;
        prop_assert!((rotated.fro_norm() - a.fro_norm()).abs() <= 1e-12 * (1.0 + a.fro_norm()));
    }

    #[test]
    fn svd_reconstructs_and_pairs_vectors(a in arb_matrix(7)) {
        let svd = compute_svd(&a);
        prop_assert!(svd.reconstruct().approx_eq(&a, 1e-11));
        if svd.rank() > 0 {
            let sigma1 = svd.sigma()[0];
            for i in 0..svd.rank() {
                let lhs = &a * svd.v().column(i);
                let rhs = svd.u().column(i).scale(svd.sigma()[i]);
                prop_assert!((lhs - rhs).fro_norm() <= 1e-10 * sigma1);
            }
        }
    }

    #[test]
    fn reparametrization_keeps_sigma_and_the_matrix(a in arb_matrix(6), seed in any::<u64>()) {
        let svd = compute_svd(&a);
        let blocks = group_spectrum(&svd);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let qs: Vec<Matrix> = blocks
            .blocks
            .iter()
            .map(|b| random_unitary(b.len(), a.field(), &mut rng))
            .collect();
        let qr = random_unitary(blocks.null_dim_right, a.field(), &mut rng);
        let ql = random_unitary(blocks.null_dim_left, a.field(), &mut rng);
        let again = reparametrize_svd(&svd, &blocks, &qs, &qr, &ql).unwrap();
        prop_assert_eq!(again.sigma(), svd.sigma());
        prop_assert!(again.reconstruct().approx_eq(&a, 1e-11));
    }

    #[test]
    fn pinv_commutes_with_adjoint(a in arb_matrix(6)) {
        let lhs = pinv(&a.adjoint());
        let rhs = pinv(&a).adjoint();
        prop_assert!(lhs.approx_eq(&rhs, 1e-10));
    }

    #[test]
    fn pinv_is_an_involution(a in arb_matrix(6)) {
        prop_assert!(pinv(&pinv(&a)).approx_eq(&a, 1e-10));
    }

    #[test]
    fn unconditional_12_families_hold((a, b) in arb_pair(5)) {
        // four {1,2} memberships that hold for arbitrary conformable pairs
        let ab = &a * &b;
        let pinv_ab = pinv(&ab);
        let cases = [
            (&ab * b.adjoint(), pinv(&b.adjoint()) * &pinv_ab),
            (&ab * pinv(&b), &b * &pinv_ab),
            (a.adjoint() * &ab, &pinv_ab * pinv(&a.adjoint())),
            (pinv(&a) * &ab, &pinv_ab * &a),
        ];
        for (target, candidate) in cases {
            let cls = penrose_conditions(&target, &candidate, 1e-8).unwrap();
            prop_assert!(
                cls.contains_all(&[1, 2]),
                "residuals {:?}",
                cls.residuals()
            );
        }
    }

    #[test]
    fn twelve_way_transfer_is_stable((a, b) in arb_pair(5)) {
        let tols = Tolerances::default();
        let direct = twelve_way_suite(&a, &b, &tols).unwrap();
        prop_assert!(direct.all_agree());
        // {1,2} holds for (A, B) iff it holds for (A*A, BB*) and for the
        // projection pair (pinv(A) A, B pinv(B))
        let grams = twelve_way_suite(&(a.adjoint() * &a), &(&b * b.adjoint()), &tols).unwrap();
        prop_assert!(grams.all_agree());
        prop_assert_eq!(direct.verdict(), grams.verdict());
        let projs = twelve_way_suite(&(pinv(&a) * &a), &(&b * pinv(&b)), &tols).unwrap();
        prop_assert!(projs.all_agree());
        prop_assert_eq!(direct.verdict(), projs.verdict());
    }

    #[test]
    fn classifier_is_internally_consistent((a, b) in arb_pair(5)) {
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        prop_assert!(report.consistent);
        let cls = classify_123_124(&a, &b, &Tolerances::default()).unwrap();
        prop_assert!(cls.consistent);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constructed_partners_satisfy_every_equivalent_condition(
        seed in any::<u64>(),
        m in 2usize..=7,
        n in 2usize..=7,
        k in 2usize..=7,
        field in arb_field(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r_a = rng.gen_range(1..=m.min(n));
        let a = random_matrix_with_rank(m, n, r_a, field, &mut rng);
        let s = rng.gen_range(0..=r_a);
        let t = rng.gen_range(0..=(n - r_a).min(k.saturating_sub(s)));
        prop_assume!(s + t >= 1 && s + t <= n.min(k));
        let plan = ConstructionPlan::new(s, t, k, seed.wrapping_add(7));
        let b = construct_partner(&a, &plan).unwrap();

        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        prop_assert!(report.full_rol, "residual {}", report.rol_residual);
        prop_assert!(report.consistent);
        prop_assert_eq!(report.rank_b, s + t);
        prop_assert_eq!(report.rank_ab, s);
        // when the law holds, the Greville ranges coincide with the
        // intersection and the product rank equals its dimension
        let cap = intersect(&range_basis(&a.adjoint()), &range_basis(&b)).unwrap();
        prop_assert_eq!(cap.dim(), s);
        // products formed from the factors carry noise at the scale of the
        // factor norms; floor the singular values accordingly
        let (na, nb) = (a.fro_norm(), b.fro_norm());
        let floor = n.max(m).max(k) as f64 * f64::EPSILON * na * na * nb;
        let g1 = Subspace::new(
            compute_svd(&(a.adjoint() * &a * &b)).with_sigma_floor(floor).left_vectors(),
        ).unwrap();
        let g2 = Subspace::new(
            compute_svd(&(&b * b.adjoint() * a.adjoint())).with_sigma_floor(floor * nb / na)
                .left_vectors(),
        ).unwrap();
        prop_assert!(rolab::subspace::subspace_eq(&g1, &cap, 1e-8).unwrap());
        prop_assert!(rolab::subspace::subspace_eq(&g2, &cap, 1e-8).unwrap());
    }

    #[test]
    fn designed_angle_pairs_count_zero_angles(
        seed in any::<u64>(),
        field in arb_field(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(4..=8);
        let m = rng.gen_range(3..=8);
        let k = rng.gen_range(3..=8);
        let r_a = rng.gen_range(1..=m.min(n - 1));
        let r_b = rng.gen_range(1..=k.min(n - r_a));
        let shared = rng.gen_range(0..=r_a.min(r_b));
        prop_assume!(r_a + r_b - shared <= n);
        let (a, b) = construct_pair_12((m, n, k), (r_a, r_b), shared, seed, field).unwrap();
        let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
        prop_assert!(report.consistent);
        prop_assert_eq!(report.rank_ab, shared);
        prop_assert_eq!(report.angle_class.zero_count, shared);
        prop_assert!(report.angle_class.all_zero_or_right);
        let suite = twelve_way_suite(&a, &b, &Tolerances::default()).unwrap();
        prop_assert!(suite.all_agree());
        prop_assert!(suite.verdict());
    }
}
