//! Regression fixtures for `rolab repro`: small exact pairs with known
//! classifications, the reference constructions at their published
//! parameter sets, and the alignment caveat. Each fixture reports one
//! governing residual.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rolab::{
    aligned_svds, classify_123_124, classify_pair, compute_svd, construct_pair_12,
    construct_pair_123, construct_partner, group_spectrum, null_basis, penrose_conditions, pinv,
    random_matrix_with_rank, random_unitary, range_basis, relative_residual, reparametrize_svd,
    subspace, twelve_way_suite, ConstructionPlan, Field, Matrix, Subspace, Tolerances,
};
use std::f64::consts::FRAC_PI_2;

pub struct Row {
    pub name: &'static str,
    pub pass: bool,
    pub residual: f64,
    pub note: String,
}

fn cast(m: Matrix, field: Field) -> Matrix {
    match field {
        Field::Real => m,
        Field::Complex => m.as_complex(),
    }
}

fn mismatch_pair(field: Field) -> (Matrix, Matrix) {
    (
        cast(Matrix::real(&[&[1.0, 1.0]]), field),
        cast(Matrix::real(&[&[1.0], &[0.0]]), field),
    )
}

fn noncommuting_pair(field: Field) -> (Matrix, Matrix) {
    (
        cast(
            Matrix::real(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 2.0, 0.0, 0.0],
                &[0.0, 0.0, 1.0, 0.0],
            ]),
            field,
        ),
        cast(
            Matrix::real(&[
                &[2.0, 4.0, 3.0, 2.0],
                &[2.0, 4.0, 1.0, 2.0],
                &[0.0, 0.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 0.0],
            ]),
            field,
        ),
    )
}

pub fn run_all(tols: &Tolerances, field: Field) -> Vec<Row> {
    vec![
        rank_one_mismatch(tols, field),
        noncommuting_full_law(tols, field),
        restricted_span_123(tols, field),
        geometric_12(tols, field),
        zero_product_alignment(tols, field),
        rank_factorization_spans(tols, field),
        identity_family(tols, field),
        partner_construction(tols, field),
        angle_construction(tols, field),
        span_construction(tols, field),
        alignment_caveat(tols, field),
        adjoint_transfer(tols, field),
    ]
}

fn rank_one_mismatch(tols: &Tolerances, field: Field) -> Row {
    let (a, b) = mismatch_pair(field);
    let report = classify_pair(&a, &b, tols).expect("conformable");
    let suite = twelve_way_suite(&a, &b, tols).expect("conformable");
    let all_false = suite.items().iter().all(|&(_, v)| !v);
    Row {
        name: "rank-one-mismatch",
        pass: !report.full_rol
            && !report.penrose.has(1)
            && (report.rol_residual - 0.5).abs() < 1e-12
            && all_false
            && report.consistent,
        residual: report.rol_residual,
        note: "law fails with residual 1/2; twelve-way all false".into(),
    }
}

fn noncommuting_full_law(tols: &Tolerances, field: Field) -> Row {
    let (a, b) = noncommuting_pair(field);
    let report = classify_pair(&a, &b, tols).expect("conformable");
    let printed = cast(
        Matrix::real(&[
            &[-2.0, 3.0, 0.0],
            &[-4.0, 6.0, 0.0],
            &[24.0, -12.0, 0.0],
            &[-2.0, 3.0, 0.0],
        ])
        .scale(1.0 / 48.0),
        field,
    );
    let candidate = pinv(&b) * pinv(&a);
    let printed_dev = (&candidate - &printed).max_abs();
    let commutator =
        a.adjoint() * &a * &b * b.adjoint() - &b * b.adjoint() * a.adjoint() * &a;
    Row {
        name: "noncommuting-full-law",
        pass: report.full_rol
            && report.consistent
            && printed_dev <= 1e-10
            && report.rank_a == 3
            && report.rank_b == 2
            && commutator.fro_norm() > 100.0,
        residual: report.rol_residual,
        note: format!("printed-inverse deviation {printed_dev:.3e}; Gram operators do not commute"),
    }
}

fn restricted_span_123(tols: &Tolerances, field: Field) -> Row {
    let a = cast(Matrix::real(&[&[1.0, 0.0], &[0.0, 0.0]]), field);
    let b = cast(Matrix::real(&[&[1.0, 1.0, 0.0], &[0.0, 1.0, 1.0]]), field);
    let ab = &a * &b;
    let expected_p = cast(
        Matrix::real(&[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 0.0]]).scale(0.5),
        field,
    );
    let expected_c = cast(
        Matrix::real(&[&[2.0, 0.0], &[1.0, 0.0], &[-1.0, 0.0]]).scale(1.0 / 3.0),
        field,
    );
    let dev = (pinv(&ab) - &expected_p)
        .max_abs()
        .max((pinv(&b) * pinv(&a) - &expected_c).max_abs());
    let cls = classify_123_124(&a, &b, tols).expect("conformable");
    let penrose = penrose_conditions(&ab, &(pinv(&b) * pinv(&a)), tols.residual).expect("shapes");
    Row {
        name: "restricted-span-123",
        pass: dev <= 1e-12 && penrose.is_exactly(&[1, 2, 3]) && cls.is123 && !cls.is124 && cls.consistent,
        residual: dev,
        note: format!("class {:?}; three {{1,2,3}} routes agree", penrose.satisfied()),
    }
}

fn geometric_12(tols: &Tolerances, field: Field) -> Row {
    let a = cast(Matrix::real(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, -1.0]]), field);
    let b = cast(Matrix::real(&[&[1.0, 0.0], &[0.0, 1.0], &[2.0, 3.0]]), field);
    let report = classify_pair(&a, &b, tols).expect("conformable");
    let suite = twelve_way_suite(&a, &b, tols).expect("conformable");
    let angles = &report.angle_class.angles;
    let angle_dev = if angles.len() == 2 {
        angles[0].abs().max((angles[1] - FRAC_PI_2).abs())
    } else {
        f64::INFINITY
    };
    Row {
        name: "geometric-12",
        pass: angle_dev <= 1e-10
            && report.penrose.is_exactly(&[1, 2])
            && suite.all_agree()
            && suite.verdict(),
        residual: angle_dev,
        note: format!("angles {angles:?}; class {:?}", report.penrose.satisfied()),
    }
}

fn zero_product_alignment(tols: &Tolerances, field: Field) -> Row {
    let a = cast(Matrix::real(&[&[1.0, 0.0, 1.0], &[0.0, -1.0, 0.0]]), field);
    let b = cast(Matrix::real(&[&[1.0], &[0.0], &[-1.0]]), field);
    let Ok(aligned) = aligned_svds(&a, &b, tols) else {
        return Row {
            name: "zero-product-alignment",
            pass: false,
            residual: f64::INFINITY,
            note: "law unexpectedly rejected".into(),
        };
    };
    let recon = relative_residual(&aligned.a.reconstruct(), &a)
        .max(relative_residual(&aligned.b.reconstruct(), &b));
    let s2 = 2.0_f64.sqrt();
    let sigma_ok = (aligned.a.sigma()[0] - s2).abs() < 1e-12
        && (aligned.a.sigma()[1] - 1.0).abs() < 1e-12
        && (aligned.b.sigma()[0] - s2).abs() < 1e-12;
    Row {
        name: "zero-product-alignment",
        pass: aligned.j_a.is_empty() && aligned.j_b.is_empty() && sigma_ok && recon <= 1e-10,
        residual: recon,
        note: "product is zero, both aligned spans are trivial".into(),
    }
}

fn rank_factorization_spans(tols: &Tolerances, field: Field) -> Row {
    let s = cast(
        Matrix::real(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0], &[0.0, 2.0]]),
        field,
    );
    let t = cast(Matrix::real(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, 1.0]]), field);
    let report = classify_pair(&s, &t, tols).expect("conformable");
    let Ok(aligned) = aligned_svds(&s, &t, tols) else {
        return Row {
            name: "rank-factorization-spans",
            pass: false,
            residual: f64::INFINITY,
            note: "law unexpectedly rejected".into(),
        };
    };
    Row {
        name: "rank-factorization-spans",
        pass: report.full_rol
            && report.consistent
            && aligned.j_a.len() == 2
            && aligned.j_b.len() == 2,
        residual: report.rol_residual,
        note: "full-rank factors: aligned spans fill the inner space".into(),
    }
}

fn identity_family(tols: &Tolerances, field: Field) -> Row {
    let _ = tols;
    let eye = Matrix::identity(2, field);
    let svd = compute_svd(&eye);
    let blocks = group_spectrum(&svd);
    let mut max_recon: f64 = 0.0;
    let mut distinct = true;
    let mut previous: Option<Matrix> = None;
    for seed in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_unitary(2, field, &mut rng);
        let member = reparametrize_svd(
            &svd,
            &blocks,
            &[q],
            &Matrix::zeros(0, 0, field),
            &Matrix::zeros(0, 0, field),
        )
        .expect("valid rotation");
        max_recon = max_recon.max(relative_residual(&member.reconstruct(), &eye));
        if let Some(prev) = &previous {
            distinct &= (prev - member.v()).fro_norm() > 1e-6;
        }
        previous = Some(member.v().clone());
    }
    Row {
        name: "identity-family",
        pass: max_recon <= 1e-11 && distinct,
        residual: max_recon,
        note: "identity decomposes through any unitary".into(),
    }
}

fn partner_construction(tols: &Tolerances, field: Field) -> Row {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let a = random_matrix_with_rank(40, 21, 6, field, &mut rng);
    let plan = ConstructionPlan::new(3, 5, 30, rng.gen());
    let b = construct_partner(&a, &plan).expect("feasible");
    let report = classify_pair(&a, &b, tols).expect("conformable");
    Row {
        name: "partner-construction",
        pass: report.full_rol && report.consistent && report.rank_b == 8 && report.rank_ab == 3,
        residual: report.rol_residual,
        note: "published parameter set: 40x21 rank 6, partner 21x30 rank 8".into(),
    }
}

fn angle_construction(tols: &Tolerances, field: Field) -> Row {
    for seed in [202u64, 203] {
        let (a, b) = construct_pair_12((40, 21, 30), (6, 8), 3, seed, field).expect("feasible");
        let cls = classify_123_124(&a, &b, tols).expect("conformable");
        let report = classify_pair(&a, &b, tols).expect("conformable");
        if cls.is12 && cls.is1234 {
            continue; // measure-zero degenerate draw; retry once
        }
        return Row {
            name: "angle-construction",
            pass: cls.is12 && !cls.is1234 && report.rank_ab == 3 && !report.full_rol,
            residual: report.rol_residual,
            note: format!(
                "{}{{1,2}} holds, full law correctly fails",
                if seed == 203 { "retried once; " } else { "" }
            ),
        };
    }
    Row {
        name: "angle-construction",
        pass: false,
        residual: f64::INFINITY,
        note: "both seeds landed in the degenerate set".into(),
    }
}

fn span_construction(tols: &Tolerances, field: Field) -> Row {
    for seed in [301u64, 302] {
        let (a, b) = construct_pair_123((40, 21, 30), (6, 8), 3, seed, field).expect("feasible");
        let cls = classify_123_124(&a, &b, tols).expect("conformable");
        let xab = pinv(&b) * pinv(&a) * &a * &b;
        let hermitian_residual = relative_residual(&xab.adjoint(), &xab);
        if cls.is123 && cls.is124 {
            continue; // degenerate draw; retry once
        }
        return Row {
            name: "span-construction",
            pass: cls.is123 && !cls.is124 && hermitian_residual > tols.residual,
            residual: hermitian_residual,
            note: format!(
                "{}{{1,2,3}} holds and pinv(B)pinv(A)AB is not Hermitian",
                if seed == 302 { "retried once; " } else { "" }
            ),
        };
    }
    Row {
        name: "span-construction",
        pass: false,
        residual: f64::INFINITY,
        note: "both seeds landed in the degenerate set".into(),
    }
}

fn alignment_caveat(tols: &Tolerances, field: Field) -> Row {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let a = random_matrix_with_rank(5, 5, 3, field, &mut rng);
    let q = random_unitary(5, field, &mut rng);
    let report = classify_pair(&a, &q, tols).expect("conformable");

    let u_b = random_unitary(5, field, &mut rng);
    let null_a = null_basis(&a);
    let range_a_star = range_basis(&a.adjoint());
    let outside: Vec<Matrix> = (0..5)
        .filter(|&i| {
            let col = Subspace::new(u_b.column(i)).expect("unit column");
            !subspace::contains(&null_a, &col, 1e-7).expect("ambient")
        })
        .map(|i| u_b.column(i))
        .collect();
    let refs: Vec<&Matrix> = outside.iter().collect();
    let straddle_span = Subspace::new(Matrix::hstack(&refs)).expect("orthonormal");
    let violated = !subspace::subspace_eq(&straddle_span, &range_a_star, 1e-7).expect("ambient");

    let Ok(aligned) = aligned_svds(&a, &q, tols) else {
        return Row {
            name: "alignment-caveat",
            pass: false,
            residual: f64::INFINITY,
            note: "law unexpectedly rejected".into(),
        };
    };
    let kept: Vec<Matrix> = aligned.j_b.iter().map(|&i| aligned.b.u().column(i)).collect();
    let refs: Vec<&Matrix> = kept.iter().collect();
    let aligned_span = Subspace::new(Matrix::hstack(&refs)).expect("orthonormal");
    let satisfied = subspace::subspace_eq(&aligned_span, &range_a_star, 1e-8).expect("ambient");

    Row {
        name: "alignment-caveat",
        pass: report.full_rol && violated && satisfied,
        residual: report.rol_residual,
        note: format!(
            "straddling decomposition spans dim {} and violates the equality; aligned one satisfies it",
            straddle_span.dim()
        ),
    }
}

fn adjoint_transfer(tols: &Tolerances, field: Field) -> Row {
    let _ = tols;
    let (a, _) = noncommuting_pair(field);
    let residual = relative_residual(&pinv(&a.adjoint()), &pinv(&a).adjoint());
    Row {
        name: "adjoint-transfer",
        pass: residual <= 1e-10,
        residual,
        note: "pseudoinverse commutes with the adjoint".into(),
    }
}
