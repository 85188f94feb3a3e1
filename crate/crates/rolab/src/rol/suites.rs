//! Equivalence batteries: the twelve-way `{1,2}` suite, the
//! `{1,2,3}`/`{1,2,4}` classifier, the block-form test, and the battery of
//! derived laws implied by the full law.

use super::{check_conformable, formed_pinv, formed_range, rol_residual, Tolerances};
use crate::error::{Error, Result};
use crate::matrix::{relative_residual, Matrix};
use crate::pinv::{orthogonal_projection_residual, penrose_conditions, pinv};
use crate::subspace::{
    angles_all_0_or_right, intersect, principal_angles, range_basis, subspace_eq,
};
use crate::svd::{compute_svd, SvdFactors};
use serde::Serialize;
use std::collections::BTreeMap;

/// The twelve independently evaluated conditions, each equivalent to
/// `pinv(B) pinv(A)` being a `{1,2}`-inverse of `AB`. All twelve must
/// agree; [`TwelveWay::all_agree`] reports whether they did.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TwelveWay {
    /// i: `pinv(B) pinv(A)` satisfies Penrose 1 and 2 for `AB`.
    pub penrose_one_two: bool,
    /// ii: `AB` satisfies Penrose 1 and 2 for `pinv(B) pinv(A)`.
    pub penrose_one_two_swapped: bool,
    /// iii: `range(pinv(A) A B) <= range(B)`.
    pub range_proj_b_in_b: bool,
    /// iv: `range(B pinv(B) pinv(A)) <= range(pinv(A))`.
    pub range_proj_a_in_a_star: bool,
    /// v: principal angles between `range(A*)` and `range(B)` are 0 or right.
    pub angles_zero_or_right: bool,
    /// vi: `pinv(A) A B pinv(B)` is an orthogonal projection.
    pub product_proj_ab: bool,
    /// vii: `B pinv(B) pinv(A) A` is an orthogonal projection.
    pub product_proj_ba: bool,
    /// viii: the projections `pinv(A) A` and `B pinv(B)` commute.
    pub projectors_commute: bool,
    /// ix: the projections are simultaneously diagonalizable (for Hermitian
    /// idempotents this is their commuting, tested as in viii).
    pub simultaneously_diagonalizable: bool,
    /// x: the parallel-sum identity
    /// `pinv(A) A B pinv(B) = 2 pinv(A) A pinv(pinv(A) A + B pinv(B)) B pinv(B)`.
    pub parallel_sum: bool,
    /// xi: `(pinv(A) A B pinv(B))^2 = B pinv(B) pinv(A) A`.
    pub squared_product: bool,
    /// xii: eigenvalues of `pinv(A) A B pinv(B) pinv(A) A` are 0 or 1.
    pub eigenvalues_zero_one: bool,
}

impl TwelveWay {
    pub fn items(&self) -> [(&'static str, bool); 12] {
        [
            ("penrose_one_two", self.penrose_one_two),
            ("penrose_one_two_swapped", self.penrose_one_two_swapped),
            ("range_proj_b_in_b", self.range_proj_b_in_b),
            ("range_proj_a_in_a_star", self.range_proj_a_in_a_star),
            ("angles_zero_or_right", self.angles_zero_or_right),
            ("product_proj_ab", self.product_proj_ab),
            ("product_proj_ba", self.product_proj_ba),
            ("projectors_commute", self.projectors_commute),
            (
                "simultaneously_diagonalizable",
                self.simultaneously_diagonalizable,
            ),
            ("parallel_sum", self.parallel_sum),
            ("squared_product", self.squared_product),
            ("eigenvalues_zero_one", self.eigenvalues_zero_one),
        ]
    }

    pub fn all_agree(&self) -> bool {
        let items = self.items();
        items.iter().all(|&(_, v)| v == items[0].1)
    }

    pub fn verdict(&self) -> bool {
        self.penrose_one_two
    }
}

/// Evaluate the twelve `{1,2}` conditions independently.
pub fn twelve_way_suite(a: &Matrix, b: &Matrix, tols: &Tolerances) -> Result<TwelveWay> {
    check_conformable(a, b)?;
    let tol = tols.residual;
    let ab = a * b;
    let pa = pinv(a);
    let pb = pinv(b);
    let candidate = &pb * &pa;
    let paa = &pa * a;
    let bpb = b * &pb;

    let direct = penrose_conditions(&ab, &candidate, tol)?;
    let swapped = penrose_conditions(&candidate, &ab, tol)?;

    let range_b = range_basis(b);
    let range_pa = range_basis(&pa);
    let iii = crate::subspace::contains(
        &range_b,
        &formed_range(&(&paa * b), pa.fro_norm() * a.fro_norm() * b.fro_norm()),
        tol,
    )?;
    let iv = crate::subspace::contains(
        &range_pa,
        &formed_range(&(&bpb * &pa), b.fro_norm() * pb.fro_norm() * pa.fro_norm()),
        tol,
    )?;

    let v = {
        let range_a_star = range_basis(&a.adjoint());
        if range_a_star.dim() == 0 || range_b.dim() == 0 {
            true
        } else {
            let spectrum = principal_angles(&range_a_star, &range_b)?;
            angles_all_0_or_right(&spectrum, tols.angle)
        }
    };

    let vi = orthogonal_projection_residual(&(&paa * &bpb)) <= tol;
    let vii = orthogonal_projection_residual(&(&bpb * &paa)) <= tol;
    let viii = relative_residual(&(&paa * &bpb), &(&bpb * &paa)) <= tol;

    let x = {
        let sum = &paa + &bpb;
        let rhs = (&paa * pinv(&sum) * &bpb).scale(2.0);
        relative_residual(&(&paa * &bpb), &rhs) <= tol
    };

    let xi = relative_residual(&(&paa * &bpb * &paa * &bpb), &(&bpb * &paa)) <= tol;

    let xii = {
        // Hermitian positive semidefinite, so eigenvalues = singular values
        let h = &paa * &bpb * &paa;
        let mut sigma = compute_svd(&h).sigma().to_vec();
        sigma.resize(h.rows(), 0.0);
        sigma
            .iter()
            .all(|&s| s <= tol || (s - 1.0).abs() <= tol)
    };

    Ok(TwelveWay {
        penrose_one_two: direct.contains_all(&[1, 2]),
        penrose_one_two_swapped: swapped.contains_all(&[1, 2]),
        range_proj_b_in_b: iii,
        range_proj_a_in_a_star: iv,
        angles_zero_or_right: v,
        product_proj_ab: vi,
        product_proj_ba: vii,
        projectors_commute: viii,
        simultaneously_diagonalizable: viii,
        parallel_sum: x,
        squared_product: xi,
        eigenvalues_zero_one: xii,
    })
}

/// Classification of `pinv(B) pinv(A)` as a `{1,2,3}`- or `{1,2,4}`-inverse
/// of `AB`, with each side evaluated along three independent routes that
/// must agree with the Penrose verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Cls123124 {
    pub is12: bool,
    pub is123: bool,
    pub is124: bool,
    pub is1234: bool,
    /// Range equality, orthogonal projection, and projector identity routes.
    pub is123_routes: [bool; 3],
    pub is124_routes: [bool; 3],
    /// All routes agreed with the Penrose classification.
    pub consistent: bool,
}

/// Evaluate the `{1,2,3}` / `{1,2,4}` classifications.
///
/// The `{1,2,3}` routes: `range(A*AB) = range(A*) ∩ range(B)`;
/// `AB pinv(B) pinv(A)` an orthogonal projection; and
/// `AB pinv(B) pinv(A) = AB pinv(AB)`. The `{1,2,4}` routes mirror them
/// under the adjoint.
pub fn classify_123_124(a: &Matrix, b: &Matrix, tols: &Tolerances) -> Result<Cls123124> {
    check_conformable(a, b)?;
    let tol = tols.residual;
    let (na, nb) = (a.fro_norm(), b.fro_norm());
    let ab = a * b;
    let pinv_ab = formed_pinv(&ab, na * nb);
    let pa = pinv(a);
    let pb = pinv(b);
    let candidate = &pb * &pa;
    let penrose = penrose_conditions(&ab, &candidate, tol)?;

    let range_a_star = range_basis(&a.adjoint());
    let range_b = range_basis(b);
    let cap = intersect(&range_a_star, &range_b)?;

    let routes_123 = [
        subspace_eq(&formed_range(&(a.adjoint() * a * b), na * na * nb), &cap, tol)?,
        orthogonal_projection_residual(&(&ab * &candidate)) <= tol,
        relative_residual(&(&ab * &candidate), &(&ab * &pinv_ab)) <= tol,
    ];
    let routes_124 = [
        subspace_eq(&formed_range(&(b * b.adjoint() * a.adjoint()), nb * nb * na), &cap, tol)?,
        orthogonal_projection_residual(&(&candidate * &ab)) <= tol,
        relative_residual(&(&candidate * &ab), &(&pinv_ab * &ab)) <= tol,
    ];

    let is12 = penrose.contains_all(&[1, 2]);
    let is123 = penrose.contains_all(&[1, 2, 3]);
    let is124 = penrose.contains_all(&[1, 2, 4]);
    let consistent = routes_123.iter().all(|&r| r == is123)
        && routes_124.iter().all(|&r| r == is124);

    Ok(Cls123124 {
        is12,
        is123,
        is124,
        is1234: is123 && is124,
        is123_routes: routes_123,
        is124_routes: routes_124,
        consistent,
    })
}

/// Do the leading right singular vectors of `A` and leading left singular
/// vectors of `B` interact through a `[[Q, 0], [0, 0]]` block with unitary
/// `Q` (or a zero block)? Tested as: every singular value of `V_A* U_B`
/// lies at 0 or 1, the number of unit values equals
/// `dim(range(A*) ∩ range(B))`, and Greville's conditions hold.
pub fn block_form_check(a: &Matrix, b: &Matrix, tol: f64) -> Result<bool> {
    check_conformable(a, b)?;
    let (g1, g2, g3) = super::greville_residuals(a, b)?;
    let greville_all = g1 <= tol && g2 <= tol && g3 <= tol;
    let svd_a = compute_svd(a);
    let svd_b = compute_svd(b);
    let cap = intersect(&range_basis(&a.adjoint()), &range_basis(b))?;
    Ok(block_form_from_parts(
        &svd_a,
        &svd_b,
        cap.dim(),
        greville_all,
        tol,
    ))
}

pub(crate) fn block_form_from_parts(
    svd_a: &SvdFactors,
    svd_b: &SvdFactors,
    dim_intersection: usize,
    greville_all: bool,
    tol: f64,
) -> bool {
    let ra = svd_a.rank();
    let rb = svd_b.rank();
    if ra == 0 || rb == 0 {
        // empty interaction block; the verdict is Greville's
        return greville_all;
    }
    let m = svd_a.right_vectors().adjoint() * svd_b.left_vectors();
    let mut sigma = compute_svd(&m).sigma().to_vec();
    sigma.resize(ra.min(rb), 0.0);
    let all_zero_or_one = sigma.iter().all(|&s| s <= tol || (s - 1.0).abs() <= tol);
    let unit_count = sigma.iter().filter(|&&s| (s - 1.0).abs() <= tol).count();
    all_zero_or_one && unit_count == dim_intersection && greville_all
}

/// The thirteen identities implied by the full law for derived products,
/// returned as name -> relative residual. Errors with `RolNotSatisfied`
/// when the pair does not satisfy the law itself.
pub fn derived_rols_check(
    a: &Matrix,
    b: &Matrix,
    tols: &Tolerances,
) -> Result<BTreeMap<String, f64>> {
    check_conformable(a, b)?;
    let (na, nb) = (a.fro_norm(), b.fro_norm());
    let ab = a * b;
    let pinv_ab = formed_pinv(&ab, na * nb);
    let pa = pinv(a);
    let pb = pinv(b);
    let candidate = &pb * &pa;
    let base = rol_residual(&pinv_ab, &candidate);
    if base > tols.residual {
        return Err(Error::RolNotSatisfied(base));
    }

    let a_star = a.adjoint();
    let b_star = b.adjoint();
    let a_star_a = &a_star * a;
    let b_b_star = b * &b_star;
    let paa = &pa * a;
    let bpb = b * &pb;
    let (npa, npb) = (pa.fro_norm(), pb.fro_norm());

    let mut out = BTreeMap::new();
    let mut put = |name: &str, lhs: Matrix, rhs: Matrix| {
        out.insert(name.to_string(), relative_residual(&lhs, &rhs));
    };

    put(
        "pinv(AB.B*) = pinv(B*) pinv(AB)",
        formed_pinv(&(&ab * &b_star), na * nb * nb),
        pinv(&b_star) * &pinv_ab,
    );
    put(
        "pinv(AB.pinv(B)) = B pinv(AB)",
        formed_pinv(&(&ab * &pb), na * nb * npb),
        b * &pinv_ab,
    );
    put(
        "pinv(A*.AB) = pinv(AB) pinv(A*)",
        formed_pinv(&(&a_star * &ab), na * na * nb),
        &pinv_ab * pinv(&a_star),
    );
    put(
        "pinv(pinv(A).AB) = pinv(AB) A",
        formed_pinv(&(&pa * &ab), npa * na * nb),
        &pinv_ab * a,
    );
    put(
        "pinv(A*A.B) = pinv(B) pinv(A*A)",
        formed_pinv(&(&a_star_a * b), na * na * nb),
        &pb * formed_pinv(&a_star_a, na * na),
    );
    put(
        "pinv(A.BB*) = pinv(BB*) pinv(A)",
        formed_pinv(&(a * &b_b_star), na * nb * nb),
        formed_pinv(&b_b_star, nb * nb) * &pa,
    );
    put(
        "pinv(pinv(A)A.B) = pinv(B) pinv(A)A",
        formed_pinv(&(&paa * b), npa * na * nb),
        &pb * &paa,
    );
    put(
        "pinv(A.Bpinv(B)) = Bpinv(B) pinv(A)",
        formed_pinv(&(a * &bpb), na * nb * npb),
        &bpb * &pa,
    );
    put(
        "pinv(pinv(B).A*) = pinv(A*) B",
        formed_pinv(&(&pb * &a_star), npb * na),
        pinv(&a_star) * b,
    );
    put(
        "pinv(B*.pinv(A)) = A pinv(B*)",
        formed_pinv(&(&b_star * &pa), nb * npa),
        a * pinv(&b_star),
    );

    let p1 = &ab * &pinv_ab;
    let m2 = a * &a_star * &ab;
    let p2 = &m2 * formed_pinv(&m2, na * na * na * nb);
    let m3 = &ab * &b_star * &a_star;
    let p3 = &m3 * formed_pinv(&m3, na * na * nb * nb);
    put("proj(AB) = proj(AA*AB)", p1.clone(), p2.clone());
    put("proj(AB) = proj(ABB*A*)", p1, p3.clone());
    put("proj(AA*AB) = proj(ABB*A*)", p2, p3);

    Ok(out)
}
