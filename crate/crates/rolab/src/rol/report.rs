//! Report types produced by the classifiers; all serialize to JSON with a
//! stable field order.

use crate::pinv::InverseClass;
use serde::Serialize;

/// A single verdict together with the relative residual behind it.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Check {
    pub pass: bool,
    pub residual: f64,
}

impl Check {
    pub(crate) fn at(residual: f64, tol: f64) -> Check {
        Check {
            pass: residual <= tol,
            residual,
        }
    }
}

/// Greville's conditions, each with its residual.
#[derive(Clone, Debug, Serialize)]
pub struct GrevilleChecks {
    pub range_a_star_a_b_in_b: Check,
    pub range_b_b_star_a_star_in_a_star: Check,
    pub identity: Check,
}

impl GrevilleChecks {
    pub fn all(&self) -> bool {
        self.range_a_star_a_b_in_b.pass
            && self.range_b_b_star_a_star_in_a_star.pass
            && self.identity.pass
    }
}

/// The two commutation conditions equivalent to the full law.
#[derive(Clone, Debug, Serialize)]
pub struct CommuteChecks {
    /// `pinv(A) A` commutes with `B B*`.
    pub proj_a_with_b_gram: Check,
    /// `B pinv(B)` commutes with `A* A`.
    pub proj_b_with_a_gram: Check,
}

impl CommuteChecks {
    pub fn all(&self) -> bool {
        self.proj_a_with_b_gram.pass && self.proj_b_with_a_gram.pass
    }
}

/// Principal-angle geometry between `range(A*)` and `range(B)`.
#[derive(Clone, Debug, Serialize)]
pub struct AngleClass {
    pub angles: Vec<f64>,
    pub all_zero_or_right: bool,
    pub zero_count: usize,
    /// True when either range is zero-dimensional and no angles exist.
    pub degenerate: bool,
}

/// Structured verdicts of every named condition for the full
/// reverse-order law on a pair `(A, B)`.
#[derive(Clone, Debug, Serialize)]
pub struct RolReport {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub rank_a: usize,
    pub rank_b: usize,
    pub rank_ab: usize,
    /// Dimension of `range(A*) ∩ range(B)`.
    pub dim_intersection: usize,
    pub tol: f64,
    pub angle_tol: f64,
    /// `||pinv(AB) - pinv(B) pinv(A)||` relative to `||pinv(AB)||`.
    pub rol_residual: f64,
    pub full_rol: bool,
    /// Penrose classification of `pinv(B) pinv(A)` against `AB`.
    pub penrose: InverseClass,
    pub greville: GrevilleChecks,
    pub commute: CommuteChecks,
    /// Is `B pinv(AB) A` an orthogonal projection?
    pub projection: Check,
    /// Does the law hold for the pair `(A*A, BB*)`?
    pub squared: Check,
    /// Do the leading singular vectors of the two factors interact through
    /// a `[[Q, 0], [0, 0]]` block with unitary `Q`?
    pub block_form: bool,
    pub angle_class: AngleClass,
    /// All predicates equivalent to the full law returned the same verdict.
    pub consistent: bool,
}

impl RolReport {
    /// The predicates that are each equivalent to the full law: the law's
    /// own residual, the Penrose class, the two Greville range inclusions,
    /// the Greville identity, the commutation pair, the projection test,
    /// the squared-pair law, and the block form. They must agree on every
    /// input; disagreement signals a numerical bug.
    pub fn equivalent_predicates(&self) -> [bool; 8] {
        [
            self.full_rol,
            self.penrose.is_exactly(&[1, 2, 3, 4]),
            self.greville.range_a_star_a_b_in_b.pass
                && self.greville.range_b_b_star_a_star_in_a_star.pass,
            self.greville.identity.pass,
            self.commute.all(),
            self.projection.pass,
            self.squared.pass,
            self.block_form,
        ]
    }
}
