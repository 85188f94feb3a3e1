//! Construct, verify, and classify matrix pairs with respect to the
//! reverse-order law `pinv(AB) = pinv(B) pinv(A)` of the Moore-Penrose
//! pseudoinverse, together with its `{1,2}`-, `{1,2,3}`- and
//! `{1,2,4}`-inverse weakenings.
//!
//! ```
//! use rolab::{classify_pair, Matrix, Tolerances};
//!
//! // the classic failure: pinv(AB) = 1 while pinv(B) pinv(A) = 1/2
//! let a = Matrix::real(&[&[1.0, 1.0]]);
//! let b = Matrix::real(&[&[1.0], &[0.0]]);
//! let report = classify_pair(&a, &b, &Tolerances::default()).unwrap();
//! assert!(!report.full_rol);
//! assert!((report.rol_residual - 0.5).abs() < 1e-12);
//!
//! // exchanging the roles through the adjoint always satisfies the law
//! let report = classify_pair(&a, &a.adjoint(), &Tolerances::default()).unwrap();
//! assert!(report.full_rol && report.consistent);
//! ```
//!
//! The crate is organized around five building blocks:
//!
//! - [`matrix`]: dense arithmetic over the real and complex fields;
//! - [`svd`]: singular value decomposition by one-sided Jacobi, plus the
//!   reparametrization of the full family of decompositions of a matrix;
//! - [`pinv`]: the pseudoinverse, an independent rank-factorization oracle
//!   for it, and classification of candidates by Penrose conditions;
//! - [`subspace`]: range/null bases, intersections, and principal angles;
//! - [`rol`]: the reverse-order-law toolkit: Greville checks, the full
//!   catalogue of equivalent conditions, partner constructors, aligned
//!   decompositions, and the derived-law battery.

pub mod error;
pub mod io;
pub mod matrix;
pub mod pinv;
pub mod rol;
pub mod subspace;
pub mod svd;

pub use error::{Error, Result};
pub use matrix::{relative_residual, Field, Matrix, DEFAULT_TOL};
pub use pinv::{is_orthogonal_projection, penrose_conditions, pinv, pinv_oracle, InverseClass};
pub use rol::{
    aligned_svds, block_form_check, classify_123_124, classify_pair, construct_pair_12,
    construct_pair_123, construct_pair_124, construct_partner, construct_partner_left,
    derived_rols_check, greville_check, twelve_way_suite, AlignedSvds, Cls123124,
    ConstructionPlan, RolReport, Tolerances, TwelveWay,
};
pub use subspace::{
    angles_all_0_or_right, intersect, null_basis, principal_angles, range_basis,
    AngleSpectrum, Subspace,
};
pub use svd::{
    complete_orthonormal, compute_svd, compute_svd_with, group_spectrum, group_spectrum_with,
    random_matrix_with_rank, random_orthonormal, random_unitary, reparametrize_svd,
    SpectralBlocks, SvdFactors,
};
