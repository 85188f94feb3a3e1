//! Subspace calculus: orthonormal range/null bases, intersections,
//! inclusion tests, and principal angles.
//!
//! A subspace is carried by a matrix with orthonormal columns; the zero
//! subspace is first-class (an `n x 0` basis). Angle computations follow
//! the cosine/sine split: cosines are singular values of the product of
//! adjoint bases, with angles below 45 degrees recovered through the
//! sine-based residual matrix, which keeps full precision where the
//! arccosine is flat.

use crate::error::{Error, Result};
use crate::matrix::{Field, Matrix, DEFAULT_TOL};
use crate::svd::{complete_orthonormal, compute_svd};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

/// Default tolerance (radians) separating genuine 0 / right angles from
/// generic ones.
pub const DEFAULT_ANGLE_TOL: f64 = 1e-7;

/// A linear subspace of `K^n` represented by an orthonormal basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    /// Wrap a basis after checking its columns are orthonormal.
    pub fn new(basis: Matrix) -> Result<Subspace> {
        if basis.cols() > 0 {
            let gram = basis.adjoint() * &basis;
            let eye = Matrix::identity(basis.cols(), basis.field());
            if !gram.approx_eq(&eye, DEFAULT_TOL) {
                return Err(Error::NotOrthonormal((gram - eye).fro_norm()));
            }
        }
        Ok(Subspace {
            ambient: basis.rows(),
            basis,
        })
    }

    pub(crate) fn from_basis_unchecked(basis: Matrix) -> Subspace {
        Subspace {
            ambient: basis.rows(),
            basis,
        }
    }

    /// The zero subspace of `K^n`.
    pub fn zero(ambient: usize, field: Field) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zeros(ambient, 0, field),
        }
    }

    /// All of `K^n`.
    pub fn full(ambient: usize, field: Field) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient, field),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// The orthogonal projector `B B*` onto this subspace.
    pub fn projector(&self) -> Matrix {
        if self.dim() == 0 {
            return Matrix::zeros(self.ambient, self.ambient, self.basis.field());
        }
        &self.basis * self.basis.adjoint()
    }
}

/// Sorted principal angles between two subspaces, in `[0, pi/2]`.
#[derive(Clone, Debug)]
pub struct AngleSpectrum {
    angles: Vec<f64>,
    dims: (usize, usize),
}

impl AngleSpectrum {
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Number of angles within `tol` of zero.
    pub fn zero_count(&self, tol: f64) -> usize {
        self.angles.iter().filter(|&&t| t <= tol).count()
    }

    /// Number of angles within `tol` of a right angle.
    pub fn right_count(&self, tol: f64) -> usize {
        self.angles
            .iter()
            .filter(|&&t| (t - FRAC_PI_2).abs() <= tol)
            .count()
    }
}

impl Serialize for AngleSpectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("AngleSpectrum", 2)?;
        st.serialize_field("angles", &self.angles)?;
        st.serialize_field("dims", &[self.dims.0, self.dims.1])?;
        st.end()
    }
}

/// Orthonormal basis of the column space; dimension is the numerical rank.
pub fn range_basis(a: &Matrix) -> Subspace {
    let svd = compute_svd(a);
    Subspace::from_basis_unchecked(svd.left_vectors())
}

/// Orthonormal basis of `{x : A x = 0}`, dimension `n - rank`.
pub fn null_basis(a: &Matrix) -> Subspace {
    let svd = compute_svd(a);
    Subspace::from_basis_unchecked(svd.null_right())
}

/// Intersection of two subspaces, computed as the null space of the
/// stacked adjoints of the two orthogonal-complement bases.
pub fn intersect(s1: &Subspace, s2: &Subspace) -> Result<Subspace> {
    check_ambient(s1, s2)?;
    let c1 = complete_orthonormal(s1.basis()).expect("stored basis is orthonormal");
    let c2 = complete_orthonormal(s2.basis()).expect("stored basis is orthonormal");
    let field = c1.field().promote(c2.field());
    if c1.cols() + c2.cols() == 0 {
        return Ok(Subspace::full(s1.ambient, field));
    }
    let stacked = Matrix::vstack(&[&c1.adjoint(), &c2.adjoint()]);
    Ok(null_basis(&stacked))
}

/// Residual of the inclusion `inner <= outer`:
/// `||(I - P_outer) B_inner||_F / (1 + ||B_inner||_F)`.
pub fn containment_residual(outer: &Subspace, inner: &Subspace) -> f64 {
    if inner.dim() == 0 {
        return 0.0;
    }
    let b2 = inner.basis();
    let projected = outer.basis() * (outer.basis().adjoint() * b2);
    (b2 - projected).fro_norm() / (1.0 + b2.fro_norm())
}

/// True iff `inner` is contained in `outer` at tolerance `tol`.
pub fn contains(outer: &Subspace, inner: &Subspace, tol: f64) -> Result<bool> {
    check_ambient(outer, inner)?;
    Ok(containment_residual(outer, inner) <= tol)
}

/// Mutual containment.
pub fn subspace_eq(s1: &Subspace, s2: &Subspace, tol: f64) -> Result<bool> {
    Ok(contains(s1, s2, tol)? && contains(s2, s1, tol)?)
}

/// Principal angles between two subspaces of positive dimension, sorted
/// ascending. Cosines are the singular values (zeros included) of
/// `B1* B2`. The arccosine is flat near 1, so angles whose cosine is at
/// least `1/sqrt(2)` are instead recovered from the sine-based matrix
/// `(I - B1 B1*) B2`, whose small singular values carry the small angles
/// at full precision; past 45 degrees the cosine route is the accurate
/// one and is kept.
pub fn principal_angles(s1: &Subspace, s2: &Subspace) -> Result<AngleSpectrum> {
    check_ambient(s1, s2)?;
    let (d1, d2) = (s1.dim(), s2.dim());
    if d1 == 0 || d2 == 0 {
        return Err(Error::EmptySubspace);
    }
    let count = d1.min(d2);

    let cos_mat = s1.basis().adjoint() * s2.basis();
    let mut cosines = compute_svd(&cos_mat).sigma().to_vec();
    cosines.resize(count, 0.0); // descending, zeros included

    let sin_mat = s2.basis() - s1.basis() * (s1.basis().adjoint() * s2.basis());
    let mut sines = compute_svd(&sin_mat).sigma().to_vec();
    sines.resize(d2, 0.0);
    sines.reverse(); // ascending; first `count` pair up with the angles

    let mut angles: Vec<f64> = (0..count)
        .map(|i| {
            let c = cosines[i].clamp(0.0, 1.0);
            if c >= FRAC_1_SQRT_2 {
                sines[i].clamp(0.0, 1.0).asin()
            } else {
                c.acos()
            }
        })
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(AngleSpectrum {
        angles,
        dims: (d1, d2),
    })
}

/// True iff every angle is within `angle_tol` of 0 or of a right angle.
/// Vacuously true for an empty spectrum.
pub fn angles_all_0_or_right(spectrum: &AngleSpectrum, angle_tol: f64) -> bool {
    spectrum
        .angles
        .iter()
        .all(|&t| t <= angle_tol || (t - FRAC_PI_2).abs() <= angle_tol)
}

fn check_ambient(s1: &Subspace, s2: &Subspace) -> Result<()> {
    if s1.ambient != s2.ambient {
        return Err(Error::AmbientMismatch {
            lhs: s1.ambient,
            rhs: s2.ambient,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svd::{random_matrix_with_rank, random_orthonormal};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_4;

    fn span(cols: &[&[f64]]) -> Subspace {
        // columns given as rows of the transposed matrix for readability
        let m = Matrix::real(cols).adjoint();
        Subspace::new(m).unwrap()
    }

    #[test]
    fn range_of_zero_and_simple_matrices() {
        assert_eq!(range_basis(&Matrix::zeros(3, 2, Field::Real)).dim(), 0);
        let a = Matrix::real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let r = range_basis(&a);
        assert_eq!(r.dim(), 1);
        assert!(r.basis().column(0).fro_norm() - 1.0 < 1e-14);
        assert!((r.basis().get(1, 0)).norm() < 1e-14);

        let ones = Matrix::real(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let r = range_basis(&ones);
        assert_eq!(r.dim(), 1);
        let expect = 1.0 / 2.0_f64.sqrt();
        assert!((r.basis().get(0, 0).re.abs() - expect).abs() < 1e-13);
        assert!((r.basis().get(1, 0).re.abs() - expect).abs() < 1e-13);
    }

    #[test]
    fn null_space_dimensions() {
        let inv = Matrix::real(&[&[2.0, 1.0], &[1.0, 1.0]]);
        assert_eq!(null_basis(&inv).dim(), 0);
        let row = Matrix::real(&[&[1.0, 1.0]]);
        let nb = null_basis(&row);
        assert_eq!(nb.dim(), 1);
        let v = nb.basis();
        assert!((v.get(0, 0) + v.get(1, 0)).norm() < 1e-13);
        assert_eq!(null_basis(&Matrix::zeros(2, 3, Field::Real)).dim(), 3);
    }

    #[test]
    fn intersection_of_coordinate_spans() {
        let s = span(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let cap = intersect(&s, &s).unwrap();
        assert_eq!(cap.dim(), 2);
        assert!(subspace_eq(&cap, &s, 1e-10).unwrap());

        let e1 = span(&[&[1.0, 0.0, 0.0]]);
        let e2 = span(&[&[0.0, 1.0, 0.0]]);
        assert_eq!(intersect(&e1, &e2).unwrap().dim(), 0);

        let e12 = span(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let e23 = span(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let cap = intersect(&e12, &e23).unwrap();
        assert_eq!(cap.dim(), 1);
        assert!(contains(&e12, &cap, 1e-10).unwrap());
        assert!(contains(&e23, &cap, 1e-10).unwrap());
    }

    #[test]
    fn containment_cases() {
        let full = Subspace::full(3, Field::Real);
        let e1 = span(&[&[1.0, 0.0, 0.0]]);
        assert!(contains(&full, &e1, 1e-12).unwrap());
        let s = 1.0 / 2.0_f64.sqrt();
        let diag = span(&[&[s, s, 0.0]]);
        assert!(!contains(&e1, &diag, 1e-8).unwrap());
        assert!(contains(&e1, &Subspace::zero(3, Field::Real), 1e-12).unwrap());
        assert!(matches!(
            contains(&full, &Subspace::zero(2, Field::Real), 1e-8),
            Err(Error::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn angles_identical_and_tilted() {
        let e1 = span(&[&[1.0, 0.0]]);
        let same = principal_angles(&e1, &e1).unwrap();
        assert_eq!(same.len(), 1);
        assert!(same.angles()[0] < 1e-10);

        let s = 1.0 / 2.0_f64.sqrt();
        let diag = span(&[&[s, s]]);
        let spec = principal_angles(&e1, &diag).unwrap();
        assert!((spec.angles()[0] - FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn angles_of_the_zero_right_pair() {
        // range(A*) vs range(B) for the pair with angles {0, pi/2}
        let a = Matrix::real(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, -1.0]]);
        let b = Matrix::real(&[&[1.0, 0.0], &[0.0, 1.0], &[2.0, 3.0]]);
        let ras = range_basis(&a.adjoint());
        let rb = range_basis(&b);
        let spec = principal_angles(&ras, &rb).unwrap();
        assert_eq!(spec.len(), 2);
        assert!(spec.angles()[0] < 1e-10, "angles {:?}", spec.angles());
        assert!(
            (spec.angles()[1] - FRAC_PI_2).abs() < 1e-10,
            "angles {:?}",
            spec.angles()
        );
        assert!(angles_all_0_or_right(&spec, 1e-7));
        assert_eq!(intersect(&ras, &rb).unwrap().dim(), 1);
    }

    #[test]
    fn angle_verdicts() {
        let spec = AngleSpectrum {
            angles: vec![0.0, FRAC_PI_2],
            dims: (2, 2),
        };
        assert!(angles_all_0_or_right(&spec, 1e-7));
        let spec = AngleSpectrum {
            angles: vec![FRAC_PI_4],
            dims: (1, 1),
        };
        assert!(!angles_all_0_or_right(&spec, 1e-7));
        let empty = AngleSpectrum {
            angles: vec![],
            dims: (0, 0),
        };
        assert!(angles_all_0_or_right(&empty, 1e-7));
    }

    #[test]
    fn angles_error_on_degenerate_input() {
        let z = Subspace::zero(3, Field::Real);
        let f = Subspace::full(3, Field::Real);
        assert!(matches!(principal_angles(&z, &f), Err(Error::EmptySubspace)));
    }

    #[test]
    fn angles_are_symmetric_and_basis_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let b1 = random_orthonormal(6, 2, Field::Complex, &mut rng);
        let b2 = random_orthonormal(6, 3, Field::Complex, &mut rng);
        let s1 = Subspace::new(b1.clone()).unwrap();
        let s2 = Subspace::new(b2.clone()).unwrap();
        let a12 = principal_angles(&s1, &s2).unwrap();
        let a21 = principal_angles(&s2, &s1).unwrap();
        for (x, y) in a12.angles().iter().zip(a21.angles()) {
            assert!((x - y).abs() < 1e-10);
        }
        let q = crate::svd::random_unitary(2, Field::Complex, &mut rng);
        let s1_rot = Subspace::new(b1 * q).unwrap();
        let rotated = principal_angles(&s1_rot, &s2).unwrap();
        for (x, y) in a12.angles().iter().zip(rotated.angles()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_angle_count_matches_intersection_dim() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        // generic subspaces in K^8 intersect trivially
        let s1 = Subspace::new(random_orthonormal(8, 3, Field::Real, &mut rng)).unwrap();
        let s2 = Subspace::new(random_orthonormal(8, 4, Field::Real, &mut rng)).unwrap();
        let spec = principal_angles(&s1, &s2).unwrap();
        assert_eq!(spec.zero_count(1e-7), intersect(&s1, &s2).unwrap().dim());

        // designed one-dimensional overlap
        let shared = random_orthonormal(8, 1, Field::Real, &mut rng);
        let rest = complete_orthonormal(&shared).unwrap();
        let b1 = Matrix::hstack(&[&shared, &rest.columns(0..2)]);
        let b2 = Matrix::hstack(&[&shared, &rest.columns(2..5)]);
        let s1 = Subspace::new(b1).unwrap();
        let s2 = Subspace::new(b2).unwrap();
        let spec = principal_angles(&s1, &s2).unwrap();
        assert_eq!(spec.zero_count(1e-7), 1);
        assert_eq!(intersect(&s1, &s2).unwrap().dim(), 1);
    }

    #[test]
    fn range_and_adjoint_null_decompose_the_codomain() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let a = random_matrix_with_rank(6, 4, 2, Field::Real, &mut rng);
        let r = range_basis(&a);
        let n = null_basis(&a.adjoint());
        assert_eq!(r.dim() + n.dim(), 6);
        assert!(!contains(&r, &n, 1e-8).unwrap());
        assert!(!contains(&n, &r, 1e-8).unwrap());
        // and they are orthogonal
        assert!((r.basis().adjoint() * n.basis()).fro_norm() < 1e-10);
    }
}
