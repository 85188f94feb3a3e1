//! Dense matrices over the real and complex fields.
//!
//! Entries are stored as double-precision complex numbers in row-major
//! order together with a [`Field`] tag. A real-tagged matrix keeps every
//! imaginary part at zero; mixing real and complex operands promotes the
//! result to the complex field. Values are immutable after construction
//! and every operation is a pure function, so matrices are safe to share
//! and send across threads.

use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Mul, Neg, Range, Sub};

/// Default relative comparison tolerance; every consumer accepts an
/// explicit override.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Scalar field of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Field of an operation mixing `self` and `other`; real promotes to complex.
    pub fn promote(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => write!(f, "real"),
            Field::Complex => write!(f, "complex"),
        }
    }
}

/// Dense rectangular matrix. Either dimension may be zero; empty matrices
/// behave as the corresponding linear maps (products over an empty inner
/// dimension are zero matrices).
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize, field: Field) -> Matrix {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build a matrix entry by entry. Panics if `field` is `Real` but `f`
    /// produces a nonzero imaginary part.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        field: Field,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if field == Field::Real {
                    assert!(v.im == 0.0, "real matrix with nonzero imaginary entry");
                }
                data.push(v);
            }
        }
        Matrix { rows, cols, field, data }
    }

    /// Real matrix from row slices. Panics on ragged input.
    pub fn real(rows: &[&[f64]]) -> Matrix {
        let m = rows.len();
        assert!(m > 0, "matrix needs at least one row");
        let n = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == n), "ragged rows");
        let mut data = Vec::with_capacity(m * n);
        for r in rows {
            data.extend(r.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Matrix { rows: m, cols: n, field: Field::Real, data }
    }

    /// Complex matrix from rows of `(re, im)` pairs.
    pub fn complex(rows: &[&[(f64, f64)]]) -> Matrix {
        let m = rows.len();
        assert!(m > 0, "matrix needs at least one row");
        let n = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == n), "ragged rows");
        let mut data = Vec::with_capacity(m * n);
        for r in rows {
            data.extend(r.iter().map(|&(re, im)| Complex64::new(re, im)));
        }
        Matrix { rows: m, cols: n, field: Field::Complex, data }
    }

    /// Generalized diagonal `rows x cols` matrix carrying `values` on the diagonal.
    pub fn generalized_diag(rows: usize, cols: usize, values: &[f64], field: Field) -> Matrix {
        assert!(values.len() <= rows.min(cols), "too many diagonal entries");
        let mut m = Matrix::zeros(rows, cols, field);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * cols + i] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if self.field == Field::Real {
            assert!(v.im == 0.0, "real matrix with nonzero imaginary entry");
        }
        self.data[i * self.cols + j] = v;
    }

    /// Retag as a complex matrix (entries unchanged).
    pub fn as_complex(&self) -> Matrix {
        let mut m = self.clone();
        m.field = Field::Complex;
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    /// Matrix product. Panics when the inner dimensions differ.
    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert!(
            self.cols == rhs.rows,
            "dimension mismatch in matmul: {}x{} * {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
        let field = self.field.promote(rhs.field);
        let mut out = Matrix::zeros(self.rows, rhs.cols, field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Matrix {
        let mut m = self.clone();
        for v in &mut m.data {
            *v *= s;
        }
        m
    }

    pub fn scale_complex(&self, s: Complex64) -> Matrix {
        let mut m = self.clone();
        m.field = if s.im == 0.0 { self.field } else { Field::Complex };
        for v in &mut m.data {
            *v *= s;
        }
        m
    }

    /// Frobenius norm: square root of the sum of squared entry moduli.
    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Tolerant comparison: `||A - B||_F <= tol * (1 + max(||A||_F, ||B||_F))`.
    /// Panics when shapes differ.
    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        assert!(
            self.shape() == other.shape(),
            "dimension mismatch in approx_eq: {:?} vs {:?}",
            self.shape(),
            other.shape()
        );
        let diff = self - other;
        diff.fro_norm() <= tol * (1.0 + self.fro_norm().max(other.fro_norm()))
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, range: Range<usize>) -> Matrix {
        assert!(range.end <= self.cols, "column range out of bounds");
        let w = range.len();
        let mut out = Matrix::zeros(self.rows, w, self.field);
        for i in 0..self.rows {
            for (jj, j) in range.clone().enumerate() {
                out.data[i * w + jj] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Matrix {
        self.columns(j..j + 1)
    }

    /// Horizontal concatenation. All parts must share the row count.
    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty(), "hstack of nothing");
        let rows = parts[0].rows;
        assert!(parts.iter().all(|p| p.rows == rows), "hstack row mismatch");
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let field = parts
            .iter()
            .fold(Field::Real, |acc, p| acc.promote(p.field));
        let mut out = Matrix::zeros(rows, cols, field);
        let mut offset = 0;
        for p in parts {
            for i in 0..rows {
                for j in 0..p.cols {
                    out.data[i * cols + offset + j] = p.data[i * p.cols + j];
                }
            }
            offset += p.cols;
        }
        out
    }

    /// Vertical concatenation. All parts must share the column count.
    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        assert!(!parts.is_empty(), "vstack of nothing");
        let cols = parts[0].cols;
        assert!(parts.iter().all(|p| p.cols == cols), "vstack column mismatch");
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        let field = parts
            .iter()
            .fold(Field::Real, |acc, p| acc.promote(p.field));
        let mut out = Matrix::zeros(rows, cols, field);
        let mut offset = 0;
        for p in parts {
            out.data[offset * cols..(offset + p.rows) * cols].copy_from_slice(&p.data);
            offset += p.rows;
        }
        out
    }

    pub(crate) fn scale_column(&mut self, j: usize, s: Complex64) {
        if s.im != 0.0 {
            self.field = Field::Complex;
        }
        for i in 0..self.rows {
            self.data[i * self.cols + j] *= s;
        }
    }
}

/// `||a - b||_F / (1 + max(||a||_F, ||b||_F))`, the residual scale used by
/// every identity check in the crate.
pub fn relative_residual(a: &Matrix, b: &Matrix) -> f64 {
    assert!(a.shape() == b.shape(), "dimension mismatch in relative_residual");
    (a - b).fro_norm() / (1.0 + a.fro_norm().max(b.fro_norm()))
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} {} matrix", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                let v = self.get(i, j);
                if j > 0 {
                    write!(f, ", ")?;
                }
                if self.field == Field::Real {
                    write!(f, "{:.6}", v.re)?;
                } else {
                    write!(f, "{:.6}{:+.6}i", v.re, v.im)?;
                }
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

macro_rules! impl_pairwise_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Matrix> for &Matrix {
            type Output = Matrix;
            fn $method(self, rhs: &Matrix) -> Matrix {
                assert!(
                    self.shape() == rhs.shape(),
                    "dimension mismatch in elementwise op: {:?} vs {:?}",
                    self.shape(),
                    rhs.shape()
                );
                let mut out = self.clone();
                out.field = self.field.promote(rhs.field);
                for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
                    #[allow(clippy::assign_op_pattern)]
                    {
                        *o = *o $op *r;
                    }
                }
                out
            }
        }
        impl $trait<Matrix> for &Matrix {
            type Output = Matrix;
            fn $method(self, rhs: Matrix) -> Matrix {
                self $op &rhs
            }
        }
        impl $trait<&Matrix> for Matrix {
            type Output = Matrix;
            fn $method(self, rhs: &Matrix) -> Matrix {
                &self $op rhs
            }
        }
        impl $trait<Matrix> for Matrix {
            type Output = Matrix;
            fn $method(self, rhs: Matrix) -> Matrix {
                &self $op &rhs
            }
        }
    };
}

impl_pairwise_op!(Add, add, +);
impl_pairwise_op!(Sub, sub, -);

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl Mul<Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        self.matmul(&rhs)
    }
}

impl Mul<&Matrix> for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl Mul<Matrix> for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        self.matmul(&rhs)
    }
}

impl Mul<f64> for &Matrix {
    type Output = Matrix;
    fn mul(self, s: f64) -> Matrix {
        self.scale(s)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}
