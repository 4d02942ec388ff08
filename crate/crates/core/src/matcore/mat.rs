use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};

pub type C64 = Complex<f64>;
pub type Vector = DVector<C64>;

/// Dense complex matrix with finite entries.
///
/// This is the finite-dimensional stand-in for operators in `B(H)` and in
/// the Schatten classes. Arithmetic is delegated to nalgebra; constructors
/// that accept external data reject NaN and infinities.
#[derive(Clone, PartialEq)]
pub struct Mat(DMatrix<C64>);

impl Mat {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(LabError::Input(format!("empty shape {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(LabError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_iterator(rows, cols, entries))
    }

    /// Wraps a nalgebra matrix after checking that every entry is finite.
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(LabError::Input("empty matrix".into()));
        }
        if let Some((i, _)) = m
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(LabError::Input(format!(
                "non-finite entry at column-major offset {i}"
            )));
        }
        Ok(Mat(m))
    }

    /// Wraps without the finiteness scan. Only for results of arithmetic on
    /// values that are already known to be finite.
    pub(crate) fn wrap(m: DMatrix<C64>) -> Self {
        Mat(m)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Mat(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Mat(DMatrix::identity(n, n))
    }

    pub fn diag(values: &[C64]) -> Self {
        Mat(DMatrix::from_diagonal(&DVector::from_column_slice(values)))
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// A column vector viewed as an `n x 1` matrix.
    pub fn column_of(v: &Vector) -> Self {
        Mat(DMatrix::from_column_slice(v.len(), 1, v.as_slice()))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn column(&self, j: usize) -> Vector {
        self.0.column(j).into_owned()
    }

    pub fn adjoint(&self) -> Mat {
        Mat(self.0.adjoint())
    }

    pub fn scale(&self, c: C64) -> Mat {
        Mat(&self.0 * c)
    }

    pub fn scale_real(&self, c: f64) -> Mat {
        Mat(self.0.map(|z| z * c))
    }

    /// `self * v` for a column vector.
    pub fn apply(&self, v: &Vector) -> Vector {
        &self.0 * v
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn same_shape(&self, other: &Mat) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(LabError::Dimension(format!(
                "{}x{} against {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(())
    }

    /// Matrix product with a shape check instead of a panic.
    pub fn compose(&self, rhs: &Mat) -> Result<Mat> {
        if self.cols() != rhs.rows() {
            return Err(LabError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(Mat(&self.0 * &rhs.0))
    }

    pub fn row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}", self.rows(), self.cols())?;
        f.debug_list()
            .entries((0..self.rows()).map(|i| {
                (0..self.cols())
                    .map(|j| self.0[(i, j)])
                    .collect::<Vec<_>>()
            }))
            .finish()
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Mat> for &Mat {
            type Output = Mat;
            fn $m(self, rhs: &Mat) -> Mat {
                Mat($tr::$m(&self.0, &rhs.0))
            }
        }
        impl $tr<Mat> for Mat {
            type Output = Mat;
            fn $m(self, rhs: Mat) -> Mat {
                Mat($tr::$m(self.0, rhs.0))
            }
        }
        impl $tr<&Mat> for Mat {
            type Output = Mat;
            fn $m(self, rhs: &Mat) -> Mat {
                Mat($tr::$m(self.0, &rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat(-self.0)
    }
}

/// Wire format: `{"rows": r, "cols": c, "re": [...], "im": [...]}` with
/// row-major entries.
#[derive(Serialize, Deserialize)]
struct MatDoc {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.row_major();
        MatDoc {
            rows: self.rows(),
            cols: self.cols(),
            re: entries.iter().map(|z| z.re).collect(),
            im: entries.iter().map(|z| z.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = MatDoc::deserialize(d)?;
        if doc.re.len() != doc.im.len() {
            return Err(serde::de::Error::custom(format!(
                "re has {} entries, im has {}",
                doc.re.len(),
                doc.im.len()
            )));
        }
        let entries = doc
            .re
            .iter()
            .zip(&doc.im)
            .map(|(&re, &im)| C64::new(re, im))
            .collect();
        Mat::new(doc.rows, doc.cols, entries).map_err(serde::de::Error::custom)
    }
}
