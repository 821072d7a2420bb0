//! Dense complex matrices and vectors.
//!
//! Storage is row-major `Complex64`. All operations allocate a fresh result;
//! values are never mutated after construction through the public API.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative tolerance used to accept a matrix as Hermitian before symmetrizing.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Clone, PartialEq, Serialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    #[serde(serialize_with = "serialize_entries")]
    data: Vec<Complex64>,
}

fn serialize_entries<S: serde::Serializer>(
    data: &[Complex64],
    s: S,
) -> core::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(data.len()))?;
    for z in data {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Zero-sized shapes are allowed
    /// (they stand for the empty operator in direct sums).
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::EntryCount {
                rows,
                cols,
                actual: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Row-major real entries; convenience for tests and examples.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::RaggedRow {
                row: bad,
                expected: c,
                actual: rows[bad].len(),
            });
        }
        Self::from_vec(r, c, rows.iter().flat_map(|row| row.iter().copied()).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    pub fn scalar(z: Complex64) -> Self {
        Self {
            rows: 1,
            cols: 1,
            data: vec![z],
        }
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Entrywise multiplication by `e^{iθ}`.
    pub fn rotate(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        self.scale(phase)
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * alpha).collect(),
        }
    }

    pub fn scale_real(&self, alpha: f64) -> Self {
        self.scale(Complex64::new(alpha, 0.0))
    }

    fn zip_with(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; m * n];
        for i in 0..m {
            let out_row = &mut out[i * n..(i + 1) * n];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[p * n..(p + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            rows: m,
            cols: n,
            data: out,
        })
    }

    /// Block-diagonal concatenation `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let rows = self.rows + other.rows;
        let cols = self.cols + other.cols;
        Self::from_fn(rows, cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j)
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols)
            } else {
                ZERO
            }
        })
    }

    /// Cartesian decomposition `T = Re(T) + i Im(T)`.
    pub fn cartesian_parts(&self) -> Result<CartesianPair> {
        let n = self.require_square()?;
        let half = 0.5;
        let re = Self::from_fn(n, n, |i, j| (self.get(i, j) + self.get(j, i).conj()) * half);
        // (T - T*) / 2i = -i (T - T*) / 2
        let im = Self::from_fn(n, n, |i, j| {
            let d = self.get(i, j) - self.get(j, i).conj();
            Complex64::new(d.im, -d.re) * half
        });
        Ok(CartesianPair { re, im })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.rows.min(self.cols);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Accepts `self` as Hermitian when `‖H - H*‖_max ≤ 1e-10·‖H‖_max` and
    /// returns the exactly symmetrized copy.
    pub fn symmetrized(&self) -> Result<Self> {
        let n = self.require_square()?;
        let defect = self.hermitian_defect();
        let scale = self.max_abs();
        if defect > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { defect, scale });
        }
        Ok(Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(self.get(i, i).re, 0.0)
            } else {
                (self.get(i, j) + self.get(j, i).conj()) * 0.5
            }
        }))
    }

    /// `y = M x`.
    pub fn apply(&self, x: &ComplexVector) -> Result<ComplexVector> {
        if x.dim() != self.cols {
            return Err(Error::ShapeMismatch {
                op: "apply",
                left: self.shape(),
                right: (x.dim(), 1),
            });
        }
        let out = (0..self.rows)
            .map(|i| self.row(i).iter().zip(x.as_slice()).map(|(&a, &b)| a * b).sum())
            .collect();
        Ok(ComplexVector { entries: out })
    }

    /// Quadratic form `⟨M x, x⟩ = x* M x`.
    pub fn quadratic_form(&self, x: &ComplexVector) -> Result<Complex64> {
        let mx = self.apply(x)?;
        Ok(x.inner(&mx))
    }

    /// Copies the `rows × cols` block starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexVector {
    #[serde(serialize_with = "serialize_entries")]
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if let Some(pos) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: pos, col: 0 });
        }
        Ok(Self { entries })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut entries = vec![ZERO; dim];
        entries[k] = ONE;
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self, other⟩`-style pairing `self* other`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| Self {
            entries: self.entries.iter().map(|&z| z / n).collect(),
        })
    }
}

/// Hermitian real and imaginary parts of a square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CartesianPair {
    pub re: ComplexMatrix,
    pub im: ComplexMatrix,
}

impl CartesianPair {
    /// `re + i·im`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.re.rows();
        ComplexMatrix::from_fn(n, n, |i, j| self.re.get(i, j) + I * self.im.get(i, j))
    }

    /// `cos θ·re − sin θ·im`, which equals `Re(e^{iθ} T)`.
    pub fn rotated_re(&self, theta: f64) -> ComplexMatrix {
        let (s, c) = theta.sin_cos();
        self.combine(c, -s)
    }

    /// `sin θ·re + cos θ·im`, which equals `Im(e^{iθ} T)`.
    pub fn rotated_im(&self, theta: f64) -> ComplexMatrix {
        let (s, c) = theta.sin_cos();
        self.combine(s, c)
    }

    fn combine(&self, a: f64, b: f64) -> ComplexMatrix {
        let n = self.re.rows();
        let data = self
            .re
            .as_slice()
            .iter()
            .zip(self.im.as_slice())
            .map(|(&r, &m)| r * a + m * b)
            .collect();
        ComplexMatrix {
            rows: n,
            cols: n,
            data,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn shift() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(ComplexMatrix::identity(2).adjoint(), ComplexMatrix::identity(2));
        assert_eq!(
            shift().adjoint(),
            ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap()
        );
        assert_eq!(
            ComplexMatrix::scalar(I).adjoint(),
            ComplexMatrix::scalar(c(0.0, -1.0))
        );
    }

    #[test]
    fn cartesian_examples() {
        let d = ComplexMatrix::diag(&[I, ONE]);
        let p = d.cartesian_parts().unwrap();
        assert_eq!(p.re, ComplexMatrix::diag(&[ZERO, ONE]));
        assert_eq!(p.im, ComplexMatrix::diag(&[ONE, ZERO]));

        let p = shift().cartesian_parts().unwrap();
        assert_eq!(
            p.re,
            ComplexMatrix::from_real(2, 2, &[0.0, 0.5, 0.5, 0.0]).unwrap()
        );
        let expected_im = ComplexMatrix::from_vec(
            2,
            2,
            vec![ZERO, c(0.0, -0.5), c(0.0, 0.5), ZERO],
        )
        .unwrap();
        assert_eq!(p.im, expected_im);

        let h = ComplexMatrix::from_vec(2, 2, vec![c(2.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(-1.0, 0.0)])
            .unwrap();
        let p = h.cartesian_parts().unwrap();
        assert_eq!(p.re, h);
        assert!(p.im.is_zero());
        assert_eq!(p.reconstruct(), h);
    }

    #[test]
    fn cartesian_rejects_rectangular() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(m.cartesian_parts(), Err(Error::NotSquare { rows: 2, cols: 3 })));
    }

    #[test]
    fn rotate_examples() {
        let t = shift();
        assert_eq!(t.rotate(0.0), t);
        let r = ComplexMatrix::identity(2).rotate(core::f64::consts::PI);
        assert!((r.get(0, 0) - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((r.get(1, 1) - c(-1.0, 0.0)).norm() < 1e-15);
        let r = ComplexMatrix::scalar(ONE).rotate(core::f64::consts::FRAC_PI_2);
        assert!((r.get(0, 0) - I).norm() < 1e-15);
    }

    #[test]
    fn rotated_parts_match_rotation() {
        let t = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 2.0), c(-0.5, 0.3), c(0.7, -1.1), c(0.2, 0.0)])
            .unwrap();
        let p = t.cartesian_parts().unwrap();
        for &theta in &[0.3, 1.7, -2.2] {
            let direct = t.rotate(theta).cartesian_parts().unwrap();
            let re = p.rotated_re(theta);
            let im = p.rotated_im(theta);
            assert!(re.sub(&direct.re).unwrap().max_abs() < 1e-14);
            assert!(im.sub(&direct.im).unwrap().max_abs() < 1e-14);
        }
    }

    #[test]
    fn algebra_examples() {
        assert!(shift().matmul(&shift()).unwrap().is_zero());
        let d = ComplexMatrix::diag(&[I, ONE]);
        assert_eq!(
            d.matmul(&d).unwrap(),
            ComplexMatrix::diag(&[c(-1.0, 0.0), ONE])
        );
        let s = shift().direct_sum(&ComplexMatrix::scalar(ONE));
        assert_eq!(s.shape(), (3, 3));
        assert_eq!(s.get(0, 1), ONE);
        assert_eq!(s.get(2, 2), ONE);
        assert_eq!(s.get(1, 2), ZERO);
    }

    #[test]
    fn algebra_rejects_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        match a.matmul(&b) {
            Err(Error::ShapeMismatch { left, right, .. }) => {
                assert_eq!(left, (2, 3));
                assert_eq!(right, (2, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(a.add(&ComplexMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn rejects_non_finite_and_bad_length() {
        assert!(matches!(
            ComplexMatrix::from_vec(1, 2, vec![ONE, c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(matches!(
            ComplexMatrix::from_vec(2, 2, vec![ONE]),
            Err(Error::EntryCount { actual: 1, .. })
        ));
    }

    #[test]
    fn symmetrize_tolerance() {
        let mut h = ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.5, 0.0]).unwrap();
        h.data_mut()[1] += c(1e-13, 0.0);
        let s = h.symmetrized().unwrap();
        assert_eq!(s.hermitian_defect(), 0.0);
        assert!(shift().symmetrized().is_err());
    }
}
