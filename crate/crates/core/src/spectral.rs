//! Operator norm, minimum norm and spectral radius.

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::certified::CertifiedValue;
use crate::eigen::{decompose, eigenvalues};
use crate::error::Result;
use crate::matrix::ComplexMatrix;

/// Absolute accuracy claimed for the spectral radius, relative to `‖M‖_F`.
pub const SPECTRAL_RADIUS_TOL: f64 = 1e-9;

/// Gram matrix `M*M` (when `adjoint_first`) or `MM*`, exactly Hermitian.
fn gram(m: &ComplexMatrix, adjoint_first: bool) -> ComplexMatrix {
    let (n, len) = if adjoint_first {
        (m.cols(), m.rows())
    } else {
        (m.rows(), m.cols())
    };
    // column i of the factor whose Gram matrix is formed
    let entry = |k: usize, i: usize| {
        if adjoint_first {
            m.get(k, i)
        } else {
            m.get(i, k).conj()
        }
    };
    let mut g = ComplexMatrix::zeros(n, n);
    let data = g.data_mut();
    for i in 0..n {
        for j in i..n {
            let z: Complex64 = (0..len).map(|k| entry(k, i).conj() * entry(k, j)).sum();
            if i == j {
                data[i * n + i] = Complex64::new(z.re, 0.0);
            } else {
                data[i * n + j] = z;
                data[j * n + i] = z.conj();
            }
        }
    }
    g
}

/// Absolute error budget on eigenvalues of a Gram matrix of `m`.
fn gram_slack(m: &ComplexMatrix) -> f64 {
    let n = m.rows().max(m.cols()) as f64;
    let f = m.frobenius_norm();
    4.0 * (n + 8.0) * f64::EPSILON * f * f
}

/// Largest singular value.
pub fn op_norm(m: &ComplexMatrix) -> CertifiedValue {
    if m.is_empty() || m.is_zero() {
        return CertifiedValue::exact(0.0);
    }
    let g = gram(m, m.cols() <= m.rows());
    let eig = decompose(&g);
    let lambda = eig.values[eig.values.len() - 1].max(0.0);
    let delta = gram_slack(m);
    let value = lambda.sqrt();
    CertifiedValue::enclosed(value, (lambda - delta).max(0.0).sqrt().min(value), (lambda + delta).sqrt())
}

/// Smallest singular value of the map `x ↦ Mx`; zero when `rows < cols`.
pub fn min_norm(m: &ComplexMatrix) -> CertifiedValue {
    if m.is_empty() || m.rows() < m.cols() || m.is_zero() {
        return CertifiedValue::exact(0.0);
    }
    let g = gram(m, true);
    let eig = decompose(&g);
    let lambda = eig.values[0].max(0.0);
    let delta = gram_slack(m);
    let value = lambda.sqrt();
    CertifiedValue::enclosed(value, (lambda - delta).max(0.0).sqrt().min(value), (lambda + delta).sqrt())
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &ComplexMatrix) -> Result<CertifiedValue> {
    m.require_square()?;
    if m.is_empty() || m.is_zero() {
        return Ok(CertifiedValue::exact(0.0));
    }
    let ev = eigenvalues(m)?;
    let r = ev.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !ev.converged {
        let upper = op_norm(m).upper.max(r);
        return Ok(CertifiedValue::enclosed(r, 0.0, upper));
    }
    let delta = SPECTRAL_RADIUS_TOL * m.frobenius_norm();
    Ok(CertifiedValue::enclosed(r, (r - delta).max(0.0), r + delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{I, ONE, ZERO};

    fn shift() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn gram_is_adjoint_times_self() {
        let m = ComplexMatrix::from_vec(
            3,
            2,
            alloc::vec![
                Complex64::new(1.0, 2.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(3.0, 0.5),
                Complex64::new(-2.0, 1.0),
                Complex64::new(0.1, 0.0),
                Complex64::new(0.0, 0.7),
            ],
        )
        .unwrap();
        let direct = m.adjoint().matmul(&m).unwrap();
        assert!(gram(&m, true).sub(&direct).unwrap().max_abs() < 1e-14);
        let direct = m.matmul(&m.adjoint()).unwrap();
        assert!(gram(&m, false).sub(&direct).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn op_norm_examples() {
        let n = op_norm(&shift());
        assert!((n.value - 1.0).abs() < 1e-15);
        assert!(n.lower <= 1.0 && 1.0 <= n.upper);
        assert!(n.width() <= 1e-10);
        assert!((op_norm(&ComplexMatrix::diag(&[I, ONE])).value - 1.0).abs() < 1e-15);
        let r = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 0.0]).unwrap();
        let n = op_norm(&r);
        assert!((n.value - 5f64.sqrt()).abs() < 1e-14);
        assert!(n.width() / n.value <= 1e-10);
    }

    #[test]
    fn min_norm_examples() {
        assert!((min_norm(&ComplexMatrix::identity(2)).value - 1.0).abs() < 1e-15);
        assert_eq!(min_norm(&shift()).value, 0.0);
        assert!((min_norm(&ComplexMatrix::diag(&[I, ONE])).value - 1.0).abs() < 1e-15);
        assert_eq!(min_norm(&ComplexMatrix::zeros(2, 3)).value, 0.0);
        let wide = ComplexMatrix::from_real(1, 2, &[1.0, 1.0]).unwrap();
        assert_eq!(min_norm(&wide).value, 0.0);
    }

    #[test]
    fn spectral_radius_examples() {
        assert_eq!(spectral_radius(&shift()).unwrap().value, 0.0);
        assert!((spectral_radius(&ComplexMatrix::diag(&[I, ONE])).unwrap().value - 1.0).abs() < 1e-15);
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 3.0, 1.0]).unwrap();
        let r = spectral_radius(&m).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9 * m.frobenius_norm());
        assert!(spectral_radius(&ComplexMatrix::zeros(2, 3)).is_err());
        assert_eq!(spectral_radius(&ComplexMatrix::diag(&[ZERO])).unwrap().value, 0.0);
    }
}
