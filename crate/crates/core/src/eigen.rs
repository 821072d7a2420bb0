//! Eigen solvers.
//!
//! * Hermitian matrices: Householder reduction to a real symmetric
//!   tridiagonal matrix (after a diagonal phase change) and implicit QL with
//!   Wilkinson shifts. Cyclic Jacobi with a fixed (row-by-row) pivot order,
//!   iterated until the off-diagonal Frobenius mass is at most
//!   `1e-14·‖H‖_F`, is the fallback when QL does not converge.
//! * General square matrices: Householder reduction to Hessenberg form
//!   followed by single-shift complex QR (Wilkinson shift, exceptional shift
//!   every tenth iteration on a stalled window). Only eigenvalues are
//!   produced.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::Result;
use crate::matrix::{ComplexMatrix, ComplexVector, ONE, ZERO};

const JACOBI_REL_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Full eigen-decomposition of a Hermitian matrix, ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
    /// Jacobi sweeps or QL iterations spent.
    pub sweeps: usize,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> ComplexVector {
        let n = self.vectors.rows();
        ComplexVector::new((0..n).map(|i| self.vectors.get(i, k)).collect())
            .expect("eigenvectors are finite")
    }
}

/// Extremal eigenpairs of a Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenExtremes {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub v_min: ComplexVector,
    pub v_max: ComplexVector,
}

/// Validates (within the Hermitian tolerance), symmetrizes, and decomposes.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let sym = h.symmetrized()?;
    Ok(decompose(&sym))
}

pub fn hermitian_extremes(h: &ComplexMatrix) -> Result<EigenExtremes> {
    let eig = hermitian_eigen(h)?;
    Ok(extremes_of(&eig))
}

pub(crate) fn extremes_of(eig: &HermitianEigen) -> EigenExtremes {
    let last = eig.values.len() - 1;
    EigenExtremes {
        lambda_min: eig.values[0],
        lambda_max: eig.values[last],
        v_min: eig.vector(0),
        v_max: eig.vector(last),
    }
}

/// Eigen-decomposition of an exactly Hermitian matrix.
pub(crate) fn decompose(h: &ComplexMatrix) -> HermitianEigen {
    tridiagonal_ql(h).unwrap_or_else(|| jacobi_hermitian(h))
}

const QL_MAX_ITERATIONS: usize = 60;

/// Householder tridiagonalization plus implicit QL; `None` if some
/// eigenvalue needs more than `QL_MAX_ITERATIONS` iterations.
pub(crate) fn tridiagonal_ql(h: &ComplexMatrix) -> Option<HermitianEigen> {
    let n = h.rows();
    let mut a: Vec<Complex64> = h.as_slice().to_vec();
    // q accumulates the reflectors: H = Q T Q*
    let mut q = vec![ZERO; n * n];
    for i in 0..n {
        q[i * n + i] = ONE;
    }
    let mut u = vec![ZERO; n];
    let mut p = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let norm = (lo..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        let tail = (lo + 1..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>();
        if tail == 0.0 {
            continue;
        }
        let x0 = a[lo * n + k];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * norm;
        for i in lo..n {
            u[i] = a[i * n + k];
        }
        u[lo] -= alpha;
        let uu: f64 = (lo..n).map(|i| u[i].norm_sqr()).sum();
        let tau = 2.0 / uu;
        // p = τ A u on the trailing block
        for i in lo..n {
            let mut acc = ZERO;
            for j in lo..n {
                acc += a[i * n + j] * u[j];
            }
            p[i] = acc * tau;
        }
        let up: Complex64 = (lo..n).map(|i| u[i].conj() * p[i]).sum();
        let kk = up * (0.5 * tau);
        for i in lo..n {
            p[i] -= kk * u[i];
        }
        for i in lo..n {
            for j in lo..n {
                a[i * n + j] -= u[i] * p[j].conj() + p[i] * u[j].conj();
            }
        }
        a[lo * n + k] = alpha;
        a[k * n + lo] = alpha.conj();
        for i in lo + 1..n {
            a[i * n + k] = ZERO;
            a[k * n + i] = ZERO;
        }
        // Q ← Q (I − τ u u*)
        for r in 0..n {
            let mut acc = ZERO;
            for j in lo..n {
                acc += q[r * n + j] * u[j];
            }
            let acc = acc * tau;
            for j in lo..n {
                q[r * n + j] -= acc * u[j].conj();
            }
        }
    }

    // phases making the off-diagonal real and nonnegative
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut e = vec![0.0; n];
    let mut phi = vec![ONE; n];
    for k in 0..n.saturating_sub(1) {
        let sub = a[(k + 1) * n + k];
        e[k] = sub.norm();
        phi[k + 1] = if e[k] > 0.0 { phi[k] * (sub / e[k]) } else { phi[k] };
    }

    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    let mut iterations = 0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            iterations += 1;
            if iter > QL_MAX_ITERATIONS {
                return None;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut pp) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= pp;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - pp;
                r = (d[i] - g) * s + 2.0 * c * b;
                pp = s * r;
                d[i + 1] = g + pp;
                g = c * r - b;
                for row in 0..n {
                    let f = z[row * n + i + 1];
                    z[row * n + i + 1] = s * z[row * n + i] + c * f;
                    z[row * n + i] = c * z[row * n + i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= pp;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| d[i]).collect();
    // eigenvectors Q·diag(φ)·Z
    let qp: Vec<Complex64> = (0..n * n).map(|ij| q[ij] * phi[ij % n]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| {
        let col = order[k];
        (0..n).map(|j| qp[i * n + j] * z[j * n + col]).sum()
    });
    Some(HermitianEigen {
        values,
        vectors,
        sweeps: iterations,
    })
}

/// Cyclic Jacobi on a matrix that is already exactly Hermitian.
pub(crate) fn jacobi_hermitian(h: &ComplexMatrix) -> HermitianEigen {
    let n = h.rows();
    let mut a: Vec<Complex64> = h.as_slice().to_vec();
    let mut v = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = ONE;
    }
    let total = h.frobenius_norm();
    let threshold = JACOBI_REL_TOL * total;
    let mut sweeps = 0;

    while sweeps < JACOBI_MAX_SWEEPS {
        let off = off_diagonal_mass(&a, n);
        if off <= threshold || off == 0.0 {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let abs = apq.norm();
                if abs == 0.0 {
                    continue;
                }
                if abs <= 1e-18 * total {
                    a[p * n + q] = ZERO;
                    a[q * n + p] = ZERO;
                    continue;
                }
                rotate(&mut a, &mut v, n, p, q, apq, abs);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[i * n + order[k]]);
    HermitianEigen {
        values,
        vectors,
        sweeps,
    }
}

fn off_diagonal_mass(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Applies `A ← G* A G`, `V ← V G` with `G = diag(1, e^{-iφ}) R(c, s)` chosen
/// so that the `(p, q)` entry vanishes.
#[inline]
fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize, apq: Complex64, abs: f64) {
    let phase = apq / abs;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let sp = phase.conj() * s; // s e^{-iφ}
    let cp = phase.conj() * c; // c e^{-iφ}

    for k in 0..n {
        let x = a[k * n + p];
        let y = a[k * n + q];
        a[k * n + p] = x * c - y * sp;
        a[k * n + q] = x * s + y * cp;
    }
    let sp_c = sp.conj();
    let cp_c = cp.conj();
    for k in 0..n {
        let x = a[p * n + k];
        let y = a[q * n + k];
        a[p * n + k] = x * c - y * sp_c;
        a[q * n + k] = x * s + y * cp_c;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = Complex64::new(app - t * abs, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * abs, 0.0);
    for k in 0..n {
        let x = v[k * n + p];
        let y = v[k * n + q];
        v[k * n + p] = x * c - y * sp;
        v[k * n + q] = x * s + y * cp;
    }
}

/// Outcome of the Hessenberg QR eigenvalue iteration.
#[derive(Clone, Debug)]
pub struct GeneralEigenvalues {
    pub values: Vec<Complex64>,
    /// False when the iteration cap was hit; `values` then holds the diagonal
    /// of the partially reduced matrix.
    pub converged: bool,
}

/// Eigenvalues of a general square matrix.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<GeneralEigenvalues> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(GeneralEigenvalues {
            values: Vec::new(),
            converged: true,
        });
    }
    let mut h = m.as_slice().to_vec();
    hessenberg_in_place(&mut h, n);
    let converged = hessenberg_qr(&mut h, n);
    Ok(GeneralEigenvalues {
        values: (0..n).map(|i| h[i * n + i]).collect(),
        converged,
    })
}

fn hessenberg_in_place(h: &mut [Complex64], n: usize) {
    let mut v = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let norm = ((k + 1)..n).map(|i| h[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1) * n + k];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * norm;
        for i in 0..n {
            v[i] = if i > k { h[i * n + k] } else { ZERO };
        }
        v[k + 1] -= alpha;
        let vnorm2: f64 = v[(k + 1)..].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // H ← (I − β v v*) H
        for j in k..n {
            let dot: Complex64 = ((k + 1)..n).map(|i| v[i].conj() * h[i * n + j]).sum();
            let f = dot * beta;
            for i in (k + 1)..n {
                h[i * n + j] -= v[i] * f;
            }
        }
        // H ← H (I − β v v*)
        for i in 0..n {
            let dot: Complex64 = ((k + 1)..n).map(|j| h[i * n + j] * v[j]).sum();
            let f = dot * beta;
            for j in (k + 1)..n {
                h[i * n + j] -= f * v[j].conj();
            }
        }
        for i in (k + 2)..n {
            h[i * n + k] = ZERO;
        }
    }
}

/// Returns `[c, s]` with `c` real such that
/// `[[c, s], [-s̄, c]]·[a; b] = [r; 0]`.
#[inline]
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, ONE);
    }
    let rho = na.hypot(nb);
    let c = na / rho;
    let s = (a / na) * b.conj() / rho;
    (c, s)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let mu1 = mean + disc;
    let mu2 = mean - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

fn hessenberg_qr(h: &mut [Complex64], n: usize) -> bool {
    let eps = f64::EPSILON;
    let norm = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return true;
    }
    let max_total = 100 * n.max(2);
    let mut total = 0;
    let mut iter = 0;
    let mut hi = n - 1;
    let mut rot: Vec<(f64, Complex64)> = vec![(1.0, ZERO); n];

    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1) * n + (l - 1)].norm() + h[l * n + l].norm();
            if s == 0.0 {
                s = norm;
            }
            if h[l * n + (l - 1)].norm() <= eps * s {
                h[l * n + (l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_total {
            return false;
        }

        let mu = if iter % 10 == 0 {
            let mut bump = h[hi * n + (hi - 1)].re.abs();
            if hi >= 2 {
                bump += h[(hi - 1) * n + (hi - 2)].re.abs();
            }
            h[hi * n + hi] + Complex64::new(bump, 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1) * n + (hi - 1)],
                h[(hi - 1) * n + hi],
                h[hi * n + (hi - 1)],
                h[hi * n + hi],
            )
        };

        for k in l..=hi {
            h[k * n + k] -= mu;
        }
        for k in l..hi {
            let (c, s) = givens(h[k * n + k], h[(k + 1) * n + k]);
            rot[k] = (c, s);
            for j in k..=hi {
                let x = h[k * n + j];
                let y = h[(k + 1) * n + j];
                h[k * n + j] = x * c + s * y;
                h[(k + 1) * n + j] = -s.conj() * x + y * c;
            }
        }
        for k in l..hi {
            let (c, s) = rot[k];
            let last = (k + 2).min(hi);
            for i in l..=last {
                let x = h[i * n + k];
                let y = h[i * n + k + 1];
                h[i * n + k] = x * c + s.conj() * y;
                h[i * n + k + 1] = -s * x + y * c;
            }
        }
        for k in l..=hi {
            h[k * n + k] += mu;
        }
    }
    true
}
