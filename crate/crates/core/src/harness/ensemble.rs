//! Seeded random matrices.
//!
//! The stream is ChaCha8 keyed through `seed_from_u64`; uniforms take the top
//! 53 bits of each `u64`, and complex Gaussians use Box–Muller on consecutive
//! pairs of uniforms. Everything is a pure function of the seed.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ComplexVector, ONE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    Ginibre,
    HaarUnitary,
    Hermitian,
    NilpotentJordan,
    ShiftedScaled,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 5] = [
        EnsembleKind::Ginibre,
        EnsembleKind::HaarUnitary,
        EnsembleKind::Hermitian,
        EnsembleKind::NilpotentJordan,
        EnsembleKind::ShiftedScaled,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EnsembleKind::Ginibre => "ginibre",
            EnsembleKind::HaarUnitary => "haar_unitary",
            EnsembleKind::Hermitian => "hermitian",
            EnsembleKind::NilpotentJordan => "nilpotent_jordan",
            EnsembleKind::ShiftedScaled => "shifted_scaled",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnsembleConfig {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub seed: u64,
}

/// Gaussian and uniform draws on a ChaCha8 stream.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard complex Gaussian, `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt() * core::f64::consts::FRAC_1_SQRT_2;
        Complex64::from_polar(r, TAU * u2)
    }

    pub fn ginibre(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn unit_vector(&mut self, dim: usize) -> ComplexVector {
        loop {
            let v = ComplexVector::new((0..dim).map(|_| self.complex_normal()).collect()).expect("finite");
            if let Some(u) = v.normalized() {
                return u;
            }
        }
    }
}

/// SplitMix64 finalizer; derives independent seeds from structured indices.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Columns of a Ginibre draw orthonormalized by twice-applied modified
/// Gram–Schmidt. The implied triangular factor has a positive diagonal, which
/// makes the distribution Haar.
fn haar_unitary(s: &mut Sampler, n: usize) -> ComplexMatrix {
    let g = s.ginibre(n, n);
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| g.get(i, j)).collect()).collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let d = proj * cols[k][i];
                    cols[j][i] -= d;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Deterministic matrix for `(kind, dim, seed)`.
pub fn gen_random(cfg: EnsembleConfig) -> Result<ComplexMatrix> {
    let n = cfg.dim;
    if n == 0 {
        return Err(Error::InvalidArgument("ensemble dimension must be positive"));
    }
    let mut s = Sampler::new(cfg.seed);
    Ok(match cfg.kind {
        EnsembleKind::Ginibre => s.ginibre(n, n),
        EnsembleKind::HaarUnitary => haar_unitary(&mut s, n),
        EnsembleKind::Hermitian => {
            let g = s.ginibre(n, n);
            ComplexMatrix::from_fn(n, n, |i, j| (g.get(i, j) + g.get(j, i).conj()) * 0.5)
        }
        EnsembleKind::NilpotentJordan => ComplexMatrix::from_fn(n, n, |i, j| if j == i + 1 { ONE } else { Complex64::new(0.0, 0.0) }),
        EnsembleKind::ShiftedScaled => {
            let alpha = Complex64::from_polar((2.0 * s.uniform() - 1.0).exp(), TAU * s.uniform());
            let beta = s.complex_normal() * 2.0;
            let g = s.ginibre(n, n);
            ComplexMatrix::from_fn(n, n, |i, j| alpha * g.get(i, j) + if i == j { beta } else { Complex64::new(0.0, 0.0) })
        }
    })
}
