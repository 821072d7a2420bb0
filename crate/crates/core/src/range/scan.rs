//! Branch-and-bound over the support function of the numerical range.
//!
//! For `H(θ) = Re(e^{iθ}T)` the functions `f(θ) = λ_max(H(θ))` and
//! `g(θ) = λ_min(H(θ))` are the upper and lower support functions of `W(T)`:
//! `f(θ) = max_{z∈W} Re(e^{iθ}z)` and `g(θ) = min_{z∈W} Re(e^{iθ}z)`.
//! `max f = w(T)` and `max(0, max g) = m(T)`.
//!
//! Interval certificates:
//!
//! * By convexity of `W`, `f` on `[a, b]` (with `b − a < π`) is bounded by the support in direction
//!   `θ` of the apex of the wedge `{Re(e^{ia}z) ≤ f(a), Re(e^{ib}z) ≤ f(b)}`.
//! * `g` on `[a, b]` is bounded by `min(Re(e^{iθ}q_a), Re(e^{iθ}q_b))` where
//!   `q_a, q_b ∈ W` are the Rayleigh points of the bottom eigenvectors.
//! * Both are `‖T‖`-Lipschitz, giving `(v_a + v_b)/2 + ‖T‖(b − a)/2`.
//! * `f` near a sample `θ` is bounded through the exact identity
//!   `H(θ+δ) = cos δ·H(θ) + sin δ·H(θ+π/2)` and a Schur complement on the top
//!   eigenvalue cluster; see [`curvature_bound`]. Its error is fourth order
//!   in `δ`, which matters when `f` is flat (disk-shaped ranges).
//!
//! Each certificate is padded by the eigen-solver error budget.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::eigen::{decompose, HermitianEigen};
use crate::matrix::{CartesianPair, ComplexMatrix, ComplexVector};

pub const INITIAL_INTERVALS: usize = 64;
pub const MAX_EIGENSOLVES: usize = 1_000_000;

/// Which Cartesian part the scan rotates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanPart {
    /// `H(θ) = Re(e^{iθ}T)`
    Re,
    /// `H(θ) = Im(e^{iθ}T)`, evaluated at `θ + π/2` so both parts describe the
    /// same support function.
    Im,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Objective {
    /// maximize `f`; lower bounds come from `|⟨Tx, x⟩|` of top eigenvectors
    Radius,
    /// maximize `g`
    Bottom,
}

#[derive(Clone, Debug)]
pub(crate) struct Sample {
    pub theta: f64,
    pub top: f64,
    pub bottom: f64,
    pub top_point: Complex64,
    pub bottom_point: Complex64,
    pub expansion: Expansion,
}

/// Local data for `f` at a sample, in the eigenbasis `v_0, v_1, …` of
/// `H(θ)` ordered by decreasing eigenvalue: `cross[k·width + j] = v_k* G v_j`
/// with `G = H(θ+π/2)`, for the leading `width` eigenvectors.
#[derive(Clone, Debug, Default)]
pub(crate) struct Expansion {
    pub values: Vec<f64>,
    pub width: usize,
    pub cross: Vec<Complex64>,
}

/// Largest top cluster the local certificate will isolate.
const MAX_CLUSTER: usize = 6;
/// Up to this dimension the whole of `G` in the eigenbasis is kept, which
/// lets a simple top eigenvalue use the fourth-order certificate.
const FULL_EXPANSION_DIM: usize = 16;
/// Chords per half-interval when the top cluster has several eigenvalues.
const CHORDS: usize = 16;

pub(crate) struct Evaluator<'a> {
    t: &'a ComplexMatrix,
    parts: CartesianPair,
    part: ScanPart,
}

impl<'a> Evaluator<'a> {
    pub fn new(t: &'a ComplexMatrix, part: ScanPart) -> Self {
        let parts = t.cartesian_parts().expect("square matrix");
        Self { t, parts, part }
    }

    pub fn hermitian_at(&self, theta: f64) -> ComplexMatrix {
        match self.part {
            ScanPart::Re => self.parts.rotated_re(theta),
            ScanPart::Im => self.parts.rotated_im(theta + PI / 2.0),
        }
    }

    pub fn eigen_at(&self, theta: f64) -> HermitianEigen {
        decompose(&self.hermitian_at(theta))
    }

    pub fn rayleigh(&self, x: &ComplexVector) -> Complex64 {
        self.t.quadratic_form(x).expect("conformable")
    }

    pub fn sample(&self, theta: f64) -> Sample {
        let eig = self.eigen_at(theta);
        let n = eig.values.len();
        let top_v = eig.vector(n - 1);
        let bottom_v = eig.vector(0);
        let g = self.hermitian_at(theta + PI / 2.0);
        let width = if n <= FULL_EXPANSION_DIM { n } else { MAX_CLUSTER };
        let basis: Vec<ComplexVector> = (0..n).map(|k| eig.vector(n - 1 - k)).collect();
        let images: Vec<ComplexVector> = basis[..width].iter().map(|v| g.apply(v).expect("conformable")).collect();
        let mut cross = Vec::with_capacity(n * width);
        for v in &basis {
            cross.extend(images.iter().map(|gv| v.inner(gv)));
        }
        let expansion = Expansion {
            values: eig.values.iter().rev().copied().collect(),
            width,
            cross,
        };
        Sample {
            theta,
            top: eig.values[n - 1],
            bottom: eig.values[0],
            top_point: self.rayleigh(&top_v),
            bottom_point: self.rayleigh(&bottom_v),
            expansion,
        }
    }
}

/// `Re(e^{iθ} z)`.
#[inline]
pub(crate) fn directional(z: Complex64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    z.re * c - z.im * s
}

/// Reduces an angle to `[0, 2π)`.
#[inline]
pub(crate) fn wrap(theta: f64) -> f64 {
    let r = theta % TAU;
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

/// Upper bound on `f` over `[a, a + h]` from the wedge apex.
pub(crate) fn wedge_bound(fa: f64, fb: f64, h: f64) -> f64 {
    if h >= PI {
        return f64::INFINITY;
    }
    let sh = h.sin();
    let half = (h / 2.0).sin();
    // apex u in the frame rotated by e^{ia}: Re(u) = fa, Re(e^{ih}u) = fb
    let ux = fa;
    let uy = ((fa - fb) - 2.0 * half * half * fa) / sh;
    let u = Complex64::new(ux, uy);
    let peak = wrap(-u.im.atan2(u.re));
    if u.norm() > 0.0 && peak <= h {
        u.norm()
    } else {
        fa.max(fb)
    }
}

/// Upper bound on `g` over `[a, a + h]` from two points of `W` expressed in
/// the frame rotated by `e^{ia}`.
pub(crate) fn points_bound(qa: Complex64, qb: Complex64, h: f64) -> f64 {
    let env = |phi: f64| directional(qa, phi).min(directional(qb, phi));
    let mut best = env(0.0).max(env(h));
    let d = qa - qb;
    let mut candidates: [f64; 4] = [f64::NAN; 4];
    if d.norm() > 0.0 {
        let base = -d.im.atan2(d.re);
        candidates[0] = base + PI / 2.0;
        candidates[1] = base - PI / 2.0;
    }
    if qa.norm() > 0.0 {
        candidates[2] = -qa.im.atan2(qa.re);
    }
    if qb.norm() > 0.0 {
        candidates[3] = -qb.im.atan2(qb.re);
    }
    for phi in candidates.into_iter().filter(|p| !p.is_nan()) {
        let phi = wrap(phi);
        if phi <= h {
            best = best.max(env(phi));
        }
    }
    best
}

/// Upper bound on `f(θ+δ)` for `δ` between 0 and `reach` (either sign),
/// valid wherever `f(θ+δ) ≥ floor`; returns `floor` where that is the larger.
/// `gamma` bounds `‖H(θ+π/2)‖`.
///
/// Split the eigenbasis of `H(θ)` into a top cluster `Q` (size `p`) and the
/// rest `R`, and let `E = diag(floor − λ_k⁺)` on `R` with
/// `λ_k⁺ = max(λ_k, λ_k cos δ)`. With `s = sin δ`, `G = H(θ+π/2)` and
/// `μ ≥ floor` an eigenvalue of `H(θ+δ) = cos δ·H(θ) + s·G`, the Schur
/// complement on `Q` gives `μ ≤ λ_max(cos δ·Λ_Q + s·G_QQ + s²·G_QR(E − sG_RR)⁻¹G_RQ)`.
/// Expanding `(E − sG_RR)⁻¹` one term past `E⁻¹` with a norm bound on the
/// remainder, and `cos δ ≤ 1 − s²/2`, leaves
/// `λ₁(1 − t²/2) + λ_max(D ± tB + t²M₀ ± t³M₁ + t⁴ρM₀)` for `t = |s|`.
/// A simple top eigenvalue gives a scalar quartic. For a cluster, the
/// matrix term minus `m·t²` is convex in `t`, so chords bound it.
pub(crate) fn curvature_bound(e: &Expansion, reach: f64, floor: f64, gamma: f64) -> Option<f64> {
    let h = reach.abs();
    let n = e.values.len();
    let lead = *e.values.first()?;
    if lead < 0.0 || h >= PI / 2.0 || !floor.is_finite() {
        return None;
    }
    let (sh, ch) = h.sin_cos();
    let raised = |l: f64| l.max(l * ch);
    // smallest cluster leaving a wide enough gap to the rest
    let p = (1..=e.width).find(|&p| p == n || floor - raised(e.values[p]) >= 3.0 * sh * gamma)?;
    let ratio = if p == n { 0.0 } else { gamma / (floor - raised(e.values[p])) };
    let q = sh * ratio;
    let full = e.width == n;
    let sign = if reach < 0.0 { -1.0 } else { 1.0 };
    let at = |k: usize, j: usize| e.cross[k * e.width + j];
    let inv: Vec<f64> = (p..n).map(|k| 1.0 / (floor - raised(e.values[k]))).collect();

    // M₀ (scaled by 1/(1 − q) when the remainder is not expanded) and M₁
    let scale0 = if full { 1.0 } else { 1.0 / (1.0 - q) };
    let m0 = hermitian(p, |i, j| {
        (p..n).map(|k| at(k, i).conj() * at(k, j) * inv[k - p]).sum::<Complex64>() * scale0
    });
    let m1 = hermitian(p, |i, j| {
        if !full {
            return ZERO_C;
        }
        let mut acc = ZERO_C;
        for k in p..n {
            let yk = at(k, i) * inv[k - p];
            let row: Complex64 = (p..n).map(|l| at(k, l) * at(l, j) * inv[l - p]).sum();
            acc += yk.conj() * row;
        }
        acc
    });
    let rho = if full { ratio * ratio / (1.0 - q) } else { 0.0 };

    if p == 1 {
        let m0 = m0.get(0, 0).re;
        let poly = [lead, sign * at(0, 0).re, m0 - 0.5 * lead, sign * m1.get(0, 0).re, rho * m0];
        return Some(quartic_max(&poly, sh).max(floor));
    }

    // convexity margin: X'' ⪰ 2(1 − 3q)M₀ when the remainder is expanded
    let floor_m0 = decompose(&m0).values[0].max(0.0);
    let m = if full { (1.0 - 3.0 * q) * floor_m0 } else { floor_m0 };
    let chord_at = |t: f64| -> f64 {
        let x = hermitian(p, |i, j| {
            let d = if i == j { -ch * (lead - e.values[i]) } else { 0.0 };
            at(i, j) * (sign * t)
                + m0.get(i, j) * (t * t + rho * t * t * t * t)
                + m1.get(i, j) * (sign * t * t * t)
                + d
        });
        decompose(&x).values[p - 1] - m * t * t
    };
    let mut bound = floor;
    let step = sh / CHORDS as f64;
    let mut prev = chord_at(0.0);
    for i in 0..CHORDS {
        let t0 = step * i as f64;
        let next = chord_at(t0 + step);
        // on t0 + u: λ₁(1 − t²/2) + m·t² + prev + (next − prev)·u/step
        let slope = (next - prev) / step;
        let c0 = lead * (1.0 - 0.5 * t0 * t0) + m * t0 * t0 + prev;
        let c1 = (2.0 * m - lead) * t0 + slope;
        bound = bound.max(quadratic_max(c0, c1, m - 0.5 * lead, step));
        prev = next;
    }
    Some(bound)
}

/// `p×p` Hermitian matrix from its upper triangle.
fn hermitian(p: usize, entry: impl Fn(usize, usize) -> Complex64) -> ComplexMatrix {
    let upper: Vec<Complex64> = (0..p * p)
        .map(|ij| {
            let (i, j) = (ij / p, ij % p);
            if i <= j {
                entry(i, j)
            } else {
                ZERO_C
            }
        })
        .collect();
    ComplexMatrix::from_fn(p, p, |i, j| match i.cmp(&j) {
        Ordering::Less => upper[i * p + j],
        Ordering::Equal => Complex64::new(upper[i * p + i].re, 0.0),
        Ordering::Greater => upper[j * p + i].conj(),
    })
}

const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);

/// `max_{0≤t≤r} Σ c_k t^k` for a quartic: endpoints and the critical points,
/// found by bisection on the pieces where the derivative is monotone.
fn quartic_max(c: &[f64; 5], r: f64) -> f64 {
    let p = |t: f64| c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * c[4])));
    let dp = |t: f64| c[1] + t * (2.0 * c[2] + t * (3.0 * c[3] + t * 4.0 * c[4]));
    // roots of p'' = 2c2 + 6c3 t + 12c4 t²
    let mut cuts = Vec::with_capacity(4);
    cuts.push(0.0);
    let (qa, qb, qc) = (12.0 * c[4], 6.0 * c[3], 2.0 * c[2]);
    if qa != 0.0 {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            cuts.push((-qb - sq) / (2.0 * qa));
            cuts.push((-qb + sq) / (2.0 * qa));
        }
    } else if qb != 0.0 {
        cuts.push(-qc / qb);
    }
    cuts.push(r);
    cuts.retain(|t| (0.0..=r).contains(t));
    cuts.sort_by(f64::total_cmp);
    let mut m = p(0.0).max(p(r));
    for w in cuts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (dp(lo), dp(hi));
        if flo > 0.0 && fhi < 0.0 {
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if dp(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            m = m.max(p(lo)).max(p(hi));
        }
    }
    m
}

/// `max_{0≤t≤r} c0 + c1 t + c2 t²`.
fn quadratic_max(c0: f64, c1: f64, c2: f64, r: f64) -> f64 {
    let p = |t: f64| c0 + t * (c1 + c2 * t);
    let mut m = p(0.0).max(p(r));
    if c2 < 0.0 {
        let t = -c1 / (2.0 * c2);
        if t > 0.0 && t < r {
            m = m.max(p(t));
        }
    }
    m
}

#[derive(Clone, Copy, Debug)]
struct Node {
    upper: f64,
    a: usize,
    b: usize,
    ta: f64,
    tb: f64,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper
            .total_cmp(&other.upper)
            .then_with(|| other.ta.total_cmp(&self.ta))
    }
}

/// Result of a branch-and-bound run.
#[derive(Clone, Debug)]
pub(crate) struct ScanOutcome {
    pub samples: Vec<Sample>,
    /// Best attained objective value (uncorrected).
    pub best: f64,
    /// Certified upper bound on the objective maximum.
    pub upper: f64,
}

pub(crate) struct BranchAndBound<'a> {
    pub eval: &'a Evaluator<'a>,
    pub objective: Objective,
    /// Lipschitz constant (an upper bound on `‖T‖`).
    pub lipschitz: f64,
    /// Additive padding on every interval certificate.
    pub slack: f64,
    pub max_evals: usize,
}

impl BranchAndBound<'_> {
    fn attained(&self, s: &Sample) -> f64 {
        match self.objective {
            Objective::Radius => s.top_point.norm().max(s.top),
            Objective::Bottom => s.bottom,
        }
    }

    fn node(&self, samples: &[Sample], a: usize, b: usize, ta: f64, tb: f64, best: f64) -> Node {
        let (sa, sb) = (&samples[a], &samples[b]);
        let h = tb - ta;
        let upper = match self.objective {
            Objective::Radius => {
                let geo = wedge_bound(sa.top, sb.top, h);
                let lip = 0.5 * (sa.top + sb.top) + 0.5 * self.lipschitz * h;
                let left = curvature_bound(&sa.expansion, 0.5 * h, best, self.lipschitz);
                let right = curvature_bound(&sb.expansion, -0.5 * h, best, self.lipschitz);
                let local = match (left, right) {
                    (Some(l), Some(r)) => l.max(r),
                    _ => f64::INFINITY,
                };
                geo.min(lip).min(local)
            }
            Objective::Bottom => {
                let rot = Complex64::from_polar(1.0, ta);
                let geo = points_bound(sa.bottom_point * rot, sb.bottom_point * rot, h);
                let lip = 0.5 * (sa.bottom + sb.bottom) + 0.5 * self.lipschitz * h;
                geo.min(lip)
            }
        };
        Node {
            upper: upper + self.slack,
            a,
            b,
            ta,
            tb,
        }
    }

    /// Refines until `stop(best, upper)` holds or the evaluation cap is hit.
    pub fn run(&self, mut stop: impl FnMut(f64, f64) -> bool) -> ScanOutcome {
        let mut samples: Vec<Sample> = Vec::new();
        let mut best = f64::NEG_INFINITY;
        let step = TAU / INITIAL_INTERVALS as f64;
        for k in 0..INITIAL_INTERVALS {
            let s = self.eval.sample(k as f64 * step);
            best = best.max(self.attained(&s));
            samples.push(s);
        }
        let mut heap = BinaryHeap::with_capacity(4 * INITIAL_INTERVALS);
        for k in 0..INITIAL_INTERVALS {
            let next = (k + 1) % INITIAL_INTERVALS;
            let ta = k as f64 * step;
            let tb = if next == 0 { TAU } else { next as f64 * step };
            heap.push(self.node(&samples, k, next, ta, tb, best));
        }

        let mut evals = INITIAL_INTERVALS;
        loop {
            let top = heap.peek().map_or(f64::NEG_INFINITY, |n| n.upper);
            let upper = top.max(best);
            if stop(best, upper) {
                break;
            }
            if evals >= self.max_evals {
                break;
            }
            let node = heap.pop().expect("heap never empties");
            let tm = 0.5 * (node.ta + node.tb);
            let s = self.eval.sample(tm);
            evals += 1;
            best = best.max(self.attained(&s));
            samples.push(s);
            let m = samples.len() - 1;
            heap.push(self.node(&samples, node.a, m, node.ta, tm, best));
            heap.push(self.node(&samples, m, node.b, tm, node.tb, best));
        }
        let top = heap.peek().map_or(f64::NEG_INFINITY, |n| n.upper);
        ScanOutcome {
            samples,
            best,
            upper: top.max(best),
        }
    }
}
