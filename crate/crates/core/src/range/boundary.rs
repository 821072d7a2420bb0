//! Sampled boundary of `W(T)` and support-function membership.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::Serialize;

use super::scan::{directional, BranchAndBound, Evaluator, Objective, ScanPart, MAX_EIGENSOLVES};
use super::{eigen_slack, uniform_samples};
use crate::eigen::{decompose, extremes_of};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HERMITIAN_TOL};
use crate::spectral::op_norm;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundarySample {
    pub theta: f64,
    /// `⟨Tx, x⟩` for the top eigenvector `x` of `Re(e^{iθ}T)`.
    pub point: Complex64,
    /// `λ_max(Re(e^{iθ}T))`.
    pub support: f64,
}

/// Shape of `W(T)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum RangeShape {
    Point(Complex64),
    Segment { start: Complex64, end: Complex64 },
    Region,
}

impl RangeShape {
    pub fn is_degenerate(&self) -> bool {
        !matches!(self, RangeShape::Region)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RangeBoundary {
    pub samples: Vec<BoundarySample>,
    pub shape: RangeShape,
}

impl RangeBoundary {
    pub fn points(&self) -> Vec<Complex64> {
        self.samples.iter().map(|s| s.point).collect()
    }

    pub fn max_modulus(&self) -> f64 {
        self.samples.iter().map(|s| s.point.norm()).fold(0.0, f64::max)
    }

    /// Convex hull of the sampled points, counter-clockwise. Contained in `W(T)`.
    pub fn inner_polygon(&self) -> Vec<Complex64> {
        convex_hull(self.points())
    }

    /// Vertices of the intersection of the sampled supporting half-planes.
    /// Contains `W(T)`.
    pub fn outer_polygon(&self) -> Vec<Complex64> {
        let n = self.samples.len();
        (0..n)
            .map(|k| {
                let a = &self.samples[k];
                let b = &self.samples[(k + 1) % n];
                let h = if k + 1 == n { b.theta + TAU - a.theta } else { b.theta - a.theta };
                let uy = ((a.support - b.support) - 2.0 * (h / 2.0).sin().powi(2) * a.support) / h.sin();
                Complex64::new(a.support, uy) * Complex64::from_polar(1.0, -a.theta)
            })
            .collect()
    }

    /// Whether `z` lies in the inner polygon, up to `eps`.
    pub fn inner_contains(&self, z: Complex64, eps: f64) -> bool {
        let hull = self.inner_polygon();
        match hull.len() {
            0 => false,
            1 => (z - hull[0]).norm() <= eps,
            2 => segment_distance(z, hull[0], hull[1]) <= eps,
            n => (0..n).all(|k| {
                let a = hull[k];
                let b = hull[(k + 1) % n];
                let e = b - a;
                // signed distance to the left of edge a→b
                (e.re * (z - a).im - e.im * (z - a).re) / e.norm() >= -eps
            }),
        }
    }
}

/// Andrew's monotone chain; returns the hull counter-clockwise without
/// repeated points.
pub(crate) fn convex_hull(mut pts: Vec<Complex64>) -> Vec<Complex64> {
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re);
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn segment_distance(z: Complex64, p: Complex64, q: Complex64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - p).norm();
    }
    let t = (((z - p) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (p + d * t)).norm()
}

/// Detects ranges with empty interior: `T = cI` (a point) or `T − cI` a
/// rotated Hermitian matrix (a segment).
pub(crate) fn degenerate_shape(t: &ComplexMatrix) -> RangeShape {
    let n = t.rows();
    if n == 1 {
        return RangeShape::Point(t[(0, 0)]);
    }
    let c = (0..n).map(|k| t[(k, k)]).sum::<Complex64>() / n as f64;
    let centered = t.sub(&ComplexMatrix::diag(&alloc::vec![c; n])).expect("square");
    let fro = centered.frobenius_norm();
    if fro <= 1e-14 * t.frobenius_norm() {
        return RangeShape::Point(c);
    }
    // for N = e^{-iφ}K with K Hermitian, tr(N²)/‖N‖_F² = e^{-2iφ}
    let mut tr2 = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            tr2 += centered[(i, j)] * centered[(j, i)];
        }
    }
    let omega = tr2 / (fro * fro);
    if (omega.norm() - 1.0).abs() > HERMITIAN_TOL {
        return RangeShape::Region;
    }
    let defect = centered.sub(&centered.adjoint().scale(omega)).expect("square").frobenius_norm();
    if defect > HERMITIAN_TOL * fro {
        return RangeShape::Region;
    }
    let phi = -omega.arg() / 2.0;
    let k = centered.scale(Complex64::from_polar(1.0, phi)).symmetrized().expect("near Hermitian");
    let ext = extremes_of(&decompose(&k));
    let back = Complex64::from_polar(1.0, -phi);
    let (start, end) = (c + back * ext.lambda_min, c + back * ext.lambda_max);
    let (start, end) = if (start.re, start.im) <= (end.re, end.im) { (start, end) } else { (end, start) };
    RangeShape::Segment { start, end }
}

/// Samples the boundary of `W(T)` at `n_samples` uniformly spaced angles.
pub fn range_boundary(t: &ComplexMatrix, n_samples: usize) -> Result<RangeBoundary> {
    t.require_square()?;
    if n_samples < 3 {
        return Err(Error::InvalidArgument("at least 3 boundary samples are required"));
    }
    if t.is_empty() {
        return Err(Error::InvalidArgument("empty matrix has no numerical range"));
    }
    let shape = degenerate_shape(t);
    let samples = match shape {
        RangeShape::Point(c) => (0..n_samples)
            .map(|k| {
                let theta = TAU * k as f64 / n_samples as f64;
                BoundarySample {
                    theta,
                    point: c,
                    support: directional(c, theta),
                }
            })
            .collect(),
        _ => uniform_samples(t, n_samples)
            .into_iter()
            .map(|s| BoundarySample {
                theta: s.theta,
                point: s.top_point,
                support: s.top,
            })
            .collect(),
    };
    Ok(RangeBoundary { samples, shape })
}

/// Result of a membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Inside,
    Outside,
    Uncertain,
}

/// Decides whether `z ∈ W(T)` with margin `tol`.
///
/// `z` is outside when some direction separates it from `W(T)` by at least
/// `tol`, inside when every direction keeps it at least `tol` within the
/// support (for `tol = 0`: within round-off), and uncertain otherwise.
pub fn in_range(t: &ComplexMatrix, z: Complex64, tol: f64) -> Result<Membership> {
    t.require_square()?;
    if !(tol >= 0.0 && tol.is_finite()) || !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument("tolerance must be nonnegative and z finite"));
    }
    if t.is_empty() {
        return Err(Error::InvalidArgument("empty matrix has no numerical range"));
    }
    let n = t.rows();
    let pad = 4.0 * eigen_slack(t) + 4.0 * f64::EPSILON * z.norm();

    let dist = match degenerate_shape(t) {
        RangeShape::Point(c) => Some((z - c).norm()),
        RangeShape::Segment { start, end } => Some(segment_distance(z, start, end)),
        RangeShape::Region => None,
    };
    if let Some(d) = dist {
        return Ok(if d >= tol && d > pad {
            Membership::Outside
        } else if tol == 0.0 {
            Membership::Inside
        } else {
            Membership::Uncertain
        });
    }

    // Re(e^{iθ}z) − λ_max(Re(e^{iθ}T)) = λ_min(Re(e^{iθ}(zI − T)))
    let shifted = ComplexMatrix::diag(&alloc::vec![z; n]).sub(t).expect("square");
    let eval = Evaluator::new(&shifted, ScanPart::Re);
    let bnb = BranchAndBound {
        eval: &eval,
        objective: Objective::Bottom,
        lipschitz: op_norm(&shifted).upper,
        slack: eigen_slack(&shifted),
        max_evals: MAX_EIGENSOLVES,
    };
    let inside_at = if tol > 0.0 { -tol } else { pad };
    let outside_at = tol.max(pad);
    let resolution = (tol / 8.0).max(pad);
    let out = bnb.run(|best, upper| best >= outside_at || upper <= inside_at || upper - best <= resolution);
    Ok(if out.best >= outside_at {
        Membership::Outside
    } else if out.upper <= inside_at {
        Membership::Inside
    } else {
        Membership::Uncertain
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{I, ONE};
    use core::f64::consts::PI;

    fn shift() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn identity_is_a_point() {
        let b = range_boundary(&ComplexMatrix::identity(2), 17).unwrap();
        assert_eq!(b.shape, RangeShape::Point(ONE));
        assert!(b.samples.iter().all(|s| s.point == ONE));
    }

    #[test]
    fn shift_boundary_is_circle() {
        let b = range_boundary(&shift(), 360).unwrap();
        assert_eq!(b.shape, RangeShape::Region);
        for s in &b.samples {
            assert!((s.point.norm() - 0.5).abs() < 1e-12);
        }
        assert!((b.max_modulus() - 0.5).abs() < 1e-6);
        let thetas: Vec<f64> = b.samples.iter().map(|s| s.theta).collect();
        assert!(thetas.windows(2).all(|w| w[0] < w[1]));
        assert!(thetas[0] >= 0.0 && *thetas.last().unwrap() < TAU);
    }

    #[test]
    fn normal_diagonal_is_a_segment() {
        let b = range_boundary(&ComplexMatrix::diag(&[I, ONE]), 360).unwrap();
        match b.shape {
            RangeShape::Segment { start, end } => {
                assert!((start - I).norm() < 1e-12 && (end - ONE).norm() < 1e-12, "{start} {end}");
            }
            other => panic!("expected segment, got {other:?}"),
        }
        for s in &b.samples {
            assert!(segment_distance(s.point, I, ONE) < 1e-12);
        }
    }

    #[test]
    fn hermitian_is_a_segment() {
        let h = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        match degenerate_shape(&h) {
            RangeShape::Segment { start, end } => {
                assert!((start - ONE).norm() < 1e-12 && (end - 3.0 * ONE).norm() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(degenerate_shape(&shift()), RangeShape::Region);
    }

    #[test]
    fn polygons_bracket_disk() {
        let b = range_boundary(&shift(), 12).unwrap();
        let outer = b.outer_polygon();
        let bound = 0.5 / (PI / 12.0).cos();
        for v in &outer {
            assert!(v.norm() <= bound + 1e-12 && v.norm() >= 0.5 - 1e-12);
        }
        assert_eq!(b.inner_polygon().len(), 12);
        assert!(b.inner_contains(Complex64::new(0.0, 0.0), 0.0));
        assert!(b.inner_contains(Complex64::new(0.48, 0.0), 0.0));
        assert!(!b.inner_contains(Complex64::new(0.6, 0.0), 1e-12));
    }

    #[test]
    fn membership_examples() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(in_range(&id, ONE, 0.0).unwrap(), Membership::Inside);
        assert_eq!(in_range(&id, ONE, 1e-6).unwrap(), Membership::Uncertain);
        assert_eq!(in_range(&id, 2.0 * ONE, 1e-6).unwrap(), Membership::Outside);
        assert_eq!(in_range(&shift(), Complex64::new(0.0, 0.0), 1e-6).unwrap(), Membership::Inside);
        assert_eq!(in_range(&shift(), ONE, 1e-6).unwrap(), Membership::Outside);
        assert_eq!(in_range(&shift(), Complex64::new(0.0, 0.5), 1e-6).unwrap(), Membership::Uncertain);
        assert_eq!(in_range(&shift(), Complex64::new(0.0, 0.4), 1e-6).unwrap(), Membership::Inside);
    }

    #[test]
    fn hull_drops_interior_points() {
        let pts = alloc::vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.5, 0.5),
            Complex64::new(1.0, 0.0),
        ];
        assert_eq!(convex_hull(pts).len(), 4);
    }
}
