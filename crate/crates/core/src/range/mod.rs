//! Numerical radius, Crawford number, range boundary and membership.
//!
//! Everything here is driven by the support function
//! `θ ↦ λ_max(Re(e^{iθ}T))` of the numerical range; see [`scan`] for the
//! certificates used by the branch-and-bound.

mod boundary;
pub(crate) mod scan;

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::certified::CertifiedValue;
use crate::eigen::{extremes_of, jacobi_hermitian};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::spectral::op_norm;

pub use boundary::{in_range, range_boundary, BoundarySample, Membership, RangeBoundary, RangeShape};
pub use scan::{ScanPart, INITIAL_INTERVALS, MAX_EIGENSOLVES};

use scan::{BranchAndBound, Evaluator, Objective, Sample};

/// Default relative enclosure width.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Absolute error budget of one Hermitian eigensolve on `Re(e^{iθ}T)`.
pub(crate) fn eigen_slack(t: &ComplexMatrix) -> f64 {
    16.0 * (t.rows() as f64 + 4.0) * f64::EPSILON * t.frobenius_norm()
}

fn validate_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("tolerance must be positive and finite"))
    }
}

/// Numerical radius `w(T) = max_θ ‖Re(e^{iθ}T)‖` with an enclosure of width
/// at most `tol·‖T‖`.
pub fn numerical_radius(t: &ComplexMatrix, tol: f64) -> Result<CertifiedValue> {
    numerical_radius_scan(t, tol, ScanPart::Re)
}

/// Same as [`numerical_radius`] but scanning the chosen Cartesian part.
pub fn numerical_radius_scan(t: &ComplexMatrix, tol: f64, part: ScanPart) -> Result<CertifiedValue> {
    t.require_square()?;
    validate_tol(tol)?;
    if t.is_empty() || t.is_zero() {
        return Ok(CertifiedValue::exact(0.0));
    }
    let norm = op_norm(t).upper;
    let slack = eigen_slack(t);
    if t.hermitian_defect() == 0.0 {
        return Ok(hermitian_radius(t, slack));
    }

    let eval = Evaluator::new(t, part);
    let bnb = BranchAndBound {
        eval: &eval,
        objective: Objective::Radius,
        lipschitz: norm,
        slack,
        max_evals: MAX_EIGENSOLVES,
    };
    let width = tol * norm;
    let out = bnb.run(|best, upper| upper - best <= width);

    let lower = (out.best - slack).max(0.0);
    let upper = out.upper.max(out.best);
    // smallest θ whose Rayleigh point reaches the certified lower end
    let (theta, _) = pick_theta(&out.samples, |s| s.top_point.norm(), lower);
    let eig = eval.eigen_at(theta);
    let x = eig.vector(eig.values.len() - 1);
    let datum = eval.rayleigh(&x).norm();
    let value = out.best.clamp(lower, upper);
    Ok(CertifiedValue {
        value,
        lower: lower.min(datum),
        upper: upper.max(datum),
        theta_star: Some(theta),
        witness: Some(x),
    })
}

fn hermitian_radius(t: &ComplexMatrix, slack: f64) -> CertifiedValue {
    let ext = extremes_of(&jacobi_hermitian(t));
    let (value, theta, witness) = if ext.lambda_max >= -ext.lambda_min {
        (ext.lambda_max, 0.0, ext.v_max)
    } else {
        (-ext.lambda_min, core::f64::consts::PI, ext.v_min)
    };
    CertifiedValue {
        value,
        lower: (value - slack).max(0.0),
        upper: value + slack,
        theta_star: Some(theta),
        witness: Some(witness),
    }
}

/// Smallest sample angle in `[0, 2π)` whose score reaches `threshold`; falls
/// back to the best score.
fn pick_theta(samples: &[Sample], score: impl Fn(&Sample) -> f64, threshold: f64) -> (f64, f64) {
    let mut chosen: Option<(f64, f64)> = None;
    let mut best: Option<(f64, f64)> = None;
    for s in samples {
        let v = score(s);
        let th = scan::wrap(s.theta);
        if v >= threshold && chosen.is_none_or(|(t, _)| th < t) {
            chosen = Some((th, v));
        }
        if best.is_none_or(|(t, b)| v > b || (v == b && th < t)) {
            best = Some((th, v));
        }
    }
    chosen.or(best).unwrap_or((0.0, 0.0))
}

/// Crawford number `m(T) = min |z|` over `W(T)`, computed as
/// `max(0, max_θ λ_min(Re(e^{iθ}T)))`.
pub fn crawford_number(t: &ComplexMatrix, tol: f64) -> Result<CertifiedValue> {
    t.require_square()?;
    validate_tol(tol)?;
    if t.is_empty() || t.is_zero() {
        return Ok(CertifiedValue::exact(0.0));
    }
    let slack = eigen_slack(t);
    if t.hermitian_defect() == 0.0 {
        let ext = extremes_of(&jacobi_hermitian(t));
        if ext.lambda_min <= 0.0 && ext.lambda_max >= 0.0 {
            return Ok(CertifiedValue::exact(0.0));
        }
        let (value, witness) = if ext.lambda_min > 0.0 {
            (ext.lambda_min, ext.v_min)
        } else {
            (-ext.lambda_max, ext.v_max)
        };
        return Ok(CertifiedValue {
            value,
            lower: (value - slack).max(0.0),
            upper: value + slack,
            theta_star: None,
            witness: Some(witness),
        });
    }

    let norm = op_norm(t).upper;
    let eval = Evaluator::new(t, ScanPart::Re);
    let bnb = BranchAndBound {
        eval: &eval,
        objective: Objective::Bottom,
        lipschitz: norm,
        slack,
        max_evals: MAX_EIGENSOLVES,
    };
    let width = tol * norm;
    let out = bnb.run(|best, upper| upper <= 0.0 || upper.max(0.0) - best.max(0.0) <= width);
    if out.upper <= 0.0 {
        return Ok(CertifiedValue::exact(0.0));
    }
    let lower = (out.best - slack).max(0.0);
    let upper = out.upper.max(0.0);
    if out.best <= 0.0 {
        return Ok(CertifiedValue::enclosed(0.0, 0.0, upper));
    }
    let (theta, _) = pick_theta(&out.samples, |s| s.bottom, out.best - slack);
    let eig = eval.eigen_at(theta);
    let x = eig.vector(0);
    Ok(CertifiedValue {
        value: out.best.clamp(lower, upper),
        lower,
        upper,
        theta_star: Some(theta),
        witness: Some(x),
    })
}

/// Uniformly spaced support samples; shared with [`boundary`].
pub(crate) fn uniform_samples(t: &ComplexMatrix, n: usize) -> Vec<Sample> {
    let eval = Evaluator::new(t, ScanPart::Re);
    (0..n).map(|k| eval.sample(TAU * k as f64 / n as f64)).collect()
}

/// `⟨Tx, x⟩` for a unit vector `x`; exposed for oracles and witnesses.
pub fn rayleigh_point(t: &ComplexMatrix, x: &crate::matrix::ComplexVector) -> Result<Complex64> {
    t.quadratic_form(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{I, ONE};
    use core::f64::consts::FRAC_PI_4;

    fn shift() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    fn jordan3() -> ComplexMatrix {
        ComplexMatrix::from_real(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]).unwrap()
    }

    fn check(w: &CertifiedValue, expected: f64, t: &ComplexMatrix) {
        let norm = op_norm(t).value;
        assert!(w.lower <= w.value && w.value <= w.upper);
        assert!(w.lower <= expected + 1e-14 && expected <= w.upper + 1e-14, "{w:?} vs {expected}");
        assert!(w.width() <= 1e-10 * norm + 1e-15, "width {}", w.width());
    }

    #[test]
    fn radius_examples() {
        let z = ComplexMatrix::zeros(3, 3);
        assert_eq!(numerical_radius(&z, DEFAULT_TOL).unwrap(), CertifiedValue::exact(0.0));

        let d = ComplexMatrix::diag(&[I, ONE]);
        check(&numerical_radius(&d, DEFAULT_TOL).unwrap(), 1.0, &d);
        check(&numerical_radius(&shift(), DEFAULT_TOL).unwrap(), 0.5, &shift());
        check(&numerical_radius(&jordan3(), DEFAULT_TOL).unwrap(), FRAC_PI_4.cos(), &jordan3());
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 3.0, 1.0]).unwrap();
        check(&numerical_radius(&m, DEFAULT_TOL).unwrap(), (1.0 + 10f64.sqrt()) / 2.0, &m);
    }

    #[test]
    fn radius_witness_is_consistent() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 3.0, 1.0]).unwrap();
        let w = numerical_radius(&m, DEFAULT_TOL).unwrap();
        let x = w.witness.clone().unwrap();
        assert!((x.norm() - 1.0).abs() < 1e-14);
        let datum = rayleigh_point(&m, &x).unwrap().norm();
        assert!(w.lower <= datum && datum <= w.upper);
        let theta = w.theta_star.unwrap();
        assert!((0.0..TAU).contains(&theta));
    }

    #[test]
    fn disk_ties_pick_smallest_angle() {
        let w = numerical_radius(&shift(), DEFAULT_TOL).unwrap();
        assert_eq!(w.theta_star, Some(0.0));
    }

    #[test]
    fn crawford_examples() {
        let c = crawford_number(&ComplexMatrix::identity(2), DEFAULT_TOL).unwrap();
        assert!((c.value - 1.0).abs() < 1e-14);
        assert_eq!(crawford_number(&shift(), DEFAULT_TOL).unwrap(), CertifiedValue::exact(0.0));
        let d = ComplexMatrix::diag(&[I, ONE]);
        let c = crawford_number(&d, DEFAULT_TOL).unwrap();
        let expected = 0.5f64.sqrt();
        assert!(c.lower <= expected + 1e-14 && expected <= c.upper + 1e-14, "{c:?}");
        assert!(c.width() <= 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(numerical_radius(&ComplexMatrix::zeros(2, 3), DEFAULT_TOL).is_err());
        assert!(numerical_radius(&shift(), 0.0).is_err());
        assert!(crawford_number(&shift(), -1.0).is_err());
    }

    #[test]
    fn re_and_im_scans_agree() {
        let m = ComplexMatrix::from_vec(
            3,
            3,
            alloc::vec![
                Complex64::new(0.3, -1.0),
                Complex64::new(2.0, 0.5),
                Complex64::new(-0.7, 0.0),
                Complex64::new(0.0, 1.1),
                Complex64::new(-1.2, 0.4),
                Complex64::new(0.9, -0.3),
                Complex64::new(0.5, 0.5),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.4, 0.2),
            ],
        )
        .unwrap();
        let re = numerical_radius_scan(&m, DEFAULT_TOL, ScanPart::Re).unwrap();
        let im = numerical_radius_scan(&m, DEFAULT_TOL, ScanPart::Im).unwrap();
        let norm = op_norm(&m).value;
        assert!((re.value - im.value).abs() <= 2e-10 * norm);
    }
}
