//! Bounds on a single operator, products and sandwiches, and the pointwise
//! inequalities behind them.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{cnorm, crawford, norm, rho, sorted, w, BoundEvaluation, Comparison, Direction};
use crate::certified::Interval;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ComplexVector};

const UNIT_TOL: f64 = 1e-12;

fn square(t: &ComplexMatrix) -> ComplexMatrix {
    t.matmul(t).expect("square")
}

/// Lower and upper bounds on `w(T)` from norms, the Cartesian parts and `T²`.
pub fn scalar_bounds(t: &ComplexMatrix) -> Result<Vec<BoundEvaluation>> {
    t.require_square()?;
    let n = norm(t);
    let parts = t.cartesian_parts()?;
    let (re, im) = (norm(&parts.re), norm(&parts.im));
    let (m_re, m_im) = (crawford(&parts.re)?, crawford(&parts.im)?);

    let mut out = vec![
        BoundEvaluation::lower("norm_half", "w(T) >= ||T||/2", n * 0.5),
        BoundEvaluation::lower("spectral_radius", "w(T) >= r(T)", rho(t)?),
        BoundEvaluation::upper("norm", "w(T) <= ||T||", n),
        BoundEvaluation::upper(
            "cartesian_norms",
            "w(T) <= sqrt(||Re T||^2 + ||Im T||^2)",
            (re.sqr() + im.sqr()).sqrt(),
        ),
    ];
    let quartic = (re.sqr() - m_im.sqr()).abs().sqr().max((im.sqr() - m_re.sqr()).abs().sqr()) + re.sqr() * im.sqr() * 4.0;
    out.push(BoundEvaluation::upper(
        "cartesian_quartic",
        "w(T)^4 <= max(|(||Re T||^2 - m(Im T)^2)|^2, |(||Im T||^2 - m(Re T)^2)|^2) + 4||Re T||^2 ||Im T||^2",
        quartic.powf(0.25),
    ));

    const SQ_CRAWFORD: &str = "w(T) >= ||T||/2 + m(T^2)/(2||T||)";
    const SQ_MIN_NORM: &str = "w(T) >= (c(T)^2 + w(T^2))/(2||T||)";
    const SQ_COMBINED: &str = "w(T) >= max(||T||^2 + m(T^2), c(T)^2 + w(T^2))/(2||T||)";
    if !(n.lo > 0.0) {
        out.push(BoundEvaluation::inapplicable("crawford_square", Direction::Lower, SQ_CRAWFORD));
        out.push(BoundEvaluation::inapplicable("min_norm_square", Direction::Lower, SQ_MIN_NORM));
        out.push(BoundEvaluation::inapplicable("square_combined", Direction::Lower, SQ_COMBINED));
    } else {
        let t2 = square(t);
        let two_n = n * 2.0;
        let crawford_sq = n * 0.5 + crawford(&t2)?.nonneg() / two_n;
        let min_norm_sq = (cnorm(t).sqr() + w(&t2)?) / two_n;
        out.push(BoundEvaluation::lower("crawford_square", SQ_CRAWFORD, crawford_sq));
        out.push(BoundEvaluation::lower("min_norm_square", SQ_MIN_NORM, min_norm_sq));
        // (‖T‖² + m)/(2‖T‖) = ‖T‖/2 + m/(2‖T‖), so the combined bound is the larger one
        out.push(BoundEvaluation::lower("square_combined", SQ_COMBINED, crawford_sq.max(min_norm_sq)));
    }
    Ok(sorted(out))
}

fn require_pair(a: &ComplexMatrix, b: &ComplexMatrix, op: &'static str) -> Result<()> {
    a.require_square()?;
    b.require_square()?;
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            op,
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

/// Upper bounds on `w(AB)`.
pub fn product_upper(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Vec<BoundEvaluation>> {
    require_pair(a, b, "product_upper")?;
    let (wa, wb) = (w(a)?, w(b)?);
    let (na, nb) = (norm(a), norm(b));
    let left = crawford(&b.adjoint().matmul(a)?)?;
    let right = crawford(&b.matmul(&a.adjoint())?)?;
    Ok(sorted(vec![
        BoundEvaluation::upper("product_left", "w(AB) <= 2w(A)||B|| - m(B*A)", wa * nb * 2.0 - left),
        BoundEvaluation::upper("product_right", "w(AB) <= 2w(B)||A|| - m(BA*)", wb * na * 2.0 - right),
        BoundEvaluation::upper("product_baseline", "w(AB) <= 2w(A)||B||", wa * nb * 2.0),
    ]))
}

/// The four operator inequalities `lhs ≤ 2w(T)‖A‖‖B‖` for `A*TB` and `B*TA`.
pub fn sandwich_bounds(a: &ComplexMatrix, t: &ComplexMatrix, b: &ComplexMatrix) -> Result<Vec<Comparison>> {
    require_pair(a, t, "sandwich_bounds")?;
    require_pair(t, b, "sandwich_bounds")?;
    let atb = a.adjoint().matmul(t)?.matmul(b)?;
    let bta = b.adjoint().matmul(t)?.matmul(a)?;
    let (na, nb) = (norm(a), norm(b));
    let rhs = (w(t)? * na * nb * 2.0).hi;
    let scale = na.hi * norm(t).hi * nb.hi;
    let (w_atb, w_bta) = (w(&atb)?, w(&bta)?);
    let (m_atb, m_bta) = (crawford(&atb)?, crawford(&bta)?);
    let cmp = |bound_id, reference, lhs: Interval| Comparison {
        bound_id,
        direction: Direction::Upper,
        lhs: lhs.lo,
        rhs,
        reference,
        scale,
    };
    Ok(vec![
        cmp("sandwich_crawford_left", "m(A*TB) + w(B*TA) <= 2w(T)||A|| ||B||", m_atb + w_bta),
        cmp("sandwich_crawford_right", "w(A*TB) + m(B*TA) <= 2w(T)||A|| ||B||", w_atb + m_bta),
        cmp("sandwich_sum", "w(A*TB + B*TA) <= 2w(T)||A|| ||B||", w(&atb.add(&bta)?)?),
        cmp("sandwich_difference", "w(A*TB - B*TA) <= 2w(T)||A|| ||B||", w(&atb.sub(&bta)?)?),
    ])
}

/// Pointwise inequalities at a unit vector `x`; `rhs − lhs ≥ 0` for each.
pub fn pointwise_check(a: &ComplexMatrix, t: &ComplexMatrix, b: &ComplexMatrix, x: &ComplexVector) -> Result<Vec<Comparison>> {
    t.require_square()?;
    let w_t = w(t)?.hi;
    pointwise_check_with(a, t, b, x, w_t)
}

/// [`pointwise_check`] with a precomputed upper bound on `w(T)`.
pub fn pointwise_check_with(
    a: &ComplexMatrix,
    t: &ComplexMatrix,
    b: &ComplexMatrix,
    x: &ComplexVector,
    w_t: f64,
) -> Result<Vec<Comparison>> {
    require_pair(a, t, "pointwise_check")?;
    require_pair(t, b, "pointwise_check")?;
    if x.dim() != t.rows() {
        return Err(Error::ShapeMismatch {
            op: "pointwise_check",
            left: t.shape(),
            right: (x.dim(), 1),
        });
    }
    let norm_x = x.norm();
    if (norm_x - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit { norm: norm_x });
    }
    let ax = a.apply(x)?;
    let bx = b.apply(x)?;
    let tx = t.apply(x)?;
    let tax = t.apply(&ax)?;
    let tbx = t.apply(&bx)?;
    let ttx = t.apply(&tx)?;
    // ⟨A*TBx, x⟩ = ⟨TBx, Ax⟩
    let atb = ax.inner(&tbx);
    let bta = bx.inner(&tax);
    let (nt, na, nb) = (norm(t).hi, norm(a).hi, norm(b).hi);

    let square_lhs = tx.norm().powi(2) + x.inner(&ttx).norm();
    let square_rhs = 2.0 * w_t * tx.norm();
    let prod_rhs = 2.0 * w_t * ax.norm() * bx.norm();
    let pw = |bound_id, reference, lhs: f64, rhs: f64, scale: f64| Comparison {
        bound_id,
        direction: Direction::Pointwise,
        lhs,
        rhs,
        reference,
        scale,
    };
    let scale = na * nt * nb;
    Ok(vec![
        pw(
            "pointwise_square",
            "||Tx||^2 + |<T^2x,x>| <= 2w(T)||Tx|| ||x||",
            square_lhs,
            square_rhs,
            nt * nt,
        ),
        pw(
            "pointwise_product",
            "|<A*TBx,x>| + |<B*TAx,x>| <= 2w(T)||Ax|| ||Bx||",
            atb.norm() + bta.norm(),
            prod_rhs,
            scale,
        ),
        pw("pointwise_sum", "|<(A*TB + B*TA)x,x>| <= 2w(T)||Ax|| ||Bx||", (atb + bta).norm(), prod_rhs, scale),
        pw(
            "pointwise_difference",
            "|<(A*TB - B*TA)x,x>| <= 2w(T)||Ax|| ||Bx||",
            (atb - bta).norm(),
            prod_rhs,
            scale,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{I, ONE};

    fn shift() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    fn find<'a>(v: &'a [BoundEvaluation], id: &str) -> &'a BoundEvaluation {
        v.iter().find(|e| e.bound_id == id).unwrap()
    }

    fn near(x: f64, y: f64) -> bool {
        (x - y).abs() < 1e-8
    }

    #[test]
    fn scalar_examples() {
        let b = scalar_bounds(&shift()).unwrap();
        assert!(near(find(&b, "crawford_square").value, 0.5));
        assert!(near(find(&b, "min_norm_square").value, 0.0));

        let d = ComplexMatrix::diag(&[I, ONE]);
        let b = scalar_bounds(&d).unwrap();
        assert!(near(find(&b, "crawford_square").value, 0.5));
        assert!(near(find(&b, "min_norm_square").value, 1.0));
        assert!(near(find(&b, "cartesian_norms").value, 2f64.sqrt()));
        assert!(near(find(&b, "cartesian_quartic").value, 5f64.powf(0.25)));

        let b = scalar_bounds(&ComplexMatrix::identity(2)).unwrap();
        assert!(near(find(&b, "crawford_square").value, 1.0));
    }

    #[test]
    fn scalar_exact_relations() {
        for t in [shift(), ComplexMatrix::diag(&[I, ONE]), ComplexMatrix::identity(3)] {
            let b = scalar_bounds(&t).unwrap();
            let (c2, m2, comb) = (
                find(&b, "crawford_square").value,
                find(&b, "min_norm_square").value,
                find(&b, "square_combined").value,
            );
            assert_eq!(comb, c2.max(m2));
            assert!(c2 >= find(&b, "norm_half").value);
        }
    }

    #[test]
    fn zero_matrix_marks_square_bounds_inapplicable() {
        let b = scalar_bounds(&ComplexMatrix::zeros(2, 2)).unwrap();
        for id in ["crawford_square", "min_norm_square", "square_combined"] {
            assert!(!find(&b, id).applicable);
        }
        assert_eq!(find(&b, "norm").value, 0.0);
    }

    #[test]
    fn product_examples() {
        let id = ComplexMatrix::identity(2);
        let b = product_upper(&id, &id).unwrap();
        assert!(near(find(&b, "product_left").value, 1.0));
        let b = product_upper(&shift(), &id).unwrap();
        assert!(near(find(&b, "product_left").value, 1.0));
        let b = product_upper(&ComplexMatrix::diag(&[I, ONE]), &id).unwrap();
        assert!(near(find(&b, "product_left").value, 2.0 - 0.5f64.sqrt()));
    }

    #[test]
    fn sandwich_examples() {
        let id = ComplexMatrix::identity(2);
        let c = sandwich_bounds(&id, &id, &id).unwrap();
        assert!(near(c[0].lhs, 2.0) && near(c[0].rhs, 2.0));
        let c = sandwich_bounds(&id, &shift(), &id).unwrap();
        let sum = c.iter().find(|c| c.bound_id == "sandwich_sum").unwrap();
        assert!(near(sum.lhs, 1.0) && near(sum.rhs, 1.0));
        assert!(c.iter().all(|c| c.holds(1e-9)));
    }

    #[test]
    fn pointwise_examples() {
        let id = ComplexMatrix::identity(2);
        let t = shift();
        let e1 = ComplexVector::basis(2, 0);
        let e2 = ComplexVector::basis(2, 1);
        let r = pointwise_check(&t, &t, &id, &e1).unwrap();
        assert_eq!(r[0].lhs, 0.0);
        assert!(r[0].residual().abs() < 1e-9);
        let r = pointwise_check(&t, &t, &id, &e2).unwrap();
        assert!(near(r[0].lhs, 1.0) && r[0].residual().abs() < 1e-9);
        let r = pointwise_check(&id, &id, &id, &e1).unwrap();
        assert!(near(r[1].lhs, 2.0) && r[1].residual().abs() < 1e-9);

        let bad = ComplexVector::new(vec![ONE, ONE]).unwrap();
        assert!(matches!(pointwise_check(&id, &id, &id, &bad), Err(Error::NotUnit { .. })));
    }
}
