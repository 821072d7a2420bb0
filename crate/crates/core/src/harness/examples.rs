//! Worked examples, curated equality cases and per-matrix tightness tables.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::Serialize;

use alloc::string::String;

use crate::blocks::off_diagonal;
use crate::bounds::{
    firstrow_upper, offdiag_lower, product_upper, row_bounds, scalar_bounds, sym_block_equality, two_by_two_bounds,
    BoundEvaluation, Direction, PRIOR_ROW_EXAMPLE_UPPER, PRIOR_TWO_BY_TWO_EXAMPLE_LOWER,
};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, I, ONE};
use crate::range::{numerical_radius, DEFAULT_TOL};
use crate::spectral::op_norm;

use super::ensemble::{gen_random, mix_seed, EnsembleConfig, EnsembleKind};

/// Tolerance for reproducing the worked examples.
pub const EXAMPLE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExampleRow {
    pub label: &'static str,
    pub computed: f64,
    pub expected: f64,
    pub diff: f64,
    /// A previously published bound on the same matrix, when there is one.
    pub prior: Option<f64>,
}

impl ExampleRow {
    fn new(label: &'static str, computed: f64, expected: f64, prior: Option<f64>) -> Self {
        Self {
            label,
            computed,
            expected,
            diff: (computed - expected).abs(),
            prior,
        }
    }

    pub fn passed(&self) -> bool {
        self.diff <= EXAMPLE_TOL
    }
}

fn real(r: usize, c: usize, d: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_real(r, c, d).expect("valid literal")
}

fn shift() -> ComplexMatrix {
    real(2, 2, &[0.0, 1.0, 0.0, 0.0])
}

fn value(evals: &[BoundEvaluation], id: &str) -> f64 {
    evals.iter().find(|e| e.bound_id == id).map_or(f64::NAN, |e| e.value)
}

/// The worked numerical examples: the two square-based lower bounds on the
/// shift and on `diag(i, 1)`, the row bound on a 4×4 block example against a
/// prior bound, and the commutator lower bound on two 2×2 block examples
/// against a prior bound.
pub fn worked_examples() -> Result<Vec<ExampleRow>> {
    let mut rows = Vec::new();
    let s = scalar_bounds(&shift())?;
    rows.push(ExampleRow::new("crawford_square shift", value(&s, "crawford_square"), 0.5, None));
    rows.push(ExampleRow::new("min_norm_square shift", value(&s, "min_norm_square"), 0.0, None));
    let d = scalar_bounds(&ComplexMatrix::diag(&[I, ONE]))?;
    rows.push(ExampleRow::new("crawford_square diag(i,1)", value(&d, "crawford_square"), 0.5, None));
    rows.push(ExampleRow::new("min_norm_square diag(i,1)", value(&d, "min_norm_square"), 1.0, None));

    let a = real(2, 2, &[0.0, 0.0, 3.0, 1.0]);
    let b = real(2, 2, &[1.0, 2.0, 0.0, 0.0]);
    let r = row_bounds(&a, &b)?;
    rows.push(ExampleRow::new(
        "row_product block example",
        value(&r, "row_product"),
        (8.0 + 10f64.sqrt()).sqrt(),
        Some(PRIOR_ROW_EXAMPLE_UPPER),
    ));

    let one = |x: f64| real(1, 1, &[x]);
    let c1 = two_by_two_bounds(&one(0.0), &one(1.0), &one(2.0), &one(0.0))?;
    rows.push(ExampleRow::new(
        "two_by_two_commutator scalar example",
        value(&c1, "two_by_two_commutator"),
        2f64.sqrt(),
        Some(PRIOR_TWO_BY_TWO_EXAMPLE_LOWER),
    ));
    let z = ComplexMatrix::zeros(2, 2);
    let c2 = two_by_two_bounds(
        &z,
        &real(2, 2, &[-1.0, 3.0, 0.0, 1.0]),
        &real(2, 2, &[1.0, 3.0, 0.0, -1.0]),
        &z,
    )?;
    rows.push(ExampleRow::new(
        "two_by_two_commutator matrix example",
        value(&c2, "two_by_two_commutator"),
        3f64.sqrt(),
        Some(PRIOR_TWO_BY_TWO_EXAMPLE_LOWER),
    ));
    Ok(rows)
}

/// A case where a bound is known to be attained.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualityCase {
    pub label: String,
    pub bound_id: &'static str,
    pub slack: f64,
    pub scale: f64,
}

impl EqualityCase {
    pub fn attained(&self, tol: f64) -> bool {
        self.slack.abs() <= tol * self.scale.max(1.0)
    }
}

/// Number of random pairs checked against the symmetric block equality.
pub const SYMMETRIC_PAIRS: usize = 50;

fn case(label: &str, evals: &[BoundEvaluation], id: &'static str, target: &ComplexMatrix) -> Result<EqualityCase> {
    let w = numerical_radius(target, DEFAULT_TOL)?.interval();
    let e = evals
        .iter()
        .find(|e| e.bound_id == id)
        .ok_or(Error::InvalidArgument("unknown bound id"))?;
    Ok(EqualityCase {
        label: label.into(),
        bound_id: id,
        slack: e.slack_against(w).unwrap_or(f64::NAN),
        scale: op_norm(target).upper,
    })
}

/// Curated equality cases: each listed bound is attained on its input.
pub fn equality_regressions() -> Result<Vec<EqualityCase>> {
    let one = |x: f64| real(1, 1, &[x]);
    let id2 = ComplexMatrix::identity(2);
    let mut out = vec![
        case("offdiag_norm_a at A=B=shift", &offdiag_lower(&shift(), &shift())?, "offdiag_norm_a", &off_diagonal(&shift(), &shift())?)?,
        case(
            "two_by_two_radius at A=D=0, B=1, C=2",
            &two_by_two_bounds(&one(0.0), &one(1.0), &one(2.0), &one(0.0))?,
            "two_by_two_radius",
            &real(2, 2, &[0.0, 1.0, 2.0, 0.0]),
        )?,
        case(
            "pinch_off_diagonal at A=D=0, B=1, C=2",
            &two_by_two_bounds(&one(0.0), &one(1.0), &one(2.0), &one(0.0))?,
            "pinch_off_diagonal",
            &real(2, 2, &[0.0, 1.0, 2.0, 0.0]),
        )?,
        case(
            "offdiag_sum_difference at A=1, B=2",
            &offdiag_lower(&one(1.0), &one(2.0))?,
            "offdiag_sum_difference",
            &off_diagonal(&one(1.0), &one(2.0))?,
        )?,
        case("crawford_square at T=I", &scalar_bounds(&id2)?, "crawford_square", &id2)?,
        case("norm at T=I", &scalar_bounds(&id2)?, "norm", &id2)?,
        case("crawford_square at T=shift", &scalar_bounds(&shift())?, "crawford_square", &shift())?,
        case(
            "min_norm_square at T=diag(i,1)",
            &scalar_bounds(&ComplexMatrix::diag(&[I, ONE]))?,
            "min_norm_square",
            &ComplexMatrix::diag(&[I, ONE]),
        )?,
        case("product_left at A=B=I", &product_upper(&id2, &id2)?, "product_left", &id2)?,
        case(
            "first_row at A11=1",
            &[firstrow_upper(&[one(1.0)])?.evaluation],
            "first_row",
            &one(1.0),
        )?,
    ];
    for k in 0..SYMMETRIC_PAIRS {
        let dim = 1 + k % 4;
        let kind = EnsembleKind::ALL[k % EnsembleKind::ALL.len()];
        let gen = |stream| {
            gen_random(EnsembleConfig {
                kind,
                dim,
                seed: mix_seed(0x5EED, stream),
            })
        };
        let (x, y) = (gen(2 * k as u64)?, gen(2 * k as u64 + 1)?);
        let c = sym_block_equality(&x, &y)?;
        out.push(EqualityCase {
            label: alloc::format!("symmetric_blocks pair {k}"),
            bound_id: c.bound_id,
            slack: c.residual(),
            scale: c.scale,
        });
    }
    Ok(out)
}

/// All applicable single-operator bounds with slack against the certified
/// `w(T)`, lower bounds first, each group sorted by ascending slack.
pub fn tightness_report(t: &ComplexMatrix) -> Result<Vec<BoundEvaluation>> {
    t.require_square()?;
    if t.is_empty() || t.is_zero() {
        return Err(Error::InvalidArgument("tightness report needs a nonzero matrix"));
    }
    let w = numerical_radius(t, DEFAULT_TOL)?.interval();
    let mut out: Vec<BoundEvaluation> = scalar_bounds(t)?
        .into_iter()
        .filter(|e| e.applicable)
        .map(|e| e.with_slack(w))
        .collect();
    let rank = |d: Direction| match d {
        Direction::Lower => 0,
        Direction::Upper => 1,
        _ => 2,
    };
    out.sort_by(|a, b| {
        rank(a.direction)
            .cmp(&rank(b.direction))
            .then(a.slack.unwrap_or(0.0).total_cmp(&b.slack.unwrap_or(0.0)))
            .then(a.bound_id.cmp(b.bound_id))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_reproduce() {
        let rows = worked_examples().unwrap();
        assert_eq!(rows.len(), 7);
        for r in &rows {
            assert!(r.passed(), "{r:?}");
        }
        let row = rows.iter().find(|r| r.label.starts_with("row_product")).unwrap();
        assert!(row.computed < row.prior.unwrap());
    }

    #[test]
    fn equalities_attained() {
        for c in equality_regressions().unwrap() {
            assert!(c.attained(EXAMPLE_TOL), "{c:?}");
        }
    }

    #[test]
    fn tightness_examples() {
        let r = tightness_report(&shift()).unwrap();
        let get = |id: &str| r.iter().find(|e| e.bound_id == id).unwrap().slack.unwrap();
        assert!(get("crawford_square").abs() < 1e-9);
        assert!((get("norm") - 0.5).abs() < 1e-9);
        assert_eq!(r[0].direction, Direction::Lower);

        let d = tightness_report(&ComplexMatrix::diag(&[I, ONE])).unwrap();
        let get = |id: &str| d.iter().find(|e| e.bound_id == id).unwrap().slack.unwrap();
        assert!(get("min_norm_square").abs() < 1e-9);
        assert!((get("crawford_square") - 0.5).abs() < 1e-9);
        assert!(tightness_report(&ComplexMatrix::zeros(2, 2)).is_err());
    }
}
