//! Catalog of numerical-radius inequalities.
//!
//! Every evaluator returns tagged records. Values are computed from enclosed
//! ingredients: lower bounds report the low end of the resulting interval and
//! upper bounds the high end, so a reported violation is never rounding noise.

mod blocks;
mod scalar;

use alloc::vec::Vec;

use serde::Serialize;

use crate::certified::Interval;
use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::range::{crawford_number, numerical_radius, DEFAULT_TOL};
use crate::spectral::{min_norm, op_norm, spectral_radius};

pub use blocks::{
    antidiag_lower, firstrow_upper, grid_upper, offdiag_lower, row_bounds, sym_block_equality, two_by_two_bounds,
    RowBound, RowBoundTerms,
};
pub use scalar::{pointwise_check, pointwise_check_with, product_upper, sandwich_bounds, scalar_bounds};

/// A previously published upper bound evaluated on the worked `[[A, B], [0, 0]]`
/// example with `A = [[0, 0], [3, 1]]`, `B = [[1, 2], [0, 0]]`: `(12 + √10)/4`.
pub const PRIOR_ROW_EXAMPLE_UPPER: f64 = 3.790_569_415_042_095;

/// A previously published lower bound evaluated on both worked 2×2 block
/// examples: `3/2`.
pub const PRIOR_TWO_BY_TWO_EXAMPLE_LOWER: f64 = 1.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
    Equality,
    Pointwise,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
            Direction::Equality => "equality",
            Direction::Pointwise => "pointwise",
        }
    }
}

/// One side of an inequality on a numerical radius.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEvaluation {
    pub bound_id: &'static str,
    pub direction: Direction,
    /// `NaN` when not applicable.
    pub value: f64,
    /// The inequality in plain notation.
    pub reference: &'static str,
    pub applicable: bool,
    /// Distance to the reference radius on the side the bound claims.
    pub slack: Option<f64>,
}

impl BoundEvaluation {
    pub(crate) fn lower(bound_id: &'static str, reference: &'static str, v: Interval) -> Self {
        Self::new(bound_id, Direction::Lower, reference, v.lo)
    }

    pub(crate) fn upper(bound_id: &'static str, reference: &'static str, v: Interval) -> Self {
        Self::new(bound_id, Direction::Upper, reference, v.hi)
    }

    fn new(bound_id: &'static str, direction: Direction, reference: &'static str, value: f64) -> Self {
        Self {
            bound_id,
            direction,
            value,
            reference,
            applicable: true,
            slack: None,
        }
    }

    pub(crate) fn inapplicable(bound_id: &'static str, direction: Direction, reference: &'static str) -> Self {
        Self {
            bound_id,
            direction,
            value: f64::NAN,
            reference,
            applicable: false,
            slack: None,
        }
    }

    /// Slack against an enclosure of the true radius: `w − value` for lower
    /// bounds, `value − w` for upper bounds, taking the end of `w` least
    /// favourable to a violation.
    pub fn slack_against(&self, w: Interval) -> Option<f64> {
        if !self.applicable {
            return None;
        }
        match self.direction {
            Direction::Lower => Some(w.hi - self.value),
            Direction::Upper => Some(self.value - w.lo),
            Direction::Equality | Direction::Pointwise => None,
        }
    }

    pub fn with_slack(mut self, w: Interval) -> Self {
        self.slack = self.slack_against(w);
        self
    }
}

/// A two-sided check `lhs ≤ rhs` (or `lhs = rhs` for [`Direction::Equality`])
/// between computed quantities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub bound_id: &'static str,
    pub direction: Direction,
    pub lhs: f64,
    pub rhs: f64,
    pub reference: &'static str,
    /// Natural magnitude of both sides, for relative tolerances.
    pub scale: f64,
}

impl Comparison {
    pub fn residual(&self) -> f64 {
        self.rhs - self.lhs
    }

    /// Whether the check holds within `tol · scale`.
    pub fn holds(&self, tol: f64) -> bool {
        let allowance = tol * self.scale;
        match self.direction {
            Direction::Equality => self.residual().abs() <= allowance,
            _ => self.residual() >= -allowance,
        }
    }

    /// Tabular form: value is the right-hand side, slack the residual.
    pub fn to_evaluation(&self) -> BoundEvaluation {
        BoundEvaluation {
            bound_id: self.bound_id,
            direction: self.direction,
            value: self.rhs,
            reference: self.reference,
            applicable: true,
            slack: Some(self.residual()),
        }
    }
}

// enclosed ingredients

pub(crate) fn w(m: &ComplexMatrix) -> Result<Interval> {
    Ok(numerical_radius(m, DEFAULT_TOL)?.interval())
}

pub(crate) fn crawford(m: &ComplexMatrix) -> Result<Interval> {
    Ok(crawford_number(m, DEFAULT_TOL)?.interval())
}

pub(crate) fn norm(m: &ComplexMatrix) -> Interval {
    op_norm(m).interval()
}

pub(crate) fn cnorm(m: &ComplexMatrix) -> Interval {
    min_norm(m).interval()
}

pub(crate) fn rho(m: &ComplexMatrix) -> Result<Interval> {
    Ok(spectral_radius(m)?.interval())
}

/// Stable order for result tables.
pub(crate) fn sorted(mut v: Vec<BoundEvaluation>) -> Vec<BoundEvaluation> {
    v.sort_by(|a, b| a.bound_id.cmp(b.bound_id));
    v
}
