//! Bounds on block operator matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use super::{crawford, norm, sorted, w, BoundEvaluation, Comparison, Direction};
use crate::blocks::{assemble, two_by_two, BlockSpec};
use crate::certified::Interval;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Per-row ingredients `α_k`, `β_k` of the row-wise upper bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowBoundTerms {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowBound {
    pub evaluation: BoundEvaluation,
    pub terms: RowBoundTerms,
}

fn same_square(a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
    a.is_square() && a.shape() == b.shape()
}

fn require_same_square(a: &ComplexMatrix, b: &ComplexMatrix, op: &'static str) -> Result<()> {
    a.require_square()?;
    if !same_square(a, b) {
        return Err(Error::ShapeMismatch {
            op,
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

/// `(α, β)` for a row with diagonal block `d` and off-diagonal norms
/// squared summing to `rest`.
fn row_terms(d: &ComplexMatrix, rest: Interval) -> Result<(Interval, Interval)> {
    let parts = d.cartesian_parts()?;
    let (re, im) = (norm(&parts.re), norm(&parts.im));
    Ok((re + (re.sqr() + rest).sqrt(), im + (im.sqr() + rest).sqrt()))
}

fn row_bound(bound_id: &'static str, reference: &'static str, rows: Vec<(Interval, Interval)>) -> RowBound {
    let mut total = Interval::point(0.0);
    for &(a, b) in &rows {
        total = total + (a.sqr() + b.sqr()).sqrt() * 0.5;
    }
    RowBound {
        evaluation: BoundEvaluation::upper(bound_id, reference, total),
        terms: RowBoundTerms {
            alpha: rows.iter().map(|r| r.0.hi).collect(),
            beta: rows.iter().map(|r| r.1.hi).collect(),
        },
    }
}

/// Upper bound on the numerical radius of the operator matrix whose only
/// nonzero block row is `[A_11, …, A_1n]`.
pub fn firstrow_upper(blocks: &[ComplexMatrix]) -> Result<RowBound> {
    // validates shapes
    BlockSpec::first_row(blocks.to_vec())?;
    let mut rest = Interval::point(0.0);
    for b in &blocks[1..] {
        rest = rest + norm(b).sqr();
    }
    let terms = row_terms(&blocks[0], rest)?;
    Ok(row_bound(
        "first_row",
        "w(T) <= sqrt(a^2 + b^2)/2, a = ||Re A11|| + sqrt(||Re A11||^2 + sum ||A1j||^2), b likewise with Im",
        vec![terms],
    ))
}

/// Upper bound `Σ_k ½√(α_k² + β_k²)` for a block-square grid.
pub fn grid_upper(spec: &BlockSpec) -> Result<RowBound> {
    let n = spec.n();
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let (r, c) = (spec.row_dims()[k], spec.col_dims()[k]);
        if r != c {
            return Err(Error::BlockShape {
                row: k,
                col: k,
                expected: (r, r),
                actual: (r, c),
            });
        }
        let mut rest = Interval::point(0.0);
        for j in (0..n).filter(|&j| j != k) {
            if let Some(b) = spec.block(k, j) {
                rest = rest + norm(b).sqr();
            }
        }
        rows.push(row_terms(&spec.block_or_zero(k, k), rest)?);
    }
    Ok(row_bound(
        "grid_rows",
        "w(T) <= sum_k sqrt(a_k^2 + b_k^2)/2 over block rows",
        rows,
    ))
}

/// Lower bounds on `w([[0, A], [B, 0]])`.
pub fn offdiag_lower(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Vec<BoundEvaluation>> {
    require_same_square(a, b, "offdiag_lower")?;
    const NORM_A: &str = "2w([[0,A],[B,0]])||A|| >= ||A||^2 + m(BA)";
    const MIN_A: &str = "2w([[0,A],[B,0]])||A|| >= c(A)^2 + w(BA)";
    const NORM_B: &str = "2w([[0,A],[B,0]])||B|| >= ||B||^2 + m(AB)";
    const MIN_B: &str = "2w([[0,A],[B,0]])||B|| >= c(B)^2 + w(AB)";
    let (ab, ba) = (a.matmul(b)?, b.matmul(a)?);
    let mut out = Vec::with_capacity(5);
    for (x, xy_m, xy_w, ids) in [
        (a, &ba, &ba, [("offdiag_norm_a", NORM_A), ("offdiag_min_norm_a", MIN_A)]),
        (b, &ab, &ab, [("offdiag_norm_b", NORM_B), ("offdiag_min_norm_b", MIN_B)]),
    ] {
        let nx = norm(x);
        if nx.lo > 0.0 {
            let den = nx * 2.0;
            out.push(BoundEvaluation::lower(ids[0].0, ids[0].1, (nx.sqr() + crawford(xy_m)?) / den));
            let c = super::cnorm(x);
            out.push(BoundEvaluation::lower(ids[1].0, ids[1].1, (c.sqr() + w(xy_w)?) / den));
        } else {
            out.push(BoundEvaluation::inapplicable(ids[0].0, Direction::Lower, ids[0].1));
            out.push(BoundEvaluation::inapplicable(ids[1].0, Direction::Lower, ids[1].1));
        }
    }
    out.push(BoundEvaluation::lower(
        "offdiag_sum_difference",
        "w([[0,A],[B,0]]) >= max(w(A+B), w(A-B))/2",
        w(&a.add(b)?)?.max(w(&a.sub(b)?)?) * 0.5,
    ));
    Ok(sorted(out))
}

fn radius_row_term(wa: Interval, nb: Interval) -> Interval {
    (wa.sqr() + nb * 0.5 * (wa + nb * 0.5)).sqrt()
}

fn product_row_term(a: &ComplexMatrix, b: &ComplexMatrix, wa: Interval) -> Result<Interval> {
    let nab = norm(&a.adjoint().matmul(b)?);
    Ok((wa.sqr() * 2.0 + (nab + norm(b).sqr()) * 0.5).sqrt())
}

fn require_row(a: &ComplexMatrix, b: &ComplexMatrix, op: &'static str) -> Result<()> {
    a.require_square()?;
    if b.rows() != a.rows() {
        return Err(Error::ShapeMismatch {
            op,
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

/// Bounds on `w([[A, B], [0, 0]])` with `A` square and `B` sharing its rows.
pub fn row_bounds(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Vec<BoundEvaluation>> {
    require_row(a, b, "row_bounds")?;
    let wa = w(a)?;
    let nb = norm(b);
    const SUM_DIFF: &str = "w([[A,B],[0,0]]) >= max(w(A+B), w(A-B))/2";
    let sum_diff = if same_square(a, b) {
        BoundEvaluation::lower("row_sum_difference", SUM_DIFF, w(&a.add(b)?)?.max(w(&a.sub(b)?)?) * 0.5)
    } else {
        BoundEvaluation::inapplicable("row_sum_difference", Direction::Lower, SUM_DIFF)
    };
    Ok(sorted(vec![
        BoundEvaluation::upper(
            "row_radius",
            "w([[A,B],[0,0]]) <= sqrt(w(A)^2 + ||B||(w(A) + ||B||/2)/2)",
            radius_row_term(wa, nb),
        ),
        BoundEvaluation::upper(
            "row_product",
            "w([[A,B],[0,0]]) <= sqrt(2w(A)^2 + (||A*B|| + ||B||^2)/2)",
            product_row_term(a, b, wa)?,
        ),
        sum_diff,
    ]))
}

/// Bounds on `w([[A, B], [C, D]])` with `A`, `D` square.
pub fn two_by_two_bounds(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    d: &ComplexMatrix,
) -> Result<Vec<BoundEvaluation>> {
    require_row(a, b, "two_by_two_bounds")?;
    require_row(d, c, "two_by_two_bounds")?;
    if b.cols() != d.rows() || c.cols() != a.rows() {
        return Err(Error::ShapeMismatch {
            op: "two_by_two_bounds",
            left: b.shape(),
            right: c.shape(),
        });
    }
    let (wa, wd) = (w(a)?, w(d)?);
    let (nb, nc) = (norm(b), norm(c));
    let spec = |blocks| BlockSpec::new(vec![a.rows(), d.rows()], vec![a.rows(), d.rows()], blocks);
    let diag = assemble(&spec(vec![Some(a.clone()), None, None, Some(d.clone())])?);
    let off = if b.is_empty() && c.is_empty() {
        ComplexMatrix::zeros(diag.rows(), diag.rows())
    } else {
        assemble(&spec(vec![None, Some(b.clone()), Some(c.clone()), None])?)
    };

    const COMMUTATOR: &str = "w([[A,B],[C,D]]) >= max(w(A), w(D), sqrt(w(BC+CB)/2), sqrt(w(BC-CB)/2))";
    let commutator = if same_square(a, b) && same_square(a, c) && same_square(a, d) {
        let (bc, cb) = (b.matmul(c)?, c.matmul(b)?);
        let anti = (w(&bc.add(&cb)?)? * 0.5).sqrt();
        let comm = (w(&bc.sub(&cb)?)? * 0.5).sqrt();
        BoundEvaluation::lower("two_by_two_commutator", COMMUTATOR, wa.max(wd).max(anti).max(comm))
    } else {
        BoundEvaluation::inapplicable("two_by_two_commutator", Direction::Lower, COMMUTATOR)
    };
    Ok(sorted(vec![
        BoundEvaluation::upper(
            "two_by_two_radius",
            "w([[A,B],[C,D]]) <= row_radius(A,B) + row_radius(D,C)",
            radius_row_term(wa, nb) + radius_row_term(wd, nc),
        ),
        BoundEvaluation::upper(
            "two_by_two_product",
            "w([[A,B],[C,D]]) <= row_product(A,B) + row_product(D,C)",
            product_row_term(a, b, wa)? + product_row_term(d, c, wd)?,
        ),
        commutator,
        BoundEvaluation::lower("pinch_diagonal", "w([[A,B],[C,D]]) >= w([[A,0],[0,D]])", w(&diag)?),
        BoundEvaluation::lower("pinch_off_diagonal", "w([[A,B],[C,D]]) >= w([[0,B],[C,0]])", w(&off)?),
    ]))
}

/// Lower bound on the block anti-diagonal matrix with blocks `A_1, …, A_n`.
pub fn antidiag_lower(blocks: &[ComplexMatrix]) -> Result<BoundEvaluation> {
    let first = blocks.first().ok_or(Error::NoBlocks)?;
    for b in blocks {
        require_same_square(first, b, "antidiag_lower")?;
    }
    let n = blocks.len();
    let mut best = Interval::point(0.0);
    for i in 0..n {
        let (x, y) = (&blocks[i], &blocks[n - 1 - i]);
        let (xy, yx) = (x.matmul(y)?, y.matmul(x)?);
        best = best.max(w(&xy.add(&yx)?)?.sqrt()).max(w(&xy.sub(&yx)?)?.sqrt());
    }
    Ok(BoundEvaluation::lower(
        "anti_diagonal_products",
        "w(antidiag(A_1..A_n)) >= max_i max(sqrt(w(A_iA_j + A_jA_i)), sqrt(w(A_iA_j - A_jA_i)))/sqrt(2), j = n+1-i",
        best * FRAC_1_SQRT_2,
    ))
}

/// `w([[A, B], [B, A]])` against `max(w(A + B), w(A − B))`; equal in theory.
pub fn sym_block_equality(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Comparison> {
    require_same_square(a, b, "sym_block_equality")?;
    let lhs = w(&two_by_two(a, b, b, a)?)?;
    let rhs = w(&a.add(b)?)?.max(w(&a.sub(b)?)?);
    Ok(Comparison {
        bound_id: "symmetric_blocks",
        direction: Direction::Equality,
        lhs: 0.5 * (lhs.lo + lhs.hi),
        rhs: 0.5 * (rhs.lo + rhs.hi),
        reference: "w([[A,B],[B,A]]) = max(w(A+B), w(A-B))",
        scale: norm(a).hi + norm(b).hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{I, ONE};

    fn c(x: f64) -> ComplexMatrix {
        ComplexMatrix::from_real(1, 1, &[x]).unwrap()
    }

    fn real(r: usize, k: usize, d: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(r, k, d).unwrap()
    }

    fn shift() -> ComplexMatrix {
        real(2, 2, &[0.0, 1.0, 0.0, 0.0])
    }

    fn find<'a>(v: &'a [BoundEvaluation], id: &str) -> &'a BoundEvaluation {
        v.iter().find(|e| e.bound_id == id).unwrap()
    }

    fn near(x: f64, y: f64) -> bool {
        (x - y).abs() < 1e-8
    }

    #[test]
    fn offdiag_examples() {
        let b = offdiag_lower(&shift(), &shift()).unwrap();
        assert!(near(find(&b, "offdiag_norm_a").value, 0.5));
        let b = offdiag_lower(&c(1.0), &c(2.0)).unwrap();
        assert!(near(find(&b, "offdiag_sum_difference").value, 1.5));
        let b = offdiag_lower(&c(1.0), &c(1.0)).unwrap();
        assert!(near(find(&b, "offdiag_min_norm_a").value, 1.0));
        let b = offdiag_lower(&c(0.0), &c(1.0)).unwrap();
        assert!(!find(&b, "offdiag_norm_a").applicable);
        assert!(find(&b, "offdiag_norm_b").applicable);
    }

    #[test]
    fn row_examples() {
        let a = real(2, 2, &[0.0, 0.0, 3.0, 1.0]);
        let b = real(2, 2, &[1.0, 2.0, 0.0, 0.0]);
        let r = row_bounds(&a, &b).unwrap();
        assert!(near(find(&r, "row_product").value, (8.0 + 10f64.sqrt()).sqrt()));
        let (wa, nb) = ((1.0 + 10f64.sqrt()) / 2.0, 5f64.sqrt());
        let expected = (wa * wa + 0.5 * nb * (wa + 0.5 * nb)).sqrt();
        assert!(near(find(&r, "row_radius").value, expected));
        assert!((expected - 2.8121029).abs() < 1e-7);
        let r = row_bounds(&c(1.0), &c(1.0)).unwrap();
        assert!(near(find(&r, "row_sum_difference").value, 1.0));
        let r = row_bounds(&c(1.0), &real(1, 2, &[1.0, 1.0])).unwrap();
        assert!(!find(&r, "row_sum_difference").applicable);
        assert!(row_bounds(&c(1.0), &real(2, 1, &[1.0, 1.0])).is_err());
    }

    #[test]
    fn first_row_examples() {
        let r = firstrow_upper(&[c(0.0), c(1.0)]).unwrap();
        assert!(near(r.evaluation.value, FRAC_1_SQRT_2));
        assert!(near(r.terms.alpha[0], 1.0) && near(r.terms.beta[0], 1.0));
        let r = firstrow_upper(&[c(1.0)]).unwrap();
        assert!(near(r.evaluation.value, 1.0));
        let i1 = ComplexMatrix::scalar(I);
        let r = firstrow_upper(&[i1, c(0.0)]).unwrap();
        assert!(near(r.terms.alpha[0], 0.0) && near(r.terms.beta[0], 2.0));
        assert!(near(r.evaluation.value, 1.0));
    }

    #[test]
    fn grid_examples() {
        let spec = BlockSpec::new(vec![1, 1], vec![1, 1], vec![Some(c(0.0)), Some(c(1.0)), None, None]).unwrap();
        assert!(near(grid_upper(&spec).unwrap().evaluation.value, FRAC_1_SQRT_2));
        let spec = BlockSpec::new(
            vec![1, 1],
            vec![1, 1],
            vec![Some(ComplexMatrix::scalar(I)), None, None, Some(ComplexMatrix::scalar(ONE))],
        )
        .unwrap();
        let g = grid_upper(&spec).unwrap();
        assert!(near(g.evaluation.value, 2.0));
        assert_eq!(g.terms.alpha.len(), 2);
        let spec = BlockSpec::new(vec![1], vec![1], vec![Some(c(0.0))]).unwrap();
        assert_eq!(grid_upper(&spec).unwrap().evaluation.value, 0.0);
    }

    #[test]
    fn two_by_two_examples() {
        let r = two_by_two_bounds(&c(0.0), &c(1.0), &c(2.0), &c(0.0)).unwrap();
        assert!(near(find(&r, "two_by_two_commutator").value, 2f64.sqrt()));
        assert!(near(find(&r, "two_by_two_radius").value, 1.5));
        assert!(near(find(&r, "two_by_two_product").value, 0.5f64.sqrt() + 2f64.sqrt()));
        assert!(near(find(&r, "pinch_off_diagonal").value, 1.5));

        let z = ComplexMatrix::zeros(2, 2);
        let b = real(2, 2, &[-1.0, 3.0, 0.0, 1.0]);
        let cc = real(2, 2, &[1.0, 3.0, 0.0, -1.0]);
        let r = two_by_two_bounds(&z, &b, &cc, &z).unwrap();
        assert!(near(find(&r, "two_by_two_commutator").value, 3f64.sqrt()));
    }

    #[test]
    fn anti_diagonal_examples() {
        assert!(near(antidiag_lower(&[c(1.0), c(2.0)]).unwrap().value, 2f64.sqrt()));
        assert!(near(antidiag_lower(&[c(1.0)]).unwrap().value, 1.0));
        let id = ComplexMatrix::identity(2);
        assert!(near(antidiag_lower(&[id.clone(), id.clone(), id]).unwrap().value, 1.0));
    }

    #[test]
    fn symmetric_block_examples() {
        let z = ComplexMatrix::zeros(2, 2);
        let r = sym_block_equality(&shift(), &z).unwrap();
        assert!(near(r.lhs, 0.5) && near(r.rhs, 0.5));
        let r = sym_block_equality(&c(0.0), &c(1.0)).unwrap();
        assert!(near(r.lhs, 1.0) && near(r.rhs, 1.0));
        let r = sym_block_equality(&c(1.0), &c(1.0)).unwrap();
        assert!(near(r.lhs, 2.0) && near(r.rhs, 2.0));
        assert!(r.holds(1e-9));
    }
}
