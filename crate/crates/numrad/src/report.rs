//! Tables produced by the command-line tool, and their CSV/JSON/text forms.

use std::io::{self, Write};
use std::thread;

use numrad_core::blocks::{assemble, BlockSpec};
use numrad_core::bounds::{
    antidiag_lower, firstrow_upper, grid_upper, offdiag_lower, row_bounds, scalar_bounds, sym_block_equality,
    two_by_two_bounds, BoundEvaluation,
};
use numrad_core::certified::CertifiedValue;
use numrad_core::error::Result;
use numrad_core::harness::{run_trial, ExampleRow, SuiteConfig, SuiteReport};
use numrad_core::matrix::ComplexMatrix;
use numrad_core::range::{crawford_number, numerical_radius};
use numrad_core::spectral::{min_norm, op_norm, spectral_radius};
use serde::Serialize;

use crate::format::fmt_f64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quantity {
    pub name: &'static str,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Quantity {
    fn new(name: &'static str, c: &CertifiedValue) -> Self {
        Self {
            name,
            value: c.value,
            lower: c.lower,
            upper: c.upper,
        }
    }
}

/// `w`, `m`, `c`, `r` and the operator norm of a square matrix.
pub fn quantities(t: &ComplexMatrix, tol: f64) -> Result<Vec<Quantity>> {
    t.require_square()?;
    Ok(vec![
        Quantity::new("w", &numerical_radius(t, tol)?),
        Quantity::new("m", &crawford_number(t, tol)?),
        Quantity::new("c", &min_norm(t)),
        Quantity::new("r", &spectral_radius(t)?),
        Quantity::new("norm", &op_norm(t)),
    ])
}

pub fn write_quantities(out: &mut dyn Write, q: &[Quantity]) -> io::Result<()> {
    for x in q {
        writeln!(out, "{:<5} {:>12.7}  [{}, {}]", x.name, x.value, fmt_f64(x.lower), fmt_f64(x.upper))?;
    }
    Ok(())
}

/// Splits a square matrix into an `r × r` grid of equal blocks.
pub fn split_blocks(t: &ComplexMatrix, r: usize) -> Option<Vec<ComplexMatrix>> {
    let n = t.rows();
    if r == 0 || !t.is_square() || !n.is_multiple_of(r) {
        return None;
    }
    let d = n / r;
    Some((0..r * r).map(|k| t.submatrix((k / r) * d, (k % r) * d, d, d)).collect())
}

/// Every bound that applies to `t`, with slack against its certified `w`.
///
/// Single-operator bounds always apply. With `blocks = Some(r)` the matrix
/// is read as an `r × r` grid of equal blocks and the grid bound is added,
/// plus whichever layout-specific bounds match its zero pattern: the
/// first-row and anti-diagonal forms for any `r`, and for `r = 2` the 2×2,
/// row, off-diagonal and symmetric-block bounds.
pub fn bound_table(t: &ComplexMatrix, blocks: Option<usize>, tol: f64) -> Result<Vec<BoundEvaluation>> {
    t.require_square()?;
    let w = numerical_radius(t, tol)?.interval();
    let mut out = scalar_bounds(t)?;
    if let Some(r) = blocks {
        let b = split_blocks(t, r).ok_or(numrad_core::error::Error::InvalidArgument("matrix does not divide into the requested block grid"))?;
        let zero = |k: usize| b[k].is_zero();
        if !t.is_zero() {
            let d = t.rows() / r;
            let spec = BlockSpec::new(vec![d; r], vec![d; r], b.iter().cloned().map(Some).collect())?;
            debug_assert_eq!(&assemble(&spec), t);
            out.push(grid_upper(&spec)?.evaluation);
        }
        if r > 1 && (r..r * r).all(zero) {
            out.push(firstrow_upper(&b[..r])?.evaluation);
        }
        if (0..r * r).all(|k| k % r + k / r == r - 1 || zero(k)) {
            let anti: Vec<ComplexMatrix> = (0..r).map(|i| b[i * r + r - 1 - i].clone()).collect();
            out.push(antidiag_lower(&anti)?);
        }
        if r == 2 {
            let (a, bb, c, d) = (&b[0], &b[1], &b[2], &b[3]);
            out.extend(two_by_two_bounds(a, bb, c, d)?);
            if c.is_zero() && d.is_zero() {
                out.extend(row_bounds(a, bb)?);
            }
            if a.is_zero() && d.is_zero() {
                out.extend(offdiag_lower(bb, c)?);
            }
            if a == d && bb == c {
                out.push(sym_block_equality(a, bb)?.to_evaluation());
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|e| if e.slack.is_some() { e } else { e.with_slack(w) })
        .collect())
}

fn opt(x: Option<f64>) -> String {
    x.filter(|v| v.is_finite()).map(fmt_f64).unwrap_or_default()
}

pub const BOUND_COLUMNS: [&str; 6] = ["bound_id", "direction", "value", "reference", "applicable", "slack"];

pub fn write_bounds_csv(out: &mut dyn Write, rows: &[BoundEvaluation]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BOUND_COLUMNS)?;
    for e in rows {
        w.write_record([
            e.bound_id.to_string(),
            e.direction.as_str().to_string(),
            opt(Some(e.value)),
            e.reference.to_string(),
            e.applicable.to_string(),
            opt(e.slack),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_bounds_text(out: &mut dyn Write, rows: &[BoundEvaluation]) -> io::Result<()> {
    let id_width = rows.iter().map(|e| e.bound_id.len()).max().unwrap_or(8).max(8);
    writeln!(out, "{:<id_width$}  {:<9}  {:>12}  {:>12}  reference", "bound_id", "direction", "value", "slack")?;
    for e in rows {
        let value = if e.applicable { format!("{:.7}", e.value) } else { "n/a".into() };
        let slack = e.slack.map_or_else(String::new, |s| format!("{s:.3e}"));
        writeln!(
            out,
            "{:<id_width$}  {:<9}  {:>12}  {:>12}  {}",
            e.bound_id,
            e.direction.as_str(),
            value,
            slack,
            e.reference
        )?;
    }
    Ok(())
}

pub fn write_examples(out: &mut dyn Write, rows: &[ExampleRow]) -> io::Result<()> {
    let width = rows.iter().map(|r| r.label.len()).max().unwrap_or(5);
    writeln!(out, "{:<width$}  {:>10}  {:>10}  {:>9}  {:>10}  status", "label", "computed", "expected", "diff", "prior")?;
    for r in rows {
        let prior = r.prior.map_or_else(|| "-".into(), |p| format!("{p:.7}"));
        writeln!(
            out,
            "{:<width$}  {:>10.7}  {:>10.7}  {:>9.2e}  {:>10}  {}",
            r.label,
            r.computed,
            r.expected,
            r.diff,
            prior,
            if r.passed() { "ok" } else { "MISMATCH" }
        )?;
    }
    Ok(())
}

/// Runs the suite with trials spread over `threads` workers; the report is
/// merged in trial order, so it does not depend on `threads`.
pub fn run_suite_parallel(cfg: &SuiteConfig, threads: usize) -> Result<SuiteReport> {
    cfg.validate()?;
    let threads = threads.clamp(1, cfg.trials);
    let parts: Vec<Result<Vec<(usize, SuiteReport)>>> = thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|k| {
                s.spawn(move || {
                    (k..cfg.trials)
                        .step_by(threads)
                        .map(|t| run_trial(cfg, t).map(|r| (t, r)))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite worker panicked")).collect()
    });
    let mut all = Vec::with_capacity(cfg.trials);
    for p in parts {
        all.extend(p?);
    }
    all.sort_by_key(|(t, _)| *t);
    let mut report = SuiteReport::default();
    for (_, r) in all {
        report.merge(r);
    }
    Ok(report)
}

pub fn write_suite_text(out: &mut dyn Write, r: &SuiteReport) -> io::Result<()> {
    writeln!(out, "trials: {}  checks: {}  violations: {}", r.trials, r.checks, r.violations.len())?;
    for v in &r.violations {
        writeln!(out, "VIOLATION {} trial {} slack {:e} scale {:e}", v.bound_id, v.trial, v.slack, v.scale)?;
        for f in &v.inputs {
            writeln!(out, "    {} {} {}x{} seed {}", f.role, f.kind.as_str(), f.rows, f.cols, f.seed)?;
        }
    }
    let width = r.tightness.keys().map(|k| k.len()).max().unwrap_or(8);
    writeln!(out, "{:<width$}  {:>6}  {:>11}  {:>11}  {:>6}", "bound_id", "count", "mean_slack", "min_slack", "equal")?;
    for (id, t) in &r.tightness {
        writeln!(
            out,
            "{id:<width$}  {:>6}  {:>11.3e}  {:>11.3e}  {:>6}",
            t.count, t.mean_slack, t.min_slack, t.equality_attained
        )?;
    }
    Ok(())
}
