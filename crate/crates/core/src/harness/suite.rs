//! Randomized verification of every catalog inequality.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use super::ensemble::{gen_random, mix_seed, EnsembleConfig, EnsembleKind, Sampler};
use crate::blocks::{anti_diagonal, assemble, off_diagonal, pinch, two_by_two, BlockSpec, PinchMode};
use crate::bounds::{
    antidiag_lower, firstrow_upper, grid_upper, offdiag_lower, pointwise_check_with, product_upper, row_bounds,
    sandwich_bounds, scalar_bounds, sym_block_equality, two_by_two_bounds, BoundEvaluation, Comparison, Direction,
};
use crate::certified::Interval;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::range::{numerical_radius, DEFAULT_TOL};
use crate::spectral::op_norm;

/// Total pointwise draws per suite, spread over the trials.
pub const POINTWISE_DRAWS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub trials: usize,
    pub dims: Vec<usize>,
    pub seed: u64,
    /// Relative slack tolerance.
    pub tol: f64,
    /// Every generated matrix is multiplied by this factor.
    pub scale: f64,
}

impl SuiteConfig {
    pub fn new(trials: usize, dims: Vec<usize>, seed: u64, tol: f64) -> Self {
        Self {
            trials,
            dims,
            seed,
            tol,
            scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("at least one trial is required"));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::InvalidArgument("dimensions must be a nonempty list of positive integers"));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) || !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidArgument("tolerance must be nonnegative and scale positive"));
        }
        Ok(())
    }

    fn pointwise_per_trial(&self) -> usize {
        POINTWISE_DRAWS.div_ceil(self.trials)
    }
}

/// Enough to regenerate one input matrix exactly.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fingerprint {
    pub role: &'static str,
    pub kind: EnsembleKind,
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
}

impl Fingerprint {
    /// Regenerates the (unscaled) matrix.
    pub fn regenerate(&self) -> Result<ComplexMatrix> {
        if self.rows == self.cols && self.kind != EnsembleKind::Ginibre {
            gen_random(EnsembleConfig {
                kind: self.kind,
                dim: self.rows,
                seed: self.seed,
            })
        } else {
            Ok(Sampler::new(self.seed).ginibre(self.rows, self.cols))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub bound_id: &'static str,
    pub trial: usize,
    pub inputs: Vec<Fingerprint>,
    pub slack: f64,
    pub scale: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Tightness {
    pub count: usize,
    /// Mean of `slack / scale`.
    pub mean_slack: f64,
    /// Minimum of `slack / scale`.
    pub min_slack: f64,
    pub equality_attained: usize,
    #[serde(skip)]
    sum: f64,
}

impl Tightness {
    fn record(&mut self, relative: f64, tol: f64) {
        if self.count == 0 || relative < self.min_slack {
            self.min_slack = relative;
        }
        self.count += 1;
        self.sum += relative;
        self.mean_slack = self.sum / self.count as f64;
        if relative.abs() <= tol {
            self.equality_attained += 1;
        }
    }

    fn absorb(&mut self, other: &Tightness) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 || other.min_slack < self.min_slack {
            self.min_slack = other.min_slack;
        }
        self.count += other.count;
        self.sum += other.sum;
        self.mean_slack = self.sum / self.count as f64;
        self.equality_attained += other.equality_attained;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SuiteReport {
    pub trials: usize,
    pub checks: usize,
    pub violations: Vec<Violation>,
    pub tightness: BTreeMap<&'static str, Tightness>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Appends the results of the next trial; merging in trial order gives
    /// the same report however the trials were scheduled.
    pub fn merge(&mut self, other: SuiteReport) {
        self.trials += other.trials;
        self.checks += other.checks;
        self.violations.extend(other.violations);
        for (k, t) in &other.tightness {
            self.tightness.entry(k).or_default().absorb(t);
        }
    }
}

struct Trial<'a> {
    cfg: &'a SuiteConfig,
    index: usize,
    report: SuiteReport,
}

struct Input {
    m: ComplexMatrix,
    fp: Fingerprint,
}

impl Trial<'_> {
    fn seed(&self, stream: u64) -> u64 {
        mix_seed(self.cfg.seed, (self.index as u64) << 16 | stream)
    }

    fn square(&self, role: &'static str, stream: u64, kind: EnsembleKind, dim: usize) -> Result<Input> {
        let fp = Fingerprint {
            role,
            kind,
            rows: dim,
            cols: dim,
            seed: self.seed(stream),
        };
        Ok(Input {
            m: fp.regenerate()?.scale_real(self.cfg.scale),
            fp,
        })
    }

    fn rect(&self, role: &'static str, stream: u64, rows: usize, cols: usize) -> Result<Input> {
        let fp = Fingerprint {
            role,
            kind: EnsembleKind::Ginibre,
            rows,
            cols,
            seed: self.seed(stream),
        };
        Ok(Input {
            m: fp.regenerate()?.scale_real(self.cfg.scale),
            fp,
        })
    }

    fn record(&mut self, bound_id: &'static str, slack: f64, scale: f64, inputs: &[&Input]) {
        let tol = self.cfg.tol;
        self.report.checks += 1;
        let relative = if scale > 0.0 { slack / scale } else { slack };
        self.report.tightness.entry(bound_id).or_default().record(relative, tol);
        if slack < -tol * scale {
            self.report.violations.push(Violation {
                bound_id,
                trial: self.index,
                inputs: inputs.iter().map(|i| i.fp.clone()).collect(),
                slack,
                scale,
            });
        }
    }

    /// Checks bounds on `w(target)` with slack relative to `scale`.
    fn bounds(&mut self, evals: &[BoundEvaluation], target: &ComplexMatrix, scale: f64, inputs: &[&Input]) -> Result<()> {
        let w = numerical_radius(target, DEFAULT_TOL)?.interval();
        self.bounds_against(evals, w, scale, inputs);
        Ok(())
    }

    fn bounds_against(&mut self, evals: &[BoundEvaluation], w: Interval, scale: f64, inputs: &[&Input]) {
        for e in evals {
            if let Some(slack) = e.slack_against(w) {
                self.record(e.bound_id, slack, scale, inputs);
            }
        }
    }

    fn comparisons(&mut self, cmps: &[Comparison], inputs: &[&Input]) {
        for c in cmps {
            let slack = match c.direction {
                // equality: the worse of the two one-sided slacks
                Direction::Equality => -c.residual().abs(),
                _ => c.residual(),
            };
            self.record(c.bound_id, slack, c.scale, inputs);
        }
    }

    fn run(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let t = self.index;
        let d = cfg.dims[t % cfg.dims.len()];
        let kinds = EnsembleKind::ALL;
        let kind = |k: usize| kinds[(t + k) % kinds.len()];
        let p = 1 + t % 3;

        let tm = self.square("T", 0, kind(0), d)?;
        let a = self.square("A", 1, kind(1), d)?;
        let b = self.square("B", 2, kind(2), d)?;
        let c = self.square("C", 3, kind(3), d)?;
        let dd = self.square("D", 4, kind(4), d)?;
        let norm = |m: &ComplexMatrix| op_norm(m).upper;

        // single operator
        let w_t = numerical_radius(&tm.m, DEFAULT_TOL)?.interval();
        self.bounds_against(&scalar_bounds(&tm.m)?, w_t, norm(&tm.m), &[&tm]);

        // products and sandwiches
        let ab = a.m.matmul(&b.m)?;
        self.bounds(&product_upper(&a.m, &b.m)?, &ab, norm(&a.m) * norm(&b.m), &[&a, &b])?;
        self.comparisons(&sandwich_bounds(&a.m, &tm.m, &b.m)?, &[&a, &tm, &b]);

        // pointwise inequalities
        for k in 0..cfg.pointwise_per_trial() {
            let x_seed = self.seed(100 + k as u64);
            let x = Sampler::new(x_seed).unit_vector(d);
            let xin = Input {
                m: ComplexMatrix::zeros(0, 0),
                fp: Fingerprint {
                    role: "x",
                    kind: EnsembleKind::Ginibre,
                    rows: d,
                    cols: 1,
                    seed: x_seed,
                },
            };
            let cmps = pointwise_check_with(&a.m, &tm.m, &b.m, &x, w_t.hi)?;
            self.comparisons(&cmps, &[&a, &tm, &b, &xin]);
        }

        // off-diagonal and row forms
        self.bounds(&offdiag_lower(&a.m, &b.m)?, &off_diagonal(&a.m, &b.m)?, norm(&a.m).max(norm(&b.m)), &[&a, &b])?;
        let row_sq = assemble(&BlockSpec::new(vec![d, d], vec![d, d], vec![Some(a.m.clone()), Some(b.m.clone()), None, None])?);
        self.bounds(&row_bounds(&a.m, &b.m)?, &row_sq, norm(&row_sq), &[&a, &b])?;
        let br = self.rect("B_rect", 5, d, p)?;
        let row_rect = assemble(&BlockSpec::new(vec![d, p], vec![d, p], vec![Some(a.m.clone()), Some(br.m.clone()), None, None])?);
        self.bounds(&row_bounds(&a.m, &br.m)?, &row_rect, norm(&row_rect), &[&a, &br])?;

        // first row with rectangular blocks
        let f3 = self.rect("A13", 6, d, 1 + (t / 3) % 2)?;
        let blocks = vec![a.m.clone(), br.m.clone(), f3.m.clone()];
        let fr = assemble(&BlockSpec::first_row(blocks.clone())?);
        let ev = firstrow_upper(&blocks)?.evaluation;
        self.bounds(&[ev], &fr, norm(&fr), &[&a, &br, &f3])?;

        // general 3×3 grid with some zero blocks, and its diagonal pinching
        let gdims = vec![1 + t % 2, d, 1 + (t / 2) % 3];
        let mut grid = Vec::with_capacity(9);
        let mut grid_inputs = Vec::new();
        let mut sel = Sampler::new(self.seed(7));
        for i in 0..3 {
            for j in 0..3 {
                if i == j && i == 0 || sel.uniform() < 0.7 {
                    let g = self.rect("grid", 10 + (3 * i + j) as u64, gdims[i], gdims[j])?;
                    grid.push(Some(g.m.clone()));
                    grid_inputs.push(g);
                } else {
                    grid.push(None);
                }
            }
        }
        let spec = BlockSpec::new(gdims.clone(), gdims, grid)?;
        let gm = assemble(&spec);
        let gin: Vec<&Input> = grid_inputs.iter().collect();
        let w_grid = numerical_radius(&gm, DEFAULT_TOL)?.interval();
        let g_scale = norm(&gm);
        self.bounds_against(&[grid_upper(&spec)?.evaluation], w_grid, g_scale, &gin);
        // with three block rows only the diagonal pinching is a contraction for w
        let wp = numerical_radius(&assemble(&pinch(&spec, PinchMode::Diagonal)), DEFAULT_TOL)?.interval();
        self.record("pinch_grid_diagonal", w_grid.hi - wp.lo, g_scale, &gin);

        // 2×2 operator matrices, square and rectangular
        let full = two_by_two(&a.m, &b.m, &c.m, &dd.m)?;
        self.bounds(&two_by_two_bounds(&a.m, &b.m, &c.m, &dd.m)?, &full, norm(&full), &[&a, &b, &c, &dd])?;
        let cr = self.rect("C_rect", 8, p, d)?;
        let dr = self.square("D_small", 9, kind(4), p)?;
        let spec = BlockSpec::new(
            vec![d, p],
            vec![d, p],
            vec![Some(a.m.clone()), Some(br.m.clone()), Some(cr.m.clone()), Some(dr.m.clone())],
        )?;
        let rect = assemble(&spec);
        self.bounds(&two_by_two_bounds(&a.m, &br.m, &cr.m, &dr.m)?, &rect, norm(&rect), &[&a, &br, &cr, &dr])?;

        // anti-diagonal forms, n = 1, 2, 3
        let n = 1 + t % 3;
        let list = [&a, &b, &c];
        let anti_blocks: Vec<ComplexMatrix> = list[..n].iter().map(|i| i.m.clone()).collect();
        let anti = anti_diagonal(&anti_blocks)?;
        self.bounds(&[antidiag_lower(&anti_blocks)?], &anti, norm(&anti), &list[..n])?;

        // symmetric block equality
        self.comparisons(&[sym_block_equality(&a.m, &b.m)?], &[&a, &b]);
        Ok(())
    }
}

/// Runs trial `index` of the suite on its own; merging the trials in index
/// order reproduces [`run_suite_with`].
pub fn run_trial(cfg: &SuiteConfig, index: usize) -> Result<SuiteReport> {
    cfg.validate()?;
    let mut trial = Trial {
        cfg,
        index,
        report: SuiteReport {
            trials: 1,
            ..SuiteReport::default()
        },
    };
    trial.run()?;
    Ok(trial.report)
}

pub fn run_suite_with(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let mut report = SuiteReport::default();
    for t in 0..cfg.trials {
        report.merge(run_trial(cfg, t)?);
    }
    Ok(report)
}

pub fn run_suite(trials: usize, dims: &[usize], seed: u64, tol: f64) -> Result<SuiteReport> {
    run_suite_with(&SuiteConfig::new(trials, dims.to_vec(), seed, tol))
}
