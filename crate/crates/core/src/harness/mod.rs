//! Randomized verification of the bounds catalog, plus curated examples.

pub mod ensemble;
mod examples;
mod suite;

pub use ensemble::{gen_random, mix_seed, EnsembleConfig, EnsembleKind, Sampler};
pub use examples::{
    equality_regressions, worked_examples, tightness_report, EqualityCase, ExampleRow, EXAMPLE_TOL, SYMMETRIC_PAIRS,
};
pub use suite::{
    run_suite, run_suite_with, run_trial, Fingerprint, SuiteConfig, SuiteReport, Tightness, Violation, POINTWISE_DRAWS,
};
