//! Matrix file formats, reports, plots and the command-line front end for
//! `numrad-core`.

pub mod cli;
pub mod format;
pub mod plot;
pub mod report;
