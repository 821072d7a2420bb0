#![no_std]
extern crate alloc;

pub mod blocks;
pub mod bounds;
pub mod certified;
pub mod eigen;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod range;
pub mod spectral;
