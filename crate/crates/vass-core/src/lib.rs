//! Exact analysis of vector addition systems with states: cycle spaces and
//! geometric dimension, sign-reflecting and support projections, run
//! certificates, and reachability reductions. All arithmetic is exact.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod certify;
pub mod geodim;
pub mod geom;
pub mod linalg;
pub mod model;
pub mod projection;
pub mod reach;
pub mod vector;

mod graph;

pub use model::{Configuration, Run, Transition, Vass};
pub use vector::IntVector;
