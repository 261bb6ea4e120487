//! Worked examples.

pub mod galilean;
pub mod heisenberg;
pub mod siegel;
pub mod sphere;
pub mod unitary;
pub mod virasoro;
