//! Momentum maps, norm-squared critical points and stabilizer decompositions
//! for Hamiltonian actions on Kähler manifolds.

pub mod action;
pub mod affine;
pub mod contraction;
pub mod decompose;
pub mod error;
pub mod examples;
pub mod lie;
pub mod linalg;
pub mod normsq;

pub use action::{Derivative, GroupAction, GroupLaw, HamiltonianAction};
pub use affine::{AffineActionSpec, AffineGroup};
pub use contraction::{ContractionSpec, StraightLine};
pub use decompose::{eigendecompose_stabilizer, DecompositionMode, StabilizerDecomposition};
pub use error::{Error, Result};
pub use lie::LieAlgebraSpec;
pub use linalg::{BlockOperator, CompatibleStructure, ComplexVector, Mat, SymplecticSpace, Tolerances, Vector};
pub use normsq::{build_operators, descend, DescentOptions, DescentResult, NormSquared, OperatorBundle};
