//! Finite-dimensional modular theory for `B(H_d)` in standard form.
//!
//! The algebra `M = B(H_d)` acts on `H_d ⊗ H_d` by `π(X) = X ⊗ 1`, and operators
//! are identified with vectors through the row-major `vec` map. On top of that
//! the crate provides Schmidt decompositions, density matrices and their
//! purifications, the (relative) modular operators and conjugation, modular
//! flows and the Connes cocycle, the natural positive cone, a worked Gibbs/KMS
//! system, multiplication superoperators, and checkers for Powers–Störmer type
//! trace inequalities.

pub mod error;
pub mod matrix;
pub mod modular;
pub mod random;
pub mod schmidt;
pub mod states;
pub mod superoperator;
pub mod vec_ops;
pub mod campaign;
pub mod cone;
pub mod io;
pub mod inequalities;
pub mod kms;
pub mod superops;

pub use error::{Error, Result};
pub use matrix::{c64, ComplexMatrix, SpectralDecomposition};
pub use modular::StandardForm;
pub use schmidt::SchmidtData;
pub use states::{DensityMatrix, PositiveFunctional};
pub use superoperator::SuperOperator;
pub use vec_ops::BipartiteVector;
