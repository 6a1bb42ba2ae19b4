//! The weighted contraharmonic mean of Hermitian positive-definite matrices,
//!
//! ```text
//! C_nu(a, b) = (1 - nu) nu^-1 b + nu (1 - nu)^-1 a - ((1 - nu) a^-1 + nu b^-1)^-1,
//! ```
//!
//! its characterization as the Loewner-order maximum of
//! `(1 - nu)^-1 (nu a - x^* a x) + nu^-1 ((1 - nu) b - y^* b y)` over `x + y = e`,
//! and margin-reporting checks of the inequalities it satisfies.

pub mod error;
pub mod inequalities;
pub mod io;
pub mod matrix;
pub mod means;
pub mod order;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use inequalities::PropertyId;
pub use matrix::{ComplexMatrix, C64};
pub use means::{Decomposition, MeanParams, WitnessPair};
pub use order::{congruence, loewner_leq, EqualityReport, LoewnerVerdict, DEFAULT_TOL};
pub use scalar::{MeanKind, ScalarPair, Weight};
pub use spectral::{eig_hermitian, matrix_function, op_norm, HermitianPD, SpectralDecomposition};
