//! Exact spin-geometric verification toolkit.
//!
//! The crate certifies algebraic and differential-geometric identities on
//! left-invariant fixtures: Clifford algebras of arbitrary signature and
//! their matrix representations, Levi-Civita connections and curvature of
//! metric Lie algebras, coupled spinor systems ("harmful structures"),
//! Einstein extensions by derivations, and the generalized-cylinder
//! evolution system with constraint monitoring.
//!
//! All verification runs over exact Gaussian-rational scalars by default,
//! so residuals are certified identically zero rather than merely small;
//! the same code runs over complex doubles for the time integrator.

pub mod clifford;
pub mod flow;
pub mod harmful;
pub mod lie;
pub mod matrix;
pub mod model;
pub mod report;
pub mod rep;
pub mod scalar;
pub mod spin;

#[cfg(test)]
pub(crate) mod testfix;

pub use clifford::{Blade, FrameMetric, Multivector, Signature};
pub use harmful::{HarmfulKind, HarmfulStructure, Harmfulness};
pub use lie::{Connection, CurvatureTensor, Derivation, LieAlgebra, SymEndo};
pub use matrix::Matrix;
pub use model::ModelFile;
pub use rep::{CliffordRep, HypersurfaceMult, Spinor};
pub use report::{CheckResult, ReportDocument};
pub use scalar::{Cf64, Exact, Rational, Scalar};
pub use spin::SpinConnection;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("blade index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires even dimension, got {0}")]
    OddDimension(usize),
    #[error("Jacobi identity fails at frame triple ({0}, {1}, {2})")]
    JacobiFailure(usize, usize, usize),
    #[error("endomorphism is not g-symmetric at entry ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("matrix D is not a derivation: fails on bracket [e{0}, e{1}]")]
    NotDerivation(usize, usize),
    #[error("degenerate structure: {0}")]
    Degenerate(String),
    #[error("multivector contains the normal direction (index {0})")]
    ContainsNormal(usize),
    #[error("singular metric encountered at t = {0}")]
    SingularMetric(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("spinor is not Killing: max residual {0} in direction e{1}")]
    NotKilling(f64, usize),
    #[error("no spinor-basis convention matches the given data")]
    NoConvention,
    #[error("model error at {path}: {message}")]
    Model { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
