//! SIC-POVM machinery and the probability representation of quantum states.
//!
//! This crate builds and verifies symmetric informationally complete
//! measurements (SICs), searches for new SIC fiducial vectors by minimizing
//! the Weyl–Heisenberg frame potential, translates states and the Born rule
//! into pure probability language (the "urgleichung"), proves qutrit
//! Kochen–Specker ray sets noncolorable by exact search, and simulates
//! de Finetti-style Bayesian tomography.
//!
//! The main entry points, by capability:
//!
//! - [`sic::builtin_fiducial`] / [`sic::orbit`] / [`sic::verify_sic`] —
//!   construct the built-in SICs (qubit tetrahedron, Hesse qutrit, Hoggar
//!   d = 8) and check the defining overlap and resolution conditions.
//! - [`search::search_fiducial`] / [`search::polish`] — seeded random-restart
//!   gradient descent on the unit sphere plus a Newton polish stage.
//! - [`prob`] — state ↔ SIC-probability conversion, the Born rule as an
//!   affine correction to the law of total probability, qplex membership,
//!   and Dutch-book coherence checking.
//! - [`ks`] — exact ℤ[√2] ray arithmetic, the 33-ray Peres construction,
//!   exhaustive noncolorability search, and the 18-letter parity argument.
//! - [`definetti`] — finite-mixture exchangeable states, simulated SIC
//!   tomography data, and Bayesian posterior updating.
//! - [`protocols`] — exact classical demos: the coin-box teleportation
//!   protocol and unitary overlap preservation.
//!
//! Every random operation takes an explicit 64-bit seed and is bit-for-bit
//! reproducible, including under parallel execution. The `sicprob` binary
//! (see the `cli` module) exposes the same capabilities with stable JSON file
//! formats; the `examples/` directory holds one runnable walkthrough per
//! capability.

pub mod cli;
pub mod definetti;
pub mod ks;
pub mod linalg;
pub mod prob;
pub mod protocols;
pub mod sample;
pub mod search;
pub mod sic;
pub mod wh;

pub use linalg::{ComplexMatrix, ComplexVector};
pub use sic::{Fiducial, Sic, VerificationReport};
pub use wh::{DisplacementIndex, GroupSpec};

/// Errors shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two operands (or an operand and a target shape) have incompatible dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// A result dimension would exceed the dense-matrix cap.
    #[error("size overflow: dimension {dim} exceeds cap {cap}")]
    SizeOverflow { dim: usize, cap: usize },
    /// A matrix required to be Hermitian is not, within tolerance.
    #[error("matrix is not Hermitian (max |M - M†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    /// The iterative eigensolver exhausted its sweep budget.
    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },
    /// A dimension argument is out of the supported range.
    #[error("bad dimension {d}: {reason}")]
    BadDimension { d: usize, reason: &'static str },
    /// An index, vector, or table has the wrong shape for the requested operation.
    #[error("shape mismatch: {reason}")]
    ShapeMismatch { reason: String },
    /// No built-in fiducial is shipped for this dimension.
    #[error("no built-in fiducial for dimension {d} (have 2, 3, 8)")]
    NoBuiltin { d: usize },
    /// A Bloch-coordinate triple lies outside the unit ball.
    #[error("point is off the Bloch sphere: x²+y²+z² = {norm_sq}")]
    OffBlochSphere { norm_sq: f64 },
    /// A matrix fails the density-matrix preconditions.
    #[error("not a valid quantum state: {reason}")]
    NotAState { reason: String },
    /// A set of operators fails the POVM preconditions.
    #[error("not a valid POVM: {reason}")]
    NotAPovm { reason: String },
    /// A matrix required to be unitary is not, within tolerance.
    #[error("matrix is not unitary (max |U†U - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    /// A probability vector has the wrong number of outcomes for the (q, d) family.
    #[error("bad outcome count: expected {expected}, got {got}")]
    BadOutcomeCount { expected: usize, got: usize },
    /// No restart reached the requested residual; the best attempt is attached.
    #[error("search exhausted {restarts} restarts (best residual {residual:.3e} > tolerance)")]
    Exhausted {
        restarts: usize,
        residual: f64,
        best: Box<search::SearchResult>,
    },
    /// Polish was handed a vector that is not already near a frame-potential minimum.
    #[error("not near a solution: frame-potential residual {residual:.3e} > 1e-6")]
    NotNearSolution { residual: f64 },
    /// The coloring search passed its node cap before completing.
    #[error("coloring search exceeded its node budget of {cap}")]
    SearchBudgetExceeded { cap: u64 },
    /// A parity-argument table violates the column-size or letter-multiplicity rules.
    #[error("malformed table: {reason}")]
    MalformedTable { reason: String },
    /// Every candidate assigns probability zero to the observed data.
    #[error("zero evidence: all posterior weights vanished")]
    ZeroEvidence,
    /// A probability or price argument lies outside its allowed interval.
    #[error("out of range: {reason}")]
    OutOfRange { reason: String },
    /// File I/O failure (CLI and catalog plumbing).
    #[error("i/o error: {0}")]
    Io(String),
    /// JSON (de)serialization failure (CLI and catalog plumbing).
    #[error("json error: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
