//! Exact construction and mechanical verification of tetrablock isometric
//! dilations.
//!
//! Operators live on graded Hilbert spaces ([`SpaceSpec`]) and are stored as
//! exact column maps ([`LocalOp`]), so every operator identity is checked on
//! basis vectors with no truncation error. Dense windows are only used where a
//! number (a norm, a square root, a least-squares solve) has to be produced.
//!
//! Layout:
//! - [`space`], [`vector`], [`op`], [`dense`], [`norm`]: lazy banded operator
//!   algebra and its dense bridges.
//! - [`hardy`]: shifts, Toeplitz operators and symbols on `H^2(E)`.
//! - [`tetrablock`]: the domain geometry and the operator predicates
//!   (defect operators, fundamental operators, isometry and dilation checks).
//! - [`constructions`]: builders for the concrete families and the
//!   Toeplitz-form dilation with its Ξ conditions.

pub mod constructions;
pub mod dense;
pub mod hardy;
pub mod norm;
pub mod op;
pub mod space;
pub mod tetrablock;
pub mod triple;
pub mod vector;

pub use dense::{psd_sqrt_dense, truncate_dense, DenseWindow};
pub use hardy::{shift_op, toeplitz_from_symbol, OperatorSymbol};
pub use norm::{operator_norm_estimate, NormEstimate};
pub use op::{LocalOp, WindowCheck};
pub use space::{BasisIndex, Space, SpaceSpec, Step};
pub use triple::{DilationTriple, OperatorTriple};
pub use vector::FinVec;

pub type Scalar = num_complex::Complex64;

/// Default copy depth of the windows on which identities are checked.
pub const DEFAULT_WINDOW_DEPTH: usize = 8;
/// Tolerance for identities between exact constructions (float rounding only).
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch { expected: String, found: String },
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid basis index: {0}")]
    InvalidIndex(String),
    #[error("non-finite scalar")]
    NonFinite,
    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("operator is not a contraction (norm at least {lower})")]
    NotContraction { lower: f64 },
    #[error("operators do not commute (deviation {deviation:e})")]
    NotCommuting { deviation: f64 },
    #[error("no admissible fundamental pair at depth {depth} (residuals {residual1:e}, {residual2:e})")]
    NoAdmissiblePair { depth: usize, residual1: f64, residual2: f64 },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
