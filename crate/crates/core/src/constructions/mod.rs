//! Builders for the concrete operator families and the Toeplitz-form
//! dilation.

pub mod explicit;
pub mod pal;
pub mod toeplitz_form;
pub mod xi_search;

pub use explicit::{adjoint_dilation, explicit_dilation, AdjointData, AdjointDilation};
pub use pal::{pal_defect, pal_fundamentals, pal_triple, PalParameters};
pub use toeplitz_form::{toeplitz_dilation, xi_conditions, XiCandidate, XiReport};
pub use xi_search::{xi_search, XiSearchResult, XiStart};
