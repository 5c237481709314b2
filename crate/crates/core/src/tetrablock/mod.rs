//! Tetrablock geometry and the operator predicates built on it.

pub mod checks;
pub mod defect;
pub mod fundamental;
pub mod geometry;

pub use checks::{dilation_compression_check, tetrablock_isometry_check, CompressionReport, IsometryReport, Monomial};
pub use defect::{defect_operator, DefectData};
pub use fundamental::{commutator_balance, fundamental_relations_check, solve_fundamental, FundamentalPair};
pub use geometry::{membership_oracle, pi_map, Membership, MembershipMode, MembershipResult, TetrablockPoint};
