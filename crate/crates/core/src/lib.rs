//! Finite F_p-braces: construction, axiom checking and structural analysis.
//!
//! A brace is stored as its λ-table over the additive group F_p^n. The
//! [`family`] module builds the four-parameter family of order p^4 whose
//! circle group has a centre of order p and which is left but not right
//! nilpotent; the remaining modules are generic and work on any table.

pub mod analysis;
pub mod brace;
pub mod chains;
pub mod exec;
pub mod family;
pub mod hol;
pub mod ideals;
pub mod linalg;
pub mod prelie;
pub mod report;
pub mod subspace;
pub mod ybe;

pub use brace::{BraceError, BraceOps, BraceTable, Element};
pub use exec::{Budget, Exec};
pub use family::{build_brace, FamilyError, FamilyParams};
pub use linalg::{FpMatrix, FpScalar, FpVector, LinalgError, Prime};
pub use report::{Check, Mode, Report};
pub use subspace::Subspace;
