//! Exact computation with rank-metric codes over finite field extensions.

pub mod code;
pub mod error;
pub mod geometry;
pub mod gf;
pub mod hamming;
pub mod identities;
pub mod io;
pub mod linalg;
pub mod minimal;

pub use code::RankCode;
pub use error::{Error, Result};
pub use geometry::QSystem;
pub use gf::{Elem, FieldCtx, FieldSpec};
pub use linalg::{Budget, Level, Subspace};
