//! Reconstruction of finite groupoids from semigroups of partial functions.
//!
//! The crate models finite (hence discrete, ample) groupoids, finite
//! coefficient semigroupoids and rings, families of coefficient-valued
//! partial functions on arrows, and the machinery that recovers a groupoid
//! from such a family: the domination relation, ultrafilters, normalisers
//! and the diagonal-isomorphism pipeline for Steinberg-style algebras.
//! Every theorem-level statement comes with a checker that reports whether
//! its hypotheses hold separately from whether its conclusion holds.

// Tables are indexed by arrow and element ids throughout.
#![allow(clippy::needless_range_loop)]

pub mod arrowset;
pub mod bumpy;
pub mod coefficients;
pub mod constructions;
pub mod corpus;
pub mod domination;
pub mod error;
pub mod family;
pub mod function;
pub mod groupoid;
pub mod laws;
pub mod morphism;
pub mod normaliser;
pub mod pipeline;
pub mod report;
pub mod schema;
pub mod suite;
pub mod ultrafilter;

pub use arrowset::ArrowSet;
pub use coefficients::{Coefficients, FiniteRing, Semigroupoid};
pub use error::{CoefficientError, Error, FamilyError, GroupoidError, MorphismError};
pub use family::{FnFamily, ProductMode};
pub use function::PartialFn;
pub use groupoid::FiniteGroupoid;
pub use report::{Check, Report, Status};

/// Version string embedded in every emitted report.
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
