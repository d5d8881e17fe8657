//! Exact computations on nilpotent Lie algebras with complex structures:
//! structure equations, integrability, central series, Chevalley-Eilenberg
//! cohomology and special Hermitian metrics.

pub mod catalog;
pub mod cohomology;
pub mod cxstruct;
pub mod dsl;
pub mod error;
pub mod exterior;
pub mod hermitian;
pub mod liealg;
pub mod linalg;
pub mod ring;
pub mod scalars;

pub use error::{Error, Result};
