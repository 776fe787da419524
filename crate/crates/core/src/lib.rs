//! Exact and numerical tools for linear differential systems on the
//! projective line: series solutions, arithmetic growth certificates,
//! auxiliary polynomial constructions, zero estimates, Nevanlinna growth
//! functionals, integer-relation probing and monodromy of isomonodromic
//! families.

pub mod auxiliary;
pub mod connection;
pub mod error;
pub mod exact;
pub mod expr;
pub mod independence;
pub mod isomono;
pub mod lg;
pub mod mp;
pub mod nevanlinna;
pub mod zero_lemma;

pub use error::{Error, Result};
