//! Orthonormal multiwavelet bases on integer-translated limit sets of Markov
//! interval maps.
//!
//! The symbolic layer ([`symbolic`]) encodes cylinders as admissible words;
//! [`measure`] assigns them masses; [`stepfunc`] holds the finite step
//! functions everything acts on. [`operators`] implements translation and
//! the scaling family in closed form, [`wavelets`] builds mother wavelets and
//! bases, [`transform`] expands functions in them, and [`filters`] covers the
//! Laurent-polynomial filter operators.

pub mod cli;
pub mod config;
pub mod error;
pub mod filters;
pub mod measure;
pub mod operators;
pub mod stepfunc;
pub mod symbolic;
pub mod transform;
pub mod wavelets;

pub use error::{Error, Result};

/// `β = (1 + √5) / 2`.
pub const GOLDEN_MEAN: f64 = 1.618_033_988_749_895;
