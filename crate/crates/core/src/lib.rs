//! Exact rational arithmetic for the non-convexity index of compact subsets of
//! the line and of their Minkowski sums.

pub mod bounds;
pub mod error;
pub mod fractal;
pub mod index;
pub mod io;
pub mod oracle;
pub mod partitions;
pub mod rational;
pub mod regions;
pub mod set_core;

pub use error::{Error, Result};
pub use rational::Rational;
pub use set_core::{CompactSet1D, Interval};
