//! Desk-scale toolkit for a hierarchical one-dimensional effectively closed
//! subshift and the two-dimensional pattern counting built on top of it.

pub mod bigfmt;
mod error;
pub mod grid2d;
pub mod language;
pub mod overlaps;
pub mod params;
pub mod thermo;
pub mod words;

pub use error::{Error, Result};
