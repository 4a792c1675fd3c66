//! Tropical configuration spaces via scaffolds and stacky Chow quotients.

#![allow(clippy::needless_range_loop)]

pub mod chow;
pub mod cone;
pub mod error;
pub mod expansions;
pub mod fan;
pub mod io;
pub mod linalg;
pub mod parse;
pub mod reference;
pub mod scaffold;
pub mod stacky;

pub use error::{Error, Result};
