//! Logarithmic class groups of number fields at finite `l`-adic precision,
//! and capitulation of logarithmic classes in extensions.
//!
//! The crate is organised bottom-up: [`padic`] and [`zlmod`] provide the
//! `Z_l` scalars and linear algebra, [`numfield`] the arithmetic of number
//! fields, [`units_classes`] class groups and units, [`logclass`] the
//! logarithmic valuations and class groups, and [`capitulation`] the
//! extension maps.

pub mod capitulation;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod logclass;
pub mod numfield;
pub mod padic;
pub mod poly;
pub mod units_classes;
mod ser;
pub mod zlmod;

pub use error::{Error, Result};
