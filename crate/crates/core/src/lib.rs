//! Exact and high-precision computation of n-point functions of t-core
//! partitions, with the q-series, theta-function and topological-vertex
//! machinery they are built from.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod cli;
pub mod contour;
pub mod error;
pub mod npoint;
pub mod partitions;
pub mod quasimod;
pub mod symfunc;
pub mod theta;

pub use error::{Error, Result};
