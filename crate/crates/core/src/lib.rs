//! Simplicial complexes, cone functions and coboundary expansion of buildings.

pub mod caps;
pub mod catalog;
pub mod chains;
pub mod cones;
pub mod cosets;
pub mod error;
pub mod expansion;
pub mod fqlinalg;
pub mod io;
pub mod simplicial;
pub mod snf;
pub mod buildings;
pub mod standard;

pub use error::{HdxError, Result};
