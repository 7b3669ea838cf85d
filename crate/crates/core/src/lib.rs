//! Two-dimensional fast multipole method for the logarithmic kernel over
//! three self-replicating tilings of the plane: the square quadtree, the
//! hexagonal septree (addressed with base-7 generalized balanced ternary)
//! and the triangle quadtree.
//!
//! The crate is organised bottom-up:
//!
//! - [`gbt`]: base-7 GBT digit arithmetic used by septree addressing.
//! - [`tiling`]: the common hierarchical tiling interface and its three
//!   implementations.
//! - [`fmm`]: expansions, translation operators, the direct-sum oracle and
//!   the tree-driven evaluation pipeline.
//! - [`analysis`]: separation constants, cost model and geometric
//!   separation measurements.
//! - [`sampling`]: uniform point picking in regular polygons and dataset
//!   generation, plus the plain-text point file format.

pub mod analysis;
mod error;
pub mod fmm;
pub mod gbt;
pub mod geometry;
pub mod sampling;
pub mod tiling;

pub use error::{Error, Result};
pub use geometry::Point;
pub use tiling::{CellPolygon, CellRef, Structure, Tiling, TilingConfig};
