//! Centered dual complexes of point sets in the hyperbolic plane.
//!
//! Modules, bottom up:
//! - [`kernel`]: points, geodesics, horocycles, circumobjects, isometries, areas
//! - [`cyclic`]: circumradius, defect and gradient of cyclic polygons
//! - [`voronoi`]: Voronoi tessellation and Delaunay dual of finite site sets
//! - [`centered`]: non-centered forests and centered dual 2-cells
//! - [`admissible`]: admissible spaces of rooted trees and defect minimisation
//! - [`surfaces`]: maximal injectivity radius and extremal polygons

pub mod admissible;
pub mod centered;
pub mod cyclic;
pub mod error;
pub mod kernel;
pub mod roots;
pub mod surfaces;
pub mod tolerance;
pub mod voronoi;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
