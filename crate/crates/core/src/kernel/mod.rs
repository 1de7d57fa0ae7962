//! Hyperbolic plane primitives: points in the half-plane and disk models,
//! ideal points, geodesics, horocycles, circumobjects, isometries and
//! polygon areas.

mod area;
mod circum;
mod clip;
mod geodesic;
mod isometry;
pub(crate) mod minkowski;
mod point;

pub use area::{interior_angles, polygon_area, vertex_angle, PolygonVertex};
pub use clip::intersection_area;
pub use circum::{circumobject, CircumObject};
pub use geodesic::{midpoint, perpendicular_bisector, EuclideanHorocycle, Geodesic, Horocycle};
pub use isometry::{Isometry, Orientation};
pub use point::{distance, HPoint, IdealPoint, Model};
