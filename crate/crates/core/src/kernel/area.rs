use std::f64::consts::PI;

use num_complex::Complex64;

use super::minkowski::{tangent_towards, Mink};
use super::point::{HPoint, IdealPoint};
use crate::{Error, Result};

/// Vertex of a hyperbolic polygon, finite or ideal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolygonVertex {
    Finite(HPoint),
    Ideal(IdealPoint),
}

impl PolygonVertex {
    pub(crate) fn mink(&self) -> Mink {
        match self {
            PolygonVertex::Finite(p) => p.hyperboloid(),
            PolygonVertex::Ideal(x) => x.null(),
        }
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self, PolygonVertex::Ideal(_))
    }
}

impl From<HPoint> for PolygonVertex {
    fn from(p: HPoint) -> Self {
        PolygonVertex::Finite(p)
    }
}

impl From<IdealPoint> for PolygonVertex {
    fn from(x: IdealPoint) -> Self {
        PolygonVertex::Ideal(x)
    }
}

/// Angle at `v` between the geodesics towards `p` and `q` (points or null
/// vectors), from unit tangent vectors.
pub(crate) fn angle_at(v: Mink, p: Mink, q: Mink) -> f64 {
    let tp = tangent_towards(v, p);
    let tq = tangent_towards(v, q);
    let c = tp.dot(tq);
    let s = tp.cross(tq).dot(v).abs();
    s.atan2(c)
}

/// Angle at the finite vertex `v` between the geodesics towards `p` and `q`,
/// read off in the disk after moving `v` to the centre. Better conditioned
/// than the hyperboloid formula far from the origin.
pub fn vertex_angle(v: &HPoint, p: &PolygonVertex, q: &PolygonVertex) -> f64 {
    let a = v.halfplane_z();
    let dir = |x: &PolygonVertex| -> Complex64 {
        let z = match x {
            PolygonVertex::Finite(h) => h.halfplane_z(),
            PolygonVertex::Ideal(IdealPoint::Real(t)) => Complex64::new(*t, 0.0),
            PolygonVertex::Ideal(IdealPoint::Infinity) => return Complex64::new(1.0, 0.0),
        };
        (z - a) / (z - a.conj())
    };
    (dir(p) / dir(q)).arg().abs()
}

/// Checks that the vertex list is a convex polygon: in the Klein model the
/// polygon must be a convex Euclidean polygon turning once.
fn check_convex(m: &[Mink]) -> Result<()> {
    let n = m.len();
    let k: Vec<[f64; 2]> = m.iter().map(|v| v.klein()).collect();
    let mut sign = 0.0;
    let mut turning = 0.0;
    for i in 0..n {
        let a = k[(i + n - 1) % n];
        let b = k[i];
        let c = k[(i + 1) % n];
        let e1 = [b[0] - a[0], b[1] - a[1]];
        let e2 = [c[0] - b[0], c[1] - b[1]];
        let l1 = e1[0].hypot(e1[1]);
        let l2 = e2[0].hypot(e2[1]);
        if l1 <= 1e-15 || l2 <= 1e-15 {
            return Err(Error::domain(format!("polygon has repeated vertex at index {i}")));
        }
        let cr = e1[0] * e2[1] - e1[1] * e2[0];
        let dt = e1[0] * e2[0] + e1[1] * e2[1];
        turning += cr.atan2(dt);
        if cr.abs() > 1e-12 * l1 * l2 {
            if sign == 0.0 {
                sign = cr.signum();
            } else if cr.signum() != sign {
                return Err(Error::domain(format!("polygon is not convex at vertex {i}")));
            }
        }
    }
    if (turning.abs() - 2.0 * PI).abs() > 1e-6 {
        return Err(Error::domain("polygon is self-intersecting"));
    }
    Ok(())
}

/// Interior angles of a convex polygon (zero at ideal vertices).
pub fn interior_angles(vertices: &[PolygonVertex]) -> Result<Vec<f64>> {
    if vertices.len() < 3 {
        return Err(Error::domain(format!("polygon needs at least 3 vertices, got {}", vertices.len())));
    }
    let m: Vec<Mink> = vertices.iter().map(|v| v.mink()).collect();
    check_convex(&m)?;
    let n = m.len();
    Ok((0..n)
        .map(|i| match vertices[i] {
            PolygonVertex::Ideal(_) => 0.0,
            PolygonVertex::Finite(_) => angle_at(m[i], m[(i + n - 1) % n], m[(i + 1) % n]),
        })
        .collect())
}

/// Area of a convex polygon by the angle defect `(n - 2) pi - sum angles`.
pub fn polygon_area(vertices: &[PolygonVertex]) -> Result<f64> {
    let angles = interior_angles(vertices)?;
    Ok((vertices.len() as f64 - 2.0) * PI - angles.iter().sum::<f64>())
}
