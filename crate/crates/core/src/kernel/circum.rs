use super::geodesic::{Geodesic, Horocycle};
use super::isometry::Isometry;
use super::minkowski::Mink;
use super::point::{distance, HPoint, IdealPoint, Model};
use crate::{Error, Result, Tolerances};

/// Curve of constant curvature through three points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircumObject {
    MetricCircle { center: HPoint, radius: f64 },
    Horocycle(Horocycle),
    Equidistant { axis: Geodesic, offset: f64 },
}

impl CircumObject {
    pub fn is_circle(&self) -> bool {
        matches!(self, CircumObject::MetricCircle { .. })
    }
}

/// Circle, horocycle or equidistant curve through `a`, `b`, `c`.
///
/// Classification uses the relative `class` band on the discriminant; three
/// points on one geodesic (within `geom`) are degenerate.
pub fn circumobject(a: &HPoint, b: &HPoint, c: &HPoint, tol: &Tolerances) -> Result<CircumObject> {
    let za = a.halfplane_z();
    // work in a frame where `a` sits at i
    let frame = Isometry::new(1.0, -za.re, 0.0, za.im).expect("y > 0");
    let pa = Mink::ORIGIN;
    let pb = frame.apply(&b.to_model(Model::HalfPlane)).hyperboloid();
    let pc = frame.apply(&c.to_model(Model::HalfPlane)).hyperboloid();
    let scale = (pb - pa).euclid_norm() * (pc - pa).euclid_norm() * (pc - pb).euclid_norm();
    if scale <= 1e-300 || (pb - pa).euclid_norm() < 1e-14 || (pc - pa).euclid_norm() < 1e-14 || (pc - pb).euclid_norm() < 1e-14
    {
        return Err(Error::degenerate("circumobject of coincident points"));
    }
    let n = (pb - pa).cross(pc - pa);
    let c0 = n.dot(pa);
    let nn = n.norm2();
    if nn > 0.0 && c0.abs() / nn.sqrt() <= tol.geom {
        return Err(Error::degenerate("three points on one geodesic"));
    }
    let disc = nn / (c0 * c0);
    let back = frame.inverse();
    if disc.abs() <= tol.class {
        let l = if n.0[0] > 0.0 { n } else { -n };
        let ideal = IdealPoint::from_null(l);
        return Ok(CircumObject::Horocycle(Horocycle::new(back.apply_ideal(&ideal), *a)));
    }
    if disc < 0.0 {
        let v = n.normalize_timelike();
        let center = back.apply(&HPoint::from_hyperboloid(v, Model::HalfPlane)).to_model(a.model());
        let radius = distance(&center, a);
        Ok(CircumObject::MetricCircle { center, radius })
    } else {
        let u = n.normalize_spacelike();
        let s = pa.dot(u);
        let m = (pa - u.scale(s)).normalize_timelike();
        let t = m.cross(u).normalize_spacelike();
        let axis = Geodesic::new(IdealPoint::from_null(m - t), IdealPoint::from_null(m + t))?;
        Ok(CircumObject::Equidistant { axis: back.apply_geodesic(&axis), offset: s.abs().asinh() })
    }
}
