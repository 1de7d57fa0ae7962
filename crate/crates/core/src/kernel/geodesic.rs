use super::minkowski::{tangent_towards, Mink};
use super::point::{HPoint, IdealPoint, Model};
use crate::{Error, Result};

/// Oriented complete geodesic, from `start` to `end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    start: IdealPoint,
    end: IdealPoint,
}

impl Geodesic {
    pub fn new(start: IdealPoint, end: IdealPoint) -> Result<Self> {
        if start.approx_eq(&end, 1e-14) {
            return Err(Error::domain(format!("geodesic endpoints coincide: {start}")));
        }
        Ok(Geodesic { start, end })
    }

    pub(crate) fn from_endpoints_unchecked(start: IdealPoint, end: IdealPoint) -> Self {
        Geodesic { start, end }
    }

    /// Geodesic through `p` then `q`.
    pub fn through(p: &HPoint, q: &HPoint) -> Result<Self> {
        let x = p.hyperboloid();
        let y = q.hyperboloid();
        if (x - y).euclid_norm() <= 1e-15 * x.euclid_norm() {
            return Err(Error::degenerate("geodesic through coincident points"));
        }
        let t = tangent_towards(x, y);
        Ok(Geodesic {
            start: IdealPoint::from_null(x - t),
            end: IdealPoint::from_null(x + t),
        })
    }

    /// Geodesic through `p` heading to the ideal point `xi`.
    pub fn ray(p: &HPoint, xi: &IdealPoint) -> Self {
        let x = p.hyperboloid();
        let t = tangent_towards(x, xi.null());
        Geodesic { start: IdealPoint::from_null(x - t), end: *xi }
    }

    pub fn start(&self) -> IdealPoint {
        self.start
    }

    pub fn end(&self) -> IdealPoint {
        self.end
    }

    pub fn reversed(&self) -> Self {
        Geodesic { start: self.end, end: self.start }
    }

    /// Unit spacelike normal; points on the left have positive product.
    pub(crate) fn unit_normal(&self) -> Mink {
        let a = self.start.null();
        let b = self.end.null();
        a.cross(b).scale(1.0 / a.dot(b).abs())
    }

    /// Signed distance from `p`, positive on the left of the oriented
    /// geodesic.
    pub fn signed_distance(&self, p: &HPoint) -> f64 {
        p.hyperboloid().dot(self.unit_normal()).asinh()
    }

    pub fn contains(&self, p: &HPoint, tol: f64) -> bool {
        self.signed_distance(p).abs() <= tol
    }
}

/// Perpendicular bisector of `[p, q]`, oriented so that `p` lies on its left.
pub fn perpendicular_bisector(p: &HPoint, q: &HPoint) -> Result<Geodesic> {
    let x = p.hyperboloid();
    let y = q.hyperboloid();
    let n = x - y;
    if n.euclid_norm() <= 1e-15 * x.euclid_norm().max(y.euclid_norm()) {
        return Err(Error::degenerate("bisector of coincident points"));
    }
    let m = (x + y).normalize_timelike();
    let t = m.cross(n).normalize_spacelike();
    let g = Geodesic {
        start: IdealPoint::from_null(m - t),
        end: IdealPoint::from_null(m + t),
    };
    if x.dot(g.unit_normal()) >= 0.0 {
        Ok(g)
    } else {
        Ok(g.reversed())
    }
}

/// Hyperbolic midpoint of `[p, q]`.
pub fn midpoint(p: &HPoint, q: &HPoint) -> HPoint {
    HPoint::from_hyperboloid(p.hyperboloid() + q.hyperboloid(), p.model())
}

/// Horocycle centred at `ideal` passing through `through`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horocycle {
    ideal: IdealPoint,
    through: HPoint,
}

/// Euclidean description of a horocycle in the half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EuclideanHorocycle {
    Circle { center: [f64; 2], radius: f64 },
    Line { height: f64 },
}

impl Horocycle {
    pub fn new(ideal: IdealPoint, through: HPoint) -> Self {
        Horocycle { ideal, through }
    }

    pub fn ideal(&self) -> IdealPoint {
        self.ideal
    }

    pub fn through(&self) -> HPoint {
        self.through
    }

    /// Signed distance from `p` to the horocycle, negative inside the
    /// horoball.
    pub fn signed_offset(&self, p: &HPoint) -> f64 {
        let l = self.ideal.null();
        let bp = -p.hyperboloid().dot(l);
        let bs = -self.through.hyperboloid().dot(l);
        (bp / bs).ln()
    }

    pub fn contains(&self, p: &HPoint, tol: f64) -> bool {
        self.signed_offset(p).abs() <= tol
    }

    pub fn euclidean_halfplane(&self) -> EuclideanHorocycle {
        let [px, py] = self.through.to_model(Model::HalfPlane).coords();
        match self.ideal {
            IdealPoint::Infinity => EuclideanHorocycle::Line { height: py },
            IdealPoint::Real(x) => {
                let r = ((px - x).powi(2) + py * py) / (2.0 * py);
                EuclideanHorocycle::Circle { center: [x, r], radius: r }
            }
        }
    }
}
