use num_complex::Complex64;

use super::geodesic::{Geodesic, Horocycle};
use super::point::{distance, HPoint, IdealPoint, Model};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Preserving,
    Reversing,
}

/// Isometry of the half-plane given by a real 2x2 matrix, acting by
/// `z -> (az + b)/(cz + d)` when the determinant is positive and by
/// `z -> (a zbar + b)/(c zbar + d)` when it is negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    m: [[f64; 2]; 2],
    orientation: Orientation,
}

impl Isometry {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        if !det.is_finite() || det.abs() <= 1e-14 * scale * scale {
            return Err(Error::domain(format!("singular isometry matrix (det = {det})")));
        }
        // normalise |det| = 1
        let s = 1.0 / det.abs().sqrt();
        let orientation = if det > 0.0 { Orientation::Preserving } else { Orientation::Reversing };
        Ok(Isometry { m: [[a * s, b * s], [c * s, d * s]], orientation })
    }

    pub fn identity() -> Self {
        Isometry { m: [[1.0, 0.0], [0.0, 1.0]], orientation: Orientation::Preserving }
    }

    /// Reflection in the imaginary axis, `z -> -zbar`.
    pub fn reflection() -> Self {
        Isometry { m: [[-1.0, 0.0], [0.0, 1.0]], orientation: Orientation::Reversing }
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn compose(&self, inner: &Isometry) -> Isometry {
        let a = self.m;
        let b = inner.m;
        let m = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        let orientation = if self.orientation == inner.orientation {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        };
        Isometry { m, orientation }
    }

    pub fn inverse(&self) -> Isometry {
        let [[a, b], [c, d]] = self.m;
        let det = a * d - b * c;
        Isometry { m: [[d / det, -b / det], [-c / det, a / det]], orientation: self.orientation }
    }

    fn act(&self, z: Complex64) -> Complex64 {
        let z = match self.orientation {
            Orientation::Preserving => z,
            Orientation::Reversing => z.conj(),
        };
        let [[a, b], [c, d]] = self.m;
        (z * a + b) / (z * c + d)
    }

    pub fn apply(&self, p: &HPoint) -> HPoint {
        let w = self.act(p.halfplane_z());
        let y = if w.im > 0.0 { w.im } else { f64::MIN_POSITIVE };
        let h = HPoint::halfplane(w.re, y).expect("isometry keeps points in H^2");
        h.to_model(p.model())
    }

    pub fn apply_ideal(&self, p: &IdealPoint) -> IdealPoint {
        let [[a, b], [c, d]] = self.m;
        match *p {
            IdealPoint::Infinity => {
                if c == 0.0 {
                    IdealPoint::Infinity
                } else {
                    IdealPoint::Real(a / c)
                }
            }
            IdealPoint::Real(x) => {
                let den = c * x + d;
                let num = a * x + b;
                if den == 0.0 || (num / den).abs() > 1e300 {
                    IdealPoint::Infinity
                } else {
                    IdealPoint::Real(num / den)
                }
            }
        }
    }

    pub fn apply_geodesic(&self, g: &Geodesic) -> Geodesic {
        Geodesic::from_endpoints_unchecked(self.apply_ideal(&g.start()), self.apply_ideal(&g.end()))
    }

    pub fn apply_horocycle(&self, h: &Horocycle) -> Horocycle {
        Horocycle::new(self.apply_ideal(&h.ideal()), self.apply(&h.through()))
    }

    /// Orientation preserving isometry taking `p` to `i` and `q` onto the
    /// imaginary axis above `i`.
    pub fn to_standard(p: &HPoint, q: &HPoint) -> Isometry {
        let z = p.halfplane_z();
        let m1 = Isometry::new(1.0, -z.re, 0.0, z.im).expect("y > 0");
        let q1 = m1.apply(&q.to_model(Model::HalfPlane));
        let w = q1.disk_w();
        let phi = if w.norm() == 0.0 { 0.0 } else { w.im.atan2(w.re) };
        let (s, c) = (-phi / 2.0).sin_cos();
        let rot = Isometry { m: [[c, s], [-s, c]], orientation: Orientation::Preserving };
        rot.compose(&m1)
    }

    /// The orientation preserving isometry taking `p -> s` and `q -> r`.
    /// Requires `d(p, q) = d(s, r)` to within `tol`.
    pub fn segment_map(p: &HPoint, q: &HPoint, s: &HPoint, r: &HPoint, tol: f64) -> Result<Isometry> {
        let l1 = distance(p, q);
        let l2 = distance(s, r);
        if (l1 - l2).abs() > tol {
            return Err(Error::domain(format!("segments of different length {l1} and {l2}")));
        }
        let a = Isometry::to_standard(p, q);
        let b = Isometry::to_standard(s, r);
        Ok(b.inverse().compose(&a))
    }

    /// Parabolic isometry fixing `xi` and taking `p` to `q`, where `p`, `q`
    /// lie on a common horocycle centred at `xi`.
    pub fn parabolic(xi: &IdealPoint, p: &HPoint, q: &HPoint) -> Isometry {
        let h = match *xi {
            IdealPoint::Infinity => Isometry::identity(),
            IdealPoint::Real(x) => Isometry { m: [[0.0, -1.0], [1.0, -x]], orientation: Orientation::Preserving },
        };
        let hp = h.apply(&p.to_model(Model::HalfPlane)).coords();
        let hq = h.apply(&q.to_model(Model::HalfPlane)).coords();
        let t = Isometry { m: [[1.0, hq[0] - hp[0]], [0.0, 1.0]], orientation: Orientation::Preserving };
        h.inverse().compose(&t.compose(&h))
    }

    /// Trace squared over determinant; 4 for parabolic elements.
    pub fn trace2(&self) -> f64 {
        let [[a, _], [_, d]] = self.m;
        (a + d) * (a + d)
    }
}
