use std::fmt;

use num_complex::Complex64;

use super::minkowski::Mink;
use crate::{Error, Result};

/// Coordinate model a point is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    HalfPlane,
    Disk,
}

/// A point of H^2 in one of the two conformal models.
///
/// The half-plane is canonical; disk coordinates are converted through the
/// Cayley map `w = (z - i) / (z + i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    model: Model,
    coords: [f64; 2],
}

impl HPoint {
    pub fn halfplane(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) || y <= 0.0 {
            return Err(Error::domain(format!(
                "half-plane point ({x}, {y}) needs finite coordinates and y > 0"
            )));
        }
        Ok(HPoint { model: Model::HalfPlane, coords: [x, y] })
    }

    pub fn disk(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) || x * x + y * y >= 1.0 {
            return Err(Error::domain(format!(
                "disk point ({x}, {y}) must lie in the open unit disk"
            )));
        }
        Ok(HPoint { model: Model::Disk, coords: [x, y] })
    }

    pub fn new(model: Model, x: f64, y: f64) -> Result<Self> {
        match model {
            Model::HalfPlane => Self::halfplane(x, y),
            Model::Disk => Self::disk(x, y),
        }
    }

    /// The point `i` of the half-plane, centre of the disk.
    pub fn origin(model: Model) -> Self {
        match model {
            Model::HalfPlane => HPoint { model, coords: [0.0, 1.0] },
            Model::Disk => HPoint { model, coords: [0.0, 0.0] },
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn coords(&self) -> [f64; 2] {
        self.coords
    }

    pub fn halfplane_z(&self) -> Complex64 {
        match self.model {
            Model::HalfPlane => Complex64::new(self.coords[0], self.coords[1]),
            Model::Disk => {
                let w = Complex64::new(self.coords[0], self.coords[1]);
                let i = Complex64::i();
                i * (1.0 + w) / (1.0 - w)
            }
        }
    }

    pub fn disk_w(&self) -> Complex64 {
        match self.model {
            Model::Disk => Complex64::new(self.coords[0], self.coords[1]),
            Model::HalfPlane => {
                let z = Complex64::new(self.coords[0], self.coords[1]);
                let i = Complex64::i();
                (z - i) / (z + i)
            }
        }
    }

    /// The same point expressed in `model`.
    pub fn to_model(&self, model: Model) -> HPoint {
        if model == self.model {
            return *self;
        }
        let c = match model {
            Model::HalfPlane => self.halfplane_z(),
            Model::Disk => self.disk_w(),
        };
        let mut coords = [c.re, c.im];
        if model == Model::HalfPlane && coords[1] <= 0.0 {
            coords[1] = f64::MIN_POSITIVE;
        }
        HPoint { model, coords }
    }

    pub fn hyperboloid(&self) -> Mink {
        let [a, b] = self.coords;
        match self.model {
            Model::HalfPlane => {
                let r2 = a * a + b * b;
                Mink([(r2 + 1.0) / (2.0 * b), a / b, (r2 - 1.0) / (2.0 * b)])
            }
            Model::Disk => {
                let r2 = a * a + b * b;
                let k = 1.0 - r2;
                Mink([(1.0 + r2) / k, -2.0 * b / k, 2.0 * a / k])
            }
        }
    }

    /// Inverse of [`HPoint::hyperboloid`]; the input need not be exactly
    /// normalised.
    pub fn from_hyperboloid(v: Mink, model: Model) -> HPoint {
        let v = v.normalize_timelike();
        let [x0, x1, x2] = v.0;
        match model {
            Model::Disk => {
                let d = 1.0 + x0;
                HPoint { model, coords: [x2 / d, -x1 / d] }
            }
            Model::HalfPlane => {
                let diff = if x2 > 0.0 { (1.0 + x1 * x1) / (x0 + x2) } else { x0 - x2 };
                let y = 1.0 / diff;
                HPoint { model, coords: [x1 * y, y] }
            }
        }
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.model {
            Model::HalfPlane => "H",
            Model::Disk => "D",
        };
        write!(f, "{tag}({}, {})", self.coords[0], self.coords[1])
    }
}

/// Hyperbolic distance.
pub fn distance(p: &HPoint, q: &HPoint) -> f64 {
    if p.model == Model::Disk && q.model == Model::Disk {
        let [a, b] = p.coords;
        let [c, d] = q.coords;
        let num = ((a - c).powi(2) + (b - d).powi(2)).sqrt();
        let den = ((1.0 - a * a - b * b) * (1.0 - c * c - d * d)).sqrt();
        2.0 * (num / den).asinh()
    } else {
        let z = p.halfplane_z();
        let w = q.halfplane_z();
        2.0 * ((z - w).norm() / (2.0 * (z.im * w.im).sqrt())).asinh()
    }
}

/// A point of the ideal boundary: a real number or infinity, in half-plane
/// terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IdealPoint {
    Real(f64),
    Infinity,
}

impl IdealPoint {
    pub fn real(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::domain(format!("ideal point {x} is not a finite real")));
        }
        Ok(IdealPoint::Real(x))
    }

    /// The ideal point at polar angle `theta` on the unit circle of the disk.
    pub fn from_disk_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        IdealPoint::from_null(Mink([1.0, -s, c]))
    }

    pub fn disk_point(&self) -> [f64; 2] {
        let n = self.null();
        [n.0[2], -n.0[1]]
    }

    pub fn disk_angle(&self) -> f64 {
        let [x, y] = self.disk_point();
        y.atan2(x)
    }

    /// Future null vector normalised to x0 = 1.
    pub fn null(&self) -> Mink {
        match *self {
            IdealPoint::Infinity => Mink([1.0, 0.0, 1.0]),
            IdealPoint::Real(x) => {
                if x.abs() <= 1.0 {
                    let q = 1.0 + x * x;
                    Mink([1.0, 2.0 * x / q, (x * x - 1.0) / q])
                } else {
                    let t = 1.0 / x;
                    let q = 1.0 + t * t;
                    Mink([1.0, 2.0 * t / q, (1.0 - t * t) / q])
                }
            }
        }
    }

    pub fn from_null(v: Mink) -> Self {
        let v = if v.0[0] < 0.0 { -v } else { v };
        let [_, l1, l2] = v.normalize_null().0;
        if l2 >= 0.0 {
            if l1 == 0.0 {
                return IdealPoint::Infinity;
            }
            let x = (1.0 + l2) / l1;
            if x.is_finite() && x.abs() < 1e300 {
                IdealPoint::Real(x)
            } else {
                IdealPoint::Infinity
            }
        } else {
            IdealPoint::Real(l1 / (1.0 - l2))
        }
    }

    /// Chordal distance on the unit circle (model independent).
    pub fn chord(&self, other: &IdealPoint) -> f64 {
        let a = self.null();
        let b = other.null();
        ((a.0[1] - b.0[1]).powi(2) + (a.0[2] - b.0[2]).powi(2)).sqrt()
    }

    pub fn approx_eq(&self, other: &IdealPoint, tol: f64) -> bool {
        self.chord(other) <= tol
    }
}

impl fmt::Display for IdealPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealPoint::Real(x) => write!(f, "ideal({x})"),
            IdealPoint::Infinity => write!(f, "ideal(inf)"),
        }
    }
}
