//! Vectors in Minkowski space R^{2,1} with form -x0 y0 + x1 y1 + x2 y2.
//!
//! H^2 is the upper sheet of <X,X> = -1. Ideal points are future null rays,
//! stored normalised to x0 = 1.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mink(pub [f64; 3]);

impl Mink {
    pub const ORIGIN: Mink = Mink([1.0, 0.0, 0.0]);

    pub fn dot(self, o: Mink) -> f64 {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = o.0;
        -a0 * b0 + a1 * b1 + a2 * b2
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    /// Vector orthogonal (for the Minkowski form) to both arguments.
    pub fn cross(self, o: Mink) -> Mink {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = o.0;
        // J (a x b), J = diag(-1, 1, 1)
        Mink([
            -(a1 * b2 - a2 * b1),
            a2 * b0 - a0 * b2,
            a0 * b1 - a1 * b0,
        ])
    }

    pub fn euclid_norm(self) -> f64 {
        let [a, b, c] = self.0;
        (a * a + b * b + c * c).sqrt()
    }

    pub fn scale(self, s: f64) -> Mink {
        Mink([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    /// Rescales a timelike vector onto the upper sheet.
    pub fn normalize_timelike(self) -> Mink {
        let n = (-self.norm2()).sqrt();
        let v = self.scale(1.0 / n);
        if v.0[0] < 0.0 {
            -v
        } else {
            v
        }
    }

    /// Rescales a spacelike vector to unit length.
    pub fn normalize_spacelike(self) -> Mink {
        self.scale(1.0 / self.norm2().sqrt())
    }

    /// Rescales a (future or past) null vector so that x0 = 1.
    pub fn normalize_null(self) -> Mink {
        let v = self.scale(1.0 / self.0[0]);
        // project back onto the light cone
        let r = (v.0[1] * v.0[1] + v.0[2] * v.0[2]).sqrt();
        Mink([1.0, v.0[1] / r, v.0[2] / r])
    }

    /// Klein model coordinates of a point or null vector.
    pub fn klein(self) -> [f64; 2] {
        [self.0[1] / self.0[0], self.0[2] / self.0[0]]
    }
}

impl Add for Mink {
    type Output = Mink;
    fn add(self, o: Mink) -> Mink {
        Mink([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Mink {
    type Output = Mink;
    fn sub(self, o: Mink) -> Mink {
        Mink([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Mink {
    type Output = Mink;
    fn neg(self) -> Mink {
        self.scale(-1.0)
    }
}

impl Mul<Mink> for f64 {
    type Output = Mink;
    fn mul(self, v: Mink) -> Mink {
        v.scale(self)
    }
}

/// Unit tangent at `base` pointing towards `target` (a point or null vector).
pub fn tangent_towards(base: Mink, target: Mink) -> Mink {
    let t = target + base.scale(target.dot(base));
    t.normalize_spacelike()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_orthogonal() {
        let a = Mink([1.3, 0.2, -0.7]);
        let b = Mink([-0.4, 2.0, 0.9]);
        let c = a.cross(b);
        assert!(c.dot(a).abs() < 1e-14);
        assert!(c.dot(b).abs() < 1e-14);
    }

    #[test]
    fn tangent_is_unit_and_orthogonal() {
        let p = Mink([2f64.sqrt(), 1.0, 0.0]);
        let t = tangent_towards(Mink::ORIGIN, p);
        assert!((t.norm2() - 1.0).abs() < 1e-14);
        assert!(t.dot(Mink::ORIGIN).abs() < 1e-14);
    }
}
