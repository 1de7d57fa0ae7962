//! Numerical tolerances shared by every module.

/// Tolerance set. `geom` is absolute on distances and areas, `class` is
/// relative and governs classification bands, `root` is the residual
/// target for scalar root finding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub geom: f64,
    pub class: f64,
    pub root: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        geom: 1e-9,
        class: 1e-8,
        root: 1e-12,
    };

    /// Relative tolerance for deciding that two circumradii tie.
    pub fn radius_tie(&self, j: f64) -> f64 {
        1e-7 * j.abs().max(1.0)
    }

    pub fn validate(&self) -> crate::Result<()> {
        for (name, v) in [("geom", self.geom), ("class", self.class), ("root", self.root)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(crate::Error::domain(format!(
                    "tolerance `{name}` must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::DEFAULT
    }
}
