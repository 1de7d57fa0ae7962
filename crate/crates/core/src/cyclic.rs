//! Cyclic polygons parametrised by side lengths: parameter space
//! classification, circumradius, defect (area), its gradient, the boundary
//! functions `b0` and `h0`, and explicit realisation.
//!
//! Lengths are `f64`; `f64::INFINITY` stands for an ideal side and is only
//! accepted by [`area`] in the horocyclic-ideal pattern.

use std::f64::consts::PI;

use crate::kernel::{HPoint, Model};
use crate::roots;
use crate::{Error, Result, Tolerances};

/// Position of a length tuple relative to the parameter spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamClass {
    Centered,
    BoundaryCentered,
    NonCentered { max_index: usize },
    Horocyclic { max_index: usize },
    Outside,
}

impl ParamClass {
    /// Member of the closure of the cyclic space minus its horocyclic part.
    pub fn is_cyclic(&self) -> bool {
        matches!(self, ParamClass::Centered | ParamClass::BoundaryCentered | ParamClass::NonCentered { .. })
    }
}

/// `2 sinh((J - d/2)/2) cosh((J + d/2)/2) = sinh J - sinh(d/2)`, evaluated
/// from the excess `u = J - d/2` without cancellation.
fn sinh_gap(d: f64, u: f64) -> f64 {
    let j = d / 2.0 + u;
    2.0 * (u / 2.0).sinh() * ((j + d / 2.0) / 2.0).cosh()
}

/// Central angle subtended by a chord of length `d` in a circle of radius
/// `d/2 + u`.
fn angle_excess(d: f64, u: f64) -> f64 {
    let s = (d / 2.0).sinh();
    let big = (d / 2.0 + u).sinh();
    let c = (sinh_gap(d, u) * (big + s)).sqrt();
    2.0 * s.atan2(c)
}

fn angle_excess_deriv(d: f64, u: f64) -> f64 {
    let j = d / 2.0 + u;
    let s = (d / 2.0).sinh();
    let big = j.sinh();
    let c = (sinh_gap(d, u) * (big + s)).sqrt();
    -2.0 * s * j.cosh() / (big * c)
}

/// Base angle of the isosceles triangle with apex at the centre over a chord
/// of length `d`; `j = inf` gives the horocyclic limit `asin(1/cosh(d/2))`.
fn base_angle(d: f64, j: f64) -> f64 {
    let s = (d / 2.0).sinh();
    if j.is_infinite() {
        return 1f64.atan2(s);
    }
    let u = (j - d / 2.0).max(0.0);
    let big = j.sinh();
    let c = (sinh_gap(d, u) * (big + s)).sqrt();
    c.atan2(s * j.cosh())
}

/// Central angle `A_d(J) = 2 asin(sinh(d/2)/sinh J)`, defined for
/// `J >= d/2`.
pub fn central_angle(d: f64, j: f64) -> Result<f64> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::domain(format!("side length {d} must be positive and finite")));
    }
    if j.is_infinite() && j > 0.0 {
        return Ok(0.0);
    }
    if !(j >= d / 2.0) {
        return Err(Error::domain(format!("radius {j} below half the chord {d}")));
    }
    Ok(angle_excess(d, j - d / 2.0))
}

fn check_finite(d: &[f64]) -> Result<()> {
    if d.len() < 3 {
        return Err(Error::domain(format!("a polygon needs at least 3 sides, got {}", d.len())));
    }
    for (i, &x) in d.iter().enumerate() {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::domain(format!("side {i} has invalid length {x}")));
        }
    }
    Ok(())
}

/// Index of the first maximal entry.
pub fn argmax(d: &[f64]) -> usize {
    let mut m = 0;
    for i in 1..d.len() {
        if d[i] > d[m] {
            m = i;
        }
    }
    m
}

/// Sum of central angles at the minimal admissible radius `D/2`.
fn angle_sum_at_half_max(d: &[f64]) -> f64 {
    let big = d[argmax(d)];
    d.iter().map(|&x| angle_excess(x, (big - x) / 2.0)).sum()
}

pub fn classify(d: &[f64]) -> Result<ParamClass> {
    classify_with(d, &Tolerances::DEFAULT)
}

/// Classifies a tuple of positive finite lengths. Band edges are relative:
/// `class` on `sum sinh(d_i/2)` against `sinh(D/2)` and on the angle sum
/// against `2 pi`.
pub fn classify_with(d: &[f64], tol: &Tolerances) -> Result<ParamClass> {
    check_finite(d)?;
    let m = argmax(d);
    let s_max = (d[m] / 2.0).sinh();
    let s_rest: f64 = d.iter().enumerate().filter(|&(i, _)| i != m).map(|(_, &x)| (x / 2.0).sinh()).sum();
    let rel = (s_rest - s_max) / s_max;
    if rel < -tol.class {
        return Ok(ParamClass::Outside);
    }
    if rel <= tol.class {
        return Ok(ParamClass::Horocyclic { max_index: m });
    }
    let excess = (angle_sum_at_half_max(d) - 2.0 * PI) / (2.0 * PI);
    Ok(if excess > tol.class {
        ParamClass::Centered
    } else if excess >= -tol.class {
        ParamClass::BoundaryCentered
    } else {
        ParamClass::NonCentered { max_index: m }
    })
}

pub fn circumradius(d: &[f64]) -> Result<f64> {
    circumradius_with(d, &Tolerances::DEFAULT)
}

/// Circumradius of the cyclic polygon with sides `d`; infinite on the
/// horocyclic boundary.
pub fn circumradius_with(d: &[f64], tol: &Tolerances) -> Result<f64> {
    let class = classify_with(d, tol)?;
    radius_for_class(d, class, tol)
}

fn radius_for_class(d: &[f64], class: ParamClass, tol: &Tolerances) -> Result<f64> {
    let m = argmax(d);
    let big = d[m];
    match class {
        ParamClass::Outside => Err(Error::domain(format!("{d:?} lies outside the cyclic parameter space"))),
        ParamClass::Horocyclic { .. } => Ok(f64::INFINITY),
        ParamClass::BoundaryCentered => Ok(big / 2.0),
        ParamClass::Centered => {
            let f = |u: f64| d.iter().map(|&x| angle_excess(x, u + (big - x) / 2.0)).sum::<f64>() - 2.0 * PI;
            let df = |u: f64| d.iter().map(|&x| angle_excess_deriv(x, u + (big - x) / 2.0)).sum::<f64>();
            let lo = big / 2.0 * 1e-12;
            let hi = roots::grow_until(big.max(1.0), 64, |u| f(u) < 0.0)?;
            let lo = if f(lo) > 0.0 { lo } else { 0.0 };
            let u = roots::solve(f, df, lo, hi, tol.root)?;
            Ok(big / 2.0 + u)
        }
        ParamClass::NonCentered { max_index } => {
            let g = |u: f64| {
                d.iter()
                    .enumerate()
                    .map(|(i, &x)| {
                        let a = angle_excess(x, u + (big - x) / 2.0);
                        if i == max_index {
                            -a
                        } else {
                            a
                        }
                    })
                    .sum::<f64>()
            };
            let dg = |u: f64| {
                d.iter()
                    .enumerate()
                    .map(|(i, &x)| {
                        let a = angle_excess_deriv(x, u + (big - x) / 2.0);
                        if i == max_index {
                            -a
                        } else {
                            a
                        }
                    })
                    .sum::<f64>()
            };
            let lo = big / 2.0 * 1e-12;
            let lo = if g(lo) < 0.0 { lo } else { 0.0 };
            let hi = roots::grow_until(big.max(1.0), 64, |u| g(u) > 0.0)?;
            let u = roots::solve(g, dg, lo, hi, tol.root)?;
            Ok(big / 2.0 + u)
        }
    }
}

/// Checks the horocyclic-ideal pattern: exactly two infinite entries,
/// cyclically adjacent. Returns the finite entries.
fn ideal_pattern(d: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    let inf: Vec<usize> = (0..n).filter(|&i| d[i].is_infinite()).collect();
    if n < 3 || inf.len() != 2 || !((inf[0] + 1) % n == inf[1] || (inf[1] + 1) % n == inf[0]) {
        return Err(Error::domain(format!(
            "infinite sides are only allowed as two adjacent entries (inf, d_1, ..., d_k, inf); got {d:?}"
        )));
    }
    let finite: Vec<f64> = d.iter().copied().filter(|x| x.is_finite()).collect();
    for &x in &finite {
        if !(x > 0.0) {
            return Err(Error::domain(format!("side length {x} must be positive")));
        }
    }
    for &x in d {
        if x.is_nan() || x == f64::NEG_INFINITY {
            return Err(Error::domain(format!("invalid side length {x}")));
        }
    }
    Ok(finite)
}

pub fn area(d: &[f64]) -> Result<f64> {
    area_with(d, &Tolerances::DEFAULT)
}

/// Defect (area) of the cyclic polygon with sides `d`, including the
/// horocyclic and horocyclic-ideal cases.
pub fn area_with(d: &[f64], tol: &Tolerances) -> Result<f64> {
    let n = d.len() as f64;
    if d.iter().any(|x| x.is_infinite()) {
        let finite = ideal_pattern(d)?;
        return Ok((n - 2.0) * PI - 2.0 * finite.iter().map(|&x| base_angle(x, f64::INFINITY)).sum::<f64>());
    }
    let class = classify_with(d, tol)?;
    let j = radius_for_class(d, class, tol)?;
    let sign_max = match class {
        ParamClass::NonCentered { .. } | ParamClass::Horocyclic { .. } => -1.0,
        _ => 1.0,
    };
    let m = argmax(d);
    let s: f64 = d
        .iter()
        .enumerate()
        .map(|(i, &x)| if i == m { sign_max * base_angle(x, j) } else { base_angle(x, j) })
        .sum();
    Ok((n - 2.0) * PI - 2.0 * s)
}

pub fn area_gradient(d: &[f64]) -> Result<Vec<f64>> {
    area_gradient_with(d, &Tolerances::DEFAULT)
}

/// Gradient of the defect:
/// `dD/dd_i = +-sqrt(1/cosh^2(d_i/2) - 1/cosh^2 J)`, negative only for the
/// maximal side of a non-centered tuple.
pub fn area_gradient_with(d: &[f64], tol: &Tolerances) -> Result<Vec<f64>> {
    let class = classify_with(d, tol)?;
    if !class.is_cyclic() {
        return Err(Error::domain(format!("gradient needs a cyclic tuple, {d:?} is {class:?}")));
    }
    let j = radius_for_class(d, class, tol)?;
    let m = argmax(d);
    Ok(d.iter()
        .enumerate()
        .map(|(i, &x)| {
            let s = (x / 2.0).sinh();
            let u = (j - x / 2.0).max(0.0);
            let g = (sinh_gap(x, u) * (j.sinh() + s)).sqrt() / ((x / 2.0).cosh() * j.cosh());
            match class {
                ParamClass::NonCentered { .. } if i == m => -g,
                _ => g,
            }
        })
        .collect())
}

fn check_tail(tail: &[f64]) -> Result<()> {
    if tail.len() < 2 {
        return Err(Error::domain(format!("boundary functions need at least 2 lengths, got {}", tail.len())));
    }
    for (i, &x) in tail.iter().enumerate() {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::domain(format!("length {i} is invalid: {x}")));
        }
    }
    Ok(())
}

/// Horocyclic boundary value: `sinh(h0/2) = sum sinh(d_i/2)`.
pub fn h0(tail: &[f64]) -> Result<f64> {
    check_tail(tail)?;
    Ok(2.0 * tail.iter().map(|&x| (x / 2.0).sinh()).sum::<f64>().asinh())
}

pub fn b0(tail: &[f64]) -> Result<f64> {
    b0_with(tail, &Tolerances::DEFAULT)
}

/// Boundary-centered value: the `b > max(tail)` with
/// `sum A_{d_i}(b/2) = pi`, so that `(b, tail)` has its circumcentre on the
/// side of length `b`.
pub fn b0_with(tail: &[f64], tol: &Tolerances) -> Result<f64> {
    check_tail(tail)?;
    let top = tail[argmax(tail)];
    // b = top + v, radius b/2, excess of side x is (b - x)/2
    let f = |v: f64| tail.iter().map(|&x| angle_excess(x, (v + top - x) / 2.0)).sum::<f64>() - PI;
    let df = |v: f64| tail.iter().map(|&x| 0.5 * angle_excess_deriv(x, (v + top - x) / 2.0)).sum::<f64>();
    let hi = roots::grow_until(top.max(1.0), 64, |v| f(v) < 0.0)?;
    let v = roots::solve(f, df, 0.0, hi, tol.root)?;
    Ok(top + v)
}

/// Maximal area of a cyclic triangle with two sides `d`:
/// `D0(b0(d, d), d, d)`.
pub fn a_m(d: f64) -> Result<f64> {
    let b = b0(&[d, d])?;
    area(&[b, d, d])
}

/// Explicit cyclic polygon in the disk, centred at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub vertices: Vec<HPoint>,
    pub center: HPoint,
    pub radius: f64,
    pub centered: bool,
}

pub fn realize(d: &[f64]) -> Result<Realization> {
    realize_with(d, &Tolerances::DEFAULT)
}

/// Vertices `v_0..v_{n-1}` with side `i` joining `v_i` and `v_{i+1}`, placed
/// counterclockwise on the circle of radius `J` about the disk centre.
pub fn realize_with(d: &[f64], tol: &Tolerances) -> Result<Realization> {
    let class = classify_with(d, tol)?;
    if !class.is_cyclic() {
        return Err(Error::domain(format!("{d:?} has no finite circumcircle ({class:?})")));
    }
    let j = radius_for_class(d, class, tol)?;
    let m = argmax(d);
    // non-centered: the long side is traversed backwards, which keeps the
    // vertices in counterclockwise order
    let rho = (j / 2.0).tanh();
    let mut phi = 0.0f64;
    let mut vertices = Vec::with_capacity(d.len());
    for (i, &x) in d.iter().enumerate() {
        vertices.push(HPoint::disk(rho * phi.cos(), rho * phi.sin())?);
        let a = angle_excess(x, (j - x / 2.0).max(0.0));
        phi += match class {
            ParamClass::NonCentered { .. } if i == m => -a,
            _ => a,
        };
    }
    Ok(Realization {
        vertices,
        center: HPoint::origin(Model::Disk),
        radius: j,
        centered: class == ParamClass::Centered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{circumobject, distance, polygon_area, CircumObject, PolygonVertex};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn equilateral_radius(d: f64, n: usize) -> f64 {
        ((d / 2.0).sinh() / (PI / n as f64).sin()).asinh()
    }

    #[test]
    fn equilateral_triangle_radius() {
        let j = circumradius(&[2.0, 2.0, 2.0]).unwrap();
        assert_abs_diff_eq!(j, equilateral_radius(2.0, 3), epsilon = 1e-13);
        assert_abs_diff_eq!(j, 1.112_735_304_6, epsilon = 1e-10);
    }

    #[test]
    fn central_angle_endpoints() {
        assert_abs_diff_eq!(central_angle(1.0, 0.5).unwrap(), PI, epsilon = 1e-15);
        assert!(central_angle(1.0, 0.4).is_err());
        assert_eq!(central_angle(1.0, f64::INFINITY).unwrap(), 0.0);
        let direct = 2.0 * ((0.5f64).sinh() / 1.3f64.sinh()).asin();
        assert_abs_diff_eq!(central_angle(1.0, 1.3).unwrap(), direct, epsilon = 1e-15);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&[1.0, 1.0, 1.0]).unwrap(), ParamClass::Centered);
        let b = b0(&[1.0, 1.0]).unwrap();
        assert_eq!(classify(&[b, 1.0, 1.0]).unwrap(), ParamClass::BoundaryCentered);
        let h = h0(&[1.0, 1.0]).unwrap();
        assert_eq!(classify(&[1.0, h, 1.0]).unwrap(), ParamClass::Horocyclic { max_index: 1 });
        let mid = 0.5 * (b + h);
        assert_eq!(classify(&[1.0, 1.0, mid]).unwrap(), ParamClass::NonCentered { max_index: 2 });
        assert_eq!(classify(&[1.0, 1.0, h + 0.1]).unwrap(), ParamClass::Outside);
        assert!(classify(&[1.0, 1.0]).is_err());
        assert!(classify(&[1.0, -1.0, 1.0]).is_err());
    }

    #[test]
    fn b0_closed_forms() {
        for d in [0.1, 1.0, 3.0] {
            let b = b0(&[d, d]).unwrap();
            assert_abs_diff_eq!(b, 2.0 * (2f64.sqrt() * (d / 2.0).sinh()).asinh(), epsilon = 1e-12);
            for n in 4..8usize {
                let tail = vec![d; n - 1];
                let expect = 2.0 * ((d / 2.0).sinh() / (PI / (2 * n - 2) as f64).sin()).asinh();
                assert_abs_diff_eq!(b0(&tail).unwrap(), expect, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn special_triangle_radius_is_half_b0() {
        let b = b0(&[1.5, 1.5]).unwrap();
        let j = circumradius(&[b, 1.5, 1.5]).unwrap();
        assert_abs_diff_eq!(j, b / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn a_m_closed_form() {
        for d in [0.2f64, 1.0, 2.0, 5.0] {
            let expect = PI - 4.0 * ((0.5f64).sqrt() / (d / 2.0).cosh()).asin();
            assert_abs_diff_eq!(a_m(d).unwrap(), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn ideal_pattern_areas() {
        let d = 1.3f64;
        let expect = PI - 2.0 * (1.0 / (d / 2.0).cosh()).asin();
        assert_abs_diff_eq!(area(&[f64::INFINITY, d, f64::INFINITY]).unwrap(), expect, epsilon = 1e-14);
        assert_abs_diff_eq!(area(&[d, f64::INFINITY, f64::INFINITY]).unwrap(), expect, epsilon = 1e-14);
        assert!(area(&[f64::INFINITY, d, d, f64::INFINITY, d]).is_err());
        assert!(area(&[f64::INFINITY, d, d]).is_err());
    }

    #[test]
    fn horocyclic_area_matches_limit() {
        let h = h0(&[1.0, 0.7]).unwrap();
        let on = area(&[h, 1.0, 0.7]).unwrap();
        let near = area(&[h * (1.0 - 1e-7), 1.0, 0.7]).unwrap();
        assert_abs_diff_eq!(on, near, epsilon = 1e-5);
        let expect = PI + 2.0 * (1.0 / (h / 2.0).cosh()).asin()
            - 2.0 * (1.0 / 0.5f64.cosh()).asin()
            - 2.0 * (1.0 / 0.35f64.cosh()).asin();
        assert_abs_diff_eq!(on, expect, epsilon = 1e-12);
    }

    fn check_realization(d: &[f64]) {
        let r = realize(d).unwrap();
        let n = d.len();
        for i in 0..n {
            let l = distance(&r.vertices[i], &r.vertices[(i + 1) % n]);
            assert_abs_diff_eq!(l, d[i], epsilon = 1e-9);
        }
        match circumobject(&r.vertices[0], &r.vertices[1], &r.vertices[2], &Tolerances::DEFAULT).unwrap() {
            CircumObject::MetricCircle { center, radius } => {
                assert_abs_diff_eq!(radius, r.radius, epsilon = 1e-9);
                assert!(distance(&center, &r.center) < 1e-8);
            }
            other => panic!("{other:?}"),
        }
        let verts: Vec<PolygonVertex> = r.vertices.iter().map(|&p| p.into()).collect();
        assert_abs_diff_eq!(polygon_area(&verts).unwrap(), area(d).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn non_centered_radius_through_realization() {
        // the non-centered equation A_D(J) = sum of the others is checked
        // against an independent circumcircle of the built polygon
        let b = b0(&[1.0, 0.8, 1.2]).unwrap();
        let h = h0(&[1.0, 0.8, 1.2]).unwrap();
        for t in [0.05, 0.3, 0.6, 0.9] {
            let x = b + t * (h - b);
            assert!(matches!(classify(&[1.0, 0.8, x, 1.2]).unwrap(), ParamClass::NonCentered { max_index: 2 }));
            check_realization(&[1.0, 0.8, x, 1.2]);
        }
        check_realization(&[0.5, 0.6, 0.7]);
        check_realization(&[b, 1.0, 0.8, 1.2]);
    }

    #[test]
    fn radius_blows_up_near_horocyclic() {
        let tail = [1.0, 1.0];
        let h = h0(&tail).unwrap();
        let s = 0.5f64.sinh();
        let sd = (h / 2.0).sinh();
        let c = (sd.powi(3) - 2.0 * s.powi(3)) / 6.0;
        let mut prev = 0.0;
        // beyond k = 7 the tuple falls inside the horocyclic band
        for k in 2..8 {
            let delta = 10f64.powi(-k);
            let x = h - delta;
            let j = circumradius(&[x, 1.0, 1.0]).unwrap();
            assert!(j > prev);
            prev = j;
            // leading order: sinh^2 J ~ c / (sum sinh - sinh(x/2))
            let eps = 2.0 * s - (x / 2.0).sinh();
            let predicted = (c / eps).sqrt();
            assert!((j.sinh() / predicted - 1.0).abs() < 0.05, "k={k}: {} vs {predicted}", j.sinh());
        }
    }

    fn cyclic_tuple() -> impl Strategy<Value = Vec<f64>> {
        (3usize..7).prop_flat_map(|n| prop::collection::vec(0.1f64..3.0, n))
    }

    proptest! {
        #[test]
        fn realization_matches_radius_and_area(mut d in cyclic_tuple(), t in 0.0f64..0.95) {
            // push the largest side somewhere into the cyclic range
            let m = argmax(&d);
            let rest: Vec<f64> = d.iter().enumerate().filter(|&(i, _)| i != m).map(|(_, &x)| x).collect();
            let hi = h0(&rest).unwrap();
            let lo = rest.iter().cloned().fold(0.0, f64::max);
            d[m] = lo + t * (hi - lo);
            prop_assume!(classify(&d).unwrap().is_cyclic());
            check_realization(&d);
        }

        #[test]
        fn boundary_values_are_ordered(tail in prop::collection::vec(0.1f64..4.0, 2..6)) {
            let b = b0(&tail).unwrap();
            let h = h0(&tail).unwrap();
            let top = tail.iter().cloned().fold(0.0, f64::max);
            prop_assert!(top < b && b < h);
            let mut t = tail.clone();
            t.insert(0, b);
            prop_assert_eq!(classify(&t).unwrap(), ParamClass::BoundaryCentered);
        }

        #[test]
        fn b0_h0_monotone(tail in prop::collection::vec(0.1f64..4.0, 2..6), k in 0usize..5, eps in 0.01f64..0.5) {
            let k = k % tail.len();
            let mut t2 = tail.clone();
            t2[k] += eps;
            prop_assert!(b0(&t2).unwrap() > b0(&tail).unwrap());
            prop_assert!(h0(&t2).unwrap() > h0(&tail).unwrap());
        }
    }
}
