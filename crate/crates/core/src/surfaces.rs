//! Injectivity radius bounds for surfaces of signature `(g, n)` and the
//! polygons realising them.
//!
//! Every polygon here is a fan of triangles around a vertex `v` placed at the
//! centre of the disk: spoke `k` runs from `v` to `p_k`. Cusps are added by
//! gluing a triangle with one ideal vertex onto the first `n` sides.

use std::f64::consts::PI;

use crate::kernel::minkowski::{tangent_towards, Mink};
use crate::kernel::{
    distance, perpendicular_bisector, vertex_angle, HPoint, Isometry, Model, PolygonVertex,
};
use crate::roots;
use crate::{Error, Result, Tolerances};

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("radius {r} must be positive and finite")));
    }
    Ok(())
}

/// Angle of an equilateral triangle with sides `2r`.
pub fn alpha(r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(alpha_at(r))
}

/// Base angle of the triangle with one side `2r` and an ideal vertex
/// opposite to it, equidistant from both ends.
pub fn beta(r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(beta_at(r))
}

fn alpha_at(r: f64) -> f64 {
    2.0 * (1.0 / (2.0 * r.cosh())).asin()
}

fn beta_at(r: f64) -> f64 {
    (1.0 / r.cosh()).asin()
}

fn check_signature(g: usize, n: usize) -> Result<()> {
    if 2 * g + n <= 2 {
        return Err(Error::domain(format!(
            "signature ({g}, {n}) is not hyperbolic: need 2g - 2 + n > 0"
        )));
    }
    Ok(())
}

/// Angle sum of the extremal polygon minus `2 pi`, decreasing in `r`.
fn angle_excess(g: usize, n: usize, r: f64) -> f64 {
    let t = (4 * g + n - 2) as f64;
    3.0 * t * alpha_at(r) + 2.0 * n as f64 * beta_at(r) - 2.0 * PI
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Bisection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InjRadReport {
    pub g: usize,
    pub n: usize,
    pub r: f64,
    /// Angle-sum equation evaluated at `r`.
    pub residual: f64,
    /// How `r` was obtained; closed forms are only cross-checks.
    pub method: Method,
    /// Closed form `acosh(1 / (2 sin(pi / (12g - 6))))`, closed surfaces only.
    pub closed_form: Option<f64>,
}

/// Upper bound on the injectivity radius of a complete hyperbolic surface of
/// genus `g` with `n` cusps.
pub fn r_max(g: usize, n: usize) -> Result<InjRadReport> {
    check_signature(g, n)?;
    let f = |r: f64| angle_excess(g, n, r);
    let hi = roots::grow_until(1.0, 64, |r| f(r) < 0.0)?;
    let r = roots::bisect(f, 0.0, hi)?;
    let closed_form = if n == 0 {
        let c = (1.0 / (2.0 * (PI / (12 * g - 6) as f64).sin())).acosh();
        if (c - r).abs() > 1e-10 {
            return Err(Error::NoConvergence(format!(
                "r_max({g}, 0) = {r} disagrees with closed form {c}"
            )));
        }
        Some(c)
    } else {
        None
    };
    Ok(InjRadReport { g, n, r, residual: f(r), method: Method::Bisection, closed_form })
}

/// Radius of the disk packing bound for Euler characteristic `chi < 0`.
pub fn boroczky_radius(chi: i64) -> Result<f64> {
    if chi >= 0 {
        return Err(Error::domain(format!("Euler characteristic {chi} must be negative")));
    }
    let target = PI / (1 - chi) as f64;
    let hi = roots::grow_until(1.0, 64, |r| 3.0 * alpha_at(r) < target)?;
    roots::bisect(|r| 3.0 * alpha_at(r) - target, 0.0, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingKind {
    Hyperbolic,
    Parabolic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Side {
    pub label: String,
    pub start: usize,
    pub end: usize,
    /// `inf` for sides ending at an ideal vertex.
    pub length: f64,
    /// A vertex of the adjacent fan triangle not on this side.
    inner: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pairing {
    pub name: String,
    pub kind: PairingKind,
    /// Label of the side mapped, and of its image (traversed backwards).
    pub from: String,
    pub to: String,
    pub isometry: Isometry,
    /// Sum of the distances between mapped and target endpoints (chordal for
    /// ideal ones).
    pub endpoint_error: f64,
    /// The image of the polygon lies across the target side.
    pub maps_outside: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackingAudit {
    pub samples: usize,
    pub violations: usize,
    /// Smallest distance between distinct finite vertices.
    pub min_separation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalPolygon {
    pub g: usize,
    pub n: usize,
    pub r: f64,
    pub vertices: Vec<PolygonVertex>,
    pub sides: Vec<Side>,
    /// Interior angle at each vertex (zero at ideal ones).
    pub angles: Vec<f64>,
    /// Angle sum over finite vertices, all of which are identified.
    pub angle_sum: f64,
    pub angle_residual: f64,
    /// Fan triangulation, as vertex indices.
    pub triangles: Vec<[usize; 3]>,
    pub area: f64,
    pub pairings: Vec<Pairing>,
    minks: Vec<Mink>,
}

impl ExtremalPolygon {
    pub fn side(&self, label: &str) -> Option<&Side> {
        self.sides.iter().find(|s| s.label == label)
    }

    pub fn finite_side_lengths(&self) -> Vec<f64> {
        self.sides.iter().map(|s| s.length).filter(|l| l.is_finite()).collect()
    }

    /// Samples sectors of radius `r` at every finite corner of every fan
    /// triangle and counts points that leave the triangle. `tol` is relative
    /// to the size of the hyperboloid coordinates.
    pub fn packing_audit(&self, tol: f64) -> PackingAudit {
        let mut samples = 0;
        let mut violations = 0;
        for t in &self.triangles {
            for c in 0..3 {
                let w = t[c];
                if self.vertices[w].is_ideal() {
                    continue;
                }
                let wm = self.minks[w];
                let tp = tangent_towards(wm, self.minks[t[(c + 1) % 3]]);
                let tq = tangent_towards(wm, self.minks[t[(c + 2) % 3]]);
                for i in 0..=8 {
                    let lam = i as f64 / 8.0;
                    let dir = (tp.scale(lam) + tq.scale(1.0 - lam)).normalize_spacelike();
                    for j in 1..=4 {
                        let s = self.r * (j as f64 / 4.0) * (1.0 - 1e-9);
                        let x = wm.scale(s.cosh()) + dir.scale(s.sinh());
                        samples += 1;
                        if !self.triangle_contains(t, x, tol) {
                            violations += 1;
                        }
                    }
                }
            }
        }
        let mut min_separation = f64::INFINITY;
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                if let (PolygonVertex::Finite(a), PolygonVertex::Finite(b)) = (self.vertices[i], self.vertices[j]) {
                    min_separation = min_separation.min(distance(&a, &b));
                }
            }
        }
        PackingAudit { samples, violations, min_separation }
    }

    fn triangle_contains(&self, t: &[usize; 3], x: Mink, tol: f64) -> bool {
        (0..3).all(|k| {
            let a = self.minks[t[k]];
            let b = self.minks[t[(k + 1) % 3]];
            let c = self.minks[t[(k + 2) % 3]];
            let nrm = a.cross(b).normalize_spacelike();
            let side = nrm.dot(c).signum();
            // inner products lose digits in proportion to the coordinates
            side * nrm.dot(x) >= -tol * nrm.euclid_norm() * x.euclid_norm()
        })
    }
}

/// The point at distance `l` from `i` in direction `theta`: `i e^l` rotated
/// about `i`. Built in the half-plane without cancellation.
fn point_at(l: f64, theta: f64) -> HPoint {
    let (s, c) = (theta / 2.0).sin_cos();
    let e = l.exp();
    let den = c * c + s * s * e * e;
    let x = -s * c * (2.0 * l).exp_m1() / den;
    HPoint::halfplane(x, e / den).expect("finite point")
}

/// Angle between the sides `a`, `b` of a triangle with third side `c`.
fn apex_angle(a: f64, b: f64, c: f64) -> Result<f64> {
    // sin^2(gamma/2) = (cosh c - cosh(a - b)) / (2 sinh a sinh b)
    let s2 = (c.cosh() - (a - b).cosh()) / (2.0 * a.sinh() * b.sinh());
    if !(-1e-15..=1.0 + 1e-15).contains(&s2) || !s2.is_finite() {
        return Err(Error::domain(format!("no triangle with sides {a}, {b}, {c}")));
    }
    Ok(2.0 * s2.clamp(0.0, 1.0).sqrt().asin())
}

struct Fan {
    minks: Vec<Mink>,
    vertices: Vec<PolygonVertex>,
    triangles: Vec<[usize; 3]>,
    /// Sides of the fan polygon `v, p_0, .., p_m` as (start, end, inner).
    sides: Vec<(usize, usize, usize)>,
    /// Direction of each spoke.
    thetas: Vec<f64>,
}

fn fan(spokes: &[f64], outer: &[f64]) -> Result<Fan> {
    let m = outer.len();
    debug_assert_eq!(spokes.len(), m + 1);
    let mut thetas = vec![0.0];
    for k in 1..=m {
        thetas.push(thetas[k - 1] + apex_angle(spokes[k - 1], spokes[k], outer[k - 1])?);
    }
    if thetas[m] >= 2.0 * PI {
        return Err(Error::domain(format!("fan wraps around v (total angle {})", thetas[m])));
    }
    let mut vertices = vec![PolygonVertex::Finite(HPoint::origin(Model::HalfPlane))];
    vertices.extend((0..=m).map(|k| PolygonVertex::Finite(point_at(spokes[k], thetas[k]))));
    let minks = vertices.iter().map(|v| v.mink()).collect();
    let triangles = (1..=m).map(|k| [0, k, k + 1]).collect();
    let mut sides = vec![(0, 1, 2)];
    for k in 1..=m {
        sides.push((k, k + 1, 0));
    }
    sides.push((m + 1, 0, m));
    Ok(Fan { minks, vertices, triangles, sides, thetas })
}

fn finite(v: &PolygonVertex) -> HPoint {
    match v {
        PolygonVertex::Finite(p) => *p,
        PolygonVertex::Ideal(_) => unreachable!("finite vertex expected"),
    }
}

/// Labels `a_i, b_i, c_i, d_i` for `i = 1..=g`.
fn handle_labels(g: usize) -> Vec<String> {
    (1..=g).flat_map(|i| ["a", "b", "c", "d"].map(|c| format!("{c}{i}"))).collect()
}

/// Assembles the polygon: the first `n` fan sides receive cusps, the rest are
/// labelled as handles.
fn assemble(g: usize, n: usize, r: f64, f: Fan, tol: &Tolerances) -> Result<ExtremalPolygon> {
    let Fan { mut minks, mut vertices, mut triangles, sides: fan_sides, .. } = f;
    let base = vertices.len();
    let mut order = Vec::new();
    let mut sides_raw: Vec<(String, usize, usize, usize)> = Vec::new();
    let labels = handle_labels(g);
    for (k, &(a, b, inner)) in fan_sides.iter().enumerate() {
        order.push(a);
        if k < n {
            let pa = finite(&vertices[a]);
            let pb = finite(&vertices[b]);
            let bis = perpendicular_bisector(&pa, &pb)?;
            let nrm = minks[a].cross(minks[b]);
            let inside = nrm.dot(minks[inner]).signum();
            let xi = [bis.start(), bis.end()]
                .into_iter()
                .find(|x| nrm.dot(x.null()) * inside < 0.0)
                .ok_or_else(|| Error::degenerate("bisector does not leave the polygon"))?;
            let id = vertices.len();
            vertices.push(PolygonVertex::Ideal(xi));
            minks.push(xi.null());
            triangles.push([a, id, b]);
            order.push(id);
            sides_raw.push((format!("e{}-", k + 1), a, id, b));
            sides_raw.push((format!("e{}+", k + 1), id, b, a));
        } else {
            sides_raw.push((labels[k - n].clone(), a, b, inner));
        }
    }
    debug_assert_eq!(order.len(), base + n);
    // renumber in boundary order
    let mut pos = vec![0; vertices.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let vertices: Vec<PolygonVertex> = order.iter().map(|&v| vertices[v]).collect();
    let minks: Vec<Mink> = order.iter().map(|&v| minks[v]).collect();
    let triangles: Vec<[usize; 3]> = triangles.iter().map(|t| t.map(|v| pos[v])).collect();
    let sides: Vec<Side> = sides_raw
        .into_iter()
        .map(|(label, a, b, inner)| {
            let (a, b, inner) = (pos[a], pos[b], pos[inner]);
            let length = match (vertices[a], vertices[b]) {
                (PolygonVertex::Finite(p), PolygonVertex::Finite(q)) => distance(&p, &q),
                _ => f64::INFINITY,
            };
            Side { label, start: a, end: b, length, inner }
        })
        .collect();

    let mut angles = vec![0.0; vertices.len()];
    let mut area = 0.0;
    for t in &triangles {
        let mut defect = PI;
        for c in 0..3 {
            if let PolygonVertex::Finite(w) = vertices[t[c]] {
                let a = vertex_angle(&w, &vertices[t[(c + 1) % 3]], &vertices[t[(c + 2) % 3]]);
                angles[t[c]] += a;
                defect -= a;
            }
        }
        area += defect;
    }
    let angle_sum: f64 = angles.iter().sum();

    let mut poly = ExtremalPolygon {
        g,
        n,
        r,
        vertices,
        sides,
        angles,
        angle_sum,
        angle_residual: angle_sum - 2.0 * PI,
        triangles,
        area,
        pairings: Vec::new(),
        minks,
    };
    poly.pairings = pairings(&poly, tol)?;
    Ok(poly)
}

fn maps_outside(poly: &ExtremalPolygon, iso: &Isometry, from: &Side, to: &Side) -> bool {
    let m = &poly.minks;
    let reference = match poly.vertices[from.inner] {
        PolygonVertex::Finite(p) => iso.apply(&p).hyperboloid(),
        PolygonVertex::Ideal(x) => iso.apply_ideal(&x).null(),
    };
    let nrm = m[to.start].cross(m[to.end]);
    nrm.dot(reference) * nrm.dot(m[to.inner]) < 0.0
}

fn pairings(poly: &ExtremalPolygon, tol: &Tolerances) -> Result<Vec<Pairing>> {
    let mut out = Vec::new();
    let v = &poly.vertices;
    for i in 1..=poly.n {
        let s1 = poly.side(&format!("e{i}-")).expect("cusp side");
        let s2 = poly.side(&format!("e{i}+")).expect("cusp side");
        let (a, b) = (finite(&v[s1.start]), finite(&v[s2.end]));
        let xi = match v[s1.end] {
            PolygonVertex::Ideal(x) => x,
            PolygonVertex::Finite(_) => unreachable!("cusp vertex is ideal"),
        };
        let iso = Isometry::parabolic(&xi, &a, &b);
        let endpoint_error = distance(&iso.apply(&a), &b) + iso.apply_ideal(&xi).chord(&xi);
        out.push(Pairing {
            name: format!("p{i}"),
            kind: PairingKind::Parabolic,
            from: s1.label.clone(),
            to: s2.label.clone(),
            isometry: iso,
            endpoint_error,
            maps_outside: maps_outside(poly, &iso, s1, s2),
        });
    }
    for i in 1..=poly.g {
        for (name, x, y) in [("f", "a", "c"), ("g", "b", "d")] {
            let s1 = poly.side(&format!("{x}{i}")).expect("handle side");
            let s2 = poly.side(&format!("{y}{i}")).expect("handle side");
            let (p, q) = (finite(&v[s1.start]), finite(&v[s1.end]));
            let (s, t) = (finite(&v[s2.end]), finite(&v[s2.start]));
            let iso = Isometry::segment_map(&p, &q, &s, &t, tol.geom.max(1e-9 * s1.length))?;
            let endpoint_error = distance(&iso.apply(&p), &s) + distance(&iso.apply(&q), &t);
            out.push(Pairing {
                name: format!("{name}{i}"),
                kind: PairingKind::Hyperbolic,
                from: s1.label.clone(),
                to: s2.label.clone(),
                isometry: iso,
                endpoint_error,
                maps_outside: maps_outside(poly, &iso, s1, s2),
            });
        }
    }
    Ok(out)
}

/// The polygon of `4g - 2` equilateral triangles with sides `2 r_max(g, 0)`
/// realising the bound for a closed surface of genus `g >= 2`.
pub fn build_extremal_closed(g: usize, tol: &Tolerances) -> Result<ExtremalPolygon> {
    if g < 2 {
        return Err(Error::domain(format!("closed surfaces need genus >= 2, got {g}")));
    }
    build_extremal_cusped(g, 0, tol)
}

/// The polygon for signature `(g, n)`: `4g + n - 2` equilateral triangles of
/// side `2r` plus `n` triangles with one ideal vertex each.
pub fn build_extremal_cusped(g: usize, n: usize, tol: &Tolerances) -> Result<ExtremalPolygon> {
    let r = r_max(g, n)?.r;
    let m = 4 * g + n - 2;
    let f = fan(&vec![2.0 * r; m + 1], &vec![2.0 * r; m])?;
    assemble(g, n, r, f, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedSequence {
    pub g: usize,
    pub r: f64,
    /// Length of the two long sides of the isosceles triangles.
    pub x: f64,
    /// Geodesic joining the midpoints of the spokes of length `x`.
    pub d: f64,
    /// `acosh(1 + (cosh 2r - 1) / (2 cosh x + 2))`.
    pub d_closed_form: f64,
    /// Area equation residual at `x`.
    pub residual: f64,
    pub polygon: ExtremalPolygon,
}

/// Isosceles triangle area `D0(2r, x, x)` from its angles.
pub fn isosceles_area(r: f64, x: f64) -> f64 {
    let apex = 2.0 * (r.sinh() / x.sinh()).asin();
    let base = (r.tanh() / x.tanh()).acos();
    PI - apex - 2.0 * base
}

/// The polygon of genus `g` with two isosceles triangles `(2r, x, x)` and
/// `4g - 4` equilateral ones, for `r_max(g - 1, 2) < r < r_max(g, 0)`.
pub fn closed_sequence_surface(g: usize, r: f64, tol: &Tolerances) -> Result<ClosedSequence> {
    if g < 2 {
        return Err(Error::domain(format!("closed surfaces need genus >= 2, got {g}")));
    }
    let lo = r_max(g - 1, 2)?.r;
    let hi = r_max(g, 0)?.r;
    if !(r > lo && r < hi) {
        return Err(Error::domain(format!("r = {r} must lie in ({lo}, {hi})")));
    }
    let eq = PI - 3.0 * alpha_at(r);
    let k = (4 * g - 4) as f64;
    let target = (2 * g - 2) as f64 * 2.0 * PI;
    let eqn = |x: f64| k * eq + 2.0 * isosceles_area(r, x) - target;
    let top = roots::grow_until(4.0 * r, 64, |x| x > 700.0 || eqn(x) > 0.0)?;
    if top > 700.0 {
        return Err(Error::NoConvergence(format!("r = {r} is too close to {lo}: x overflows")));
    }
    let x = roots::bisect(eqn, 2.0 * r, top)?;
    let m = 4 * g - 2;
    let mut spokes = vec![2.0 * r; m + 1];
    spokes[0] = x;
    spokes[1] = x;
    let mut outer = vec![2.0 * r; m];
    outer[1] = x;
    let f = fan(&spokes, &outer)?;
    let d = distance(&point_at(x / 2.0, f.thetas[0]), &point_at(x / 2.0, f.thetas[1]));
    let polygon = assemble(g, 0, r, f, tol)?;
    let d_closed_form = (1.0 + ((2.0 * r).cosh() - 1.0) / (2.0 * x.cosh() + 2.0)).acosh();
    Ok(ClosedSequence { g, r, x, d, d_closed_form, residual: eqn(x), polygon })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_non_hyperbolic_signatures() {
        assert!(r_max(0, 2).is_err());
        assert!(r_max(1, 0).is_err());
        assert!(r_max(0, 3).is_ok());
        assert!(boroczky_radius(0).is_err());
    }

    #[test]
    fn alpha_and_beta_match_triangle_areas() {
        for r in [0.2, 0.7, 1.5] {
            let eq = cyclic::area(&[2.0 * r; 3]).unwrap();
            assert_abs_diff_eq!(eq, PI - 3.0 * alpha(r).unwrap(), epsilon = 1e-12);
            let cusp = cyclic::area(&[f64::INFINITY, 2.0 * r, f64::INFINITY]).unwrap();
            assert_abs_diff_eq!(cusp, PI - 2.0 * beta(r).unwrap(), epsilon = 1e-12);
        }
        assert!(alpha(0.0).is_err());
        assert!(beta(-1.0).is_err());
    }

    #[test]
    fn isosceles_area_agrees_with_cyclic() {
        for (r, x) in [(0.5, 1.2), (0.8, 3.0), (1.0, 2.1)] {
            let a = cyclic::area(&[2.0 * r, x, x]).unwrap();
            assert_abs_diff_eq!(isosceles_area(r, x), a, epsilon = 1e-11);
        }
    }

    #[test]
    fn genus_two_closed_form() {
        let rep = r_max(2, 0).unwrap();
        assert_abs_diff_eq!(rep.r, rep.closed_form.unwrap(), epsilon = 1e-14);
        assert!(rep.residual.abs() <= 1e-12);
        assert_abs_diff_eq!(boroczky_radius(-2).unwrap(), rep.r, epsilon = 1e-12);
    }

    #[test]
    fn closed_polygon_certificates() {
        let tol = Tolerances::DEFAULT;
        let p = build_extremal_closed(2, &tol).unwrap();
        assert_eq!(p.vertices.len(), 8);
        assert!(p.angle_residual.abs() <= 1e-10, "{}", p.angle_residual);
        for l in p.finite_side_lengths() {
            assert_abs_diff_eq!(l, 2.0 * p.r, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(p.area, 4.0 * PI, epsilon = 1e-9);
        assert_eq!(p.pairings.len(), 4);
        for q in &p.pairings {
            assert!(q.endpoint_error <= 1e-9, "{} {}", q.name, q.endpoint_error);
            assert!(q.maps_outside, "{}", q.name);
        }
        let audit = p.packing_audit(1e-12);
        assert_eq!(audit.violations, 0);
        assert!(audit.min_separation >= 2.0 * p.r - 1e-9);
    }

    #[test]
    fn cusped_polygon_certificates() {
        let tol = Tolerances::DEFAULT;
        for (g, n) in [(0, 3), (1, 1), (1, 2), (2, 3)] {
            let p = build_extremal_cusped(g, n, &tol).unwrap();
            assert_eq!(p.vertices.len(), 4 * g + 2 * n);
            assert!(p.angle_residual.abs() <= 1e-10, "({g},{n}) {}", p.angle_residual);
            let chi = 2.0 * g as f64 - 2.0 + n as f64;
            assert_abs_diff_eq!(p.area, 2.0 * PI * chi, epsilon = 1e-9);
            for q in &p.pairings {
                assert!(q.endpoint_error <= 1e-9, "{} {}", q.name, q.endpoint_error);
                assert!(q.maps_outside, "({g},{n}) {}", q.name);
                if q.kind == PairingKind::Parabolic {
                    let [[a, b], [c, d]] = q.isometry.matrix();
                    assert_abs_diff_eq!(q.isometry.trace2() / (a * d - b * c), 4.0, epsilon = 1e-9);
                }
            }
            assert_eq!(p.packing_audit(1e-12).violations, 0);
        }
    }

    #[test]
    fn closed_sequence_midpoint_arc() {
        let tol = Tolerances::DEFAULT;
        let lo = r_max(1, 2).unwrap().r;
        let hi = r_max(2, 0).unwrap().r;
        let s = closed_sequence_surface(2, 0.5 * (lo + hi), &tol).unwrap();
        assert!(s.x > 2.0 * s.r);
        assert_abs_diff_eq!(s.d, s.d_closed_form, epsilon = 1e-10);
        assert!(s.polygon.angle_residual.abs() <= 1e-9);
        assert_abs_diff_eq!(s.polygon.area, 4.0 * PI, epsilon = 1e-9);
        assert!(s.polygon.pairings.iter().all(|q| q.endpoint_error <= 1e-9 && q.maps_outside));
        assert!(closed_sequence_surface(2, hi + 1e-3, &tol).is_err());
    }
}
