//! Intersection of convex polygons, done in the Klein model where geodesics
//! are straight.

use super::area::{polygon_area, PolygonVertex};
use super::minkowski::Mink;
use super::point::{HPoint, IdealPoint, Model};

fn klein_to_vertex(k: [f64; 2]) -> Option<PolygonVertex> {
    let r2 = k[0] * k[0] + k[1] * k[1];
    if r2 >= 1.0 - 1e-13 {
        let v = Mink([1.0, k[0], k[1]]);
        return Some(PolygonVertex::Ideal(IdealPoint::from_null(v)));
    }
    let s = 1.0 / (1.0 - r2).sqrt();
    let x = HPoint::from_hyperboloid(Mink([s, k[0] * s, k[1] * s]), Model::Disk);
    Some(PolygonVertex::Finite(x))
}

fn signed_area2(p: &[[f64; 2]]) -> f64 {
    let n = p.len();
    (0..n).map(|i| p[i][0] * p[(i + 1) % n][1] - p[(i + 1) % n][0] * p[i][1]).sum()
}

fn ccw(mut p: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    if signed_area2(&p) < 0.0 {
        p.reverse();
    }
    p
}

/// Hyperbolic area of the intersection of two convex polygons.
pub fn intersection_area(a: &[PolygonVertex], b: &[PolygonVertex]) -> f64 {
    let pa = ccw(a.iter().map(|v| v.mink().klein()).collect());
    let clip = ccw(b.iter().map(|v| v.mink().klein()).collect());
    let mut poly = pa;
    let m = clip.len();
    for i in 0..m {
        if poly.is_empty() {
            break;
        }
        let c0 = clip[i];
        let c1 = clip[(i + 1) % m];
        let side = |p: [f64; 2]| (c1[0] - c0[0]) * (p[1] - c0[1]) - (c1[1] - c0[1]) * (p[0] - c0[0]);
        let mut next = Vec::new();
        let n = poly.len();
        for j in 0..n {
            let p = poly[j];
            let q = poly[(j + 1) % n];
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                next.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                next.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
        poly = next;
    }
    // drop near duplicates
    let mut clean: Vec<[f64; 2]> = Vec::new();
    for p in poly {
        if clean.last().is_none_or(|q: &[f64; 2]| (p[0] - q[0]).hypot(p[1] - q[1]) > 1e-13) {
            clean.push(p);
        }
    }
    while clean.len() > 1 {
        let (f, l) = (clean[0], clean[clean.len() - 1]);
        if (f[0] - l[0]).hypot(f[1] - l[1]) <= 1e-13 {
            clean.pop();
        } else {
            break;
        }
    }
    if clean.len() < 3 || signed_area2(&clean).abs() < 1e-20 {
        return 0.0;
    }
    let verts: Option<Vec<PolygonVertex>> = clean.into_iter().map(klein_to_vertex).collect();
    match verts.map(|v| polygon_area(&v)) {
        Some(Ok(a)) => a.max(0.0),
        _ => 0.0,
    }
}
