//! SVG drawings in the Poincare disk: geodesics as arcs of circles
//! orthogonal to the boundary.

use std::fmt::Write;

const SIZE: f64 = 800.0;
const SCALE: f64 = 380.0;

pub struct Svg {
    body: String,
}

fn screen(p: [f64; 2]) -> (f64, f64) {
    (SIZE / 2.0 + SCALE * p[0], SIZE / 2.0 - SCALE * p[1])
}

fn circumcenter(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Option<[f64; 2]> {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if d.abs() < 1e-14 {
        return None;
    }
    let (a2, b2, c2) = (a[0] * a[0] + a[1] * a[1], b[0] * b[0] + b[1] * b[1], c[0] * c[0] + c[1] * c[1]);
    Some([
        (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d,
        (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d,
    ])
}

/// Centre of the circle orthogonal to the unit circle through `p` and `q`, or
/// `None` when the geodesic is a diameter.
fn orthogonal_center(p: [f64; 2], q: [f64; 2]) -> Option<[f64; 2]> {
    if (p[0] * q[1] - p[1] * q[0]).abs() < 1e-12 {
        return None;
    }
    let r2 = |x: [f64; 2]| x[0] * x[0] + x[1] * x[1];
    let inner = if r2(p) <= r2(q) { p } else { q };
    if r2(inner) >= 1.0 - 1e-12 {
        // both on the boundary: tangent lines meet at the centre
        let s = 1.0 + p[0] * q[0] + p[1] * q[1];
        return Some([(p[0] + q[0]) / s, (p[1] + q[1]) / s]);
    }
    let k = 1.0 / r2(inner);
    circumcenter(p, q, [inner[0] * k, inner[1] * k])
}

/// Path command continuing from `p` along the geodesic to `q`.
pub fn geodesic_to(p: [f64; 2], q: [f64; 2]) -> String {
    let (qx, qy) = screen(q);
    match orthogonal_center(p, q) {
        None => format!("L {qx:.3} {qy:.3}"),
        Some(c) => {
            let r = ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)).sqrt() * SCALE;
            let (px, py) = screen(p);
            let (cx, cy) = screen(c);
            let cross = (px - cx) * (qy - cy) - (py - cy) * (qx - cx);
            let sweep = if cross > 0.0 { 1 } else { 0 };
            format!("A {r:.3} {r:.3} 0 0 {sweep} {qx:.3} {qy:.3}")
        }
    }
}

impl Default for Svg {
    fn default() -> Self {
        Self::new()
    }
}

impl Svg {
    pub fn new() -> Self {
        let mut body = String::new();
        let c = SIZE / 2.0;
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        body.push_str(
            "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#c0392b\"/></marker></defs>\n",
        );
        let _ = writeln!(body, r##"<circle cx="{c}" cy="{c}" r="{SCALE}" fill="#fbfbf8" stroke="#333" stroke-width="1.5"/>"##);
        Svg { body }
    }

    /// Geodesic polygon through `pts` (disk coordinates, ideal points on the
    /// unit circle).
    pub fn polygon(&mut self, pts: &[[f64; 2]], fill: &str, opacity: f64) {
        if pts.len() < 2 {
            return;
        }
        let (x, y) = screen(pts[0]);
        let mut d = format!("M {x:.3} {y:.3}");
        for i in 0..pts.len() {
            d.push(' ');
            d.push_str(&geodesic_to(pts[i], pts[(i + 1) % pts.len()]));
        }
        let _ = writeln!(
            self.body,
            r##"<path d="{d} Z" fill="{fill}" fill-opacity="{opacity}" stroke="#555" stroke-width="0.8"/>"##
        );
    }

    pub fn segment(&mut self, p: [f64; 2], q: [f64; 2], stroke: &str, width: f64, arrow: bool) {
        let (x, y) = screen(p);
        let marker = if arrow { r#" marker-end="url(#arrow)""# } else { "" };
        let _ = writeln!(
            self.body,
            r#"<path d="M {x:.3} {y:.3} {}" fill="none" stroke="{stroke}" stroke-width="{width}"{marker}/>"#,
            geodesic_to(p, q)
        );
    }

    pub fn dot(&mut self, p: [f64; 2], r: f64, fill: &str) {
        let (x, y) = screen(p);
        let _ = writeln!(self.body, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{r}" fill="{fill}"/>"#);
    }

    pub fn label(&mut self, p: [f64; 2], text: &str) {
        let (x, y) = screen(p);
        let _ = writeln!(self.body, r##"<text x="{x:.3}" y="{y:.3}" font-size="11" fill="#222">{text}</text>"##);
    }

    pub fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}
