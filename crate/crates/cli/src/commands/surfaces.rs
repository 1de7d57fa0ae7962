use cdk_core::kernel::PolygonVertex;
use cdk_core::surfaces::{self, ExtremalPolygon, InjRadReport, Method, PairingKind};
use serde_json::{json, Value};

use super::{Context, Output};
use crate::error::{CliError, CliResult};
use crate::schema::{self, Check, Report};
use crate::svg::Svg;

const RESIDUAL: f64 = 1e-12;
const ANGLE: f64 = 1e-9;
const SIDE: f64 = 1e-9;
const AREA: f64 = 1e-8;

fn row(rep: &InjRadReport) -> Value {
    json!({
        "g": rep.g,
        "n": rep.n,
        "r": rep.r,
        "residual": rep.residual,
        "method": match rep.method { Method::ClosedForm => "closed_form", Method::Bisection => "bisection" },
        "closed_form": rep.closed_form,
    })
}

fn hyperbolic(g: usize, n: usize) -> bool {
    2 * g + n > 2
}

pub fn rmax_single(g: usize, n: usize) -> CliResult<Output> {
    if !hyperbolic(g, n) {
        return Err(CliError::input("--g", format!("signature ({g}, {n}) is not hyperbolic")));
    }
    let rep = surfaces::r_max(g, n)?;
    let mut results = json!({ "rows": [row(&rep)] });
    let mut checks = vec![Check::new("residual", rep.residual.abs() <= RESIDUAL, format!("{:e}", rep.residual))];
    if n == 0 {
        let b = surfaces::boroczky_radius(2 - 2 * g as i64)?;
        results["boroczky"] = json!(b);
        checks.push(Check::new("boroczky", (b - rep.r).abs() <= 1e-10, format!("{b} against {}", rep.r)));
    }
    Ok(Output { report: Report::new(Value::Null, results, checks, Vec::new()), svg: None })
}

/// All hyperbolic signatures with `g <= gmax`, `n <= nmax`, with the flags
/// `r_{g-1,n+2} < r_{g,n}` and monotonicity in each argument.
pub fn rmax_table(gmax: usize, nmax: usize) -> CliResult<Output> {
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    let r = |g: usize, n: usize| surfaces::r_max(g, n).map(|x| x.r);
    for g in 0..=gmax {
        for n in 0..=nmax {
            if hyperbolic(g, n) {
                let rep = surfaces::r_max(g, n)?;
                worst = worst.max(rep.residual.abs());
                rows.push(row(&rep));
            }
        }
    }
    let mut chain = Vec::new();
    let mut chain_ok = true;
    for g in 1..=gmax {
        for n in 0..=nmax {
            if !hyperbolic(g, n) {
                continue;
            }
            let (hi, lo) = (r(g, n)?, r(g - 1, n + 2)?);
            let holds = lo < hi;
            chain_ok &= holds;
            chain.push(json!({ "g": g, "n": n, "r": hi, "r_trade": lo, "holds": holds }));
        }
    }
    let mut monotone_ok = true;
    for g in 0..=gmax {
        for n in 0..=nmax {
            if !hyperbolic(g, n) {
                continue;
            }
            let here = r(g, n)?;
            if g < gmax {
                monotone_ok &= r(g + 1, n)? > here;
            }
            if n < nmax {
                monotone_ok &= r(g, n + 1)? > here;
            }
        }
    }
    let results = json!({ "rows": rows, "chain": chain, "monotone": monotone_ok });
    let checks = vec![
        Check::new("residual", worst <= RESIDUAL, format!("largest residual {worst:e}")),
        Check::new("chain", chain_ok, "r_{g-1,n+2} < r_{g,n}"),
        Check::new("monotone", monotone_ok, "r increases in g and in n"),
    ];
    Ok(Output { report: Report::new(Value::Null, results, checks, Vec::new()), svg: None })
}

pub fn polygon_json(p: &ExtremalPolygon, ctx: &Context) -> Value {
    let audit = p.packing_audit(1e-12);
    json!({
        "g": p.g,
        "n": p.n,
        "r": p.r,
        "vertices": p.vertices.iter().map(|v| schema::vertex(v, ctx.model)).collect::<Vec<_>>(),
        "sides": p.sides.iter().map(|s| json!({
            "label": s.label, "start": s.start, "end": s.end, "length": schema::length(s.length),
        })).collect::<Vec<_>>(),
        "angles": p.angles,
        "angle_sum": p.angle_sum,
        "angle_residual": p.angle_residual,
        "area": p.area,
        "triangles": p.triangles,
        "pairings": p.pairings.iter().map(|q| json!({
            "name": q.name,
            "kind": match q.kind { PairingKind::Hyperbolic => "hyperbolic", PairingKind::Parabolic => "parabolic" },
            "from": q.from,
            "to": q.to,
            "matrix": q.isometry.matrix(),
            "endpoint_error": q.endpoint_error,
            "maps_outside": q.maps_outside,
        })).collect::<Vec<_>>(),
        "packing": {
            "samples": audit.samples,
            "violations": audit.violations,
            "min_separation": audit.min_separation,
        },
    })
}

fn polygon_checks(p: &ExtremalPolygon, equal_sides: bool) -> Vec<Check> {
    let mut checks = vec![Check::new(
        "angle_sum",
        p.angle_residual.abs() <= ANGLE,
        format!("residual {:e}", p.angle_residual),
    )];
    if equal_sides {
        let worst = p.finite_side_lengths().iter().map(|l| (l - 2.0 * p.r).abs()).fold(0.0, f64::max);
        checks.push(Check::new("sides", worst <= SIDE, format!("largest deviation from 2r {worst:e}")));
    }
    let chi = 2.0 * p.g as f64 - 2.0 + p.n as f64;
    let area_err = (p.area - 2.0 * std::f64::consts::PI * chi).abs();
    checks.push(Check::new("area", area_err <= AREA, format!("deviation {area_err:e}")));
    let bad: Vec<&str> = p
        .pairings
        .iter()
        .filter(|q| q.endpoint_error > SIDE || !q.maps_outside)
        .map(|q| q.name.as_str())
        .collect();
    checks.push(Check::new("pairings", bad.is_empty(), format!("failing: {bad:?}")));
    let audit = p.packing_audit(1e-12);
    checks.push(Check::new("packing", audit.violations == 0, format!("{} of {} samples outside", audit.violations, audit.samples)));
    checks
}

pub fn extremal(g: usize, n: usize, closed_seq: Option<f64>, ctx: &Context, want_svg: bool) -> CliResult<Output> {
    let (results, checks, poly) = match closed_seq {
        Some(r) => {
            if n != 0 {
                return Err(CliError::input("--n", "the closed sequence needs n = 0"));
            }
            let s = surfaces::closed_sequence_surface(g, r, &ctx.tol)?;
            let mut checks = polygon_checks(&s.polygon, false);
            checks.push(Check::new(
                "short_arc",
                (s.d - s.d_closed_form).abs() <= 1e-9,
                format!("d = {} against {}", s.d, s.d_closed_form),
            ));
            let results = json!({
                "x": s.x,
                "d": s.d,
                "d_closed_form": s.d_closed_form,
                "residual": s.residual,
                "polygon": polygon_json(&s.polygon, ctx),
            });
            (results, checks, s.polygon)
        }
        None => {
            let p = match n {
                0 => surfaces::build_extremal_closed(g, &ctx.tol),
                _ => surfaces::build_extremal_cusped(g, n, &ctx.tol),
            }
            .map_err(|e| match e {
                cdk_core::Error::Domain(m) => CliError::input("--g", m),
                e => e.into(),
            })?;
            (json!({ "polygon": polygon_json(&p, ctx) }), polygon_checks(&p, true), p)
        }
    };
    let svg = want_svg.then(|| render(&poly));
    Ok(Output { report: Report::new(Value::Null, results, checks, Vec::new()), svg })
}

fn disk(v: &PolygonVertex) -> [f64; 2] {
    match v {
        PolygonVertex::Finite(p) => p.to_model(cdk_core::kernel::Model::Disk).coords(),
        PolygonVertex::Ideal(x) => x.disk_point(),
    }
}

fn render(p: &ExtremalPolygon) -> String {
    let mut svg = Svg::new();
    for t in &p.triangles {
        let pts: Vec<[f64; 2]> = t.iter().map(|&i| disk(&p.vertices[i])).collect();
        let fill = if t.iter().any(|&i| p.vertices[i].is_ideal()) { "#bb8fce" } else { "#7fb3d5" };
        svg.polygon(&pts, fill, 0.5);
    }
    for s in &p.sides {
        let (a, b) = (disk(&p.vertices[s.start]), disk(&p.vertices[s.end]));
        svg.segment(a, b, "#1b2631", 1.6, false);
        let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        svg.label(mid, &s.label);
    }
    for v in &p.vertices {
        if !v.is_ideal() {
            svg.dot(disk(v), 2.5, "#1b2631");
        }
    }
    svg.finish()
}
