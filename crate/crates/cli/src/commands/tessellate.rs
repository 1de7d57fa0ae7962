use cdk_core::centered::{self, BoundOutcome, BoundaryEdge, Cell, CellKind};
use cdk_core::cyclic;
use cdk_core::kernel::{HPoint, IdealPoint, Model};
use cdk_core::voronoi::{self, EdgeClass, EdgeEnd, VoronoiDiagram};
use serde::Deserialize;
use serde_json::{json, Value};

use super::{Context, Output};
use crate::error::CliResult;
use crate::schema::{self, Check, LengthJson, PointJson, Report};
use crate::svg::Svg;

/// Agreement demanded between the independent area computations of a cell.
const AREA_AGREEMENT: f64 = 1e-8;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SitesInput {
    #[serde(default)]
    pub schema: Option<String>,
    pub sites: Vec<PointJson>,
    /// Length for the area bounds; defaults to the shortest dual edge.
    #[serde(default)]
    pub d: Option<LengthJson>,
}

pub fn parse_sites(input: &SitesInput) -> CliResult<Vec<HPoint>> {
    schema::check_schema(&input.schema)?;
    input.sites.iter().enumerate().map(|(i, p)| p.to_point(&format!("sites[{i}]"))).collect()
}

fn end_json(end: &EdgeEnd, ctx: &Context) -> Value {
    match end {
        EdgeEnd::Vertex(v) => json!({ "vertex": v }),
        EdgeEnd::Ideal(x) => json!({ "ideal": schema::ideal(x, ctx.model) }),
    }
}

fn class_json(c: &EdgeClass, ctx: &Context) -> Value {
    match c {
        EdgeClass::Centered => json!("centered"),
        EdgeClass::NonCentered { initial, terminal } => {
            json!({ "noncentered": { "initial": initial, "terminal": end_json(terminal, ctx) } })
        }
    }
}

fn kind_name(k: CellKind) -> &'static str {
    match k {
        CellKind::GeometricDual => "geometric_dual",
        CellKind::TreeCell => "tree_cell",
    }
}

fn boundary_json(b: &BoundaryEdge, ctx: &Context) -> Value {
    match b {
        BoundaryEdge::Dual { edge, length } => json!({ "dual": { "edge": edge, "length": schema::length(*length) } }),
        BoundaryEdge::IdealRay { site, ideal } => {
            json!({ "ideal_ray": { "site": site, "ideal": schema::ideal(ideal, ctx.model) } })
        }
    }
}

pub fn run(input: &SitesInput, d_override: Option<f64>, ctx: &Context, want_svg: bool) -> CliResult<Output> {
    let sites = parse_sites(input)?;
    let d_input = match (d_override, &input.d) {
        (Some(d), _) => Some(d),
        (None, Some(l)) => Some(l.value("d")?),
        (None, None) => None,
    };
    if let Some(d) = d_input {
        if !(d > 0.0) {
            return Err(crate::error::CliError::input("d", format!("bound length must be positive, got {d}")));
        }
    }
    let diagram = voronoi::build_with(&sites, &ctx.tol)?;
    let mut checks = Vec::new();
    let mut warnings = Vec::new();
    if diagram.vertices.is_empty() {
        warnings.push(
            "the Voronoi diagram has no vertex, so the dual has no 2-cells (sites on a common horocycle or equidistant curve, or fewer than 3 sites)"
                .to_string(),
        );
    }

    let violations = voronoi::validate_empty_disk(&diagram);
    checks.push(Check::new(
        "empty_disk",
        violations.is_empty(),
        format!("{} violation(s) of the empty circumdisk property", violations.len()),
    ));

    let vertices: Vec<Value> = diagram
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            json!({
                "id": i,
                "position": schema::point(&v.position, ctx.model),
                "radius": v.radius,
                "sites": v.sites,
                "edges": v.edges,
            })
        })
        .collect();
    let classes = voronoi::classify_edges(&diagram);
    let edges: Vec<Value> = diagram
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            json!({
                "id": i,
                "sites": e.sites,
                "ends": [end_json(&e.ends[0], ctx), end_json(&e.ends[1], ctx)],
                "dual_length": schema::length(e.dual_length),
                "class": class_json(&classes[i], ctx),
            })
        })
        .collect();
    let mut dual = Vec::new();
    for (v, vert) in diagram.vertices.iter().enumerate() {
        let lengths = centered::vertex_polygon(&diagram, v);
        let class = cyclic::classify_with(&lengths, &ctx.tol)?;
        dual.push(json!({
            "vertex": v,
            "sites": vert.sites,
            "lengths": schema::lengths(&lengths),
            "class": schema::class(&class),
            "area": cyclic::area_with(&lengths, &ctx.tol)?,
        }));
    }

    let mut results = json!({
        "sites": sites.iter().map(|p| schema::point(p, ctx.model)).collect::<Vec<_>>(),
        "voronoi": { "vertices": vertices, "edges": edges },
        "geometric_dual": { "cells": dual },
    });

    let forest = match centered::non_centered_forest(&diagram) {
        Ok(f) => {
            checks.push(Check::new("forest", true, format!("{} non-centered component(s)", f.components.len())));
            f
        }
        Err(e) => {
            checks.push(Check::new("forest", false, e.to_string()));
            let report = Report::new(Value::Null, results, checks, warnings);
            return Ok(Output { report, svg: None });
        }
    };
    results["forest"] = json!({
        "components": forest.components.iter().map(|c| json!({
            "root": c.root,
            "vertices": c.vertices,
            "edges": c.edges,
            "noncompact_edge": c.noncompact_edge,
        })).collect::<Vec<_>>(),
    });

    let cells = centered::build_cells(&diagram, &forest);
    let d = d_input.unwrap_or_else(|| centered::min_boundary_length(&cells));
    let mut worst_area = 0.0f64;
    let mut bound_failures = Vec::new();
    let mut bound_checked = 0;
    let mut cell_json = Vec::new();
    for (id, cell) in cells.iter().enumerate() {
        let area = centered::cell_area(&diagram, cell)?;
        let geometric = centered::cell_area_geometric(&diagram, cell)?;
        let pieces = centered::q_decomposition(&diagram, &forest, cell)?;
        let q_area: f64 = pieces.iter().map(|p| p.area).sum();
        worst_area = worst_area.max((area - geometric).abs()).max((area - q_area).abs());
        let bound = if d.is_finite() {
            match centered::check_area_bound(&diagram, cell, d)? {
                BoundOutcome::Checked(b) => {
                    bound_checked += 1;
                    if !b.holds {
                        bound_failures.push(id);
                    }
                    json!({ "k": b.k, "bound": b.bound, "holds": b.holds })
                }
                BoundOutcome::Skipped(why) => json!({ "skipped": why }),
            }
        } else {
            json!({ "skipped": "no finite dual edge length" })
        };
        cell_json.push(json!({
            "id": id,
            "kind": kind_name(cell.kind),
            "compact": cell.is_compact(),
            "k": cell.k(),
            "vertices": cell.vertices,
            "tree_edges": cell.tree_edges,
            "ideal_edge": cell.ideal_edge,
            "frontier": cell.frontier,
            "boundary": cell.boundary.iter().map(|b| boundary_json(b, ctx)).collect::<Vec<_>>(),
            "area": area,
            "area_geometric": geometric,
            "area_q": q_area,
            "bound": bound,
        }));
    }
    results["centered_dual"] = json!({ "d": schema::length(d), "cells": cell_json });
    checks.push(Check::new(
        "area_agreement",
        worst_area <= AREA_AGREEMENT,
        format!("largest discrepancy {worst_area:e}"),
    ));
    checks.push(Check::new(
        "area_bound",
        bound_failures.is_empty(),
        if bound_failures.is_empty() {
            format!("{bound_checked} cell(s) checked")
        } else {
            format!("bound fails on cells {bound_failures:?}")
        },
    ));

    let svg = want_svg.then(|| render(&diagram, &classes, &cells));
    Ok(Output { report: Report::new(Value::Null, results, checks, warnings), svg })
}

fn disk(p: &HPoint) -> [f64; 2] {
    p.to_model(Model::Disk).coords()
}

fn ideal_disk(x: &IdealPoint) -> [f64; 2] {
    x.disk_point()
}

fn render(diagram: &VoronoiDiagram, classes: &[EdgeClass], cells: &[Cell]) -> String {
    let mut svg = Svg::new();
    for cell in cells {
        let fill = match cell.kind {
            CellKind::GeometricDual => "#7fb3d5",
            CellKind::TreeCell if cell.is_compact() => "#f5b041",
            CellKind::TreeCell => "#bb8fce",
        };
        for &v in &cell.vertices {
            let pts: Vec<[f64; 2]> = diagram.vertices[v].sites.iter().map(|&s| disk(&diagram.sites[s])).collect();
            svg.polygon(&pts, fill, 0.45);
        }
        if let Some(e0) = cell.ideal_edge {
            let [s, t] = diagram.edges[e0].sites;
            let xi = diagram.edges[e0].ends.iter().find_map(|e| match e {
                EdgeEnd::Ideal(x) => Some(*x),
                EdgeEnd::Vertex(_) => None,
            });
            if let Some(xi) = xi {
                svg.polygon(&[disk(&diagram.sites[s]), disk(&diagram.sites[t]), ideal_disk(&xi)], fill, 0.3);
            }
        }
    }
    let point_of = |e: &EdgeEnd| match e {
        EdgeEnd::Vertex(v) => disk(&diagram.vertices[*v].position),
        EdgeEnd::Ideal(x) => ideal_disk(x),
    };
    for (i, e) in diagram.edges.iter().enumerate() {
        match &classes[i] {
            EdgeClass::Centered => svg.segment(point_of(&e.ends[0]), point_of(&e.ends[1]), "#7f8c8d", 0.8, false),
            EdgeClass::NonCentered { initial, terminal } => svg.segment(
                disk(&diagram.vertices[*initial].position),
                point_of(terminal),
                "#c0392b",
                2.0,
                true,
            ),
        }
    }
    for v in &diagram.vertices {
        svg.dot(disk(&v.position), 2.0, "#c0392b");
    }
    for (i, s) in diagram.sites.iter().enumerate() {
        svg.dot(disk(s), 3.0, "#1b2631");
        svg.label(disk(s), &i.to_string());
    }
    svg.finish()
}
