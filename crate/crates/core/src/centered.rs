//! The non-centered forest of a Voronoi tessellation and the 2-cells of the
//! centered dual complex built from it.

use std::f64::consts::PI;

use crate::cyclic;
use crate::kernel::{intersection_area, polygon_area, HPoint, IdealPoint, PolygonVertex};
use crate::voronoi::{classify_edges, EdgeClass, EdgeEnd, VoronoiDiagram};
use crate::{Error, Result};

/// A connected component of the non-centered subgraph, rooted at its vertex
/// of largest circumradius.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub vertices: Vec<usize>,
    /// Non-centered edges, including a noncompact one if present.
    pub edges: Vec<usize>,
    pub root: usize,
    pub noncompact_edge: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    pub classes: Vec<EdgeClass>,
    pub components: Vec<Component>,
    pub component_of: Vec<Option<usize>>,
    /// Outgoing non-centered edge of each vertex.
    pub out_edge: Vec<Option<usize>>,
}

/// Builds the forest of non-centered edges and checks its structure: every
/// vertex starts at most one non-centered edge, components are trees with at
/// most one noncompact edge, and circumradius grows along oriented edges.
pub fn non_centered_forest(diagram: &VoronoiDiagram) -> Result<Forest> {
    let classes = classify_edges(diagram);
    let nv = diagram.vertices.len();
    let mut out_edge: Vec<Option<usize>> = vec![None; nv];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (ei, c) in classes.iter().enumerate() {
        if let EdgeClass::NonCentered { initial, terminal } = c {
            if let Some(prev) = out_edge[*initial] {
                return Err(Error::structural(
                    format!("vertex {initial} is the initial vertex of edges {prev} and {ei}"),
                    vec![*initial],
                ));
            }
            out_edge[*initial] = Some(ei);
            adj[*initial].push(ei);
            if let EdgeEnd::Vertex(w) = terminal {
                adj[*w].push(ei);
            }
        }
    }
    let mut component_of: Vec<Option<usize>> = vec![None; nv];
    let mut components = Vec::new();
    for start in 0..nv {
        if adj[start].is_empty() || component_of[start].is_some() {
            continue;
        }
        let cid = components.len();
        let mut verts = vec![start];
        let mut edges: Vec<usize> = Vec::new();
        component_of[start] = Some(cid);
        let mut k = 0;
        while k < verts.len() {
            let v = verts[k];
            k += 1;
            for &ei in &adj[v] {
                if !edges.contains(&ei) {
                    edges.push(ei);
                }
                for end in diagram.edges[ei].ends {
                    if let EdgeEnd::Vertex(w) = end {
                        if component_of[w].is_none() {
                            component_of[w] = Some(cid);
                            verts.push(w);
                        }
                    }
                }
            }
        }
        let noncompact: Vec<usize> = edges.iter().copied().filter(|&e| !diagram.edges[e].is_compact()).collect();
        let compact = edges.len() - noncompact.len();
        if compact + 1 != verts.len() {
            return Err(Error::structural("non-centered subgraph contains a cycle", verts));
        }
        if noncompact.len() > 1 {
            return Err(Error::structural(
                format!("component has {} noncompact non-centered edges", noncompact.len()),
                verts,
            ));
        }
        let root = match noncompact.first() {
            Some(&e) => match classes[e] {
                EdgeClass::NonCentered { initial, .. } => initial,
                EdgeClass::Centered => unreachable!(),
            },
            None => {
                let sinks: Vec<usize> = verts.iter().copied().filter(|&v| out_edge[v].is_none()).collect();
                if sinks.len() != 1 {
                    return Err(Error::structural("component without a unique root", verts));
                }
                sinks[0]
            }
        };
        for &ei in &edges {
            if let EdgeClass::NonCentered { initial, terminal: EdgeEnd::Vertex(w) } = classes[ei] {
                let (jv, jw) = (diagram.vertices[initial].radius, diagram.vertices[w].radius);
                if jw < jv - diagram.tol.class {
                    return Err(Error::structural(
                        format!("circumradius does not increase along edge {ei}: {jv} -> {jw}"),
                        vec![initial, w],
                    ));
                }
            }
        }
        components.push(Component { vertices: verts, edges, root, noncompact_edge: noncompact.first().copied() });
    }
    Ok(Forest { classes, components, component_of, out_edge })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    GeometricDual,
    TreeCell,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryEdge {
    Dual { edge: usize, length: f64 },
    IdealRay { site: usize, ideal: IdealPoint },
}

/// A 2-cell of the centered dual complex.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub kind: CellKind,
    pub vertices: Vec<usize>,
    pub tree_edges: Vec<usize>,
    /// Noncompact non-centered edge contributing a horocyclic ideal triangle.
    pub ideal_edge: Option<usize>,
    /// Frontier pairs `(edge, vertex)`; an edge with both ends in the tree
    /// appears twice.
    pub frontier: Vec<(usize, usize)>,
    pub boundary: Vec<BoundaryEdge>,
}

impl Cell {
    pub fn is_compact(&self) -> bool {
        self.ideal_edge.is_none()
    }

    /// Number of boundary edges, counted with multiplicity.
    pub fn k(&self) -> usize {
        self.boundary.len()
    }
}

fn ideal_end(diagram: &VoronoiDiagram, ei: usize) -> IdealPoint {
    diagram.edges[ei]
        .ends
        .iter()
        .find_map(|e| match e {
            EdgeEnd::Ideal(x) => Some(*x),
            EdgeEnd::Vertex(_) => None,
        })
        .expect("noncompact edge")
}

/// Cells in a deterministic order: geometric duals by vertex index, then
/// tree cells by component.
pub fn build_cells(diagram: &VoronoiDiagram, forest: &Forest) -> Vec<Cell> {
    let mut cells = Vec::new();
    for (v, vert) in diagram.vertices.iter().enumerate() {
        if forest.component_of[v].is_some() {
            continue;
        }
        let frontier: Vec<(usize, usize)> = vert.edges.iter().map(|&e| (e, v)).collect();
        let boundary = vert
            .edges
            .iter()
            .map(|&e| BoundaryEdge::Dual { edge: e, length: diagram.edges[e].dual_length })
            .collect();
        cells.push(Cell {
            kind: CellKind::GeometricDual,
            vertices: vec![v],
            tree_edges: Vec::new(),
            ideal_edge: None,
            frontier,
            boundary,
        });
    }
    for comp in &forest.components {
        let mut vertices = comp.vertices.clone();
        vertices.sort();
        let mut frontier = Vec::new();
        for &v in &vertices {
            for &e in &diagram.vertices[v].edges {
                if !comp.edges.contains(&e) {
                    frontier.push((e, v));
                }
            }
        }
        let mut boundary: Vec<BoundaryEdge> = frontier
            .iter()
            .map(|&(e, _)| BoundaryEdge::Dual { edge: e, length: diagram.edges[e].dual_length })
            .collect();
        if let Some(e0) = comp.noncompact_edge {
            let xi = ideal_end(diagram, e0);
            for s in diagram.edges[e0].sites {
                boundary.push(BoundaryEdge::IdealRay { site: s, ideal: xi });
            }
        }
        let mut tree_edges = comp.edges.clone();
        tree_edges.sort();
        cells.push(Cell {
            kind: CellKind::TreeCell,
            vertices,
            tree_edges,
            ideal_edge: comp.noncompact_edge,
            frontier,
            boundary,
        });
    }
    cells
}

/// Dual lengths around a Voronoi vertex in cyclic order.
pub fn vertex_polygon(diagram: &VoronoiDiagram, v: usize) -> Vec<f64> {
    diagram.vertices[v].edges.iter().map(|&e| diagram.edges[e].dual_length).collect()
}

/// Area of a horocyclic ideal triangle with finite side `d`.
pub fn ideal_triangle_area(d: f64) -> f64 {
    PI - 2.0 * (1.0 / (d / 2.0).cosh()).asin()
}

/// Cell area from side lengths: sum of the defects of the constituent
/// cyclic polygons, plus the ideal triangle.
pub fn cell_area(diagram: &VoronoiDiagram, cell: &Cell) -> Result<f64> {
    let mut total = 0.0;
    for &v in &cell.vertices {
        total += cyclic::area_with(&vertex_polygon(diagram, v), &diagram.tol)?;
    }
    if let Some(e0) = cell.ideal_edge {
        total += ideal_triangle_area(diagram.edges[e0].dual_length);
    }
    Ok(total)
}

fn site_polygon(diagram: &VoronoiDiagram, v: usize) -> Vec<PolygonVertex> {
    diagram.vertices[v].sites.iter().map(|&s| PolygonVertex::Finite(diagram.sites[s])).collect()
}

/// Cell area from coordinates, by Gauss-Bonnet on each constituent polygon.
pub fn cell_area_geometric(diagram: &VoronoiDiagram, cell: &Cell) -> Result<f64> {
    let mut total = 0.0;
    for &v in &cell.vertices {
        total += polygon_area(&site_polygon(diagram, v))?;
    }
    if let Some(e0) = cell.ideal_edge {
        let [s, t] = diagram.edges[e0].sites;
        let xi = ideal_end(diagram, e0);
        total += polygon_area(&[diagram.sites[s].into(), diagram.sites[t].into(), xi.into()])?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QPieceKind {
    /// `Q(e)` for a tree edge.
    Tree { edge: usize },
    /// `Delta(e, v)` for a frontier pair.
    Frontier { edge: usize, vertex: usize },
}

/// A piece of the decomposition, as a union of convex triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct QPiece {
    pub kind: QPieceKind,
    pub triangles: Vec<[PolygonVertex; 3]>,
    pub area: f64,
}

fn end_vertex(diagram: &VoronoiDiagram, end: &EdgeEnd) -> PolygonVertex {
    match end {
        EdgeEnd::Vertex(w) => PolygonVertex::Finite(diagram.vertices[*w].position),
        EdgeEnd::Ideal(x) => PolygonVertex::Ideal(*x),
    }
}

fn tri_area(t: &[PolygonVertex; 3]) -> Result<f64> {
    polygon_area(t)
}

/// Decomposition of a cell into the pieces `Q(e)`, `e` a tree edge, and the
/// triangles `Delta(e, v)` over frontier pairs.
pub fn q_decomposition(diagram: &VoronoiDiagram, forest: &Forest, cell: &Cell) -> Result<Vec<QPiece>> {
    let mut pieces = Vec::new();
    for &e in &cell.tree_edges {
        let EdgeClass::NonCentered { initial, terminal } = forest.classes[e] else {
            return Err(Error::structural(format!("tree edge {e} is centered"), vec![]));
        };
        let [s, t] = diagram.edges[e].sites;
        let v = PolygonVertex::Finite(diagram.vertices[initial].position);
        let w = end_vertex(diagram, &terminal);
        let ps = PolygonVertex::Finite(diagram.sites[s]);
        let pt = PolygonVertex::Finite(diagram.sites[t]);
        let triangles = vec![[ps, v, w], [pt, v, w]];
        let mut area = 0.0;
        for tri in &triangles {
            area += tri_area(tri)?;
        }
        pieces.push(QPiece { kind: QPieceKind::Tree { edge: e }, triangles, area });
    }
    for &(e, v) in &cell.frontier {
        let [s, t] = diagram.edges[e].sites;
        let tri = [
            PolygonVertex::Finite(diagram.sites[s]),
            PolygonVertex::Finite(diagram.sites[t]),
            PolygonVertex::Finite(diagram.vertices[v].position),
        ];
        let area = tri_area(&tri)?;
        pieces.push(QPiece { kind: QPieceKind::Frontier { edge: e, vertex: v }, triangles: vec![tri], area });
    }
    Ok(pieces)
}

/// Largest pairwise overlap area between distinct pieces; triangles within
/// one piece are disjoint by construction.
pub fn max_overlap(pieces: &[QPiece]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            for a in &pieces[i].triangles {
                for b in &pieces[j].triangles {
                    worst = worst.max(intersection_area(a, b));
                }
            }
        }
    }
    worst
}

/// Isosceles triangle `Delta(e, v)` area from coordinates.
pub fn delta_area(diagram: &VoronoiDiagram, e: usize, apex: &HPoint) -> Result<f64> {
    let [s, t] = diagram.edges[e].sites;
    polygon_area(&[diagram.sites[s].into(), diagram.sites[t].into(), (*apex).into()])
}

/// Shortest dual edge on the boundary of any cell; infinite when there are
/// no cells.
pub fn min_boundary_length(cells: &[Cell]) -> f64 {
    cells
        .iter()
        .flat_map(|c| c.boundary.iter())
        .filter_map(|b| match b {
            BoundaryEdge::Dual { length, .. } => Some(*length),
            BoundaryEdge::IdealRay { .. } => None,
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub k: usize,
    pub area: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundOutcome {
    Checked(BoundCheck),
    Skipped(String),
}

/// Area lower bound for a cell all of whose compact boundary edges have
/// length at least `d`: `D0(d,d,d)` for triangles, `(k-2) a_m(d)` for
/// larger compact cells and `D0(inf, b0(d,d), inf) + (k-3) a_m(d)` for
/// noncompact ones.
pub fn area_bound(k: usize, compact: bool, d: f64) -> Result<f64> {
    let am = cyclic::a_m(d)?;
    if compact {
        if k < 3 {
            return Err(Error::domain(format!("a compact cell has at least 3 sides, got {k}")));
        }
        if k == 3 {
            cyclic::area(&[d, d, d])
        } else {
            Ok((k as f64 - 2.0) * am)
        }
    } else {
        if k < 4 {
            return Err(Error::domain(format!("a noncompact cell has at least 4 sides, got {k}")));
        }
        let b = cyclic::b0(&[d, d])?;
        Ok(ideal_triangle_area(b) + (k as f64 - 3.0) * am)
    }
}

pub fn check_area_bound(diagram: &VoronoiDiagram, cell: &Cell, d: f64) -> Result<BoundOutcome> {
    let tol = diagram.tol.geom;
    for b in &cell.boundary {
        if let BoundaryEdge::Dual { edge, length } = b {
            if *length < d - tol {
                return Ok(BoundOutcome::Skipped(format!("boundary edge {edge} has length {length} < {d}")));
            }
        }
    }
    let area = cell_area(diagram, cell)?;
    let bound = area_bound(cell.k(), cell.is_compact(), d)?;
    Ok(BoundOutcome::Checked(BoundCheck { k: cell.k(), area, bound, holds: area >= bound - tol }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::distance;
    use crate::voronoi::build;
    use approx::assert_abs_diff_eq;

    #[test]
    fn centered_triangle_is_single_geometric_cell() {
        let r = cyclic::realize(&[1.0, 1.2, 1.1]).unwrap();
        let d = build(&r.vertices).unwrap();
        let f = non_centered_forest(&d).unwrap();
        assert!(f.components.is_empty());
        let cells = build_cells(&d, &f);
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].kind, CellKind::GeometricDual);
        assert_abs_diff_eq!(cell_area(&d, &cells[0]).unwrap(), cyclic::area(&[1.0, 1.2, 1.1]).unwrap(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            cell_area(&d, &cells[0]).unwrap(),
            cell_area_geometric(&d, &cells[0]).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn obtuse_triangle_gives_noncompact_tree_cell() {
        let b = cyclic::b0(&[1.0, 1.0]).unwrap();
        let h = cyclic::h0(&[1.0, 1.0]).unwrap();
        let x = 0.5 * (b + h);
        let r = cyclic::realize(&[1.0, 1.0, x]).unwrap();
        let d = build(&r.vertices).unwrap();
        let f = non_centered_forest(&d).unwrap();
        assert_eq!(f.components.len(), 1);
        let cells = build_cells(&d, &f);
        let c = &cells[0];
        assert_eq!(c.kind, CellKind::TreeCell);
        assert!(!c.is_compact());
        assert_eq!(c.k(), 4);
        let expect = cyclic::area(&[1.0, 1.0, x]).unwrap() + ideal_triangle_area(x);
        assert_abs_diff_eq!(cell_area(&d, c).unwrap(), expect, epsilon = 1e-12);
        assert_abs_diff_eq!(cell_area_geometric(&d, c).unwrap(), expect, epsilon = 1e-9);
        let pieces = q_decomposition(&d, &f, c).unwrap();
        let total: f64 = pieces.iter().map(|p| p.area).sum();
        assert_abs_diff_eq!(total, expect, epsilon = 1e-9);
        assert!(max_overlap(&pieces) < 1e-9);
        // the noncompact Q piece is the horocyclic triangle minus Delta(e0, v)
        let e0 = c.ideal_edge.unwrap();
        let apex = d.vertices[c.vertices[0]].position;
        let q0 = pieces.iter().find(|p| p.kind == QPieceKind::Tree { edge: e0 }).unwrap();
        assert_abs_diff_eq!(q0.area, ideal_triangle_area(x) - delta_area(&d, e0, &apex).unwrap(), epsilon = 1e-9);
        assert!(distance(&apex, &r.center) < 1e-9);
    }

    #[test]
    fn bound_formulas() {
        let d = 0.9;
        assert_abs_diff_eq!(area_bound(3, true, d).unwrap(), cyclic::area(&[d, d, d]).unwrap(), epsilon = 1e-15);
        assert_abs_diff_eq!(area_bound(5, true, d).unwrap(), 3.0 * cyclic::a_m(d).unwrap(), epsilon = 1e-15);
        let b = cyclic::b0(&[d, d]).unwrap();
        let expect = cyclic::area(&[f64::INFINITY, b, f64::INFINITY]).unwrap() + cyclic::a_m(d).unwrap();
        assert_abs_diff_eq!(area_bound(4, false, d).unwrap(), expect, epsilon = 1e-14);
    }
}
