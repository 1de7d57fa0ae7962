//! Voronoi tessellation of a finite site set and its Delaunay dual.
//!
//! The Euclidean Delaunay triangulation of the disk coordinates is computed
//! with exact predicates. A triangle is a hyperbolic Delaunay cell exactly
//! when its circumcircle is a metric circle of H^2; its circumcentre is then
//! a Voronoi vertex. Adjacent cells with coinciding circumcentres are merged
//! into one polygonal cell.

use std::collections::HashMap;

use num_complex::Complex64;
use spade::handles::FixedFaceHandle;
use spade::{DelaunayTriangulation, HasPosition, Point2, Triangulation};

use crate::kernel::minkowski::tangent_towards;
use crate::kernel::{
    circumobject, distance, midpoint, perpendicular_bisector, CircumObject, Geodesic, HPoint, Horocycle,
    IdealPoint, Model,
};
use crate::{Error, Result, Tolerances};

/// Largest supported number of sites.
pub const MAX_SITES: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiVertex {
    pub position: HPoint,
    pub radius: f64,
    /// Incident sites in counterclockwise order around the vertex.
    pub sites: Vec<usize>,
    /// `edges[k]` is dual to the segment `[sites[k], sites[k + 1]]`.
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeEnd {
    Vertex(usize),
    Ideal(IdealPoint),
}

impl EdgeEnd {
    pub fn vertex(&self) -> Option<usize> {
        match self {
            EdgeEnd::Vertex(v) => Some(*v),
            EdgeEnd::Ideal(_) => None,
        }
    }
}

/// A Voronoi edge on the bisector of `sites`. `ends` run along `bisector`,
/// `ends[0]` before `ends[1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiEdge {
    pub sites: [usize; 2],
    pub ends: [EdgeEnd; 2],
    pub bisector: Geodesic,
    pub dual_length: f64,
}

impl VoronoiEdge {
    pub fn is_compact(&self) -> bool {
        self.ends.iter().all(|e| e.vertex().is_some())
    }
}

#[derive(Debug, Clone)]
pub struct VoronoiDiagram {
    pub sites: Vec<HPoint>,
    pub vertices: Vec<VoronoiVertex>,
    pub edges: Vec<VoronoiEdge>,
    pub tol: Tolerances,
}

struct Site {
    p: Point2<f64>,
}

impl HasPosition for Site {
    type Scalar = f64;
    fn position(&self) -> Point2<f64> {
        self.p
    }
}

fn euclid_circumcenter(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> [f64; 2] {
    let bx = b[0] - a[0];
    let by = b[1] - a[1];
    let cx = c[0] - a[0];
    let cy = c[1] - a[1];
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    [a[0] + (cy * b2 - by * c2) / d, a[1] + (bx * c2 - cx * b2) / d]
}

/// Parameter range `(lo, hi)` of circles through `s`, `t` contained in the
/// unit disk; the circle with parameter `l` has centre `m + l n`, `n` the
/// left normal of `s -> t`.
fn inside_range(s: [f64; 2], m: [f64; 2], n: [f64; 2]) -> Option<(f64, f64)> {
    let a = n[0] * s[0] + n[1] * s[1];
    let b0 = (1.0 + s[0] * s[0] + s[1] * s[1] - 2.0 * (m[0] * s[0] + m[1] * s[1])) / 2.0;
    let h2 = (m[0] - s[0]).powi(2) + (m[1] - s[1]).powi(2);
    let qa = a * a - 1.0;
    let qb = -2.0 * a * b0;
    let qc = b0 * b0 - h2;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    // stable quadratic roots
    let q = -0.5 * (qb + qb.signum() * sq);
    let (r1, r2) = if q == 0.0 { (sq / (2.0 * qa), -sq / (2.0 * qa)) } else { (q / qa, qc / q) };
    Some((r1.min(r2), r1.max(r2)))
}

struct FaceInfo {
    /// hyperbolic circumcircle when the face is a Delaunay cell
    circle: Option<(HPoint, f64)>,
    euclid_center: [f64; 2],
    sites: [usize; 3],
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Angle of `p` seen from `c`, in the disk after moving `c` to the centre.
fn angle_about(c: &HPoint, p: &HPoint) -> f64 {
    let cw = c.disk_w();
    let pw = p.disk_w();
    let w = (pw - cw) / (Complex64::new(1.0, 0.0) - cw.conj() * pw);
    w.im.atan2(w.re)
}

pub fn build(sites: &[HPoint]) -> Result<VoronoiDiagram> {
    build_with(sites, &Tolerances::DEFAULT)
}

/// Builds the Voronoi tessellation of `sites`.
pub fn build_with(sites: &[HPoint], tol: &Tolerances) -> Result<VoronoiDiagram> {
    if sites.len() > MAX_SITES {
        return Err(Error::domain(format!("{} sites exceed the supported maximum {MAX_SITES}", sites.len())));
    }
    let disk: Vec<[f64; 2]> = sites.iter().map(|p| p.to_model(Model::Disk).coords()).collect();
    let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
    for (i, c) in disk.iter().enumerate() {
        if let Some(j) = seen.insert((c[0].to_bits(), c[1].to_bits()), i) {
            return Err(Error::domain(format!("sites {j} and {i} coincide")));
        }
    }
    let mut tri: DelaunayTriangulation<Site> = DelaunayTriangulation::new();
    let mut handle_to_site = HashMap::new();
    for (i, c) in disk.iter().enumerate() {
        let h = tri
            .insert(Site { p: Point2::new(c[0], c[1]) })
            .map_err(|e| Error::domain(format!("site {i} rejected by the triangulation: {e:?}")))?;
        handle_to_site.insert(h.index(), i);
    }
    if tri.num_vertices() != sites.len() {
        return Err(Error::domain("the triangulation merged coincident sites".to_string()));
    }
    let site_of = |h: spade::handles::FixedVertexHandle| handle_to_site[&h.index()];
    // a site's Euclidean nearest neighbour is a Delaunay neighbour, and the
    // disk metric is conformal, so near-coincident pairs share an edge
    for e in tri.undirected_edges() {
        let [a, b] = e.vertices().map(|v| site_of(v.fix()));
        if distance(&sites[a], &sites[b]) <= tol.geom {
            return Err(Error::domain(format!("sites {} and {} coincide", a.min(b), a.max(b))));
        }
    }

    // classify faces
    let mut face_index: HashMap<FixedFaceHandle<spade::handles::InnerTag>, usize> = HashMap::new();
    let mut faces: Vec<FaceInfo> = Vec::new();
    for f in tri.inner_faces() {
        let vs = f.vertices().map(|v| site_of(v.fix()));
        let circle = match circumobject(&sites[vs[0]], &sites[vs[1]], &sites[vs[2]], tol) {
            Ok(CircumObject::MetricCircle { center, radius }) => Some((center.to_model(Model::Disk), radius)),
            Ok(_) | Err(Error::Degenerate(_)) => None,
            Err(e) => return Err(e),
        };
        let euclid_center = euclid_circumcenter(disk[vs[0]], disk[vs[1]], disk[vs[2]]);
        face_index.insert(f.fix(), faces.len());
        faces.push(FaceInfo { circle, euclid_center, sites: vs });
    }

    // merge cocircular cells
    let mut uf = UnionFind((0..faces.len()).collect());
    for e in tri.undirected_edges() {
        let [d0, d1] = [e.as_directed(), e.as_directed().rev()];
        let (Some(f0), Some(f1)) = (d0.face().as_inner(), d1.face().as_inner()) else { continue };
        let (i0, i1) = (face_index[&f0.fix()], face_index[&f1.fix()]);
        if let (Some((c0, r0)), Some((c1, r1))) = (faces[i0].circle, faces[i1].circle) {
            let spread = distance(&c0, &c1);
            if spread < tol.class && (r0 - r1).abs() < tol.class * r0.max(1.0) {
                uf.union(i0, i1);
            }
        }
    }
    let mut group_vertex: HashMap<usize, usize> = HashMap::new();
    let mut vertices: Vec<VoronoiVertex> = Vec::new();
    for i in 0..faces.len() {
        if faces[i].circle.is_none() {
            continue;
        }
        let r = uf.find(i);
        let v = *group_vertex.entry(r).or_insert_with(|| {
            let (c, rad) = faces[r].circle.expect("valid root");
            vertices.push(VoronoiVertex { position: c, radius: rad, sites: Vec::new(), edges: Vec::new() });
            vertices.len() - 1
        });
        for s in faces[i].sites {
            if !vertices[v].sites.contains(&s) {
                vertices[v].sites.push(s);
            }
        }
    }
    for v in vertices.iter_mut() {
        let c = v.position;
        v.sites.sort_by(|&a, &b| angle_about(&c, &sites[a]).total_cmp(&angle_about(&c, &sites[b])));
    }
    let vertex_of_face = |fi: usize, uf: &mut UnionFind| -> Option<usize> {
        faces[fi].circle.map(|_| group_vertex[&uf.find(fi)])
    };

    // edges
    let mut edges: Vec<VoronoiEdge> = Vec::new();
    for e in tri.undirected_edges() {
        let de = e.as_directed();
        let s = site_of(de.from().fix());
        let t = site_of(de.to().fix());
        let left = de.face().as_inner().map(|f| face_index[&f.fix()]);
        let right = de.rev().face().as_inner().map(|f| face_index[&f.fix()]);
        let lv = left.and_then(|f| vertex_of_face(f, &mut uf));
        let rv = right.and_then(|f| vertex_of_face(f, &mut uf));
        if let (Some(a), Some(b)) = (lv, rv) {
            if a == b {
                // interior diagonal of a merged cell
                continue;
            }
        }
        let (ps, pt) = (disk[s], disk[t]);
        let m = [(ps[0] + pt[0]) / 2.0, (ps[1] + pt[1]) / 2.0];
        let len = (pt[0] - ps[0]).hypot(pt[1] - ps[1]);
        let n = [-(pt[1] - ps[1]) / len, (pt[0] - ps[0]) / len];
        let lambda = |f: usize| {
            let c = faces[f].euclid_center;
            (c[0] - m[0]) * n[0] + (c[1] - m[1]) * n[1]
        };
        let lam_left = left.map(lambda).unwrap_or(f64::INFINITY);
        let lam_right = right.map(lambda).unwrap_or(f64::NEG_INFINITY);
        let Some((lam_a, lam_b)) = inside_range(ps, m, n) else { continue };
        if lv.is_none() && rv.is_none() && !(lam_left >= lam_b && lam_right <= lam_a) {
            // no empty circle through s, t stays inside the disk
            continue;
        }
        let bis = perpendicular_bisector(&sites[s], &sites[t])?;
        let tangency = |lam: f64| {
            let c = [m[0] + lam * n[0], m[1] + lam * n[1]];
            IdealPoint::from_disk_angle(c[1].atan2(c[0]))
        };
        let pick_end = |lam: f64| {
            let x = tangency(lam);
            if x.chord(&bis.start()) < x.chord(&bis.end()) {
                bis.start()
            } else {
                bis.end()
            }
        };
        let left_end = match lv {
            Some(v) => EdgeEnd::Vertex(v),
            None => EdgeEnd::Ideal(pick_end(lam_b)),
        };
        let right_end = match rv {
            Some(v) => EdgeEnd::Vertex(v),
            None => EdgeEnd::Ideal(pick_end(lam_a)),
        };
        if let (EdgeEnd::Ideal(a), EdgeEnd::Ideal(b)) = (left_end, right_end) {
            if a.approx_eq(&b, 1e-12) {
                return Err(Error::structural(
                    format!("edge between sites {s} and {t} has both ends at one ideal point"),
                    vec![],
                ));
            }
        }
        let mid = midpoint(&sites[s], &sites[t]).hyperboloid();
        let dir = tangent_towards(mid, bis.end().null());
        let param = |end: &EdgeEnd| match end {
            EdgeEnd::Vertex(v) => vertices[*v].position.hyperboloid().dot(dir),
            EdgeEnd::Ideal(x) => {
                if x == &bis.end() {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
        };
        let mut ends = [right_end, left_end];
        if param(&ends[0]) > param(&ends[1]) {
            ends.swap(0, 1);
        }
        edges.push(VoronoiEdge {
            sites: [s, t],
            ends,
            bisector: bis,
            dual_length: distance(&sites[s], &sites[t]),
        });
    }

    // incidence in cyclic order
    let mut by_pair: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (k, e) in edges.iter().enumerate() {
        let key = (e.sites[0].min(e.sites[1]), e.sites[0].max(e.sites[1]));
        by_pair.entry(key).or_default().push(k);
    }
    for vi in 0..vertices.len() {
        let n = vertices[vi].sites.len();
        let mut inc = Vec::with_capacity(n);
        for k in 0..n {
            let a = vertices[vi].sites[k];
            let b = vertices[vi].sites[(k + 1) % n];
            let key = (a.min(b), a.max(b));
            let found = by_pair
                .get(&key)
                .and_then(|list| list.iter().copied().find(|&ei| edges[ei].ends.iter().any(|e| e.vertex() == Some(vi))));
            match found {
                Some(ei) => inc.push(ei),
                None => {
                    return Err(Error::structural(
                        format!("vertex {vi} lacks the edge dual to sites {a}, {b}"),
                        vec![vi],
                    ))
                }
            }
        }
        vertices[vi].edges = inc;
    }

    Ok(VoronoiDiagram { sites: sites.to_vec(), vertices, edges, tol: *tol })
}

/// A failed empty-disk certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskViolation {
    pub vertex: usize,
    pub site: usize,
    pub distance: f64,
    pub radius: f64,
    pub incident: bool,
}

/// Checks that every Voronoi vertex is the centre of an empty disk whose
/// boundary carries exactly its incident sites.
pub fn validate_empty_disk(diagram: &VoronoiDiagram) -> Vec<DiskViolation> {
    let tol = diagram.tol.geom;
    let mut out = Vec::new();
    for (vi, v) in diagram.vertices.iter().enumerate() {
        let tol_v = tol * v.radius.max(1.0);
        for (si, s) in diagram.sites.iter().enumerate() {
            let d = distance(&v.position, s);
            let incident = v.sites.contains(&si);
            let ok = if incident { (d - v.radius).abs() <= tol_v } else { d > v.radius + tol_v };
            if !ok {
                out.push(DiskViolation { vertex: vi, site: si, distance: d, radius: v.radius, incident });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeClass {
    Centered,
    /// Oriented away from the dual segment: `initial` is the end nearer to
    /// it.
    NonCentered { initial: usize, terminal: EdgeEnd },
}

impl EdgeClass {
    pub fn is_centered(&self) -> bool {
        matches!(self, EdgeClass::Centered)
    }
}

/// Signed arclength along the edge's bisector from the midpoint of its dual
/// segment, for each end.
pub fn edge_parameters(diagram: &VoronoiDiagram, ei: usize) -> [f64; 2] {
    let e = &diagram.edges[ei];
    let [s, t] = e.sites;
    let mid = midpoint(&diagram.sites[s], &diagram.sites[t]).hyperboloid();
    let dir = tangent_towards(mid, e.bisector.end().null());
    let f = |end: &EdgeEnd| match end {
        EdgeEnd::Vertex(v) => diagram.vertices[*v].position.hyperboloid().dot(dir).asinh(),
        EdgeEnd::Ideal(x) => {
            if x == &e.bisector.end() {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        }
    };
    [f(&e.ends[0]), f(&e.ends[1])]
}

/// An edge is centered when it meets its dual segment in its relative
/// interior.
pub fn classify_edges(diagram: &VoronoiDiagram) -> Vec<EdgeClass> {
    let tol = diagram.tol.geom;
    (0..diagram.edges.len())
        .map(|ei| {
            let [u0, u1] = edge_parameters(diagram, ei);
            let e = &diagram.edges[ei];
            if u0 < -tol && u1 > tol {
                return EdgeClass::Centered;
            }
            let (near, far) = if u0.abs() <= u1.abs() { (0, 1) } else { (1, 0) };
            match e.ends[near] {
                EdgeEnd::Vertex(v) => EdgeClass::NonCentered { initial: v, terminal: e.ends[far] },
                // both ends ideal always straddle the midpoint
                EdgeEnd::Ideal(_) => EdgeClass::Centered,
            }
        })
        .collect()
}

/// Horocycle through the dual sites of an edge, centred at its ideal end,
/// after checking that the horoball contains no site.
pub fn ideal_horocycle(diagram: &VoronoiDiagram, ei: usize) -> Result<Horocycle> {
    let e = &diagram.edges[ei];
    let xi = e
        .ends
        .iter()
        .find_map(|end| match end {
            EdgeEnd::Ideal(x) => Some(*x),
            EdgeEnd::Vertex(_) => None,
        })
        .ok_or_else(|| Error::domain(format!("edge {ei} is compact")))?;
    let [s, t] = e.sites;
    let h = Horocycle::new(xi, diagram.sites[s]);
    let tol = diagram.tol.geom;
    let off_t = h.signed_offset(&diagram.sites[t]);
    if off_t.abs() > tol.sqrt() {
        return Err(Error::structural(format!("site {t} is off the horocycle of edge {ei} by {off_t}"), vec![]));
    }
    for (si, p) in diagram.sites.iter().enumerate() {
        if si != s && si != t && h.signed_offset(p) < -tol {
            return Err(Error::structural(format!("site {si} lies inside the horoball of edge {ei}"), vec![si]));
        }
    }
    Ok(h)
}
