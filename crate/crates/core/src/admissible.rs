//! Admissible spaces of rooted trees: recursive bounds `b_e`/`h_e`,
//! membership, the tree defect `D_T`, its numerical minimisation with
//! certificates, edge collapse, and the area lower bounds.
//!
//! A tree edge is owned by its initial vertex: every non-root vertex owns the
//! edge towards its parent, and in the noncompact variant the root owns the
//! noncompact edge `e0`. Each vertex lists its incident edges in cyclic order
//! as [`Slot`]s.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::centered::{ideal_triangle_area, Cell, Forest};
use crate::cyclic::{self, argmax, ParamClass};
use crate::voronoi::{EdgeClass, EdgeEnd, VoronoiDiagram};
use crate::{Error, Result, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    /// The edge owned by this vertex (towards the parent, or `e0` at a
    /// noncompact root).
    Parent,
    Child(usize),
    Frontier(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Compact,
    Noncompact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootedTree {
    root: usize,
    parent: Vec<Option<usize>>,
    slots: Vec<Vec<Slot>>,
    frontier_count: usize,
    edge_owner: Vec<usize>,
    vertex_edge: Vec<Option<usize>>,
}

impl RootedTree {
    /// Validates parent links, slot lists, valences and frontier labels.
    /// Frontier labels must be exactly `0..|F|`, each used once.
    pub fn new(root: usize, parent: Vec<Option<usize>>, slots: Vec<Vec<Slot>>) -> Result<Self> {
        let n = parent.len();
        if n == 0 || slots.len() != n {
            return Err(Error::domain(format!("{} parent entries but {} slot lists", n, slots.len())));
        }
        if root >= n {
            return Err(Error::domain(format!("root {root} out of range")));
        }
        for (v, p) in parent.iter().enumerate() {
            match p {
                None if v != root => return Err(Error::domain(format!("vertex {v} has no parent"))),
                Some(_) if v == root => return Err(Error::domain("the root has a parent")),
                Some(p) if *p >= n => return Err(Error::domain(format!("parent of {v} out of range"))),
                _ => {}
            }
        }
        for start in 0..n {
            let mut v = start;
            for _ in 0..=n {
                match parent[v] {
                    Some(p) => v = p,
                    None => break,
                }
            }
            if v != root {
                return Err(Error::domain(format!("vertex {start} does not reach the root")));
            }
        }
        let mut seen_frontier = Vec::new();
        for (v, list) in slots.iter().enumerate() {
            if list.len() < 3 {
                return Err(Error::domain(format!("vertex {v} has valence {} < 3", list.len())));
            }
            let parents = list.iter().filter(|s| **s == Slot::Parent).count();
            if v != root && parents != 1 {
                return Err(Error::domain(format!("vertex {v} needs exactly one parent slot")));
            }
            if v == root && parents > 1 {
                return Err(Error::domain("the root has more than one noncompact edge"));
            }
            let mut kids: Vec<usize> = list
                .iter()
                .filter_map(|s| match s {
                    Slot::Child(c) => Some(*c),
                    _ => None,
                })
                .collect();
            kids.sort();
            let mut expected: Vec<usize> = (0..n).filter(|&c| parent[c] == Some(v)).collect();
            expected.sort();
            if kids != expected {
                return Err(Error::domain(format!("child slots of {v} are {kids:?}, expected {expected:?}")));
            }
            for s in list {
                if let Slot::Frontier(i) = s {
                    seen_frontier.push(*i);
                }
            }
        }
        seen_frontier.sort();
        if seen_frontier.iter().enumerate().any(|(k, &i)| k != i) {
            return Err(Error::domain(format!("frontier labels {seen_frontier:?} are not 0..{}", seen_frontier.len())));
        }
        let mut edge_owner = Vec::new();
        let mut vertex_edge = vec![None; n];
        for v in 0..n {
            if slots[v].contains(&Slot::Parent) {
                vertex_edge[v] = Some(edge_owner.len());
                edge_owner.push(v);
            }
        }
        Ok(RootedTree { root, parent, slots, frontier_count: seen_frontier.len(), edge_owner, vertex_edge })
    }

    /// The one-vertex compact tree of valence `n`.
    pub fn single_vertex(n: usize) -> Result<Self> {
        RootedTree::new(0, vec![None], vec![(0..n).map(Slot::Frontier).collect()])
    }

    /// One noncompact edge at a vertex of valence `n`.
    pub fn noncompact_base(n: usize) -> Result<Self> {
        let mut s = vec![Slot::Parent];
        s.extend((0..n.saturating_sub(1)).map(Slot::Frontier));
        RootedTree::new(0, vec![None], vec![s])
    }

    /// One compact edge joining a child of valence `nc` to a root of
    /// valence `nr`.
    pub fn one_edge(nr: usize, nc: usize) -> Result<Self> {
        let mut root = vec![Slot::Child(1)];
        root.extend((0..nr.saturating_sub(1)).map(Slot::Frontier));
        let mut child = vec![Slot::Parent];
        child.extend((nr - 1..nr + nc - 2).map(Slot::Frontier));
        RootedTree::new(0, vec![None, Some(0)], vec![root, child])
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn slots(&self, v: usize) -> &[Slot] {
        &self.slots[v]
    }

    pub fn valence(&self, v: usize) -> usize {
        self.slots[v].len()
    }

    pub fn children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.slots[v].iter().filter_map(|s| match s {
            Slot::Child(c) => Some(*c),
            _ => None,
        })
    }

    pub fn variant(&self) -> Variant {
        if self.vertex_edge[self.root].is_some() {
            Variant::Noncompact
        } else {
            Variant::Compact
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edge_owner.len()
    }

    pub fn frontier_count(&self) -> usize {
        self.frontier_count
    }

    /// Initial vertex of tree edge `e`.
    pub fn edge_owner(&self, e: usize) -> usize {
        self.edge_owner[e]
    }

    /// Edge owned by `v`, if any.
    pub fn edge_of(&self, v: usize) -> Option<usize> {
        self.vertex_edge[v]
    }

    /// Vertices with every child before its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.vertex_count());
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                out.push(v);
            } else {
                stack.push((v, true));
                for c in self.children(v) {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Index of the parent slot of `v`.
    fn parent_slot(&self, v: usize) -> Option<usize> {
        self.slots[v].iter().position(|s| *s == Slot::Parent)
    }
}

/// Tree-edge and frontier lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct Lengths {
    pub edges: Vec<f64>,
    pub frontier: Vec<f64>,
}

fn slot_value(tree: &RootedTree, edges: &[f64], frontier: &[f64], v: usize, s: Slot) -> f64 {
    match s {
        Slot::Parent => edges[tree.vertex_edge[v].expect("parent slot")],
        Slot::Child(c) => edges[tree.vertex_edge[c].expect("child edge")],
        Slot::Frontier(i) => frontier[i],
    }
}

/// `P_v(d)` in the cyclic order of the slots at `v`.
pub fn vertex_polygon(tree: &RootedTree, d: &Lengths, v: usize) -> Vec<f64> {
    tree.slots[v].iter().map(|&s| slot_value(tree, &d.edges, &d.frontier, v, s)).collect()
}

/// Inputs of `v` other than its own edge, in cyclic order after it.
fn tail_values(tree: &RootedTree, edges: &[f64], frontier: &[f64], v: usize) -> Vec<f64> {
    let k = tree.parent_slot(v).expect("vertex owns an edge");
    let list = &tree.slots[v];
    (1..list.len()).map(|i| slot_value(tree, edges, frontier, v, list[(k + i) % list.len()])).collect()
}

fn check_lengths(tree: &RootedTree, d: &Lengths) -> Result<()> {
    if d.edges.len() != tree.edge_count() || d.frontier.len() != tree.frontier_count() {
        return Err(Error::domain(format!(
            "expected {} edge and {} frontier lengths, got {} and {}",
            tree.edge_count(),
            tree.frontier_count(),
            d.edges.len(),
            d.frontier.len()
        )));
    }
    check_frontier(&d.frontier)?;
    for &x in &d.edges {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::domain(format!("edge length {x} must be positive and finite")));
        }
    }
    Ok(())
}

fn check_frontier(frontier: &[f64]) -> Result<()> {
    for &x in frontier {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::domain(format!("frontier length {x} must be positive and finite")));
        }
    }
    Ok(())
}

/// Per-edge bounds `b_e <= d_e <= h_e`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub b: Vec<f64>,
    pub h: Vec<f64>,
}

/// Evaluates `b_e` and `h_e` from the minimal vertices towards the root.
pub fn outside_in(tree: &RootedTree, frontier: &[f64], tol: &Tolerances) -> Result<Bounds> {
    if frontier.len() != tree.frontier_count() {
        return Err(Error::domain(format!("expected {} frontier lengths", tree.frontier_count())));
    }
    check_frontier(frontier)?;
    let m = tree.edge_count();
    let mut b = vec![f64::NAN; m];
    let mut h = vec![f64::NAN; m];
    for v in tree.post_order() {
        if let Some(e) = tree.vertex_edge[v] {
            b[e] = cyclic::b0_with(&tail_values(tree, &b, frontier, v), tol)?;
            h[e] = cyclic::h0(&tail_values(tree, &h, frontier, v))?;
        }
    }
    Ok(Bounds { b, h })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    InAd,
    InAdBarOnly,
    Outside,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusComparison {
    pub child: usize,
    pub parent: usize,
    pub child_radius: Option<f64>,
    pub parent_radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub tag: Membership,
    pub classes: Vec<ParamClass>,
    /// `None` outside the cyclic parameter space, infinite on the
    /// horocyclic boundary.
    pub radii: Vec<Option<f64>>,
    pub comparisons: Vec<RadiusComparison>,
    pub reasons: Vec<String>,
}

fn radii_tie(a: f64, b: f64, tol: &Tolerances) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol.radius_tie(a.max(b))
}

/// Class, radius and local admissibility of one vertex polygon.
#[derive(Debug, Clone, Copy, PartialEq)]
struct VertexState {
    class: ParamClass,
    radius: Option<f64>,
    area: Option<f64>,
    strict: bool,
    closure: bool,
}

fn vertex_state(tree: &RootedTree, d: &Lengths, v: usize, tol: &Tolerances) -> Result<VertexState> {
    let mut st = vertex_state_lazy(tree, d, v, tol)?;
    if st.radius.is_some() {
        st.area = Some(cyclic::area_with(&vertex_polygon(tree, d, v), tol)?);
    }
    Ok(st)
}

/// Like [`vertex_state`] without the area.
fn vertex_state_lazy(tree: &RootedTree, d: &Lengths, v: usize, tol: &Tolerances) -> Result<VertexState> {
    let p = vertex_polygon(tree, d, v);
    let class = cyclic::classify_with(&p, tol)?;
    let (radius, area) = match class {
        ParamClass::Outside => (None, None),
        _ => (Some(cyclic::circumradius_with(&p, tol)?), None),
    };
    let noncompact = tree.variant() == Variant::Noncompact;
    let (strict, closure) = match tree.parent_slot(v) {
        Some(k) => match class {
            ParamClass::NonCentered { max_index } if max_index == k => (true, true),
            ParamClass::BoundaryCentered if argmax(&p) == k => (true, true),
            ParamClass::Horocyclic { max_index } if max_index == k => (false, noncompact),
            _ => (false, false),
        },
        None => match class {
            ParamClass::Centered => (true, true),
            ParamClass::BoundaryCentered => (false, true),
            _ => (false, false),
        },
    };
    Ok(VertexState { class, radius, area, strict, closure })
}

/// Strict and weak radius order between a child and its parent.
fn radius_order(child: &VertexState, parent: &VertexState, tol: &Tolerances) -> (bool, bool) {
    match (parent.radius, child.radius) {
        (Some(jv), Some(jw)) if radii_tie(jv, jw, tol) => (false, true),
        (Some(jv), Some(jw)) => (jv > jw, jv > jw),
        _ => (false, false),
    }
}

pub fn membership(tree: &RootedTree, d: &Lengths, tol: &Tolerances) -> Result<MembershipReport> {
    check_lengths(tree, d)?;
    let n = tree.vertex_count();
    let states = (0..n).map(|v| vertex_state(tree, d, v, tol)).collect::<Result<Vec<_>>>()?;
    let mut strict = true;
    let mut closure = true;
    let mut reasons = Vec::new();
    for (v, st) in states.iter().enumerate() {
        strict &= st.strict;
        if !st.closure {
            closure = false;
            reasons.push(format!("vertex {v}: polygon {:?} is {:?}", vertex_polygon(tree, d, v), st.class));
        }
    }
    let mut comparisons = Vec::new();
    for w in 0..n {
        let Some(v) = tree.parent[w] else { continue };
        comparisons.push(RadiusComparison {
            child: w,
            parent: v,
            child_radius: states[w].radius,
            parent_radius: states[v].radius,
        });
        let (s_ok, c_ok) = radius_order(&states[w], &states[v], tol);
        strict &= s_ok;
        if !c_ok {
            closure = false;
            reasons.push(format!(
                "radius at {v} ({:?}) is below radius at child {w} ({:?})",
                states[v].radius, states[w].radius
            ));
        }
    }
    let tag = if strict {
        Membership::InAd
    } else if closure {
        Membership::InAdBarOnly
    } else {
        Membership::Outside
    };
    Ok(MembershipReport {
        tag,
        classes: states.iter().map(|s| s.class).collect(),
        radii: states.iter().map(|s| s.radius).collect(),
        comparisons,
        reasons,
    })
}

fn defect_unchecked(tree: &RootedTree, d: &Lengths, tol: &Tolerances) -> Result<f64> {
    let mut total = 0.0;
    for v in 0..tree.vertex_count() {
        total += cyclic::area_with(&vertex_polygon(tree, d, v), tol)?;
    }
    if let Some(e0) = tree.vertex_edge[tree.root] {
        total += ideal_triangle_area(d.edges[e0]);
    }
    Ok(total)
}

/// `D_T(d)`; requires `d` in the closed admissible set.
pub fn tree_defect(tree: &RootedTree, d: &Lengths, tol: &Tolerances) -> Result<f64> {
    let report = membership(tree, d, tol)?;
    if report.tag == Membership::Outside {
        return Err(Error::domain(format!("lengths are not admissible: {}", report.reasons.join("; "))));
    }
    defect_unchecked(tree, d, tol)
}

/// Condition satisfied at a minimiser.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// Every vertex owning an edge is boundary-centered.
    AllBoundaryCentered,
    /// The root is boundary-centered (compact) or horocyclic (noncompact).
    RootBoundary,
    /// A vertex and one of its children have equal circumradius.
    RadiusTie { child: usize, parent: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub lengths: Lengths,
    pub value: f64,
    pub certificates: Vec<Certificate>,
    /// Largest decrease of `D_T` over feasible coordinate steps of size
    /// [`STEP`].
    pub residual: f64,
    pub starts: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MinimizeOutcome {
    /// No admissible point was found.
    Empty,
    Found(Minimum),
}

/// Coordinate step for the post-hoc optimality check.
pub const STEP: f64 = 1e-6;
/// Decrease below which a step does not count as an improvement.
pub const IMPROVEMENT: f64 = 1e-9;
const RANDOM_STARTS: usize = 16;
const SAMPLE_ATTEMPTS: usize = 8;

fn feasible(tree: &RootedTree, d: &Lengths, tol: &Tolerances) -> bool {
    matches!(membership(tree, d, tol), Ok(r) if r.tag != Membership::Outside)
}

/// Draws a point of the closed admissible set by choosing each edge length
/// in post-order: above the boundary-centered value and above the length at
/// which the vertex catches up with the largest radius below it.
fn sample_point(
    tree: &RootedTree,
    frontier: &[f64],
    bounds: &Bounds,
    rng: &mut ChaCha8Rng,
    tol: &Tolerances,
) -> Result<Option<Lengths>> {
    let mut edges = bounds.b.clone();
    let mut radius = vec![0.0f64; tree.vertex_count()];
    for v in tree.post_order() {
        let below = tree.children(v).map(|c| radius[c]).fold(0.0, f64::max);
        let Some(e) = tree.vertex_edge[v] else {
            let p: Vec<f64> = tree.slots[v].iter().map(|&s| slot_value(tree, &edges, frontier, v, s)).collect();
            radius[v] = cyclic::circumradius_with(&p, tol).unwrap_or(f64::NAN);
            continue;
        };
        let tail = tail_values(tree, &edges, frontier, v);
        let lo = cyclic::b0_with(&tail, tol)?;
        let hi = cyclic::h0(&tail)?;
        let j_at = |x: f64| {
            let mut p = vec![x];
            p.extend_from_slice(&tail);
            cyclic::circumradius_with(&p, tol).unwrap_or(f64::INFINITY)
        };
        let start = if lo / 2.0 >= below {
            lo
        } else if below.is_infinite() {
            return Ok(None);
        } else {
            let top = hi - (hi - lo) * 1e-9;
            if j_at(top) < below {
                return Ok(None);
            }
            let (mut a, mut b) = (lo, top);
            for _ in 0..48 {
                let mid = 0.5 * (a + b);
                if j_at(mid) < below {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            b
        };
        let u: f64 = rng.gen_range(0.0..0.98);
        let x = start + u * (hi - start);
        edges[e] = x;
        radius[v] = j_at(x);
    }
    let d = Lengths { edges, frontier: frontier.to_vec() };
    Ok(feasible(tree, &d, tol).then_some(d))
}

/// Cached vertex states for coordinate moves: changing the length of the
/// edge owned by `v` only affects `P_v` and the polygon of its parent.
struct Descent<'a> {
    tree: &'a RootedTree,
    tol: &'a Tolerances,
    d: Lengths,
    states: Vec<VertexState>,
}

impl<'a> Descent<'a> {
    fn new(tree: &'a RootedTree, d: Lengths, tol: &'a Tolerances) -> Result<Self> {
        let states = (0..tree.vertex_count()).map(|v| vertex_state(tree, &d, v, tol)).collect::<Result<Vec<_>>>()?;
        Ok(Descent { tree, tol, d, states })
    }

    fn affected(&self, e: usize) -> Vec<usize> {
        let v = self.tree.edge_owner[e];
        let mut out = vec![v];
        out.extend(self.tree.parent[v]);
        out
    }

    /// States of the affected vertices with `d_e = x`, if still admissible.
    fn try_value(&self, e: usize, x: f64) -> Result<Option<Vec<VertexState>>> {
        let mut trial = self.d.clone();
        trial.edges[e] = x;
        let verts = self.affected(e);
        let mut states = self.states.clone();
        for &v in &verts {
            states[v] = vertex_state_lazy(self.tree, &trial, v, self.tol)?;
            if !states[v].closure {
                return Ok(None);
            }
        }
        for &v in &verts {
            let mut pairs: Vec<(usize, usize)> = self.tree.children(v).map(|c| (c, v)).collect();
            pairs.extend(self.tree.parent[v].map(|p| (v, p)));
            for (c, p) in pairs {
                if !radius_order(&states[c], &states[p], self.tol).1 {
                    return Ok(None);
                }
            }
        }
        Ok(Some(verts.iter().map(|&v| states[v]).collect()))
    }

    /// Fills in the areas of `states` (for `d_e = x`) and returns the change
    /// in `D_T`.
    fn delta(&self, e: usize, x: f64, states: &mut [VertexState]) -> Result<f64> {
        let mut trial = self.d.clone();
        trial.edges[e] = x;
        let mut delta = 0.0;
        for (v, st) in self.affected(e).into_iter().zip(states.iter_mut()) {
            let a = cyclic::area_with(&vertex_polygon(self.tree, &trial, v), self.tol)?;
            st.area = Some(a);
            delta += a - self.states[v].area.unwrap_or(f64::NAN);
        }
        if self.tree.edge_owner[e] == self.tree.root {
            delta += ideal_triangle_area(x) - ideal_triangle_area(self.d.edges[e]);
        }
        Ok(delta)
    }

    /// Accepts `d_e = x` if it lowers `D_T`.
    fn commit_if_lower(&mut self, e: usize, x: f64, mut states: Vec<VertexState>) -> Result<bool> {
        if !(self.delta(e, x, &mut states)? < 0.0) {
            return Ok(false);
        }
        self.d.edges[e] = x;
        for (v, st) in self.affected(e).into_iter().zip(states) {
            self.states[v] = st;
        }
        Ok(true)
    }

    /// Moves coordinate `e` down to the feasibility boundary.
    fn descend(&mut self, e: usize, lo: f64) -> Result<bool> {
        let cur = self.d.edges[e];
        if cur - lo <= 1e-15 * cur.max(1.0) {
            return Ok(false);
        }
        if let Some(st) = self.try_value(e, lo)? {
            if self.commit_if_lower(e, lo, st)? {
                return Ok(true);
            }
        }
        let (mut bad, mut good) = (lo, cur);
        let mut best = None;
        for _ in 0..44 {
            let mid = 0.5 * (bad + good);
            if mid <= bad || mid >= good {
                break;
            }
            match self.try_value(e, mid)? {
                Some(r) => {
                    good = mid;
                    best = Some(r);
                }
                None => bad = mid,
            }
        }
        match best {
            Some(st) if cur - good > 1e-14 * cur.max(1.0) => self.commit_if_lower(e, good, st),
            _ => Ok(false),
        }
    }
}

fn coordinate_descent(tree: &RootedTree, d: Lengths, bounds: &Bounds, tol: &Tolerances) -> Result<Lengths> {
    let order: Vec<usize> = tree.post_order().into_iter().filter_map(|v| tree.vertex_edge[v]).collect();
    let mut state = Descent::new(tree, d, tol)?;
    for _ in 0..500 {
        let mut moved = false;
        for &e in &order {
            moved |= state.descend(e, bounds.b[e])?;
        }
        if !moved {
            break;
        }
    }
    Ok(state.d)
}

/// Conditions of the minimum-structure statement that hold at `d`.
pub fn certificates(tree: &RootedTree, d: &Lengths, tol: &Tolerances) -> Result<Vec<Certificate>> {
    let report = membership(tree, d, tol)?;
    let mut out = Vec::new();
    let owners: Vec<usize> = (0..tree.vertex_count()).filter(|&v| tree.vertex_edge[v].is_some()).collect();
    let bc = |v: usize| report.classes[v] == ParamClass::BoundaryCentered;
    if owners.iter().all(|&v| bc(v)) {
        out.push(Certificate::AllBoundaryCentered);
    }
    let root = tree.root;
    let root_boundary = match tree.variant() {
        Variant::Compact => bc(root),
        Variant::Noncompact => matches!(report.classes[root], ParamClass::Horocyclic { .. }),
    };
    if root_boundary {
        out.push(Certificate::RootBoundary);
    }
    for c in &report.comparisons {
        if let (Some(a), Some(b)) = (c.child_radius, c.parent_radius) {
            if radii_tie(a, b, tol) {
                out.push(Certificate::RadiusTie { child: c.child, parent: c.parent });
            }
        }
    }
    Ok(out)
}

/// Largest decrease of `D_T` over feasible steps of size [`STEP`] along
/// single coordinates.
pub fn step_residual(tree: &RootedTree, d: &Lengths, bounds: &Bounds, tol: &Tolerances) -> Result<f64> {
    let base = defect_unchecked(tree, d, tol)?;
    let mut worst: f64 = 0.0;
    for e in 0..tree.edge_count() {
        for step in [-STEP, STEP] {
            let x = d.edges[e] + step;
            if x < bounds.b[e] || x > bounds.h[e] {
                continue;
            }
            let mut trial = d.clone();
            trial.edges[e] = x;
            if feasible(tree, &trial, tol) {
                worst = worst.max(base - defect_unchecked(tree, &trial, tol)?);
            }
        }
    }
    Ok(worst)
}

pub fn minimize(tree: &RootedTree, frontier: &[f64], tol: &Tolerances) -> Result<MinimizeOutcome> {
    minimize_seeded(tree, frontier, tol, 0x5eed)
}

/// Multi-start coordinate descent over the closed admissible set, seeded at
/// the `b`-assignment, the `h`-assignment (noncompact) and up to 16 sampled
/// admissible points. Deterministic for a fixed `seed`.
pub fn minimize_seeded(tree: &RootedTree, frontier: &[f64], tol: &Tolerances, seed: u64) -> Result<MinimizeOutcome> {
    let bounds = outside_in(tree, frontier, tol)?;
    let mut seeds = Vec::new();
    let b_point = Lengths { edges: bounds.b.clone(), frontier: frontier.to_vec() };
    if feasible(tree, &b_point, tol) {
        seeds.push(b_point);
    }
    if tree.variant() == Variant::Noncompact {
        let h_point = Lengths { edges: bounds.h.clone(), frontier: frontier.to_vec() };
        if feasible(tree, &h_point, tol) {
            seeds.push(h_point);
        }
    }
    if tree.edge_count() > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut found = 0;
        for attempt in 0..RANDOM_STARTS * SAMPLE_ATTEMPTS {
            if found == RANDOM_STARTS || (found == 0 && attempt == 2 * RANDOM_STARTS) {
                break;
            }
            if let Some(p) = sample_point(tree, frontier, &bounds, &mut rng, tol)? {
                seeds.push(p);
                found += 1;
            }
        }
    }
    if seeds.is_empty() {
        return Ok(MinimizeOutcome::Empty);
    }
    let starts = seeds.len();
    let mut best: Option<(Lengths, f64)> = None;
    for s in seeds {
        let d = coordinate_descent(tree, s, &bounds, tol)?;
        let value = defect_unchecked(tree, &d, tol)?;
        if best.as_ref().is_none_or(|(_, v)| value < *v) {
            best = Some((d, value));
        }
    }
    let (lengths, value) = best.expect("at least one start");
    let certificates = certificates(tree, &lengths, tol)?;
    let residual = step_residual(tree, &lengths, &bounds, tol)?;
    Ok(MinimizeOutcome::Found(Minimum { lengths, value, certificates, residual, starts }))
}

/// Contracts the compact tree edge `f`; the child's slots replace its slot
/// at the parent. Frontier labels are kept, vertices above the child shift
/// down by one.
pub fn collapse_edge(tree: &RootedTree, f: usize) -> Result<RootedTree> {
    if f >= tree.edge_count() {
        return Err(Error::domain(format!("edge {f} is not a tree edge")));
    }
    let c = tree.edge_owner[f];
    let Some(p) = tree.parent[c] else {
        return Err(Error::domain("the noncompact edge cannot be collapsed"));
    };
    let renum = |v: usize| if v > c { v - 1 } else { v };
    let k = tree.parent_slot(c).expect("child owns its edge");
    let cl = &tree.slots[c];
    let inserted: Vec<Slot> = (1..cl.len()).map(|i| cl[(k + i) % cl.len()]).collect();
    let mut parent = Vec::new();
    let mut slots = Vec::new();
    for v in 0..tree.vertex_count() {
        if v == c {
            continue;
        }
        parent.push(tree.parent[v].map(|q| renum(if q == c { p } else { q })));
        let mut list = Vec::new();
        for &s in &tree.slots[v] {
            if v == p && s == Slot::Child(c) {
                list.extend(inserted.iter().copied());
            } else {
                list.push(s);
            }
        }
        slots.push(
            list.into_iter()
                .map(|s| match s {
                    Slot::Child(x) => Slot::Child(renum(x)),
                    other => other,
                })
                .collect(),
        );
    }
    RootedTree::new(renum(tree.root), parent, slots)
}

/// Lengths induced on `collapse_edge(tree, f)`.
pub fn collapse_lengths(tree: &RootedTree, f: usize, d: &Lengths) -> Result<Lengths> {
    check_lengths(tree, d)?;
    let c = tree.edge_owner[f];
    let edges = (0..tree.edge_count()).filter(|&e| tree.edge_owner[e] != c).map(|e| d.edges[e]).collect();
    Ok(Lengths { edges, frontier: d.frontier.clone() })
}

/// Area lower bound for trees whose frontier lengths are all at least `d`.
/// A compact tree with three frontier elements is a single triangle, for
/// which the bound is the area of the equilateral triangle of side `d`.
pub fn lower_bound(tree: &RootedTree, d: f64) -> Result<f64> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::domain(format!("d = {d} must be positive")));
    }
    let nf = tree.frontier_count() as f64;
    match tree.variant() {
        Variant::Compact if tree.frontier_count() == 3 => cyclic::area(&[d, d, d]),
        Variant::Compact => Ok((nf - 2.0) * cyclic::a_m(d)?),
        Variant::Noncompact => {
            let b = cyclic::b0(&[d, d])?;
            Ok(ideal_triangle_area(b) + (nf - 1.0) * cyclic::a_m(d)?)
        }
    }
}

/// Random tree with at most `max_vertices` vertices of valence in
/// `3..=max_valence`.
pub fn random_tree<R: Rng>(rng: &mut R, max_vertices: usize, max_valence: usize, variant: Variant) -> RootedTree {
    assert!(max_vertices >= 1 && max_valence >= 3);
    loop {
        let n = rng.gen_range(1..=max_vertices);
        let parent: Vec<Option<usize>> = (0..n).map(|v| if v == 0 { None } else { Some(rng.gen_range(0..v)) }).collect();
        let mut degree = vec![0usize; n];
        for v in 1..n {
            degree[v] += 1;
            degree[parent[v].unwrap()] += 1;
        }
        if variant == Variant::Noncompact {
            degree[0] += 1;
        }
        if degree.iter().any(|&k| k > max_valence) {
            continue;
        }
        let mut next_frontier = 0;
        let mut slots = Vec::with_capacity(n);
        for v in 0..n {
            let valence = rng.gen_range(degree[v].max(3)..=max_valence);
            let mut list: Vec<Slot> = (0..n).filter(|&c| parent[c] == Some(v)).map(Slot::Child).collect();
            if v != 0 || variant == Variant::Noncompact {
                list.push(Slot::Parent);
            }
            let nf = valence - list.len();
            list.extend(std::iter::repeat_n(Slot::Frontier(usize::MAX), nf));
            list.shuffle(rng);
            for s in list.iter_mut() {
                if *s == Slot::Frontier(usize::MAX) {
                    *s = Slot::Frontier(next_frontier);
                    next_frontier += 1;
                }
            }
            slots.push(list);
        }
        return RootedTree::new(0, parent, slots).expect("generated tree is valid");
    }
}

/// Tree, lengths and frontier pairs `(edge, vertex)` of a tree cell, with
/// vertices numbered in the order of `cell.vertices`.
pub fn tree_from_cell(diagram: &VoronoiDiagram, forest: &Forest, cell: &Cell) -> Result<(RootedTree, Lengths)> {
    let verts = &cell.vertices;
    let local = |v: usize| verts.iter().position(|&x| x == v);
    let comp = forest.component_of[verts[0]]
        .map(|c| &forest.components[c])
        .ok_or_else(|| Error::domain("cell is not a tree cell"))?;
    let root = local(comp.root).expect("root in cell");
    let mut parent = vec![None; verts.len()];
    let mut owned: Vec<Option<usize>> = vec![None; verts.len()];
    for (i, &v) in verts.iter().enumerate() {
        if let Some(e) = forest.out_edge[v] {
            owned[i] = Some(e);
            if let EdgeClass::NonCentered { terminal: EdgeEnd::Vertex(w), .. } = forest.classes[e] {
                parent[i] = local(w);
            }
        }
    }
    let mut frontier = Vec::new();
    let mut slots = Vec::new();
    for (i, &v) in verts.iter().enumerate() {
        let mut list = Vec::new();
        for &e in &diagram.vertices[v].edges {
            if owned[i] == Some(e) {
                list.push(Slot::Parent);
            } else if let Some(c) = (0..verts.len()).find(|&c| owned[c] == Some(e) && parent[c] == Some(i)) {
                list.push(Slot::Child(c));
            } else {
                list.push(Slot::Frontier(frontier.len()));
                frontier.push(diagram.edges[e].dual_length);
            }
        }
        slots.push(list);
    }
    let tree = RootedTree::new(root, parent, slots)?;
    let edges = (0..tree.edge_count()).map(|e| diagram.edges[owned[tree.edge_owner(e)].unwrap()].dual_length).collect();
    Ok((tree, Lengths { edges, frontier }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const TOL: Tolerances = Tolerances::DEFAULT;

    #[test]
    fn one_edge_b_value_closed_form() {
        let t = RootedTree::one_edge(3, 3).unwrap();
        let d = 1.3;
        let bounds = outside_in(&t, &[d; 4], &TOL).unwrap();
        let closed = 2.0 * (2f64.sqrt() * (d / 2.0).sinh()).asinh();
        assert_abs_diff_eq!(bounds.b[0], closed, epsilon = 1e-12);
        assert_abs_diff_eq!(bounds.h[0], 2.0 * (2.0 * (d / 2.0).sinh()).asinh(), epsilon = 1e-12);
    }

    #[test]
    fn one_edge_symmetric_frontier_is_a_single_closed_point() {
        let t = RootedTree::one_edge(3, 3).unwrap();
        let d = 0.8;
        let bounds = outside_in(&t, &[d; 4], &TOL).unwrap();
        let at_b = Lengths { edges: vec![bounds.b[0]], frontier: vec![d; 4] };
        let r = membership(&t, &at_b, &TOL).unwrap();
        assert_eq!(r.tag, Membership::InAdBarOnly);
        for x in [bounds.b[0] * 1.001, 0.5 * (bounds.b[0] + bounds.h[0])] {
            let p = Lengths { edges: vec![x], frontier: vec![d; 4] };
            assert_eq!(membership(&t, &p, &TOL).unwrap().tag, Membership::Outside);
        }
        let MinimizeOutcome::Found(m) = minimize(&t, &[d; 4], &TOL).unwrap() else { panic!("empty") };
        assert_abs_diff_eq!(m.lengths.edges[0], bounds.b[0], epsilon = 1e-9);
        assert!(m.certificates.contains(&Certificate::AllBoundaryCentered));
        assert!(m.value >= lower_bound(&t, d).unwrap() - 1e-9);
    }

    #[test]
    fn chain_b_values_recurse() {
        // root - a - b, every vertex of valence 3
        let t = RootedTree::new(
            0,
            vec![None, Some(0), Some(1)],
            vec![
                vec![Slot::Child(1), Slot::Frontier(0), Slot::Frontier(1)],
                vec![Slot::Parent, Slot::Child(2), Slot::Frontier(2)],
                vec![Slot::Parent, Slot::Frontier(3), Slot::Frontier(4)],
            ],
        )
        .unwrap();
        let d = 1.0;
        let f = [d; 5];
        let bounds = outside_in(&t, &f, &TOL).unwrap();
        let e_b = t.edge_of(2).unwrap();
        let e_a = t.edge_of(1).unwrap();
        let inner = cyclic::b0(&[d, d]).unwrap();
        assert_abs_diff_eq!(bounds.b[e_b], inner, epsilon = 1e-12);
        assert_abs_diff_eq!(bounds.b[e_a], cyclic::b0(&[inner, d]).unwrap(), epsilon = 1e-12);
        let p = Lengths { edges: bounds.b.clone(), frontier: f.to_vec() };
        let r = membership(&t, &p, &TOL).unwrap();
        assert_eq!(r.classes[1], ParamClass::BoundaryCentered);
        assert_eq!(r.classes[2], ParamClass::BoundaryCentered);
        let p = Lengths { edges: bounds.h.clone(), frontier: f.to_vec() };
        let r = membership(&t, &p, &TOL).unwrap();
        assert!(matches!(r.classes[1], ParamClass::Horocyclic { .. }));
        assert!(matches!(r.classes[2], ParamClass::Horocyclic { .. }));
        assert_eq!(r.tag, Membership::Outside);
    }

    #[test]
    fn single_vertex() {
        let t = RootedTree::single_vertex(4).unwrap();
        let f = [1.0, 1.1, 1.2, 1.3];
        let p = Lengths { edges: vec![], frontier: f.to_vec() };
        assert_eq!(membership(&t, &p, &TOL).unwrap().tag, Membership::InAd);
        let MinimizeOutcome::Found(m) = minimize(&t, &f, &TOL).unwrap() else { panic!() };
        assert_abs_diff_eq!(m.value, cyclic::area(&f).unwrap(), epsilon = 1e-15);
        let t3 = RootedTree::single_vertex(3).unwrap();
        assert_eq!(minimize(&t3, &[3.0, 0.5, 0.5], &TOL).unwrap(), MinimizeOutcome::Empty);
    }

    #[test]
    fn noncompact_base_case_endpoints() {
        let t = RootedTree::noncompact_base(4).unwrap();
        let f = [0.9, 1.4, 1.1];
        let bounds = outside_in(&t, &f, &TOL).unwrap();
        let (b, h) = (bounds.b[0], bounds.h[0]);
        let at = |x: f64| tree_defect(&t, &Lengths { edges: vec![x], frontier: f.to_vec() }, &TOL).unwrap();
        let left = [f64::INFINITY, b, f64::INFINITY];
        let mut p = vec![b];
        p.extend_from_slice(&f);
        assert_abs_diff_eq!(at(b), cyclic::area(&left).unwrap() + cyclic::area(&p).unwrap(), epsilon = 1e-10);
        let mut right = vec![f64::INFINITY];
        right.extend_from_slice(&f);
        right.push(f64::INFINITY);
        assert_abs_diff_eq!(at(h), cyclic::area(&right).unwrap(), epsilon = 1e-10);
        let MinimizeOutcome::Found(m) = minimize(&t, &f, &TOL).unwrap() else { panic!() };
        assert_abs_diff_eq!(m.lengths.edges[0], b, epsilon = 1e-9);
        assert!(m.residual <= IMPROVEMENT);
    }

    #[test]
    fn collapse_one_edge() {
        let t = RootedTree::one_edge(4, 5).unwrap();
        let c = collapse_edge(&t, 0).unwrap();
        assert_eq!(c.vertex_count(), 1);
        assert_eq!(c.valence(0), 4 + 5 - 2);
        assert_eq!(c.frontier_count(), t.frontier_count());
        assert_eq!(c.edge_count(), t.edge_count() - 1);
        assert!(collapse_edge(&RootedTree::noncompact_base(3).unwrap(), 0).is_err());
    }

    #[test]
    fn collapse_preserves_defect_at_a_radius_tie() {
        // realise a centered pentagon and cut it along a diagonal into a
        // centered root and a non-centered child sharing that diagonal
        let r = cyclic::realize(&[1.0, 1.1, 0.9, 1.2, 1.05]).unwrap();
        let v = &r.vertices;
        let chord = crate::kernel::distance(&v[0], &v[2]);
        let s = |i: usize| crate::kernel::distance(&v[i], &v[(i + 1) % 5]);
        let t = RootedTree::new(
            0,
            vec![None, Some(0)],
            vec![
                vec![Slot::Child(1), Slot::Frontier(2), Slot::Frontier(3), Slot::Frontier(4)],
                vec![Slot::Parent, Slot::Frontier(0), Slot::Frontier(1)],
            ],
        )
        .unwrap();
        let d = Lengths { edges: vec![chord], frontier: (0..5).map(s).collect() };
        let rep = membership(&t, &d, &TOL).unwrap();
        assert_eq!(rep.tag, Membership::InAdBarOnly, "{rep:?}");
        let before = tree_defect(&t, &d, &TOL).unwrap();
        let ct = collapse_edge(&t, 0).unwrap();
        let cd = collapse_lengths(&t, 0, &d).unwrap();
        let after = tree_defect(&ct, &cd, &TOL).unwrap();
        assert_abs_diff_eq!(before, after, epsilon = 2e-9);
        assert!(certificates(&t, &d, &TOL).unwrap().iter().any(|c| matches!(c, Certificate::RadiusTie { .. })));
    }

    #[test]
    fn lower_bound_values() {
        let d = 0.7;
        assert_abs_diff_eq!(
            lower_bound(&RootedTree::single_vertex(3).unwrap(), d).unwrap(),
            cyclic::area(&[d, d, d]).unwrap()
        );
        // the equilateral triangle sits strictly below a_m(d)
        assert!(cyclic::area(&[d, d, d]).unwrap() < cyclic::a_m(d).unwrap());
        assert_abs_diff_eq!(
            lower_bound(&RootedTree::single_vertex(6).unwrap(), d).unwrap(),
            4.0 * cyclic::a_m(d).unwrap()
        );
        let nb = lower_bound(&RootedTree::noncompact_base(3).unwrap(), d).unwrap();
        let b = cyclic::b0(&[d, d]).unwrap();
        assert_abs_diff_eq!(
            nb,
            cyclic::area(&[f64::INFINITY, b, f64::INFINITY]).unwrap() + cyclic::a_m(d).unwrap(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn random_trees_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..200 {
            let variant = if k % 2 == 0 { Variant::Compact } else { Variant::Noncompact };
            let t = random_tree(&mut rng, 5, 5, variant);
            assert_eq!(t.variant(), variant);
            let total: usize = (0..t.vertex_count()).map(|v| t.valence(v)).sum();
            let compact_edges = t.vertex_count() - 1;
            let extra = usize::from(variant == Variant::Noncompact);
            assert_eq!(total, 2 * compact_edges + t.frontier_count() + extra);
            assert!((0..t.vertex_count()).all(|v| (3..=5).contains(&t.valence(v))));
        }
    }
}
