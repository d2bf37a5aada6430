//! V-digraphs: finite multigraphs whose vertices carry real values and whose
//! edges are oriented from smaller to larger value. Includes isomorphism (up
//! to value order), weak isomorphism (up to subdivision), and the hypothesis
//! validator for embedded input graphs.

use crate::algnum::RealAlg;
use crate::rat::{sign_of, Rat};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

/// Vertex-valued directed multigraph; edge direction always runs from the
/// smaller vertex value to the larger one.
#[derive(Clone, Debug, Default)]
pub struct VDigraph {
    pub vertices: Vec<VdVertex>,
    pub edges: Vec<VdEdge>,
}

#[derive(Clone, Debug)]
pub struct VdVertex {
    pub id: String,
    pub value: RealAlg,
}

#[derive(Clone, Debug)]
pub struct VdEdge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum VdError {
    #[error("edge {edge}: vertex values are not strictly increasing along the edge")]
    EdgeNotIncreasing { edge: String },
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(String),
    #[error("edge {edge} references unknown vertex {vertex}")]
    UnknownVertex { edge: String, vertex: String },
}

impl VDigraph {
    pub fn new(vertices: Vec<VdVertex>, edges: Vec<VdEdge>) -> Result<Self, VdError> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.id.clone()) {
                return Err(VdError::DuplicateVertex(v.id.clone()));
            }
        }
        let g = VDigraph { vertices, edges };
        for e in &g.edges {
            if e.src >= g.vertices.len() || e.dst >= g.vertices.len() {
                return Err(VdError::UnknownVertex { edge: e.id.clone(), vertex: format!("#{}", e.src.max(e.dst)) });
            }
            let sv = &g.vertices[e.src].value;
            let dv = &g.vertices[e.dst].value;
            if sv.cmp_exact(dv) != Ordering::Less {
                return Err(VdError::EdgeNotIncreasing { edge: e.id.clone() });
            }
        }
        Ok(g)
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.dst == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.src == v).count()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.in_degree(v) + self.out_degree(v)
    }

    /// Rank vertices by value with ties sharing a rank.
    pub fn value_ranks(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| self.vertices[a].value.cmp_exact(&self.vertices[b].value));
        let mut ranks = vec![0usize; self.vertices.len()];
        let mut rank = 0usize;
        for (pos, &v) in order.iter().enumerate() {
            if pos > 0 {
                let prev = order[pos - 1];
                if !self.vertices[prev].value.is_equal(&self.vertices[v].value) {
                    rank += 1;
                }
            }
            ranks[v] = rank;
        }
        ranks
    }

    /// Suppress every vertex with exactly one incoming and one outgoing edge
    /// (and exactly two incident edges), concatenating the edges. Idempotent.
    pub fn normalize(&self) -> VDigraph {
        let mut g = self.clone();
        loop {
            let mut target = None;
            for v in 0..g.vertices.len() {
                if g.in_degree(v) == 1 && g.out_degree(v) == 1 {
                    target = Some(v);
                    break;
                }
            }
            let v = match target {
                None => return g,
                Some(v) => v,
            };
            let in_edge = g.edges.iter().position(|e| e.dst == v).unwrap();
            let out_edge = g.edges.iter().position(|e| e.src == v).unwrap();
            let src = g.edges[in_edge].src;
            let dst = g.edges[out_edge].dst;
            let keep_id = g.edges[in_edge].id.clone();
            let mut edges: Vec<VdEdge> = Vec::with_capacity(g.edges.len() - 1);
            for (i, e) in g.edges.iter().enumerate() {
                if i == in_edge {
                    edges.push(VdEdge { id: keep_id.clone(), src, dst });
                } else if i == out_edge {
                    continue;
                } else {
                    edges.push(e.clone());
                }
            }
            // drop vertex v, remap indices
            let mut vertices = Vec::with_capacity(g.vertices.len() - 1);
            let mut remap = vec![usize::MAX; g.vertices.len()];
            for (i, vert) in g.vertices.iter().enumerate() {
                if i != v {
                    remap[i] = vertices.len();
                    vertices.push(vert.clone());
                }
            }
            for e in edges.iter_mut() {
                e.src = remap[e.src];
                e.dst = remap[e.dst];
            }
            g = VDigraph { vertices, edges };
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for w in [e.src, e.dst] {
                    let other = if w == v { e.src + e.dst - v } else { continue };
                    if !seen[other] {
                        seen[other] = true;
                        stack.push(other);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Value-order-preserving isomorphism of V-digraphs: a vertex bijection
/// preserving oriented multi-edges and the order (including ties) of values.
/// Returns a witness mapping when one exists.
pub fn is_isomorphic(g1: &VDigraph, g2: &VDigraph) -> Option<Vec<usize>> {
    if g1.vertices.len() != g2.vertices.len() || g1.edges.len() != g2.edges.len() {
        return None;
    }
    let n = g1.vertices.len();
    let r1 = g1.value_ranks();
    let r2 = g2.value_ranks();
    if r1.iter().max() != r2.iter().max() {
        return None;
    }
    // multiset of (rank, in, out) must agree
    let sig = |g: &VDigraph, r: &[usize]| {
        let mut s: Vec<(usize, usize, usize)> =
            (0..g.vertices.len()).map(|v| (r[v], g.in_degree(v), g.out_degree(v))).collect();
        s.sort_unstable();
        s
    };
    if sig(g1, &r1) != sig(g2, &r2) {
        return None;
    }
    // adjacency with multiplicity
    let adj = |g: &VDigraph| {
        let mut m: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for e in &g.edges {
            *m.entry((e.src, e.dst)).or_insert(0) += 1;
        }
        m
    };
    let a1 = adj(g1);
    let a2 = adj(g2);
    // order g1's vertices by constraint (rank frequency) for faster pruning
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (r1[v], v));
    let mut assignment: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    fn backtrack(
        pos: usize,
        order: &[usize],
        g1: &VDigraph,
        g2: &VDigraph,
        r1: &[usize],
        r2: &[usize],
        a1: &BTreeMap<(usize, usize), usize>,
        a2: &BTreeMap<(usize, usize), usize>,
        assignment: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        for w in 0..g2.vertices.len() {
            if used[w]
                || r1[v] != r2[w]
                || g1.in_degree(v) != g2.in_degree(w)
                || g1.out_degree(v) != g2.out_degree(w)
            {
                continue;
            }
            // check edges to already-assigned vertices
            let mut ok = true;
            for u in order[..pos].iter() {
                let mu = assignment[*u].unwrap();
                let fwd1 = a1.get(&(*u, v)).copied().unwrap_or(0);
                let fwd2 = a2.get(&(mu, w)).copied().unwrap_or(0);
                let bck1 = a1.get(&(v, *u)).copied().unwrap_or(0);
                let bck2 = a2.get(&(w, mu)).copied().unwrap_or(0);
                if fwd1 != fwd2 || bck1 != bck2 {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            assignment[v] = Some(w);
            used[w] = true;
            if backtrack(pos + 1, order, g1, g2, r1, r2, a1, a2, assignment, used) {
                return true;
            }
            assignment[v] = None;
            used[w] = false;
        }
        false
    }
    if backtrack(0, &order, g1, g2, &r1, &r2, &a1, &a2, &mut assignment, &mut used) {
        Some(assignment.into_iter().map(|a| a.unwrap()).collect())
    } else {
        None
    }
}

/// Isomorphism after suppressing pass-through vertices on both sides; value
/// order is compared only on the retained vertices.
pub fn is_weakly_isomorphic(g1: &VDigraph, g2: &VDigraph) -> bool {
    is_isomorphic(&g1.normalize(), &g2.normalize()).is_some()
}

// ---------------------------------------------------------------------------
// Embedded graphs (inputs of the realization pipeline)
// ---------------------------------------------------------------------------

/// A planar embedding with strictly x-monotone polyline edges.
#[derive(Clone, Debug)]
pub struct EmbeddedGraph {
    pub vertices: Vec<EmbVertex>,
    pub edges: Vec<EmbEdge>,
}

#[derive(Clone, Debug)]
pub struct EmbVertex {
    pub id: String,
    pub x: Rat,
    pub y: Rat,
}

#[derive(Clone, Debug)]
pub struct EmbEdge {
    pub id: String,
    pub endpoints: (usize, usize),
    /// Full polyline including both endpoint coordinates.
    pub polyline: Vec<(Rat, Rat)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypothesisViolation {
    NotConnected,
    DegreeTwoVertex { vertex: String },
    ExtremumNotDegreeOne { vertex: String },
    EdgeNotXMonotone { edge: String },
    EdgesIntersect { edges: (String, String) },
    EdgeEndpointMismatch { edge: String },
    EmptyGraph,
}

impl std::fmt::Display for HypothesisViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HypothesisViolation::NotConnected => write!(f, "graph is not connected"),
            HypothesisViolation::DegreeTwoVertex { vertex } => write!(f, "degree 2 at {vertex}"),
            HypothesisViolation::ExtremumNotDegreeOne { vertex } => {
                write!(f, "extremum at degree != 1 vertex {vertex}")
            }
            HypothesisViolation::EdgeNotXMonotone { edge } => {
                write!(f, "edge {edge} is not strictly x-monotone")
            }
            HypothesisViolation::EdgesIntersect { edges } => {
                write!(f, "edges {} and {} intersect away from shared endpoints", edges.0, edges.1)
            }
            HypothesisViolation::EdgeEndpointMismatch { edge } => {
                write!(f, "edge {edge}: polyline ends do not match its endpoint vertices")
            }
            HypothesisViolation::EmptyGraph => write!(f, "graph has no vertices"),
        }
    }
}

impl EmbeddedGraph {
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.endpoints.0 == v) as usize + (e.endpoints.1 == v) as usize)
            .sum()
    }

    /// The V-digraph this embedding induces: vertex values are x-coordinates,
    /// edges oriented by increasing x.
    pub fn to_vdigraph(&self) -> VDigraph {
        let vertices = self
            .vertices
            .iter()
            .map(|v| VdVertex { id: v.id.clone(), value: RealAlg::exact(v.x.clone()) })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = e.endpoints;
                let (src, dst) = if self.vertices[a].x < self.vertices[b].x { (a, b) } else { (b, a) };
                VdEdge { id: e.id.clone(), src, dst }
            })
            .collect();
        VDigraph { vertices, edges }
    }
}

/// Check the realization hypotheses: connected, embedded, strictly x-monotone
/// edges, no degree-2 vertex, and every projection extremum at a degree-1
/// vertex.
pub fn validate_theorem_hypotheses(g: &EmbeddedGraph) -> Vec<HypothesisViolation> {
    let mut out = Vec::new();
    if g.vertices.is_empty() {
        return vec![HypothesisViolation::EmptyGraph];
    }
    // connectivity
    {
        let mut seen = vec![false; g.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &g.edges {
                let (a, b) = e.endpoints;
                if a == v && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
                if b == v && !seen[a] {
                    seen[a] = true;
                    stack.push(a);
                }
            }
        }
        if !seen.iter().all(|s| *s) {
            out.push(HypothesisViolation::NotConnected);
        }
    }
    // endpoint consistency + monotonicity
    for e in &g.edges {
        let (a, b) = e.endpoints;
        let first = e.polyline.first();
        let last = e.polyline.last();
        let va = (&g.vertices[a].x, &g.vertices[a].y);
        let vb = (&g.vertices[b].x, &g.vertices[b].y);
        let matches = |p: Option<&(Rat, Rat)>, v: (&Rat, &Rat)| {
            p.map(|(x, y)| x == v.0 && y == v.1).unwrap_or(false)
        };
        let fwd = matches(first, va) && matches(last, vb);
        let bwd = matches(first, vb) && matches(last, va);
        if e.polyline.len() < 2 || (!fwd && !bwd) {
            out.push(HypothesisViolation::EdgeEndpointMismatch { edge: e.id.clone() });
            continue;
        }
        let mut dir = 0i8;
        let mut monotone = true;
        for w in e.polyline.windows(2) {
            let s = sign_of(&(&w[1].0 - &w[0].0));
            if s == 0 {
                monotone = false;
                break;
            }
            if dir == 0 {
                dir = s;
            } else if dir != s {
                monotone = false;
                break;
            }
        }
        if !monotone {
            out.push(HypothesisViolation::EdgeNotXMonotone { edge: e.id.clone() });
        }
    }
    // degree conditions
    for (v, vert) in g.vertices.iter().enumerate() {
        let d = g.degree(v);
        if d == 2 {
            out.push(HypothesisViolation::DegreeTwoVertex { vertex: vert.id.clone() });
        }
        // local extremum of the projection: all incident edges leave to the
        // same x-side
        let mut sides = BTreeSet::new();
        for e in &g.edges {
            for (this, other) in [(e.endpoints.0, e.endpoints.1), (e.endpoints.1, e.endpoints.0)] {
                if this != v {
                    continue;
                }
                let dx = &g.vertices[other].x - &vert.x;
                // strictly monotone edges guarantee dx != 0 between endpoints
                sides.insert(sign_of(&dx));
            }
        }
        if sides.len() == 1 && d != 1 && d != 0 {
            out.push(HypothesisViolation::ExtremumNotDegreeOne { vertex: vert.id.clone() });
        }
    }
    // pairwise embedding check on polyline segments
    for (i, e1) in g.edges.iter().enumerate() {
        for e2 in g.edges.iter().skip(i + 1) {
            if polylines_cross(g, e1, e2) {
                out.push(HypothesisViolation::EdgesIntersect {
                    edges: (e1.id.clone(), e2.id.clone()),
                });
            }
        }
        if polyline_self_crosses(e1) {
            out.push(HypothesisViolation::EdgesIntersect {
                edges: (e1.id.clone(), e1.id.clone()),
            });
        }
    }
    out
}

type Pt = (Rat, Rat);

fn orient(a: &Pt, b: &Pt, c: &Pt) -> i8 {
    let v = (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0);
    sign_of(&v)
}

fn on_segment(a: &Pt, b: &Pt, p: &Pt) -> bool {
    orient(a, b, p) == 0
        && p.0 >= a.0.clone().min(b.0.clone())
        && p.0 <= a.0.clone().max(b.0.clone())
        && p.1 >= a.1.clone().min(b.1.clone())
        && p.1 <= a.1.clone().max(b.1.clone())
}

/// Do closed segments [a,b] and [c,d] intersect?
fn segments_intersect(a: &Pt, b: &Pt, c: &Pt, d: &Pt) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

fn shared_graph_endpoints(g: &EmbeddedGraph, e1: &EmbEdge, e2: &EmbEdge) -> Vec<Pt> {
    let mut pts = Vec::new();
    for v in [e1.endpoints.0, e1.endpoints.1] {
        if v == e2.endpoints.0 || v == e2.endpoints.1 {
            pts.push((g.vertices[v].x.clone(), g.vertices[v].y.clone()));
        }
    }
    pts
}

fn polylines_cross(g: &EmbeddedGraph, e1: &EmbEdge, e2: &EmbEdge) -> bool {
    let shared = shared_graph_endpoints(g, e1, e2);
    for s1 in e1.polyline.windows(2) {
        for s2 in e2.polyline.windows(2) {
            if !segments_intersect(&s1[0], &s1[1], &s2[0], &s2[1]) {
                continue;
            }
            // Any contact must be at a shared graph vertex, touching only at
            // the polyline ends.
            let mut legal = false;
            for sh in &shared {
                let touches_1 = &s1[0] == sh || &s1[1] == sh;
                let touches_2 = &s2[0] == sh || &s2[1] == sh;
                if touches_1 && touches_2 && only_touches_at(&s1[0], &s1[1], &s2[0], &s2[1], sh) {
                    legal = true;
                    break;
                }
            }
            if !legal {
                return true;
            }
        }
    }
    false
}

/// True when the two segments meet exactly in the single point `sh`.
fn only_touches_at(a: &Pt, b: &Pt, c: &Pt, d: &Pt, sh: &Pt) -> bool {
    // collinear overlap would put another endpoint of one segment on the other
    for p in [a, b] {
        if p != sh && on_segment(c, d, p) {
            return false;
        }
    }
    for p in [c, d] {
        if p != sh && on_segment(a, b, p) {
            return false;
        }
    }
    true
}

fn polyline_self_crosses(e: &EmbEdge) -> bool {
    let segs: Vec<_> = e.polyline.windows(2).collect();
    for i in 0..segs.len() {
        for j in i + 2..segs.len() {
            // non-adjacent segments of one x-monotone polyline can only meet
            // illegally
            if segments_intersect(&segs[i][0], &segs[i][1], &segs[j][0], &segs[j][1]) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i;

    fn v(id: &str, val: i64) -> VdVertex {
        VdVertex { id: id.into(), value: RealAlg::exact(rat_i(val)) }
    }

    fn edge(id: &str, s: usize, d: usize) -> VdEdge {
        VdEdge { id: id.into(), src: s, dst: d }
    }

    fn annulus_graph() -> VDigraph {
        VDigraph::new(
            vec![v("a", -2), v("b", -1), v("c", 1), v("d", 2)],
            vec![edge("e1", 0, 1), edge("e2", 1, 2), edge("e3", 1, 2), edge("e4", 2, 3)],
        )
        .unwrap()
    }

    #[test]
    fn normalize_suppresses_chain() {
        let g = VDigraph::new(
            vec![v("u", 0), v("v", 1), v("w", 2)],
            vec![edge("e1", 0, 1), edge("e2", 1, 2)],
        )
        .unwrap();
        let n = g.normalize();
        assert_eq!(n.vertices.len(), 2);
        assert_eq!(n.edges.len(), 1);
        // idempotent
        let n2 = n.normalize();
        assert_eq!(n2.vertices.len(), 2);
    }

    #[test]
    fn normalize_keeps_branch_vertices() {
        let g = annulus_graph();
        let n = g.normalize();
        assert_eq!(n.vertices.len(), 4);
        assert_eq!(n.edges.len(), 4);
    }

    #[test]
    fn normalize_keeps_sources_with_two_out_edges() {
        let g = VDigraph::new(
            vec![v("s", 0), v("a", 1), v("b", 2)],
            vec![edge("e1", 0, 1), edge("e2", 0, 2)],
        )
        .unwrap();
        let n = g.normalize();
        assert_eq!(n.vertices.len(), 3);
    }

    #[test]
    fn isomorphic_relabeled_annulus() {
        let g1 = annulus_graph();
        let g2 = VDigraph::new(
            vec![v("p", 10), v("q", 20), v("r", 30), v("s", 40)],
            vec![edge("f4", 2, 3), edge("f2", 1, 2), edge("f3", 1, 2), edge("f1", 0, 1)],
        )
        .unwrap();
        assert!(is_isomorphic(&g1, &g2).is_some());
    }

    #[test]
    fn annulus_not_isomorphic_to_path() {
        let g1 = annulus_graph();
        let path = VDigraph::new(
            vec![v("a", 0), v("b", 1), v("c", 2), v("d", 3)],
            vec![edge("e1", 0, 1), edge("e2", 1, 2), edge("e3", 2, 3), edge("e4", 2, 3)],
        )
        .unwrap();
        assert!(is_isomorphic(&g1, &path).is_none());
    }

    #[test]
    fn value_order_pattern_matters() {
        // path with a tie vs path without: value rank patterns differ
        let g1 = VDigraph::new(
            vec![v("a", 0), v("b", 0), v("c", 1)],
            vec![edge("e1", 0, 2), edge("e2", 1, 2)],
        )
        .unwrap();
        let g2 = VDigraph::new(
            vec![v("a", 0), v("b", 1), v("c", 2)],
            vec![edge("e1", 0, 2), edge("e2", 1, 2)],
        )
        .unwrap();
        assert!(is_isomorphic(&g1, &g2).is_none());
    }

    #[test]
    fn weak_iso_subdivision() {
        let single = VDigraph::new(vec![v("a", 0), v("b", 10)], vec![edge("e", 0, 1)]).unwrap();
        let subdivided = VDigraph::new(
            vec![v("a", 0), v("m1", 2), v("m2", 4), v("m3", 6), v("m4", 8), v("b", 10)],
            vec![
                edge("e1", 0, 1),
                edge("e2", 1, 2),
                edge("e3", 2, 3),
                edge("e4", 3, 4),
                edge("e5", 4, 5),
            ],
        )
        .unwrap();
        assert!(is_weakly_isomorphic(&single, &subdivided));
        assert!(!is_weakly_isomorphic(&annulus_graph(), &single));
    }

    #[test]
    fn iso_implies_weak_iso() {
        let g1 = annulus_graph();
        let g2 = annulus_graph();
        assert!(is_isomorphic(&g1, &g2).is_some());
        assert!(is_weakly_isomorphic(&g1, &g2));
    }

    // --- embedded graph hypothesis checks ---

    fn y_graph() -> EmbeddedGraph {
        let mk = |id: &str, x: i64, y: i64| EmbVertex { id: id.into(), x: rat_i(x), y: rat_i(y) };
        EmbeddedGraph {
            vertices: vec![mk("A", -1, 1), mk("B", -1, -1), mk("C", 0, 0), mk("D", 1, 0)],
            edges: vec![
                EmbEdge {
                    id: "AC".into(),
                    endpoints: (0, 2),
                    polyline: vec![(rat_i(-1), rat_i(1)), (rat_i(0), rat_i(0))],
                },
                EmbEdge {
                    id: "BC".into(),
                    endpoints: (1, 2),
                    polyline: vec![(rat_i(-1), rat_i(-1)), (rat_i(0), rat_i(0))],
                },
                EmbEdge {
                    id: "CD".into(),
                    endpoints: (2, 3),
                    polyline: vec![(rat_i(0), rat_i(0)), (rat_i(1), rat_i(0))],
                },
            ],
        }
    }

    #[test]
    fn y_graph_passes_hypotheses() {
        assert!(validate_theorem_hypotheses(&y_graph()).is_empty());
    }

    #[test]
    fn degree_two_path_rejected() {
        let mk = |id: &str, x: i64| EmbVertex { id: id.into(), x: rat_i(x), y: rat_i(0) };
        let g = EmbeddedGraph {
            vertices: vec![mk("a", 0), mk("b", 1), mk("c", 2)],
            edges: vec![
                EmbEdge {
                    id: "ab".into(),
                    endpoints: (0, 1),
                    polyline: vec![(rat_i(0), rat_i(0)), (rat_i(1), rat_i(0))],
                },
                EmbEdge {
                    id: "bc".into(),
                    endpoints: (1, 2),
                    polyline: vec![(rat_i(1), rat_i(0)), (rat_i(2), rat_i(0))],
                },
            ],
        };
        let vs = validate_theorem_hypotheses(&g);
        assert!(vs.contains(&HypothesisViolation::DegreeTwoVertex { vertex: "b".into() }));
    }

    #[test]
    fn extremum_at_degree_three_rejected() {
        // D at x-max with three edges arriving from the left
        let mk = |id: &str, x: i64, y: i64| EmbVertex { id: id.into(), x: rat_i(x), y: rat_i(y) };
        let seg = |id: &str, a: usize, b: usize, g: &[EmbVertex]| EmbEdge {
            id: id.into(),
            endpoints: (a, b),
            polyline: vec![(g[a].x.clone(), g[a].y.clone()), (g[b].x.clone(), g[b].y.clone())],
        };
        let verts = vec![mk("A", -1, 1), mk("B", -1, 0), mk("C", -1, -1), mk("D", 1, 0)];
        let edges = vec![
            seg("AD", 0, 3, &verts),
            seg("BD", 1, 3, &verts),
            seg("CD", 2, 3, &verts),
        ];
        let g = EmbeddedGraph { vertices: verts, edges };
        let vs = validate_theorem_hypotheses(&g);
        assert!(vs.contains(&HypothesisViolation::ExtremumNotDegreeOne { vertex: "D".into() }));
    }

    #[test]
    fn crossing_edges_rejected() {
        let mk = |id: &str, x: i64, y: i64| EmbVertex { id: id.into(), x: rat_i(x), y: rat_i(y) };
        let verts = vec![mk("A", 0, 0), mk("B", 2, 2), mk("C", 0, 2), mk("D", 2, 0)];
        let seg = |id: &str, a: usize, b: usize, g: &[EmbVertex]| EmbEdge {
            id: id.into(),
            endpoints: (a, b),
            polyline: vec![(g[a].x.clone(), g[a].y.clone()), (g[b].x.clone(), g[b].y.clone())],
        };
        let edges = vec![seg("AB", 0, 1, &verts), seg("CD", 2, 3, &verts)];
        let g = EmbeddedGraph { vertices: verts, edges };
        let vs = validate_theorem_hypotheses(&g);
        assert!(vs.iter().any(|v| matches!(v, HypothesisViolation::EdgesIntersect { .. })));
    }

    #[test]
    fn vertical_polyline_piece_rejected() {
        let mk = |id: &str, x: i64, y: i64| EmbVertex { id: id.into(), x: rat_i(x), y: rat_i(y) };
        let verts = vec![mk("A", 0, 0), mk("B", 2, 0)];
        let g = EmbeddedGraph {
            vertices: verts,
            edges: vec![EmbEdge {
                id: "AB".into(),
                endpoints: (0, 1),
                polyline: vec![
                    (rat_i(0), rat_i(0)),
                    (rat_i(1), rat_i(1)),
                    (rat_i(1), rat_i(0)),
                    (rat_i(2), rat_i(0)),
                ],
            }],
        };
        let vs = validate_theorem_hypotheses(&g);
        assert!(vs.iter().any(|v| matches!(v, HypothesisViolation::EdgeNotXMonotone { .. })));
    }
}
