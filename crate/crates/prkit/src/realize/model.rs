//! Geometric model for graph realization: parameter derivation, vertical
//! segments at vertex abscissae, rewiring of non-extremal vertices, and the
//! rewired 1-complex with its exact embedding check.

use crate::rat::{rat, rat_i, rat_max, rat_min, sign_of, Rat};
use crate::vdigraph::EmbeddedGraph;
use num_traits::Zero;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("graph has no edges")]
    Empty,
    #[error("could not find clearance for the rewiring zones (vertex {0})")]
    NoClearance(String),
    #[error("rewired complex is not embedded: pieces {0} and {1} intersect")]
    NotEmbedded(String, String),
    #[error("parameter constraint violated: {0}")]
    BadParameters(String),
}

/// Resolved small parameters of the construction.
#[derive(Clone, Debug)]
pub struct Params {
    pub eps1: Rat,
    pub eps2: Rat,
    pub eps_prime: Rat,
    pub delta: Rat,
}

/// The vertical segment added at a vertex x-value: {x} x [y_lo, y_hi].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalSegment {
    pub x: Rat,
    pub y_lo: Rat,
    pub y_hi: Rat,
}

/// One rewired incident edge at a non-extremal vertex.
#[derive(Clone, Debug)]
pub struct Attachment {
    pub edge: usize,
    /// where the edge is cut, on x = p -+ eps1
    pub clip: (Rat, Rat),
    /// height of the horizontal segment reaching the spine
    pub height: Rat,
}

#[derive(Clone, Debug)]
pub struct RewiredVertex {
    pub vertex: usize,
    pub x: Rat,
    pub y: Rat,
    pub left: Vec<Attachment>,
    pub right: Vec<Attachment>,
}

impl RewiredVertex {
    /// Pockets: gaps between consecutive same-side horizontals.
    pub fn pockets(&self) -> Vec<Pocket> {
        let mut out = Vec::new();
        for (side_left, atts) in [(true, &self.left), (false, &self.right)] {
            let mut hs: Vec<Rat> = atts.iter().map(|a| a.height.clone()).collect();
            hs.sort();
            for w in hs.windows(2) {
                out.push(Pocket {
                    vertex: self.vertex,
                    side_left,
                    x: self.x.clone(),
                    h_lo: w[0].clone(),
                    h_hi: w[1].clone(),
                });
            }
        }
        out
    }
}

/// Gap between two same-side horizontals of one rewired vertex; each pocket
/// receives one indefinite fold and one excision ellipse.
#[derive(Clone, Debug)]
pub struct Pocket {
    pub vertex: usize,
    pub side_left: bool,
    pub x: Rat,
    pub h_lo: Rat,
    pub h_hi: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceKind {
    /// Part of an original edge polyline kept outside all rewiring zones.
    EdgePart { edge: usize },
    Slant { vertex: usize },
    Horizontal { vertex: usize },
    /// Retained part of the vertical segment inside one rewiring zone.
    Spine { vertex: usize },
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub kind: PieceKind,
    pub points: Vec<(Rat, Rat)>,
}

/// The rewired 1-complex.
#[derive(Clone, Debug)]
pub struct Complex {
    pub pieces: Vec<Piece>,
}

impl Complex {
    pub fn segments(&self) -> impl Iterator<Item = (&Piece, (&(Rat, Rat), &(Rat, Rat)))> {
        self.pieces
            .iter()
            .flat_map(|p| p.points.windows(2).map(move |w| (p, (&w[0], &w[1]))))
    }
}

/// All distinct vertex x-values, ascending.
fn vertex_x_values(g: &EmbeddedGraph) -> Vec<Rat> {
    let mut xs: Vec<Rat> = g.vertices.iter().map(|v| v.x.clone()).collect();
    xs.sort();
    xs.dedup();
    xs
}

/// Is the vertex a local extremum of the projection (all incident edges on
/// one x-side)? Validated graphs have such vertices exactly at degree 1.
pub fn is_extremal(g: &EmbeddedGraph, v: usize) -> bool {
    let mut left = false;
    let mut right = false;
    for e in &g.edges {
        for (this, other) in [(e.endpoints.0, e.endpoints.1), (e.endpoints.1, e.endpoints.0)] {
            if this != v {
                continue;
            }
            match sign_of(&(&g.vertices[other].x - &g.vertices[v].x)) {
                1 => right = true,
                -1 => left = true,
                _ => {}
            }
        }
    }
    !(left && right)
}

/// y-coordinate where an x-monotone polyline crosses the vertical line x = t;
/// None if the line is outside the polyline's x-range.
pub fn polyline_at_x(polyline: &[(Rat, Rat)], t: &Rat) -> Option<Rat> {
    for w in polyline.windows(2) {
        let (x0, y0) = &w[0];
        let (x1, y1) = &w[1];
        let (lo, hi, ylo, yhi) = if x0 <= x1 { (x0, x1, y0, y1) } else { (x1, x0, y1, y0) };
        if t >= lo && t <= hi {
            if lo == hi {
                return Some(ylo.clone());
            }
            let s = (t - lo) / (hi - lo);
            return Some(ylo + (yhi - ylo) * s);
        }
    }
    None
}

/// Tube half-width consistent with the rewired data: at most half of
/// eps'/... and a fifth of the narrowest pocket gap.
pub fn finalize_delta(params: &Params, rewired: &[RewiredVertex]) -> Rat {
    let mut delta = params.delta.clone();
    for rv in rewired {
        for pocket in rv.pockets() {
            let gap = &pocket.h_hi - &pocket.h_lo;
            let cap = gap / rat_i(4);
            if cap < delta {
                delta = cap;
            }
        }
        // keep half the distance from the outermost horizontals to the spine
        // ends, so the spine dome stays clear of the tubes
        for a in rv.left.iter().chain(&rv.right) {
            let top = &rv.y + &params.eps2;
            let bot = &rv.y - &params.eps2;
            for d in [&top - &a.height, &a.height - &bot] {
                let cap = d / rat_i(2);
                if cap.is_positive_strict() && cap < delta {
                    delta = cap;
                }
            }
        }
    }
    delta
}

/// Derive eps1/eps2/eps'/delta. eps1 starts at a quarter of the minimum gap
/// between distinct vertex abscissae and shrinks until every rewired edge
/// stays within its vertex band; eps2 is a quarter of the smallest vertical
/// clearance among features on the probe lines of each rewiring zone.
pub fn derive_params(g: &EmbeddedGraph) -> Result<Params, ModelError> {
    if g.edges.is_empty() {
        return Err(ModelError::Empty);
    }
    let xs = vertex_x_values(g);
    let mut min_gap: Option<Rat> = None;
    for w in xs.windows(2) {
        let gap = &w[1] - &w[0];
        min_gap = Some(match min_gap {
            None => gap,
            Some(m) => rat_min(m, gap),
        });
    }
    // a single x-value (single vertical stack) cannot produce a valid graph
    // with degree-1 extrema on both sides; but guard anyway
    let min_gap = min_gap.unwrap_or_else(|| rat_i(1));
    let mut eps1 = &min_gap / rat_i(4);

    // shrink eps1 until, for every non-extremal vertex, each incident edge
    // crossing of x = p +- eps1 and x = p +- eps1/2 is the nearest feature to
    // the vertex on that line (measured below by clearance)
    for _ in 0..32 {
        let clearance = match clearance_for(g, &eps1) {
            // graphs without two features on any probe line (e.g. one edge)
            // take the abscissa gap as their vertical scale
            None => Some(min_gap.clone()),
            other => other,
        };
        match clearance {
            Some(c) if c.is_positive_strict() => {
                let eps2 = &c / rat_i(2);
                let eps_prime = &eps2 / rat_i(2);
                // wider tube than eps'/4 keeps the algebraization degree low;
                // the embedding checks below still gate it
                let delta = &eps_prime / rat_i(2);
                return Ok(Params { eps1, eps2, eps_prime, delta });
            }
            _ => {
                eps1 = eps1 / rat_i(2);
            }
        }
    }
    Err(ModelError::NoClearance("(global)".into()))
}

trait StrictPos {
    fn is_positive_strict(&self) -> bool;
}

impl StrictPos for Rat {
    fn is_positive_strict(&self) -> bool {
        sign_of(self) > 0
    }
}

/// Minimum vertical distance between distinct features (edge crossings and
/// vertices) on the probe lines around every vertex x-value.
fn clearance_for(g: &EmbeddedGraph, eps1: &Rat) -> Option<Rat> {
    let xs = vertex_x_values(g);
    let mut min_c: Option<Rat> = None;
    for p in &xs {
        for probe in [p.clone(), p - eps1, p + eps1] {
            let mut ys: Vec<Rat> = Vec::new();
            for e in &g.edges {
                if let Some(y) = polyline_at_x(&e.polyline, &probe) {
                    ys.push(y);
                }
            }
            for v in &g.vertices {
                if &v.x == &probe {
                    ys.push(v.y.clone());
                }
            }
            ys.sort();
            ys.dedup();
            for w in ys.windows(2) {
                let d = &w[1] - &w[0];
                min_c = Some(match min_c.take() {
                    None => d,
                    Some(m) => rat_min(m, d),
                });
            }
        }
    }
    min_c
}

/// The added vertical segments: for each x-value carrying at least one
/// vertex, {p} x [min_y - eps2, max_y + eps2].
pub fn vertical_segments(g: &EmbeddedGraph, params: &Params) -> Vec<VerticalSegment> {
    let mut out = Vec::new();
    for p in vertex_x_values(g) {
        let mut y_min: Option<Rat> = None;
        let mut y_max: Option<Rat> = None;
        for v in &g.vertices {
            if v.x == p {
                y_min = Some(match y_min.take() {
                    None => v.y.clone(),
                    Some(m) => rat_min(m, v.y.clone()),
                });
                y_max = Some(match y_max.take() {
                    None => v.y.clone(),
                    Some(m) => rat_max(m, v.y.clone()),
                });
            }
        }
        let (y_min, y_max) = (y_min.unwrap(), y_max.unwrap());
        out.push(VerticalSegment {
            x: p,
            y_lo: y_min - &params.eps2,
            y_hi: y_max + &params.eps2,
        });
    }
    out
}

/// Rewire every non-extremal vertex: clip incident edges at x = p -+ eps1 and
/// record the slant/horizontal replacement data. Heights interleave left and
/// right attachments inside the inner half of the vertex band, in the
/// vertical order of the clip points.
pub fn rewire(g: &EmbeddedGraph, params: &Params) -> Result<Vec<RewiredVertex>, ModelError> {
    let mut out = Vec::new();
    for (vi, v) in g.vertices.iter().enumerate() {
        if is_extremal(g, vi) {
            continue;
        }
        let p = &v.x;
        let mut left: Vec<(usize, (Rat, Rat))> = Vec::new();
        let mut right: Vec<(usize, (Rat, Rat))> = Vec::new();
        for (ei, e) in g.edges.iter().enumerate() {
            for (this, other) in [(e.endpoints.0, e.endpoints.1), (e.endpoints.1, e.endpoints.0)] {
                if this != vi {
                    continue;
                }
                let to_right = g.vertices[other].x > *p;
                let line = if to_right { p + &params.eps1 } else { p - &params.eps1 };
                // clip the sub-polyline incident to this vertex; for a loop
                // of multi-edges both endpoints are handled separately
                let y = clip_near_vertex(&e.polyline, v, &line)
                    .ok_or_else(|| ModelError::NoClearance(g.vertices[vi].id.clone()))?;
                if to_right {
                    right.push((ei, (line.clone(), y)));
                } else {
                    left.push((ei, (line.clone(), y)));
                }
            }
        }
        left.sort_by(|a, b| a.1 .1.cmp(&b.1 .1));
        right.sort_by(|a, b| a.1 .1.cmp(&b.1 .1));
        // Heights per side, spread over the inner band in clip order. The two
        // sides live in disjoint x-ranges, so their heights are independent;
        // spreading each side over the full band keeps pocket gaps as wide as
        // the geometry allows (the nesting requirement only fixes the order
        // within a side). A small offset keeps the sides' heights distinct.
        let band = params.eps2.clone(); // total height eps2, inside N_v
        let spread = |count: usize, offset: Rat, v_y: &Rat| -> Vec<Rat> {
            if count == 0 {
                return Vec::new();
            }
            if count == 1 {
                return vec![v_y + &offset];
            }
            (0..count)
                .map(|k| {
                    let frac = rat(k as i64, (count - 1) as i64);
                    v_y - &band / rat_i(2) + &band * frac + &offset
                })
                .collect()
        };
        let l_heights = spread(left.len(), Rat::zero(), &v.y);
        let r_heights = spread(right.len(), &band / rat_i(64), &v.y);
        let la: Vec<Attachment> = left
            .iter()
            .zip(l_heights)
            .map(|((ei, clip), height)| Attachment { edge: *ei, clip: clip.clone(), height })
            .collect();
        let ra: Vec<Attachment> = right
            .iter()
            .zip(r_heights)
            .map(|((ei, clip), height)| Attachment { edge: *ei, clip: clip.clone(), height })
            .collect();
        out.push(RewiredVertex { vertex: vi, x: v.x.clone(), y: v.y.clone(), left: la, right: ra });
    }
    Ok(out)
}

/// Crossing of the edge piece incident to vertex `v` with the vertical line.
fn clip_near_vertex(polyline: &[(Rat, Rat)], v: &crate::vdigraph::EmbVertex, line: &Rat) -> Option<Rat> {
    // the polyline is strictly x-monotone, so there is a single crossing
    let starts_at_v = polyline.first().map(|(x, y)| x == &v.x && y == &v.y).unwrap_or(false);
    let _ = starts_at_v;
    polyline_at_x(polyline, line)
}

/// Assemble the rewired complex and check it is embedded.
pub fn build_complex(
    g: &EmbeddedGraph,
    params: &Params,
    segments: &[VerticalSegment],
    rewired: &[RewiredVertex],
) -> Result<Complex, ModelError> {
    let mut pieces: Vec<Piece> = Vec::new();
    // original edges, clipped at every rewired endpoint
    for (ei, e) in g.edges.iter().enumerate() {
        let mut lo_x: Option<Rat> = None;
        let mut hi_x: Option<Rat> = None;
        // the polyline runs between its endpoint vertices; clip the side(s)
        // whose vertex was rewired
        for rv in rewired {
            for (this, _other) in [(e.endpoints.0, e.endpoints.1), (e.endpoints.1, e.endpoints.0)] {
                if this != rv.vertex {
                    continue;
                }
                let p = &g.vertices[rv.vertex].x;
                // does the edge leave this vertex to the right or left?
                let other_end = if e.endpoints.0 == rv.vertex { e.endpoints.1 } else { e.endpoints.0 };
                if g.vertices[other_end].x > *p {
                    lo_x = Some(match lo_x.take() {
                        None => p + &params.eps1,
                        Some(m) => rat_max(m, p + &params.eps1),
                    });
                } else {
                    hi_x = Some(match hi_x.take() {
                        None => p - &params.eps1,
                        Some(m) => rat_min(m, p - &params.eps1),
                    });
                }
            }
        }
        let mut clipped = clip_polyline(&e.polyline, lo_x.as_ref(), hi_x.as_ref());
        // extend leaf ends outward by delta along the last segment direction,
        // compensating the inward pull of the later least-squares boundary
        if clipped.len() >= 2 {
            for (end_v, at_front) in [(e.endpoints.0, true), (e.endpoints.1, true)] {
                let _ = at_front;
                if g.degree(end_v) != 1 {
                    continue;
                }
                let vx = &g.vertices[end_v].x;
                let vy = &g.vertices[end_v].y;
                // locate which end of the clipped polyline is this leaf
                let first_is_leaf = clipped.first().map(|p| &p.0 == vx && &p.1 == vy).unwrap_or(false);
                let last_is_leaf = clipped.last().map(|p| &p.0 == vx && &p.1 == vy).unwrap_or(false);
                if first_is_leaf {
                    let d = dir_step(&clipped[1], &clipped[0], &params.delta);
                    let p0 = (&clipped[0].0 + &d.0, &clipped[0].1 + &d.1);
                    clipped.insert(0, p0);
                } else if last_is_leaf {
                    let n = clipped.len();
                    let d = dir_step(&clipped[n - 2], &clipped[n - 1], &params.delta);
                    let pn = (&clipped[n - 1].0 + &d.0, &clipped[n - 1].1 + &d.1);
                    clipped.push(pn);
                }
            }
            pieces.push(Piece { kind: PieceKind::EdgePart { edge: ei }, points: clipped });
        }
    }
    // replacement segments + spines
    for rv in rewired {
        let p = &rv.x;
        for (is_left, atts) in [(true, &rv.left), (false, &rv.right)] {
            let half = if is_left { p - &params.eps1 / rat_i(2) } else { p + &params.eps1 / rat_i(2) };
            for a in atts {
                pieces.push(Piece {
                    kind: PieceKind::Slant { vertex: rv.vertex },
                    points: vec![a.clip.clone(), (half.clone(), a.height.clone())],
                });
                pieces.push(Piece {
                    kind: PieceKind::Horizontal { vertex: rv.vertex },
                    points: vec![(half.clone(), a.height.clone()), (p.clone(), a.height.clone())],
                });
            }
        }
        // retained spine: the vertical segment restricted to this vertex band
        let seg = segments
            .iter()
            .find(|s| &s.x == p)
            .ok_or_else(|| ModelError::BadParameters("missing vertical segment".into()))?;
        let lo = rat_max(seg.y_lo.clone(), &rv.y - &params.eps2);
        let hi = rat_min(seg.y_hi.clone(), &rv.y + &params.eps2);
        pieces.push(Piece {
            kind: PieceKind::Spine { vertex: rv.vertex },
            points: vec![(p.clone(), lo), (p.clone(), hi)],
        });
    }
    let complex = Complex { pieces };
    check_embedded(&complex)?;
    Ok(complex)
}

/// Outward extension step (x-length delta) and terminal slope of the leaf's
/// edge, as used when the complex is built. None for non-leaves.
pub fn leaf_step(g: &EmbeddedGraph, vi: usize, delta: &Rat) -> Option<(Rat, Rat)> {
    if g.degree(vi) != 1 {
        return None;
    }
    let e = g
        .edges
        .iter()
        .find(|e| e.endpoints.0 == vi || e.endpoints.1 == vi)?;
    let mut pts: Vec<(Rat, Rat)> = e.polyline.clone();
    let vx = &g.vertices[vi].x;
    let vy = &g.vertices[vi].y;
    let first_is_leaf = pts.first().map(|p| &p.0 == vx && &p.1 == vy).unwrap_or(false);
    if !first_is_leaf {
        pts.reverse();
    }
    if pts.first().map(|p| &p.0 == vx && &p.1 == vy) != Some(true) || pts.len() < 2 {
        return None;
    }
    Some(dir_step(&pts[1], &pts[0], delta))
}

/// Rational step of x-length `delta` continuing the segment from `a` to `b`.
fn dir_step(a: &(Rat, Rat), b: &(Rat, Rat), delta: &Rat) -> (Rat, Rat) {
    let dx = &b.0 - &a.0;
    let dy = &b.1 - &a.1;
    if dx.is_zero() {
        return (Rat::zero(), Rat::zero());
    }
    let sign = if crate::rat::sign_of(&dx) > 0 { rat_i(1) } else { rat_i(-1) };
    let step_x = delta * &sign;
    let step_y = &dy / &dx * &step_x;
    (step_x, step_y)
}

fn clip_polyline(polyline: &[(Rat, Rat)], lo: Option<&Rat>, hi: Option<&Rat>) -> Vec<(Rat, Rat)> {
    // normalize to ascending x
    let mut pts: Vec<(Rat, Rat)> = polyline.to_vec();
    if pts.first().map(|p| &p.0) > pts.last().map(|p| &p.0) {
        pts.reverse();
    }
    let mut out: Vec<(Rat, Rat)> = Vec::new();
    for w in pts.windows(2) {
        let (x0, y0) = w[0].clone();
        let (x1, y1) = w[1].clone();
        let seg_lo = x0.clone();
        let seg_hi = x1.clone();
        let cut_lo = lo.map(|l| rat_max(l.clone(), seg_lo.clone())).unwrap_or(seg_lo.clone());
        let cut_hi = hi.map(|h| rat_min(h.clone(), seg_hi.clone())).unwrap_or(seg_hi.clone());
        if cut_lo >= cut_hi {
            continue;
        }
        let at = |t: &Rat| -> (Rat, Rat) {
            let s = (t - &x0) / (&x1 - &x0);
            (t.clone(), &y0 + (&y1 - &y0) * s)
        };
        let a = at(&cut_lo);
        let b = at(&cut_hi);
        if out.last() != Some(&a) {
            out.push(a);
        }
        out.push(b);
    }
    out
}

/// Exact pairwise embedding check with the junction contacts of the
/// construction allowed.
fn check_embedded(c: &Complex) -> Result<(), ModelError> {
    let segs: Vec<(usize, (Rat, Rat), (Rat, Rat))> = c
        .pieces
        .iter()
        .enumerate()
        .flat_map(|(pi, p)| {
            p.points
                .windows(2)
                .map(move |w| (pi, w[0].clone(), w[1].clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    for (i, (pi, a0, a1)) in segs.iter().enumerate() {
        for (pj, b0, b1) in segs.iter().skip(i + 1) {
            if !crate::realize::geom::segments_intersect(a0, a1, b0, b1) {
                continue;
            }
            // contacts are legal when they are a single shared endpoint of
            // both segments, or an endpoint of one lying on a spine piece
            let shared_endpoint = (a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1)
                && crate::realize::geom::touch_only_at_shared(a0, a1, b0, b1);
            let spine_contact = {
                let i_is_spine = matches!(c.pieces[*pi].kind, PieceKind::Spine { .. });
                let j_is_spine = matches!(c.pieces[*pj].kind, PieceKind::Spine { .. });
                (i_is_spine
                    && crate::realize::geom::endpoint_on_segment(b0, b1, a0, a1))
                    || (j_is_spine
                        && crate::realize::geom::endpoint_on_segment(a0, a1, b0, b1))
            };
            if !(shared_endpoint || spine_contact) {
                return Err(ModelError::NotEmbedded(
                    format!("{:?}", c.pieces[*pi].kind),
                    format!("{:?}", c.pieces[*pj].kind),
                ));
            }
        }
    }
    Ok(())
}
