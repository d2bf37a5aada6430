//! Sweep of a validated region over its critical x-values, producing the
//! Poincaré-Reeb digraph of the connected component selected by a basepoint.
//!
//! The sweep never uses floating point: slab fibers are exact univariate
//! root isolations at rational samples, and matching across a critical value
//! is certified by counting curve branches trapped in small windows around
//! each event, with univariate no-crossing checks on the window edges.

pub mod events;
pub mod fiber;
pub mod raster;

use crate::algnum::RealAlg;
use crate::poly::solve::Box2;
use crate::poly::BivarPoly;
use crate::rat::{rat_i, sign_of, Rat, RatInterval};
use events::{crossing_events, edge_events, Event, EventData, EventError};
use fiber::{fiber_at, EndpointSrc, Fiber, FiberError};
use num_traits::Zero;
use std::collections::BTreeMap;

const MATCH_ATTEMPTS: u32 = 24;

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Event(#[from] EventError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error("two structural events coincide or cannot be separated near x~{x:.5}, y~{y:.5}; non-generic configuration rejected")]
    CoincidentEvents { x: f64, y: f64 },
    #[error("matching at critical value x~{x:.5} stayed ambiguous after {attempts} refinement attempts: {why}")]
    MatchingAmbiguous { x: f64, attempts: u32, why: String },
    #[error("critical value x~{x:.5} lies on the box x-boundary; enlarge the working box")]
    CriticalOnBoxEdge { x: f64 },
    #[error("a structural event lies on the box y-boundary; enlarge the working box")]
    EventOnBoxEdge,
    #[error("basepoint ({0}, {1}) is not strictly inside the region")]
    BasepointOutside(String, String),
    #[error("the selected component touches the working box boundary; the domain is not strictly inside the box")]
    ComponentTouchesBox,
}

/// A critical x-value with its events and matching outcome.
#[derive(Debug)]
pub struct Critical {
    pub x: RealAlg,
    pub event_idxs: Vec<usize>,
    pub components: Vec<LocalComponent>,
}

/// One connected component of the critical fiber, described through the
/// adjacent slab intervals and the events it contains.
#[derive(Debug, Clone)]
pub struct LocalComponent {
    pub left_intervals: Vec<usize>,
    pub right_intervals: Vec<usize>,
    /// Fold/crossing events (indices into the global event list).
    pub real_events: Vec<usize>,
    pub edge_events: Vec<usize>,
}

#[derive(Debug)]
pub struct Slab {
    pub sample: Rat,
    pub fiber: Fiber,
}

/// Vertex of the Poincaré-Reeb digraph.
#[derive(Debug, Clone)]
pub struct PRVertex {
    pub value: RealAlg,
    /// Structural points in the fiber class of this vertex.
    pub provenance: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PREdge {
    pub src: usize,
    pub dst: usize,
    /// Number of slabs the edge spans (provenance of its extent).
    pub span: usize,
}

#[derive(Debug, Clone, Default)]
pub struct PRGraph {
    pub vertices: Vec<PRVertex>,
    pub edges: Vec<PREdge>,
}

/// Complete sweep analysis of a multi-curve region.
#[derive(Debug)]
pub struct SweepAnalysis {
    pub curves: Vec<BivarPoly>,
    pub window: Box2,
    pub events: Vec<Event>,
    pub criticals: Vec<Critical>,
    pub slabs: Vec<Slab>,
    /// Marking of (slab, interval) pairs belonging to the selected component.
    pub marked_intervals: Vec<Vec<bool>>,
    /// Events on the closure of the selected component.
    pub marked_events: Vec<bool>,
    pub graph: PRGraph,
}

impl SweepAnalysis {
    /// Run the full sweep for the component containing `basepoint`,
    /// discovering fold and crossing events with the default strategy.
    pub fn analyze(
        curves: &[BivarPoly],
        window: &Box2,
        basepoint: &(Rat, Rat),
    ) -> Result<SweepAnalysis, SweepError> {
        let mut real_events: Vec<Event> = Vec::new();
        for (k, f) in curves.iter().enumerate() {
            let others: Vec<BivarPoly> = curves
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, g)| g.clone())
                .collect();
            real_events.extend(events::fold_events_masked(k, f, window, &others)?);
        }
        for i in 0..curves.len() {
            for j in i + 1..curves.len() {
                real_events.extend(crossing_events(i, j, &curves[i], &curves[j], window)?);
            }
        }
        SweepAnalysis::analyze_with_events(curves, window, basepoint, real_events)
    }

    /// Run the sweep with the fold/crossing events already known (they must
    /// be complete for the window); box-edge events are added here.
    pub fn analyze_with_events(
        curves: &[BivarPoly],
        window: &Box2,
        basepoint: &(Rat, Rat),
        real_events: Vec<Event>,
    ) -> Result<SweepAnalysis, SweepError> {
        let mut all_events = real_events;
        for (k, f) in curves.iter().enumerate() {
            all_events.extend(edge_events(k, f, window));
        }
        // 2. group by critical x-value
        let groups = group_by_x(&all_events)?;
        // refined representative per critical, pairwise disjoint
        let mut reps: Vec<RealAlg> = groups.iter().map(|g| all_events[g[0]].x.clone()).collect();
        separate_all(&mut reps)?;
        let x_lo = RealAlg::exact(window.x.lo.clone());
        let x_hi = RealAlg::exact(window.x.hi.clone());
        for rep in reps.iter_mut() {
            if rep.cmp_exact(&x_lo) != std::cmp::Ordering::Greater
                || rep.cmp_exact(&x_hi) != std::cmp::Ordering::Less
            {
                return Err(SweepError::CriticalOnBoxEdge { x: rep.to_f64() });
            }
            // shrink the bracket until it is strictly inside the box
            loop {
                let iv = rep.interval();
                if iv.lo > window.x.lo && iv.hi < window.x.hi {
                    break;
                }
                let w = iv.width();
                let target = if w.is_zero() { break } else { w / rat_i(4) };
                *rep = rep.refined(&target);
            }
        }

        // 3. slabs and canonical fibers
        let bounds = slab_bounds(&reps, &window.x);
        let mut slabs = Vec::with_capacity(bounds.len());
        for (lo, hi) in &bounds {
            let sample = (lo + hi) / rat_i(2);
            let fiber = fiber_at(curves, &sample, &window.y)?;
            slabs.push(Slab { sample, fiber });
        }

        // 4. match across each critical value
        let mut criticals = Vec::with_capacity(groups.len());
        for (ci, group) in groups.iter().enumerate() {
            let comp = match_critical(curves, window, &all_events, group, &reps[ci], ci, &bounds, &slabs)?;
            criticals.push(Critical { x: reps[ci].clone(), event_idxs: group.clone(), components: comp });
        }

        // 5. marking via union-find over (slab, interval) and events
        let (marked_intervals, marked_events) =
            mark_component(curves, &slabs, &criticals, &all_events, window, basepoint)?;

        // 6. boundedness of the marked component
        for (si, marks) in marked_intervals.iter().enumerate() {
            for (ii, m) in marks.iter().enumerate() {
                if !m {
                    continue;
                }
                let iv = &slabs[si].fiber.intervals[ii];
                if iv.lo.src == EndpointSrc::Edge || iv.hi.src == EndpointSrc::Edge {
                    return Err(SweepError::ComponentTouchesBox);
                }
            }
        }
        if let Some(first) = marked_intervals.first() {
            if first.iter().any(|m| *m) {
                return Err(SweepError::ComponentTouchesBox);
            }
        }
        if let Some(last) = marked_intervals.last() {
            if last.iter().any(|m| *m) {
                return Err(SweepError::ComponentTouchesBox);
            }
        }

        // 7. graph assembly
        let graph = assemble_graph(&criticals, &slabs, &all_events, &marked_intervals, &marked_events)?;

        Ok(SweepAnalysis {
            curves: curves.to_vec(),
            window: window.clone(),
            events: all_events,
            criticals,
            slabs,
            marked_intervals,
            marked_events,
            graph,
        })
    }

    /// Critical x-values of the selected component, ascending.
    pub fn critical_values(&self) -> Vec<RealAlg> {
        self.criticals
            .iter()
            .filter(|c| {
                c.event_idxs
                    .iter()
                    .any(|&e| self.marked_events[e] && !self.events[e].is_structural_only())
            })
            .map(|c| c.x.clone())
            .collect()
    }
}

/// Group event indices by equal x-coordinate; error when fold and crossing
/// events collide at the same point.
fn group_by_x(events: &[Event]) -> Result<Vec<Vec<usize>>, SweepError> {
    let mut order: Vec<usize> = (0..events.len()).collect();
    order.sort_by(|&a, &b| events[a].x.cmp_exact(&events[b].x));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for idx in order {
        match groups.last_mut() {
            Some(g) if events[g[0]].x.is_equal(&events[idx].x) => g.push(idx),
            _ => groups.push(vec![idx]),
        }
    }
    // Within a group, events at the same (x, y) point are a non-generic
    // coincidence unless they are the same kind of record.
    for g in &groups {
        for (ai, &a) in g.iter().enumerate() {
            for &b in &g[ai + 1..] {
                if events[a].y.is_equal(&events[b].y) {
                    let same_edge = matches!(
                        (&events[a].data, &events[b].data),
                        (EventData::EdgeCross { .. }, EventData::EdgeCross { .. })
                    );
                    if !same_edge {
                        return Err(SweepError::CoincidentEvents {
                            x: events[a].x.to_f64(),
                            y: events[a].y.to_f64(),
                        });
                    }
                }
            }
        }
    }
    Ok(groups)
}

/// Refine a sorted list of distinct algebraic numbers until their intervals
/// are pairwise disjoint.
fn separate_all(vals: &mut [RealAlg]) -> Result<(), SweepError> {
    loop {
        let mut overlapping = false;
        for i in 1..vals.len() {
            let a = vals[i - 1].interval();
            let b = vals[i].interval();
            if a.hi >= b.lo {
                overlapping = true;
                let w = {
                    let wa = a.width();
                    let wb = b.width();
                    let m = if wa > wb { wa } else { wb };
                    if m.is_zero() { Rat::new(1.into(), 1024.into()) } else { m / rat_i(4) }
                };
                vals[i - 1] = vals[i - 1].refined(&w);
                vals[i] = vals[i].refined(&w);
            }
        }
        if !overlapping {
            return Ok(());
        }
    }
}

/// Open gaps between consecutive criticals (and the box edges): the slabs.
fn slab_bounds(reps: &[RealAlg], xr: &RatInterval) -> Vec<(Rat, Rat)> {
    let mut bounds = Vec::with_capacity(reps.len() + 1);
    let mut prev = xr.lo.clone();
    for r in reps {
        let iv = r.interval();
        bounds.push((prev.clone(), iv.lo.clone()));
        prev = iv.hi.clone();
    }
    bounds.push((prev, xr.hi.clone()));
    bounds
}

/// Per-event window data used while matching one critical value.
struct EventWindow {
    event_idx: usize,
    lo: Rat,
    hi: Rat,
}

/// Match fibers across one critical value; returns the local components.
#[allow(clippy::too_many_arguments)]
fn match_critical(
    curves: &[BivarPoly],
    window: &Box2,
    events: &[Event],
    group: &[usize],
    rep: &RealAlg,
    ci: usize,
    bounds: &[(Rat, Rat)],
    slabs: &[Slab],
) -> Result<Vec<LocalComponent>, SweepError> {
    let mut rep = rep.clone();
    // Sort events by y and refine until disjoint.
    let mut ys: Vec<(usize, RealAlg)> = group.iter().map(|&e| (e, events[e].y.clone())).collect();
    ys.sort_by(|a, b| a.1.cmp_exact(&b.1));
    {
        let mut vals: Vec<RealAlg> = ys.iter().map(|p| p.1.clone()).collect();
        separate_all(&mut vals)?;
        for (slot, v) in ys.iter_mut().zip(vals) {
            slot.1 = v;
        }
    }
    // reject events on the horizontal box boundary unless they are edge events
    for (e, y) in &ys {
        let on_edge = y.is_equal(&RealAlg::exact(window.y.lo.clone()))
            || y.is_equal(&RealAlg::exact(window.y.hi.clone()));
        if on_edge && !events[*e].is_structural_only() {
            return Err(SweepError::EventOnBoxEdge);
        }
    }

    let left_gap_lo = bounds[ci].0.clone();
    let right_gap_hi = bounds[ci + 1].1.clone();

    // Windows and samples tighten independently: count mismatches and foreign
    // intrusions call for smaller windows, while crossings of a window edge
    // inside the strip call for samples much closer to the critical value
    // (fold arms exit a window of height h at distance ~h^2).
    let mut window_level: u32 = 0;
    let mut sample_level: u32 = 0;
    let mut why = String::from("initial");
    for _attempt in 0..MATCH_ATTEMPTS {
        rep = rep.refined(&gap_fraction(&rep, sample_level));
        let iv = rep.interval();
        let t_l = sample_near(&left_gap_lo, &iv.lo, sample_level, true);
        let t_r = sample_near(&iv.hi, &right_gap_hi, sample_level, false);
        let windows = match build_windows(&ys, events, window_level, &window.y) {
            Ok(w) => w,
            Err(e) => {
                why = e;
                window_level += 1;
                continue;
            }
        };
        match try_match(curves, window, events, &windows, &t_l, &t_r, ci, slabs) {
            Ok(components) => return Ok(components),
            Err(MatchFailure::TightenSamples(e)) => {
                // samples close in fast; windows also shrink since an
                // obstructing crossing can sit exactly at the critical value
                why = e;
                sample_level += 2;
                window_level += 1;
            }
            Err(MatchFailure::TightenWindows(e)) => {
                why = e;
                window_level += 1;
                sample_level += 1;
            }
        }
    }
    Err(SweepError::MatchingAmbiguous { x: rep.to_f64(), attempts: MATCH_ATTEMPTS, why })
}

enum MatchFailure {
    TightenWindows(String),
    TightenSamples(String),
}

fn gap_fraction(rep: &RealAlg, level: u32) -> Rat {
    let w = rep.interval().width();
    let base = if w.is_zero() { Rat::new(1.into(), 1024.into()) } else { w };
    base / rat_i(1i64 << (level.min(40) + 1))
}

fn sample_near(lo: &Rat, hi: &Rat, level: u32, from_right: bool) -> Rat {
    // a rational in (lo, hi); approaches the `from_right` end at rate 16^level
    let width = hi - lo;
    let sh = 4 * level.min(30) + 1;
    let frac = Rat::new(1.into(), (1i128 << sh).into());
    if from_right {
        hi - width * frac
    } else {
        lo + width * frac
    }
}

/// Build disjoint event windows at this critical, shrinking with attempts.
fn build_windows(
    ys: &[(usize, RealAlg)],
    events: &[Event],
    attempt: u32,
    y_range: &RatInterval,
) -> Result<Vec<EventWindow>, String> {
    let shrink = rat_i(1i64 << (attempt.min(40) + 2));
    let mut out = Vec::with_capacity(ys.len());
    for (pos, (e, y)) in ys.iter().enumerate() {
        let yi = y.refined(&(width_or(y, y_range) / &shrink)).interval();
        // pad: a fraction of the gap to neighbours
        let gap_below = if pos == 0 {
            &yi.lo - &y_range.lo
        } else {
            let prev = ys[pos - 1].1.interval();
            &yi.lo - &prev.hi
        };
        let gap_above = if pos + 1 == ys.len() {
            &y_range.hi - &yi.hi
        } else {
            let next = ys[pos + 1].1.interval();
            &next.lo - &yi.hi
        };
        let edge_side = match &events[*e].data {
            EventData::EdgeCross { top, .. } => Some(*top),
            _ => None,
        };
        let need_below = edge_side != Some(false);
        let need_above = edge_side != Some(true);
        if (need_below && !gap_below.is_positive_strict())
            || (need_above && !gap_above.is_positive_strict())
        {
            return Err("event windows overlap".into());
        }
        let pad_below = gap_below / &shrink;
        let pad_above = gap_above / &shrink;
        let (lo, hi) = match edge_side {
            Some(true) => (&yi.lo - pad_below, y_range.hi.clone()),
            Some(false) => (y_range.lo.clone(), &yi.hi + pad_above),
            None => (&yi.lo - pad_below, &yi.hi + pad_above),
        };
        out.push(EventWindow { event_idx: *e, lo, hi });
    }
    // ensure disjoint
    for w in out.windows(2) {
        if w[0].hi >= w[1].lo {
            return Err("event windows overlap after padding".into());
        }
    }
    Ok(out)
}

fn width_or(y: &RealAlg, range: &RatInterval) -> Rat {
    let w = y.interval().width();
    if w.is_zero() { range.width() } else { w }
}

trait StrictPositive {
    fn is_positive_strict(&self) -> bool;
}

impl StrictPositive for Rat {
    fn is_positive_strict(&self) -> bool {
        sign_of(self) > 0
    }
}

/// One matching attempt with fixed samples and windows.
#[allow(clippy::too_many_arguments)]
fn try_match(
    curves: &[BivarPoly],
    window: &Box2,
    events: &[Event],
    windows: &[EventWindow],
    t_l: &Rat,
    t_r: &Rat,
    ci: usize,
    slabs: &[Slab],
) -> Result<Vec<LocalComponent>, MatchFailure> {
    // Window integrity checks.
    for w in windows {
        let ev = &events[w.event_idx];
        let is_edge_event = ev.is_structural_only();
        for (k, f) in curves.iter().enumerate() {
            // no curve may cross the horizontal window edges inside the strip
            for y_edge in [&w.lo, &w.hi] {
                if is_edge_event && (y_edge == &window.y.lo || y_edge == &window.y.hi) {
                    continue; // the box edge itself is crossed by the event curve
                }
                let q = f.restrict_y(y_edge);
                if q.is_zero() {
                    return Err(MatchFailure::TightenWindows(format!("curve {k} vanishes on a window edge")));
                }
                if !q.eval(t_l).is_zero() && !q.eval(t_r).is_zero() {
                    let strip = RatInterval::new(t_l.clone(), t_r.clone());
                    let roots = crate::poly::isolate_real_roots(&q, Some(&strip)).unwrap_or_default();
                    if !roots.is_empty() {
                        return Err(MatchFailure::TightenSamples(format!("curve {k} crosses a window edge inside the strip")));
                    }
                } else {
                    return Err(MatchFailure::TightenSamples("sample sits on a curve".into()));
                }
            }
            // trapped-count expectations
            let expected = ev.trapped_expectation(k);
            let count = |t: &Rat| -> Result<usize, String> {
                let q = curves[k].restrict_x(t);
                if q.is_zero() {
                    return Err(format!("curve {k} vanishes on the sample line"));
                }
                let wiv = RatInterval::new(w.lo.clone(), w.hi.clone());
                Ok(crate::poly::isolate_real_roots(&q, Some(&wiv))
                    .unwrap_or_default()
                    .len())
            };
            let cl = count(t_l).map_err(MatchFailure::TightenSamples)?;
            let cr = count(t_r).map_err(MatchFailure::TightenSamples)?;
            match expected {
                Some((el, er)) => {
                    if is_edge_event {
                        // branch crosses the box edge; accept any small count
                        if cl > 1 || cr > 1 {
                            return Err(MatchFailure::TightenWindows(format!("curve {k}: too many branches at box-edge event")));
                        }
                    } else if (cl, cr) != (el, er) {
                        return Err(MatchFailure::TightenSamples(format!(
                            "curve {k}: trapped branches ({cl},{cr}) != expected ({el},{er})"
                        )));
                    }
                }
                None => {
                    if cl != 0 || cr != 0 {
                        return Err(MatchFailure::TightenWindows(format!("foreign curve {k} intrudes into an event window")));
                    }
                }
            }
        }
    }

    // Fibers at the near samples.
    let fl = fiber_at(curves, t_l, &window.y).map_err(|e| MatchFailure::TightenSamples(e.to_string()))?;
    let fr = fiber_at(curves, t_r, &window.y).map_err(|e| MatchFailure::TightenSamples(e.to_string()))?;
    if fl.intervals.len() != slabs[ci].fiber.intervals.len() {
        return Err(MatchFailure::TightenSamples("left near-sample fiber disagrees with slab fiber".into()));
    }
    if fr.intervals.len() != slabs[ci + 1].fiber.intervals.len() {
        return Err(MatchFailure::TightenSamples("right near-sample fiber disagrees with slab fiber".into()));
    }

    // Which intervals intersect which windows.
    let mut uf = UnionFind::new(fl.intervals.len() + fr.intervals.len() + windows.len());
    let widx = |s: usize| fl.intervals.len() + fr.intervals.len() + s;
    let mut left_plain: Vec<usize> = Vec::new();
    let mut right_plain: Vec<usize> = Vec::new();
    let mut left_window_touch: Vec<Vec<usize>> = vec![Vec::new(); windows.len()];
    let mut right_window_touch: Vec<Vec<usize>> = vec![Vec::new(); windows.len()];

    for (side, fib, plain, touch, base) in [
        (0usize, &fl, &mut left_plain, &mut left_window_touch, 0usize),
        (1usize, &fr, &mut right_plain, &mut right_window_touch, fl.intervals.len()),
    ] {
        let _ = side;
        for (ii, iv) in fib.intervals.iter().enumerate() {
            let mut touched = false;
            for (s, w) in windows.iter().enumerate() {
                match interval_intersects_window(iv, w) {
                    Some(true) => {
                        touch[s].push(ii);
                        uf.join(base + ii, widx(s));
                        touched = true;
                    }
                    Some(false) => {}
                    None => return Err(MatchFailure::TightenWindows("interval endpoint sits on a window boundary".into())),
                }
            }
            if !touched {
                plain.push(ii);
            }
        }
    }

    // Plain intervals pass through in order; their counts below each window
    // must agree on both sides.
    if left_plain.len() != right_plain.len() {
        return Err(MatchFailure::TightenSamples(format!(
            "plain interval counts differ: {} vs {}",
            left_plain.len(),
            right_plain.len()
        )));
    }
    for (s, w) in windows.iter().enumerate() {
        let below_l = left_plain
            .iter()
            .filter(|&&ii| interval_below(&fl.intervals[ii], w))
            .count();
        let below_r = right_plain
            .iter()
            .filter(|&&ii| interval_below(&fr.intervals[ii], w))
            .count();
        if below_l != below_r {
            return Err(MatchFailure::TightenSamples(format!("plain interval interleaving differs at window {s}")));
        }
    }
    for (l, r) in left_plain.iter().zip(&right_plain) {
        uf.join(*l, fl.intervals.len() + *r);
    }

    // Collect components.
    let mut comp_map: BTreeMap<usize, LocalComponent> = BTreeMap::new();
    for ii in 0..fl.intervals.len() {
        let root = uf.find(ii);
        comp_map.entry(root).or_default().left_intervals.push(ii);
    }
    for ii in 0..fr.intervals.len() {
        let root = uf.find(fl.intervals.len() + ii);
        comp_map.entry(root).or_default().right_intervals.push(ii);
    }
    for (s, w) in windows.iter().enumerate() {
        let root = uf.find(widx(s));
        let entry = comp_map.entry(root).or_default();
        if events[w.event_idx].is_structural_only() {
            entry.edge_events.push(w.event_idx);
        } else {
            entry.real_events.push(w.event_idx);
        }
    }
    // Sanity: a component without events must be a plain 1-1 pass.
    for c in comp_map.values() {
        if c.real_events.is_empty() && c.edge_events.is_empty() {
            if c.left_intervals.len() != 1 || c.right_intervals.len() != 1 {
                return Err(MatchFailure::TightenSamples("event-free component is not a simple pass".into()));
            }
        }
    }
    Ok(comp_map.into_values().collect())
}

impl Default for LocalComponent {
    fn default() -> Self {
        LocalComponent {
            left_intervals: Vec::new(),
            right_intervals: Vec::new(),
            real_events: Vec::new(),
            edge_events: Vec::new(),
        }
    }
}

/// Decide whether a fiber interval intersects a window; None when an endpoint
/// cannot be separated from the window boundary.
fn interval_intersects_window(iv: &fiber::FiberInterval, w: &EventWindow) -> Option<bool> {
    let wlo = RealAlg::exact(w.lo.clone());
    let whi = RealAlg::exact(w.hi.clone());
    // disjoint: iv.hi < w.lo or iv.lo > w.hi
    let hi_vs_wlo = cmp_with_budget(&iv.hi.y, &wlo)?;
    if hi_vs_wlo == std::cmp::Ordering::Less {
        return Some(false);
    }
    let lo_vs_whi = cmp_with_budget(&iv.lo.y, &whi)?;
    if lo_vs_whi == std::cmp::Ordering::Greater {
        return Some(false);
    }
    if hi_vs_wlo == std::cmp::Ordering::Equal || lo_vs_whi == std::cmp::Ordering::Equal {
        return None; // endpoint exactly on the boundary: regenerate windows
    }
    Some(true)
}

fn cmp_with_budget(a: &RealAlg, b: &RealAlg) -> Option<std::cmp::Ordering> {
    // RealAlg comparison is total and terminating.
    Some(a.cmp_exact(b))
}

fn interval_below(iv: &fiber::FiberInterval, w: &EventWindow) -> bool {
    iv.hi.y.cmp_exact(&RealAlg::exact(w.lo.clone())) == std::cmp::Ordering::Less
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn join(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Propagate membership from the basepoint through slab intervals and
/// critical components.
fn mark_component(
    curves: &[BivarPoly],
    slabs: &[Slab],
    criticals: &[Critical],
    events: &[Event],
    window: &Box2,
    basepoint: &(Rat, Rat),
) -> Result<(Vec<Vec<bool>>, Vec<bool>), SweepError> {
    // global union-find over (slab, interval) + events
    let mut offsets = Vec::with_capacity(slabs.len());
    let mut total = 0usize;
    for s in slabs {
        offsets.push(total);
        total += s.fiber.intervals.len();
    }
    let ev_offset = total;
    total += events.len();
    let mut uf = UnionFind::new(total);
    for (ci, c) in criticals.iter().enumerate() {
        for comp in &c.components {
            // pick an anchor
            let anchor: Option<usize> = comp
                .left_intervals
                .first()
                .map(|&ii| offsets[ci] + ii)
                .or_else(|| comp.right_intervals.first().map(|&ii| offsets[ci + 1] + ii))
                .or_else(|| comp.real_events.first().map(|&e| ev_offset + e))
                .or_else(|| comp.edge_events.first().map(|&e| ev_offset + e));
            let anchor = match anchor {
                Some(a) => a,
                None => continue,
            };
            for &ii in &comp.left_intervals {
                uf.join(anchor, offsets[ci] + ii);
            }
            for &ii in &comp.right_intervals {
                uf.join(anchor, offsets[ci + 1] + ii);
            }
            for &e in comp.real_events.iter().chain(&comp.edge_events) {
                uf.join(anchor, ev_offset + e);
            }
        }
    }

    // locate the basepoint
    let (bx, by) = basepoint;
    if !window.x.contains(bx) || !window.y.contains(by) {
        return Err(SweepError::BasepointOutside(bx.to_string(), by.to_string()));
    }
    for f in curves {
        if sign_of(&f.eval(bx, by)) <= 0 {
            return Err(SweepError::BasepointOutside(bx.to_string(), by.to_string()));
        }
    }
    let slab_idx = locate_slab(criticals, bx, window)?;
    let (slab_idx, seed_x) = match slab_idx {
        SlabLocation::Inside(si) => (si, bx.clone()),
        SlabLocation::OnCritical(ci) => {
            // nudge into an adjacent slab while staying in the region and in
            // the same component (certified by a positive horizontal segment)
            nudge_off_critical(curves, criticals, ci, bx, by, window)?
        }
    };
    // fiber at the seed x; find the interval containing by
    let seed_fiber = fiber_at(curves, &seed_x, &window.y)?;
    if seed_fiber.intervals.len() != slabs[slab_idx].fiber.intervals.len() {
        return Err(SweepError::MatchingAmbiguous {
            x: crate::rat::rat_to_f64(&seed_x),
            attempts: 0,
            why: "seed fiber disagrees with slab fiber".into(),
        });
    }
    let by_alg = RealAlg::exact(by.clone());
    let mut seed_interval = None;
    for (ii, iv) in seed_fiber.intervals.iter().enumerate() {
        let lo_cmp = iv.lo.y.cmp_exact(&by_alg);
        let hi_cmp = iv.hi.y.cmp_exact(&by_alg);
        if lo_cmp != std::cmp::Ordering::Greater && hi_cmp != std::cmp::Ordering::Less {
            seed_interval = Some(ii);
            break;
        }
    }
    let seed_interval = seed_interval.ok_or_else(|| {
        SweepError::BasepointOutside(bx.to_string(), by.to_string())
    })?;

    let seed_node = offsets[slab_idx] + seed_interval;
    let seed_root = uf.find(seed_node);
    let mut marked_intervals: Vec<Vec<bool>> = Vec::with_capacity(slabs.len());
    for (si, s) in slabs.iter().enumerate() {
        let marks = (0..s.fiber.intervals.len())
            .map(|ii| uf.find(offsets[si] + ii) == seed_root)
            .collect();
        marked_intervals.push(marks);
    }
    let marked_events = (0..events.len())
        .map(|e| uf.find(ev_offset + e) == seed_root)
        .collect();
    Ok((marked_intervals, marked_events))
}

enum SlabLocation {
    Inside(usize),
    OnCritical(usize),
}

fn locate_slab(criticals: &[Critical], bx: &Rat, window: &Box2) -> Result<SlabLocation, SweepError> {
    let bx_alg = RealAlg::exact(bx.clone());
    for (ci, c) in criticals.iter().enumerate() {
        match bx_alg.cmp_exact(&c.x) {
            std::cmp::Ordering::Less => return Ok(SlabLocation::Inside(ci)),
            std::cmp::Ordering::Equal => return Ok(SlabLocation::OnCritical(ci)),
            std::cmp::Ordering::Greater => continue,
        }
    }
    let _ = window;
    Ok(SlabLocation::Inside(criticals.len()))
}

/// Move the seed x off a critical value into an adjacent open slab, keeping
/// the horizontal segment from the basepoint inside the open region.
fn nudge_off_critical(
    curves: &[BivarPoly],
    criticals: &[Critical],
    ci: usize,
    bx: &Rat,
    by: &Rat,
    window: &Box2,
) -> Result<(usize, Rat), SweepError> {
    // try rightward into slab ci+1, then leftward into slab ci
    for (to_right, slab) in [(true, ci + 1), (false, ci)] {
        let mut step = {
            // quarter of the gap to the neighbouring critical
            let neighbor = if to_right {
                criticals.get(ci + 1).map(|c| c.x.interval().lo.clone()).unwrap_or(window.x.hi.clone())
            } else {
                criticals
                    .get(ci.wrapping_sub(1))
                    .filter(|_| ci > 0)
                    .map(|c| c.x.interval().hi.clone())
                    .unwrap_or(window.x.lo.clone())
            };
            let gap = if to_right { &neighbor - bx } else { bx - &neighbor };
            gap / rat_i(4)
        };
        for _ in 0..64 {
            if step.is_zero() {
                break;
            }
            let t = if to_right { bx + &step } else { bx - &step };
            // certify the whole horizontal segment stays in the open region
            let seg_x = if to_right {
                RatInterval::new(bx.clone(), t.clone())
            } else {
                RatInterval::new(t.clone(), bx.clone())
            };
            let seg_y = RatInterval::point(by.clone());
            let ok = curves.iter().all(|f| {
                f.eval_interval(&seg_x, &seg_y).sign() == Some(1)
            });
            if ok {
                return Ok((slab, t));
            }
            step = step / rat_i(2);
        }
    }
    Err(SweepError::BasepointOutside(bx.to_string(), by.to_string()))
}

/// Build the Poincaré-Reeb digraph of the marked component.
fn assemble_graph(
    criticals: &[Critical],
    slabs: &[Slab],
    events: &[Event],
    marked_intervals: &[Vec<bool>],
    marked_events: &[bool],
) -> Result<PRGraph, SweepError> {
    // vertex per (critical, component) that is marked and has real events
    let mut vertices: Vec<PRVertex> = Vec::new();
    // map (ci, comp_idx) -> vertex index
    let mut vertex_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (ci, c) in criticals.iter().enumerate() {
        for (k, comp) in c.components.iter().enumerate() {
            let comp_marked = comp
                .left_intervals
                .iter()
                .map(|&ii| marked_intervals[ci][ii])
                .chain(comp.right_intervals.iter().map(|&ii| marked_intervals[ci + 1][ii]))
                .chain(comp.real_events.iter().map(|&e| marked_events[e]))
                .any(|m| m);
            if comp_marked && !comp.real_events.is_empty() {
                let mut prov = comp.real_events.clone();
                prov.sort_by(|&a, &b| events[a].y.cmp_exact(&events[b].y));
                vertex_of.insert((ci, k), vertices.len());
                vertices.push(PRVertex { value: c.x.clone(), provenance: prov });
            }
        }
    }

    // walk tokens through slabs
    #[derive(Clone)]
    struct Token {
        src: Option<usize>,
        start_slab: usize,
    }
    let mut edges: Vec<PREdge> = Vec::new();
    // active tokens per interval of the current slab
    let mut active: Vec<Option<Token>> = slabs[0]
        .fiber
        .intervals
        .iter()
        .map(|_| Some(Token { src: None, start_slab: 0 }))
        .collect();

    for (ci, c) in criticals.iter().enumerate() {
        let mut next_active: Vec<Option<Token>> =
            vec![None; slabs[ci + 1].fiber.intervals.len()];
        for (k, comp) in c.components.iter().enumerate() {
            let vtx = vertex_of.get(&(ci, k)).copied();
            match vtx {
                Some(v) => {
                    // close incoming marked tokens
                    for &li in &comp.left_intervals {
                        if !marked_intervals[ci][li] {
                            continue;
                        }
                        if let Some(tok) = active[li].take() {
                            if let Some(src) = tok.src {
                                edges.push(PREdge { src, dst: v, span: ci + 1 - tok.start_slab });
                            }
                            // tokens with no src on a marked component would be
                            // a component entering from the box edge; already
                            // rejected by the boundedness checks
                        }
                    }
                    for &ri in &comp.right_intervals {
                        if !marked_intervals[ci + 1][ri] {
                            continue;
                        }
                        next_active[ri] = Some(Token { src: Some(v), start_slab: ci + 1 });
                    }
                }
                None => {
                    // pass-through or unmarked: forward tokens in order
                    let mut lt: Vec<usize> = comp.left_intervals.clone();
                    let mut rt: Vec<usize> = comp.right_intervals.clone();
                    lt.sort_unstable();
                    rt.sort_unstable();
                    for (l, r) in lt.iter().zip(rt.iter()) {
                        next_active[*r] = active[*l].take();
                    }
                    // unbalanced unmarked components just drop/spawn tokens
                    for r in rt.iter().skip(lt.len()) {
                        next_active[*r] = Some(Token { src: None, start_slab: ci + 1 });
                    }
                }
            }
        }
        active = next_active;
    }

    // sort edges deterministically
    edges.sort_by(|a, b| (a.src, a.dst, a.span).cmp(&(b.src, b.dst, b.span)));
    Ok(PRGraph { vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn circle() -> BivarPoly {
        BivarPoly::from_terms([((0, 0), rat_i(1)), ((2, 0), rat_i(-1)), ((0, 2), rat_i(-1))])
    }

    fn inner_exterior() -> BivarPoly {
        BivarPoly::from_terms([((0, 0), rat(-1, 4)), ((2, 0), rat_i(1)), ((0, 2), rat_i(1))])
    }

    fn shifted_circle() -> BivarPoly {
        // 1 - (x-1)^2 - y^2
        BivarPoly::from_terms([((1, 0), rat_i(2)), ((2, 0), rat_i(-1)), ((0, 2), rat_i(-1))])
    }

    fn window() -> Box2 {
        Box2::new(rat_i(-3), rat_i(3), rat_i(-3), rat_i(3))
    }

    #[test]
    fn disk_graph() {
        let an = SweepAnalysis::analyze(&[circle()], &window(), &(rat_i(0), rat_i(0))).unwrap();
        assert_eq!(an.graph.vertices.len(), 2);
        assert_eq!(an.graph.edges.len(), 1);
        let vals: Vec<f64> = an.graph.vertices.iter().map(|v| v.value.to_f64()).collect();
        assert!((vals[0] + 1.0).abs() < 1e-9);
        assert!((vals[1] - 1.0).abs() < 1e-9);
        let e = &an.graph.edges[0];
        assert!(an.graph.vertices[e.src].value.cmp_exact(&an.graph.vertices[e.dst].value) == std::cmp::Ordering::Less);
        let crit = an.critical_values();
        assert_eq!(crit.len(), 2);
        assert_eq!(crit[0].as_exact(), Some(&rat_i(-1)));
        assert_eq!(crit[1].as_exact(), Some(&rat_i(1)));
    }

    #[test]
    fn annulus_graph() {
        let an = SweepAnalysis::analyze(
            &[circle(), inner_exterior()],
            &window(),
            &(rat(3, 4), rat_i(0)),
        )
        .unwrap();
        assert_eq!(an.graph.vertices.len(), 4);
        assert_eq!(an.graph.edges.len(), 4);
        let vals: Vec<f64> = an.graph.vertices.iter().map(|v| v.value.to_f64()).collect();
        assert!((vals[0] + 1.0).abs() < 1e-9);
        assert!((vals[1] + 0.5).abs() < 1e-9);
        assert!((vals[2] - 0.5).abs() < 1e-9);
        assert!((vals[3] - 1.0).abs() < 1e-9);
        // parallel pair in the middle
        let mid: Vec<_> = an.graph.edges.iter().filter(|e| e.src == 1 && e.dst == 2).collect();
        assert_eq!(mid.len(), 2);
    }

    #[test]
    fn lens_graph() {
        let an = SweepAnalysis::analyze(
            &[circle(), shifted_circle()],
            &window(),
            &(rat(1, 2), rat_i(0)),
        )
        .unwrap();
        // vertices at x = 0, 1/2, 1 on a directed path; middle vertex carries
        // both crossings
        assert_eq!(an.graph.vertices.len(), 3);
        assert_eq!(an.graph.edges.len(), 2);
        assert_eq!(an.graph.vertices[1].value.as_exact(), Some(&rat(1, 2)));
        assert_eq!(an.graph.vertices[1].provenance.len(), 2);
        let crit = an.critical_values();
        assert_eq!(crit.len(), 3);
        assert_eq!(crit[0].as_exact(), Some(&rat_i(0)));
        assert_eq!(crit[2].as_exact(), Some(&rat_i(1)));
    }

    #[test]
    fn basepoint_on_critical_value_is_handled() {
        // lens basepoint at x = 1/2 exactly, which is a critical value
        let an = SweepAnalysis::analyze(
            &[circle(), shifted_circle()],
            &window(),
            &(rat(1, 2), rat(1, 4)),
        )
        .unwrap();
        assert_eq!(an.graph.vertices.len(), 3);
    }

    #[test]
    fn far_component_not_marked() {
        // disk plus a far-away disk: only the basepoint one contributes
        let far = BivarPoly::from_terms([
            ((0, 0), rat(-399, 100)), // 1 - (x-... use (x-20)^2 style: keep inside a big box
            ((1, 0), rat_i(0)),
        ]);
        let _ = far;
        let f1 = circle();
        // circle centered (10, 0) radius 1: 1 - (x-10)^2 - y^2
        let f2 = BivarPoly::from_terms([
            ((0, 0), rat_i(-99)),
            ((1, 0), rat_i(20)),
            ((2, 0), rat_i(-1)),
            ((0, 2), rat_i(-1)),
        ]);
        // region: f1 >= 0 OR... both curves listed: region = {f1 >= 0, f2 >= 0}
        // is empty (disks disjoint), so use only marking semantics: the
        // basepoint component of {f1 >= 0} with the far disk as a separate
        // curve is empty; instead sweep f2 alone with basepoint in f1's disk
        // must fail.
        let w = Box2::new(rat_i(-2), rat_i(12), rat_i(-2), rat_i(2));
        let err = SweepAnalysis::analyze(&[f1, f2], &w, &(rat_i(0), rat_i(0)));
        assert!(err.is_err()); // basepoint not strictly positive on f2
    }

    #[test]
    fn unbounded_component_rejected() {
        // region above a parabola is unbounded: component touches the box
        let par = BivarPoly::from_terms([((0, 1), rat_i(1)), ((2, 0), rat_i(-1))]); // y - x^2
        let err = SweepAnalysis::analyze(&[par], &window(), &(rat_i(0), rat_i(1)));
        assert!(matches!(err, Err(SweepError::ComponentTouchesBox)));
    }
}
