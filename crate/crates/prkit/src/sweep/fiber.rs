//! Exact fibers of the closed region {all f_k >= 0} over a rational x,
//! clipped to the working box in y.

use crate::algnum::RealAlg;
use crate::poly::{isolate_real_roots, BivarPoly};
use crate::rat::{rat_i, sign_of, Rat, RatInterval};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EndpointSrc {
    /// Root of the given curve (index into the curve list).
    Curve(usize),
    /// The fiber was clipped by the top or bottom edge of the box.
    Edge,
}

#[derive(Clone, Debug)]
pub struct Endpoint {
    pub y: RealAlg,
    pub src: EndpointSrc,
}

/// A maximal closed interval of the fiber; `lo == hi` encodes a point
/// component, which only occurs over critical x-values.
#[derive(Clone, Debug)]
pub struct FiberInterval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

#[derive(Clone, Debug)]
pub struct Fiber {
    pub t: Rat,
    pub intervals: Vec<FiberInterval>,
}

#[derive(Debug, thiserror::Error)]
pub enum FiberError {
    #[error("curve {0} vanishes identically on the line x = {1}")]
    CurveVanishesOnLine(usize, String),
    #[error("x = {0} outside the working box")]
    OutsideBox(String),
}

/// Compute the fiber at x = t: roots of every curve on the vertical line,
/// sorted, then maximal sub-intervals of [y_lo, y_hi] where every curve is
/// nonnegative.
pub fn fiber_at(
    curves: &[BivarPoly],
    t: &Rat,
    y_window: &RatInterval,
) -> Result<Fiber, FiberError> {
    // Gather tagged roots.
    struct TaggedRoot {
        y: RealAlg,
        curve: usize,
    }
    let mut roots: Vec<TaggedRoot> = Vec::new();
    for (k, f) in curves.iter().enumerate() {
        let q = f.restrict_x(t);
        if q.is_zero() {
            return Err(FiberError::CurveVanishesOnLine(k, t.to_string()));
        }
        if q.degree() == Some(0) {
            continue;
        }
        for r in isolate_real_roots(&q, Some(y_window)).unwrap_or_default() {
            roots.push(TaggedRoot { y: RealAlg::from_isolated_root(&r), curve: k });
        }
    }
    roots.sort_by(|a, b| a.y.cmp_exact(&b.y));
    // Merge equal roots (possible over critical values when two curves meet).
    let mut merged: Vec<(RealAlg, Vec<usize>)> = Vec::new();
    for r in roots {
        match merged.last_mut() {
            Some((y, ks)) if y.is_equal(&r.y) => ks.push(r.curve),
            _ => merged.push((r.y, vec![r.curve])),
        }
    }

    // Sign of the region on each gap between consecutive boundaries.
    // Boundaries: window bottom, roots..., window top.
    let mut cut_values: Vec<RealAlg> = Vec::with_capacity(merged.len() + 2);
    cut_values.push(RealAlg::exact(y_window.lo.clone()));
    for (y, _) in &merged {
        cut_values.push(y.clone());
    }
    cut_values.push(RealAlg::exact(y_window.hi.clone()));

    // A rational strictly inside each gap.
    let mut gap_positive: Vec<bool> = Vec::with_capacity(cut_values.len() - 1);
    for w in cut_values.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.is_equal(b) {
            gap_positive.push(false);
            continue;
        }
        let probe = rational_between(a, b);
        let pos = curves.iter().all(|f| sign_of(&f.eval(t, &probe)) > 0);
        gap_positive.push(pos);
    }

    // Assemble maximal positive runs into closed intervals.
    let mut intervals: Vec<FiberInterval> = Vec::new();
    let n_gaps = gap_positive.len();
    let mut g = 0usize;
    while g < n_gaps {
        if !gap_positive[g] {
            g += 1;
            continue;
        }
        let start = g;
        while g + 1 < n_gaps && gap_positive[g + 1] {
            g += 1;
        }
        let lo_idx = start; // gap start boundary index
        let hi_idx = g + 1;
        let lo = boundary_endpoint(&cut_values, &merged, lo_idx, y_window);
        let hi = boundary_endpoint(&cut_values, &merged, hi_idx, y_window);
        intervals.push(FiberInterval { lo, hi });
        g += 1;
    }

    // Point components: a root where the region is negative (or clipped) on
    // both sides but all other curves are strictly positive and every curve
    // through it vanishes with even local sign pattern. These only matter on
    // critical fibers; detect them directly.
    for (idx, (y, ks)) in merged.iter().enumerate() {
        let gap_before = gap_positive[idx];
        let gap_after = gap_positive[idx + 1];
        if gap_before || gap_after {
            continue; // already inside / endpoint of an interval
        }
        // all curves not vanishing here must be strictly positive
        let mut ok = true;
        for (k, f) in curves.iter().enumerate() {
            if ks.contains(&k) {
                continue;
            }
            let s = sign_at_alg(f, t, y);
            if s != Some(1) {
                ok = false;
                break;
            }
        }
        if ok {
            let ep = Endpoint { y: y.clone(), src: EndpointSrc::Curve(ks[0]) };
            intervals.push(FiberInterval { lo: ep.clone(), hi: ep });
        }
    }
    intervals.sort_by(|a, b| a.lo.y.cmp_exact(&b.lo.y));
    Ok(Fiber { t: t.clone(), intervals })
}

fn boundary_endpoint(
    cuts: &[RealAlg],
    merged: &[(RealAlg, Vec<usize>)],
    idx: usize,
    _w: &RatInterval,
) -> Endpoint {
    if idx == 0 || idx == cuts.len() - 1 {
        Endpoint { y: cuts[idx].clone(), src: EndpointSrc::Edge }
    } else {
        let (y, ks) = &merged[idx - 1];
        Endpoint { y: y.clone(), src: EndpointSrc::Curve(ks[0]) }
    }
}

/// Exact sign of f(t, y) for algebraic y; None only when y is irrational and
/// the value is exactly zero in disguise (cannot happen for curves with no
/// root there) or the budget is exhausted.
fn sign_at_alg(f: &BivarPoly, t: &Rat, y: &RealAlg) -> Option<i8> {
    match y {
        RealAlg::Exact(v) => Some(sign_of(&f.eval(t, v))),
        RealAlg::Boxed(_) => unreachable!("fiber endpoints are univariate roots"),
        RealAlg::Root(rep) => {
            let q = f.restrict_x(t);
            if q.is_zero() {
                return Some(0);
            }
            // exact zero test first
            if alg_root_of_uni(y, &q) {
                return Some(0);
            }
            let mut rep = rep.clone();
            for _ in 0..256 {
                let iv = RatInterval::new(rep.lo.clone(), rep.hi.clone());
                let range = q.eval_interval(&iv);
                if let Some(s) = range.sign() {
                    return Some(s);
                }
                let mid = (&rep.lo + &rep.hi) / rat_i(2);
                if q_sign_split(&mut rep, mid).is_some() {
                    // collapsed to exact
                    let v = match (&rep.lo, &rep.hi) {
                        (a, b) if a == b => a.clone(),
                        _ => unreachable!(),
                    };
                    return Some(sign_of(&q.eval(&v)));
                }
            }
            None
        }
    }
}

fn q_sign_split(rep: &mut crate::algnum::RootRep, mid: Rat) -> Option<()> {
    let sm = sign_of(&rep.poly.eval(&mid));
    if sm == 0 {
        rep.lo = mid.clone();
        rep.hi = mid;
        return Some(());
    }
    let sl = sign_of(&rep.poly.eval(&rep.lo));
    if sl == sm {
        rep.lo = mid;
    } else {
        rep.hi = mid;
    }
    None
}

fn alg_root_of_uni(y: &RealAlg, q: &crate::poly::UniPoly) -> bool {
    match y {
        RealAlg::Exact(v) => q.eval(v).is_zero(),
        RealAlg::Boxed(_) => unreachable!("fiber endpoints are univariate roots"),
        RealAlg::Root(rep) => {
            let g = rep.poly.gcd(q);
            if g.degree().unwrap_or(0) == 0 {
                return false;
            }
            let w = RatInterval::new(rep.lo.clone(), rep.hi.clone());
            let roots = isolate_real_roots(&g, Some(&w)).unwrap_or_default();
            roots
                .iter()
                .any(|r| RealAlg::from_isolated_root(r).is_equal(y))
        }
    }
}

/// A rational strictly between two distinct algebraic numbers.
pub fn rational_between(a: &RealAlg, b: &RealAlg) -> Rat {
    debug_assert!(a.cmp_exact(b) == std::cmp::Ordering::Less);
    let mut wa = a.clone();
    let mut wb = b.clone();
    loop {
        let ia = wa.interval();
        let ib = wb.interval();
        if ia.hi < ib.lo {
            return (&ia.hi + &ib.lo) / rat_i(2);
        }
        let width = {
            let w1 = ia.width();
            let w2 = ib.width();
            if w1 > w2 { w1 } else { w2 }
        };
        let half = width / rat_i(2);
        let tiny = if half.is_zero() { Rat::new(1.into(), 1_000_000.into()) } else { half };
        wa = wa.refined(&tiny);
        wb = wb.refined(&tiny);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn circle() -> BivarPoly {
        BivarPoly::from_terms([((0, 0), rat_i(1)), ((2, 0), rat_i(-1)), ((0, 2), rat_i(-1))])
    }

    fn inner_circle() -> BivarPoly {
        // x^2 + y^2 - 1/4, positive outside
        BivarPoly::from_terms([((0, 0), rat(-1, 4)), ((2, 0), rat_i(1)), ((0, 2), rat_i(1))])
    }

    fn window() -> RatInterval {
        RatInterval::new(rat_i(-2), rat_i(2))
    }

    #[test]
    fn disk_fiber_single_interval() {
        let f = fiber_at(&[circle()], &rat_i(0), &window()).unwrap();
        assert_eq!(f.intervals.len(), 1);
        let iv = &f.intervals[0];
        assert!((iv.lo.y.to_f64() + 1.0).abs() < 1e-9);
        assert!((iv.hi.y.to_f64() - 1.0).abs() < 1e-9);
        assert_eq!(iv.lo.src, EndpointSrc::Curve(0));
    }

    #[test]
    fn annulus_fiber_splits() {
        let curves = [circle(), inner_circle()];
        let f = fiber_at(&curves, &rat_i(0), &window()).unwrap();
        assert_eq!(f.intervals.len(), 2);
        assert!((f.intervals[0].lo.y.to_f64() + 1.0).abs() < 1e-9);
        assert!((f.intervals[0].hi.y.to_f64() + 0.5).abs() < 1e-9);
        assert!((f.intervals[1].lo.y.to_f64() - 0.5).abs() < 1e-9);
        assert!((f.intervals[1].hi.y.to_f64() - 1.0).abs() < 1e-9);
        // inner endpoints tagged with the inner circle
        assert_eq!(f.intervals[0].hi.src, EndpointSrc::Curve(1));
    }

    #[test]
    fn annulus_fiber_merges_past_inner_circle() {
        let curves = [circle(), inner_circle()];
        let f = fiber_at(&curves, &rat(3, 4), &window()).unwrap();
        assert_eq!(f.intervals.len(), 1);
        let hi = f.intervals[0].hi.y.to_f64();
        assert!((hi - (7.0f64).sqrt() / 4.0).abs() < 1e-9);
    }

    #[test]
    fn point_fiber_at_fold() {
        let f = fiber_at(&[circle()], &rat_i(1), &window()).unwrap();
        assert_eq!(f.intervals.len(), 1);
        assert!(f.intervals[0].lo.y.is_equal(&f.intervals[0].hi.y));
        assert_eq!(f.intervals[0].lo.y.as_exact(), Some(&rat_i(0)));
    }

    #[test]
    fn clipped_fiber_tagged_edge() {
        // region above the parabola y >= x^2 - 1, clipped by the box top
        let par = BivarPoly::from_terms([((0, 1), rat_i(1)), ((2, 0), rat_i(-1)), ((0, 0), rat_i(1))]);
        let f = fiber_at(&[par], &rat_i(0), &window()).unwrap();
        assert_eq!(f.intervals.len(), 1);
        assert_eq!(f.intervals[0].lo.src, EndpointSrc::Curve(0));
        assert_eq!(f.intervals[0].hi.src, EndpointSrc::Edge);
        assert_eq!(f.intervals[0].hi.y.as_exact(), Some(&rat_i(2)));
    }

    #[test]
    fn empty_fiber_outside_disk() {
        let f = fiber_at(&[circle()], &rat(3, 2), &window()).unwrap();
        assert!(f.intervals.is_empty());
    }
}
