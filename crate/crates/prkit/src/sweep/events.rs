//! Structural events of the sweep: folds and crossings of the arrangement
//! inside the box, plus box-edge crossings that only matter for bookkeeping
//! of unselected components. Each event carries exact local data (opening
//! side, fold kind, corner shape) derived from derivative signs at the point.

use crate::algnum::RealAlg;
use crate::poly::solve::Box2;
use crate::poly::{isolate_real_roots, jacobian_det, solve_system, BivarPoly, SolveError, Var};
use crate::rat::{sign_of, Rat, RatInterval};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FoldKind {
    /// Local x-extremum of the region: a fiber component is born or dies.
    Definite,
    /// Branching: fiber components merge or split.
    Indefinite,
    /// Degenerate vertical tangency that passes straight through
    /// (odd-order contact).
    Unclassified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Opens {
    /// Both curve arms extend to the left of the event.
    Left,
    /// Both arms extend to the right.
    Right,
    /// One arm on each side (odd-order contact or transversal branch).
    Through,
}

#[derive(Clone, Debug)]
pub enum EventData {
    Fold {
        curve: usize,
        kind: FoldKind,
        opens: Opens,
    },
    Crossing {
        curves: (usize, usize),
        /// What the corner does to the fiber of the region.
        shape: CornerShape,
        transverse: bool,
    },
    /// A curve branch crosses the top or bottom edge of the working box.
    /// Structural only; never a Poincare-Reeb vertex.
    EdgeCross { curve: usize, top: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CornerShape {
    Pass,
    Birth,
    Death,
}

#[derive(Clone, Debug)]
pub struct Event {
    pub x: RealAlg,
    pub y: RealAlg,
    pub data: EventData,
}

impl Event {
    pub fn is_structural_only(&self) -> bool {
        matches!(self.data, EventData::EdgeCross { .. })
    }

    /// Expected number of branches of `curve` trapped in the event window on
    /// the left and right near-samples.
    pub fn trapped_expectation(&self, curve: usize) -> Option<(usize, usize)> {
        match &self.data {
            EventData::Fold { curve: k, opens, .. } if *k == curve => Some(match opens {
                Opens::Left => (2, 0),
                Opens::Right => (0, 2),
                Opens::Through => (1, 1),
            }),
            EventData::Crossing { curves, .. } if curves.0 == curve || curves.1 == curve => {
                Some((1, 1))
            }
            // Edge crossings accept any branch count <= 1 on each side; the
            // matcher special-cases them.
            EventData::EdgeCross { curve: k, .. } if *k == curve => Some((1, 1)),
            _ => None,
        }
    }

    pub fn curves(&self) -> Vec<usize> {
        match &self.data {
            EventData::Fold { curve, .. } => vec![*curve],
            EventData::Crossing { curves, .. } => vec![curves.0, curves.1],
            EventData::EdgeCross { curve, .. } => vec![*curve],
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EventError {
    #[error("curve {curve}: fold classification failed near ({x:.4}, {y:.4}): {why}")]
    FoldUnresolved { curve: usize, x: f64, y: f64, why: String },
    #[error("crossing of curves {a} and {b} near ({x:.4}, {y:.4}) is non-generic: {why}")]
    CrossingDegenerate { a: usize, b: usize, x: f64, y: f64, why: String },
    #[error("system solving failed: {0}")]
    Solve(#[from] SolveError),
}

/// Exact sign of h at an algebraic point, or None when the budget runs out
/// (which for our inputs means the value is zero but both coordinates are
/// irrational, a configuration we reject upstream).
pub fn sign_at_point(h: &BivarPoly, x: &RealAlg, y: &RealAlg, budget: u32) -> Option<i8> {
    match (x, y) {
        (RealAlg::Exact(a), RealAlg::Exact(b)) => Some(sign_of(&h.eval(a, b))),
        (RealAlg::Exact(a), RealAlg::Root(_)) => {
            let q = h.restrict_x(a);
            sign_at_point_uni(&q, y, budget)
        }
        (RealAlg::Root(_), RealAlg::Exact(b)) => {
            let q = h.restrict_y(b);
            sign_at_point_uni(&q, x, budget)
        }
        _ => {
            let mut xi = x.clone();
            let mut yi = y.clone();
            for _ in 0..budget {
                let r = h.eval_interval(&xi.interval(), &yi.interval());
                if let Some(s) = r.sign() {
                    return Some(s);
                }
                let wx = xi.interval().width();
                let wy = yi.interval().width();
                let half = |w: Rat| {
                    if w.is_zero() { Rat::new(1.into(), 4.into()) } else { w / Rat::from_integer(4.into()) }
                };
                xi = xi.refined(&half(wx));
                yi = yi.refined(&half(wy));
                if xi.as_exact().is_some() || yi.as_exact().is_some() {
                    return sign_at_point(h, &xi, &yi, budget);
                }
            }
            None
        }
    }
}

/// Exact sign of a univariate polynomial at an algebraic number.
pub fn sign_at_point_uni(q: &crate::poly::UniPoly, v: &RealAlg, budget: u32) -> Option<i8> {
    if q.is_zero() {
        return Some(0);
    }
    match v {
        RealAlg::Exact(r) => Some(sign_of(&q.eval(r))),
        RealAlg::Boxed(_) => {
            // no univariate witness: exact zero test via the rational line is
            // unavailable here, fall back to interval refinement
            let mut vv = v.clone();
            for _ in 0..budget {
                let r = q.eval_interval(&vv.interval());
                if let Some(s) = r.sign() {
                    return Some(s);
                }
                let w = vv.interval().width();
                let half = if w.is_zero() { Rat::new(1.into(), 4.into()) } else { w / Rat::from_integer(4.into()) };
                vv = vv.refined(&half);
            }
            None
        }
        RealAlg::Root(rep) => {
            // exact zero test via gcd
            let g = rep.poly.gcd(q);
            if g.degree().unwrap_or(0) > 0 {
                let w = RatInterval::new(rep.lo.clone(), rep.hi.clone());
                let roots = isolate_real_roots(&g, Some(&w)).unwrap_or_default();
                if roots.iter().any(|r| RealAlg::from_isolated_root(r).is_equal(v)) {
                    return Some(0);
                }
            }
            let mut vv = v.clone();
            for _ in 0..budget {
                let r = q.eval_interval(&vv.interval());
                if let Some(s) = r.sign() {
                    return Some(s);
                }
                let w = vv.interval().width();
                let half = if w.is_zero() { Rat::new(1.into(), 4.into()) } else { w / Rat::from_integer(4.into()) };
                vv = vv.refined(&half);
                if let Some(e) = vv.as_exact() {
                    return Some(sign_of(&q.eval(e)));
                }
            }
            None
        }
    }
}

const SIGN_BUDGET: u32 = 96;

/// Degrees above this use subdivision + Krawczyk instead of resultant
/// elimination for the fold system.
pub const FOLD_RESULTANT_DEGREE_CAP: u32 = 10;

/// Fold events of one curve: solutions of f = df/dy = 0 in the box,
/// classified by the first nonvanishing y-derivative.
pub fn fold_events(curve_idx: usize, f: &BivarPoly, window: &Box2) -> Result<Vec<Event>, EventError> {
    fold_events_masked(curve_idx, f, window, &[])
}

/// Fold events with other curves' polynomials available as a mask: a
/// vertical tangency strictly inside another curve's negative region lies off
/// the region closure and cannot affect its fibers, so the search may skip
/// it. This keeps high-degree curves with excised tangencies tractable.
pub fn fold_events_masked(
    curve_idx: usize,
    f: &BivarPoly,
    window: &Box2,
    others: &[BivarPoly],
) -> Result<Vec<Event>, EventError> {
    let fy = f.derive(Var::Y);
    if fy.is_zero() {
        // f free of y: its zero set is vertical lines; every point is a
        // vertical tangency. Such curves are rejected by domain validation
        // (the projection is singular along a segment), so no events here.
        return Ok(Vec::new());
    }
    let pts = if f.total_degree().unwrap_or(0) <= FOLD_RESULTANT_DEGREE_CAP {
        solve_system(f, &fy, window)?
    } else {
        let masks: Vec<crate::interval64::IPoly64> =
            others.iter().map(crate::interval64::IPoly64::new).collect();
        let skip = |bx: &crate::rat::RatInterval, by: &crate::rat::RatInterval| -> bool {
            let ix = crate::interval64::I64::from_rat_interval(bx);
            let iy = crate::interval64::I64::from_rat_interval(by);
            masks.iter().any(|m| {
                let r = m.eval(ix, iy);
                r.hi < 0.0
            })
        };
        crate::poly::solve::solve_system_subdiv_masked(f, &fy, window, 56, 200_000, 20, &skip)?
    };
    let fx = f.derive(Var::X);
    let mut out = Vec::new();
    for p in pts {
        let approx = p.approx();
        let s_fx = sign_at_point(&fx, &p.x, &p.y, SIGN_BUDGET).ok_or_else(|| EventError::FoldUnresolved {
            curve: curve_idx,
            x: approx.0,
            y: approx.1,
            why: "sign of df/dx undecided".into(),
        })?;
        if s_fx == 0 {
            return Err(EventError::FoldUnresolved {
                curve: curve_idx,
                x: approx.0,
                y: approx.1,
                why: "singular point on curve (gradient vanishes)".into(),
            });
        }
        // First nonvanishing y-derivative of order >= 2.
        let max_order = f.degree_in(Var::Y).unwrap_or(0);
        let mut deriv = fy.clone();
        let mut order = 1u32;
        let mut contact: Option<(u32, i8)> = None;
        while order < max_order {
            deriv = deriv.derive(Var::Y);
            order += 1;
            let s = sign_at_point(&deriv, &p.x, &p.y, SIGN_BUDGET).ok_or_else(|| {
                EventError::FoldUnresolved {
                    curve: curve_idx,
                    x: approx.0,
                    y: approx.1,
                    why: format!("sign of order-{order} y-derivative undecided"),
                }
            })?;
            if s != 0 {
                contact = Some((order, s));
                break;
            }
        }
        let (order, s_c) = contact.ok_or_else(|| EventError::FoldUnresolved {
            curve: curve_idx,
            x: approx.0,
            y: approx.1,
            why: "all y-derivatives vanish (curve contains a vertical line?)".into(),
        })?;
        let (kind, opens) = if order % 2 == 0 {
            let kind = if s_c < 0 { FoldKind::Definite } else { FoldKind::Indefinite };
            // curve arms satisfy x - x0 = -(c / fx) (y - y0)^order, so the
            // arms open left iff c/fx > 0
            let opens = if s_c * s_fx > 0 { Opens::Left } else { Opens::Right };
            (kind, opens)
        } else {
            (FoldKind::Unclassified, Opens::Through)
        };
        out.push(Event { x: p.x, y: p.y, data: EventData::Fold { curve: curve_idx, kind, opens } });
    }
    Ok(out)
}

/// Crossing events of a pair of curves.
pub fn crossing_events(
    i: usize,
    j: usize,
    fi: &BivarPoly,
    fj: &BivarPoly,
    window: &Box2,
) -> Result<Vec<Event>, EventError> {
    let pts = solve_system(fi, fj, window)?;
    let fiy = fi.derive(Var::Y);
    let fjy = fj.derive(Var::Y);
    let det = jacobian_det(fi, fj);
    let mut out = Vec::new();
    for p in pts {
        let approx = p.approx();
        let fail = |why: &str| EventError::CrossingDegenerate {
            a: i,
            b: j,
            x: approx.0,
            y: approx.1,
            why: why.into(),
        };
        if !p.transverse {
            // still record it so validation can point at the witness; shape
            // is meaningless
            out.push(Event {
                x: p.x,
                y: p.y,
                data: EventData::Crossing { curves: (i, j), shape: CornerShape::Pass, transverse: false },
            });
            continue;
        }
        let s_iy = sign_at_point(&fiy, &p.x, &p.y, SIGN_BUDGET).ok_or_else(|| fail("sign of dfi/dy undecided"))?;
        let s_jy = sign_at_point(&fjy, &p.x, &p.y, SIGN_BUDGET).ok_or_else(|| fail("sign of dfj/dy undecided"))?;
        if s_iy == 0 || s_jy == 0 {
            return Err(fail("vertical tangency at a crossing (fold on crossing)"));
        }
        let shape = if s_iy == s_jy {
            CornerShape::Pass
        } else {
            let s_det = sign_at_point(&det, &p.x, &p.y, SIGN_BUDGET).ok_or_else(|| fail("Jacobian sign undecided"))?;
            if s_det == 0 {
                return Err(fail("Jacobian vanishes at certified transverse point"));
            }
            // The region quadrant contains no vertical direction; it opens
            // rightward iff the x-component of the inward direction
            // M^{-1} (1,1)^T is positive, whose sign is sign(fjy - fiy) * sign(det)
            // = s_jy * s_det, because fiy and fjy have opposite signs.
            if s_jy * s_det > 0 {
                CornerShape::Birth
            } else {
                CornerShape::Death
            }
        };
        out.push(Event {
            x: p.x,
            y: p.y,
            data: EventData::Crossing { curves: (i, j), shape, transverse: true },
        });
    }
    Ok(out)
}

/// Box-edge crossing events of one curve: real roots of f(x, y_edge) within
/// the box x-range, for both horizontal edges.
pub fn edge_events(curve_idx: usize, f: &BivarPoly, window: &Box2) -> Vec<Event> {
    let mut out = Vec::new();
    for (y_edge, top) in [(&window.y.lo, false), (&window.y.hi, true)] {
        let q = f.restrict_y(y_edge);
        if q.is_zero() || q.degree() == Some(0) {
            continue;
        }
        for r in isolate_real_roots(&q, Some(&window.x)).unwrap_or_default() {
            out.push(Event {
                x: RealAlg::from_isolated_root(&r),
                y: RealAlg::exact(y_edge.clone()),
                data: EventData::EdgeCross { curve: curve_idx, top },
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i};

    fn circle() -> BivarPoly {
        BivarPoly::from_terms([((0, 0), rat_i(1)), ((2, 0), rat_i(-1)), ((0, 2), rat_i(-1))])
    }

    fn inner_exterior() -> BivarPoly {
        BivarPoly::from_terms([((0, 0), rat(-1, 4)), ((2, 0), rat_i(1)), ((0, 2), rat_i(1))])
    }

    fn window() -> Box2 {
        Box2::new(rat_i(-2), rat_i(2), rat_i(-2), rat_i(2))
    }

    #[test]
    fn disk_folds_definite() {
        let evs = fold_events(0, &circle(), &window()).unwrap();
        assert_eq!(evs.len(), 2);
        // (-1, 0): birth (opens right), (1, 0): death (opens left)
        match &evs[0].data {
            EventData::Fold { kind, opens, .. } => {
                assert_eq!(*kind, FoldKind::Definite);
                assert_eq!(*opens, Opens::Right);
            }
            _ => panic!(),
        }
        match &evs[1].data {
            EventData::Fold { kind, opens, .. } => {
                assert_eq!(*kind, FoldKind::Definite);
                assert_eq!(*opens, Opens::Left);
            }
            _ => panic!(),
        }
        assert_eq!(evs[0].x.as_exact(), Some(&rat_i(-1)));
        assert_eq!(evs[1].x.as_exact(), Some(&rat_i(1)));
    }

    #[test]
    fn exterior_circle_folds_indefinite() {
        let evs = fold_events(1, &inner_exterior(), &window()).unwrap();
        assert_eq!(evs.len(), 2);
        for e in &evs {
            match &e.data {
                EventData::Fold { kind, .. } => assert_eq!(*kind, FoldKind::Indefinite),
                _ => panic!(),
            }
        }
        // left extreme of the inner circle opens right (arms to the right)
        match &evs[0].data {
            EventData::Fold { opens, .. } => assert_eq!(*opens, Opens::Right),
            _ => panic!(),
        }
    }

    #[test]
    fn cubic_inflection_fold_passes_through() {
        // x = y^3: vertical inflection at the origin
        let f = BivarPoly::from_terms([((1, 0), rat_i(1)), ((0, 3), rat_i(-1))]);
        let evs = fold_events(0, &f, &window()).unwrap();
        assert_eq!(evs.len(), 1);
        match &evs[0].data {
            EventData::Fold { kind, opens, .. } => {
                assert_eq!(*kind, FoldKind::Unclassified);
                assert_eq!(*opens, Opens::Through);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn lens_crossings_pass() {
        let f1 = circle();
        let f2 = BivarPoly::from_terms([
            ((0, 0), rat_i(0)),
            ((1, 0), rat_i(2)),
            ((2, 0), rat_i(-1)),
            ((0, 2), rat_i(-1)),
        ]); // 1 - (x-1)^2 - y^2 = 2x - x^2 - y^2
        let evs = crossing_events(0, 1, &f1, &f2, &window()).unwrap();
        assert_eq!(evs.len(), 2);
        for e in &evs {
            match &e.data {
                EventData::Crossing { shape, transverse, .. } => {
                    assert_eq!(*shape, CornerShape::Pass);
                    assert!(transverse);
                }
                _ => panic!(),
            }
            assert_eq!(e.x.as_exact(), Some(&rat(1, 2)));
        }
    }

    #[test]
    fn sideways_corners_detected() {
        // circles of radius 5 through the origin with centers (+-3, +-4):
        // mixed dy signs at the crossing, so the region quadrant opens
        // sideways; centers to the right give a birth corner, centers to the
        // left a death corner
        let mk = |cx: i64, cy: i64| {
            BivarPoly::from_terms([
                ((0, 0), rat_i(25 - cx * cx - cy * cy)),
                ((1, 0), rat_i(2 * cx)),
                ((2, 0), rat_i(-1)),
                ((0, 1), rat_i(2 * cy)),
                ((0, 2), rat_i(-1)),
            ])
        };
        let w = Box2::new(rat_i(-1), rat_i(1), rat_i(-1), rat_i(1));
        let birth = crossing_events(0, 1, &mk(3, 4), &mk(3, -4), &w).unwrap();
        assert_eq!(birth.len(), 1);
        match &birth[0].data {
            EventData::Crossing { shape, .. } => assert_eq!(*shape, CornerShape::Birth),
            _ => panic!(),
        }
        let death = crossing_events(0, 1, &mk(-3, 4), &mk(-3, -4), &w).unwrap();
        assert_eq!(death.len(), 1);
        match &death[0].data {
            EventData::Crossing { shape, .. } => assert_eq!(*shape, CornerShape::Death),
            _ => panic!(),
        }
    }

    #[test]
    fn edge_events_found() {
        // unit circle with a box whose top edge cuts it at y = 1/2:
        // crossings at x = +-sqrt(3)/2
        let w = Box2::new(rat_i(-2), rat_i(2), rat_i(-2), rat(1, 2));
        let evs = edge_events(0, &circle(), &w);
        assert_eq!(evs.len(), 2);
        for e in &evs {
            match e.data {
                EventData::EdgeCross { top, .. } => assert!(top),
                _ => panic!(),
            }
        }
    }
}
