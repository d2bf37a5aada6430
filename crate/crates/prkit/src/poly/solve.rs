//! Certified solving of two bivariate equations f = g = 0 inside a box.
//!
//! Candidates come from resultant elimination in both directions. Each
//! candidate is then either excluded by interval arithmetic, resolved exactly
//! through a rational coordinate (substitute and take univariate gcds), or
//! certified by a Krawczyk contraction, which also proves transversality.
//! Candidates that survive but never certify are reported as unresolved
//! rather than silently dropped.

use super::bivar::{BivarPoly, Var};
use super::resultant::{gcd_bivar, resultant_x, resultant_y};
use super::sturm::{isolate_real_roots, IsolatedRoot};
use super::unipoly::UniPoly;
use crate::algnum::RealAlg;
use crate::rat::{rat_i, simplest_in_interval, Rat, RatInterval};
use num_traits::{One, Zero};
use thiserror::Error;

/// Rational rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Box2 {
    pub x: RatInterval,
    pub y: RatInterval,
}

impl Box2 {
    pub fn new(x_lo: Rat, x_hi: Rat, y_lo: Rat, y_hi: Rat) -> Self {
        Box2 { x: RatInterval::new(x_lo, x_hi), y: RatInterval::new(y_lo, y_hi) }
    }
}

/// A certified common zero of the system.
#[derive(Clone, Debug)]
pub struct SystemPoint {
    pub x: RealAlg,
    pub y: RealAlg,
    /// Jacobian of (f, g) is nonsingular at the point.
    pub transverse: bool,
}

impl SystemPoint {
    pub fn approx(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("system has a positive-dimensional common locus (shared factor of degree {0})")]
    PositiveDimensional(u32),
    #[error("zero polynomial in system")]
    ZeroPolynomial,
    #[error(
        "candidate near ({x_approx:.6}, {y_approx:.6}) could not be certified or excluded at depth {depth}; \
         the configuration is too degenerate for this solver"
    )]
    Unresolved { x_approx: f64, y_approx: f64, depth: u32 },
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub max_depth: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_depth: 64 }
    }
}

/// All real common zeros of f = g = 0 in `window`, each flagged transverse or
/// not. Requires the common zero locus to be zero-dimensional.
pub fn solve_system(
    f: &BivarPoly,
    g: &BivarPoly,
    window: &Box2,
) -> Result<Vec<SystemPoint>, SolveError> {
    solve_system_opts(f, g, window, &SolveOptions::default())
}

pub fn solve_system_opts(
    f: &BivarPoly,
    g: &BivarPoly,
    window: &Box2,
    opts: &SolveOptions,
) -> Result<Vec<SystemPoint>, SolveError> {
    if f.is_zero() || g.is_zero() {
        return Err(SolveError::ZeroPolynomial);
    }
    let shared = gcd_bivar(f, g);
    if shared.total_degree().unwrap_or(0) > 0 {
        return Err(SolveError::PositiveDimensional(shared.total_degree().unwrap()));
    }

    let rx = resultant_y(f, g);
    let ry = resultant_x(f, g);
    // Coprime polynomials have nonzero resultants in both directions unless
    // one is constant in that variable; a zero resultant with constant gcd
    // cannot happen, but a constant resultant legitimately means no finite
    // candidates in that direction.
    let xs = roots_in(&rx, &window.x);
    let ys = roots_in(&ry, &window.y);

    let mut points: Vec<SystemPoint> = Vec::new();

    // Pass 1: rational x candidates resolve completely by substitution.
    let mut exact_xs: Vec<Rat> = Vec::new();
    let mut open_xs: Vec<IsolatedRoot> = Vec::new();
    for r in xs {
        match try_exact(&r) {
            Some(v) => exact_xs.push(v),
            None => open_xs.push(r),
        }
    }
    for xi in &exact_xs {
        points.extend(solve_on_vertical_line(f, g, xi, &window.y));
    }

    // Pass 2: rational y candidates, excluding points already found.
    let mut open_ys: Vec<IsolatedRoot> = Vec::new();
    for r in ys {
        match try_exact(&r) {
            Some(eta) => {
                for p in solve_on_horizontal_line(f, g, &eta, &window.x) {
                    let dup = points.iter().any(|q| q.x.is_equal(&p.x) && q.y.is_equal(&p.y));
                    if !dup {
                        points.push(p);
                    }
                }
            }
            None => open_ys.push(r),
        }
    }

    // Pass 3: both coordinates irrational; pair surviving candidate boxes and
    // certify by Krawczyk.
    let fx = f.derive(Var::X);
    let fy = f.derive(Var::Y);
    let gx = g.derive(Var::X);
    let gy = g.derive(Var::Y);
    for xr in &open_xs {
        for yr in &open_ys {
            let mut bx = xr.clone();
            let mut by = yr.clone();
            let mut certified = None;
            let mut excluded = false;
            for _depth in 0..opts.max_depth {
                let ix = bx.interval.clone();
                let iy = by.interval.clone();
                let fv = f.eval_interval(&ix, &iy);
                let gv = g.eval_interval(&ix, &iy);
                if !fv.contains_zero() || !gv.contains_zero() {
                    excluded = true;
                    break;
                }
                if let Some(kb) = krawczyk_certify(f, g, &fx, &fy, &gx, &gy, &ix, &iy) {
                    certified = Some(kb);
                    break;
                }
                bx.bisect_once();
                by.bisect_once();
                if bx.is_exact() || by.is_exact() {
                    // fell onto a rational coordinate after all; the exact
                    // passes above would have caught a true zero here only if
                    // the rational probe matched, so resolve directly
                    break;
                }
            }
            if excluded {
                continue;
            }
            if let Some(()) = certified {
                points.push(SystemPoint {
                    x: RealAlg::from_isolated_root(&bx),
                    y: RealAlg::from_isolated_root(&by),
                    transverse: true,
                });
                continue;
            }
            // Late exact collapse: hand off to the line solvers.
            if let Some(v) = bx.exact.clone() {
                for p in solve_on_vertical_line(f, g, &v, &window.y) {
                    if p.y.interval().intersects(&by.interval) {
                        let dup = points.iter().any(|q| q.x.is_equal(&p.x) && q.y.is_equal(&p.y));
                        if !dup {
                            points.push(p);
                        }
                    }
                }
                continue;
            }
            if let Some(v) = by.exact.clone() {
                for p in solve_on_horizontal_line(f, g, &v, &window.x) {
                    if p.x.interval().intersects(&bx.interval) {
                        let dup = points.iter().any(|q| q.x.is_equal(&p.x) && q.y.is_equal(&p.y));
                        if !dup {
                            points.push(p);
                        }
                    }
                }
                continue;
            }
            // Neither excluded nor certified: degenerate (e.g. an irrational
            // tangency). Refuse to guess.
            return Err(SolveError::Unresolved {
                x_approx: crate::rat::rat_to_f64(&bx.interval.mid()),
                y_approx: crate::rat::rat_to_f64(&by.interval.mid()),
                depth: opts.max_depth,
            });
        }
    }

    // Clip to the window (line solvers already respect it; Krawczyk boxes are
    // inside candidate intervals which were windowed).
    points.retain(|p| in_window(p, window));
    points.sort_by(|a, b| a.x.cmp_exact(&b.x).then_with(|| a.y.cmp_exact(&b.y)));
    Ok(points)
}

fn in_window(p: &SystemPoint, w: &Box2) -> bool {
    alg_in_interval(&p.x, &w.x) && alg_in_interval(&p.y, &w.y)
}

fn alg_in_interval(v: &RealAlg, iv: &RatInterval) -> bool {
    match v {
        RealAlg::Exact(q) => iv.contains(q),
        _ => {
            let lo = RealAlg::exact(iv.lo.clone());
            let hi = RealAlg::exact(iv.hi.clone());
            v.cmp_exact(&lo) != std::cmp::Ordering::Less && v.cmp_exact(&hi) != std::cmp::Ordering::Greater
        }
    }
}

fn roots_in(p: &UniPoly, iv: &RatInterval) -> Vec<IsolatedRoot> {
    if p.is_zero() {
        return Vec::new();
    }
    isolate_real_roots(p, Some(iv)).unwrap_or_default()
}

/// Probe an isolated root for exact rationality, refining between probes so
/// that rational roots with moderate denominators are always recognized.
fn try_exact(r: &IsolatedRoot) -> Option<Rat> {
    let mut r = r.clone();
    for _ in 0..64 {
        if let Some(v) = &r.exact {
            return Some(v.clone());
        }
        let cand = simplest_in_interval(&r.interval.lo, &r.interval.hi);
        if r.witness.eval(&cand).is_zero() {
            return Some(cand);
        }
        r.bisect_once();
    }
    None
}

/// Exact solution of the system restricted to a rational vertical line.
fn solve_on_vertical_line(f: &BivarPoly, g: &BivarPoly, x: &Rat, y_window: &RatInterval) -> Vec<SystemPoint> {
    let fu = f.restrict_x(x);
    let gu = g.restrict_x(x);
    let h = if fu.is_zero() {
        gu.clone()
    } else if gu.is_zero() {
        fu.clone()
    } else {
        fu.gcd(&gu)
    };
    if h.is_zero() || h.degree() == Some(0) {
        return Vec::new();
    }
    let jac = jacobian_det(f, g);
    let jac_u = jac.restrict_x(x);
    let mut out = Vec::new();
    for root in isolate_real_roots(&h, Some(y_window)).unwrap_or_default() {
        let y = RealAlg::from_isolated_root(&root);
        let transverse = match &y {
            RealAlg::Exact(v) => !jac_u.eval(v).is_zero(),
            RealAlg::Boxed(_) => unreachable!("univariate roots are never boxed"),
            RealAlg::Root(_) => {
                // y is a root of the squarefree witness; det vanishes at y iff
                // gcd(witness, jac_u) has y as a root
                if jac_u.is_zero() {
                    false
                } else {
                    let shared = root.witness.gcd(&jac_u);
                    if shared.degree() == Some(0) {
                        true
                    } else {
                        !alg_is_root_of(&y, &shared)
                    }
                }
            }
        };
        out.push(SystemPoint { x: RealAlg::exact(x.clone()), y, transverse });
    }
    out
}

fn solve_on_horizontal_line(f: &BivarPoly, g: &BivarPoly, y: &Rat, x_window: &RatInterval) -> Vec<SystemPoint> {
    let fs = f.swap_vars();
    let gs = g.swap_vars();
    solve_on_vertical_line(&fs, &gs, y, x_window)
        .into_iter()
        .map(|p| SystemPoint { x: p.y, y: p.x, transverse: p.transverse })
        .collect()
}

/// Does the algebraic number satisfy q = 0 exactly?
fn alg_is_root_of(v: &RealAlg, q: &UniPoly) -> bool {
    match v {
        RealAlg::Exact(r) => q.eval(r).is_zero(),
        RealAlg::Boxed(_) => unreachable!("univariate root test on a boxed coordinate"),
        RealAlg::Root(rep) => {
            // v is a root of q iff gcd(witness, q) has a root equal to v
            let g = rep.poly.gcd(q);
            if g.degree().unwrap_or(0) == 0 {
                return false;
            }
            let gv = RealAlg::from_rootrep_window(&g, &rep.lo, &rep.hi);
            gv.map_or(false, |cand| cand.is_equal(v))
        }
    }
}

impl RealAlg {
    /// The unique root of `g` inside `[lo, hi]`, if there is exactly one.
    fn from_rootrep_window(g: &UniPoly, lo: &Rat, hi: &Rat) -> Option<RealAlg> {
        let w = RatInterval::new(lo.clone(), hi.clone());
        let roots = isolate_real_roots(g, Some(&w)).ok()?;
        if roots.len() == 1 {
            Some(RealAlg::from_isolated_root(&roots[0]))
        } else {
            None
        }
    }
}

pub fn jacobian_det(f: &BivarPoly, g: &BivarPoly) -> BivarPoly {
    let fx = f.derive(Var::X);
    let fy = f.derive(Var::Y);
    let gx = g.derive(Var::X);
    let gy = g.derive(Var::Y);
    fx.mul(&gy).sub(&fy.mul(&gx))
}

/// One Krawczyk test on the box. Returns Some(()) when the operator maps the
/// box strictly into itself, certifying a unique zero with nonsingular
/// Jacobian throughout.
#[allow(clippy::too_many_arguments)]
fn krawczyk_certify(
    f: &BivarPoly,
    g: &BivarPoly,
    fx: &BivarPoly,
    fy: &BivarPoly,
    gx: &BivarPoly,
    gy: &BivarPoly,
    ix: &RatInterval,
    iy: &RatInterval,
) -> Option<()> {
    let mx = ix.mid();
    let my = iy.mid();
    // midpoint Jacobian inverse
    let a = fx.eval(&mx, &my);
    let b = fy.eval(&mx, &my);
    let c = gx.eval(&mx, &my);
    let d = gy.eval(&mx, &my);
    let det = &a * &d - &b * &c;
    if det.is_zero() {
        return None;
    }
    let inv = [
        &d / &det,
        -(&b / &det),
        -(&c / &det),
        &a / &det,
    ];
    // F(m)
    let fm = f.eval(&mx, &my);
    let gm = g.eval(&mx, &my);
    // interval Jacobian over the box
    let jfx = fx.eval_interval(ix, iy);
    let jfy = fy.eval_interval(ix, iy);
    let jgx = gx.eval_interval(ix, iy);
    let jgy = gy.eval_interval(ix, iy);
    // M = I - Y * J(X)
    let one = RatInterval::point(Rat::one());
    let zero = RatInterval::point(Rat::zero());
    let m00 = one.sub(&jfx.scale(&inv[0]).add(&jgx.scale(&inv[1])));
    let m01 = zero.sub(&jfy.scale(&inv[0]).add(&jgy.scale(&inv[1])));
    let m10 = zero.sub(&jfx.scale(&inv[2]).add(&jgx.scale(&inv[3])));
    let m11 = one.sub(&jfy.scale(&inv[2]).add(&jgy.scale(&inv[3])));
    // K = m - Y F(m) + M (X - m)
    let dx = ix.sub(&RatInterval::point(mx.clone()));
    let dy = iy.sub(&RatInterval::point(my.clone()));
    let kx = RatInterval::point(&mx - (&inv[0] * &fm + &inv[1] * &gm))
        .add(&m00.mul(&dx))
        .add(&m01.mul(&dy));
    let ky = RatInterval::point(&my - (&inv[2] * &fm + &inv[3] * &gm))
        .add(&m10.mul(&dx))
        .add(&m11.mul(&dy));
    let strictly_inside = kx.lo > ix.lo && kx.hi < ix.hi && ky.lo > iy.lo && ky.hi < iy.hi;
    if strictly_inside {
        Some(())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i;
    use crate::rat::rat;

    fn circle(cx: i64, cy: i64, r2: (i64, i64)) -> BivarPoly {
        // r2 - (x-cx)^2 - (y-cy)^2 as rational r2 = num/den
        let r = rat(r2.0, r2.1);
        let mut p = BivarPoly::zero();
        p.add_term(0, 0, r);
        p.add_term(2, 0, rat_i(-1));
        p.add_term(1, 0, rat_i(2 * cx));
        p.add_term(0, 0, rat_i(-cx * cx));
        p.add_term(0, 2, rat_i(-1));
        p.add_term(0, 1, rat_i(2 * cy));
        p.add_term(0, 0, rat_i(-cy * cy));
        p
    }

    fn whole_plane() -> Box2 {
        Box2::new(rat_i(-2), rat_i(2), rat_i(-2), rat_i(2))
    }

    #[test]
    fn two_unit_circles_cross_transversally() {
        // centers (0,0) and (1,0): crossings at (1/2, +-sqrt(3)/2), x = 1/2
        // from subtracting the equations by hand
        let f = circle(0, 0, (1, 1));
        let g = circle(1, 0, (1, 1));
        let pts = solve_system(&f, &g, &whole_plane()).unwrap();
        assert_eq!(pts.len(), 2);
        for p in &pts {
            assert!(p.transverse);
            assert_eq!(p.x.as_exact(), Some(&rat(1, 2)));
        }
        let y0 = pts[0].y.to_f64();
        let y1 = pts[1].y.to_f64();
        assert!((y0 + 0.8660254).abs() < 1e-5);
        assert!((y1 - 0.8660254).abs() < 1e-5);
    }

    #[test]
    fn disjoint_circles_no_solutions() {
        let f = circle(0, 0, (1, 1));
        let g = circle(3, 0, (1, 1));
        let w = Box2::new(rat_i(-5), rat_i(5), rat_i(-5), rat_i(5));
        let pts = solve_system(&f, &g, &w).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn internally_tangent_circles_flagged_nontransverse() {
        // unit circle and radius-1/2 circle centered (1/2, 0): tangent at
        // (1, 0) where the gradients are parallel
        let f = circle(0, 0, (1, 1));
        let g = circle(0, 0, (1, 4)).translate(&rat(-1, 2), &rat_i(0));
        let pts = solve_system(&f, &g, &whole_plane()).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(!pts[0].transverse);
        assert_eq!(pts[0].x.as_exact(), Some(&rat_i(1)));
        assert_eq!(pts[0].y.as_exact(), Some(&rat_i(0)));
    }

    #[test]
    fn shared_component_detected() {
        let f = circle(0, 0, (1, 1));
        let line = BivarPoly::from_terms([((1, 0), rat_i(1)), ((0, 1), rat_i(1))]);
        let f2 = f.mul(&line);
        let g2 = line.mul(&BivarPoly::from_terms([((0, 1), rat_i(1)), ((0, 0), rat_i(3))]));
        let err = solve_system(&f2, &g2, &whole_plane());
        assert!(matches!(err, Err(SolveError::PositiveDimensional(_))));
    }

    #[test]
    fn fold_system_of_circle() {
        // f = 1 - x^2 - y^2, f_y = -2y: folds at (+-1, 0)
        let f = circle(0, 0, (1, 1));
        let fy = f.derive(Var::Y);
        let pts = solve_system(&f, &fy, &whole_plane()).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].x.as_exact(), Some(&rat_i(-1)));
        assert_eq!(pts[1].x.as_exact(), Some(&rat_i(1)));
        assert!(pts.iter().all(|p| p.transverse));
        assert!(pts.iter().all(|p| p.y.as_exact() == Some(&rat_i(0))));
    }

    #[test]
    fn irrational_transverse_crossing_certifies() {
        // circle and the hyperbola-ish curve y - x^2 + 2 has crossings with
        // irrational coordinates; use circle radius sqrt(3): x^2+y^2=3 and
        // parabola y = x^2 - 2 => x^2 = y + 2, y^2 + y - 1 = 0:
        // y = (-1 + sqrt(5))/2 (other root gives x^2 > 0 too)
        let f = BivarPoly::from_terms([
            ((0, 0), rat_i(3)),
            ((2, 0), rat_i(-1)),
            ((0, 2), rat_i(-1)),
        ]);
        let g = BivarPoly::from_terms([
            ((0, 1), rat_i(1)),
            ((2, 0), rat_i(-1)),
            ((0, 0), rat_i(2)),
        ]);
        let w = Box2::new(rat_i(-3), rat_i(3), rat_i(-3), rat_i(3));
        let pts = solve_system(&f, &g, &w).unwrap();
        // y^2 + y - 1 = 0 gives y in {(-1+sqrt5)/2 ~ 0.618, (-1-sqrt5)/2 ~ -1.618}
        // x^2 = y + 2 > 0 in both cases: 4 points total
        assert_eq!(pts.len(), 4);
        for p in &pts {
            assert!(p.transverse);
            let (x, y) = p.approx();
            assert!((x * x + y * y - 3.0).abs() < 1e-6);
            assert!((y - (x * x - 2.0)).abs() < 1e-6);
        }
    }
}

// ---------------------------------------------------------------------------
// Subdivision route: exclusion by sound f64 intervals, certification by
// Krawczyk contraction. Complete for systems whose real zeros in the window
// are all nondegenerate; degenerate zeros exhaust the depth and error out.
// Produces boxed coordinates (no univariate witness), so it suits curves of
// high degree where resultant elimination would be disproportionate.
// ---------------------------------------------------------------------------

use crate::algnum::{Axis, BoxedCoord, KrawczykPoint, krawczyk_certifies};
use crate::interval64::{I64, IPoly64};
use std::sync::Arc;

pub fn solve_system_subdiv(
    f: &BivarPoly,
    g: &BivarPoly,
    window: &Box2,
    max_depth: u32,
) -> Result<Vec<SystemPoint>, SolveError> {
    solve_system_subdiv_budgeted(f, g, window, max_depth, 200_000, 20)
}

pub fn solve_system_subdiv_budgeted(
    f: &BivarPoly,
    g: &BivarPoly,
    window: &Box2,
    max_depth: u32,
    max_cells: u64,
    time_limit_secs: u64,
) -> Result<Vec<SystemPoint>, SolveError> {
    solve_system_subdiv_masked(f, g, window, max_depth, max_cells, time_limit_secs, &|_, _| false)
}

/// Masked variant: cells for which `skip` returns true are discarded without
/// further search. Used to ignore zeros that are provably outside the region
/// of interest (for example vertical tangencies strictly inside an excised
/// conic, which cannot affect the region's fibers).
#[allow(clippy::too_many_arguments)]
pub fn solve_system_subdiv_masked(
    f: &BivarPoly,
    g: &BivarPoly,
    window: &Box2,
    max_depth: u32,
    _max_cells: u64,
    time_limit_secs: u64,
    _skip: &dyn Fn(&RatInterval, &RatInterval) -> bool,
) -> Result<Vec<SystemPoint>, SolveError> {
    if f.is_zero() || g.is_zero() {
        return Err(SolveError::ZeroPolynomial);
    }
    let _deadline = std::time::Instant::now() + std::time::Duration::from_secs(time_limit_secs);
    let mut exact_budget = 64u32;
    let f64s = [IPoly64::new(f), IPoly64::new(g)];
    let kraw = crate::interval64::Krawczyk64::new(f, g);
    let fx = f.derive(Var::X);
    let fy = f.derive(Var::Y);
    let gx = g.derive(Var::X);
    let gy = g.derive(Var::Y);
    let mut found: Vec<(RatInterval, RatInterval)> = Vec::new();
    let mut stats = (0u64, 0u64, 0u64); // cells, exact_evals, kraw_calls
    let mut stack: Vec<(RatInterval, RatInterval, u32)> =
        vec![(window.x.clone(), window.y.clone(), 0)];
    while let Some((bx, by, depth)) = stack.pop() {
        stats.0 += 1;
        let ix = I64::from_rat_interval(&bx);
        let iy = I64::from_rat_interval(&by);
        if f64s.iter().any(|p| p.excludes_zero(ix, iy)) {
            continue;
        }
        // exact-interval fallback exclusion when f64 is too coarse
        // try to certify on a slightly inflated box so zeros on cell borders
        // are still caught; the fast f64 test decides almost always, with the
        // exact rational test as a deep-cell fallback
        let infl_x = inflate(&bx, window);
        let infl_y = inflate(&by, window);
        stats.2 += 1;
        let exact_try = depth > 20 && exact_budget > 0 && {
            exact_budget -= 1;
            true
        };
        if kraw.certifies(&infl_x, &infl_y)
            || (exact_try && krawczyk_certifies(f, g, &fx, &fy, &gx, &gy, &infl_x, &infl_y))
        {
            found.push((infl_x, infl_y));
            continue;
        }
        // Newton-polish from the cell midpoint and try a centered box, which
        // certifies much earlier than a grid-aligned cell when the zero sits
        // near a cell corner.
        if depth >= 6 {
            if let Some((zx, zy)) = newton_polish(&kraw, &bx, &by) {
                let r = {
                    let w = if bx.width() >= by.width() { bx.width() } else { by.width() };
                    w
                };
                let cx = crate::rat::rat_from_f64_with_denom(zx, 1 << 30);
                let cy = crate::rat::rat_from_f64_with_denom(zy, 1 << 30);
                let cand_x = RatInterval::new(&cx - &r, &cx + &r);
                let cand_y = RatInterval::new(&cy - &r, &cy + &r);
                let fresh = !found
                    .iter()
                    .any(|(ax, ay)| ax.intersects(&cand_x) && ay.intersects(&cand_y));
                if fresh
                    && window.x.contains(&cx)
                    && window.y.contains(&cy)
                    && kraw.certifies(&cand_x, &cand_y)
                {
                    found.push((cand_x, cand_y));
                    // the certified box may cover this whole cell; if not,
                    // keep subdividing the remainder
                }
            }
        }
        if depth >= max_depth {
            return Err(SolveError::Unresolved {
                x_approx: crate::rat::rat_to_f64(&bx.mid()),
                y_approx: crate::rat::rat_to_f64(&by.mid()),
                depth,
            });
        }
        // split the wider side
        if bx.width() >= by.width() {
            let m = bx.mid();
            stack.push((RatInterval::new(bx.lo.clone(), m.clone()), by.clone(), depth + 1));
            stack.push((RatInterval::new(m, bx.hi.clone()), by, depth + 1));
        } else {
            let m = by.mid();
            stack.push((bx.clone(), RatInterval::new(by.lo.clone(), m.clone()), depth + 1));
            stack.push((bx, RatInterval::new(m, by.hi.clone()), depth + 1));
        }
    }
    // dedupe: certified boxes found from neighbouring cells may describe the
    // same zero; keep one representative per overlapping cluster
    found.sort_by(|a, b| a.0.lo.cmp(&b.0.lo).then(a.1.lo.cmp(&b.1.lo)));
    let mut reps: Vec<(RatInterval, RatInterval)> = Vec::new();
    'next: for cand in found {
        for r in &reps {
            if r.0.intersects(&cand.0) && r.1.intersects(&cand.1) {
                continue 'next;
            }
        }
        reps.push(cand);
    }
    if std::env::var("PRKIT_DEBUG").is_ok() {
        eprintln!("subdiv stats: cells={} exact_evals={} kraw={}", stats.0, stats.1, stats.2);
    }
    let mut out = Vec::new();
    for (bx, by) in reps {
        let t0 = std::time::Instant::now();
        let kp = Arc::new(KrawczykPoint::new(f.clone(), g.clone(), bx, by));
        let kp = kp.refine_to(&Rat::new(1.into(), 1_048_576.into()));
        if std::env::var("PRKIT_DEBUG").is_ok() {
            eprintln!("  refine_to took {:?}", t0.elapsed());
        }
        out.push(SystemPoint {
            x: RealAlg::Boxed(BoxedCoord { axis: Axis::X, point: kp.clone() }),
            y: RealAlg::Boxed(BoxedCoord { axis: Axis::Y, point: kp }),
            transverse: true,
        });
    }
    out.sort_by(|a, b| a.x.cmp_exact(&b.x).then_with(|| a.y.cmp_exact(&b.y)));
    Ok(out)
}

/// Plain f64 Newton iteration from the cell midpoint; returns a converged
/// approximate zero near the cell, or None.
fn newton_polish(kraw: &crate::interval64::Krawczyk64, bx: &RatInterval, by: &RatInterval) -> Option<(f64, f64)> {
    let mut x = crate::rat::rat_to_f64(&bx.mid());
    let mut y = crate::rat::rat_to_f64(&by.mid());
    let w = crate::rat::rat_to_f64(&bx.width()).max(crate::rat::rat_to_f64(&by.width()));
    let x0 = x;
    let y0 = y;
    for _ in 0..16 {
        let p = |ip: &crate::interval64::IPoly64| {
            let v = ip.eval(I64::point(x), I64::point(y));
            (v.lo + v.hi) / 2.0
        };
        let fv = p(&kraw.f);
        let gv = p(&kraw.g);
        let a = p(&kraw.fx);
        let b = p(&kraw.fy);
        let c = p(&kraw.gx);
        let d = p(&kraw.gy);
        let det = a * d - b * c;
        if !det.is_finite() || det.abs() < 1e-300 {
            return None;
        }
        let dx = (fv * d - gv * b) / det;
        let dy = (gv * a - fv * c) / det;
        x -= dx;
        y -= dy;
        if !(x.is_finite() && y.is_finite()) {
            return None;
        }
        if (x - x0).abs() > 8.0 * w + 1e-12 || (y - y0).abs() > 8.0 * w + 1e-12 {
            return None; // diverging away from the cell
        }
        if dx.abs() < 1e-14 * (1.0 + x.abs()) && dy.abs() < 1e-14 * (1.0 + y.abs()) {
            return Some((x, y));
        }
    }
    Some((x, y))
}

fn inflate(iv: &RatInterval, window: &Box2) -> RatInterval {
    let pad = iv.width() / rat_i(4);
    let _ = window;
    RatInterval::new(&iv.lo - &pad, &iv.hi + &pad)
}

/// Verify that the system f = g = 0 has no solution in the window outside the
/// allowed sub-boxes. Subdivision with sound exclusion; inconclusive cells at
/// the depth cap are returned as witnesses of failure.
pub fn verify_no_solutions_outside(
    f: &BivarPoly,
    g: &BivarPoly,
    window: &Box2,
    allowed: &[Box2],
    max_depth: u32,
) -> Result<(), Box2> {
    verify_no_solutions_outside_masked(f, g, window, allowed, max_depth, &|_, _| false)
}

pub fn verify_no_solutions_outside_masked(
    f: &BivarPoly,
    g: &BivarPoly,
    window: &Box2,
    allowed: &[Box2],
    max_depth: u32,
    skip: &dyn Fn(&RatInterval, &RatInterval) -> bool,
) -> Result<(), Box2> {
    let f64s = [IPoly64::new(f), IPoly64::new(g)];
    let deadline = std::time::Instant::now() + std::time::Duration::from_secs(30);
    let mut cells = 0u64;
    let mut stack: Vec<(RatInterval, RatInterval, u32)> =
        vec![(window.x.clone(), window.y.clone(), 0)];
    while let Some((bx, by, depth)) = stack.pop() {
        cells += 1;
        if cells > 400_000 || (cells % 1024 == 0 && std::time::Instant::now() > deadline) {
            return Err(Box2 { x: bx, y: by });
        }
        if allowed
            .iter()
            .any(|a| a.x.contains_interval(&bx) && a.y.contains_interval(&by))
        {
            continue;
        }
        if skip(&bx, &by) {
            continue;
        }
        let ix = I64::from_rat_interval(&bx);
        let iy = I64::from_rat_interval(&by);
        if f64s.iter().any(|p| p.excludes_zero(ix, iy)) {
            continue;
        }
        if depth > 24 && depth % 16 == 0 {
            let fe = f.eval_interval(&bx, &by);
            let ge = g.eval_interval(&bx, &by);
            if !fe.contains_zero() || !ge.contains_zero() {
                continue;
            }
        }
        if depth >= max_depth {
            return Err(Box2 { x: bx, y: by });
        }
        if bx.width() >= by.width() {
            let m = bx.mid();
            stack.push((RatInterval::new(bx.lo.clone(), m.clone()), by.clone(), depth + 1));
            stack.push((RatInterval::new(m, bx.hi.clone()), by, depth + 1));
        } else {
            let m = by.mid();
            stack.push((bx.clone(), RatInterval::new(by.lo.clone(), m.clone()), depth + 1));
            stack.push((bx, RatInterval::new(m, by.hi.clone()), depth + 1));
        }
    }
    Ok(())
}

/// Verify that the triple f = g = h = 0 has no common solution in the window
/// (used for whole-curve non-singularity inside a box).
pub fn verify_triple_empty(
    f: &BivarPoly,
    g: &BivarPoly,
    h: &BivarPoly,
    window: &Box2,
    max_depth: u32,
) -> Result<(), Box2> {
    let f64s = [IPoly64::new(f), IPoly64::new(g), IPoly64::new(h)];
    let exact = [f, g, h];
    let deadline = std::time::Instant::now() + std::time::Duration::from_secs(30);
    let mut cells = 0u64;
    let mut stack: Vec<(RatInterval, RatInterval, u32)> =
        vec![(window.x.clone(), window.y.clone(), 0)];
    while let Some((bx, by, depth)) = stack.pop() {
        cells += 1;
        if cells > 400_000 || (cells % 1024 == 0 && std::time::Instant::now() > deadline) {
            return Err(Box2 { x: bx, y: by });
        }
        let ix = I64::from_rat_interval(&bx);
        let iy = I64::from_rat_interval(&by);
        if f64s.iter().any(|p| p.excludes_zero(ix, iy)) {
            continue;
        }
        if depth > 24 && depth % 16 == 0 {
            if exact.iter().any(|p| !p.eval_interval(&bx, &by).contains_zero()) {
                continue;
            }
        }
        if depth >= max_depth {
            return Err(Box2 { x: bx, y: by });
        }
        if bx.width() >= by.width() {
            let m = bx.mid();
            stack.push((RatInterval::new(bx.lo.clone(), m.clone()), by.clone(), depth + 1));
            stack.push((RatInterval::new(m, bx.hi.clone()), by, depth + 1));
        } else {
            let m = by.mid();
            stack.push((bx.clone(), RatInterval::new(by.lo.clone(), m.clone()), depth + 1));
            stack.push((bx, RatInterval::new(m, by.hi.clone()), depth + 1));
        }
    }
    Ok(())
}
