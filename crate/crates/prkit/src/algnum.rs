//! Real algebraic numbers with decidable comparison.
//!
//! A value is either an exact rational, a root of a rational polynomial
//! bracketed by a sign-change interval, or one coordinate of a
//! Krawczyk-certified zero of a two-polynomial system. For the first two
//! forms, comparison refines the brackets and, when separation stalls,
//! decides equality through a gcd certificate, so `cmp` always terminates
//! with the true order. Boxed coordinates have no general equality
//! certificate: comparison separates by contraction under a very large
//! budget, and genuinely coincident values abort loudly rather than
//! mis-order (realizable inputs are perturbed upstream to keep event
//! abscissae distinct).

use crate::poly::bivar::{BivarPoly, Var};
use crate::poly::sturm::isolate_real_roots;
use crate::poly::unipoly::UniPoly;
use crate::rat::{rat_i, sign_of, Rat, RatInterval};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub enum RealAlg {
    Exact(Rat),
    Root(RootRep),
    Boxed(BoxedCoord),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// One coordinate of a certified zero of a bivariate system.
#[derive(Clone, Debug)]
pub struct BoxedCoord {
    pub axis: Axis,
    pub point: Arc<KrawczykPoint>,
}

/// A box certified (by a Krawczyk contraction) to contain exactly one zero of
/// the system f = g = 0, refinable to arbitrary width.
#[derive(Debug)]
pub struct KrawczykPoint {
    pub f: BivarPoly,
    pub g: BivarPoly,
    pub fx: BivarPoly,
    pub fy: BivarPoly,
    pub gx: BivarPoly,
    pub gy: BivarPoly,
    pub bx: RatInterval,
    pub by: RatInterval,
}

impl KrawczykPoint {
    pub fn new(f: BivarPoly, g: BivarPoly, bx: RatInterval, by: RatInterval) -> Self {
        let fx = f.derive(Var::X);
        let fy = f.derive(Var::Y);
        let gx = g.derive(Var::X);
        let gy = g.derive(Var::Y);
        KrawczykPoint { f, g, fx, fy, gx, gy, bx, by }
    }

    /// One Krawczyk contraction step intersected with the current box; the
    /// result still contains the zero. Returns None when the step fails to
    /// shrink (midpoint Jacobian singular), which cannot happen on a box
    /// already certified by a contraction.
    pub fn step(&self) -> Option<KrawczykPoint> {
        let (kx, ky) = krawczyk_image(
            &self.f, &self.g, &self.fx, &self.fy, &self.gx, &self.gy, &self.bx, &self.by,
        )?;
        let ix = intersect(&kx, &self.bx)?;
        let iy = intersect(&ky, &self.by)?;
        Some(KrawczykPoint {
            f: self.f.clone(),
            g: self.g.clone(),
            fx: self.fx.clone(),
            fy: self.fy.clone(),
            gx: self.gx.clone(),
            gy: self.gy.clone(),
            bx: ix,
            by: iy,
        })
    }

    /// Shrink until both box widths are at most `width`. Contraction is
    /// quadratic near the zero; endpoints are rounded outward to a dyadic
    /// grid after every step so coefficient sizes stay bounded.
    pub fn refine_to(&self, width: &Rat) -> Arc<KrawczykPoint> {
        let bits = dyadic_bits_for(width) + 16;
        let mut cur = Arc::new(self.clone_shallow());
        let mut stall = 0u32;
        while (&cur.bx.width() > width || &cur.by.width() > width) && stall < 64 {
            match cur.step() {
                Some(mut next) => {
                    next.bx = round_outward(&next.bx, bits);
                    next.by = round_outward(&next.by, bits);
                    let shrunk = next.bx.width() < cur.bx.width() || next.by.width() < cur.by.width();
                    cur = Arc::new(next);
                    if !shrunk {
                        stall += 1;
                    }
                }
                None => break,
            }
        }
        cur
    }

    fn clone_shallow(&self) -> KrawczykPoint {
        KrawczykPoint {
            f: self.f.clone(),
            g: self.g.clone(),
            fx: self.fx.clone(),
            fy: self.fy.clone(),
            gx: self.gx.clone(),
            gy: self.gy.clone(),
            bx: self.bx.clone(),
            by: self.by.clone(),
        }
    }
}

fn intersect(a: &RatInterval, b: &RatInterval) -> Option<RatInterval> {
    let lo = if a.lo >= b.lo { a.lo.clone() } else { b.lo.clone() };
    let hi = if a.hi <= b.hi { a.hi.clone() } else { b.hi.clone() };
    if lo <= hi { Some(RatInterval::new(lo, hi)) } else { None }
}

/// Number of fractional bits needed to resolve `width` on a dyadic grid.
fn dyadic_bits_for(width: &Rat) -> u32 {
    let mut bits = 0u32;
    let mut w = width.clone();
    let one = Rat::one();
    while w < one && bits < 4096 {
        w = w * rat_i(2);
        bits += 1;
    }
    bits
}

/// Smallest enclosing interval with endpoints on the 2^-bits grid.
pub fn round_outward(iv: &RatInterval, bits: u32) -> RatInterval {
    use num_bigint::BigInt;
    let scale = Rat::from_integer(BigInt::from(1u8) << bits.min(8192) as usize);
    let lo = (&iv.lo * &scale).floor() / &scale;
    let hi = ((&iv.hi * &scale).ceil()) / &scale;
    RatInterval::new(lo, hi)
}

/// The Krawczyk operator image of the box; None when the midpoint Jacobian
/// is singular.
#[allow(clippy::too_many_arguments)]
pub fn krawczyk_image(
    f: &BivarPoly,
    g: &BivarPoly,
    fx: &BivarPoly,
    fy: &BivarPoly,
    gx: &BivarPoly,
    gy: &BivarPoly,
    ix: &RatInterval,
    iy: &RatInterval,
) -> Option<(RatInterval, RatInterval)> {
    let mx = ix.mid();
    let my = iy.mid();
    let a = fx.eval(&mx, &my);
    let b = fy.eval(&mx, &my);
    let c = gx.eval(&mx, &my);
    let d = gy.eval(&mx, &my);
    let det = &a * &d - &b * &c;
    if det.is_zero() {
        return None;
    }
    let inv = [&d / &det, -(&b / &det), -(&c / &det), &a / &det];
    let fm = f.eval(&mx, &my);
    let gm = g.eval(&mx, &my);
    let jfx = fx.eval_interval(ix, iy);
    let jfy = fy.eval_interval(ix, iy);
    let jgx = gx.eval_interval(ix, iy);
    let jgy = gy.eval_interval(ix, iy);
    let one = RatInterval::point(Rat::one());
    let zero = RatInterval::point(Rat::zero());
    let m00 = one.sub(&jfx.scale(&inv[0]).add(&jgx.scale(&inv[1])));
    let m01 = zero.sub(&jfy.scale(&inv[0]).add(&jgy.scale(&inv[1])));
    let m10 = zero.sub(&jfx.scale(&inv[2]).add(&jgx.scale(&inv[3])));
    let m11 = one.sub(&jfy.scale(&inv[2]).add(&jgy.scale(&inv[3])));
    let dx = ix.sub(&RatInterval::point(mx.clone()));
    let dy = iy.sub(&RatInterval::point(my.clone()));
    let kx = RatInterval::point(&mx - (&inv[0] * &fm + &inv[1] * &gm))
        .add(&m00.mul(&dx))
        .add(&m01.mul(&dy));
    let ky = RatInterval::point(&my - (&inv[2] * &fm + &inv[3] * &gm))
        .add(&m10.mul(&dx))
        .add(&m11.mul(&dy));
    Some((kx, ky))
}

/// Certify that the box contains exactly one zero of the system: the
/// Krawczyk image must land strictly inside the box.
#[allow(clippy::too_many_arguments)]
pub fn krawczyk_certifies(
    f: &BivarPoly,
    g: &BivarPoly,
    fx: &BivarPoly,
    fy: &BivarPoly,
    gx: &BivarPoly,
    gy: &BivarPoly,
    ix: &RatInterval,
    iy: &RatInterval,
) -> bool {
    match krawczyk_image(f, g, fx, fy, gx, gy, ix, iy) {
        None => false,
        Some((kx, ky)) => kx.lo > ix.lo && kx.hi < ix.hi && ky.lo > iy.lo && ky.hi < iy.hi,
    }
}

#[derive(Clone, Debug)]
pub struct RootRep {
    /// Squarefree witness with a strict sign change over `[lo, hi]`.
    pub poly: Arc<UniPoly>,
    pub lo: Rat,
    pub hi: Rat,
}

impl RootRep {
    fn interval(&self) -> RatInterval {
        RatInterval::new(self.lo.clone(), self.hi.clone())
    }

    /// One bisection step; returns Some(exact value) if the midpoint hits.
    fn bisect(&mut self) -> Option<Rat> {
        let mid = (&self.lo + &self.hi) / rat_i(2);
        let sm = sign_of(&self.poly.eval(&mid));
        if sm == 0 {
            return Some(mid);
        }
        let sl = sign_of(&self.poly.eval(&self.lo));
        if sl == sm {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
        None
    }
}

impl RealAlg {
    pub fn exact(v: Rat) -> Self {
        RealAlg::Exact(v)
    }

    pub fn from_root(poly: UniPoly, lo: Rat, hi: Rat) -> Self {
        if lo == hi {
            return RealAlg::Exact(lo);
        }
        let sl = sign_of(&poly.eval(&lo));
        let sh = sign_of(&poly.eval(&hi));
        if sh == 0 {
            return RealAlg::Exact(hi);
        }
        if sl == 0 {
            return RealAlg::Exact(lo);
        }
        assert!(sl * sh < 0, "interval endpoints must bracket a sign change");
        RealAlg::Root(RootRep { poly: Arc::new(poly), lo, hi })
    }

    pub fn from_isolated_root(r: &crate::poly::sturm::IsolatedRoot) -> Self {
        match &r.exact {
            Some(v) => RealAlg::Exact(v.clone()),
            None => RealAlg::from_root(r.witness.clone(), r.interval.lo.clone(), r.interval.hi.clone()),
        }
    }

    pub fn interval(&self) -> RatInterval {
        match self {
            RealAlg::Exact(v) => RatInterval::point(v.clone()),
            RealAlg::Root(r) => r.interval(),
            RealAlg::Boxed(b) => match b.axis {
                Axis::X => b.point.bx.clone(),
                Axis::Y => b.point.by.clone(),
            },
        }
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            RealAlg::Exact(v) => Some(v),
            _ => None,
        }
    }

    /// A copy refined so the bracket width is at most `width`; also detects
    /// rational collapse via midpoint hits and a simplest-rational probe.
    pub fn refined(&self, width: &Rat) -> RealAlg {
        match self {
            RealAlg::Exact(_) => self.clone(),
            RealAlg::Root(r) => {
                let mut r = r.clone();
                // probe the simplest rational once; cheap way to catch
                // nice roots exactly
                let cand = crate::rat::simplest_in_interval(&r.lo, &r.hi);
                if r.poly.eval(&cand).is_zero() {
                    return RealAlg::Exact(cand);
                }
                while &(&r.hi - &r.lo) > width {
                    if let Some(v) = r.bisect() {
                        return RealAlg::Exact(v);
                    }
                }
                RealAlg::Root(r)
            }
            RealAlg::Boxed(b) => {
                let point = b.point.refine_to(width);
                RealAlg::Boxed(BoxedCoord { axis: b.axis, point })
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealAlg::Exact(v) => crate::rat::rat_to_f64(v),
            _ => {
                let refined = self.refined(&Rat::new(1.into(), 1_000_000_000.into()));
                match refined {
                    RealAlg::Exact(v) => crate::rat::rat_to_f64(&v),
                    other => crate::rat::rat_to_f64(&other.interval().mid()),
                }
            }
        }
    }

    /// Exact zero test of a rational against this number.
    fn equals_rational(&self, q: &Rat) -> bool {
        match self {
            RealAlg::Exact(v) => v == q,
            RealAlg::Root(r) => r.interval().contains(q) && r.poly.eval(q).is_zero(),
            RealAlg::Boxed(b) => {
                // the coordinate equals q iff the system restricted to that
                // line has a zero inside the box, an exact univariate check
                let kp = &b.point;
                let (in_range, fu, gu, window) = match b.axis {
                    Axis::X => (
                        kp.bx.contains(q),
                        kp.f.restrict_x(q),
                        kp.g.restrict_x(q),
                        kp.by.clone(),
                    ),
                    Axis::Y => (
                        kp.by.contains(q),
                        kp.f.restrict_y(q),
                        kp.g.restrict_y(q),
                        kp.bx.clone(),
                    ),
                };
                if !in_range {
                    return false;
                }
                let h = if fu.is_zero() {
                    gu
                } else if gu.is_zero() {
                    fu
                } else {
                    fu.gcd(&gu)
                };
                if h.is_zero() {
                    return true;
                }
                if h.degree() == Some(0) {
                    return false;
                }
                !isolate_real_roots(&h, Some(&window)).unwrap_or_default().is_empty()
            }
        }
    }

    /// Total order on the reals. Exact for rationals and polynomial roots;
    /// comparisons involving boxed coordinates separate by contraction and
    /// abort after an extreme budget if the values cannot be distinguished.
    pub fn cmp_exact(&self, other: &RealAlg) -> Ordering {
        match (self, other) {
            (RealAlg::Boxed(_), _) | (_, RealAlg::Boxed(_)) => self.cmp_boxed(other),
            (RealAlg::Exact(a), RealAlg::Exact(b)) => a.cmp(b),
            (RealAlg::Exact(a), RealAlg::Root(_)) => {
                if other.equals_rational(a) {
                    return Ordering::Equal;
                }
                // refine other until a is outside
                let mut r = match other {
                    RealAlg::Root(r) => r.clone(),
                    _ => unreachable!(),
                };
                loop {
                    if a < &r.lo {
                        return Ordering::Less;
                    }
                    if a > &r.hi {
                        return Ordering::Greater;
                    }
                    if let Some(v) = r.bisect() {
                        // collapsed to exact; a != v since equals_rational
                        // was false
                        return a.cmp(&v);
                    }
                }
            }
            (RealAlg::Root(_), RealAlg::Exact(_)) => other.cmp_exact(self).reverse(),
            (RealAlg::Root(ra), RealAlg::Root(rb)) => {
                let mut a = ra.clone();
                let mut b = rb.clone();
                // Fast path: already separated.
                loop {
                    if a.hi < b.lo {
                        return Ordering::Less;
                    }
                    if b.hi < a.lo {
                        return Ordering::Greater;
                    }
                    // Equality certificate via the gcd of the witnesses.
                    let g = a.poly.gcd(&b.poly);
                    if g.degree().unwrap_or(0) > 0 {
                        if let Some(ord) = decide_with_gcd(&g, &a, &b) {
                            return ord;
                        }
                    }
                    // Distinct numbers: refinement separates eventually.
                    for _ in 0..4 {
                        if let Some(v) = a.bisect() {
                            return RealAlg::Exact(v).cmp_exact(&RealAlg::Root(b));
                        }
                        if let Some(v) = b.bisect() {
                            return RealAlg::Root(a).cmp_exact(&RealAlg::Exact(v));
                        }
                    }
                }
            }
        }
    }

    pub fn is_equal(&self, other: &RealAlg) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }

    /// Comparison when at least one side is a boxed coordinate. Equality
    /// against an exact rational is decidable (restrict the system to the
    /// line); everything else must separate under refinement.
    fn cmp_boxed(&self, other: &RealAlg) -> Ordering {
        if let (RealAlg::Boxed(_), RealAlg::Exact(q)) = (self, other) {
            if self.equals_rational(q) {
                return Ordering::Equal;
            }
        }
        if let (RealAlg::Exact(q), RealAlg::Boxed(_)) = (self, other) {
            if other.equals_rational(q) {
                return Ordering::Equal;
            }
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut width = {
            let w = crate::rat::rat_max(a.interval().width(), b.interval().width());
            if w.is_zero() { Rat::new(1.into(), 1024.into()) } else { w }
        };
        for _ in 0..4096 {
            let ia = a.interval();
            let ib = b.interval();
            if ia.hi < ib.lo {
                return Ordering::Less;
            }
            if ib.hi < ia.lo {
                return Ordering::Greater;
            }
            width = width / rat_i(16);
            a = a.refined(&width);
            b = b.refined(&width);
        }
        panic!(
            "indistinguishable event abscissae near {}: the configuration has \
             coincident certified coordinates; perturb the input",
            a.to_f64()
        );
    }
}

/// If some root of g lies in both brackets, the two numbers are that common
/// root (each bracket isolates a single root of its witness, and roots of g
/// are roots of both witnesses). Returns None when g has no root in the
/// overlap, meaning the numbers are distinct.
fn decide_with_gcd(g: &UniPoly, a: &RootRep, b: &RootRep) -> Option<Ordering> {
    let overlap_lo = if a.lo >= b.lo { a.lo.clone() } else { b.lo.clone() };
    let overlap_hi = if a.hi <= b.hi { a.hi.clone() } else { b.hi.clone() };
    if overlap_lo > overlap_hi {
        return None;
    }
    let roots = match isolate_real_roots(g, Some(&RatInterval::new(overlap_lo, overlap_hi))) {
        Ok(r) => r,
        Err(_) => return None,
    };
    for root in roots {
        // The g-root equals a iff a's witness has its unique root of
        // [a.lo, a.hi] inside the g-root's bracket; same for b. Soundly
        // checkable by Sturm counts on the intersections.
        if root_matches(&root, a) && root_matches(&root, b) {
            return Some(Ordering::Equal);
        }
    }
    None
}

/// The candidate is a root of g, which divides the target witness, so it is
/// also a root of the target witness. It equals the target iff it lies inside
/// the target bracket (which isolates exactly one witness root). Bracket
/// endpoints are never roots, so refinement always decides containment.
fn root_matches(candidate: &crate::poly::sturm::IsolatedRoot, target: &RootRep) -> bool {
    if let Some(v) = &candidate.exact {
        return target.interval().contains(v);
    }
    let mut c = candidate.clone();
    loop {
        if target.interval().contains_interval(&c.interval) {
            return true;
        }
        if c.interval.hi < target.lo || c.interval.lo > target.hi {
            return false;
        }
        if !c.bisect_once() {
            let v = c.exact.as_ref().expect("bisect stopped without exact root");
            return target.interval().contains(v);
        }
    }
}

impl PartialEq for RealAlg {
    fn eq(&self, other: &Self) -> bool {
        self.is_equal(other)
    }
}

impl Eq for RealAlg {}

impl PartialOrd for RealAlg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_exact(other))
    }
}

impl Ord for RealAlg {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn sqrt_of(n: i64) -> RealAlg {
        // positive root of x^2 - n
        let p = UniPoly::from_coeffs(vec![rat_i(-n), Rat::zero(), rat_i(1)]);
        RealAlg::from_root(p, rat_i(0), rat_i(n.max(1)))
    }

    #[test]
    fn orders_roots_and_rationals() {
        let s2 = sqrt_of(2);
        let s3 = sqrt_of(3);
        assert_eq!(s2.cmp_exact(&s3), Ordering::Less);
        assert_eq!(s3.cmp_exact(&s2), Ordering::Greater);
        assert_eq!(s2.cmp_exact(&RealAlg::exact(rat(3, 2))), Ordering::Less);
        assert_eq!(s2.cmp_exact(&RealAlg::exact(rat(7, 5))), Ordering::Greater);
    }

    #[test]
    fn equality_through_different_witnesses() {
        // sqrt(2) as root of x^2 - 2 and as root of x^4 - 4 hmm x^4 - 4 has
        // root sqrt(2) since (sqrt 2)^4 = 4; witness must be squarefree: it is.
        let a = sqrt_of(2);
        let q = UniPoly::from_coeffs(vec![rat_i(-4), Rat::zero(), Rat::zero(), Rat::zero(), rat_i(1)]);
        let b = RealAlg::from_root(q, rat_i(1), rat_i(2));
        assert_eq!(a.cmp_exact(&b), Ordering::Equal);
        assert!(a.is_equal(&b));
    }

    #[test]
    fn rational_root_collapses() {
        // root of x^2 - 9/4 in [1, 2] is 3/2
        let p = UniPoly::from_coeffs(vec![rat(-9, 4), Rat::zero(), rat_i(1)]);
        let r = RealAlg::from_root(p, rat_i(1), rat_i(2));
        let refined = r.refined(&rat(1, 1024));
        assert_eq!(refined.as_exact(), Some(&rat(3, 2)));
        assert_eq!(r.cmp_exact(&RealAlg::exact(rat(3, 2))), Ordering::Equal);
    }

    #[test]
    fn close_but_distinct_separate() {
        // 1 + 1e-6 vs 1 + 2e-6 as roots of distinct linear witnesses
        let p1 = UniPoly::from_coeffs(vec![rat(-1000001, 1000000), rat_i(1)]);
        let p2 = UniPoly::from_coeffs(vec![rat(-1000002, 1000000), rat_i(1)]);
        let a = RealAlg::from_root(p1, rat_i(0), rat_i(2));
        let b = RealAlg::from_root(p2, rat_i(0), rat_i(2));
        assert_eq!(a.cmp_exact(&b), Ordering::Less);
    }

    #[test]
    fn sorts_mixed_collection() {
        let mut v = vec![
            RealAlg::exact(rat_i(1)),
            sqrt_of(2),
            RealAlg::exact(rat(1, 2)),
            sqrt_of(3),
            RealAlg::exact(rat_i(2)),
        ];
        v.sort();
        let approx: Vec<f64> = v.iter().map(|x| x.to_f64()).collect();
        for w in approx.windows(2) {
            assert!(w[0] <= w[1]);
        }
        assert!((approx[1] - 1.0).abs() < 1e-6);
        assert!((approx[2] - std::f64::consts::SQRT_2).abs() < 1e-6);
    }
}
