//! Real root isolation by Sturm sequences on the squarefree part, with
//! bisection refinement. All decisions are exact.

use super::unipoly::{IntPoly, UniPoly};
use crate::rat::{rat_i, sign_of, Rat, RatInterval};
use num_traits::Zero;

/// One isolated real root of a univariate polynomial.
///
/// Either pinned exactly (`Exact`) or bracketed by an open interval on which
/// the squarefree part changes sign, so bisection can shrink it below any
/// requested width.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub interval: RatInterval,
    pub multiplicity: usize,
    /// Squarefree polynomial with a sign change across `interval` (unless the
    /// root is exact, in which case it merely vanishes there).
    pub witness: UniPoly,
    pub exact: Option<Rat>,
}

impl IsolatedRoot {
    pub fn exact(v: Rat, multiplicity: usize, witness: UniPoly) -> Self {
        IsolatedRoot { interval: RatInterval::point(v.clone()), multiplicity, witness, exact: Some(v) }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Shrink the interval until its width is at most `width`.
    pub fn refine_to(&mut self, width: &Rat) {
        if self.exact.is_some() {
            return;
        }
        while &self.interval.width() > width {
            if !self.bisect_once() {
                return;
            }
        }
    }

    /// One bisection step; returns false once the root is exact.
    pub fn bisect_once(&mut self) -> bool {
        if self.exact.is_some() {
            return false;
        }
        let mid = self.interval.mid();
        let sm = sign_of(&self.witness.eval(&mid));
        if sm == 0 {
            self.exact = Some(mid.clone());
            self.interval = RatInterval::point(mid);
            return false;
        }
        let slo = sign_of(&self.witness.eval(&self.interval.lo));
        debug_assert!(slo != 0);
        if slo == sm {
            self.interval = RatInterval::new(mid, self.interval.hi.clone());
        } else {
            self.interval = RatInterval::new(self.interval.lo.clone(), mid);
        }
        true
    }
}

/// Number of sign variations of the chain at `x`.
fn sign_variations(chain: &[IntPoly], x: &Rat) -> usize {
    let signs: Vec<i8> = chain.iter().map(|p| p.sign_at(x)).filter(|s| *s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Count distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots_in(chain: &[IntPoly], a: &Rat, b: &Rat) -> usize {
    assert!(a <= b);
    sign_variations(chain, a) - sign_variations(chain, b)
}

/// Isolate all real roots of a squarefree polynomial within `(lo, hi]`.
/// Returned intervals are disjoint, sorted, and carry a strict sign change
/// (or an exact root).
fn isolate_squarefree(sf: &UniPoly, lo: &Rat, hi: &Rat, multiplicity: usize) -> Vec<IsolatedRoot> {
    let int = IntPoly::from_unipoly(sf);
    let chain = int.sturm_chain();
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        let n = count_roots_in(&chain, &a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(polish_interval(sf, a, b, multiplicity));
            continue;
        }
        let mid = (&a + &b) / rat_i(2);
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort_by(|p, q| p.interval.lo.cmp(&q.interval.lo));
    out
}

/// Turn a one-root half-open interval `(a, b]` into either an exact root or a
/// strict sign-change bracket.
fn polish_interval(sf: &UniPoly, a: Rat, b: Rat, multiplicity: usize) -> IsolatedRoot {
    if sf.eval(&b).is_zero() {
        return IsolatedRoot::exact(b, multiplicity, sf.clone());
    }
    // cheap probe: the simplest rational in the bracket is often the root
    let cand = crate::rat::simplest_in_interval(&a, &b);
    if sf.eval(&cand).is_zero() {
        return IsolatedRoot::exact(cand, multiplicity, sf.clone());
    }
    let mut lo = a;
    let hi = b;
    // The root is interior; the left endpoint may sit on a neighbouring root
    // of sf, so nudge it until the bracket has a strict sign change.
    loop {
        let sl = sign_of(&sf.eval(&lo));
        let sh = sign_of(&sf.eval(&hi));
        if sl == 0 {
            // lo is a root of sf, but not the one in (lo, hi]; step inward.
            let mid = (&lo + &hi) / rat_i(2);
            let sm = sign_of(&sf.eval(&mid));
            if sm == 0 {
                return IsolatedRoot::exact(mid, multiplicity, sf.clone());
            }
            if sm == sh {
                // root is in (lo, mid); keep nudging from the left
                lo = (&lo + &mid) / rat_i(2);
                let s2 = sign_of(&sf.eval(&lo));
                if s2 == 0 {
                    return IsolatedRoot::exact(lo, multiplicity, sf.clone());
                }
                if s2 != sh {
                    return IsolatedRoot {
                        interval: RatInterval::new(lo, mid),
                        multiplicity,
                        witness: sf.clone(),
                        exact: None,
                    };
                }
                // rare: continue shrinking
                continue;
            } else {
                lo = mid;
                continue;
            }
        }
        if sl != sh {
            return IsolatedRoot {
                interval: RatInterval::new(lo, hi),
                multiplicity,
                witness: sf.clone(),
                exact: None,
            };
        }
        // Same nonzero sign at both ends: the single root in (lo, hi] must be
        // found by bisection on the Sturm count.
        let int = IntPoly::from_unipoly(sf);
        let chain = int.sturm_chain();
        let mid = (&lo + &hi) / rat_i(2);
        if count_roots_in(&chain, &lo, &mid) == 1 {
            return polish_interval(sf, lo, mid, multiplicity);
        }
        return polish_interval(sf, mid, hi, multiplicity);
    }
}

/// Isolate all distinct real roots of `q` in `window` (default: all of R),
/// with multiplicities from the squarefree decomposition. Roots are sorted
/// ascending and their intervals are pairwise disjoint.
pub fn isolate_real_roots(q: &UniPoly, window: Option<&RatInterval>) -> Result<Vec<IsolatedRoot>, SturmError> {
    if q.is_zero() {
        return Err(SturmError::ZeroPolynomial);
    }
    if q.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let bound = q.root_bound();
    let (lo, hi) = match window {
        Some(w) => {
            let lo = if w.lo < -bound.clone() { -bound.clone() } else { w.lo.clone() };
            let hi = if w.hi > bound { bound.clone() } else { w.hi.clone() };
            if lo > hi {
                return Ok(Vec::new());
            }
            (lo, hi)
        }
        None => (-bound.clone(), bound),
    };
    let mut roots: Vec<IsolatedRoot> = Vec::new();
    for (factor, mult) in q.squarefree_decomposition() {
        // `(lo, hi]` may drop a root exactly at `lo`; widen the left end a hair
        // and filter afterwards.
        let eps = {
            let w = &hi - &lo;
            if w.is_zero() { rat_i(1) } else { w / rat_i(1_000_000) }
        };
        let lo_open = &lo - &eps;
        for mut r in isolate_squarefree(&factor, &lo_open, &hi, mult) {
            // shrink until the interval is inside the requested window or
            // provably outside
            loop {
                if r.exact.is_none()
                    && r.interval.contains(&lo)
                    && sign_of(&r.witness.eval(&lo)) == 0
                {
                    r = IsolatedRoot::exact(lo.clone(), r.multiplicity, r.witness.clone());
                }
                if let Some(v) = &r.exact {
                    if v < &lo || v > &hi {
                        // outside
                    } else {
                        roots.push(r);
                    }
                    break;
                }
                if r.interval.lo >= lo {
                    roots.push(r);
                    break;
                }
                if r.interval.hi < lo {
                    break;
                }
                r.bisect_once();
            }
        }
    }
    // Sort and make intervals pairwise disjoint by refinement.
    roots.sort_by(|a, b| a.interval.lo.cmp(&b.interval.lo).then(a.interval.hi.cmp(&b.interval.hi)));
    let mut changed = true;
    while changed {
        changed = false;
        for i in 1..roots.len() {
            let (left, right) = roots.split_at_mut(i);
            let a = left.last_mut().unwrap();
            let b = &mut right[0];
            while a.interval.hi >= b.interval.lo {
                let before_a = a.interval.width();
                let before_b = b.interval.width();
                a.bisect_once();
                b.bisect_once();
                if a.interval.width() == before_a && b.interval.width() == before_b {
                    // both exact and overlapping would mean equal roots of
                    // coprime factors: impossible
                    assert!(
                        a.exact.is_none() || b.exact.is_none() || a.exact != b.exact,
                        "duplicate roots from coprime factors"
                    );
                    if a.exact.is_some() && b.exact.is_some() {
                        break;
                    }
                }
                changed = true;
            }
        }
        if changed {
            roots.sort_by(|a, b| a.interval.lo.cmp(&b.interval.lo));
        }
    }
    Ok(roots)
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum SturmError {
    #[error("cannot isolate roots of the zero polynomial")]
    ZeroPolynomial,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn p(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| rat_i(c)).collect())
    }

    /// Dyadic-grid sign-change scan: an oracle independent of the Sturm path.
    fn grid_sign_change_roots(q: &UniPoly, lo: f64, hi: f64, steps: usize) -> Vec<f64> {
        let mut out = Vec::new();
        let mut prev_x = lo;
        let qf = |x: f64| {
            q.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| crate::rat::rat_to_f64(c) * x.powi(k as i32))
                .sum::<f64>()
        };
        let mut prev = qf(lo);
        for i in 1..=steps {
            let x = lo + (hi - lo) * i as f64 / steps as f64;
            let v = qf(x);
            if prev == 0.0 {
                out.push(prev_x);
            } else if prev * v < 0.0 {
                out.push((prev_x + x) / 2.0);
            }
            prev = v;
            prev_x = x;
        }
        out
    }

    #[test]
    fn isolates_three_quarters_minus_y_squared() {
        // roots +-sqrt(3)/2 ~ +-0.8660, simple
        let q = UniPoly::from_coeffs(vec![rat(3, 4), Rat::zero(), rat_i(-1)]);
        let mut roots = isolate_real_roots(&q, None).unwrap();
        assert_eq!(roots.len(), 2);
        let oracle = grid_sign_change_roots(&q, -2.0, 2.0, 4096);
        assert_eq!(oracle.len(), 2);
        for (r, o) in roots.iter_mut().zip(oracle) {
            assert_eq!(r.multiplicity, 1);
            r.refine_to(&rat(1, 1 << 20));
            let lo = crate::rat::rat_to_f64(&r.interval.lo);
            let hi = crate::rat::rat_to_f64(&r.interval.hi);
            assert!(lo <= o + 1e-3 && o - 1e-3 <= hi, "oracle root {o} not in [{lo},{hi}]");
            // strict sign change of the squarefree part
            if r.exact.is_none() {
                let a = r.witness.eval(&r.interval.lo);
                let b = r.witness.eval(&r.interval.hi);
                assert!(crate::rat::sign_of(&a) * crate::rat::sign_of(&b) < 0);
            }
        }
        // disjoint
        assert!(roots[0].interval.hi < roots[1].interval.lo);
    }

    #[test]
    fn double_root_multiplicity() {
        let q = p(&[0, 0, 1]); // y^2
        let roots = isolate_real_roots(&q, None).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity, 2);
        assert_eq!(roots[0].exact, Some(Rat::zero()));
    }

    #[test]
    fn no_real_roots() {
        let q = p(&[1, 0, 1]); // y^2 + 1
        let roots = isolate_real_roots(&q, None).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn zero_poly_rejected() {
        assert!(isolate_real_roots(&UniPoly::zero(), None).is_err());
    }

    #[test]
    fn window_filters() {
        let q = p(&[0, -1, 0, 1]); // x^3 - x: roots -1, 0, 1
        let w = RatInterval::new(rat(-1, 2), rat(3, 2));
        let roots = isolate_real_roots(&q, Some(&w)).unwrap();
        assert_eq!(roots.len(), 2); // 0 and 1
    }

    #[test]
    fn dense_root_cluster_separates() {
        // (x-1)(x-2)...(x-8)
        let mut f = p(&[1]);
        for k in 1..=8 {
            f = f.mul(&p(&[-k, 1]));
        }
        let roots = isolate_real_roots(&f, None).unwrap();
        assert_eq!(roots.len(), 8);
        for (i, r) in roots.iter().enumerate() {
            let target = rat_i(i as i64 + 1);
            assert!(r.interval.contains(&target));
        }
        for w in roots.windows(2) {
            assert!(w[0].interval.hi < w[1].interval.lo);
        }
    }
}
