//! Sound floating-point interval arithmetic with outward rounding, used to
//! exclude boxes quickly before falling back to exact rational intervals.

use crate::poly::BivarPoly;
use crate::rat::{rat_to_f64, Rat, RatInterval};

#[derive(Clone, Copy, Debug)]
pub struct I64 {
    pub lo: f64,
    pub hi: f64,
}

fn next_down(x: f64) -> f64 {
    if x.is_nan() || x == f64::NEG_INFINITY {
        x
    } else {
        f64::from_bits(if x > 0.0 {
            x.to_bits() - 1
        } else if x == 0.0 {
            (-f64::MIN_POSITIVE).to_bits()
        } else {
            x.to_bits() + 1
        })
    }
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        x
    } else {
        f64::from_bits(if x < 0.0 {
            x.to_bits() - 1
        } else if x == 0.0 {
            f64::MIN_POSITIVE.to_bits()
        } else {
            x.to_bits() + 1
        })
    }
}

impl I64 {
    pub fn point(x: f64) -> I64 {
        I64 { lo: next_down(x), hi: next_up(x) }
    }

    pub fn exact(x: f64) -> I64 {
        I64 { lo: x, hi: x }
    }

    pub fn from_rat(r: &Rat) -> I64 {
        // rat_to_f64 is within 1 ulp of the true value
        let v = rat_to_f64(r);
        I64 { lo: next_down(next_down(v)), hi: next_up(next_up(v)) }
    }

    pub fn from_rat_interval(iv: &RatInterval) -> I64 {
        let lo = I64::from_rat(&iv.lo);
        let hi = I64::from_rat(&iv.hi);
        I64 { lo: lo.lo, hi: hi.hi }
    }

    pub fn add(self, o: I64) -> I64 {
        I64 { lo: next_down(self.lo + o.lo), hi: next_up(self.hi + o.hi) }
    }

    pub fn mul(self, o: I64) -> I64 {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let mut lo = c[0];
        let mut hi = c[0];
        for v in &c[1..] {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
        I64 { lo: next_down(lo), hi: next_up(hi) }
    }

    pub fn contains_zero(self) -> bool {
        // NaN endpoints are treated as inconclusive, i.e. possibly zero
        !(self.lo > 0.0 || self.hi < 0.0)
    }
}

/// Bivariate polynomial with pre-rounded interval coefficients, for fast
/// sound range evaluation.
#[derive(Clone, Debug)]
pub struct IPoly64 {
    /// rows[j] = interval coefficients of y^j as a dense poly in x
    rows: Vec<Vec<I64>>,
}

impl IPoly64 {
    pub fn new(p: &BivarPoly) -> IPoly64 {
        let rows = p
            .rows_by_y()
            .into_iter()
            .map(|row| row.coeffs.iter().map(I64::from_rat).collect())
            .collect();
        IPoly64 { rows }
    }

    pub fn eval(&self, x: I64, y: I64) -> I64 {
        let mut acc = I64::exact(0.0);
        for row in self.rows.iter().rev() {
            let mut rx = I64::exact(0.0);
            for c in row.iter().rev() {
                rx = rx.mul(x).add(*c);
            }
            acc = acc.mul(y).add(rx);
        }
        acc
    }

    /// Sound "definitely nonzero over the box" test.
    pub fn excludes_zero(&self, x: I64, y: I64) -> bool {
        let r = self.eval(x, y);
        !r.contains_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i};

    #[test]
    fn interval_eval_encloses_truth() {
        let p = BivarPoly::from_terms([
            ((0, 0), rat_i(1)),
            ((2, 0), rat(-22, 7)),
            ((1, 2), rat(5, 3)),
        ]);
        let ip = IPoly64::new(&p);
        let x = I64 { lo: 0.25, hi: 0.5 };
        let y = I64 { lo: -1.0, hi: -0.5 };
        let r = ip.eval(x, y);
        for (xs, ys) in [(0.25, -1.0), (0.5, -0.5), (0.375, -0.75)] {
            let exact = 1.0 - 22.0 / 7.0 * xs * xs + 5.0 / 3.0 * xs * ys * ys;
            assert!(r.lo <= exact && exact <= r.hi);
        }
    }

    #[test]
    fn excludes_far_from_zero() {
        let p = BivarPoly::from_terms([((0, 0), rat_i(10)), ((2, 0), rat_i(1))]);
        let ip = IPoly64::new(&p);
        assert!(ip.excludes_zero(I64 { lo: -1.0, hi: 1.0 }, I64 { lo: -1.0, hi: 1.0 }));
        let q = BivarPoly::from_terms([((0, 0), rat_i(-1)), ((2, 0), rat_i(1))]);
        let iq = IPoly64::new(&q);
        assert!(!iq.excludes_zero(I64 { lo: 0.0, hi: 2.0 }, I64 { lo: 0.0, hi: 1.0 }));
    }
}

impl I64 {
    pub fn sub(self, o: I64) -> I64 {
        I64 { lo: next_down(self.lo - o.hi), hi: next_up(self.hi - o.lo) }
    }

    pub fn neg(self) -> I64 {
        I64 { lo: -self.hi, hi: -self.lo }
    }

    pub fn scale(self, c: f64) -> I64 {
        // c treated as an exact constant
        self.mul(I64 { lo: c, hi: c })
    }
}

/// Sound Krawczyk certification in f64 interval arithmetic: true means the
/// rational cell contains exactly one zero of the system. The approximate
/// midpoint inverse enters as exact constants, so outward rounding everywhere
/// keeps the test conservative.
pub struct Krawczyk64 {
    pub f: IPoly64,
    pub g: IPoly64,
    pub fx: IPoly64,
    pub fy: IPoly64,
    pub gx: IPoly64,
    pub gy: IPoly64,
}

impl Krawczyk64 {
    pub fn new(f: &BivarPoly, g: &BivarPoly) -> Krawczyk64 {
        use crate::poly::Var;
        Krawczyk64 {
            f: IPoly64::new(f),
            g: IPoly64::new(g),
            fx: IPoly64::new(&f.derive(Var::X)),
            fy: IPoly64::new(&f.derive(Var::Y)),
            gx: IPoly64::new(&g.derive(Var::X)),
            gy: IPoly64::new(&g.derive(Var::Y)),
        }
    }

    pub fn certifies(&self, bx: &RatInterval, by: &RatInterval) -> bool {
        let x = I64::from_rat_interval(bx);
        let y = I64::from_rat_interval(by);
        let mx = (x.lo + x.hi) / 2.0;
        let my = (y.lo + y.hi) / 2.0;
        let mxi = I64::point(mx);
        let myi = I64::point(my);
        // approximate midpoint Jacobian inverse (plain f64)
        let a = mid(self.fx.eval(mxi, myi));
        let b = mid(self.fy.eval(mxi, myi));
        let c = mid(self.gx.eval(mxi, myi));
        let d = mid(self.gy.eval(mxi, myi));
        let det = a * d - b * c;
        if !det.is_finite() || det == 0.0 {
            return false;
        }
        let y00 = d / det;
        let y01 = -b / det;
        let y10 = -c / det;
        let y11 = a / det;
        let fm = self.f.eval(mxi, myi);
        let gm = self.g.eval(mxi, myi);
        let jfx = self.fx.eval(x, y);
        let jfy = self.fy.eval(x, y);
        let jgx = self.gx.eval(x, y);
        let jgy = self.gy.eval(x, y);
        let one = I64::exact(1.0);
        let zero = I64::exact(0.0);
        let m00 = one.sub(jfx.scale(y00).add(jgx.scale(y01)));
        let m01 = zero.sub(jfy.scale(y00).add(jgy.scale(y01)));
        let m10 = zero.sub(jfx.scale(y10).add(jgx.scale(y11)));
        let m11 = one.sub(jfy.scale(y10).add(jgy.scale(y11)));
        let dx = x.sub(mxi);
        let dy = y.sub(myi);
        let kx = mxi
            .sub(fm.scale(y00).add(gm.scale(y01)))
            .add(m00.mul(dx))
            .add(m01.mul(dy));
        let ky = myi
            .sub(fm.scale(y10).add(gm.scale(y11)))
            .add(m10.mul(dx))
            .add(m11.mul(dy));
        // strict containment against the rational cell rounded inward
        let x_lo_in = crate::rat::rat_to_f64(&bx.lo);
        let x_hi_in = crate::rat::rat_to_f64(&bx.hi);
        let y_lo_in = crate::rat::rat_to_f64(&by.lo);
        let y_hi_in = crate::rat::rat_to_f64(&by.hi);
        let inward = |v: f64, up: bool| if up { nudge(v, 2) } else { nudge(v, -2) };
        kx.lo > inward(x_lo_in, true)
            && kx.hi < inward(x_hi_in, false)
            && ky.lo > inward(y_lo_in, true)
            && ky.hi < inward(y_hi_in, false)
    }
}

fn mid(v: I64) -> f64 {
    (v.lo + v.hi) / 2.0
}

fn nudge(mut v: f64, steps: i32) -> f64 {
    for _ in 0..steps.abs() {
        v = if steps > 0 { next_up(v) } else { next_down(v) };
    }
    v
}
