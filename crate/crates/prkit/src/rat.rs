//! Exact rational scalars and closed rational intervals.
//!
//! Every predicate that feeds a combinatorial decision (root counts, sign
//! tests, interval matching) runs on these types; floating point is confined
//! to fitting and rendering.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Arbitrary-precision rational. `BigRational` keeps the denominator positive
/// and the fraction reduced after every operation, which is exactly the
/// invariant we need.
pub type Rat = BigRational;

pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical string form `num/den`, lowest terms, positive denominator.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `num/den` or a bare integer `num`.
pub fn rat_from_str(s: &str) -> Result<Rat, RatParseError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| RatParseError(s.to_string()))?;
    let d = BigInt::from_str(den).map_err(|_| RatParseError(s.to_string()))?;
    if d.is_zero() {
        return Err(RatParseError(s.to_string()));
    }
    Ok(Rat::new(n, d))
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("malformed rational `{0}` (expected `num/den` with nonzero den)")]
pub struct RatParseError(pub String);

pub fn rat_to_f64(r: &Rat) -> f64 {
    // Good enough for rendering and fit seeding; never used in predicates.
    let n = r.numer();
    let d = r.denom();
    let fl = |x: &BigInt| -> f64 {
        let s = x.to_string();
        s.parse::<f64>().unwrap_or(if x.is_negative() { f64::MIN } else { f64::MAX })
    };
    fl(n) / fl(d)
}

/// Round a float to a rational with denominator dividing `den_bound`.
pub fn rat_from_f64_with_denom(x: f64, den_bound: u64) -> Rat {
    assert!(x.is_finite());
    let scaled = x * den_bound as f64;
    let n = BigInt::from(scaled.round() as i128);
    Rat::new(n, BigInt::from(den_bound))
}

/// Simplest rational in `[lo, hi]` by continued-fraction descent. Used to
/// probe whether an isolating interval pins a rational root.
pub fn simplest_in_interval(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo <= hi);
    if lo == hi {
        return lo.clone();
    }
    if !lo.is_positive() && !hi.is_negative() {
        return Rat::zero();
    }
    if hi.is_negative() {
        return -simplest_in_interval(&-hi.clone(), &-lo.clone());
    }
    // 0 < lo < hi
    let fl = lo.floor();
    let ceil_lo = if lo == &fl { lo.clone() } else { fl.clone() + Rat::one() };
    if &ceil_lo <= hi {
        return ceil_lo;
    }
    // same integer part; recurse on reciprocal fractional parts
    let frac_lo = lo - &fl;
    let frac_hi = hi - &fl;
    fl + simplest_in_interval(&frac_hi.recip(), &frac_lo.recip()).recip()
}

/// Closed interval with exact rational endpoints.
#[derive(Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(v: Rat) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / rat_i(2)
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn intersects(&self, other: &RatInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: if self.lo <= other.lo { self.lo.clone() } else { other.lo.clone() },
            hi: if self.hi >= other.hi { self.hi.clone() } else { other.hi.clone() },
        }
    }

    pub fn add(&self, o: &RatInterval) -> RatInterval {
        RatInterval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &RatInterval) -> RatInterval {
        RatInterval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn mul(&self, o: &RatInterval) -> RatInterval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        RatInterval { lo, hi }
    }

    pub fn scale(&self, r: &Rat) -> RatInterval {
        if r.is_negative() {
            RatInterval { lo: &self.hi * r, hi: &self.lo * r }
        } else {
            RatInterval { lo: &self.lo * r, hi: &self.hi * r }
        }
    }

    /// Sign if it is constant over the interval: returns None when the
    /// interval straddles zero.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }
}

pub fn sign_of(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

pub fn rat_min(a: Rat, b: Rat) -> Rat {
    if a <= b { a } else { b }
}

pub fn rat_max(a: Rat, b: Rat) -> Rat {
    if a >= b { a } else { b }
}

pub fn rat_one() -> Rat {
    Rat::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["1/2", "-3/4", "0/1", "17/1", "-100/7"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
        assert_eq!(rat_to_string(&rat_from_str("4/8").unwrap()), "1/2");
        assert_eq!(rat_to_string(&rat_from_str("5").unwrap()), "5/1");
        assert_eq!(rat_to_string(&rat_from_str("3/-6").unwrap()), "-1/2");
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("abc").is_err());
    }

    #[test]
    fn simplest_in_interval_finds_small_denominators() {
        let r = simplest_in_interval(&rat(3, 10), &rat(2, 5));
        assert_eq!(r, rat(1, 3));
        let r = simplest_in_interval(&rat(99, 100), &rat(101, 100));
        assert_eq!(r, rat_i(1));
        let r = simplest_in_interval(&rat(-1, 3), &rat(1, 7));
        assert_eq!(r, Rat::zero());
        let r = simplest_in_interval(&rat(-5, 8), &rat(-1, 2));
        assert_eq!(r, rat(-1, 2));
        // degenerate
        assert_eq!(simplest_in_interval(&rat(7, 13), &rat(7, 13)), rat(7, 13));
    }

    #[test]
    fn interval_mul_covers_sign_cases() {
        let a = RatInterval::new(rat_i(-2), rat_i(3));
        let b = RatInterval::new(rat_i(-1), rat_i(4));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat_i(-8));
        assert_eq!(p.hi, rat_i(12));
    }
}
