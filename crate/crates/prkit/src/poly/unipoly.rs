//! Univariate polynomials over the rationals, plus an integer-coefficient
//! companion used for primitive remainder sequences (gcd, Sturm chains,
//! resultants) where rational normalization would be too slow.

use crate::rat::{rat_i, Rat, RatInterval};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense univariate polynomial; `coeffs[k]` is the coefficient of `x^k`.
/// Trailing zeros are trimmed, so the leading coefficient is nonzero unless
/// the polynomial is zero (empty coefficient list).
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    pub coeffs: Vec<Rat>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            if k > 0 {
                write!(f, "*t^{}", k)?;
            }
        }
        Ok(())
    }
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = UniPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    /// x
    pub fn var() -> Self {
        UniPoly { coeffs: vec![Rat::zero(), Rat::one()] }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() { None } else { Some(self.coeffs.len() - 1) }
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Interval evaluation by Horner; sound enclosure of the range over `iv`.
    pub fn eval_interval(&self, iv: &RatInterval) -> RatInterval {
        let mut acc = RatInterval::point(Rat::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(iv).add(&RatInterval::point(c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * rat_i(k as i64))
            .collect();
        UniPoly::from_coeffs(coeffs)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - other.coeff(k));
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, r: &Rat) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| c * r).collect())
    }

    /// Euclidean division: returns (quotient, remainder).
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        let lc = divisor.leading_coeff().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let qn = rem.len() - dd;
        let mut quot = vec![Rat::zero(); qn];
        for k in (0..qn).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let t = dc * &c;
                rem[k + j] -= t;
            }
            quot[k] = c;
        }
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    /// Monic gcd via the integer primitive remainder sequence.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return other.make_monic();
        }
        if other.is_zero() {
            return self.make_monic();
        }
        let a = IntPoly::from_unipoly(self);
        let b = IntPoly::from_unipoly(other);
        a.primitive_gcd(&b).to_unipoly().make_monic()
    }

    pub fn make_monic(&self) -> UniPoly {
        match self.leading_coeff() {
            None => UniPoly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// p / gcd(p, p'): same distinct roots, all simple.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_zero() || self.degree() == Some(0) {
            return self.make_monic();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.make_monic();
        }
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero());
        q.make_monic()
    }

    /// Yun squarefree decomposition: returns `(factor, multiplicity)` pairs
    /// with squarefree, pairwise coprime factors and multiplicity ascending.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        if self.is_zero() {
            return Vec::new();
        }
        if self.degree() == Some(0) {
            return Vec::new();
        }
        let f = self.make_monic();
        let fp = f.derivative();
        let mut out = Vec::new();
        let a0 = f.gcd(&fp);
        let (mut b, r) = f.div_rem(&a0);
        debug_assert!(r.is_zero());
        let (mut c, r) = fp.div_rem(&a0);
        debug_assert!(r.is_zero());
        let mut d = c.sub(&b.derivative());
        let mut mult = 1usize;
        loop {
            if b.degree() == Some(0) {
                break;
            }
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), mult));
            }
            let (b2, r) = b.div_rem(&a);
            debug_assert!(r.is_zero());
            let (c2, r) = d.div_rem(&a);
            debug_assert!(r.is_zero());
            b = b2;
            c = c2;
            d = c.sub(&b.derivative());
            mult += 1;
        }
        out
    }

    /// Substitute x -> x + shift.
    pub fn shift(&self, shift: &Rat) -> UniPoly {
        // Horner-style Taylor shift.
        let mut res = UniPoly::zero();
        let lin = UniPoly::from_coeffs(vec![shift.clone(), Rat::one()]);
        for c in self.coeffs.iter().rev() {
            res = res.mul(&lin).add(&UniPoly::constant(c.clone()));
        }
        res
    }

    /// Cauchy bound: all real roots lie in (-B, B).
    pub fn root_bound(&self) -> Rat {
        let lc = match self.leading_coeff() {
            None => return Rat::one(),
            Some(c) => c.clone(),
        };
        let mut m = Rat::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let a = (c / &lc).abs();
            if a > m {
                m = a;
            }
        }
        m + Rat::one()
    }
}

/// Integer-coefficient polynomial used for remainder sequences.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    pub coeffs: Vec<BigInt>,
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly{:?}", self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() { None } else { Some(self.coeffs.len() - 1) }
    }

    /// Clear denominators; the result is a positive rational multiple of `p`,
    /// so signs and roots are preserved.
    pub fn from_unipoly(p: &UniPoly) -> Self {
        if p.is_zero() {
            return IntPoly::zero();
        }
        let mut l = BigInt::one();
        for c in &p.coeffs {
            l = l.lcm(c.denom());
        }
        let coeffs = p
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        IntPoly::from_coeffs(coeffs)
    }

    pub fn to_unipoly(&self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect())
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide by content; keeps the sign of the leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let g = self.content();
        IntPoly::from_coeffs(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    }

    pub fn sign_at(&self, x: &Rat) -> i8 {
        crate::rat::sign_of(&self.eval(x))
    }

    /// Pseudo-remainder of self by other, scaled to a primitive polynomial
    /// with sign equal to the sign of the true rational remainder.
    fn signed_primitive_rem(&self, other: &IntPoly) -> IntPoly {
        let d_self = self.degree().unwrap();
        let d_other = other.degree().unwrap();
        assert!(d_self >= d_other);
        let lc = other.coeffs.last().unwrap().clone();
        let steps = d_self - d_other + 1;
        // rem = lc^steps * self mod other (classical pseudo-division)
        let mut rem: Vec<BigInt> = self.coeffs.clone();
        for k in (d_other..=d_self).rev() {
            let top = rem[k].clone();
            for c in rem.iter_mut() {
                *c *= &lc;
            }
            if !top.is_zero() {
                for (j, oc) in other.coeffs.iter().enumerate() {
                    rem[k - d_other + j] -= &top * oc;
                }
            }
            debug_assert!(rem[k].is_zero());
        }
        let mut r = IntPoly::from_coeffs(rem);
        if r.is_zero() {
            return r;
        }
        // The multiplier lc^steps has the sign of lc^steps; divide it out in
        // sign so r matches the true remainder's sign, then make primitive.
        let mult_negative = lc.is_negative() && steps % 2 == 1;
        r = r.primitive_part();
        if mult_negative {
            r = IntPoly::from_coeffs(r.coeffs.iter().map(|c| -c).collect());
        }
        r
    }

    /// Primitive PRS gcd; result is primitive with positive leading coeff.
    pub fn primitive_gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if b.is_zero() {
                if a.coeffs.last().unwrap().is_negative() {
                    a = IntPoly::from_coeffs(a.coeffs.iter().map(|c| -c).collect());
                }
                return a;
            }
            if b.degree() == Some(0) {
                return IntPoly::from_coeffs(vec![BigInt::one()]);
            }
            let r = a.signed_primitive_rem(&b);
            a = b;
            b = r;
        }
    }

    /// Signed remainder sequence for Sturm queries: p, p', then each term is
    /// the negated (primitively scaled) remainder of the previous two.
    pub fn sturm_chain(&self) -> Vec<IntPoly> {
        let mut chain = vec![self.primitive_part()];
        let d = self.derivative().primitive_part();
        if d.is_zero() {
            return chain;
        }
        chain.push(d);
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.degree().is_none() || a.degree() < b.degree() {
                break;
            }
            let r = a.signed_primitive_rem(b);
            if r.is_zero() {
                break;
            }
            let neg = IntPoly::from_coeffs(r.coeffs.iter().map(|c| -c).collect());
            if neg.degree() == Some(0) {
                chain.push(neg);
                break;
            }
            chain.push(neg);
        }
        chain
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn p(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| rat_i(c)).collect())
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[1, 0, -3, 2, 5]);
        let b = p(&[2, 1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < b.degree().unwrap());
    }

    #[test]
    fn gcd_of_shared_factor() {
        let common = p(&[-1, 1]); // x - 1
        let a = common.mul(&p(&[3, 1]));
        let b = common.mul(&p(&[5, 0, 2]));
        let g = a.gcd(&b);
        assert_eq!(g, common.make_monic());
    }

    #[test]
    fn squarefree_decomposition_reads_multiplicities() {
        // (x-1)^2 (x+2)
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        let dec = f.squarefree_decomposition();
        assert_eq!(dec.len(), 2);
        assert_eq!(dec[0].1, 1);
        assert_eq!(dec[0].0, p(&[2, 1]).make_monic());
        assert_eq!(dec[1].1, 2);
        assert_eq!(dec[1].0, p(&[-1, 1]).make_monic());
    }

    #[test]
    fn shift_matches_eval() {
        let f = p(&[1, -2, 0, 3]);
        let s = rat(5, 7);
        let g = f.shift(&s);
        for x in [rat_i(0), rat_i(2), rat(-3, 2)] {
            assert_eq!(g.eval(&x), f.eval(&(x.clone() + s.clone())));
        }
    }

    #[test]
    fn interval_eval_encloses() {
        let f = p(&[-1, 0, 1]); // x^2 - 1
        let iv = RatInterval::new(rat_i(0), rat_i(2));
        let range = f.eval_interval(&iv);
        for x in [rat_i(0), rat_i(1), rat_i(2), rat(1, 2)] {
            assert!(range.contains(&f.eval(&x)));
        }
    }

    #[test]
    fn sturm_chain_ends_constant_for_squarefree() {
        let f = IntPoly::from_unipoly(&p(&[-2, 0, 1])); // x^2 - 2
        let chain = f.sturm_chain();
        assert_eq!(chain.last().unwrap().degree(), Some(0));
    }
}
