//! Exact bivariate polynomials in (x, y) with rational coefficients.

use super::unipoly::UniPoly;
use crate::rat::{rat_i, Rat, RatInterval};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Sparse bivariate polynomial; key `(i, j)` is the exponent pair of
/// `x^i y^j`. Zero coefficients are never stored, so structural equality is
/// coefficient-wise equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            if *i > 0 {
                write!(f, "*x^{}", i)?;
            }
            if *j > 0 {
                write!(f, "*y^{}", j)?;
            }
        }
        Ok(())
    }
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = BivarPoly::zero();
        match v {
            Var::X => p.add_term(1, 0, Rat::one()),
            Var::Y => p.add_term(0, 1, Rat::one()),
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Rat)>) -> Self {
        let mut p = BivarPoly::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    /// Total degree max(i + j); zero polynomial reports None.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        match v {
            Var::X => self.terms.keys().map(|&(i, _)| i).max(),
            Var::Y => self.terms.keys().map(|&(_, j)| j).max(),
        }
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        // Horner in y over Horner in x via the per-y-power decomposition.
        let rows = self.rows_by_y();
        let mut acc = Rat::zero();
        for row in rows.iter().rev() {
            acc = acc * y + row.eval(x);
        }
        acc
    }

    pub fn eval_interval(&self, x: &RatInterval, y: &RatInterval) -> RatInterval {
        let rows = self.rows_by_y();
        let mut acc = RatInterval::point(Rat::zero());
        for row in rows.iter().rev() {
            acc = acc.mul(y).add(&row.eval_interval(x));
        }
        acc
    }

    /// Coefficients of y^j as polynomials in x, index = j.
    pub fn rows_by_y(&self) -> Vec<UniPoly> {
        let dy = match self.degree_in(Var::Y) {
            None => return Vec::new(),
            Some(d) => d,
        };
        let mut rows: Vec<Vec<Rat>> = vec![Vec::new(); dy as usize + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, Rat::zero());
            }
            row[i as usize] = c.clone();
        }
        rows.into_iter().map(UniPoly::from_coeffs).collect()
    }

    /// Coefficients of x^i as polynomials in y, index = i.
    pub fn rows_by_x(&self) -> Vec<UniPoly> {
        self.swap_vars().rows_by_y()
    }

    pub fn swap_vars(&self) -> BivarPoly {
        BivarPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())))
    }

    pub fn derive(&self, v: Var) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(i, j), c) in &self.terms {
            match v {
                Var::X if i > 0 => out.add_term(i - 1, j, c * rat_i(i as i64)),
                Var::Y if j > 0 => out.add_term(i, j - 1, c * rat_i(j as i64)),
                _ => {}
            }
        }
        out
    }

    /// q(y) = p(t, y).
    pub fn restrict_x(&self, t: &Rat) -> UniPoly {
        let dy = match self.degree_in(Var::Y) {
            None => return UniPoly::zero(),
            Some(d) => d,
        };
        let mut coeffs = vec![Rat::zero(); dy as usize + 1];
        for (row_j, row) in self.rows_by_y().into_iter().enumerate() {
            coeffs[row_j] = row.eval(t);
        }
        UniPoly::from_coeffs(coeffs)
    }

    /// q(x) = p(x, t).
    pub fn restrict_y(&self, t: &Rat) -> UniPoly {
        self.swap_vars().restrict_x(t)
    }

    pub fn add(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> BivarPoly {
        BivarPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> BivarPoly {
        if r.is_zero() {
            return BivarPoly::zero();
        }
        BivarPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, c * r)).collect(),
        }
    }

    /// Substitute x -> x + dx, y -> y + dy.
    pub fn translate(&self, dx: &Rat, dy: &Rat) -> BivarPoly {
        let mut out = BivarPoly::zero();
        let x_shift = BivarPoly::from_terms([((0, 0), dx.clone()), ((1, 0), Rat::one())]);
        let y_shift = BivarPoly::from_terms([((0, 0), dy.clone()), ((0, 1), Rat::one())]);
        // cache powers
        let dxm = self.degree_in(Var::X).unwrap_or(0) as usize;
        let dym = self.degree_in(Var::Y).unwrap_or(0) as usize;
        let mut xp = Vec::with_capacity(dxm + 1);
        let mut yp = Vec::with_capacity(dym + 1);
        xp.push(BivarPoly::constant(Rat::one()));
        yp.push(BivarPoly::constant(Rat::one()));
        for k in 1..=dxm {
            xp.push(xp[k - 1].mul(&x_shift));
        }
        for k in 1..=dym {
            yp.push(yp[k - 1].mul(&y_shift));
        }
        for (&(i, j), c) in &self.terms {
            out = out.add(&xp[i as usize].mul(&yp[j as usize]).scale(c));
        }
        out
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    /// 1 - x^2 - y^2
    pub fn unit_circle() -> BivarPoly {
        BivarPoly::from_terms([
            ((0, 0), rat_i(1)),
            ((2, 0), rat_i(-1)),
            ((0, 2), rat_i(-1)),
        ])
    }

    #[test]
    fn eval_examples() {
        let f = unit_circle();
        assert_eq!(f.eval(&rat_i(0), &rat_i(0)), rat_i(1));
        assert_eq!(f.eval(&rat_i(1), &rat_i(0)), rat_i(0));
        assert_eq!(f.eval(&rat(1, 2), &rat(1, 2)), rat(1, 2));
    }

    #[test]
    fn derive_examples() {
        let f = unit_circle();
        let fy = f.derive(Var::Y);
        assert_eq!(fy, BivarPoly::from_terms([((0, 1), rat_i(-2))]));
        let xy = BivarPoly::from_terms([((1, 1), rat_i(1))]);
        assert_eq!(xy.derive(Var::X), BivarPoly::from_terms([((0, 1), rat_i(1))]));
        assert_eq!(BivarPoly::constant(rat_i(7)).derive(Var::X), BivarPoly::zero());
    }

    #[test]
    fn restrict_examples() {
        let f = unit_circle();
        let q = f.restrict_x(&rat(1, 2));
        assert_eq!(q, UniPoly::from_coeffs(vec![rat(3, 4), Rat::zero(), rat_i(-1)]));
        let xy = BivarPoly::from_terms([((1, 1), rat_i(1))]);
        assert!(xy.restrict_x(&rat_i(0)).is_zero());
        assert_eq!(xy.restrict_x(&rat_i(2)), UniPoly::from_coeffs(vec![Rat::zero(), rat_i(2)]));
    }

    #[test]
    fn mixed_partials_commute() {
        let f = BivarPoly::from_terms([
            ((3, 2), rat(5, 3)),
            ((1, 4), rat_i(-2)),
            ((2, 0), rat_i(7)),
        ]);
        assert_eq!(f.derive(Var::X).derive(Var::Y), f.derive(Var::Y).derive(Var::X));
    }

    #[test]
    fn translate_matches_eval() {
        let f = BivarPoly::from_terms([((2, 1), rat_i(3)), ((0, 2), rat(-1, 2)), ((1, 0), rat_i(1))]);
        let g = f.translate(&rat(1, 3), &rat(-2, 5));
        for (x, y) in [(rat_i(0), rat_i(0)), (rat_i(1), rat(1, 2)), (rat(-2, 7), rat_i(3))] {
            assert_eq!(g.eval(&x, &y), f.eval(&(x.clone() + rat(1, 3)), &(y.clone() + rat(-2, 5))));
        }
    }
}
