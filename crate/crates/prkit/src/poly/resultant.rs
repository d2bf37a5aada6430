//! Resultants: scalar resultants of univariate polynomials by a remainder
//! sequence, and bivariate elimination `Res_y` / `Res_x` by evaluation at
//! integer nodes plus Lagrange interpolation. A Sylvester-determinant route
//! exists alongside for cross-checking.

use super::bivar::{BivarPoly, Var};
use super::unipoly::UniPoly;
use crate::rat::{rat_i, Rat};
use num_traits::{One, Zero};

/// Resultant of two univariate polynomials via the Euclidean remainder
/// sequence with the classical degree/leading-coefficient corrections.
///
/// Convention: `res(f, g) = lc(f)^{deg g} * prod over roots a of f of g(a)`,
/// i.e. the determinant of the Sylvester matrix with `deg g` rows of `f`
/// followed by `deg f` rows of `g`.
pub fn resultant_uni(f: &UniPoly, g: &UniPoly) -> Rat {
    let (df, dg) = match (f.degree(), g.degree()) {
        (Some(a), Some(b)) => (a, b),
        // res(0, g) = 0 unless g is a nonzero constant, where the empty
        // Sylvester matrix has determinant g^0 = 1 only if f also constant.
        _ => {
            if f.is_zero() && g.is_zero() {
                return Rat::zero();
            }
            if f.is_zero() {
                return if g.degree() == Some(0) { Rat::one() } else { Rat::zero() };
            }
            return if f.degree() == Some(0) { Rat::one() } else { Rat::zero() };
        }
    };
    if df == 0 && dg == 0 {
        return Rat::one();
    }
    if df == 0 {
        return f.coeff(0).pow_usize(dg);
    }
    if dg == 0 {
        return g.coeff(0).pow_usize(df);
    }
    // res(f, g) = (-1)^{df*dg} res(g, f)
    if df < dg {
        let r = resultant_uni(g, f);
        return if (df * dg) % 2 == 1 { -r } else { r };
    }
    // f = q*g + r => res(f, g) = (-1)^{df*dg} lc(g)^{df - dr} res(g, r)
    let (_, r) = f.div_rem(g);
    if r.is_zero() {
        return Rat::zero();
    }
    let dr = r.degree().unwrap();
    let lc_g = g.leading_coeff().unwrap().clone();
    let sign = if (df * dg) % 2 == 1 { -Rat::one() } else { Rat::one() };
    sign * lc_g.pow_usize(df - dr) * resultant_uni(g, &r)
}

trait PowUsize {
    fn pow_usize(&self, e: usize) -> Rat;
}

impl PowUsize for Rat {
    fn pow_usize(&self, e: usize) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc *= self;
        }
        acc
    }
}

/// Sylvester matrix determinant over Q by fraction-free elimination.
/// Slower than the remainder-sequence route; kept as the independent
/// cross-check and for direct matrix-level tests.
pub fn resultant_sylvester(f: &UniPoly, g: &UniPoly) -> Rat {
    let (df, dg) = match (f.degree(), g.degree()) {
        (Some(a), Some(b)) => (a, b),
        _ => return resultant_uni(f, g),
    };
    let n = df + dg;
    if n == 0 {
        return Rat::one();
    }
    let mut m = vec![vec![Rat::zero(); n]; n];
    // dg rows of f's coefficients (descending), then df rows of g's
    for r in 0..dg {
        for k in 0..=df {
            m[r][r + k] = f.coeff(df - k);
        }
    }
    for r in 0..df {
        for k in 0..=dg {
            m[dg + r][r + k] = g.coeff(dg - k);
        }
    }
    det_rational(m)
}

fn det_rational(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let pr = match pivot {
            None => return Rat::zero(),
            Some(p) => p,
        };
        if pr != col {
            m.swap(pr, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let t = &m[col][c] * &factor;
                m[r][c] -= t;
            }
        }
    }
    det
}

/// `Res_y(f, g)`: the Sylvester resultant eliminating y, a polynomial in x.
/// Vanishes exactly at x-values where `f(x, .)` and `g(x, .)` share a root or
/// both leading coefficients (in y) vanish.
pub fn resultant_y(f: &BivarPoly, g: &BivarPoly) -> UniPoly {
    assert!(!f.is_zero() && !g.is_zero(), "resultant of zero polynomial");
    let dyf = f.degree_in(Var::Y).unwrap_or(0) as usize;
    let dyg = g.degree_in(Var::Y).unwrap_or(0) as usize;
    if dyf == 0 {
        // res(f, g) with f constant in y: f^{deg_y g}
        let base = f.rows_by_y().into_iter().next().unwrap_or_else(UniPoly::zero);
        return pow_unipoly(&base, dyg);
    }
    if dyg == 0 {
        let base = g.rows_by_y().into_iter().next().unwrap_or_else(UniPoly::zero);
        return pow_unipoly(&base, dyf);
    }
    let dxf = f.degree_in(Var::X).unwrap_or(0) as usize;
    let dxg = g.degree_in(Var::X).unwrap_or(0) as usize;
    // degree bound for Res_y in x
    let bound = dxf * dyg + dxg * dyf;
    let rows_f = f.rows_by_y();
    let rows_g = g.rows_by_y();
    let lcf = rows_f.last().unwrap().clone();
    let lcg = rows_g.last().unwrap().clone();

    // Sample at integers where neither leading coefficient vanishes, so the
    // specialized resultant equals the evaluated resultant.
    let mut nodes: Vec<Rat> = Vec::with_capacity(bound + 1);
    let mut values: Vec<Rat> = Vec::with_capacity(bound + 1);
    let mut t: i64 = 0;
    let mut step = 0i64;
    while nodes.len() < bound + 1 {
        let x = rat_i(t);
        if !lcf.eval(&x).is_zero() && !lcg.eval(&x).is_zero() {
            let fu = f.restrict_x(&x);
            let gu = g.restrict_x(&x);
            values.push(resultant_uni(&fu, &gu));
            nodes.push(x);
        }
        step += 1;
        t = if step % 2 == 1 { (step + 1) / 2 } else { -(step / 2) };
    }
    lagrange_interpolate(&nodes, &values)
}

/// `Res_x(f, g)`: eliminate x instead; a polynomial in y.
pub fn resultant_x(f: &BivarPoly, g: &BivarPoly) -> UniPoly {
    resultant_y(&f.swap_vars(), &g.swap_vars())
}

fn pow_unipoly(p: &UniPoly, e: usize) -> UniPoly {
    let mut acc = UniPoly::constant(Rat::one());
    for _ in 0..e {
        acc = acc.mul(p);
    }
    acc
}

fn lagrange_interpolate(nodes: &[Rat], values: &[Rat]) -> UniPoly {
    // Newton form with divided differences.
    let n = nodes.len();
    assert_eq!(n, values.len());
    let mut dd = values.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            let num = &dd[k] - &dd[k - 1];
            let den = &nodes[k] - &nodes[k - level];
            dd[k] = num / den;
        }
    }
    let mut acc = UniPoly::zero();
    for k in (0..n).rev() {
        let lin = UniPoly::from_coeffs(vec![-nodes[k].clone(), Rat::one()]);
        acc = acc.mul(&lin).add(&UniPoly::constant(dd[k].clone()));
    }
    acc
}

/// Gcd of bivariate polynomials by a primitive remainder sequence in y over
/// Z[x]; used to detect shared components (positive-dimensional loci).
pub fn gcd_bivar(f: &BivarPoly, g: &BivarPoly) -> BivarPoly {
    if f.is_zero() {
        return g.clone();
    }
    if g.is_zero() {
        return f.clone();
    }
    // Work with coefficient vectors in y over Q[x], kept primitive.
    let mut a = YPoly::from_bivar(f);
    let mut b = YPoly::from_bivar(g);
    let content = a.content().gcd(&b.content());
    a = a.primitive();
    b = b.primitive();
    if a.deg_y() < b.deg_y() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_zero() {
            return a.primitive().to_bivar().mul(&content.to_bivar_in_x());
        }
        if b.deg_y() == 0 {
            // gcd divides a polynomial free of y
            let g = content.clone();
            return g.to_bivar_in_x();
        }
        let r = a.pseudo_rem(&b).primitive();
        a = b;
        b = r;
    }
}

/// Polynomial in y with coefficients in Q[x].
#[derive(Clone)]
struct YPoly {
    coeffs: Vec<UniPoly>,
}

impl YPoly {
    fn from_bivar(p: &BivarPoly) -> Self {
        YPoly { coeffs: p.rows_by_y() }
    }

    fn to_bivar(&self) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (j, row) in self.coeffs.iter().enumerate() {
            for (i, c) in row.coeffs.iter().enumerate() {
                out.add_term(i as u32, j as u32, c.clone());
            }
        }
        out
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn deg_y(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn content(&self) -> GcdX {
        let mut g = UniPoly::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        GcdX(g)
    }

    fn primitive(&self) -> YPoly {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.content().0;
        if g.degree() == Some(0) {
            let inv = g.coeff(0).recip();
            let mut out = YPoly {
                coeffs: self.coeffs.iter().map(|c| c.scale(&inv)).collect(),
            };
            out.trim();
            return out;
        }
        let mut out = YPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    if c.is_zero() {
                        UniPoly::zero()
                    } else {
                        let (q, r) = c.div_rem(&g);
                        debug_assert!(r.is_zero());
                        q
                    }
                })
                .collect(),
        };
        out.trim();
        out
    }

    /// Pseudo-remainder in y: lc(b)^(da-db+1) * a mod b.
    fn pseudo_rem(&self, other: &YPoly) -> YPoly {
        let da = self.deg_y();
        let db = other.deg_y();
        assert!(da >= db && !other.is_zero());
        let lc = other.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        for k in (db..=da).rev() {
            let top = rem[k].clone();
            for c in rem.iter_mut() {
                *c = c.mul(&lc);
            }
            if !top.is_zero() {
                for (j, oc) in other.coeffs.iter().enumerate() {
                    rem[k - db + j] = rem[k - db + j].sub(&top.mul(oc));
                }
            }
        }
        let mut out = YPoly { coeffs: rem };
        out.trim();
        debug_assert!(out.is_zero() || out.deg_y() < db);
        out
    }
}

/// A gcd living in Q[x] treated as a bivariate content.
#[derive(Clone)]
struct GcdX(UniPoly);

impl GcdX {
    fn gcd(&self, other: &GcdX) -> GcdX {
        GcdX(self.0.gcd(&other.0))
    }

    fn to_bivar_in_x(&self) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (i, c) in self.0.coeffs.iter().enumerate() {
            out.add_term(i as u32, 0, c.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i};
    use num_traits::Zero;

    fn circle() -> BivarPoly {
        BivarPoly::from_terms([((0, 0), rat_i(1)), ((2, 0), rat_i(-1)), ((0, 2), rat_i(-1))])
    }

    #[test]
    fn res_y_of_parabola_and_y() {
        // Res_y(y^2 - x, y) = -x: frozen from the 3x3 Sylvester determinant
        // [[1,0,-x],[1,0,0],[0,1,0]] expanded by hand.
        let f = BivarPoly::from_terms([((0, 2), rat_i(1)), ((1, 0), rat_i(-1))]);
        let g = BivarPoly::var(Var::Y);
        let r = resultant_y(&f, &g);
        assert_eq!(r, UniPoly::from_coeffs(vec![Rat::zero(), rat_i(-1)]));
    }

    #[test]
    fn res_y_of_self_is_zero() {
        let f = circle();
        let r = resultant_y(&f, &f.scale(&rat_i(3)));
        assert!(r.is_zero());
    }

    #[test]
    fn res_y_circle_with_diagonal() {
        // Res_y(1-x^2-y^2, y-x) = 1-2x^2: monic linear substitution, checked
        // by hand Sylvester expansion.
        let f = circle();
        let g = BivarPoly::from_terms([((0, 1), rat_i(1)), ((1, 0), rat_i(-1))]);
        let r = resultant_y(&f, &g);
        assert_eq!(r, UniPoly::from_coeffs(vec![rat_i(1), Rat::zero(), rat_i(-2)]));
    }

    #[test]
    fn prs_matches_sylvester_on_randoms() {
        // dual-route check: remainder-sequence resultant vs determinant
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 11) as i64 - 5
        };
        for _ in 0..40 {
            let f = UniPoly::from_coeffs((0..5).map(|_| rat_i(next())).collect());
            let g = UniPoly::from_coeffs((0..4).map(|_| rat_i(next())).collect());
            if f.is_zero() || g.is_zero() {
                continue;
            }
            assert_eq!(resultant_uni(&f, &g), resultant_sylvester(&f, &g));
        }
    }

    #[test]
    fn resultant_root_product_identity() {
        // res(f, g) = lc(f)^{deg g} * prod g(root of f)
        // f = (x-1)(x-2) = x^2 - 3x + 2, g = x^2 + 1
        let f = UniPoly::from_coeffs(vec![rat_i(2), rat_i(-3), rat_i(1)]);
        let g = UniPoly::from_coeffs(vec![rat_i(1), Rat::zero(), rat_i(1)]);
        // g(1) * g(2) = 2 * 5 = 10
        assert_eq!(resultant_uni(&f, &g), rat_i(10));
        assert_eq!(resultant_sylvester(&f, &g), rat_i(10));
    }

    #[test]
    fn bivar_gcd_finds_common_factor() {
        let h = BivarPoly::from_terms([((1, 0), rat_i(1)), ((0, 1), rat_i(1))]); // x + y
        let f = h.mul(&circle());
        let g = h.mul(&BivarPoly::from_terms([((0, 1), rat_i(1)), ((0, 0), rat_i(2))]));
        let d = gcd_bivar(&f, &g);
        // gcd should be a rational multiple of x + y
        assert_eq!(d.total_degree(), Some(1));
        let scaled = d.scale(&d.terms().next().unwrap().1.recip());
        let hs = h.scale(&h.terms().next().unwrap().1.recip());
        assert_eq!(scaled, hs);
    }

    #[test]
    fn bivar_gcd_of_coprime_is_constant() {
        let f = circle();
        let g = BivarPoly::from_terms([((0, 1), rat_i(1)), ((1, 0), rat_i(-1))]);
        let d = gcd_bivar(&f, &g);
        assert_eq!(d.total_degree(), Some(0));
    }

    #[test]
    fn res_y_constant_in_y_cases() {
        let f = BivarPoly::from_terms([((1, 0), rat_i(1)), ((0, 0), rat_i(-5))]); // x - 5
        let g = circle();
        let r = resultant_y(&f, &g);
        // (x-5)^2
        assert_eq!(r, UniPoly::from_coeffs(vec![rat_i(25), rat_i(-10), rat_i(1)]));
        let r2 = resultant_y(&g, &f);
        assert_eq!(r2, UniPoly::from_coeffs(vec![rat_i(25), rat_i(-10), rat_i(1)]));
    }
}
