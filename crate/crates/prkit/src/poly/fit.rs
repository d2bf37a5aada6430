//! Least-squares fitting of a bivariate polynomial to sampled field values.
//!
//! The solve runs in floating point; coefficients are then rounded to
//! rationals with a bounded denominator, and optional interpolation
//! constraints (exact zeros at rational points) are re-imposed exactly on the
//! rounded polynomial. Everything downstream verifies the exact rounded
//! polynomial, so no conclusion ever rests on float arithmetic.

use super::bivar::BivarPoly;
use crate::rat::{rat_from_f64_with_denom, rat_to_f64, Rat};
use num_traits::Zero;
use thiserror::Error;

#[derive(Clone, Debug)]
pub struct FitOptions {
    pub degree: u32,
    /// Ridge term added to the normal matrix diagonal.
    pub regularization: f64,
    /// Denominator bound for rounding float coefficients to rationals.
    pub denominator_bound: u64,
    /// Rational points the rounded polynomial must vanish at exactly.
    pub interpolate_zeros: Vec<(Rat, Rat)>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            degree: 4,
            regularization: 0.0,
            denominator_bound: 1 << 24,
            interpolate_zeros: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FitOutcome {
    pub poly: BivarPoly,
    /// Root-mean-square residual of the float solution on the samples.
    pub rms_residual: f64,
    pub degree: u32,
}

#[derive(Debug, Error)]
pub enum FitError {
    #[error("need at least {need} samples for degree {degree}, got {got}")]
    TooFewSamples { need: usize, got: usize, degree: u32 },
    #[error("normal system is rank-deficient; set regularization > 0")]
    RankDeficient,
    #[error("constraint system is rank-deficient; constraint points may coincide")]
    ConstraintRankDeficient,
}

fn monomials(degree: u32) -> Vec<(u32, u32)> {
    let mut m = Vec::new();
    for d in 0..=degree {
        for i in 0..=d {
            m.push((d - i, i));
        }
    }
    m
}

/// Least-squares fit of total degree `degree` to `samples`, minimizing the
/// sum of squared residuals plus the ridge term. Reports the float residual;
/// the returned polynomial has exact rational coefficients.
pub fn fit_polynomial(
    samples: &[((Rat, Rat), f64)],
    opts: &FitOptions,
) -> Result<FitOutcome, FitError> {
    let weighted: Vec<((Rat, Rat), f64, f64)> =
        samples.iter().map(|((x, y), v)| ((x.clone(), y.clone()), *v, 1.0)).collect();
    fit_polynomial_weighted(&weighted, opts)
}

/// Weighted variant: each sample carries a nonnegative weight scaling its
/// squared residual.
pub fn fit_polynomial_weighted(
    samples: &[((Rat, Rat), f64, f64)],
    opts: &FitOptions,
) -> Result<FitOutcome, FitError> {
    let mons = monomials(opts.degree);
    let m = mons.len();
    if samples.len() < m {
        return Err(FitError::TooFewSamples { need: m, got: samples.len(), degree: opts.degree });
    }
    // Build normal equations A^T W A c = A^T W y in f64.
    let mut ata = vec![0.0f64; m * m];
    let mut aty = vec![0.0f64; m];
    let mut row = vec![0.0f64; m];
    for ((x, y), v, w) in samples {
        let xf = rat_to_f64(x);
        let yf = rat_to_f64(y);
        for (k, &(i, j)) in mons.iter().enumerate() {
            row[k] = xf.powi(i as i32) * yf.powi(j as i32);
        }
        for a in 0..m {
            for b in a..m {
                ata[a * m + b] += w * row[a] * row[b];
            }
            aty[a] += w * row[a] * v;
        }
    }
    for a in 0..m {
        for b in 0..a {
            ata[a * m + b] = ata[b * m + a];
        }
        ata[a * m + a] += opts.regularization;
    }
    let coeffs = solve_spd(&mut ata, &mut aty, m).ok_or(FitError::RankDeficient)?;

    // Round to rationals.
    let mut poly = BivarPoly::zero();
    for (k, &(i, j)) in mons.iter().enumerate() {
        let c = rat_from_f64_with_denom(coeffs[k], opts.denominator_bound);
        if !c.is_zero() {
            poly.add_term(i, j, c);
        }
    }

    // Re-impose exact zero constraints on the rounded polynomial.
    if !opts.interpolate_zeros.is_empty() {
        poly = impose_zeros(poly, &mons, &opts.interpolate_zeros)?;
    }

    // Weighted residual of the float solution.
    let mut ss = 0.0f64;
    let mut wsum = 0.0f64;
    for ((x, y), v, w) in samples {
        let xf = rat_to_f64(x);
        let yf = rat_to_f64(y);
        let mut p = 0.0;
        for (k, &(i, j)) in mons.iter().enumerate() {
            p += coeffs[k] * xf.powi(i as i32) * yf.powi(j as i32);
        }
        let r = p - v;
        ss += w * r * r;
        wsum += w;
    }
    let rms = if wsum > 0.0 { (ss / wsum).sqrt() } else { 0.0 };
    Ok(FitOutcome { poly, rms_residual: rms, degree: opts.degree })
}

/// Gaussian elimination with partial pivoting on a dense symmetric system.
/// Returns None when a pivot collapses (rank deficiency).
fn solve_spd(a: &mut [f64], b: &mut [f64], n: usize) -> Option<Vec<f64>> {
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let (mut best, mut best_abs) = (col, a[perm[col] * n + col].abs());
        for r in col + 1..n {
            let v = a[perm[r] * n + col].abs();
            if v > best_abs {
                best = r;
                best_abs = v;
            }
        }
        if best_abs < 1e-12 {
            return None;
        }
        perm.swap(col, best);
        let prow = perm[col];
        let pivot = a[prow * n + col];
        for r in col + 1..n {
            let row = perm[r];
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[row * n + c] -= factor * a[prow * n + c];
            }
            b[row] -= factor * b[prow];
        }
    }
    let mut x = vec![0.0f64; n];
    for col in (0..n).rev() {
        let row = perm[col];
        let mut v = b[row];
        for c in col + 1..n {
            v -= a[row * n + c] * x[c];
        }
        x[col] = v / a[row * n + col];
    }
    Some(x)
}

/// Public entry for re-imposing exact zeros on an already rounded polynomial.
pub fn impose_interpolation_zeros(
    poly: BivarPoly,
    degree: u32,
    points: &[(Rat, Rat)],
) -> Result<BivarPoly, FitError> {
    if points.is_empty() {
        return Ok(poly);
    }
    let mons = monomials(degree);
    impose_zeros(poly, &mons, points)
}

/// Adjust finitely many coefficients of `poly` exactly (in rationals) so that
/// it vanishes at every constraint point. The adjustment solves a small
/// rational linear system on a well-conditioned subset of monomials, so the
/// perturbation is tiny when the float solution already nearly satisfies the
/// constraints.
fn impose_zeros(
    poly: BivarPoly,
    mons: &[(u32, u32)],
    points: &[(Rat, Rat)],
) -> Result<BivarPoly, FitError> {
    let k = points.len();
    let m = mons.len();
    // Constraint matrix B: rows = points, cols = monomials.
    let mut b: Vec<Vec<Rat>> = Vec::with_capacity(k);
    for (x, y) in points {
        let mut row = Vec::with_capacity(m);
        for &(i, j) in mons {
            let mut v = Rat::one();
            for _ in 0..i {
                v *= x;
            }
            for _ in 0..j {
                v *= y;
            }
            row.push(v);
        }
        b.push(row);
    }
    // Residual at each point.
    let resid: Vec<Rat> = points.iter().map(|(x, y)| poly.eval(x, y)).collect();
    if resid.iter().all(|r| r.is_zero()) {
        return Ok(poly);
    }
    // Pick k columns by rational Gaussian elimination with column pivoting,
    // preferring low-degree monomials so the exact correction keeps small
    // denominators (high powers of the pin coordinates explode coefficient
    // sizes and slow every later exact evaluation).
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&c| mons[c].0 + mons[c].1);
    let mut work = b.clone();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut used = vec![false; m];
    for r in 0..k {
        // first (lowest-degree) unused column with a nonzero entry in row r
        // after elimination by earlier rows
        let mut pick: Option<usize> = None;
        for &c in &order {
            if used[c] || work[r][c].is_zero() {
                continue;
            }
            pick = Some(c);
            break;
        }
        let pc = pick.ok_or(FitError::ConstraintRankDeficient)?;
        used[pc] = true;
        chosen.push(pc);
        for r2 in 0..k {
            if r2 == r || work[r2][pc].is_zero() {
                continue;
            }
            let f = &work[r2][pc] / &work[r][pc];
            for c in 0..m {
                let t = &work[r][c] * &f;
                work[r2][c] -= t;
            }
        }
    }
    // Solve B_sub * delta = -resid for the chosen columns.
    let mut mat: Vec<Vec<Rat>> = (0..k).map(|r| chosen.iter().map(|&c| b[r][c].clone()).collect()).collect();
    let mut rhs: Vec<Rat> = resid.iter().map(|r| -r.clone()).collect();
    let delta = solve_rational(&mut mat, &mut rhs).ok_or(FitError::ConstraintRankDeficient)?;
    let mut out = poly;
    for (slot, &c) in chosen.iter().enumerate() {
        let (i, j) = mons[c];
        out.add_term(i, j, delta[slot].clone());
    }
    debug_assert!(points.iter().all(|(x, y)| out.eval(x, y).is_zero()));
    Ok(out)
}

fn solve_rational(a: &mut [Vec<Rat>], b: &mut [Rat]) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let t = &a[col][c] * &f;
                a[r][c] -= t;
            }
            let t = &b[col] * &f;
            b[r] -= t;
        }
    }
    let mut x = vec![Rat::zero(); n];
    for col in (0..n).rev() {
        let mut v = b[col].clone();
        for c in col + 1..n {
            v -= &a[col][c] * &x[c];
        }
        if a[col][col].is_zero() {
            return None;
        }
        x[col] = v / &a[col][col];
    }
    Some(x)
}

use num_traits::One;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i};

    fn grid(n: i64) -> Vec<(Rat, Rat)> {
        let mut pts = Vec::new();
        for i in 0..n {
            for j in 0..n {
                pts.push((
                    rat(2 * i - (n - 1), n - 1),
                    rat(2 * j - (n - 1), n - 1),
                ));
            }
        }
        pts
    }

    #[test]
    fn recovers_exact_quadric() {
        // sample 1 - x^2 - y^2 on a 5x5 grid; degree 2 fit must be exact
        let target = BivarPoly::from_terms([
            ((0, 0), rat_i(1)),
            ((2, 0), rat_i(-1)),
            ((0, 2), rat_i(-1)),
        ]);
        let samples: Vec<_> = grid(5)
            .into_iter()
            .map(|(x, y)| {
                let v = rat_to_f64(&target.eval(&x, &y));
                ((x, y), v)
            })
            .collect();
        let out = fit_polynomial(&samples, &FitOptions { degree: 2, ..Default::default() }).unwrap();
        assert_eq!(out.poly, target);
        assert!(out.rms_residual < 1e-9);
    }

    #[test]
    fn underfit_reports_residual_without_failing() {
        // indicator of the unit circle sampled on a grid, degree 1
        let samples: Vec<_> = grid(7)
            .into_iter()
            .map(|(x, y)| {
                let inside = rat_to_f64(&x) * rat_to_f64(&x) + rat_to_f64(&y) * rat_to_f64(&y) < 1.0;
                ((x, y), if inside { 1.0 } else { 0.0 })
            })
            .collect();
        let out = fit_polynomial(&samples, &FitOptions { degree: 1, ..Default::default() }).unwrap();
        assert!(out.rms_residual > 0.05);
    }

    #[test]
    fn rank_deficiency_advises_regularization() {
        // all samples on the line y = x makes degree-2 normal matrix singular
        let samples: Vec<_> = (0..12)
            .map(|k| {
                let t = rat(k, 11);
                ((t.clone(), t.clone()), 0.5)
            })
            .collect();
        let err = fit_polynomial(&samples, &FitOptions { degree: 2, ..Default::default() });
        assert!(matches!(err, Err(FitError::RankDeficient)));
        // with ridge it goes through
        let ok = fit_polynomial(
            &samples,
            &FitOptions { degree: 2, regularization: 1e-6, ..Default::default() },
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn zero_constraints_imposed_exactly() {
        let target = BivarPoly::from_terms([
            ((0, 0), rat_i(1)),
            ((2, 0), rat_i(-1)),
            ((0, 2), rat_i(-1)),
        ]);
        let samples: Vec<_> = grid(6)
            .into_iter()
            .map(|(x, y)| {
                let v = rat_to_f64(&target.eval(&x, &y)) + 1e-7;
                ((x, y), v)
            })
            .collect();
        let pins = vec![(rat_i(1), rat_i(0)), (rat_i(0), rat_i(1))];
        let out = fit_polynomial(
            &samples,
            &FitOptions { degree: 2, interpolate_zeros: pins.clone(), ..Default::default() },
        )
        .unwrap();
        for (x, y) in &pins {
            assert!(out.poly.eval(x, y).is_zero());
        }
    }
}
