//! Placement and exact verification of the excision conics: one circle per
//! degree-1 vertex, pinned so the tube dies (or is born) at a corner exactly
//! over the vertex abscissa, and one ellipse per pocket, pinned so branch
//! events happen exactly over the branch vertex abscissa.

use super::algebraize::Certificate;
use super::thicken::{FoldOwner, ThickenedModel};
use crate::poly::solve::solve_system;
use crate::poly::{conic_poly, BivarPoly, ConicSign, ConicSpec};
use crate::rat::{rat, rat_i, sign_of, Rat, RatInterval};
use num_traits::Zero;

#[derive(Debug, thiserror::Error)]
pub enum ExciseError {
    #[error("circle at leaf {leaf}: {why}")]
    Circle { leaf: String, why: String },
    #[error("ellipse at pocket of vertex {vertex}: {why}")]
    Ellipse { vertex: String, why: String },
    #[error("conics {0} and {1} are not disjoint")]
    ConicsOverlap(usize, usize),
}

#[derive(Clone, Debug)]
pub struct Excision {
    pub spec: ConicSpec,
    pub poly: BivarPoly,
    /// index of the inventory fold this conic swallows
    pub swallows: usize,
    /// the rational x-value its pinned event lives at
    pub pinned_x: Rat,
    pub kind: ExcisionKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExcisionKind {
    LeafCircle { vertex: usize },
    PocketEllipse { vertex: usize },
}

/// Place and verify all excisions against the certified outer polynomial.
pub fn place_excisions(
    model: &ThickenedModel,
    cert: &Certificate,
    vertex_ids: &[String],
) -> Result<Vec<Excision>, ExciseError> {
    let f = &cert.poly;
    let delta = &model.delta;
    let mut out: Vec<Excision> = Vec::new();
    for (ti, target) in model.inventory.targets.iter().enumerate() {
        match &target.owner {
            FoldOwner::Leaf { vertex, is_max } => {
                let leaf_id = vertex_ids[*vertex].clone();
                let exc = place_leaf_circle(model, cert, ti, *is_max, *vertex)
                    .map_err(|why| ExciseError::Circle { leaf: leaf_id, why })?;
                out.push(exc);
            }
            FoldOwner::Pocket(pocket) => {
                let vid = vertex_ids[pocket.vertex].clone();
                let exc = place_pocket_ellipse(model, cert, ti, pocket)
                    .map_err(|why| ExciseError::Ellipse { vertex: vid, why })?;
                out.push(exc);
            }
        }
        let _ = (f, delta);
    }
    // pairwise disjointness of the conic curves
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let pts = solve_system(&out[i].poly, &out[j].poly, &model.window)
                .map_err(|_| ExciseError::ConicsOverlap(i, j))?;
            if !pts.is_empty() {
                return Err(ExciseError::ConicsOverlap(i, j));
            }
            // also: neither center inside the other
            let ci = &out[i].spec.center;
            let cj = &out[j].spec.center;
            if sign_of(&out[j].poly.eval(&ci.0, &ci.1)) <= 0
                || sign_of(&out[i].poly.eval(&cj.0, &cj.1)) <= 0
            {
                return Err(ExciseError::ConicsOverlap(i, j));
            }
        }
    }
    Ok(out)
}

fn leaf_pin(model: &ThickenedModel, vertex: usize) -> &super::thicken::PinnedPoint {
    model
        .pins
        .iter()
        .find(|p| p.vertex == vertex)
        .expect("leaf has a pinned point")
}

/// Circle through the pinned wall point at the leaf's abscissa, centered
/// diagonally beyond the extended cap so the arc inside the tube is
/// x-monotone and the cut corner sits exactly on the leaf's vertical line.
fn place_leaf_circle(
    model: &ThickenedModel,
    cert: &Certificate,
    target_idx: usize,
    is_max: bool,
    vertex: usize,
) -> Result<Excision, String> {
    let delta = &model.delta;
    let pin = leaf_pin(model, vertex).clone();
    let q_pin = pin.at.clone();
    let tip = pin.tip.clone();
    let outward = if is_max { rat_i(1) } else { rat_i(-1) };
    let mut last_err = String::from("no candidate tried");
    for (ux, uy) in [(3, 3), (2, 4), (4, 2), (3, 5), (5, 3), (2, 6)] {
        let cx = &tip.0 + &outward * (delta * rat(ux, 2));
        let cy = &tip.1 + delta * rat(uy, 2);
        let r = {
            let dx = &cx - &q_pin.0;
            let dy = &cy - &q_pin.1;
            &dx * &dx + &dy * &dy
        };
        let spec = ConicSpec::circle((cx.clone(), cy.clone()), r.clone(), ConicSign::ExteriorPositive);
        let poly = conic_poly(&spec);
        match verify_circle(model, cert, target_idx, &poly, &spec, &q_pin) {
            Ok(()) => {
                return Ok(Excision {
                    spec,
                    poly,
                    swallows: target_idx,
                    pinned_x: q_pin.0.clone(),
                    kind: ExcisionKind::LeafCircle { vertex },
                });
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}


fn verify_circle(
    model: &ThickenedModel,
    cert: &Certificate,
    target_idx: usize,
    circle: &BivarPoly,
    spec: &ConicSpec,
    q_pin: &(Rat, Rat),
) -> Result<(), String> {
    let f = &cert.poly;
    // the pinned point is on both curves by construction
    if !f.eval(&q_pin.0, &q_pin.1).is_zero() || !circle.eval(&q_pin.0, &q_pin.1).is_zero() {
        return Err("pinned point drifted off the curves".into());
    }
    // exactly two crossings with the outer curve, both transverse, one pinned
    let pts = solve_system(f, circle, &model.window).map_err(|e| e.to_string())?;
    if pts.len() != 2 {
        return Err(format!("circle meets the outer curve in {} points, need 2", pts.len()));
    }
    let mut pin_seen = false;
    for p in &pts {
        if !p.transverse {
            return Err("circle crossing is not transverse".into());
        }
        if p.x.is_equal(&crate::algnum::RealAlg::exact(q_pin.0.clone()))
            && p.y.is_equal(&crate::algnum::RealAlg::exact(q_pin.1.clone()))
        {
            pin_seen = true;
        }
    }
    if !pin_seen {
        return Err("pinned crossing not among the two intersections".into());
    }
    // the window that carries the cap fold must be swallowed whole, so the
    // tangency (wherever exactly it converged) is off the final closure; the
    // final verification re-checks this globally
    let w = &model.inventory.targets[target_idx].window;
    let wv = circle.eval_interval(&w.x, &w.y);
    if wv.sign() != Some(-1) {
        return Err("fold window not strictly inside the excision disk".into());
    }
    // the circle's own axis extremes lie outside the domain (f < 0), so the
    // excision adds no vertical-tangency events on the closure
    check_conic_extremes_outside(f, spec)?;
    Ok(())
}

/// All four axis extremes of the conic must satisfy f < 0.
fn check_conic_extremes_outside(f: &BivarPoly, spec: &ConicSpec) -> Result<(), String> {
    let (cx, cy) = (&spec.center.0, &spec.center.1);
    // x-extremes: roots of a1 (x - cx)^2 = r on the line y = cy
    let half_x = sqrt_rat_interval(&(&spec.r / &spec.a1));
    let half_y = sqrt_rat_interval(&(&spec.r / &spec.a2));
    for (axis_x, half) in [(true, half_x), (false, half_y)] {
        for sign in [1i64, -1] {
            let q = if axis_x { f.restrict_y(cy) } else { f.restrict_x(cx) };
            // the extreme coordinate is center +- sqrt(h): a root of
            // (t - c)^2 - h
            let c = if axis_x { cx } else { cy };
            let h = if axis_x { &spec.r / &spec.a1 } else { &spec.r / &spec.a2 };
            let wit = crate::poly::UniPoly::from_coeffs(vec![
                c * c - &h,
                c * rat_i(-2),
                Rat::one(),
            ]);
            let (lo, hi) = if sign > 0 {
                (c.clone(), c + &half.1)
            } else {
                (c - &half.1, c.clone())
            };
            let root = crate::algnum::RealAlg::from_root(wit, lo, hi);
            match crate::sweep::events::sign_at_point_uni(&q, &root, 96) {
                Some(s) if s < 0 => {}
                Some(_) => return Err("conic axis extreme is not outside the domain".into()),
                None => return Err("conic axis extreme sign undecided".into()),
            }
        }
    }
    Ok(())
}

use num_traits::One;

/// Rational bracket [lo_bound, hi_bound] for sqrt(h), h > 0.
fn sqrt_rat_interval(h: &Rat) -> (Rat, Rat) {
    let x = crate::rat::rat_to_f64(h).sqrt();
    let lo = crate::rat::rat_from_f64_with_denom((x * 0.9).max(0.0), 1 << 20);
    let mut hi = crate::rat::rat_from_f64_with_denom(x * 1.1 + 1e-9, 1 << 20);
    // ensure hi^2 >= h
    while &(&hi * &hi) < h {
        hi = hi * rat(3, 2);
    }
    (lo, hi)
}

/// Ellipse pinned so its inner x-extreme sits exactly on the branch vertex
/// abscissa, tall enough to cross both tube walls of the pocket.
fn place_pocket_ellipse(
    model: &ThickenedModel,
    cert: &Certificate,
    target_idx: usize,
    pocket: &super::model::Pocket,
) -> Result<Excision, String> {
    let _f = &cert.poly;
    let delta = &model.delta;
    let p = &pocket.x;
    let s_hat = (&pocket.h_lo + &pocket.h_hi) / rat_i(2);
    let gap = &pocket.h_hi - &pocket.h_lo;
    for shrink in [rat_i(1), rat(7, 8), rat(3, 4)] {
        let cx = if pocket.side_left { p - delta } else { p + delta };
        // a1 (p - cx)^2 = r with a1 = 1
        let r = delta * delta;
        // vertical half-reach H = (gap - delta)/2 scaled down on retries
        let reach = (&gap - delta) / rat_i(2) * &shrink;
        if !reach.is_positive_strict() {
            continue;
        }
        // a2 = r / H^2
        let a2 = &r / (&reach * &reach);
        let spec = ConicSpec::new(
            (cx.clone(), s_hat.clone()),
            Rat::one(),
            a2,
            r.clone(),
            ConicSign::ExteriorPositive,
        );
        let poly = conic_poly(&spec);
        if verify_ellipse(model, cert, target_idx, &poly, &spec, p, &s_hat).is_ok() {
            return Ok(Excision {
                spec,
                poly,
                swallows: target_idx,
                pinned_x: p.clone(),
                kind: ExcisionKind::PocketEllipse { vertex: pocket.vertex },
            });
        }
    }
    Err("no ellipse size verified (tried 3 shrink factors)".into())
}

trait StrictPos2 {
    fn is_positive_strict(&self) -> bool;
}

impl StrictPos2 for Rat {
    fn is_positive_strict(&self) -> bool {
        sign_of(self) > 0
    }
}

fn verify_ellipse(
    model: &ThickenedModel,
    cert: &Certificate,
    target_idx: usize,
    ellipse: &BivarPoly,
    spec: &ConicSpec,
    p: &Rat,
    s_hat: &Rat,
) -> Result<(), String> {
    let f = &cert.poly;
    // pinned inner extreme: on the ellipse, strictly inside the domain
    if !ellipse.eval(p, s_hat).is_zero() {
        return Err("inner extreme not on the ellipse".into());
    }
    if sign_of(&f.eval(p, s_hat)) <= 0 {
        return Err("inner extreme not strictly inside the outer curve".into());
    }
    // exactly two transverse crossings with the outer curve
    let pts = solve_system(f, ellipse, &model.window).map_err(|e| e.to_string())?;
    if pts.len() != 2 {
        return Err(format!("ellipse meets the outer curve in {} points, need 2", pts.len()));
    }
    if pts.iter().any(|q| !q.transverse) {
        return Err("ellipse crossing is not transverse".into());
    }
    // the window that carries the U-turn fold must be swallowed whole
    let w = &model.inventory.targets[target_idx].window;
    let wv = ellipse.eval_interval(&w.x, &w.y);
    if wv.sign() != Some(-1) {
        return Err("fold window not strictly inside the excision ellipse".into());
    }
    // outer extreme is outside the domain; top/bottom extremes are rational
    let outer_x = if matches!(spec.sign, ConicSign::ExteriorPositive) {
        // extreme away from the vertex line
        let cx = &spec.center.0;
        cx + (cx - p)
    } else {
        unreachable!()
    };
    if sign_of(&f.eval(&outer_x, s_hat)) >= 0 {
        return Err("outer extreme of the ellipse is not outside the domain".into());
    }
    let _ = RatInterval::new(Rat::zero(), Rat::one());
    Ok(())
}
