//! Floating-point scalar field whose zero level approximates the thickened
//! boundary: delta^2 minus a soft minimum of squared distances to the
//! complex pieces. Only the sampled values feed the fit; nothing downstream
//! trusts the field itself.

use super::thicken::ThickenedModel;
use crate::rat::{rat_from_f64_with_denom, rat_to_f64, Rat};

#[derive(Clone, Debug)]
pub struct FieldSegment {
    pub a: (f64, f64),
    pub b: (f64, f64),
}

#[derive(Clone, Debug)]
pub struct Field {
    pub segments: Vec<FieldSegment>,
    pub delta: f64,
    pub beta: f64,
}

impl Field {
    pub fn new(model: &ThickenedModel) -> Field {
        let mut segments = Vec::new();
        for piece in &model.complex.pieces {
            for w in piece.points.windows(2) {
                segments.push(FieldSegment {
                    a: (rat_to_f64(&w[0].0), rat_to_f64(&w[0].1)),
                    b: (rat_to_f64(&w[1].0), rat_to_f64(&w[1].1)),
                });
            }
        }
        let delta = rat_to_f64(&model.delta);
        // sharp soft-min: exponential blending localized to ~delta/2
        let beta = 16.0 / (delta * delta);
        Field { segments, delta, beta }
    }

    fn d2_segment(&self, s: &FieldSegment, q: (f64, f64)) -> f64 {
        let vx = s.b.0 - s.a.0;
        let vy = s.b.1 - s.a.1;
        let wx = q.0 - s.a.0;
        let wy = q.1 - s.a.1;
        let len2 = vx * vx + vy * vy;
        let t = if len2 > 0.0 { ((wx * vx + wy * vy) / len2).clamp(0.0, 1.0) } else { 0.0 };
        let dx = wx - t * vx;
        let dy = wy - t * vy;
        dx * dx + dy * dy
    }

    /// delta^2 - softmin_i d_i^2: positive inside the thickened region.
    pub fn eval(&self, q: (f64, f64)) -> f64 {
        let d2: Vec<f64> = self.segments.iter().map(|s| self.d2_segment(s, q)).collect();
        let m = d2.iter().cloned().fold(f64::INFINITY, f64::min);
        // log-sum-exp around the minimum for numerical stability
        let mut acc = 0.0;
        for v in &d2 {
            acc += (-self.beta * (v - m)).exp();
        }
        let soft = m - acc.ln() / self.beta;
        self.delta * self.delta - soft
    }
}

/// Sample the field on a coarse grid over the box plus dense rings along the
/// offset boundary on both sides. Ring samples get full weight; grid samples
/// far from the boundary are downweighted so the fit spends its freedom near
/// the zero level while still tracking the (polynomial-friendly) quadratic
/// far field.
pub fn sample_field(model: &ThickenedModel, grid: usize) -> Vec<((Rat, Rat), f64, f64)> {
    let field = Field::new(model);
    let x_lo = rat_to_f64(&model.window.x.lo);
    let x_hi = rat_to_f64(&model.window.x.hi);
    let y_lo = rat_to_f64(&model.window.y.lo);
    let y_hi = rat_to_f64(&model.window.y.hi);
    let d2 = field.delta * field.delta;
    let mut samples: Vec<((Rat, Rat), f64, f64)> = Vec::new();
    let denom = 1u64 << 24;
    let push = |x: f64, y: f64, full_weight: bool, samples: &mut Vec<((Rat, Rat), f64, f64)>| {
        if !(x.is_finite() && y.is_finite()) {
            return;
        }
        if x < x_lo || x > x_hi || y < y_lo || y > y_hi {
            return;
        }
        let v = field.eval((x, y));
        let w = if full_weight { 1.0 } else { d2 / (d2 + v.abs()) };
        samples.push((
            (rat_from_f64_with_denom(x, denom), rat_from_f64_with_denom(y, denom)),
            v,
            w,
        ));
    };
    for i in 0..grid {
        for j in 0..grid {
            let x = x_lo + (x_hi - x_lo) * (i as f64 + 0.5) / grid as f64;
            let y = y_lo + (y_hi - y_lo) * (j as f64 + 0.5) / grid as f64;
            push(x, y, false, &mut samples);
        }
    }
    // dense full-weight sampling of every pocket region, where the field must
    // dip negative between two tubes
    for target in &model.inventory.targets {
        if let super::thicken::FoldOwner::Pocket(pocket) = &target.owner {
            let px = rat_to_f64(&pocket.x);
            let x0 = if rat_to_f64(&pocket.h_lo) < rat_to_f64(&pocket.h_hi) {
                // pocket x-extent: from the horizontals' half-length to the spine
                px
            } else {
                px
            };
            let _ = x0;
            let h_lo = rat_to_f64(&pocket.h_lo);
            let h_hi = rat_to_f64(&pocket.h_hi);
            let depth = 6.0 * field.delta;
            let (xa, xb) = if pocket.side_left { (px - depth, px) } else { (px, px + depth) };
            let n_steps = 14usize;
            for i in 0..=n_steps {
                for j in 0..=n_steps {
                    let x = xa + (xb - xa) * i as f64 / n_steps as f64;
                    let y = h_lo + (h_hi - h_lo) * j as f64 / n_steps as f64;
                    push(x, y, true, &mut samples);
                }
            }
        }
    }
    // rings: along each segment, normal offsets at several multiples of delta
    let delta = field.delta;
    for s in &field.segments {
        let vx = s.b.0 - s.a.0;
        let vy = s.b.1 - s.a.1;
        let len = (vx * vx + vy * vy).sqrt();
        if len == 0.0 {
            continue;
        }
        let steps = ((len / (0.35 * delta)).ceil() as usize).clamp(2, 400);
        let (nx, ny) = (-vy / len, vx / len);
        for k in 0..=steps {
            let t = k as f64 / steps as f64;
            let px = s.a.0 + t * vx;
            let py = s.a.1 + t * vy;
            for off in [-2.0, -1.6, -1.3, -1.15, -1.0, -0.85, -0.7, -0.4, 0.0, 0.4, 0.7, 1.0] {
                push(px + nx * off * delta, py + ny * off * delta, true, &mut samples);
            }
            // endpoint caps get radial fans
            if k == 0 || k == steps {
                for ang in 0..16 {
                    let a = ang as f64 * std::f64::consts::PI / 8.0;
                    for off in [0.5, 0.85, 1.0, 1.15, 1.4, 2.0] {
                        push(px + a.cos() * off * delta, py + a.sin() * off * delta, true, &mut samples);
                    }
                }
            }
        }
    }
    samples
}

/// Raster-based approximate PR graph of the field's positive region; the
/// "numeric sweep of the piecewise boundary" used by piecewise mode and as a
/// cross-check during algebraization.
pub fn field_raster_graph(
    model: &ThickenedModel,
    basepoint: (f64, f64),
    resolution: u32,
) -> Result<crate::sweep::raster::RasterGraph, crate::sweep::raster::RasterError> {
    let field = Field::new(model);
    crate::sweep::raster::raster_prgraph_fn(
        &model.window,
        &|x, y| field.eval((x, y)) >= 0.0,
        basepoint,
        resolution,
    )
}
