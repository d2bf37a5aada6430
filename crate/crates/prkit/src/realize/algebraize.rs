//! Turn the thickened model into a certified polynomial boundary: sample the
//! field, fit per degree schedule, round to rationals, re-impose the pinned
//! points exactly, then certify the exact polynomial (non-singularity in the
//! box, the fold inventory, and agreement of the single-curve Poincaré-Reeb
//! digraph with the model's numeric raster graph).

use super::field::{field_raster_graph, sample_field};
use super::thicken::{FoldOwner, ThickenedModel};
use crate::algnum::RealAlg;
use crate::poly::fit::{fit_polynomial_weighted, FitOptions};
use crate::poly::solve::{verify_no_solutions_outside, verify_triple_empty, Box2};
use crate::poly::{BivarPoly, Var};
use crate::rat::{rat_to_f64, Rat};
use crate::sweep::SweepAnalysis;
use crate::vdigraph::is_weakly_isomorphic;
use num_traits::{One, Signed};

#[derive(Debug, thiserror::Error)]
pub enum AlgebraizeError {
    #[error("no degree in the schedule {schedule:?} certified; last failure: {last}")]
    ScheduleExhausted { schedule: Vec<u32>, last: String },
    #[error("field sampling produced too few samples")]
    TooFewSamples,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub poly: BivarPoly,
    pub degree: u32,
    pub rms_residual: f64,
    pub raster_agrees: bool,
    pub basepoint: (Rat, Rat),
}

/// A rational interior point to grow the component from: the midpoint of an
/// original-edge piece of the complex, verified strictly inside later.
pub fn candidate_basepoints(model: &ThickenedModel) -> Vec<(Rat, Rat)> {
    let mut out = Vec::new();
    for piece in &model.complex.pieces {
        if !matches!(piece.kind, super::model::PieceKind::EdgePart { .. }) {
            continue;
        }
        for w in piece.points.windows(2) {
            let mx = (&w[0].0 + &w[1].0) / Rat::from_integer(2.into());
            let my = (&w[0].1 + &w[1].1) / Rat::from_integer(2.into());
            out.push((mx, my));
        }
    }
    // fall back to slant midpoints for degenerate tiny graphs
    for piece in &model.complex.pieces {
        if matches!(piece.kind, super::model::PieceKind::Horizontal { .. }) {
            for w in piece.points.windows(2) {
                let mx = (&w[0].0 + &w[1].0) / Rat::from_integer(2.into());
                let my = (&w[0].1 + &w[1].1) / Rat::from_integer(2.into());
                out.push((mx, my));
            }
        }
    }
    out
}

/// Run the degree schedule until a polynomial certifies.
pub fn algebraize(
    model: &ThickenedModel,
    schedule: &[u32],
    denominator_bound: u64,
    grid: usize,
) -> Result<Certificate, AlgebraizeError> {
    let samples = sample_field(model, grid);
    if samples.len() < 32 {
        return Err(AlgebraizeError::TooFewSamples);
    }
    let pins: Vec<(Rat, Rat)> = model.pins.iter().map(|p| p.at.clone()).collect();
    let mut last = String::from("schedule empty");
    for &degree in schedule {
        let opts = FitOptions {
            degree,
            regularization: 1e-9,
            denominator_bound,
            interpolate_zeros: Vec::new(),
        };
        let fit = match fit_polynomial_weighted(&samples, &opts) {
            Ok(f) => f,
            Err(e) => {
                last = format!("degree {degree}: fit failed: {e}");
                continue;
            }
        };
        // tiny asymmetry term so event abscissae of symmetric inputs split,
        // then re-impose the pinned zeros exactly
        let scale = fit
            .poly
            .terms()
            .map(|(_, c)| c.abs())
            .max()
            .unwrap_or_else(Rat::one);
        let tiny = scale / Rat::from_integer((1u64 << 26).into());
        let mut poly = fit.poly.clone();
        poly.add_term(1, 1, tiny.clone());
        poly.add_term(0, 1, -tiny / Rat::from_integer(3.into()));
        let poly = match crate::poly::fit::impose_interpolation_zeros(poly, degree, &pins) {
            Ok(p) => p,
            Err(e) => {
                last = format!("degree {degree}: pin imposition failed: {e}");
                continue;
            }
        };
        let dbg = std::env::var("PRKIT_DEBUG").is_ok();
        if dbg {
            eprintln!("[algebraize] degree {degree}: rms={:.3e}, certifying...", fit.rms_residual);
        }
        let t0 = std::time::Instant::now();
        match certify(model, &poly, degree, fit.rms_residual) {
            Ok(cert) => {
                if dbg {
                    eprintln!("[algebraize] degree {degree} certified in {:?}", t0.elapsed());
                }
                return Ok(cert);
            }
            Err(e) => {
                if dbg {
                    eprintln!("[algebraize] degree {degree} failed in {:?}: {e}", t0.elapsed());
                }
                last = format!("degree {degree}: {e}");
            }
        }
    }
    Err(AlgebraizeError::ScheduleExhausted { schedule: schedule.to_vec(), last })
}

fn certify(
    model: &ThickenedModel,
    poly: &BivarPoly,
    degree: u32,
    rms: f64,
) -> Result<Certificate, String> {
    let dbg = std::env::var("PRKIT_DEBUG").is_ok();
    let mut mark = {
        let mut t = std::time::Instant::now();
        move |label: &str| {
            if dbg {
                eprintln!("[certify] {label}: {:?}", t.elapsed());
                t = std::time::Instant::now();
            }
        }
    };
    let window = &model.window;
    let fx = poly.derive(Var::X);
    let fy = poly.derive(Var::Y);

    // (ii) fold inventory first: cheap and catches bad fits immediately.
    // Existence and kind come from exact fiber counts at the window's sides;
    // the no-extra check below then makes the inventory exhaustive.
    for (ti, target) in model.inventory.targets.iter().enumerate() {
        if dbg {
            eprintln!("[certify] fold target {ti}...");
        }
        check_fold_by_counting(poly, target).map_err(|e| format!("fold target {ti}: {e}"))?;
    }
    mark("fold windows");
    let allowed: Vec<Box2> = model.inventory.targets.iter().map(|t| t.window.clone()).collect();
    verify_no_solutions_outside(poly, &fy, window, &allowed, 40).map_err(|cell| {
        format!(
            "unexpected vertical tangency near ({:.4}, {:.4})",
            rat_to_f64(&cell.x.mid()),
            rat_to_f64(&cell.y.mid())
        )
    })?;
    mark("no extra folds");

    // (i) non-singular inside the box
    verify_triple_empty(poly, &fx, &fy, window, 40).map_err(|cell| {
        format!(
            "possible singular point near ({:.4}, {:.4})",
            rat_to_f64(&cell.x.mid()),
            rat_to_f64(&cell.y.mid())
        )
    })?;
    mark("nonsingular");

    // (iii) the single-curve region's shape agrees with the numeric raster of
    // the piecewise model (both rasterized the same way; the exact sweep of
    // the final multi-curve domain remains the authoritative check)
    let basepoint = pick_basepoint(model, poly).ok_or("no interior basepoint found")?;
    let bp_f64 = (rat_to_f64(&basepoint.0), rat_to_f64(&basepoint.1));
    let ip = crate::interval64::IPoly64::new(poly);
    let poly_raster = crate::sweep::raster::raster_prgraph_fn(
        window,
        &|x, y| {
            let v = ip.eval(crate::interval64::I64::point(x), crate::interval64::I64::point(y));
            (v.lo + v.hi) / 2.0 >= 0.0
        },
        bp_f64,
        512,
    )
    .map_err(|e| format!("poly raster failed: {e}"))?;
    let raster = field_raster_graph(model, bp_f64, 512)
        .map_err(|e| format!("model raster failed: {e}"))?;
    let poly_graph = raster_to_vdigraph(&poly_raster);
    let raster_graph = raster_to_vdigraph(&raster);
    mark("rasters");
    let agrees = is_weakly_isomorphic(&poly_graph, &raster_graph);
    if !agrees {
        return Err(format!(
            "fitted-curve raster digraph ({} vertices) disagrees with the model raster ({} vertices)",
            poly_graph.vertices.len(),
            raster_graph.vertices.len()
        ));
    }
    Ok(Certificate { poly: poly.clone(), degree, rms_residual: rms, raster_agrees: agrees, basepoint })
}

/// Exact fold-existence check: count the fiber intervals of {f >= 0} clipped
/// to the window's y-range at both x-sides of the window. A definite fold is
/// a birth/death (0 <-> 1), an indefinite fold a split/merge (2 <-> 1).
fn check_fold_by_counting(
    f: &BivarPoly,
    target: &crate::realize::thicken::FoldTarget,
) -> Result<(), String> {
    let count = |x: &Rat| -> Result<usize, String> {
        let fib = crate::sweep::fiber::fiber_at(std::slice::from_ref(f), x, &target.count_y)
            .map_err(|e| e.to_string())?;
        Ok(fib.intervals.len())
    };
    let left = count(&target.window.x.lo)?;
    let right = count(&target.window.x.hi)?;
    let expected: [(usize, usize); 2] = if target.definite {
        [(0, 1), (1, 0)]
    } else {
        [(2, 1), (1, 2)]
    };
    if !expected.contains(&(left, right)) {
        return Err(format!(
            "fiber counts ({left}, {right}) across the window do not match a {} fold",
            if target.definite { "definite" } else { "indefinite" }
        ));
    }
    Ok(())
}

fn pick_basepoint(model: &ThickenedModel, f: &BivarPoly) -> Option<(Rat, Rat)> {
    for bp in candidate_basepoints(model) {
        if f.eval(&bp.0, &bp.1).is_positive() {
            return Some(bp);
        }
    }
    None
}

pub fn analysis_graph(an: &SweepAnalysis) -> crate::vdigraph::VDigraph {
    let vertices = an
        .graph
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| crate::vdigraph::VdVertex { id: format!("v{i}"), value: v.value.clone() })
        .collect();
    let edges = an
        .graph
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| crate::vdigraph::VdEdge { id: format!("e{i}"), src: e.src, dst: e.dst })
        .collect();
    crate::vdigraph::VDigraph { vertices, edges }
}

pub fn raster_to_vdigraph(g: &crate::sweep::raster::RasterGraph) -> crate::vdigraph::VDigraph {
    let vertices = g
        .vertex_values
        .iter()
        .enumerate()
        .map(|(i, v)| crate::vdigraph::VdVertex { id: format!("r{i}"), value: RealAlg::exact(v.clone()) })
        .collect();
    let edges = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(s, d))| crate::vdigraph::VdEdge { id: format!("e{i}"), src: s, dst: d })
        .collect();
    crate::vdigraph::VDigraph { vertices, edges }
}

/// Does the fold owner of an inventory target sit on the leaf side that gets
/// a circle? Helper shared with the excision stage.
pub fn fold_owner_is_leaf(model: &ThickenedModel, target_idx: usize) -> bool {
    matches!(model.inventory.targets[target_idx].owner, FoldOwner::Leaf { .. })
}
