//! Authoritative final check: run the exact sweep on the assembled
//! multi-curve domain and test weak isomorphism against the input V-digraph.

use super::algebraize::{analysis_graph, Certificate};
use super::excise::Excision;
use super::thicken::ThickenedModel;
use crate::algnum::RealAlg;
use crate::domain::{CurveSpec, DomainSpec};
use crate::poly::UniPoly;
use crate::rat::{rat_i, sign_of, Rat};
use crate::sweep::events::{crossing_events, Event, EventData, FoldKind, Opens};
use crate::sweep::SweepAnalysis;
use crate::vdigraph::{is_weakly_isomorphic, EmbeddedGraph, VDigraph};
use num_traits::One;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("no interior basepoint survives the excisions")]
    NoBasepoint,
    #[error("final sweep failed: {0}")]
    Sweep(String),
    #[error("the realized domain's digraph is not weakly isomorphic to the input")]
    NotWeaklyIsomorphic {
        exact: Box<VDigraph>,
        input: Box<VDigraph>,
    },
}

pub struct FinalVerification {
    pub spec: DomainSpec,
    pub graph: VDigraph,
    pub analysis: SweepAnalysis,
    pub weakly_isomorphic: bool,
}

/// Assemble the output domain and verify it end to end.
pub fn verify_final(
    g: &EmbeddedGraph,
    model: &ThickenedModel,
    cert: &Certificate,
    excisions: &[Excision],
) -> Result<FinalVerification, VerifyError> {
    let mut curves = vec![CurveSpec { id: "outer".into(), f: cert.poly.clone() }];
    for (i, e) in excisions.iter().enumerate() {
        curves.push(CurveSpec { id: format!("exc{i}"), f: e.poly.clone() });
    }
    // basepoint: an interior complex point strictly positive on all curves
    let basepoint = super::algebraize::candidate_basepoints(model)
        .into_iter()
        .find(|bp| curves.iter().all(|c| sign_of(&c.f.eval(&bp.0, &bp.1)) > 0))
        .ok_or(VerifyError::NoBasepoint)?;
    let spec = DomainSpec { curves, basepoint: basepoint.clone(), window: model.window.clone() };

    // every vertical tangency of the outer curve must lie strictly inside an
    // excised conic; then the final sweep needs no outer-fold events at all
    {
        let fy = cert.poly.derive(crate::poly::Var::Y);
        let masks: Vec<crate::interval64::IPoly64> =
            excisions.iter().map(|e| crate::interval64::IPoly64::new(&e.poly)).collect();
        let skip = |bx: &crate::rat::RatInterval, by: &crate::rat::RatInterval| -> bool {
            let ix = crate::interval64::I64::from_rat_interval(bx);
            let iy = crate::interval64::I64::from_rat_interval(by);
            masks.iter().any(|m| m.eval(ix, iy).hi < 0.0)
        };
        crate::poly::solve::verify_no_solutions_outside_masked(
            &cert.poly,
            &fy,
            &model.window,
            &[],
            40,
            &skip,
        )
        .map_err(|cell| {
            VerifyError::Sweep(format!(
                "outer-curve vertical tangency outside all excisions near ({:.4}, {:.4})",
                crate::rat::rat_to_f64(&cell.x.mid()),
                crate::rat::rat_to_f64(&cell.y.mid())
            ))
        })?;
    }

    let events = final_events(&spec, excisions).map_err(VerifyError::Sweep)?;
    let polys = spec.polys();
    let analysis = SweepAnalysis::analyze_with_events(&polys, &model.window, &basepoint, events)
        .map_err(|e| VerifyError::Sweep(e.to_string()))?;
    let graph = analysis_graph(&analysis);
    let input_graph = g.to_vdigraph();
    let ok = is_weakly_isomorphic(&graph, &input_graph);
    if !ok {
        return Err(VerifyError::NotWeaklyIsomorphic {
            exact: Box::new(graph),
            input: Box::new(input_graph),
        });
    }
    Ok(FinalVerification { spec, graph, analysis, weakly_isomorphic: ok })
}

/// Events of the final domain: the outer curve's vertical tangencies are all
/// strictly inside excised conics (certified earlier), so the sweep's events
/// are the conic extremes and the outer-conic crossings.
fn final_events(spec: &DomainSpec, excisions: &[Excision]) -> Result<Vec<Event>, String> {
    let mut events = Vec::new();
    let outer = &spec.curves[0].f;
    for (i, exc) in excisions.iter().enumerate() {
        let curve_idx = i + 1;
        events.extend(conic_fold_events(curve_idx, exc));
        let crossings = crossing_events(0, curve_idx, outer, &exc.poly, &spec.window)
            .map_err(|e| e.to_string())?;
        if crossings.len() != 2 {
            return Err(format!(
                "conic {i}: expected 2 crossing events with the outer curve, found {}",
                crossings.len()
            ));
        }
        events.extend(crossings);
    }
    Ok(events)
}

/// The two vertical tangencies of an excision conic, with exact witnesses.
fn conic_fold_events(curve_idx: usize, exc: &Excision) -> Vec<Event> {
    let spec = &exc.spec;
    let (cx, cy) = (&spec.center.0, &spec.center.1);
    // x-extremes: roots of a1 (x - cx)^2 - r
    let witness = UniPoly::from_coeffs(vec![
        &spec.a1 * cx * cx - &spec.r,
        &spec.a1 * cx * rat_i(-2),
        spec.a1.clone(),
    ]);
    let half_hi = {
        // rational upper bound for sqrt(r / a1)
        let h = &spec.r / &spec.a1;
        let mut hi = crate::rat::rat_from_f64_with_denom(crate::rat::rat_to_f64(&h).sqrt() * 1.2 + 1e-12, 1 << 20);
        while &(&hi * &hi) < &h {
            hi = hi * crate::rat::rat(3, 2);
        }
        hi
    };
    let mut out = Vec::new();
    for right in [false, true] {
        let (lo, hi) = if right { (cx.clone(), cx + &half_hi) } else { (cx - &half_hi, cx.clone()) };
        let x = RealAlg::from_root(witness.clone(), lo, hi);
        // exterior-positive conic has d2/dy2 = 2 a2 > 0: indefinite; the arms
        // open away from the center
        let opens = if right { Opens::Left } else { Opens::Right };
        out.push(Event {
            x,
            y: RealAlg::exact(cy.clone()),
            data: EventData::Fold { curve: curve_idx, kind: FoldKind::Indefinite, opens },
        });
    }
    let _ = Rat::one();
    out
}
