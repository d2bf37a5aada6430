//! Realization of an admissible embedded planar graph as a refined algebraic
//! domain whose Poincaré-Reeb V-digraph is weakly isomorphic to the input.
//!
//! Pipeline: derive small parameters, add vertical segments at vertex
//! abscissae, rewire non-extremal vertices, assemble the embedded 1-complex,
//! thicken it into an implicit piecewise model with a fold inventory,
//! algebraize the boundary by a certified least-squares fit, excise pinned
//! conics at leaf caps and pockets, and finally re-sweep the exact
//! multi-curve domain and check weak isomorphism against the input.

pub mod algebraize;
pub mod excise;
pub mod field;
pub mod geom;
pub mod model;
pub mod thicken;
pub mod verify;

use crate::domain::DomainSpec;
use crate::rat::{rat_to_f64, Rat};
use crate::vdigraph::{validate_theorem_hypotheses, EmbeddedGraph, VDigraph};
use algebraize::Certificate;
use excise::{Excision, ExcisionKind};
use model::{Complex, Params, RewiredVertex, VerticalSegment};
use thicken::ThickenedModel;

pub use model::{derive_params, rewire, vertical_segments};
pub use thicken::thicken;

#[derive(Clone, Debug)]
pub struct RealizationConfig {
    /// Ascending fit degrees to try.
    pub fit_degrees: Vec<u32>,
    /// Denominator bound when rounding fitted coefficients.
    pub denominator_bound: u64,
    /// Field sample grid resolution per axis.
    pub sample_grid: usize,
    /// Stop before algebraization and report the numeric model instead.
    pub piecewise_only: bool,
    /// Raster resolution for the piecewise/numeric graphs.
    pub raster_resolution: u32,
}

impl Default for RealizationConfig {
    fn default() -> Self {
        RealizationConfig {
            fit_degrees: vec![4, 6, 8, 10, 12, 14],
            denominator_bound: 1 << 20,
            sample_grid: 48,
            piecewise_only: false,
            raster_resolution: 512,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RealizeError {
    #[error("input graph fails the realization hypotheses: {0:?}")]
    Hypotheses(Vec<crate::vdigraph::HypothesisViolation>),
    #[error("model stage: {0}")]
    Model(#[from] model::ModelError),
    #[error("algebraize stage: {0}")]
    Algebraize(#[from] algebraize::AlgebraizeError),
    #[error("excision stage: {0}")]
    Excise(#[from] excise::ExciseError),
    #[error("verification stage: {0}")]
    Verify(#[from] verify::VerifyError),
    #[error("piecewise raster failed: {0}")]
    Raster(String),
}

/// Everything the pipeline produced, for reports and inspection.
pub struct RealizationArtifacts {
    pub params: Params,
    pub segments: Vec<VerticalSegment>,
    pub rewired: Vec<RewiredVertex>,
    pub complex: Complex,
    pub model: ThickenedModel,
    pub certificate: Option<Certificate>,
    pub excisions: Vec<Excision>,
    pub piecewise_graph: Option<VDigraph>,
}

pub struct Realization {
    pub spec: Option<DomainSpec>,
    pub graph: Option<VDigraph>,
    pub weakly_isomorphic: Option<bool>,
    pub artifacts: RealizationArtifacts,
}

/// Full pipeline. In piecewise mode the result carries the numeric raster
/// graph only and no algebraic domain.
pub fn realize(g: &EmbeddedGraph, cfg: &RealizationConfig) -> Result<Realization, RealizeError> {
    let violations = validate_theorem_hypotheses(g);
    if !violations.is_empty() {
        return Err(RealizeError::Hypotheses(violations));
    }
    let mut params = model::derive_params(g)?;
    let segments = model::vertical_segments(g, &params);
    let rewired = model::rewire(g, &params)?;
    params.delta = model::finalize_delta(&params, &rewired);
    let complex = model::build_complex(g, &params, &segments, &rewired)?;
    let model = thicken::thicken(g, &params, &complex, &rewired);

    if cfg.piecewise_only {
        let bp = algebraize::candidate_basepoints(&model)
            .into_iter()
            .next()
            .ok_or_else(|| RealizeError::Raster("no basepoint candidate".into()))?;
        let raster = field::field_raster_graph(
            &model,
            (rat_to_f64(&bp.0), rat_to_f64(&bp.1)),
            cfg.raster_resolution,
        )
        .map_err(|e| RealizeError::Raster(e.to_string()))?;
        let graph = algebraize::raster_to_vdigraph(&raster);
        let input = g.to_vdigraph();
        let weak = crate::vdigraph::is_weakly_isomorphic(&graph, &input);
        return Ok(Realization {
            spec: None,
            graph: Some(graph.clone()),
            weakly_isomorphic: Some(weak),
            artifacts: RealizationArtifacts {
                params,
                segments,
                rewired,
                complex,
                model,
                certificate: None,
                excisions: Vec::new(),
                piecewise_graph: Some(graph),
            },
        });
    }

    // one degree at a time: if excision placement or the final verification
    // fails, retry the rest of the schedule rather than giving up
    let vertex_ids: Vec<String> = g.vertices.iter().map(|v| v.id.clone()).collect();
    let mut last_err: Option<RealizeError> = None;
    let mut remaining: &[u32] = &cfg.fit_degrees;
    while !remaining.is_empty() {
        let cert = match algebraize::algebraize(&model, remaining, cfg.denominator_bound, cfg.sample_grid) {
            Ok(c) => c,
            Err(e) => {
                return Err(last_err.unwrap_or(RealizeError::Algebraize(e)));
            }
        };
        let used = remaining.iter().position(|&d| d == cert.degree).unwrap_or(0);
        remaining = &remaining[used + 1..];
        let excisions = match excise::place_excisions(&model, &cert, &vertex_ids) {
            Ok(e) => e,
            Err(e) => {
                last_err = Some(RealizeError::Excise(e));
                continue;
            }
        };
        match verify::verify_final(g, &model, &cert, &excisions) {
            Ok(fin) => {
                return Ok(Realization {
                    spec: Some(fin.spec),
                    graph: Some(fin.graph),
                    weakly_isomorphic: Some(fin.weakly_isomorphic),
                    artifacts: RealizationArtifacts {
                        params,
                        segments,
                        rewired,
                        complex,
                        model,
                        certificate: Some(cert),
                        excisions,
                        piecewise_graph: None,
                    },
                });
            }
            Err(e) => {
                last_err = Some(RealizeError::Verify(e));
                continue;
            }
        }
    }
    Err(last_err.expect("schedule was nonempty"))
}

impl RealizationArtifacts {
    pub fn circle_count(&self) -> usize {
        self.excisions
            .iter()
            .filter(|e| matches!(e.kind, ExcisionKind::LeafCircle { .. }))
            .count()
    }

    pub fn ellipse_count(&self) -> usize {
        self.excisions
            .iter()
            .filter(|e| matches!(e.kind, ExcisionKind::PocketEllipse { .. }))
            .count()
    }

    pub fn eps_summary(&self) -> (Rat, Rat, Rat, Rat) {
        (
            self.params.eps1.clone(),
            self.params.eps2.clone(),
            self.params.eps_prime.clone(),
            self.params.delta.clone(),
        )
    }
}
