//! High-level operations on validated domains: the Poincaré-Reeb V-digraph,
//! critical values, fiber slices, and the raster cross-check, all expressed
//! over the public graph types.

use crate::algnum::RealAlg;
use crate::domain::{validate_domain, DomainError, DomainReport, DomainSpec};
use crate::rat::{rat_to_string, Rat};
use crate::sweep::events::{EventData, FoldKind};
use crate::sweep::fiber::{fiber_at, EndpointSrc};
use crate::sweep::raster::{raster_prgraph, RasterError};
use crate::vdigraph::{VDigraph, VdEdge, VdVertex};

/// Structural point attached to a Poincaré-Reeb vertex.
#[derive(Clone, Debug)]
pub struct ProvPoint {
    pub kind: String,
    pub curves: Vec<String>,
    pub x: RealAlg,
    pub y: RealAlg,
}

#[derive(Clone, Debug)]
pub struct PRResult {
    pub graph: VDigraph,
    /// Per-vertex structural points (parallel to `graph.vertices`).
    pub provenance: Vec<Vec<ProvPoint>>,
}

/// Validate the domain and compute its Poincaré-Reeb V-digraph.
pub fn build_poincare_reeb(spec: &DomainSpec) -> Result<(DomainReport, PRResult), DomainError> {
    let report = validate_domain(spec)?;
    let pr = pr_result_from_report(spec, &report);
    Ok((report, pr))
}

pub fn pr_result_from_report(spec: &DomainSpec, report: &DomainReport) -> PRResult {
    let an = &report.analysis;
    let mut vertices = Vec::with_capacity(an.graph.vertices.len());
    let mut provenance = Vec::with_capacity(an.graph.vertices.len());
    for (i, v) in an.graph.vertices.iter().enumerate() {
        vertices.push(VdVertex { id: format!("v{i}"), value: v.value.clone() });
        let prov = v
            .provenance
            .iter()
            .map(|&e| {
                let ev = &an.events[e];
                let (kind, curves) = match &ev.data {
                    EventData::Fold { curve, kind, .. } => (
                        match kind {
                            FoldKind::Definite => "fold-definite",
                            FoldKind::Indefinite => "fold-indefinite",
                            FoldKind::Unclassified => "fold-unclassified",
                        }
                        .to_string(),
                        vec![spec.curves[*curve].id.clone()],
                    ),
                    EventData::Crossing { curves, .. } => (
                        "crossing".to_string(),
                        vec![spec.curves[curves.0].id.clone(), spec.curves[curves.1].id.clone()],
                    ),
                    EventData::EdgeCross { .. } => ("edge".to_string(), Vec::new()),
                };
                ProvPoint { kind, curves, x: ev.x.clone(), y: ev.y.clone() }
            })
            .collect();
        provenance.push(prov);
    }
    let edges = an
        .graph
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| VdEdge { id: format!("e{i}"), src: e.src, dst: e.dst })
        .collect();
    PRResult { graph: VDigraph { vertices, edges }, provenance }
}

/// Critical x-values of the validated domain (x-coordinates of structural
/// points on the selected closure), deduplicated, ascending.
pub fn critical_x_values(spec: &DomainSpec) -> Result<Vec<RealAlg>, DomainError> {
    let report = validate_domain(spec)?;
    Ok(report.analysis.critical_values())
}

/// One maximal interval of a vertical fiber.
#[derive(Clone, Debug)]
pub struct SliceInterval {
    pub y_lo: RealAlg,
    pub y_hi: RealAlg,
    pub lo_curve: Option<String>,
    pub hi_curve: Option<String>,
    /// Belongs to the selected component. Exact inside open slabs; decided by
    /// adjacency overlap when `t` is a critical value.
    pub in_component: bool,
}

#[derive(Clone, Debug)]
pub struct SliceProfile {
    pub t: Rat,
    pub intervals: Vec<SliceInterval>,
}

#[derive(Debug, thiserror::Error)]
pub enum SliceError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("slice position {0} outside the working box")]
    OutsideBox(String),
    #[error("fiber computation failed: {0}")]
    Fiber(String),
}

/// Fiber of the domain closure at x = t with component membership flags.
pub fn slice_profile(spec: &DomainSpec, report: &DomainReport, t: &Rat) -> Result<SliceProfile, SliceError> {
    if !spec.window.x.contains(t) {
        return Err(SliceError::OutsideBox(rat_to_string(t)));
    }
    let an = &report.analysis;
    let fib = fiber_at(&an.curves, t, &spec.window.y).map_err(|e| SliceError::Fiber(e.to_string()))?;
    let t_alg = RealAlg::exact(t.clone());
    // locate: inside a slab, or on a critical value
    let mut slab = an.criticals.len();
    let mut on_critical = None;
    for (ci, c) in an.criticals.iter().enumerate() {
        match t_alg.cmp_exact(&c.x) {
            std::cmp::Ordering::Less => {
                slab = ci;
                break;
            }
            std::cmp::Ordering::Equal => {
                on_critical = Some(ci);
                break;
            }
            std::cmp::Ordering::Greater => {}
        }
    }
    let curve_name = |src: &EndpointSrc| match src {
        EndpointSrc::Curve(k) => Some(spec.curves[*k].id.clone()),
        EndpointSrc::Edge => None,
    };
    let mut intervals = Vec::with_capacity(fib.intervals.len());
    match on_critical {
        None => {
            // order-isomorphic to the slab fiber
            let marks = &an.marked_intervals[slab];
            if fib.intervals.len() != marks.len() {
                return Err(SliceError::Fiber(
                    "fiber disagrees with slab structure (is t critical?)".into(),
                ));
            }
            for (ii, iv) in fib.intervals.iter().enumerate() {
                intervals.push(SliceInterval {
                    y_lo: iv.lo.y.clone(),
                    y_hi: iv.hi.y.clone(),
                    lo_curve: curve_name(&iv.lo.src),
                    hi_curve: curve_name(&iv.hi.src),
                    in_component: marks[ii],
                });
            }
        }
        Some(ci) => {
            // adjacency overlap with marked intervals of the two neighbouring
            // slab fibers, plus marked events at this critical
            let neighbors: Vec<(usize, &Vec<bool>)> =
                vec![(ci, &an.marked_intervals[ci]), (ci + 1, &an.marked_intervals[ci + 1])];
            for iv in &fib.intervals {
                let mut marked = false;
                for &e in &an.criticals[ci].event_idxs {
                    if !an.marked_events[e] {
                        continue;
                    }
                    let ev = &an.events[e];
                    if ev.y.cmp_exact(&iv.lo.y) != std::cmp::Ordering::Less
                        && ev.y.cmp_exact(&iv.hi.y) != std::cmp::Ordering::Greater
                    {
                        marked = true;
                        break;
                    }
                }
                if !marked {
                    'outer: for (si, marks) in &neighbors {
                        for (jj, j) in an.slabs[*si].fiber.intervals.iter().enumerate() {
                            if !marks[jj] {
                                continue;
                            }
                            let disjoint = j.hi.y.cmp_exact(&iv.lo.y) == std::cmp::Ordering::Less
                                || iv.hi.y.cmp_exact(&j.lo.y) == std::cmp::Ordering::Less;
                            if !disjoint {
                                marked = true;
                                break 'outer;
                            }
                        }
                    }
                }
                intervals.push(SliceInterval {
                    y_lo: iv.lo.y.clone(),
                    y_hi: iv.hi.y.clone(),
                    lo_curve: curve_name(&iv.lo.src),
                    hi_curve: curve_name(&iv.hi.src),
                    in_component: marked,
                });
            }
        }
    }
    Ok(SliceProfile { t: t.clone(), intervals })
}

/// Approximate PR graph from the raster oracle, as a V-digraph comparable to
/// the exact result under weak isomorphism.
pub fn raster_oracle_graph(
    spec: &DomainSpec,
    resolution: u32,
) -> Result<VDigraph, RasterError> {
    let g = raster_prgraph(&spec.polys(), &spec.window, &spec.basepoint, resolution)?;
    let vertices = g
        .vertex_values
        .iter()
        .enumerate()
        .map(|(i, v)| VdVertex { id: format!("r{i}"), value: RealAlg::exact(v.clone()) })
        .collect();
    let edges = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(s, d))| VdEdge { id: format!("e{i}"), src: s, dst: d })
        .collect();
    Ok(VDigraph { vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::CurveSpec;
    use crate::poly::solve::Box2;
    use crate::poly::BivarPoly;
    use crate::rat::{rat, rat_i};
    use crate::vdigraph::is_weakly_isomorphic;

    fn circle() -> BivarPoly {
        BivarPoly::from_terms([((0, 0), rat_i(1)), ((2, 0), rat_i(-1)), ((0, 2), rat_i(-1))])
    }

    fn inner() -> BivarPoly {
        BivarPoly::from_terms([((0, 0), rat(-1, 4)), ((2, 0), rat_i(1)), ((0, 2), rat_i(1))])
    }

    fn annulus() -> DomainSpec {
        DomainSpec {
            curves: vec![
                CurveSpec { id: "outer".into(), f: circle() },
                CurveSpec { id: "inner".into(), f: inner() },
            ],
            basepoint: (rat(3, 4), rat_i(0)),
            window: Box2::new(rat_i(-3), rat_i(3), rat_i(-3), rat_i(3)),
        }
    }

    #[test]
    fn annulus_slices() {
        let (report, _) = build_poincare_reeb(&annulus()).unwrap();
        let s0 = slice_profile(&annulus(), &report, &rat_i(0)).unwrap();
        assert_eq!(s0.intervals.len(), 2);
        assert!(s0.intervals.iter().all(|i| i.in_component));
        assert_eq!(s0.intervals[0].hi_curve.as_deref(), Some("inner"));
        let s34 = slice_profile(&annulus(), &report, &rat(3, 4)).unwrap();
        assert_eq!(s34.intervals.len(), 1);
        let hi = s34.intervals[0].y_hi.to_f64();
        assert!((hi - (7.0f64).sqrt() / 4.0).abs() < 1e-9);
        // slice at a critical value
        let s1 = slice_profile(&annulus(), &report, &rat(1, 2)).unwrap();
        assert!(s1.intervals.iter().any(|i| i.in_component));
    }

    #[test]
    fn annulus_exact_vs_raster_weak_iso() {
        let (_, pr) = build_poincare_reeb(&annulus()).unwrap();
        let oracle = raster_oracle_graph(&annulus(), 512).unwrap();
        assert!(is_weakly_isomorphic(&pr.graph, &oracle));
    }

    #[test]
    fn disk_exact_vs_raster_weak_iso() {
        let disk = DomainSpec {
            curves: vec![CurveSpec { id: "c".into(), f: circle() }],
            basepoint: (rat_i(0), rat_i(0)),
            window: Box2::new(rat_i(-3), rat_i(3), rat_i(-3), rat_i(3)),
        };
        let (_, pr) = build_poincare_reeb(&disk).unwrap();
        assert_eq!(pr.graph.vertices.len(), 2);
        assert_eq!(pr.graph.edges.len(), 1);
        let oracle = raster_oracle_graph(&disk, 512).unwrap();
        assert!(is_weakly_isomorphic(&pr.graph, &oracle));
    }

    #[test]
    fn lens_weakly_iso_to_single_edge() {
        let shifted = BivarPoly::from_terms([((1, 0), rat_i(2)), ((2, 0), rat_i(-1)), ((0, 2), rat_i(-1))]);
        let lens = DomainSpec {
            curves: vec![
                CurveSpec { id: "a".into(), f: circle() },
                CurveSpec { id: "b".into(), f: shifted },
            ],
            basepoint: (rat(1, 2), rat_i(0)),
            window: Box2::new(rat_i(-3), rat_i(3), rat_i(-3), rat_i(3)),
        };
        let (_, pr) = build_poincare_reeb(&lens).unwrap();
        assert_eq!(pr.graph.vertices.len(), 3);
        // middle vertex carries both crossing points
        assert_eq!(pr.provenance[1].len(), 2);
        assert!(pr.provenance[1].iter().all(|p| p.kind == "crossing"));
        let single = VDigraph::new(
            vec![
                VdVertex { id: "s".into(), value: RealAlg::exact(rat_i(0)) },
                VdVertex { id: "t".into(), value: RealAlg::exact(rat_i(1)) },
            ],
            vec![VdEdge { id: "e".into(), src: 0, dst: 1 }],
        )
        .unwrap();
        assert!(is_weakly_isomorphic(&pr.graph, &single));
        let oracle = raster_oracle_graph(&lens, 1024).unwrap();
        assert!(is_weakly_isomorphic(&pr.graph, &oracle));
    }
}
