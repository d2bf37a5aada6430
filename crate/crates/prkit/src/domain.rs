//! Plane regions bounded by non-singular real algebraic curves meeting in
//! normal crossings: specification, exact validation of both defining
//! conditions, and the finite set of structural boundary points (crossings
//! and vertical tangencies) that generates the Poincaré-Reeb graph.

use crate::algnum::RealAlg;
use crate::poly::solve::Box2;
use crate::poly::{gcd_bivar, solve_system, BivarPoly, SolveError, Var};
use crate::rat::{sign_of, Rat, RatInterval};
use crate::sweep::events::{sign_at_point, EventData, FoldKind};
use crate::sweep::{SweepAnalysis, SweepError};
use num_traits::Zero;

#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub id: String,
    pub f: BivarPoly,
}

/// A candidate refined algebraic domain: curves with the interior-positive
/// sign convention, a basepoint selecting the bounded component, and the
/// working box that must strictly contain the component's closure.
#[derive(Clone, Debug)]
pub struct DomainSpec {
    pub curves: Vec<CurveSpec>,
    pub basepoint: (Rat, Rat),
    pub window: Box2,
}

impl DomainSpec {
    pub fn polys(&self) -> Vec<BivarPoly> {
        self.curves.iter().map(|c| c.f.clone()).collect()
    }

    pub fn curve_id(&self, idx: usize) -> &str {
        &self.curves[idx].id
    }
}

/// A point reported inside a violation, refined for display.
#[derive(Clone, Debug)]
pub struct Witness {
    pub x: RealAlg,
    pub y: RealAlg,
}

impl Witness {
    pub fn approx(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

#[derive(Clone, Debug)]
pub enum Violation {
    ZeroOrConstantCurve { curve: String },
    SingularCurve { curve: String, witness: Witness },
    PositiveDimensionalSingularLocus { curve: String },
    DegenerateVerticalTangency { curve: String, detail: String },
    BasepointNotInterior { curve: String },
    NonTransverseIntersection { curves: (String, String), witness: Witness },
    TriplePoint { witness: Witness, curves: Vec<String> },
    UnresolvedCoincidence { detail: String },
    CurveDisjointFromClosure { curve: String },
    ComponentNotStrictlyInsideBox,
    SweepFailure { detail: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::ZeroOrConstantCurve { curve } => {
                write!(f, "curve {curve}: polynomial is zero or constant")
            }
            Violation::SingularCurve { curve, witness } => {
                let (x, y) = witness.approx();
                write!(f, "curve {curve}: singular point on zero set near ({x:.6}, {y:.6})")
            }
            Violation::PositiveDimensionalSingularLocus { curve } => {
                write!(f, "curve {curve}: singular locus is positive-dimensional (repeated or degenerate factor)")
            }
            Violation::DegenerateVerticalTangency { curve, detail } => {
                write!(f, "curve {curve}: degenerate vertical tangency structure: {detail}")
            }
            Violation::BasepointNotInterior { curve } => {
                write!(f, "basepoint is not strictly positive on curve {curve}")
            }
            Violation::NonTransverseIntersection { curves, witness } => {
                let (x, y) = witness.approx();
                write!(
                    f,
                    "curves {} and {} meet non-transversally near ({x:.6}, {y:.6})",
                    curves.0, curves.1
                )
            }
            Violation::TriplePoint { witness, curves } => {
                let (x, y) = witness.approx();
                write!(f, "triple point near ({x:.6}, {y:.6}) on curves {curves:?}")
            }
            Violation::UnresolvedCoincidence { detail } => {
                write!(f, "non-generic coincidence could not be resolved: {detail}")
            }
            Violation::CurveDisjointFromClosure { curve } => {
                write!(f, "curve {curve} does not meet the closure of the selected component")
            }
            Violation::ComponentNotStrictlyInsideBox => {
                write!(f, "selected component is not strictly inside the working box")
            }
            Violation::SweepFailure { detail } => write!(f, "sweep failed: {detail}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DomainError {
    #[error("domain validation failed: {}", summarize(.0))]
    Invalid(Vec<Violation>),
    #[error("non-generic coincidence: {0}")]
    NonGenericCoincidence(String),
    #[error("sweep failed: {0}")]
    Sweep(#[from] SweepError),
}

fn summarize(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Report produced by a successful validation.
#[derive(Debug)]
pub struct DomainReport {
    /// Curves whose non-singularity was certified over the whole plane (via
    /// resultant root bounds) rather than only inside the box.
    pub globally_certified: Vec<String>,
    pub analysis: SweepAnalysis,
}

/// Whether the zero set of the curve polynomial is non-singular; checks the
/// whole plane when the resultant bound is tractable, otherwise the box.
pub fn validate_curve_nonsingular(
    curve: &CurveSpec,
    window: &Box2,
) -> Result<bool, Violation> {
    let f = &curve.f;
    if f.is_zero() || f.is_constant() {
        return Err(Violation::ZeroOrConstantCurve { curve: curve.id.clone() });
    }
    let fx = f.derive(Var::X);
    let fy = f.derive(Var::Y);
    if fy.is_zero() && fx.is_zero() {
        return Err(Violation::ZeroOrConstantCurve { curve: curve.id.clone() });
    }
    // A shared factor of f and f_y of positive degree means either a repeated
    // factor or a component free of y (vertical lines); both break the finite
    // vertical-tangency structure the sweep needs.
    if !fy.is_zero() {
        let g = gcd_bivar(f, &fy);
        if g.total_degree().unwrap_or(0) > 0 {
            return Err(Violation::PositiveDimensionalSingularLocus { curve: curve.id.clone() });
        }
    } else {
        // f free of y: zero set is a union of vertical lines
        return Err(Violation::DegenerateVerticalTangency {
            curve: curve.id.clone(),
            detail: "zero set consists of vertical lines".into(),
        });
    }

    // Candidate singular points satisfy f = f_y = 0; certify globally by
    // solving inside resultant root bounds when the degree is moderate.
    let (solve_window, global) = global_window_or(window, f, &fy);
    let pts = match solve_system(f, &fy, &solve_window) {
        Ok(p) => p,
        Err(SolveError::PositiveDimensional(_)) => {
            return Err(Violation::PositiveDimensionalSingularLocus { curve: curve.id.clone() });
        }
        Err(e) => {
            return Err(Violation::UnresolvedCoincidence { detail: e.to_string() });
        }
    };
    for p in pts {
        match sign_at_point(&fx, &p.x, &p.y, 128) {
            Some(0) => {
                return Err(Violation::SingularCurve {
                    curve: curve.id.clone(),
                    witness: Witness { x: p.x, y: p.y },
                });
            }
            Some(_) => {}
            None => {
                return Err(Violation::UnresolvedCoincidence {
                    detail: format!(
                        "cannot decide df/dx sign at a vertical tangency of curve {}",
                        curve.id
                    ),
                });
            }
        }
    }
    Ok(global)
}

/// Degrees up to this bound get a whole-plane non-singularity certificate.
const GLOBAL_CERT_DEGREE: u32 = 8;

fn global_window_or(window: &Box2, f: &BivarPoly, fy: &BivarPoly) -> (Box2, bool) {
    if f.total_degree().unwrap_or(0) > GLOBAL_CERT_DEGREE {
        return (window.clone(), false);
    }
    let rx = crate::poly::resultant_y(f, fy);
    let ry = crate::poly::resultant_x(f, fy);
    if rx.is_zero() || ry.is_zero() {
        return (window.clone(), false);
    }
    let bx = rx.root_bound();
    let by = ry.root_bound();
    let hull = Box2 {
        x: RatInterval::new(
            if -bx.clone() < window.x.lo { -bx.clone() } else { window.x.lo.clone() },
            if bx > window.x.hi { bx } else { window.x.hi.clone() },
        ),
        y: RatInterval::new(
            if -by.clone() < window.y.lo { -by.clone() } else { window.y.lo.clone() },
            if by > window.y.hi { by } else { window.y.hi.clone() },
        ),
    };
    (hull, true)
}

/// Validate all Def.-style conditions; returns the full sweep analysis on
/// success so downstream consumers reuse it.
pub fn validate_domain(spec: &DomainSpec) -> Result<DomainReport, DomainError> {
    let mut violations: Vec<Violation> = Vec::new();
    let mut globally_certified = Vec::new();

    // 1. per-curve checks
    for c in &spec.curves {
        match validate_curve_nonsingular(c, &spec.window) {
            Ok(true) => globally_certified.push(c.id.clone()),
            Ok(false) => {}
            Err(v) => violations.push(v),
        }
    }

    // 2. basepoint interior
    let (bx, by) = &spec.basepoint;
    for c in &spec.curves {
        if sign_of(&c.f.eval(bx, by)) <= 0 {
            violations.push(Violation::BasepointNotInterior { curve: c.id.clone() });
        }
    }

    // 3. pairwise intersections: transversality + triple-point detection
    let mut crossing_points: Vec<(usize, usize, RealAlg, RealAlg)> = Vec::new();
    for i in 0..spec.curves.len() {
        for j in i + 1..spec.curves.len() {
            let pts = match solve_system(&spec.curves[i].f, &spec.curves[j].f, &spec.window) {
                Ok(p) => p,
                Err(SolveError::PositiveDimensional(_)) => {
                    violations.push(Violation::NonTransverseIntersection {
                        curves: (spec.curves[i].id.clone(), spec.curves[j].id.clone()),
                        witness: Witness {
                            x: RealAlg::exact(Rat::zero()),
                            y: RealAlg::exact(Rat::zero()),
                        },
                    });
                    continue;
                }
                Err(e) => {
                    violations.push(Violation::UnresolvedCoincidence { detail: e.to_string() });
                    continue;
                }
            };
            for p in pts {
                if !p.transverse && could_touch_closure(spec, i, j, &p.x, &p.y) {
                    violations.push(Violation::NonTransverseIntersection {
                        curves: (spec.curves[i].id.clone(), spec.curves[j].id.clone()),
                        witness: Witness { x: p.x.clone(), y: p.y.clone() },
                    });
                }
                crossing_points.push((i, j, p.x, p.y));
            }
        }
    }
    // triple points: coinciding crossing points from pairs sharing a curve
    for (a, pa) in crossing_points.iter().enumerate() {
        for pb in crossing_points.iter().skip(a + 1) {
            let shares = pa.0 == pb.0 || pa.0 == pb.1 || pa.1 == pb.0 || pa.1 == pb.1;
            if !shares {
                // two disjoint pairs meeting at one point is a quadruple
                // point; detect it the same way
            }
            if pa.2.is_equal(&pb.2) && pa.3.is_equal(&pb.3) {
                let mut ids: Vec<String> = [pa.0, pa.1, pb.0, pb.1]
                    .iter()
                    .map(|&k| spec.curves[k].id.clone())
                    .collect();
                ids.sort();
                ids.dedup();
                violations.push(Violation::TriplePoint {
                    witness: Witness { x: pa.2.clone(), y: pa.3.clone() },
                    curves: ids,
                });
            }
        }
    }

    if !violations.is_empty() {
        return Err(DomainError::Invalid(violations));
    }

    // 4. sweep: boundedness, component selection, event matching
    let analysis = match SweepAnalysis::analyze(&spec.polys(), &spec.window, &spec.basepoint) {
        Ok(a) => a,
        Err(SweepError::ComponentTouchesBox) => {
            return Err(DomainError::Invalid(vec![Violation::ComponentNotStrictlyInsideBox]));
        }
        Err(SweepError::CoincidentEvents { x, y }) => {
            return Err(DomainError::NonGenericCoincidence(format!(
                "two structural points coincide near ({x:.5}, {y:.5})"
            )));
        }
        Err(e) => {
            return Err(DomainError::Invalid(vec![Violation::SweepFailure {
                detail: e.to_string(),
            }]));
        }
    };

    // 5. every curve must meet the closure: it must own a marked event
    let mut touched = vec![false; spec.curves.len()];
    for (e, ev) in analysis.events.iter().enumerate() {
        if analysis.marked_events[e] && !ev.is_structural_only() {
            for k in ev.curves() {
                touched[k] = true;
            }
        }
    }
    let missing: Vec<Violation> = touched
        .iter()
        .enumerate()
        .filter(|(_, t)| !**t)
        .map(|(k, _)| Violation::CurveDisjointFromClosure { curve: spec.curves[k].id.clone() })
        .collect();
    if !missing.is_empty() {
        return Err(DomainError::Invalid(missing));
    }

    Ok(DomainReport { globally_certified, analysis })
}

/// Conservative test used for tangency rejection: the point could lie on the
/// closure when every other curve is nonnegative there.
fn could_touch_closure(spec: &DomainSpec, i: usize, j: usize, x: &RealAlg, y: &RealAlg) -> bool {
    for (k, c) in spec.curves.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        match sign_at_point(&c.f, x, y, 96) {
            Some(s) if s < 0 => return false,
            _ => {}
        }
    }
    true
}

/// One vertical tangency of the boundary.
#[derive(Clone, Debug)]
pub struct FoldPoint {
    pub x: RealAlg,
    pub y: RealAlg,
    pub curve: String,
    pub kind: FoldKind,
}

/// One normal crossing of two boundary curves.
#[derive(Clone, Debug)]
pub struct CrossingPoint {
    pub x: RealAlg,
    pub y: RealAlg,
    pub curves: (String, String),
}

/// The finite structural set of the validated domain: all crossings and
/// folds on the closure of the selected component.
#[derive(Clone, Debug, Default)]
pub struct StructuralPoints {
    pub crossings: Vec<CrossingPoint>,
    pub folds: Vec<FoldPoint>,
}

/// Extract the structural set from a validated domain's analysis.
pub fn structural_points(spec: &DomainSpec, report: &DomainReport) -> StructuralPoints {
    let mut out = StructuralPoints::default();
    for (e, ev) in report.analysis.events.iter().enumerate() {
        if !report.analysis.marked_events[e] {
            continue;
        }
        match &ev.data {
            EventData::Fold { curve, kind, .. } => out.folds.push(FoldPoint {
                x: ev.x.clone(),
                y: ev.y.clone(),
                curve: spec.curves[*curve].id.clone(),
                kind: *kind,
            }),
            EventData::Crossing { curves, .. } => out.crossings.push(CrossingPoint {
                x: ev.x.clone(),
                y: ev.y.clone(),
                curves: (spec.curves[curves.0].id.clone(), spec.curves[curves.1].id.clone()),
            }),
            EventData::EdgeCross { .. } => {}
        }
    }
    let key = |x: &RealAlg, y: &RealAlg| (x.to_f64(), y.to_f64());
    out.folds.sort_by(|a, b| {
        key(&a.x, &a.y).partial_cmp(&key(&b.x, &b.y)).unwrap_or(std::cmp::Ordering::Equal)
    });
    out.crossings.sort_by(|a, b| {
        key(&a.x, &a.y).partial_cmp(&key(&b.x, &b.y)).unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}

/// Convenience wrapper: validate then extract the structural set.
pub fn compute_structural_points(spec: &DomainSpec) -> Result<(DomainReport, StructuralPoints), DomainError> {
    let report = validate_domain(spec)?;
    let pts = structural_points(spec, &report);
    Ok((report, pts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i};
    use num_traits::One;

    fn curve(id: &str, f: BivarPoly) -> CurveSpec {
        CurveSpec { id: id.into(), f }
    }

    fn circle_at(cx: (i64, i64), cy: (i64, i64), r2: (i64, i64), interior: bool) -> BivarPoly {
        let c = crate::poly::ConicSpec::new(
            (rat(cx.0, cx.1), rat(cy.0, cy.1)),
            Rat::one(),
            Rat::one(),
            rat(r2.0, r2.1),
            if interior {
                crate::poly::ConicSign::InteriorPositive
            } else {
                crate::poly::ConicSign::ExteriorPositive
            },
        );
        crate::poly::conic_poly(&c)
    }

    fn big_window() -> Box2 {
        Box2::new(rat_i(-4), rat_i(4), rat_i(-4), rat_i(4))
    }

    fn disk_spec() -> DomainSpec {
        DomainSpec {
            curves: vec![curve("c1", circle_at((0, 1), (0, 1), (1, 1), true))],
            basepoint: (rat_i(0), rat_i(0)),
            window: big_window(),
        }
    }

    #[test]
    fn nodal_quadric_rejected() {
        // x^2 - y^2: node at the origin
        let f = BivarPoly::from_terms([((2, 0), rat_i(1)), ((0, 2), rat_i(-1))]);
        let err = validate_curve_nonsingular(&curve("n", f), &big_window());
        match err {
            Err(Violation::SingularCurve { witness, .. }) => {
                let (x, y) = witness.approx();
                assert!(x.abs() < 1e-9 && y.abs() < 1e-9);
            }
            other => panic!("expected singular violation, got {other:?}"),
        }
    }

    #[test]
    fn circle_nonsingular_globally() {
        let ok = validate_curve_nonsingular(
            &curve("c", circle_at((0, 1), (0, 1), (1, 1), true)),
            &big_window(),
        );
        assert_eq!(ok.unwrap(), true);
    }

    #[test]
    fn nodal_cubic_rejected_at_origin() {
        // y^2 - x^2 (x + 1): f = f_x = f_y = 0 at the origin by hand
        let f = BivarPoly::from_terms([
            ((0, 2), rat_i(1)),
            ((3, 0), rat_i(-1)),
            ((2, 0), rat_i(-1)),
        ]);
        let err = validate_curve_nonsingular(&curve("n", f), &big_window());
        match err {
            Err(Violation::SingularCurve { witness, .. }) => {
                let (x, y) = witness.approx();
                assert!(x.abs() < 1e-9 && y.abs() < 1e-9);
            }
            other => panic!("expected singular violation, got {other:?}"),
        }
    }

    #[test]
    fn disk_domain_validates() {
        let report = validate_domain(&disk_spec()).unwrap();
        assert_eq!(report.globally_certified, vec!["c1".to_string()]);
        let pts = structural_points(&disk_spec(), &report);
        assert_eq!(pts.folds.len(), 2);
        assert!(pts.crossings.is_empty());
        assert!(pts.folds.iter().all(|f| f.kind == FoldKind::Definite));
    }

    #[test]
    fn annulus_structural_points() {
        let spec = DomainSpec {
            curves: vec![
                curve("outer", circle_at((0, 1), (0, 1), (1, 1), true)),
                curve("inner", circle_at((0, 1), (0, 1), (1, 4), false)),
            ],
            basepoint: (rat(3, 4), rat_i(0)),
            window: big_window(),
        };
        let (report, pts) = compute_structural_points(&spec).unwrap();
        assert_eq!(pts.folds.len(), 4);
        assert!(pts.crossings.is_empty());
        let kinds: Vec<_> = pts.folds.iter().map(|f| (f.x.to_f64(), f.kind)).collect();
        assert_eq!(kinds[0], ((-1.0), FoldKind::Definite));
        assert_eq!(kinds[1].1, FoldKind::Indefinite);
        assert_eq!(kinds[2].1, FoldKind::Indefinite);
        assert_eq!(kinds[3], (1.0, FoldKind::Definite));
        let _ = report;
    }

    #[test]
    fn lens_structural_points() {
        let spec = DomainSpec {
            curves: vec![
                curve("a", circle_at((0, 1), (0, 1), (1, 1), true)),
                curve("b", circle_at((1, 1), (0, 1), (1, 1), true)),
            ],
            basepoint: (rat(1, 2), rat_i(0)),
            window: big_window(),
        };
        let (_, pts) = compute_structural_points(&spec).unwrap();
        assert_eq!(pts.folds.len(), 2);
        assert_eq!(pts.crossings.len(), 2);
        // folds at (0,0) and (1,0)
        let fx: Vec<f64> = pts.folds.iter().map(|f| f.x.to_f64()).collect();
        assert!((fx[0] - 0.0).abs() < 1e-9);
        assert!((fx[1] - 1.0).abs() < 1e-9);
        // crossings at x = 1/2
        for c in &pts.crossings {
            assert_eq!(c.x.as_exact(), Some(&rat(1, 2)));
        }
    }

    #[test]
    fn tangent_circles_rejected() {
        let spec = DomainSpec {
            curves: vec![
                curve("a", circle_at((0, 1), (0, 1), (1, 1), true)),
                // circle of radius 1/2 centered (1/2, 0): internally tangent at (1,0)
                curve("b", circle_at((1, 2), (0, 1), (1, 4), true)),
            ],
            basepoint: (rat(1, 2), rat_i(0)),
            window: big_window(),
        };
        let err = validate_domain(&spec);
        match err {
            Err(DomainError::Invalid(vs)) => {
                assert!(vs.iter().any(|v| matches!(v, Violation::NonTransverseIntersection { .. })));
            }
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn triple_point_rejected() {
        // three circles through the origin with a valid basepoint region to
        // the right: interior of the circle through (0,0) and (2,0), and
        // exteriors of two circles bulging up-left and down-left
        let c1 = circle_at((1, 1), (0, 1), (1, 1), true);
        let c2 = circle_at((-1, 1), (1, 1), (2, 1), false);
        let c3 = circle_at((-1, 1), (-1, 1), (2, 1), false);
        let spec = DomainSpec {
            curves: vec![curve("a", c1), curve("b", c2), curve("c", c3)],
            basepoint: (rat(1, 2), rat_i(0)),
            window: big_window(),
        };
        let err = validate_domain(&spec);
        match err {
            Err(DomainError::Invalid(vs)) => {
                let tp = vs.iter().find_map(|v| match v {
                    Violation::TriplePoint { witness, curves } => Some((witness.clone(), curves.clone())),
                    _ => None,
                });
                let (w, ids) = tp.expect("expected a triple point violation");
                let (x, y) = w.approx();
                assert!(x.abs() < 1e-9 && y.abs() < 1e-9);
                assert_eq!(ids.len(), 3);
            }
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn far_circle_rejected_as_disjoint() {
        let spec = DomainSpec {
            curves: vec![
                curve("c1", circle_at((0, 1), (0, 1), (1, 1), true)),
                // 100 - x^2 - y^2 > 0 inside radius 10; the radius-10 circle
                // never touches the unit disk's closure
                curve("far", circle_at((0, 1), (0, 1), (100, 1), true)),
            ],
            basepoint: (rat_i(0), rat_i(0)),
            window: Box2::new(rat_i(-20), rat_i(20), rat_i(-20), rat_i(20)),
        };
        let err = validate_domain(&spec);
        match err {
            Err(DomainError::Invalid(vs)) => {
                assert!(vs.iter().any(|v| matches!(
                    v,
                    Violation::CurveDisjointFromClosure { curve } if curve == "far"
                )));
            }
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn scaling_leaves_structural_points_unchanged() {
        let spec = disk_spec();
        let scaled = DomainSpec {
            curves: vec![curve("c1", spec.curves[0].f.scale(&rat_i(3)))],
            ..spec.clone()
        };
        let (_, p1) = compute_structural_points(&spec).unwrap();
        let (_, p2) = compute_structural_points(&scaled).unwrap();
        assert_eq!(p1.folds.len(), p2.folds.len());
        for (a, b) in p1.folds.iter().zip(&p2.folds) {
            assert!(a.x.is_equal(&b.x) && a.y.is_equal(&b.y));
            assert_eq!(a.kind, b.kind);
        }
    }
}
