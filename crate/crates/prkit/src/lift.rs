//! Emission of the higher-dimensional real algebraic set whose projection
//! reproduces the domain's Poincaré-Reeb structure: one equation per label,
//!   prod_{j in m^-1(a)} f_j(x1, x2)  -  sum_{i=1}^{m0(a)+1} y_{a,i}^2  =  0,
//! in R^2 x prod_a R^{m0(a)+1}. Emission is syntactic and deterministic; the
//! properties of the lifted set itself are not machine-checked here.

use crate::domain::{DomainSpec, StructuralPoints};
use crate::poly::BivarPoly;
use crate::rat::{rat_to_string, Rat};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Assignment of curves to labels plus the extra-dimension counts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftSpec {
    /// curve id -> label
    pub assignment: BTreeMap<String, String>,
    /// label -> m0(label) >= 1... m0 is a positive integer per label
    pub m0: BTreeMap<String, u32>,
}

#[derive(Clone, Debug)]
pub enum PartitionViolation {
    UnassignedCurve { curve: String },
    UnknownLabel { curve: String, label: String },
    LabelWithoutCurve { label: String },
    ZeroMultiplicity { label: String },
    CrossingCurvesShareLabel { curves: (String, String), label: String },
}

impl std::fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PartitionViolation::UnassignedCurve { curve } => {
                write!(f, "curve {curve} has no label")
            }
            PartitionViolation::UnknownLabel { curve, label } => {
                write!(f, "curve {curve} uses label {label} missing from m0")
            }
            PartitionViolation::LabelWithoutCurve { label } => {
                write!(f, "label {label} has no curve (assignment not surjective)")
            }
            PartitionViolation::ZeroMultiplicity { label } => {
                write!(f, "label {label} has m0 = 0; multiplicities must be positive")
            }
            PartitionViolation::CrossingCurvesShareLabel { curves, label } => {
                write!(
                    f,
                    "curves {} and {} intersect on the closure but share label {label}",
                    curves.0, curves.1
                )
            }
        }
    }
}

/// Check surjectivity and the distinct-label constraint on crossing pairs.
pub fn validate_partition(
    spec: &DomainSpec,
    pts: &StructuralPoints,
    lift: &LiftSpec,
) -> Vec<PartitionViolation> {
    let mut out = Vec::new();
    for c in &spec.curves {
        match lift.assignment.get(&c.id) {
            None => out.push(PartitionViolation::UnassignedCurve { curve: c.id.clone() }),
            Some(label) => {
                if !lift.m0.contains_key(label) {
                    out.push(PartitionViolation::UnknownLabel {
                        curve: c.id.clone(),
                        label: label.clone(),
                    });
                }
            }
        }
    }
    for (label, m) in &lift.m0 {
        if *m == 0 {
            out.push(PartitionViolation::ZeroMultiplicity { label: label.clone() });
        }
        if !lift.assignment.values().any(|l| l == label) {
            out.push(PartitionViolation::LabelWithoutCurve { label: label.clone() });
        }
    }
    for cr in &pts.crossings {
        let la = lift.assignment.get(&cr.curves.0);
        let lb = lift.assignment.get(&cr.curves.1);
        if let (Some(a), Some(b)) = (la, lb) {
            if a == b {
                out.push(PartitionViolation::CrossingCurvesShareLabel {
                    curves: cr.curves.clone(),
                    label: a.clone(),
                });
            }
        }
    }
    out
}

/// Multivariate polynomial over the lift's ambient variables, sparse with
/// deterministic term order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    /// exponent vector (parallel to the document's variable list) -> coeff
    pub terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiPoly {
    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            // re-borrow to remove
            let key: Vec<Vec<u32>> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftEquationJson {
    pub label: String,
    pub m0: u32,
    pub curves: Vec<String>,
    pub polynomial: MultiPolyJson,
    pub text: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiPolyJson {
    pub terms: Vec<MultiTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiTermJson {
    pub e: Vec<u32>,
    pub c: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftDocument {
    pub format: String,
    pub kind: String,
    pub variables: Vec<String>,
    pub ambient_dimension: u32,
    pub projection: String,
    pub equations: Vec<LiftEquationJson>,
    /// Properties of the lifted set that this tool does not verify.
    pub unverified_claims: Vec<String>,
}

/// Emit the polynomial system document. Deterministic: identical inputs give
/// byte-identical serialized output.
pub fn emit_lift(spec: &DomainSpec, lift: &LiftSpec) -> LiftDocument {
    // variables: x1, x2, then y_{a,i} grouped by label in sorted order
    let mut variables = vec!["x1".to_string(), "x2".to_string()];
    let mut var_ranges: BTreeMap<String, (usize, u32)> = BTreeMap::new();
    for (label, m0) in &lift.m0 {
        let start = variables.len();
        for i in 1..=(m0 + 1) {
            variables.push(format!("y_{{{label},{i}}}"));
        }
        var_ranges.insert(label.clone(), (start, m0 + 1));
    }
    let nvars = variables.len();

    let mut equations = Vec::new();
    for (label, m0) in &lift.m0 {
        // product of the label's curve polynomials
        let mut curves: Vec<&crate::domain::CurveSpec> = spec
            .curves
            .iter()
            .filter(|c| lift.assignment.get(&c.id) == Some(label))
            .collect();
        curves.sort_by(|a, b| a.id.cmp(&b.id));
        let mut prod = BivarPoly::constant(Rat::one());
        for c in &curves {
            prod = prod.mul(&c.f);
        }
        // embed into the multivariate ring
        let mut mp = MultiPoly { terms: BTreeMap::new() };
        for (&(i, j), c) in prod.terms() {
            let mut e = vec![0u32; nvars];
            e[0] = i;
            e[1] = j;
            mp.add_term(e, c.clone());
        }
        let (start, count) = var_ranges[label];
        for k in 0..count {
            let mut e = vec![0u32; nvars];
            e[start + k as usize] = 2;
            mp.add_term(e, -Rat::one());
        }
        let text = render_text(&mp, &variables);
        equations.push(LiftEquationJson {
            label: label.clone(),
            m0: *m0,
            curves: curves.iter().map(|c| c.id.clone()).collect(),
            polynomial: MultiPolyJson {
                terms: mp
                    .terms
                    .iter()
                    .map(|(e, c)| MultiTermJson { e: e.clone(), c: rat_to_string(c) })
                    .collect(),
            },
            text,
        });
    }
    LiftDocument {
        format: crate::jsonio::FORMAT_TAG.into(),
        kind: "lift_system".into(),
        ambient_dimension: nvars as u32,
        variables,
        projection: "x1".into(),
        equations,
        unverified_claims: vec![
            "the emitted zero set is non-singular".into(),
            "the projection to x1 restricted to the zero set is a Morse-Bott function".into(),
            "the Reeb digraph of that projection matches the plane domain's Poincare-Reeb digraph".into(),
        ],
    }
}

/// Substitute every variable beyond x1, x2 by zero and return the bivariate
/// remainder (used by the round-trip check).
pub fn restrict_to_plane(eq: &MultiPolyJson, nvars: usize) -> Result<BivarPoly, crate::jsonio::JsonError> {
    let mut out = BivarPoly::zero();
    for t in &eq.terms {
        if t.e.len() != nvars {
            return Err(crate::jsonio::JsonError::Invalid("exponent vector has wrong length".into()));
        }
        if t.e[2..].iter().all(|&p| p == 0) {
            out.add_term(t.e[0], t.e[1], crate::rat::rat_from_str(&t.c).map_err(|e| {
                crate::jsonio::JsonError::BadRational { context: "lift term".into(), detail: e.to_string() }
            })?);
        }
    }
    Ok(out)
}

fn render_text(p: &MultiPoly, variables: &[String]) -> String {
    if p.terms.is_empty() {
        return "0 = 0".into();
    }
    // grevlex-free simple order: by exponent vector descending total degree,
    // then the BTreeMap order; constants land last
    let mut terms: Vec<(&Vec<u32>, &Rat)> = p.terms.iter().collect();
    terms.sort_by(|a, b| {
        let da: u32 = a.0.iter().sum();
        let db: u32 = b.0.iter().sum();
        da.cmp(&db).then_with(|| a.0.cmp(b.0)).reverse()
    });
    // put the constant term first when present, matching the way the inputs
    // are usually written (r - ...)
    if let Some(pos) = terms.iter().position(|(e, _)| e.iter().all(|&p| p == 0)) {
        let c = terms.remove(pos);
        terms.insert(0, c);
    }
    let mut s = String::new();
    for (n, (e, c)) in terms.iter().enumerate() {
        let mono = monomial_text(e, variables);
        let coeff_abs = {
            let a = num_traits::Signed::abs(*c);
            a
        };
        let negative = num_traits::Signed::is_negative(*c);
        let coeff_str = if mono.is_empty() {
            rat_display(&coeff_abs)
        } else if coeff_abs.is_one() {
            mono.clone()
        } else {
            format!("{} {}", rat_display(&coeff_abs), mono)
        };
        if n == 0 {
            if negative {
                s.push_str("-");
            }
        } else if negative {
            s.push_str(" - ");
        } else {
            s.push_str(" + ");
        }
        s.push_str(&coeff_str);
    }
    s.push_str(" = 0");
    s
}

fn rat_display(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn monomial_text(e: &[u32], variables: &[String]) -> String {
    let mut parts = Vec::new();
    for (k, &p) in e.iter().enumerate() {
        if p == 0 {
            continue;
        }
        if p == 1 {
            parts.push(variables[k].clone());
        } else {
            parts.push(format!("{}^{}", variables[k], p));
        }
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::CurveSpec;
    use crate::poly::solve::Box2;
    use crate::rat::{rat, rat_i};

    fn disk_spec() -> DomainSpec {
        DomainSpec {
            curves: vec![CurveSpec {
                id: "c1".into(),
                f: BivarPoly::from_terms([((0, 0), rat_i(1)), ((2, 0), rat_i(-1)), ((0, 2), rat_i(-1))]),
            }],
            basepoint: (rat_i(0), rat_i(0)),
            window: Box2::new(rat_i(-3), rat_i(3), rat_i(-3), rat_i(3)),
        }
    }

    fn annulus_spec() -> DomainSpec {
        DomainSpec {
            curves: vec![
                CurveSpec {
                    id: "outer".into(),
                    f: BivarPoly::from_terms([((0, 0), rat_i(1)), ((2, 0), rat_i(-1)), ((0, 2), rat_i(-1))]),
                },
                CurveSpec {
                    id: "inner".into(),
                    f: BivarPoly::from_terms([((0, 0), rat(-1, 4)), ((2, 0), rat_i(1)), ((0, 2), rat_i(1))]),
                },
            ],
            basepoint: (rat(3, 4), rat_i(0)),
            window: Box2::new(rat_i(-3), rat_i(3), rat_i(-3), rat_i(3)),
        }
    }

    fn lift(pairs: &[(&str, &str)], m0: &[(&str, u32)]) -> LiftSpec {
        LiftSpec {
            assignment: pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            m0: m0.iter().map(|(a, m)| (a.to_string(), *m)).collect(),
        }
    }

    #[test]
    fn disk_lift_is_the_three_sphere() {
        let spec = disk_spec();
        let l = lift(&[("c1", "a")], &[("a", 1)]);
        let doc = emit_lift(&spec, &l);
        assert_eq!(doc.ambient_dimension, 4);
        assert_eq!(doc.variables, vec!["x1", "x2", "y_{a,1}", "y_{a,2}"]);
        assert_eq!(doc.equations.len(), 1);
        let eq = &doc.equations[0];
        assert_eq!(eq.text, "1 - x1^2 - x2^2 - y_{a,1}^2 - y_{a,2}^2 = 0");
        // coefficient-exact: 5 terms
        assert_eq!(eq.polynomial.terms.len(), 5);
    }

    #[test]
    fn annulus_single_label_m0_zero_is_rejected_but_m0_tiny_works() {
        let spec = annulus_spec();
        let report = crate::domain::validate_domain(&spec).unwrap();
        let pts = crate::domain::structural_points(&spec, &report);
        // both curves one label: fine, they are disjoint
        let l = lift(&[("outer", "a"), ("inner", "a")], &[("a", 1)]);
        assert!(validate_partition(&spec, &pts, &l).is_empty());
        let doc = emit_lift(&spec, &l);
        assert_eq!(doc.ambient_dimension, 4);
        assert_eq!(doc.equations.len(), 1);
        // setting y's to zero recovers the product of the curve polynomials
        let plane = restrict_to_plane(&doc.equations[0].polynomial, 4).unwrap();
        let prod = spec.curves[0].f.mul(&spec.curves[1].f);
        assert_eq!(plane, prod);
        // m0 = 0 flagged
        let l0 = lift(&[("outer", "a"), ("inner", "a")], &[("a", 0)]);
        let vs = validate_partition(&spec, &pts, &l0);
        assert!(vs.iter().any(|v| matches!(v, PartitionViolation::ZeroMultiplicity { .. })));
    }

    #[test]
    fn lens_shared_label_rejected_at_crossing() {
        let shifted = BivarPoly::from_terms([((1, 0), rat_i(2)), ((2, 0), rat_i(-1)), ((0, 2), rat_i(-1))]);
        let spec = DomainSpec {
            curves: vec![
                CurveSpec { id: "a".into(), f: spec_circle() },
                CurveSpec { id: "b".into(), f: shifted },
            ],
            basepoint: (rat(1, 2), rat_i(0)),
            window: Box2::new(rat_i(-3), rat_i(3), rat_i(-3), rat_i(3)),
        };
        let report = crate::domain::validate_domain(&spec).unwrap();
        let pts = crate::domain::structural_points(&spec, &report);
        let l = lift(&[("a", "l"), ("b", "l")], &[("l", 1)]);
        let vs = validate_partition(&spec, &pts, &l);
        assert!(vs.iter().any(|v| matches!(v, PartitionViolation::CrossingCurvesShareLabel { .. })));
        // distinct labels pass
        let l2 = lift(&[("a", "l"), ("b", "m")], &[("l", 1), ("m", 1)]);
        assert!(validate_partition(&spec, &pts, &l2).is_empty());
        let doc = emit_lift(&spec, &l2);
        assert_eq!(doc.ambient_dimension, 2 + 2 + 2);
        assert_eq!(doc.equations.len(), 2);
    }

    fn spec_circle() -> BivarPoly {
        BivarPoly::from_terms([((0, 0), rat_i(1)), ((2, 0), rat_i(-1)), ((0, 2), rat_i(-1))])
    }

    #[test]
    fn emission_is_deterministic() {
        let spec = annulus_spec();
        let l = lift(&[("outer", "a"), ("inner", "b")], &[("a", 2), ("b", 1)]);
        let d1 = serde_json::to_string(&emit_lift(&spec, &l)).unwrap();
        let d2 = serde_json::to_string(&emit_lift(&spec, &l)).unwrap();
        assert_eq!(d1, d2);
        let doc = emit_lift(&spec, &l);
        // ambient = 2 + (2+1) + (1+1) = 7
        assert_eq!(doc.ambient_dimension, 7);
    }
}
