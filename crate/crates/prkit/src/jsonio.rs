//! Versioned JSON schemas (`"format": "prkit/1"`) for every document the
//! tools exchange, with bit-exact rational round-trips, plus DOT emitters.

use crate::algnum::RealAlg;
use crate::domain::{CurveSpec, DomainSpec};
use crate::poly::solve::Box2;
use crate::poly::BivarPoly;
use crate::rat::{rat_from_str, rat_to_string, Rat};
use crate::vdigraph::{EmbEdge, EmbVertex, EmbeddedGraph, VDigraph, VdEdge, VdVertex};
use serde::{Deserialize, Serialize};

pub const FORMAT_TAG: &str = "prkit/1";

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("json parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("bad rational at {context}: {detail}")]
    BadRational { context: String, detail: String },
    #[error("unsupported format tag {0:?} (expected {FORMAT_TAG:?})")]
    BadFormat(String),
    #[error("document is not a {expected} (kind tag {found:?})")]
    WrongKind { expected: String, found: String },
    #[error("invalid document: {0}")]
    Invalid(String),
}

fn rat_field(s: &str, context: &str) -> Result<Rat, JsonError> {
    rat_from_str(s).map_err(|e| JsonError::BadRational { context: context.into(), detail: e.to_string() })
}

// --- polynomials -----------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TermJson {
    pub i: u32,
    pub j: u32,
    pub c: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

pub fn poly_to_json(p: &BivarPoly) -> PolyJson {
    PolyJson {
        terms: p
            .terms()
            .map(|(&(i, j), c)| TermJson { i, j, c: rat_to_string(c) })
            .collect(),
    }
}

pub fn poly_from_json(p: &PolyJson) -> Result<BivarPoly, JsonError> {
    let mut out = BivarPoly::zero();
    for t in &p.terms {
        out.add_term(t.i, t.j, rat_field(&t.c, "polynomial coefficient")?);
    }
    Ok(out)
}

// --- domains ----------------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct BoxJson {
    pub x_min: String,
    pub x_max: String,
    pub y_min: String,
    pub y_max: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CurveJson {
    pub id: String,
    pub f: PolyJson,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct DomainJson {
    pub format: String,
    pub kind: String,
    pub curves: Vec<CurveJson>,
    pub basepoint: [String; 2],
    #[serde(rename = "box")]
    pub window: BoxJson,
}

pub fn domain_to_json(spec: &DomainSpec) -> DomainJson {
    DomainJson {
        format: FORMAT_TAG.into(),
        kind: "domain".into(),
        curves: spec
            .curves
            .iter()
            .map(|c| CurveJson { id: c.id.clone(), f: poly_to_json(&c.f) })
            .collect(),
        basepoint: [rat_to_string(&spec.basepoint.0), rat_to_string(&spec.basepoint.1)],
        window: BoxJson {
            x_min: rat_to_string(&spec.window.x.lo),
            x_max: rat_to_string(&spec.window.x.hi),
            y_min: rat_to_string(&spec.window.y.lo),
            y_max: rat_to_string(&spec.window.y.hi),
        },
    }
}

pub fn domain_from_json(doc: &DomainJson) -> Result<DomainSpec, JsonError> {
    check_tags(&doc.format, &doc.kind, "domain")?;
    let curves = doc
        .curves
        .iter()
        .map(|c| Ok(CurveSpec { id: c.id.clone(), f: poly_from_json(&c.f)? }))
        .collect::<Result<Vec<_>, JsonError>>()?;
    let bx = rat_field(&doc.basepoint[0], "basepoint.x")?;
    let by = rat_field(&doc.basepoint[1], "basepoint.y")?;
    let x_min = rat_field(&doc.window.x_min, "box.x_min")?;
    let x_max = rat_field(&doc.window.x_max, "box.x_max")?;
    let y_min = rat_field(&doc.window.y_min, "box.y_min")?;
    let y_max = rat_field(&doc.window.y_max, "box.y_max")?;
    if x_min >= x_max || y_min >= y_max {
        return Err(JsonError::Invalid("box must have positive extent".into()));
    }
    Ok(DomainSpec {
        curves,
        basepoint: (bx, by),
        window: Box2::new(x_min, x_max, y_min, y_max),
    })
}

fn check_tags(format: &str, kind: &str, expected: &str) -> Result<(), JsonError> {
    if format != FORMAT_TAG {
        return Err(JsonError::BadFormat(format.into()));
    }
    if kind != expected {
        return Err(JsonError::WrongKind { expected: expected.into(), found: kind.into() });
    }
    Ok(())
}

// --- V-digraphs / PR graphs --------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ValueJson {
    pub lo: String,
    pub hi: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct VertexJson {
    pub id: String,
    pub v: ValueJson,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<ProvenanceJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ProvenanceJson {
    pub kind: String,
    pub curves: Vec<String>,
    pub x: ValueJson,
    pub y: ValueJson,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct EdgeJson {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct GraphJson {
    pub format: String,
    pub kind: String,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

/// Default certificate width for serialized algebraic values.
pub fn value_json(v: &RealAlg) -> ValueJson {
    let tight = v.refined(&Rat::new(1.into(), 1_000_000_000_000i64.into()));
    let iv = tight.interval();
    ValueJson { lo: rat_to_string(&iv.lo), hi: rat_to_string(&iv.hi) }
}

pub fn vdigraph_to_json(g: &VDigraph, provenance: Option<&[Vec<ProvenanceJson>]>) -> GraphJson {
    GraphJson {
        format: FORMAT_TAG.into(),
        kind: "vdigraph".into(),
        vertices: g
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| VertexJson {
                id: v.id.clone(),
                v: value_json(&v.value),
                provenance: provenance.map(|p| p[i].clone()).unwrap_or_default(),
            })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|e| EdgeJson {
                id: e.id.clone(),
                src: g.vertices[e.src].id.clone(),
                dst: g.vertices[e.dst].id.clone(),
            })
            .collect(),
    }
}

pub fn vdigraph_from_json(doc: &GraphJson) -> Result<VDigraph, JsonError> {
    check_tags(&doc.format, &doc.kind, "vdigraph")?;
    let mut vertices = Vec::with_capacity(doc.vertices.len());
    for v in &doc.vertices {
        let lo = rat_field(&v.v.lo, "vertex value lo")?;
        let hi = rat_field(&v.v.hi, "vertex value hi")?;
        // serialized certificate intervals compare by midpoint when reloaded;
        // exact values round-trip as lo == hi
        let value = if lo == hi {
            RealAlg::exact(lo)
        } else {
            RealAlg::exact((lo + hi) / Rat::from_integer(2.into()))
        };
        vertices.push(VdVertex { id: v.id.clone(), value });
    }
    let idx_of = |id: &str| -> Result<usize, JsonError> {
        vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| JsonError::Invalid(format!("edge references unknown vertex {id}")))
    };
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        edges.push(VdEdge { id: e.id.clone(), src: idx_of(&e.src)?, dst: idx_of(&e.dst)? });
    }
    VDigraph::new(vertices, edges).map_err(|e| JsonError::Invalid(e.to_string()))
}

// --- embedded graphs ---------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct EmbVertexJson {
    pub id: String,
    pub x: String,
    pub y: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct EmbEdgeJson {
    pub id: String,
    pub endpoints: [String; 2],
    pub polyline: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct EmbeddedGraphJson {
    pub format: String,
    pub kind: String,
    pub vertices: Vec<EmbVertexJson>,
    pub edges: Vec<EmbEdgeJson>,
}

pub fn embedded_to_json(g: &EmbeddedGraph) -> EmbeddedGraphJson {
    EmbeddedGraphJson {
        format: FORMAT_TAG.into(),
        kind: "embedded_graph".into(),
        vertices: g
            .vertices
            .iter()
            .map(|v| EmbVertexJson { id: v.id.clone(), x: rat_to_string(&v.x), y: rat_to_string(&v.y) })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|e| EmbEdgeJson {
                id: e.id.clone(),
                endpoints: [
                    g.vertices[e.endpoints.0].id.clone(),
                    g.vertices[e.endpoints.1].id.clone(),
                ],
                polyline: e
                    .polyline
                    .iter()
                    .map(|(x, y)| [rat_to_string(x), rat_to_string(y)])
                    .collect(),
            })
            .collect(),
    }
}

pub fn embedded_from_json(doc: &EmbeddedGraphJson) -> Result<EmbeddedGraph, JsonError> {
    check_tags(&doc.format, &doc.kind, "embedded_graph")?;
    let mut vertices = Vec::with_capacity(doc.vertices.len());
    for v in &doc.vertices {
        vertices.push(EmbVertex {
            id: v.id.clone(),
            x: rat_field(&v.x, "vertex x")?,
            y: rat_field(&v.y, "vertex y")?,
        });
    }
    let idx_of = |id: &str| -> Result<usize, JsonError> {
        vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| JsonError::Invalid(format!("edge references unknown vertex {id}")))
    };
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        let mut polyline = Vec::with_capacity(e.polyline.len());
        for p in &e.polyline {
            polyline.push((rat_field(&p[0], "polyline x")?, rat_field(&p[1], "polyline y")?));
        }
        edges.push(EmbEdge {
            id: e.id.clone(),
            endpoints: (idx_of(&e.endpoints[0])?, idx_of(&e.endpoints[1])?),
            polyline,
        });
    }
    Ok(EmbeddedGraph { vertices, edges })
}

// --- DOT ----------------------------------------------------------------------

pub fn vdigraph_to_dot(g: &VDigraph) -> String {
    let mut s = String::from("digraph prkit {\n  rankdir=LR;\n");
    for v in &g.vertices {
        let val = v.value.to_f64();
        s.push_str(&format!("  \"{}\" [label=\"{}\\nV={:.4}\"];\n", v.id, v.id, val));
    }
    for e in &g.edges {
        s.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            g.vertices[e.src].id, g.vertices[e.dst].id, e.id
        ));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i};

    #[test]
    fn poly_json_round_trip_bit_exact() {
        let p = BivarPoly::from_terms([
            ((0, 0), rat_i(1)),
            ((2, 0), rat(-22, 7)),
            ((0, 2), rat(355, 113)),
        ]);
        let j = poly_to_json(&p);
        let s = serde_json::to_string(&j).unwrap();
        let j2: PolyJson = serde_json::from_str(&s).unwrap();
        let p2 = poly_from_json(&j2).unwrap();
        assert_eq!(p, p2);
        let s2 = serde_json::to_string(&poly_to_json(&p2)).unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn domain_json_round_trip() {
        let spec = DomainSpec {
            curves: vec![CurveSpec {
                id: "c1".into(),
                f: BivarPoly::from_terms([((0, 0), rat_i(1)), ((2, 0), rat_i(-1)), ((0, 2), rat_i(-1))]),
            }],
            basepoint: (rat_i(0), rat(1, 3)),
            window: Box2::new(rat_i(-2), rat_i(2), rat_i(-2), rat_i(2)),
        };
        let s = serde_json::to_string_pretty(&domain_to_json(&spec)).unwrap();
        let doc: DomainJson = serde_json::from_str(&s).unwrap();
        let spec2 = domain_from_json(&doc).unwrap();
        assert_eq!(spec2.curves[0].f, spec.curves[0].f);
        assert_eq!(spec2.basepoint, spec.basepoint);
        let s2 = serde_json::to_string_pretty(&domain_to_json(&spec2)).unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn bad_format_rejected() {
        let doc = DomainJson {
            format: "prkit/999".into(),
            kind: "domain".into(),
            curves: vec![],
            basepoint: ["0/1".into(), "0/1".into()],
            window: BoxJson {
                x_min: "-1/1".into(),
                x_max: "1/1".into(),
                y_min: "-1/1".into(),
                y_max: "1/1".into(),
            },
        };
        assert!(matches!(domain_from_json(&doc), Err(JsonError::BadFormat(_))));
    }
}
