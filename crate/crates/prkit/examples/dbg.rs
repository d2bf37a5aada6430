use prkit::rat::{rat, rat_i};
use prkit::realize::{realize, RealizationConfig};
use prkit::vdigraph::{EmbEdge, EmbVertex, EmbeddedGraph};

fn mk(id: &str, x: i64, y: i64) -> EmbVertex {
    EmbVertex { id: id.into(), x: rat_i(x), y: rat_i(y) }
}

fn seg(id: &str, a: usize, b: usize, g: &[EmbVertex]) -> EmbEdge {
    EmbEdge {
        id: id.into(),
        endpoints: (a, b),
        polyline: vec![(g[a].x.clone(), g[a].y.clone()), (g[b].x.clone(), g[b].y.clone())],
    }
}

fn seg_graph() -> EmbeddedGraph {
    let v = vec![mk("A", -1, 0), mk("B", 1, 0)];
    let e = vec![seg("AB", 0, 1, &v)];
    EmbeddedGraph { vertices: v, edges: e }
}

fn y_graph() -> EmbeddedGraph {
    let v = vec![mk("A", -1, 1), mk("B", -1, -1), mk("C", 0, 0), mk("D", 1, 0)];
    let e = vec![seg("AC", 0, 2, &v), seg("BC", 1, 2, &v), seg("CD", 2, 3, &v)];
    EmbeddedGraph { vertices: v, edges: e }
}

fn eyeglasses() -> EmbeddedGraph {
    let v = vec![mk("A", -2, 0), mk("B", -1, 0), mk("C", 1, 0), mk("D", 2, 0)];
    let up = EmbEdge {
        id: "BCup".into(),
        endpoints: (1, 2),
        polyline: vec![(rat_i(-1), rat_i(0)), (rat_i(0), rat(1, 2)), (rat_i(1), rat_i(0))],
    };
    let dn = EmbEdge {
        id: "BCdn".into(),
        endpoints: (1, 2),
        polyline: vec![(rat_i(-1), rat_i(0)), (rat_i(0), rat(-1, 2)), (rat_i(1), rat_i(0))],
    };
    let e = vec![seg("AB", 0, 1, &v), up, dn, seg("CD", 2, 3, &v)];
    EmbeddedGraph { vertices: v, edges: e }
}

fn main() {
    let only = std::env::args().nth(1);
    for (name, g) in [
        ("seg", seg_graph()),
        ("y", y_graph()),
        ("eyeglasses", eyeglasses()),
    ] {
        if let Some(o) = &only {
            if o != name {
                continue;
            }
        }
        let t0 = std::time::Instant::now();
        let cfg = RealizationConfig::default();
        match realize(&g, &cfg) {
            Ok(r) => {
                println!(
                    "{name}: ok in {:?} weak_iso={:?} degree={:?} circles={} ellipses={}",
                    t0.elapsed(),
                    r.weakly_isomorphic,
                    r.artifacts.certificate.as_ref().map(|c| c.degree),
                    r.artifacts.circle_count(),
                    r.artifacts.ellipse_count()
                );
                if let Some(gr) = &r.graph {
                    let vals: Vec<String> =
                        gr.vertices.iter().map(|v| format!("{:.3}", v.value.to_f64())).collect();
                    println!("   {} vertices {:?} {} edges", gr.vertices.len(), vals, gr.edges.len());
                }
            }
            Err(e) => println!("{name}: ERR after {:?}: {e}", t0.elapsed()),
        }
    }
}
