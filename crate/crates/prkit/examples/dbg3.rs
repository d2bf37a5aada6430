use prkit::rat::{rat_i, rat_to_f64};
use prkit::realize::{field, model, thicken};
use prkit::vdigraph::{EmbEdge, EmbVertex, EmbeddedGraph};

fn main() {
    let mk = |id: &str, x: i64, y: i64| EmbVertex { id: id.into(), x: rat_i(x), y: rat_i(y) };
    let v = vec![mk("A", -1, 1), mk("B", -1, -1), mk("C", 0, 0), mk("D", 1, 0)];
    let seg = |id: &str, a: usize, b: usize, g: &[EmbVertex]| EmbEdge {
        id: id.into(),
        endpoints: (a, b),
        polyline: vec![(g[a].x.clone(), g[a].y.clone()), (g[b].x.clone(), g[b].y.clone())],
    };
    let e = vec![seg("AC", 0, 2, &v), seg("BC", 1, 2, &v), seg("CD", 2, 3, &v)];
    let g = EmbeddedGraph { vertices: v, edges: e };
    let mut params = model::derive_params(&g).unwrap();
    let segments = model::vertical_segments(&g, &params);
    let rewired = model::rewire(&g, &params).unwrap();
    params.delta = model::finalize_delta(&params, &rewired);
    let complex = model::build_complex(&g, &params, &segments, &rewired).unwrap();
    let m = thicken::thicken(&g, &params, &complex, &rewired);
    let d2 = rat_to_f64(&params.delta).powi(2);
    println!("delta = {:.4}, d2 = {:.2e}", rat_to_f64(&params.delta), d2);
    let samples = field::sample_field(&m, 48);
    println!("samples: {}", samples.len());
    // weighting variants
    for (name, f) in [
        ("linear", Box::new(|w: f64| w) as Box<dyn Fn(f64) -> f64>),
        ("square", Box::new(|w: f64| w * w)),
        ("cube", Box::new(|w: f64| w * w * w)),
        ("collar-only", Box::new(|w: f64| if w > 0.5 { 1.0 } else { 1e-4 })),
    ] {
        let reweighted: Vec<_> = samples
            .iter()
            .map(|((x, y), v, w)| ((x.clone(), y.clone()), *v, f(*w)))
            .collect();
        for deg in [12u32, 16] {
            let opts = prkit::poly::FitOptions {
                degree: deg,
                regularization: 1e-10,
                denominator_bound: 1 << 20,
                interpolate_zeros: vec![],
            };
            match prkit::poly::fit::fit_polynomial_weighted(&reweighted, &opts) {
                Ok(fit) => {
                    // collar rms: over full-weight samples only
                    let mut ss = 0.0;
                    let mut n = 0usize;
                    for ((x, y), v, w) in &samples {
                        if *w > 0.5 {
                            let p = rat_to_f64(&fit.poly.eval(x, y));
                            ss += (p - v) * (p - v);
                            n += 1;
                        }
                    }
                    let collar = (ss / n as f64).sqrt();
                    println!(
                        "  {name} deg {deg}: fit-rms {:.2e}, collar-rms {:.2e} (/d2 = {:.2})",
                        fit.rms_residual,
                        collar,
                        collar / d2
                    );
                }
                Err(e) => println!("  {name} deg {deg}: ERR {e}"),
            }
        }
    }
    let (xl, xh, yl, yh) = (
        rat_to_f64(&m.window.x.lo),
        rat_to_f64(&m.window.x.hi),
        rat_to_f64(&m.window.y.lo),
        rat_to_f64(&m.window.y.hi),
    );
    for deg in [12usize, 16, 20, 24] {
        cheb_probe(&samples, (&xl, &xh, &yl, &yh), deg, d2);
    }
}

// Chebyshev-basis weighted LS prototype (f64 only), collar rms check.
fn cheb_probe(
    samples: &[((prkit::rat::Rat, prkit::rat::Rat), f64, f64)],
    window: (&f64, &f64, &f64, &f64),
    degree: usize,
    d2: f64,
) {
    let (x_lo, x_hi, y_lo, y_hi) = window;
    let u = |x: f64| (2.0 * x - (x_lo + x_hi)) / (x_hi - x_lo);
    let vmap = |y: f64| (2.0 * y - (y_lo + y_hi)) / (y_hi - y_lo);
    let mut mons = Vec::new();
    for i in 0..=degree {
        for j in 0..=(degree - i) {
            mons.push((i, j));
        }
    }
    let m = mons.len();
    let cheb = |k: usize, t: f64| -> f64 {
        let mut t0 = 1.0;
        let mut t1 = t;
        if k == 0 {
            return 1.0;
        }
        for _ in 1..k {
            let t2 = 2.0 * t * t1 - t0;
            t0 = t1;
            t1 = t2;
        }
        t1
    };
    let mut ata = vec![0.0f64; m * m];
    let mut aty = vec![0.0f64; m];
    let mut row = vec![0.0f64; m];
    for ((x, y), val, w) in samples {
        let xf = prkit::rat::rat_to_f64(x);
        let yf = prkit::rat::rat_to_f64(y);
        let (uu, vv) = (u(xf), vmap(yf));
        for (k, &(i, j)) in mons.iter().enumerate() {
            row[k] = cheb(i, uu) * cheb(j, vv);
        }
        let wq = w * w;
        for a in 0..m {
            for b in a..m {
                ata[a * m + b] += wq * row[a] * row[b];
            }
            aty[a] += wq * row[a] * val;
        }
    }
    for a in 0..m {
        for b in 0..a {
            ata[a * m + b] = ata[b * m + a];
        }
        ata[a * m + a] += 1e-12;
    }
    // plain gaussian elimination
    let mut mat = ata;
    let mut rhs = aty;
    for col in 0..m {
        let mut best = col;
        for r in col + 1..m {
            if mat[r * m + col].abs() > mat[best * m + col].abs() {
                best = r;
            }
        }
        for c in 0..m {
            mat.swap(col * m + c, best * m + c);
        }
        rhs.swap(col, best);
        let p = mat[col * m + col];
        if p.abs() < 1e-300 {
            println!("  cheb deg {degree}: singular");
            return;
        }
        for r in col + 1..m {
            let f = mat[r * m + col] / p;
            if f == 0.0 {
                continue;
            }
            for c in col..m {
                mat[r * m + c] -= f * mat[col * m + c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut coef = vec![0.0f64; m];
    for col in (0..m).rev() {
        let mut v = rhs[col];
        for c in col + 1..m {
            v -= mat[col * m + c] * coef[c];
        }
        coef[col] = v / mat[col * m + col];
    }
    let eval = |xf: f64, yf: f64| -> f64 {
        let (uu, vv) = (u(xf), vmap(yf));
        mons.iter()
            .enumerate()
            .map(|(k, &(i, j))| coef[k] * cheb(i, uu) * cheb(j, vv))
            .sum()
    };
    let mut ss = 0.0;
    let mut n = 0usize;
    for ((x, y), val, w) in samples {
        if *w > 0.5 {
            let p = eval(prkit::rat::rat_to_f64(x), prkit::rat::rat_to_f64(y));
            ss += (p - val) * (p - val);
            n += 1;
        }
    }
    let collar = (ss / n as f64).sqrt();
    println!("  cheb deg {degree}: collar-rms {:.2e} (/d2 = {:.2})", collar, collar / d2);
}
