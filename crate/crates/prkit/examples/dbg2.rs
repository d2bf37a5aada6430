use prkit::poly::Var;
use prkit::rat::{rat_from_f64_with_denom, rat_i, rat_to_f64};
use prkit::realize::{algebraize, field, model, thicken};
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
    println!("eps1={} eps2={} delta={} (={:.4})", params.eps1, params.eps2, params.delta, rat_to_f64(&params.delta));
    let complex = model::build_complex(&g, &params, &segments, &rewired).unwrap();
    let m = thicken::thicken(&g, &params, &complex, &rewired);
    for t in &m.inventory.targets {
        println!("target definite={} at ({:.4},{:.4}) window x[{:.4},{:.4}] y[{:.4},{:.4}]",
            t.definite, rat_to_f64(&t.at.0), rat_to_f64(&t.at.1),
            rat_to_f64(&t.window.x.lo), rat_to_f64(&t.window.x.hi),
            rat_to_f64(&t.window.y.lo), rat_to_f64(&t.window.y.hi));
    }
    let samples = field::sample_field(&m, 48);
    let d2 = rat_to_f64(&params.delta) * rat_to_f64(&params.delta);
    for deg in [10u32, 12, 14, 16, 18] {
        let opts = prkit::poly::FitOptions { degree: deg, regularization: 1e-9, denominator_bound: 1 << 20, interpolate_zeros: vec![] };
        match prkit::poly::fit::fit_polynomial_weighted(&samples, &opts) {
            Ok(fit) => println!("degree {deg}: rms {:.2e}  rms/d2 = {:.2}", fit.rms_residual, fit.rms_residual / d2),
            Err(e) => println!("degree {deg}: ERR {e}"),
        }
    }
    let opts = prkit::poly::FitOptions { degree: 12, regularization: 1e-9, denominator_bound: 1 << 20, interpolate_zeros: vec![] };
    let fit = prkit::poly::fit::fit_polynomial_weighted(&samples, &opts).unwrap();
    /* // locate worst weighted residuals
    let mut resid: Vec<(f64, f64, f64, f64)> = samples
        .iter()
        .map(|((x, y), v, w)| {
            let p = rat_to_f64(&fit.poly.eval(x, y));
            let r = (p - v) * w.sqrt();
            (r.abs(), rat_to_f64(x), rat_to_f64(y), *v)
        })
        .collect();
    resid.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    println!("worst weighted residuals (|r|, x, y, field):");
    for r in resid.iter().take(15) {
        println!("  {:.2e} at ({:+.3}, {:+.3}) field={:+.2e}", r.0, r.1, r.2, r.3);
    } */
    let pins: Vec<_> = m.pins.iter().map(|p| p.at.clone()).collect();
    let f = prkit::poly::fit::impose_interpolation_zeros(fit.poly.clone(), 12, &pins).unwrap();
    // max denominator bits of coefficients
    let max_bits = f.terms().map(|(_, c)| c.denom().bits()).max().unwrap();
    println!("max coeff denominator bits after pinning: {}", max_bits);
    // scan f and fy along y = 1 near x = -1.03
    let fy = f.derive(Var::Y);
    for k in 0..13 {
        let x = -1.06 + 0.005 * k as f64;
        let xr = rat_from_f64_with_denom(x, 1 << 20);
        let vf = rat_to_f64(&f.eval(&xr, &rat_i(1)));
        let vfy = rat_to_f64(&fy.eval(&xr, &rat_i(1)));
        println!("  x={:.3}: f={:+.5e} fy={:+.5e}", x, vf, vfy);
    }
    // sign map near the stall point: f sign (#/.) and fy sign (upper/lower case)
    let (cx0, cy0, half) = (-0.09, 0.0, 0.14);
    println!("zoom map around ({cx0}, {cy0}) half-width {half}: '#'=f>0&fy>0, '+'=f>0&fy<0, ':'=f<0&fy>0, '.'=f<0&fy<0");
    for j in 0..36 {
        let y = cy0 + half - 2.0 * half * j as f64 / 35.0;
        let yr = rat_from_f64_with_denom(y, 1 << 26);
        let mut line = String::new();
        for i in 0..72 {
            let x = cx0 - half + 2.0 * half * i as f64 / 71.0;
            let xr = rat_from_f64_with_denom(x, 1 << 26);
            let vf = rat_to_f64(&f.eval(&xr, &yr));
            let vfy = rat_to_f64(&fy.eval(&xr, &yr));
            let ch = match (vf > 0.0, vfy > 0.0) {
                (true, true) => '#',
                (true, false) => '+',
                (false, true) => ':',
                (false, false) => '.',
            };
            line.push(ch);
        }
        println!("{line}");
    }
    let t0 = std::time::Instant::now();
    let r = prkit::poly::solve::solve_system_subdiv(&f, &fy, &m.inventory.targets[0].window, 48);
    println!("fold search: {:?} in {:?}", r.map(|p| p.len()).map_err(|e| e.to_string()), t0.elapsed());
}
