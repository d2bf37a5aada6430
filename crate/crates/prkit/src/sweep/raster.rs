//! Independent raster oracle: rasterize the region on a grid, take the
//! connected component of the basepoint cell, and read off an approximate
//! Poincaré-Reeb graph from column runs. Used to cross-check the exact sweep;
//! shares no code path with it.

use crate::poly::solve::Box2;
use crate::poly::BivarPoly;
use crate::rat::{rat_i, sign_of, Rat};

#[derive(Debug, thiserror::Error)]
pub enum RasterError {
    #[error("resolution must be at least 64")]
    ResolutionTooSmall,
    #[error("basepoint cell is not inside the region")]
    BasepointCellEmpty,
}

/// Approximate PR graph extracted from the raster: vertices carry the column
/// x-value (as a rational sample); structure mirrors `sweep::PRGraph`.
#[derive(Debug, Clone)]
pub struct RasterGraph {
    pub vertex_values: Vec<Rat>,
    pub edges: Vec<(usize, usize)>,
}

/// Rasterize and extract the approximate PR graph of the basepoint component.
pub fn raster_prgraph(
    curves: &[BivarPoly],
    window: &Box2,
    basepoint: &(Rat, Rat),
    resolution: u32,
) -> Result<RasterGraph, RasterError> {
    if resolution < 64 {
        return Err(RasterError::ResolutionTooSmall);
    }
    let n = resolution as usize;
    let dx = window.x.width() / rat_i(resolution as i64);
    let dy = window.y.width() / rat_i(resolution as i64);
    // cell centers
    let xs: Vec<Rat> = (0..n)
        .map(|i| &window.x.lo + &dx * rat_i(i as i64) + &dx / rat_i(2))
        .collect();
    let ys: Vec<Rat> = (0..n)
        .map(|j| &window.y.lo + &dy * rat_i(j as i64) + &dy / rat_i(2))
        .collect();

    // mark cells: all curves >= 0 at the center (exact rational signs)
    let mut inside = vec![false; n * n];
    for (i, x) in xs.iter().enumerate() {
        // restrict each curve to the column once
        let cols: Vec<_> = curves.iter().map(|f| f.restrict_x(x)).collect();
        for (j, y) in ys.iter().enumerate() {
            let ok = cols.iter().all(|q| sign_of(&q.eval(y)) >= 0);
            inside[i * n + j] = ok;
        }
    }

    // basepoint cell
    let cell_of = |v: &Rat, lo: &Rat, d: &Rat| -> usize {
        let idx = ((v - lo) / d).floor().to_integer();
        let idx: i64 = idx.try_into().unwrap_or(0);
        idx.clamp(0, n as i64 - 1) as usize
    };
    let bi = cell_of(&basepoint.0, &window.x.lo, &dx);
    let bj = cell_of(&basepoint.1, &window.y.lo, &dy);
    graph_from_grid(inside, n, &xs, bi, bj)
}

/// Raster oracle over an arbitrary inside-predicate evaluated at f64 cell
/// centers; used for the numeric sweep of piecewise (non-algebraic) models.
pub fn raster_prgraph_fn(
    window: &Box2,
    pred: &dyn Fn(f64, f64) -> bool,
    basepoint: (f64, f64),
    resolution: u32,
) -> Result<RasterGraph, RasterError> {
    if resolution < 64 {
        return Err(RasterError::ResolutionTooSmall);
    }
    let n = resolution as usize;
    let x_lo = crate::rat::rat_to_f64(&window.x.lo);
    let x_hi = crate::rat::rat_to_f64(&window.x.hi);
    let y_lo = crate::rat::rat_to_f64(&window.y.lo);
    let y_hi = crate::rat::rat_to_f64(&window.y.hi);
    let dxr = window.x.width() / rat_i(resolution as i64);
    let xs: Vec<Rat> = (0..n)
        .map(|i| &window.x.lo + &dxr * rat_i(i as i64) + &dxr / rat_i(2))
        .collect();
    let mut inside = vec![false; n * n];
    for i in 0..n {
        let x = x_lo + (x_hi - x_lo) * (i as f64 + 0.5) / n as f64;
        for (j, cell) in inside[i * n..(i + 1) * n].iter_mut().enumerate() {
            let y = y_lo + (y_hi - y_lo) * (j as f64 + 0.5) / n as f64;
            *cell = pred(x, y);
        }
    }
    let cell_of = |v: f64, lo: f64, hi: f64| -> usize {
        (((v - lo) / (hi - lo) * n as f64).floor() as i64).clamp(0, n as i64 - 1) as usize
    };
    let bi = cell_of(basepoint.0, x_lo, x_hi);
    let bj = cell_of(basepoint.1, y_lo, y_hi);
    graph_from_grid(inside, n, &xs, bi, bj)
}

fn graph_from_grid(
    inside: Vec<bool>,
    n: usize,
    xs: &[Rat],
    bi: usize,
    bj: usize,
) -> Result<RasterGraph, RasterError> {
    if !inside[bi * n + bj] {
        return Err(RasterError::BasepointCellEmpty);
    }

    // connected component (4-connectivity)
    let mut comp = vec![false; n * n];
    let mut stack = vec![(bi, bj)];
    comp[bi * n + bj] = true;
    while let Some((i, j)) = stack.pop() {
        let push = |i2: usize, j2: usize, comp: &mut Vec<bool>, stack: &mut Vec<(usize, usize)>| {
            let idx = i2 * n + j2;
            if inside[idx] && !comp[idx] {
                comp[idx] = true;
                stack.push((i2, j2));
            }
        };
        if i > 0 {
            push(i - 1, j, &mut comp, &mut stack);
        }
        if i + 1 < n {
            push(i + 1, j, &mut comp, &mut stack);
        }
        if j > 0 {
            push(i, j - 1, &mut comp, &mut stack);
        }
        if j + 1 < n {
            push(i, j + 1, &mut comp, &mut stack);
        }
    }

    // column runs of the component
    #[derive(Clone, Debug)]
    struct Run {
        j_lo: usize,
        j_hi: usize,
        node: usize, // graph-building scratch
    }
    let mut columns: Vec<Vec<Run>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut runs = Vec::new();
        let mut j = 0;
        while j < n {
            if comp[i * n + j] {
                let start = j;
                while j + 1 < n && comp[i * n + (j + 1)] {
                    j += 1;
                }
                runs.push(Run { j_lo: start, j_hi: j, node: usize::MAX });
                j += 1;
            } else {
                j += 1;
            }
        }
        columns.push(runs);
    }

    // Build a node per run, link overlapping runs between adjacent columns,
    // then contract pass-through chains (nodes with exactly one left and one
    // right neighbour) into edges.
    let mut node_count = 0usize;
    for col in columns.iter_mut() {
        for r in col.iter_mut() {
            r.node = node_count;
            node_count += 1;
        }
    }
    let mut col_of_node = vec![0usize; node_count];
    for (i, col) in columns.iter().enumerate() {
        for r in col {
            col_of_node[r.node] = i;
        }
    }
    let overlaps = |a: &Run, b: &Run| a.j_lo <= b.j_hi && b.j_lo <= a.j_hi;
    let mut right_nb: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    let mut left_nb: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for i in 0..n.saturating_sub(1) {
        for a in &columns[i] {
            for b in &columns[i + 1] {
                if overlaps(a, b) {
                    right_nb[a.node].push(b.node);
                    left_nb[b.node].push(a.node);
                }
            }
        }
    }

    // vertices = runs that are not simple pass-throughs
    let is_vertex = |v: usize| left_nb[v].len() != 1 || right_nb[v].len() != 1;
    let mut vertex_id = vec![usize::MAX; node_count];
    let mut vertex_values = Vec::new();
    for v in 0..node_count {
        if is_vertex(v) {
            vertex_id[v] = vertex_values.len();
            vertex_values.push(xs[col_of_node[v]].clone());
        }
    }
    let mut edges = Vec::new();
    for v in 0..node_count {
        if vertex_id[v] == usize::MAX {
            continue;
        }
        // follow each rightward chain to the next vertex
        for &start in &right_nb[v] {
            let mut cur = start;
            loop {
                if vertex_id[cur] != usize::MAX {
                    edges.push((vertex_id[v], vertex_id[cur]));
                    break;
                }
                cur = right_nb[cur][0];
            }
        }
    }
    edges.sort_unstable();
    Ok(RasterGraph { vertex_values, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn circle() -> BivarPoly {
        BivarPoly::from_terms([((0, 0), rat_i(1)), ((2, 0), rat_i(-1)), ((0, 2), rat_i(-1))])
    }

    fn inner() -> BivarPoly {
        BivarPoly::from_terms([((0, 0), rat(-1, 4)), ((2, 0), rat_i(1)), ((0, 2), rat_i(1))])
    }

    fn window() -> Box2 {
        Box2::new(rat(-3, 2), rat(3, 2), rat(-3, 2), rat(3, 2))
    }

    #[test]
    fn disk_raster_is_single_edge() {
        let g = raster_prgraph(&[circle()], &window(), &(rat_i(0), rat_i(0)), 128).unwrap();
        assert_eq!(g.vertex_values.len(), 2);
        assert_eq!(g.edges.len(), 1);
    }

    #[test]
    fn annulus_raster_has_cycle() {
        let g = raster_prgraph(
            &[circle(), inner()],
            &window(),
            &(rat(3, 4), rat_i(0)),
            256,
        )
        .unwrap();
        // 4 vertices: two extremes of the outer circle, two branchings at the
        // inner circle; 4 edges with a doubled middle pair
        assert_eq!(g.vertex_values.len(), 4);
        assert_eq!(g.edges.len(), 4);
    }

    #[test]
    fn low_resolution_rejected() {
        let err = raster_prgraph(&[circle()], &window(), &(rat_i(0), rat_i(0)), 32);
        assert!(matches!(err, Err(RasterError::ResolutionTooSmall)));
    }

    #[test]
    fn basepoint_outside_rejected() {
        let err = raster_prgraph(&[circle()], &window(), &(rat(5, 4), rat_i(0)), 128);
        assert!(matches!(err, Err(RasterError::BasepointCellEmpty)));
    }
}
