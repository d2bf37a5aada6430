//! Thickening of the rewired complex: the implicit piecewise model of the
//! boundary (offset of the complex at distance delta), the fold inventory the
//! algebraized curve must reproduce, and the rational boundary points pinned
//! into the fit.

use super::model::{Complex, Params, Pocket, RewiredVertex};
use crate::poly::solve::Box2;
use crate::rat::{rat, rat_i, Rat, RatInterval};
use num_traits::Zero;
use crate::vdigraph::EmbeddedGraph;

/// Expected vertical tangency of the algebraized boundary.
#[derive(Clone, Debug)]
pub struct FoldTarget {
    pub definite: bool,
    /// predicted location
    pub at: (Rat, Rat),
    /// window within which exactly one fold of this kind must exist
    pub window: Box2,
    /// y-range used when counting fibers across the window (wide enough to
    /// see the participating tubes)
    pub count_y: RatInterval,
    pub owner: FoldOwner,
}

#[derive(Clone, Debug)]
pub enum FoldOwner {
    /// cap of the tube at a degree-1 vertex; true when the leaf is a local
    /// maximum of the projection
    Leaf { vertex: usize, is_max: bool },
    Pocket(Pocket),
}

#[derive(Clone, Debug)]
pub struct FoldInventory {
    pub targets: Vec<FoldTarget>,
}

impl FoldInventory {
    pub fn definite_count(&self) -> usize {
        self.targets.iter().filter(|t| t.definite).count()
    }

    pub fn indefinite_count(&self) -> usize {
        self.targets.iter().filter(|t| !t.definite).count()
    }
}

/// A rational point the algebraized curve must pass through exactly: a point
/// on (or numerically indistinguishable from) the lower tube wall at the
/// leaf's abscissa, which later carries the pinned corner of the excision
/// circle.
#[derive(Clone, Debug)]
pub struct PinnedPoint {
    pub vertex: usize,
    pub at: (Rat, Rat),
    pub is_max: bool,
    /// extended cap tip of the model complex for this leaf
    pub tip: (Rat, Rat),
}

#[derive(Clone, Debug)]
pub struct ThickenedModel {
    pub complex: Complex,
    pub delta: Rat,
    pub inventory: FoldInventory,
    pub pins: Vec<PinnedPoint>,
    /// working box: graph bounding box with margin
    pub window: Box2,
}

/// Build the thickened model: inventory folds at leaf caps and pocket
/// U-turns, pinned rational points under each leaf.
pub fn thicken(
    g: &EmbeddedGraph,
    params: &Params,
    complex: &Complex,
    rewired: &[RewiredVertex],
) -> ThickenedModel {
    let delta = params.delta.clone();
    let mut targets = Vec::new();
    let mut pins = Vec::new();
    for (vi, v) in g.vertices.iter().enumerate() {
        if g.degree(vi) != 1 {
            continue;
        }
        // leaf: single incident edge decides the extremum side
        let e = g
            .edges
            .iter()
            .find(|e| e.endpoints.0 == vi || e.endpoints.1 == vi)
            .expect("leaf has an edge");
        let other = if e.endpoints.0 == vi { e.endpoints.1 } else { e.endpoints.0 };
        let is_max = g.vertices[other].x < v.x;
        // the complex is extended one delta-step beyond the leaf along the
        // edge direction, and the rounded cap adds up to another delta; the
        // fitted cap also pulls back inward. Accept the fold anywhere
        // strictly beyond the vertex out to the extended cap.
        let step = super::model::leaf_step(g, vi, &delta).expect("leaf has a step");
        let tip = (&v.x + &step.0, &v.y + &step.1);
        let (wx_lo, wx_hi) = if is_max {
            (&v.x + &delta / rat_i(4), &tip.0 + &delta * rat(3, 2))
        } else {
            (&tip.0 - &delta * rat(3, 2), &v.x - &delta / rat_i(4))
        };
        let wy = RatInterval::new(&tip.1 - &delta * rat(5, 4), &tip.1 + &delta * rat(5, 4));
        targets.push(FoldTarget {
            definite: true,
            at: (if is_max { &tip.0 + &delta } else { &tip.0 - &delta }, tip.1.clone()),
            window: Box2 { x: RatInterval::new(wx_lo, wx_hi), y: wy.clone() },
            count_y: wy,
            owner: FoldOwner::Leaf { vertex: vi, is_max },
        });
        // pinned point: on the vertical line through the leaf, at perpendicular
        // distance ~delta below the edge (rational approximation of the wall)
        let slope = if step.0.is_zero() { Rat::zero() } else { &step.1 / &step.0 };
        let sf = crate::rat::rat_to_f64(&slope);
        let sec = (1.0 + sf * sf).sqrt();
        let s_rat = crate::rat::rat_from_f64_with_denom(sec, 1 << 8);
        pins.push(PinnedPoint {
            vertex: vi,
            at: (v.x.clone(), &v.y - &delta * &s_rat),
            is_max,
            tip,
        });
    }
    for rv in rewired {
        for pocket in rv.pockets() {
            let uy = (&pocket.h_lo + &pocket.h_hi) / rat_i(2);
            let gap = &pocket.h_hi - &pocket.h_lo;
            let wy = &gap / rat_i(6);
            let (wx_lo, wx_hi) = if pocket.side_left {
                (&pocket.x - &delta * rat(7, 4), &pocket.x - &delta / rat_i(4))
            } else {
                (&pocket.x + &delta / rat_i(4), &pocket.x + &delta * rat(7, 4))
            };
            let ux = if pocket.side_left { &pocket.x - &delta } else { &pocket.x + &delta };
            targets.push(FoldTarget {
                definite: false,
                at: (ux, uy.clone()),
                window: Box2 {
                    x: RatInterval::new(wx_lo, wx_hi),
                    y: RatInterval::new(&uy - &wy, &uy + &wy),
                },
                count_y: RatInterval::new(&pocket.h_lo - &delta * rat(3, 2), &pocket.h_hi + &delta * rat(3, 2)),
                owner: FoldOwner::Pocket(pocket),
            });
        }
    }
    let window = working_box(g, params);
    ThickenedModel {
        complex: complex.clone(),
        delta,
        inventory: FoldInventory { targets },
        pins,
        window,
    }
}

/// Graph bounding box inflated enough to contain the thickened model and the
/// excision conics with room to spare.
pub fn working_box(g: &EmbeddedGraph, params: &Params) -> Box2 {
    let mut x_lo = g.vertices[0].x.clone();
    let mut x_hi = x_lo.clone();
    let mut y_lo = g.vertices[0].y.clone();
    let mut y_hi = y_lo.clone();
    for v in &g.vertices {
        if v.x < x_lo {
            x_lo = v.x.clone();
        }
        if v.x > x_hi {
            x_hi = v.x.clone();
        }
        if v.y < y_lo {
            y_lo = v.y.clone();
        }
        if v.y > y_hi {
            y_hi = v.y.clone();
        }
    }
    for e in &g.edges {
        for (x, y) in &e.polyline {
            if x < &x_lo {
                x_lo = x.clone();
            }
            if x > &x_hi {
                x_hi = x.clone();
            }
            if y < &y_lo {
                y_lo = y.clone();
            }
            if y > &y_hi {
                y_hi = y.clone();
            }
        }
    }
    let margin = &params.eps2 / rat_i(2) + &params.delta * rat_i(4);
    Box2 {
        x: RatInterval::new(&x_lo - &margin, &x_hi + &margin),
        y: RatInterval::new(&y_lo - &margin, &y_hi + &margin),
    }
}
