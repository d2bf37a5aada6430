//! Small exact-segment predicates shared by the realization model.

use crate::rat::{sign_of, Rat};

type Pt = (Rat, Rat);

pub fn orient(a: &Pt, b: &Pt, c: &Pt) -> i8 {
    let v = (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0);
    sign_of(&v)
}

pub fn on_segment(a: &Pt, b: &Pt, p: &Pt) -> bool {
    orient(a, b, p) == 0
        && p.0 >= a.0.clone().min(b.0.clone())
        && p.0 <= a.0.clone().max(b.0.clone())
        && p.1 >= a.1.clone().min(b.1.clone())
        && p.1 <= a.1.clone().max(b.1.clone())
}

pub fn segments_intersect(a: &Pt, b: &Pt, c: &Pt, d: &Pt) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

/// The two segments meet exactly in one shared endpoint.
pub fn touch_only_at_shared(a0: &Pt, a1: &Pt, b0: &Pt, b1: &Pt) -> bool {
    let mut shared: Vec<&Pt> = Vec::new();
    for p in [a0, a1] {
        if p == b0 || p == b1 {
            shared.push(p);
        }
    }
    if shared.len() != 1 {
        return false;
    }
    let sh = shared[0];
    for p in [a0, a1] {
        if p != sh && on_segment(b0, b1, p) {
            return false;
        }
    }
    for p in [b0, b1] {
        if p != sh && on_segment(a0, a1, p) {
            return false;
        }
    }
    // collinear overlap past the endpoint
    let collinear = orient(a0, a1, b0) == 0 && orient(a0, a1, b1) == 0;
    if collinear {
        // with exactly one shared endpoint and no other endpoint containment,
        // collinear segments can only touch at that endpoint
    }
    true
}

/// Exactly one endpoint of segment (e0, e1) lies on segment (s0, s1), and the
/// rest of (e0, e1) does not cross it.
pub fn endpoint_on_segment(e0: &Pt, e1: &Pt, s0: &Pt, s1: &Pt) -> bool {
    let on0 = on_segment(s0, s1, e0);
    let on1 = on_segment(s0, s1, e1);
    if on0 == on1 {
        return false; // none or both on the target
    }
    // the other endpoint must be strictly off the supporting line
    let off = if on0 { e1 } else { e0 };
    orient(s0, s1, off) != 0
}
