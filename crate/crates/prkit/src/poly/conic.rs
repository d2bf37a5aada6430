//! Axis-aligned conic constructors. These are the only curve factories the
//! realization pipeline adds on its own: excision circles and ellipses.

use super::bivar::BivarPoly;
use crate::rat::Rat;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConicSign {
    /// r - a1 (x-cx)^2 - a2 (y-cy)^2: positive inside the ellipse.
    InteriorPositive,
    /// a1 (x-cx)^2 + a2 (y-cy)^2 - r: positive outside.
    ExteriorPositive,
}

/// An axis-aligned ellipse `a1 (x-cx)^2 + a2 (y-cy)^2 = r` with a side
/// convention. All parameters rational, `a1, a2, r > 0`, so the zero set is
/// always a non-singular ellipse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicSpec {
    pub center: (Rat, Rat),
    pub a1: Rat,
    pub a2: Rat,
    pub r: Rat,
    pub sign: ConicSign,
}

impl ConicSpec {
    pub fn new(center: (Rat, Rat), a1: Rat, a2: Rat, r: Rat, sign: ConicSign) -> Self {
        assert!(a1.is_positive() && a2.is_positive() && r.is_positive(), "conic parameters must be positive");
        ConicSpec { center, a1, a2, r, sign }
    }

    pub fn circle(center: (Rat, Rat), r_squared: Rat, sign: ConicSign) -> Self {
        ConicSpec::new(center, Rat::one(), Rat::one(), r_squared, sign)
    }
}

use num_traits::One;

/// Expand the conic into its defining polynomial.
pub fn conic_poly(spec: &ConicSpec) -> BivarPoly {
    let (cx, cy) = (&spec.center.0, &spec.center.1);
    let mut p = BivarPoly::zero();
    // r - a1 (x-cx)^2 - a2 (y-cy)^2
    p.add_term(0, 0, spec.r.clone());
    p.add_term(2, 0, -spec.a1.clone());
    p.add_term(1, 0, &spec.a1 * cx * Rat::from_integer(2.into()));
    p.add_term(0, 0, -(&spec.a1 * cx * cx));
    p.add_term(0, 2, -spec.a2.clone());
    p.add_term(0, 1, &spec.a2 * cy * Rat::from_integer(2.into()));
    p.add_term(0, 0, -(&spec.a2 * cy * cy));
    match spec.sign {
        ConicSign::InteriorPositive => p,
        ConicSign::ExteriorPositive => p.neg(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i};

    #[test]
    fn unit_disk_interior() {
        let c = ConicSpec::circle((rat_i(0), rat_i(0)), rat_i(1), ConicSign::InteriorPositive);
        let p = conic_poly(&c);
        let expected = BivarPoly::from_terms([
            ((0, 0), rat_i(1)),
            ((2, 0), rat_i(-1)),
            ((0, 2), rat_i(-1)),
        ]);
        assert_eq!(p, expected);
    }

    #[test]
    fn quarter_circle_exterior() {
        let c = ConicSpec::circle((rat_i(0), rat_i(0)), rat(1, 4), ConicSign::ExteriorPositive);
        let p = conic_poly(&c);
        let expected = BivarPoly::from_terms([
            ((0, 0), rat(-1, 4)),
            ((2, 0), rat_i(1)),
            ((0, 2), rat_i(1)),
        ]);
        assert_eq!(p, expected);
    }

    #[test]
    fn shifted_anisotropic() {
        let c = ConicSpec::new(
            (rat_i(1), rat_i(0)),
            rat_i(1),
            rat_i(4),
            rat_i(1),
            ConicSign::InteriorPositive,
        );
        let p = conic_poly(&c);
        // 1 - (x-1)^2 - 4y^2 = -x^2 + 2x - 4y^2
        let expected = BivarPoly::from_terms([
            ((2, 0), rat_i(-1)),
            ((1, 0), rat_i(2)),
            ((0, 2), rat_i(-4)),
        ]);
        assert_eq!(p, expected);
    }

    #[test]
    fn center_value_equals_r() {
        let c = ConicSpec::new(
            (rat(3, 2), rat(-1, 3)),
            rat(2, 5),
            rat_i(7),
            rat(5, 4),
            ConicSign::InteriorPositive,
        );
        let p = conic_poly(&c);
        assert_eq!(p.eval(&rat(3, 2), &rat(-1, 3)), rat(5, 4));
    }
}
