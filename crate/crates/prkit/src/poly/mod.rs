//! Exact polynomial substrate: bivariate/univariate arithmetic, Sturm root
//! isolation, resultant elimination, two-equation system solving, conic
//! constructors and least-squares fitting.

pub mod bivar;
pub mod conic;
pub mod fit;
pub mod resultant;
pub mod solve;
pub mod sturm;
pub mod unipoly;

pub use bivar::{BivarPoly, Var};
pub use conic::{conic_poly, ConicSign, ConicSpec};
pub use fit::{fit_polynomial, FitError, FitOptions, FitOutcome};
pub use resultant::{gcd_bivar, resultant_sylvester, resultant_uni, resultant_x, resultant_y};
pub use solve::{jacobian_det, solve_system, solve_system_opts, Box2, SolveError, SolveOptions, SystemPoint};
pub use sturm::{isolate_real_roots, IsolatedRoot, SturmError};
pub use unipoly::{IntPoly, UniPoly};
