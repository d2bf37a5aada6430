//! prkit: exact computation of Poincaré-Reeb V-digraphs of plane regions
//! bounded by non-singular real algebraic curves with normal crossings, and
//! realization of admissible embedded planar graphs as such regions.

pub mod algnum;
pub mod poly;
pub mod rat;

pub use algnum::RealAlg;
pub mod domain;
pub mod interval64;
pub mod jsonio;
pub mod lift;
pub mod realize;
pub mod reeb;
pub mod vdigraph;
pub mod sweep;
pub use rat::{Rat, RatInterval};
