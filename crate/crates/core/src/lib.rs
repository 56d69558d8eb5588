//! Computing, bounding, and certifying the dispersion of point sets in the
//! unit cube.
//!
//! The dispersion of a finite set `T` in `[0,1]^d` is the supremum volume
//! of an axis-parallel box containing no point of `T`. This crate provides:
//!
//! - [`geometry`]: points, boxes with explicit boundary semantics, and
//!   dyadic intervals/boxes with the quarter-length rounding guarantee.
//! - [`solver`]: exact dispersion via a brute-force grid oracle and an
//!   equivalent pruned search, both returning a maximizing empty box.
//! - [`witness`]: a constructive certificate pipeline producing, for any
//!   input set, an empty box of volume at least
//!   `log2(d) / (4 (n + log2 d))`.
//! - [`nets`]: van der Corput / Hammersley / digital-net generators,
//!   exhaustive `(t, m, d)`-net verification, and the induced dispersion
//!   bound `2^(t - m + 2d)`.
//! - [`bounds`]: closed-form lower/upper bounds on the minimal dispersion
//!   and on the rate constant `c_d`, overflow-safe in log2 form.
//! - [`optimizer`]: seeded hill climbing with restarts for empirical
//!   low-dispersion configurations.
//!
//! All operations are pure functions of their inputs and safe to call
//! concurrently.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod nets;
pub mod optimizer;
pub mod sampling;
pub mod solver;
pub mod witness;

pub use error::{Error, Result};
pub use geometry::{
    largest_dyadic_subbox, largest_dyadic_subinterval, AxisBox, BoxSemantics, DyadicBox,
    DyadicInterval, Point, PointSet, MAX_DYADIC_DEPTH,
};
pub use solver::{
    candidate_grid, dispersion_bruteforce, dispersion_exact, is_empty, DispersionResult,
    SolveMethod,
};
pub use witness::{guaranteed_box, pigeonhole_box, WitnessBranch, WitnessCertificate};
