//! High-precision toolkit for intermediate beta-transformations
//! `x -> beta*x + alpha mod 1` on the unit interval.
//!
//! The crate computes digit expansions of the endpoints 0 and 1, decides
//! (at finite depth, with exact certificates where periodicity allows)
//! whether the associated subshift has the specification property,
//! solves for parameter pairs `(alpha, beta)` realizing prescribed
//! expansions, scans the window of slopes whose expansion of 1 stays in
//! an interior digit band, and estimates Hausdorff dimension of the
//! associated self-similar attractors by the Moran equation and by box
//! counting.
//!
//! Modules:
//!
//! - [`real`] / [`numerics`]: fixed-point big reals, certified series
//!   tails, bracketed root finding, least-squares slopes.
//! - [`expansion`]: the transformation, its digit partition, endpoint
//!   itineraries and digit-driven orbits.
//! - [`symbolic`]: digit sequences, lexicographic order, subshift
//!   languages, topological entropy, overlap sets and the specification
//!   decision.
//! - [`parameter`]: the `alpha(beta)` curve, solving prescribed
//!   expansions, window scans, the digit-fraction map `phi` and the
//!   separation constants behind its bi-Lipschitz behavior.
//! - [`fractal`]: iterated function systems, Moran dimension, attractor
//!   samples and box-counting dimension.
//! - [`cli`]: the machine-readable command frontend (also exposed
//!   through the `abshift` binary).
//!
//! The `examples/` directory holds one runnable program per capability;
//! start with `cargo run --example solve_parameters`.

pub mod cli;
pub mod error;
pub mod expansion;
pub mod fractal;
pub mod numerics;
pub mod parameter;
pub mod real;
pub mod symbolic;

pub use error::{Error, Result};
pub use expansion::{expansion_of_one, expansion_of_zero, Orbit, ParamPoint};
pub use numerics::PrecisionContext;
pub use real::Real;
pub use symbolic::{DigitSeq, SubshiftSpec};
