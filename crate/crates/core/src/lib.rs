//! Decide proper efficiency and approximate proper efficiency of points of a
//! finite union of polytopes, ordered by a polyhedral cone in a finite
//! dimensional normed space (L1, L2 or LINF).
//!
//! The crate is organised bottom-up:
//!
//! * [`numlin`]: vectors, norms, a dense simplex LP, polytopes, polyhedral
//!   cones and conic pieces.
//! * [`augdual`]: dual cones, strictly positive functionals, bases, augmented
//!   dual cones, Henig dilations and Hartley cones.
//! * [`separation`]: sphere sections, the strict separation property (SSP),
//!   separation witnesses and the relative-position dichotomy.
//! * [`efficiency`]: tri-state classifiers for Min and nine proper-efficiency
//!   notions.
//! * [`scalarize`]: the sublinear scalarization `f(x - x0) + alpha ||x - x0||`
//!   and certificate search.
//! * [`approx`]: approximate (D, eps) efficiency and AMin sets.
//! * [`harness`]: seeded instance generation and brute-force oracles.
//! * [`io`]: the instance and report JSON formats and SVG output.
//!
//! Start with the runnable programs in `examples/`:
//!
//! ```text
//! cargo run -p proper-eff --example classify_orthant
//! ```

pub mod approx;
pub mod augdual;
pub mod efficiency;
pub mod error;
pub mod harness;
pub mod io;
pub mod numlin;
pub mod scalarize;
pub mod separation;

pub use error::{Error, Result};

/// Feasibility tolerance used by the LP solver.
pub const TAU_FEAS: f64 = 1e-9;
/// Geometric strictness tolerance.
pub const TAU_GEOM: f64 = 1e-7;
