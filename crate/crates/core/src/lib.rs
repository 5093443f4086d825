//! Exact arithmetic for the computational core of Vojta's proof of the
//! Mordell conjecture: weighted indices of bivariate polynomials, the
//! generalized Dyson lemma on P1 x P1, Siegel-lemma small sections with
//! prescribed index, and the Mordell-Weil gap principle with explicit
//! constants.
//!
//! Every verdict is computed over `Q`; floating point appears only in
//! diagnostics.

#![allow(clippy::needless_range_loop)]

pub mod dyson;
pub mod error;
pub mod gap;
pub mod index;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod rat;
pub mod siegel;

pub use dyson::{dyson2_report, dyson_report, strip_fibers, DysonReport, PointConfig, StripResult};
pub use error::{Error, Result};
pub use index::{multiplicity, v_of, weighted_index, IndexValue, Weight};
pub use poly::{analyze_divisor, BiPoly, DivisorData, Exp};
pub use rat::{fmt_rat, parse_rat, Rat};
pub use siegel::{siegel_solve, verify_solution, SiegelProblem, SiegelSolution};
