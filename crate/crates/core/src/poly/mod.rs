//! Exact bivariate polynomials and divisors on P1 x P1.

mod bipoly;
mod divisor;
pub mod sqfree;
mod uni;

pub use bipoly::{BiPoly, Exp};
pub use divisor::{analyze_divisor, Component, ComponentSummary, DivisorData};
pub use sqfree::{squarefree_decompose, squarefree_parts, SquarefreeParts};
pub use uni::UniPoly;

use crate::rat::Rat;

/// `f(t1 + p, t2 + q)`.
pub fn poly_shift(f: &BiPoly, p: &Rat, q: &Rat) -> BiPoly {
    f.shift(p, q)
}
