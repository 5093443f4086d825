#![allow(dead_code)]

use dyson_gap::poly::{BiPoly, Exp};
use dyson_gap::rat::{int, rat, Rat};
use dyson_gap::Weight;
use num_traits::Zero;
use rand::Rng;

pub fn factorial(n: u32) -> Rat {
    (1..=n as i64).fold(int(1), |acc, k| acc * int(k))
}

/// Taylor coefficient `(d/dx)^i (d/dy)^j f (p, q) / (i! j!)`, by repeated
/// formal differentiation and evaluation.
pub fn taylor_coeff(f: &BiPoly, point: &(Rat, Rat), e: Exp) -> Rat {
    let mut g = f.clone();
    for _ in 0..e.0 {
        g = g.derivative_x();
    }
    for _ in 0..e.1 {
        g = g.derivative_y();
    }
    g.eval(&point.0, &point.1) / (factorial(e.0) * factorial(e.1))
}

/// All Taylor coefficients at `point` as a polynomial in the local coordinates.
pub fn taylor_expansion(f: &BiPoly, point: &(Rat, Rat)) -> BiPoly {
    let (dx, dy) = f.bidegree();
    let mut out = BiPoly::zero();
    for i in 0..=dx {
        for j in 0..=dy {
            let c = taylor_coeff(f, point, (i, j));
            if !c.is_zero() {
                out.add_term((i, j), c);
            }
        }
    }
    out
}

/// Weighted index from the Taylor coefficients, lexicographically smallest minimizer.
pub fn taylor_index(f: &BiPoly, point: &(Rat, Rat), w: &Weight) -> Option<(Rat, Exp)> {
    let (dx, dy) = f.bidegree();
    let mut best: Option<(Rat, Exp)> = None;
    for i in 0..=dx {
        for j in 0..=dy {
            if taylor_coeff(f, point, (i, j)).is_zero() {
                continue;
            }
            let g = int(i as i64) / &w.b1 + int(j as i64) / &w.b2;
            if best.as_ref().is_none_or(|(b, _)| g < *b) {
                best = Some((g, (i, j)));
            }
        }
    }
    best
}

pub fn random_poly(rng: &mut impl Rng, max: (u32, u32), coeff: i64) -> BiPoly {
    loop {
        let mut f = BiPoly::zero();
        let n_terms = rng.gen_range(1..=6);
        for _ in 0..n_terms {
            let e = (rng.gen_range(0..=max.0), rng.gen_range(0..=max.1));
            let c = rat(rng.gen_range(-coeff..=coeff), rng.gen_range(1..=3));
            f.add_term(e, c);
        }
        if !f.is_zero() {
            return f;
        }
    }
}

/// A polynomial with a good chance of vanishing to positive order at `point`.
pub fn random_poly_vanishing(rng: &mut impl Rng, point: &(Rat, Rat), max: (u32, u32)) -> BiPoly {
    let base = random_poly(rng, max, 5);
    let lx = BiPoly::x() - BiPoly::constant(point.0.clone());
    let ly = BiPoly::y() - BiPoly::constant(point.1.clone());
    let mut f = base;
    for _ in 0..rng.gen_range(0..=2) {
        f = if rng.gen_bool(0.5) { &f * &lx } else { &f * &ly };
    }
    f
}

pub fn random_point(rng: &mut impl Rng) -> (Rat, Rat) {
    (rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)), rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
}

pub fn random_weight(rng: &mut impl Rng) -> Weight {
    Weight::new(rat(rng.gen_range(1..=12), rng.gen_range(1..=4)), rat(rng.gen_range(1..=12), rng.gen_range(1..=4)))
        .unwrap()
}
