//! Weighted vanishing index, multiplicity, the area function `V`, and the
//! Cauchy coefficient bound.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{BiPoly, Exp};
use crate::rat::{int, pow, serde_rat, to_f64, Rat};

/// Positive rational weight `(b1, b2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Weight {
    #[serde(with = "serde_rat")]
    pub b1: Rat,
    #[serde(with = "serde_rat")]
    pub b2: Rat,
}

impl Weight {
    pub fn new(b1: Rat, b2: Rat) -> Result<Self> {
        if !b1.is_positive() || !b2.is_positive() {
            return Err(Error::NonPositiveWeight);
        }
        Ok(Self { b1, b2 })
    }

    pub fn unit() -> Self {
        Self {
            b1: Rat::one(),
            b2: Rat::one(),
        }
    }

    /// `i1/b1 + i2/b2`.
    pub fn grade(&self, e: Exp) -> Rat {
        int(e.0 as i64) / &self.b1 + int(e.1 as i64) / &self.b2
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        Self {
            b1: &self.b1 * c,
            b2: &self.b2 * c,
        }
    }
}

/// Index value together with the lexicographically smallest exponent attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexValue {
    #[serde(with = "serde_rat")]
    pub value: Rat,
    pub attaining_exponent: Exp,
}

/// Minimum of `i1/b1 + i2/b2` over the support of `f` expanded at `point`.
pub fn weighted_index(f: &BiPoly, point: &(Rat, Rat), w: &Weight) -> Result<IndexValue> {
    if f.is_zero() {
        return Err(Error::ZeroIndex);
    }
    let shifted = f.shift(&point.0, &point.1);
    Ok(min_grade(&shifted, w))
}

/// Same as [`weighted_index`] for a polynomial already expanded at the point.
pub fn index_of_expansion(shifted: &BiPoly, w: &Weight) -> Result<IndexValue> {
    if shifted.is_zero() {
        return Err(Error::ZeroIndex);
    }
    Ok(min_grade(shifted, w))
}

fn min_grade(shifted: &BiPoly, w: &Weight) -> IndexValue {
    // terms iterate in lex order, so keeping the first strict minimum gives the tie-break
    let mut best: Option<(Rat, Exp)> = None;
    for (e, _) in shifted.terms() {
        let g = w.grade(e);
        if best.as_ref().is_none_or(|(b, _)| g < *b) {
            best = Some((g, e));
        }
    }
    let (value, attaining_exponent) = best.expect("nonzero polynomial");
    IndexValue {
        value,
        attaining_exponent,
    }
}

/// Order of vanishing at `point` (the index at weight `(1, 1)`).
pub fn multiplicity(f: &BiPoly, point: &(Rat, Rat)) -> Result<u32> {
    let iv = weighted_index(f, point, &Weight::unit())?;
    Ok(iv.value.to_integer().to_u32().expect("multiplicity fits in u32"))
}

/// Area of `{0 <= x, y <= 1, x + y <= a}`.
pub fn v_of(a: &Rat) -> Result<Rat> {
    if a.is_negative() {
        return Err(Error::NegativeArgument);
    }
    let one = Rat::one();
    let two = int(2);
    Ok(if *a <= one {
        a * a / &two
    } else if *a <= two {
        let r = &two - a;
        one - &r * &r / &two
    } else {
        one
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientCheck {
    pub exponent: Exp,
    #[serde(with = "serde_rat")]
    pub abs_coefficient: Rat,
    #[serde(with = "serde_rat")]
    pub bound: Rat,
    pub holds: bool,
    pub tight: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CauchyDiagnostics {
    /// Largest `|f|` over an `n x n` grid on the boundary torus, in floating point.
    pub sampled_torus_sup: f64,
    pub grid: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CauchyReport {
    /// `sum |a_{i1,i2}| r1^i1 r2^i2`, a certified bound for `sup |f|` on the polydisc.
    #[serde(with = "serde_rat")]
    pub s_upper: Rat,
    pub checks: Vec<CoefficientCheck>,
    pub all_hold: bool,
    pub diagnostics: CauchyDiagnostics,
}

pub const CAUCHY_GRID: usize = 32;

/// Checks `|a_{i1,i2}| <= r1^-i1 r2^-i2 * S_upper` for every coefficient of the
/// expansion of `f` at `point`, where `S_upper` bounds the sup on the polydisc
/// of radii `(r1, r2)`.
pub fn cauchy_bound_report(
    f: &BiPoly,
    point: &(Rat, Rat),
    r1: &Rat,
    r2: &Rat,
    grid: usize,
) -> Result<CauchyReport> {
    if f.is_zero() {
        return Err(Error::ZeroIndex);
    }
    if !r1.is_positive() || !r2.is_positive() {
        return Err(Error::Precondition("radii must be positive".into()));
    }
    let g = f.shift(&point.0, &point.1);
    let s_upper = g
        .terms()
        .map(|(e, c)| c.abs() * pow(r1, e.0) * pow(r2, e.1))
        .fold(Rat::zero(), |a, b| a + b);
    let checks: Vec<CoefficientCheck> = g
        .terms()
        .map(|(e, c)| {
            let bound = &s_upper / (pow(r1, e.0) * pow(r2, e.1));
            let abs = c.abs();
            CoefficientCheck {
                exponent: e,
                holds: abs <= bound,
                tight: abs == bound,
                abs_coefficient: abs,
                bound,
            }
        })
        .collect();
    let all_hold = checks.iter().all(|c| c.holds);
    Ok(CauchyReport {
        s_upper,
        checks,
        all_hold,
        diagnostics: CauchyDiagnostics {
            sampled_torus_sup: sampled_torus_sup(&g, to_f64(r1), to_f64(r2), grid),
            grid,
        },
    })
}

fn sampled_torus_sup(g: &BiPoly, r1: f64, r2: f64, n: usize) -> f64 {
    let terms: Vec<(Exp, f64)> = g.terms().map(|(e, c)| (e, to_f64(c))).collect();
    let mut best = 0.0f64;
    let tau = std::f64::consts::TAU;
    for a in 0..n {
        let th = tau * a as f64 / n as f64;
        for b in 0..n {
            let ph = tau * b as f64 / n as f64;
            let (mut re, mut im) = (0.0, 0.0);
            for &((i, j), c) in &terms {
                let mag = c * r1.powi(i as i32) * r2.powi(j as i32);
                let ang = th * i as f64 + ph * j as f64;
                re += mag * ang.cos();
                im += mag * ang.sin();
            }
            best = best.max(re.hypot(im));
        }
    }
    best
}

/// `V(a)` tabulated on `0, step, 2 step, ...` up to `upto`.
pub fn v_table(step: &Rat, upto: &Rat) -> Result<Vec<(Rat, Rat)>> {
    if !step.is_positive() {
        return Err(Error::Precondition("step must be positive".into()));
    }
    let mut out = Vec::new();
    let mut a = Rat::zero();
    while a <= *upto {
        out.push((a.clone(), v_of(&a)?));
        a += step;
    }
    Ok(out)
}
