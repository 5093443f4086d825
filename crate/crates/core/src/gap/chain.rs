//! Explicit-constant bookkeeping: the Mumford main term, the optimal choice of
//! `(δ1, δ2)`, the coefficient `c(δ1, δ2)`, and the three conditions that turn
//! the height inequality into `<P1,P2> <= (3/4)|P1||P2|`.
//!
//! All comparisons are done on squares; `|P|` only ever appears as `|P|^2`.

use num_traits::{One, Signed};
use serde::Serialize;

use super::lattice::Sign;
use crate::error::{Error, Result};
use crate::rat::{int, rat, serde_rat, sqrt_bounds, Rat};

/// `λ = 1 / (3 * 48^2) = 1/6912`.
pub fn lambda() -> Rat {
    rat(1, 3 * 48 * 48)
}

fn require_genus(g: u32) -> Result<()> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    Ok(())
}

/// Squares of the minimizing `δ1 = sqrt(g+λ)|P2|/|P1|`, `δ2 = sqrt(g+λ)|P1|/|P2|`.
pub fn optimal_deltas(g: u32, lambda: &Rat, normsq1: &Rat, normsq2: &Rat) -> Result<(Rat, Rat)> {
    if !normsq1.is_positive() || !normsq2.is_positive() {
        return Err(Error::ZeroVector);
    }
    let gl = int(g as i64) + lambda;
    let d1 = &gl * normsq2 / normsq1;
    let d2 = &gl * normsq1 / normsq2;
    debug_assert_eq!(&d1 * &d2, &gl * &gl);
    Ok((d1, d2))
}

/// `c^2 = 2(δ1 δ2 - g) + g(2g - 1) δ2 / δ1`, defined for `δ1 δ2 > g`.
pub fn c_coefficient_sq(g: u32, delta1: &Rat, delta2: &Rat) -> Result<Rat> {
    let gg = int(g as i64);
    let prod = delta1 * delta2;
    if prod <= gg {
        return Err(Error::Precondition(format!("δ1δ2 = {prod} must exceed g = {g}")));
    }
    if !delta1.is_positive() || !delta2.is_positive() {
        return Err(Error::Precondition("δ1, δ2 must be positive".into()));
    }
    Ok(int(2) * (&prod - &gg) + &gg * int(2 * g as i64 - 1) * delta2 / delta1)
}

/// Main term of the height of `(P1, P2)` for the Vojta bundle:
/// `δ1 |P1|^2 / g + δ2 |P2|^2 / g - 2 <P1,P2>`.
pub fn mumford_rhs(
    g: u32,
    delta1: &Rat,
    delta2: &Rat,
    normsq1: &Rat,
    normsq2: &Rat,
    pairing: &Rat,
) -> Result<Rat> {
    require_genus(g)?;
    let gg = int(g as i64);
    Ok(delta1 * normsq1 / &gg + delta2 * normsq2 / &gg - int(2) * pairing)
}

/// The main term together with a caller-supplied bound on the error term,
/// which has no effective constant.
#[derive(Clone, Debug, Serialize)]
pub struct MumfordBracket {
    #[serde(with = "serde_rat")]
    pub main: Rat,
    #[serde(with = "serde_rat")]
    pub slack: Rat,
    #[serde(with = "serde_rat")]
    pub lower: Rat,
    #[serde(with = "serde_rat")]
    pub upper: Rat,
}

pub fn mumford_bracket(main: Rat, slack: Rat) -> MumfordBracket {
    MumfordBracket {
        lower: &main - &slack,
        upper: &main + &slack,
        main,
        slack,
    }
}

/// Square of the minimum of `δ1 n1 + δ2 n2` over `δ1 δ2 = p`, namely `4 p n1 n2`
/// (by AM-GM). Lets callers compare a candidate value `v >= 0` exactly via
/// `v^2 >= 4 p n1 n2`.
pub fn amgm_min_sq(product: &Rat, normsq1: &Rat, normsq2: &Rat) -> Rat {
    int(4) * product * normsq1 * normsq2
}

#[derive(Clone, Debug, Serialize)]
pub struct DeductionChain {
    pub g: u32,
    #[serde(with = "serde_rat")]
    pub lambda: Rat,
    #[serde(with = "serde_rat")]
    pub c0: Rat,
    /// `(17/24)^2 g^2 - g`; condition 1 is `λ <= condition1_rhs`.
    #[serde(with = "serde_rat")]
    pub condition1_rhs: Rat,
    pub condition1_holds: bool,
    /// `1/48^2 - 2λ`.
    #[serde(with = "serde_rat")]
    pub condition2_slack: Rat,
    /// Threshold on `|P2|^2 / |P1|^2`: `g(2g-1) / (1/48^2 - 2λ)`.
    #[serde(with = "serde_rat")]
    pub t2: Rat,
    /// Square of the threshold on `|P1|^2`: `576 (g+λ) c0^2 / λ^2`.
    #[serde(with = "serde_rat")]
    pub t1_sq: Rat,
    /// `3/4 - 1/sqrt(g) >= 3/4 - sqrt(2)/2 > 1/24`, checked on squares.
    pub guard_holds: bool,
}

/// Thresholds for the constant `λ = 1/6912` at genus `g`.
pub fn deduction_chain(g: u32, c0: &Rat) -> Result<DeductionChain> {
    require_genus(g)?;
    if c0.is_negative() {
        return Err(Error::Precondition("c0 must be nonnegative".into()));
    }
    let lam = lambda();
    let gg = int(g as i64);
    let condition1_rhs = rat(17 * 17, 24 * 24) * &gg * &gg - &gg;
    let condition2_slack = rat(1, 48 * 48) - int(2) * &lam;
    let t2 = &gg * int(2 * g as i64 - 1) / &condition2_slack;
    let t1_sq = int(576) * (&gg + &lam) * c0 * c0 / (&lam * &lam);
    // 1/sqrt(g) <= sqrt(2)/2 iff 1/g <= 1/2; sqrt(2)/2 < 3/4 - 1/24 = 17/24 iff 1/2 < (17/24)^2
    let guard_holds = Rat::one() / &gg <= rat(1, 2) && rat(1, 2) < rat(17 * 17, 24 * 24);
    Ok(DeductionChain {
        g,
        condition1_holds: lam <= condition1_rhs,
        lambda: lam,
        c0: c0.clone(),
        condition1_rhs,
        condition2_slack,
        t2,
        t1_sq,
        guard_holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AssembledInequality {
    pub condition1: bool,
    /// `|P2|^2 / |P1|^2 >= T2`.
    pub condition2: bool,
    /// Same condition in the form `c(δ1,δ2)^2 <= 1/48^2` at the optimal deltas.
    pub condition2_via_c: bool,
    /// `|P1|^4 >= T1^2`.
    pub condition3: bool,
    #[serde(with = "serde_rat")]
    pub c_sq: Rat,
    /// Certified lower bound for the left side of the height inequality at the
    /// optimal deltas, `(sqrt(g+λ)/g + c)|P1||P2| + sqrt(g+λ) c0 |P2| / (2λ|P1|)`.
    #[serde(with = "serde_rat")]
    pub lhs_lower: Rat,
    #[serde(with = "serde_rat")]
    pub lhs_upper: Rat,
    /// `<P1,P2> <= lhs_lower`: the height inequality is certified for this data.
    pub hypothesis_certified: bool,
    pub pairing_sign: Sign,
    /// `<P1,P2> <= 0` or `<P1,P2>^2 <= (9/16)|P1|^2|P2|^2`.
    pub conclusion: bool,
}

impl AssembledInequality {
    pub fn conditions_hold(&self) -> bool {
        self.condition1 && self.condition2 && self.condition3
    }

    /// The deduction is sound on this data: conditions and hypothesis imply the conclusion.
    pub fn consistent(&self) -> bool {
        !(self.conditions_hold() && self.hypothesis_certified) || self.conclusion
    }
}

impl DeductionChain {
    /// Bracket `[lo, hi]` for the left side of the height inequality at the
    /// optimal deltas, accurate to about `2^-bits` relative to its size.
    pub fn lhs_bounds(&self, normsq1: &Rat, normsq2: &Rat, bits: u32) -> (Rat, Rat) {
        let gg = int(self.g as i64);
        let gl = &gg + &self.lambda;
        let c_sq = &self.lambda * int(2) + &gg * int(2 * self.g as i64 - 1) * normsq1 / normsq2;
        let (sgl_lo, sgl_hi) = sqrt_bounds(&gl, bits);
        let (c_lo, c_hi) = sqrt_bounds(&c_sq, bits);
        let (n12_lo, n12_hi) = sqrt_bounds(&(normsq1 * normsq2), bits);
        let (r_lo, r_hi) = sqrt_bounds(&(normsq2 / normsq1), bits);
        let two_lam = int(2) * &self.lambda;
        let lo = (&sgl_lo / &gg + &c_lo) * &n12_lo + &sgl_lo * &self.c0 * &r_lo / &two_lam;
        let hi = (&sgl_hi / &gg + &c_hi) * &n12_hi + &sgl_hi * &self.c0 * &r_hi / &two_lam;
        (lo, hi)
    }

    /// Evaluates the three conditions and the final implication for one pair.
    pub fn assemble(&self, normsq1: &Rat, normsq2: &Rat, pairing: &Rat) -> Result<AssembledInequality> {
        if !normsq1.is_positive() || !normsq2.is_positive() {
            return Err(Error::ZeroVector);
        }
        let gg = int(self.g as i64);
        let ratio = normsq2 / normsq1;
        let (d1_sq, d2_sq) = optimal_deltas(self.g, &self.lambda, normsq1, normsq2)?;
        // δ2/δ1 = |P1|^2/|P2|^2 is rational even though δ1, δ2 are not
        let c_sq = int(2) * &self.lambda + &gg * int(2 * self.g as i64 - 1) / &ratio;
        debug_assert_eq!(&d2_sq / &d1_sq, (Rat::one() / &ratio) * (Rat::one() / &ratio));
        let (lhs_lower, lhs_upper) = self.lhs_bounds(normsq1, normsq2, 64);
        let sign = Sign::of(pairing);
        let conclusion = sign != Sign::Positive || pairing * pairing <= rat(9, 16) * normsq1 * normsq2;
        Ok(AssembledInequality {
            condition1: self.condition1_holds,
            condition2: ratio >= self.t2,
            condition2_via_c: c_sq <= rat(1, 48 * 48),
            condition3: normsq1 * normsq1 >= self.t1_sq,
            c_sq,
            hypothesis_certified: *pairing <= lhs_lower,
            lhs_lower,
            lhs_upper,
            pairing_sign: sign,
            conclusion,
        })
    }
}

/// Rational `(δ1, δ2)` with `δ1 > 2g δ2` and `g < δ1 δ2 < g + 1/4`, drawn
/// on a grid of step 1/1000 inside the admissible region.
pub fn sample_admissible_deltas(g: u32, rng: &mut impl rand::Rng) -> (Rat, Rat) {
    let gg = int(g as i64);
    let upper = &gg + rat(1, 4);
    loop {
        // δ2^2 < (g + 1/4) / (2g) keeps the interval for δ1 nonempty
        let d2 = rat(rng.gen_range(50..=800), 1000);
        if int(2 * g as i64) * &d2 * &d2 >= upper {
            continue;
        }
        let lo = (&gg / &d2).max(int(2 * g as i64) * &d2);
        let hi = &upper / &d2;
        if lo >= hi {
            continue;
        }
        let t = rat(rng.gen_range(1..1000), 1000);
        let d1 = &lo + (&hi - &lo) * t;
        return (d1, d2);
    }
}
