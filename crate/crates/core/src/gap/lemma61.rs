//! The index bound: for a section of the Vojta bundle with small index at
//! `(P1, P2)`, the attaining exponent `(e1, e2)` satisfies
//! `e1|P1|^2 + e2|P2|^2 < (1/g) δ1 δ2 c(δ1,δ2) d |P1||P2|`.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::chain::c_coefficient_sq;
use crate::error::{Error, Result};
use crate::index::v_of;
use crate::rat::{int, rat, serde_rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma61Params {
    pub g: u32,
    #[serde(with = "serde_rat")]
    pub delta1: Rat,
    #[serde(with = "serde_rat")]
    pub delta2: Rat,
    pub d: u64,
    pub e1: u64,
    pub e2: u64,
    #[serde(with = "serde_rat")]
    pub normsq1: Rat,
    #[serde(with = "serde_rat")]
    pub normsq2: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepResult {
    pub step: &'static str,
    pub holds: bool,
    #[serde(with = "serde_rat")]
    pub lhs: Rat,
    #[serde(with = "serde_rat")]
    pub rhs: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma61Report {
    /// `I = e1/(δ1 d) + e2/(δ2 d)`.
    #[serde(with = "serde_rat")]
    pub index: Rat,
    /// `(δ1δ2 - g)/(δ1δ2) + (2g-1)δ2/(2δ1)`.
    #[serde(with = "serde_rat")]
    pub dyson_bound: Rat,
    #[serde(with = "serde_rat")]
    pub c_sq: Rat,
    pub steps: Vec<StepResult>,
}

impl Lemma61Report {
    pub fn all_hold(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }

    pub fn step(&self, name: &str) -> Option<&StepResult> {
        self.steps.iter().find(|s| s.step == name)
    }
}

fn step(name: &'static str, lhs: Rat, rhs: Rat, strict: bool) -> StepResult {
    let holds = if strict { lhs < rhs } else { lhs <= rhs };
    StepResult {
        step: name,
        holds,
        lhs,
        rhs,
    }
}

impl Lemma61Params {
    pub fn validate(&self) -> Result<()> {
        let p = self;
        if p.g < 2 {
            return Err(Error::GenusTooSmall(p.g));
        }
        let g = int(p.g as i64);
        let fail = |what: &str| Err(Error::Precondition(what.to_string()));
        if !p.delta1.is_positive() || !p.delta2.is_positive() {
            return fail("δ1 > 0 and δ2 > 0");
        }
        if !p.normsq1.is_positive() || !p.normsq2.is_positive() {
            return fail("|P1|^2 > 0 and |P2|^2 > 0");
        }
        if p.d == 0 {
            return fail("d > 0");
        }
        if &p.delta1 * &p.delta1 * &p.normsq1 < &g * &p.normsq2 {
            return fail("δ1 >= δ1° (δ1^2 |P1|^2 >= g |P2|^2)");
        }
        if &p.delta2 * &p.delta2 * &p.normsq2 < &g * &p.normsq1 {
            return fail("δ2 >= δ2° (δ2^2 |P2|^2 >= g |P1|^2)");
        }
        if p.delta1 <= int(2 * p.g as i64) * &p.delta2 {
            return fail("δ1 > 2g δ2");
        }
        let prod = &p.delta1 * &p.delta2;
        if prod <= g {
            return fail("δ1 δ2 > g");
        }
        if prod >= &g + rat(1, 4) {
            return fail("δ1 δ2 < g + 1/4");
        }
        Ok(())
    }

    /// `I = e1/(δ1 d) + e2/(δ2 d)`.
    pub fn index(&self) -> Rat {
        let d = int(self.d as i64);
        int(self.e1 as i64) / (&self.delta1 * &d) + int(self.e2 as i64) / (&self.delta2 * &d)
    }

    /// Right side of the Dyson bound specialized to the Vojta bundle.
    pub fn dyson_bound(&self) -> Rat {
        let g = int(self.g as i64);
        let prod = &self.delta1 * &self.delta2;
        (&prod - &g) / &prod + int(2 * self.g as i64 - 1) * &self.delta2 / (int(2) * &self.delta1)
    }
}

/// Checks every step of the index-bound chain exactly, on squares.
///
/// Step (i) is the Dyson input and is checked rather than assumed; the later
/// steps are what the chain derives from it.
pub fn bound_index_check(p: &Lemma61Params) -> Result<Lemma61Report> {
    p.validate()?;
    let g = int(p.g as i64);
    let d = int(p.d as i64);
    let (e1, e2) = (int(p.e1 as i64), int(p.e2 as i64));
    let i = p.index();
    let b = p.dyson_bound();
    let c_sq = c_coefficient_sq(p.g, &p.delta1, &p.delta2)?;
    let prod = &p.delta1 * &p.delta2;

    let mut steps = vec![
        step("i_dyson", v_of(&i)?, b.clone(), false),
        step("ii_bound_below_half", b.clone(), rat(1, 2), true),
        step("iii_index_at_most_one", i.clone(), Rat::one(), false),
        step("iii_index_sq", &i * &i, int(2) * &b, false),
        step("iv_index_sq_vs_c", &i * &i, &c_sq / &g, true),
    ];
    let s = &e1 + &e2;
    steps.push(step(
        "iv_exponent_sum",
        &s * &s,
        &c_sq * &p.delta1 * &p.delta1 * &d * &d / &g,
        true,
    ));
    let w = &e1 * &p.normsq1 + &e2 * &p.normsq2;
    steps.push(step(
        "iv_weighted_sum",
        &w * &w,
        &prod * &prod * &c_sq * &d * &d * &p.normsq1 * &p.normsq2 / (&g * &g),
        true,
    ));
    steps.push(step("c_below_sqrt_g", c_sq.clone(), g, true));
    Ok(Lemma61Report {
        index: i,
        dyson_bound: b,
        c_sq,
        steps,
    })
}

/// Admissible `(δ1, δ2)` with norms `|P1|^2 = 1`, `|P2|^2 = δ1/δ2`, which
/// makes both `δi >= δi°` hold.
pub fn admissible_params(g: u32, rng: &mut impl rand::Rng) -> (Rat, Rat, Rat, Rat) {
    let (d1, d2) = super::chain::sample_admissible_deltas(g, rng);
    let n2 = &d1 / &d2;
    (d1, d2, Rat::one(), n2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(e1: u64, e2: u64) -> Lemma61Params {
        let (delta1, delta2) = (int(4), rat(51, 100));
        Lemma61Params {
            g: 2,
            normsq2: &delta1 / &delta2,
            delta1,
            delta2,
            d: 100,
            e1,
            e2,
            normsq1: int(1),
        }
    }

    #[test]
    fn zero_exponent_passes() {
        let r = bound_index_check(&params(0, 0)).unwrap();
        assert!(r.all_hold(), "{r:?}");
    }

    #[test]
    fn small_exponent_passes() {
        let r = bound_index_check(&params(3, 1)).unwrap();
        assert!(r.all_hold(), "{r:?}");
    }

    #[test]
    fn large_exponent_fails_dyson_step() {
        let r = bound_index_check(&params(300, 40)).unwrap();
        assert!(!r.step("i_dyson").unwrap().holds);
    }

    #[test]
    fn precondition_errors() {
        let mut p = params(0, 0);
        p.delta2 = rat(5, 8);
        let err = bound_index_check(&p).unwrap_err();
        assert!(err.to_string().contains("g + 1/4"), "{err}");
        let mut p = params(0, 0);
        p.normsq2 = int(1000);
        assert!(bound_index_check(&p).unwrap_err().to_string().contains("δ1°"));
    }
}
