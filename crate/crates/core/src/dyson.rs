//! Dyson-type inequalities on P1 x P1 (both curves of genus zero).
//!
//! For a divisor `D` of bidegree `(d1, d2)`, distinct points `Q_1..Q_m` and a
//! weight `(b1, b2)`, the general form bounds `sum V(I_k)` by
//! `D.D / (2 b1 b2) + e(D) (D.F1) / (2 b1 b2) * max(m1 - 2, 0)`. The no-fiber
//! form replaces `V(I_k)` by `I_k^2 / 2` and drops the hypotheses on `m1, m2`
//! and on the weight.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::{v_of, weighted_index, IndexValue, Weight};
use crate::poly::{analyze_divisor, BiPoly, DivisorData};
use crate::rat::{int, rat, serde_rat, Rat};

/// Distinct affine points on P1 x P1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    points: Vec<(Rat, Rat)>,
    m1: usize,
    m2: usize,
}

impl PointConfig {
    pub fn new(points: Vec<(Rat, Rat)>) -> Result<Self> {
        let distinct: BTreeSet<&(Rat, Rat)> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(Error::DuplicatePoint);
        }
        let m1 = points.iter().map(|p| &p.0).collect::<BTreeSet<_>>().len();
        let m2 = points.iter().map(|p| &p.1).collect::<BTreeSet<_>>().len();
        Ok(Self { points, m1, m2 })
    }

    pub fn points(&self) -> &[(Rat, Rat)] {
        &self.points
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn m2(&self) -> usize {
        self.m2
    }

    fn require_distinct_projections(&self) -> Result<()> {
        if self.m1 != self.m() || self.m2 != self.m() {
            return Err(Error::DistinctCoordinates {
                m: self.m(),
                m1: self.m1,
                m2: self.m2,
            });
        }
        Ok(())
    }
}

/// Both sides of a Dyson inequality with the intermediate terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DysonReport {
    pub indices: Vec<IndexValue>,
    #[serde(with = "serde_rat")]
    pub lhs: Rat,
    #[serde(with = "serde_rat")]
    pub rhs: Rat,
    /// `D.D / (2 b1 b2)`.
    #[serde(with = "serde_rat")]
    pub term_main: Rat,
    /// `e(D) (D.F1) / (2 b1 b2) * max(m1 - 2, 0)`.
    #[serde(with = "serde_rat")]
    pub term_error: Rat,
    pub e_of_d: u32,
    pub holds: bool,
}

fn rhs_terms(d: &DivisorData, cfg: &PointConfig, w: &Weight) -> (Rat, Rat) {
    let two_b1b2 = int(2) * &w.b1 * &w.b2;
    let main = Rat::from_integer(d.self_intersection().into()) / &two_b1b2;
    // genus zero: 2g - 2 + m1 = m1 - 2
    let active = (cfg.m1() as i64 - 2).max(0);
    let err = int(d.e_of_d as i64) * int(d.dot_f1() as i64) / &two_b1b2 * int(active);
    (main, err)
}

fn indices(d: &DivisorData, cfg: &PointConfig, w: &Weight) -> Result<Vec<IndexValue>> {
    cfg.points()
        .iter()
        .map(|q| weighted_index(&d.poly, q, w))
        .collect()
}

fn assemble(indices: Vec<IndexValue>, lhs: Rat, main: Rat, err: Rat, e: u32) -> DysonReport {
    let rhs = &main + &err;
    DysonReport {
        holds: lhs <= rhs,
        indices,
        lhs,
        rhs,
        term_main: main,
        term_error: err,
        e_of_d: e,
    }
}

/// General inequality `sum V(I_k) <= rhs`.
pub fn dyson_report(d: &DivisorData, cfg: &PointConfig, w: &Weight) -> Result<DysonReport> {
    cfg.require_distinct_projections()?;
    let (d1, d2) = d.designated_bidegree;
    if w.b1 > int(d1 as i64) || w.b2 > int(d2 as i64) {
        return Err(Error::WeightTooLarge(format!(
            "{}, {} vs bidegree ({d1}, {d2})",
            w.b1, w.b2
        )));
    }
    let idx = indices(d, cfg, w)?;
    let mut lhs = Rat::zero();
    for iv in &idx {
        lhs += v_of(&iv.value)?;
    }
    let (main, err) = rhs_terms(d, cfg, w);
    Ok(assemble(idx, lhs, main, err, d.e_of_d))
}

/// No-fiber inequality `sum I_k^2 / 2 <= rhs`.
pub fn dyson2_report(d: &DivisorData, cfg: &PointConfig, w: &Weight) -> Result<DysonReport> {
    if d.has_fibers() {
        return Err(Error::FiberInDivisor);
    }
    let idx = indices(d, cfg, w)?;
    let lhs = idx
        .iter()
        .map(|iv| &iv.value * &iv.value / int(2))
        .fold(Rat::zero(), |a, b| a + b);
    let (main, err) = rhs_terms(d, cfg, w);
    Ok(assemble(idx, lhs, main, err, d.e_of_d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftIdentity {
    /// Fiber multiplicities `(x_k, y_k)` through the point.
    pub shift: (u32, u32),
    #[serde(with = "serde_rat")]
    pub index: Rat,
    #[serde(with = "serde_rat")]
    pub reduced_index: Rat,
    /// `I'_k + x_k / b1 + y_k / b2`.
    #[serde(with = "serde_rat")]
    pub reassembled: Rat,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct StripResult {
    pub reduced: DivisorData,
    pub identities: Vec<ShiftIdentity>,
}

impl StripResult {
    pub fn shifts(&self) -> Vec<(u32, u32)> {
        self.identities.iter().map(|s| s.shift).collect()
    }

    pub fn identity_holds(&self) -> bool {
        self.identities.iter().all(|s| s.holds)
    }
}

/// Removes all fiber components and checks `I_k = I'_k + x_k/b1 + y_k/b2`.
pub fn strip_fibers(d: &DivisorData, cfg: &PointConfig, w: &Weight) -> Result<StripResult> {
    cfg.require_distinct_projections()?;
    let reduced = d.without_fibers();
    let identities = cfg
        .points()
        .iter()
        .map(|q| {
            let xk = d.fiber_multiplicity_x(&q.0);
            let yk = d.fiber_multiplicity_y(&q.1);
            let index = weighted_index(&d.poly, q, w)?.value;
            let reduced_index = weighted_index(&reduced.poly, q, w)?.value;
            let reassembled = &reduced_index + int(xk as i64) / &w.b1 + int(yk as i64) / &w.b2;
            Ok(ShiftIdentity {
                shift: (xk, yk),
                holds: reassembled == index,
                index,
                reduced_index,
                reassembled,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StripResult {
        reduced,
        identities,
    })
}

/// One generated case of the property corpus.
#[derive(Clone, Debug)]
pub struct DysonCase {
    pub divisor: DivisorData,
    pub points: PointConfig,
    pub weight: Weight,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseOutcome {
    pub case: usize,
    pub holds: bool,
    pub has_fibers: bool,
    /// Present when the divisor has fibers: the shift identity verdict.
    pub strip_identity: Option<bool>,
    /// Present when the divisor has fibers: the no-fiber inequality on `D'`.
    pub reduced_holds: Option<bool>,
    #[serde(with = "serde_rat")]
    pub lhs: Rat,
    #[serde(with = "serde_rat")]
    pub rhs: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusSummary {
    pub seed: u64,
    pub n_cases: usize,
    pub max_bidegree: (u32, u32),
    pub n_hold: usize,
    pub n_with_fibers: usize,
    pub n_strip_identity_hold: usize,
    pub n_positive_index: usize,
    pub outcomes: Vec<CaseOutcome>,
}

impl CorpusSummary {
    pub fn all_hold(&self) -> bool {
        self.n_hold == self.n_cases && self.n_strip_identity_hold == self.n_with_fibers
    }
}

/// Independent generator for case `case` of the corpus with this seed.
pub fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64 + 1);
    rng
}

fn small_rat(rng: &mut impl Rng) -> Rat {
    rat(rng.gen_range(-4..=4), rng.gen_range(1..=2))
}

/// Sorted distinct coordinates drawn from a small grid.
fn distinct_coords(rng: &mut impl Rng, m: usize) -> Vec<Rat> {
    let mut pool: Vec<i64> = (-6..=6).collect();
    pool.shuffle(rng);
    let mut picked: Vec<i64> = pool.into_iter().take(m).collect();
    picked.sort();
    picked.into_iter().map(|n| rat(n, 2)).collect()
}

fn random_factor(
    rng: &mut impl Rng,
    pts: &[(Rat, Rat)],
    room: (u32, u32),
) -> Option<BiPoly> {
    let q = &pts[rng.gen_range(0..pts.len())];
    let kind = rng.gen_range(0..6);
    let f = match kind {
        // fiber through a point
        0 if room.0 >= 1 => BiPoly::x() - BiPoly::constant(q.0.clone()),
        1 if room.1 >= 1 => BiPoly::y() - BiPoly::constant(q.1.clone()),
        // line through a point
        2 if room.0 >= 1 && room.1 >= 1 => {
            let a = int(rng.gen_range(1..=3));
            let b = int(rng.gen_range(-3..=-1));
            BiPoly::x().scale(&a) + BiPoly::y().scale(&b)
                - BiPoly::constant(&a * &q.0 + &b * &q.1)
        }
        // random curve through the point, or through the first two points
        3 | 4 if room.0 >= 1 || room.1 >= 1 => {
            let dx = rng.gen_range(0..=room.0.min(2));
            let dy = rng.gen_range(0..=room.1.min(2));
            let mut g = BiPoly::zero();
            for i in 0..=dx {
                for j in 0..=dy {
                    if rng.gen_bool(0.6) {
                        g.add_term((i, j), int(rng.gen_range(-3..=3)));
                    }
                }
            }
            if g.is_constant() {
                return None;
            }
            let g = &g - &BiPoly::constant(g.eval(&q.0, &q.1));
            if kind == 4 && pts.len() >= 2 && g.bidegree() != (0, 0) {
                // force vanishing at a second point by subtracting a multiple of a fiber
                let r = &pts[(pts.iter().position(|p| p == q).unwrap() + 1) % pts.len()];
                let v = g.eval(&r.0, &r.1);
                if !v.is_zero() && room.0 >= 1 && g.deg_x() >= 1 {
                    let fib = BiPoly::x() - BiPoly::constant(q.0.clone());
                    let denom = &r.0 - &q.0;
                    return Some(&g - &fib.scale(&(v / denom)));
                }
            }
            g
        }
        5 if room.0 >= 1 => BiPoly::x() - BiPoly::constant(small_rat(rng)),
        _ => return None,
    };
    (!f.is_constant()).then_some(f)
}

/// Draws one admissible case with bidegree at most `max`.
pub fn random_case(rng: &mut impl Rng, max: (u32, u32)) -> DysonCase {
    loop {
        let m = rng.gen_range(1..=4usize);
        let xs = distinct_coords(rng, m);
        let mut ys = distinct_coords(rng, m);
        if rng.gen_bool(0.3) {
            // diagonal configurations share their coordinate sets
            ys = xs.clone();
        }
        let pts: Vec<(Rat, Rat)> = xs.into_iter().zip(ys).collect();
        let mut f = BiPoly::constant(int(rng.gen_range(1..=5)));
        for _ in 0..rng.gen_range(1..=4) {
            let room = (max.0 - f.deg_x(), max.1 - f.deg_y());
            let Some(g) = random_factor(rng, &pts, room) else {
                continue;
            };
            let k = rng.gen_range(1..=3);
            let (gx, gy) = g.bidegree();
            let fits = |k: u32| gx * k <= room.0 && gy * k <= room.1;
            let k = (1..=k).rev().find(|&k| fits(k));
            if let Some(k) = k {
                f = &f * &g.pow(k);
            }
        }
        if f.is_constant() {
            continue;
        }
        let (ax, ay) = f.bidegree();
        let d1 = rng.gen_range(ax.max(1)..=max.0.max(ax.max(1)));
        let d2 = rng.gen_range(ay.max(1)..=max.1.max(ay.max(1)));
        let divisor = analyze_divisor(&f, (d1, d2)).expect("nonzero product");
        // weights in (0, d] on a grid of step 1/4
        let b1 = rat(rng.gen_range(1..=4 * d1 as i64), 4);
        let b2 = rat(rng.gen_range(1..=4 * d2 as i64), 4);
        let points = PointConfig::new(pts).expect("distinct coordinates");
        return DysonCase {
            divisor,
            points,
            weight: Weight::new(b1, b2).expect("positive"),
        };
    }
}

pub fn corpus_case(seed: u64, case: usize, max_bidegree: (u32, u32)) -> DysonCase {
    random_case(&mut case_rng(seed, case), max_bidegree)
}

/// Runs the general inequality on `n_cases` seeded random admissible cases.
/// Cases are generated independently from `(seed, case)`, so the summary does
/// not depend on the thread count.
pub fn random_dyson_corpus(seed: u64, n_cases: usize, max_bidegree: (u32, u32)) -> CorpusSummary {
    let outcomes: Vec<CaseOutcome> = (0..n_cases)
        .into_par_iter()
        .map(|case| run_case(case, &corpus_case(seed, case, max_bidegree)))
        .collect();
    let count = |f: fn(&CaseOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count();
    CorpusSummary {
        seed,
        n_cases,
        max_bidegree,
        n_hold: count(|o| o.holds),
        n_with_fibers: count(|o| o.has_fibers),
        n_strip_identity_hold: count(|o| o.strip_identity == Some(true)),
        n_positive_index: count(|o| !o.lhs.is_zero()),
        outcomes,
    }
}

/// Evaluates one case: the general inequality plus, when fibers are present,
/// the reduction through the no-fiber form.
pub fn run_case(case: usize, c: &DysonCase) -> CaseOutcome {
    let rep = dyson_report(&c.divisor, &c.points, &c.weight).expect("admissible case");
    let has_fibers = c.divisor.has_fibers();
    let (strip_identity, reduced_holds) = if has_fibers {
        let s = strip_fibers(&c.divisor, &c.points, &c.weight).expect("admissible case");
        let reduced = if s.reduced.poly.is_constant() {
            // D' = 0: both sides of the no-fiber form vanish
            Some(true)
        } else {
            dyson2_report(&s.reduced, &c.points, &c.weight)
                .ok()
                .map(|r| r.holds)
        };
        (Some(s.identity_holds()), reduced)
    } else {
        (None, None)
    };
    CaseOutcome {
        case,
        holds: rep.holds,
        has_fibers,
        strip_identity,
        reduced_holds,
        lhs: rep.lhs,
        rhs: rep.rhs,
    }
}
