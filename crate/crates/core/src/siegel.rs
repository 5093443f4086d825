//! Small integer polynomials with prescribed weighted vanishing.
//!
//! The unknowns are the `N = (d1 + 1)(d2 + 1)` coefficients of a polynomial of
//! bidegree at most `(d1, d2)`. Requiring weighted index at least `tau` at a
//! point `Q` asks every Taylor coefficient at `Q` with `i1/b1 + i2/b2 < tau` to
//! vanish, one linear equation each. When the rank `M'` of that system is below
//! `N`, a pigeonhole (Siegel) argument gives a nonzero integer solution of sup
//! height at most `(N A)^(M' / (N - M'))`, where `A` bounds the integer-cleared
//! coefficients. This is the lattice-point analogue of producing a small section
//! by Minkowski's theorem; no arithmetic intersection theory is involved.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dyson::PointConfig;
use crate::error::{Error, Result};
use crate::index::{weighted_index, Weight};
use crate::linalg::{
    clear_denominators, dot, independent_rows, lll_reduce, pairwise_size_reduce, saturated_kernel,
    search_sup_bounded, sup_norm, IntMatrix,
};
use crate::poly::{BiPoly, Exp};
use crate::rat::{floor_rational_power, int, pow, rat, Rat};

#[derive(Clone, Debug)]
pub struct SiegelProblem {
    pub bidegree: (u32, u32),
    pub points: PointConfig,
    pub weight: Weight,
    pub target_index: Rat,
}

impl SiegelProblem {
    pub fn new(
        bidegree: (u32, u32),
        points: PointConfig,
        weight: Weight,
        target_index: Rat,
    ) -> Result<Self> {
        if !target_index.is_positive() || target_index > int(2) {
            return Err(Error::BadTargetIndex(target_index.to_string()));
        }
        Ok(Self {
            bidegree,
            points,
            weight,
            target_index,
        })
    }

    pub fn n_unknowns(&self) -> usize {
        (self.bidegree.0 as usize + 1) * (self.bidegree.1 as usize + 1)
    }

    /// Monomial basis in lex order; column `c` of the constraint matrix.
    pub fn columns(&self) -> Vec<Exp> {
        let (d1, d2) = self.bidegree;
        (0..=d1).flat_map(|j1| (0..=d2).map(move |j2| (j1, j2))).collect()
    }

    /// Exponents `(i1, i2)` in the box with `i1/b1 + i2/b2 < tau`.
    pub fn vanishing_exponents(&self) -> Vec<Exp> {
        self.columns()
            .into_iter()
            .filter(|&e| self.weight.grade(e) < self.target_index)
            .collect()
    }
}

/// One row per (point, exponent): the Taylor coefficient at the point, written
/// as a linear form in the monomial coefficients.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub columns: Vec<Exp>,
    pub labels: Vec<(usize, Exp)>,
    pub rows: Vec<Vec<Rat>>,
}

impl ConstraintSystem {
    pub fn n_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn n_unknowns(&self) -> usize {
        self.columns.len()
    }
}

/// Builds the linear conditions for index at least `tau` at every point.
pub fn vanishing_conditions(prob: &SiegelProblem) -> ConstraintSystem {
    let columns = prob.columns();
    let exps = prob.vanishing_exponents();
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for (k, (p, q)) in prob.points.points().iter().enumerate() {
        for &(i1, i2) in &exps {
            // coefficient of t1^i1 t2^i2 in (t1+p)^j1 (t2+q)^j2
            let row = columns
                .iter()
                .map(|&(j1, j2)| {
                    if j1 < i1 || j2 < i2 {
                        return Rat::zero();
                    }
                    let c1 = Rat::from_integer(binomial(BigInt::from(j1), BigInt::from(i1)));
                    let c2 = Rat::from_integer(binomial(BigInt::from(j2), BigInt::from(i2)));
                    c1 * c2 * pow(p, j1 - i1) * pow(q, j2 - i2)
                })
                .collect();
            rows.push(row);
            labels.push((k, (i1, i2)));
        }
    }
    ConstraintSystem {
        columns,
        labels,
        rows,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SiegelSolution {
    #[serde(skip)]
    pub poly: BiPoly,
    /// Max absolute coefficient.
    #[serde(serialize_with = "crate::rat::ser_display")]
    pub height: BigUint,
    pub n_unknowns: usize,
    pub n_constraints: usize,
    pub rank: usize,
    /// Max absolute coefficient of the integer-cleared constraint rows.
    #[serde(serialize_with = "crate::rat::ser_display")]
    pub max_coefficient: BigUint,
    #[serde(serialize_with = "crate::rat::ser_display")]
    pub pigeonhole_bound: BigUint,
    pub dependent_rows: Vec<usize>,
    pub kernel_dim: usize,
    pub reduction_passes: usize,
    /// The reduced basis missed the bound and lattice enumeration was used.
    pub searched: bool,
}

impl SiegelSolution {
    pub fn within_bound(&self) -> bool {
        self.height <= self.pigeonhole_bound
    }
}

/// Node budget for the enumeration fallback.
pub const SEARCH_BUDGET: usize = 2_000_000;

/// `floor((N A)^(M' / (N - M')))`.
pub fn pigeonhole_bound(n: usize, a: &BigUint, rank: usize) -> BigUint {
    assert!(rank < n, "bound needs rank below the number of unknowns");
    let base = BigUint::from(n) * a;
    floor_rational_power(&base, rank as u32, (n - rank) as u32)
}

/// Smallest-height nonzero integer polynomial meeting the vanishing conditions.
///
/// Rank, cleared coefficient size and pigeonhole bound of a constraint system.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCertificate {
    pub n_unknowns: usize,
    pub rank: usize,
    #[serde(serialize_with = "crate::rat::ser_display")]
    pub max_coefficient: BigUint,
    #[serde(serialize_with = "crate::rat::ser_display")]
    pub pigeonhole_bound: BigUint,
    pub dependent_rows: Vec<usize>,
}

fn certify_system(sys: &ConstraintSystem) -> Result<(BoundCertificate, IntMatrix)> {
    let n = sys.n_unknowns();
    let (kept, dependent_rows) = independent_rows(&sys.rows);
    let rank = kept.len();
    if rank >= n {
        return Err(Error::NoSolutionGuaranteed { rank, unknowns: n });
    }
    let cleared: IntMatrix = sys.rows.iter().map(|r| clear_denominators(r)).collect();
    let max_coefficient = cleared
        .iter()
        .flatten()
        .map(|x| x.magnitude().clone())
        .max()
        .unwrap_or_default();
    let pigeonhole_bound = pigeonhole_bound(n, &max_coefficient, rank);
    let independent = kept.iter().map(|&i| cleared[i].clone()).collect();
    let cert = BoundCertificate {
        n_unknowns: n,
        rank,
        max_coefficient,
        pigeonhole_bound,
        dependent_rows,
    };
    Ok((cert, independent))
}

pub fn certify(prob: &SiegelProblem) -> Result<BoundCertificate> {
    certify_system(&vanishing_conditions(prob)).map(|(c, _)| c)
}

/// Pipeline: exact rank with dependent rows discarded, integer clearing of the
/// independent rows, a basis of the full integer kernel, LLL and pairwise size
/// reduction, then the basis vector of least sup height. If that vector is
/// above the pigeonhole bound, the reduced lattice is enumerated for one below it.
pub fn siegel_solve(prob: &SiegelProblem) -> Result<SiegelSolution> {
    let sys = vanishing_conditions(prob);
    let (cert, independent) = certify_system(&sys)?;
    let n = cert.n_unknowns;
    let bound = cert.pigeonhole_bound.clone();
    let mut basis = saturated_kernel(&independent, n);
    let kernel_dim = basis.len();
    lll_reduce(&mut basis);
    let passes = pairwise_size_reduce(&mut basis);
    let mut best = basis
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .min_by(|a, b| {
            sup_norm(a)
                .cmp(&sup_norm(b))
                .then_with(|| dot(a, a).cmp(&dot(b, b)))
        })
        .cloned()
        .expect("kernel of a rank-deficient system is nonzero");
    let bound_int = BigInt::from(bound.clone());
    let mut searched = false;
    if sup_norm(&best) > bound_int {
        searched = true;
        if let Some(v) = search_sup_bounded(&basis, &bound_int, SEARCH_BUDGET) {
            best = v;
        }
    }
    let best = crate::linalg::make_primitive(best);
    let poly = BiPoly::from_terms(
        sys.columns
            .iter()
            .zip(&best)
            .map(|(e, c)| (*e, Rat::from_integer(c.clone()))),
    );
    Ok(SiegelSolution {
        height: sup_norm(&best).magnitude().clone(),
        poly,
        n_unknowns: n,
        n_constraints: sys.n_constraints(),
        rank: cert.rank,
        max_coefficient: cert.max_coefficient,
        pigeonhole_bound: bound,
        dependent_rows: cert.dependent_rows,
        kernel_dim,
        reduction_passes: passes,
        searched,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub nonzero: bool,
    pub integral: bool,
    pub fits_bidegree: bool,
    /// Index at each point, recomputed from the polynomial.
    pub indices: Vec<String>,
    pub index_ok: bool,
    #[serde(serialize_with = "crate::rat::ser_display")]
    pub height: BigUint,
    pub height_ok: bool,
    pub valid: bool,
}

/// Re-checks a solution through the index module, independently of the
/// constraint matrix. The height is recomputed from the polynomial.
pub fn verify_report(prob: &SiegelProblem, sol: &SiegelSolution) -> VerifyReport {
    verify_poly(prob, &sol.poly, &sol.pigeonhole_bound)
}

/// Checks an arbitrary candidate against a known height bound.
pub fn verify_poly(prob: &SiegelProblem, poly: &BiPoly, bound: &BigUint) -> VerifyReport {
    let nonzero = !poly.is_zero();
    let integral = poly.is_integral();
    let (dx, dy) = poly.bidegree();
    let fits_bidegree = dx <= prob.bidegree.0 && dy <= prob.bidegree.1;
    let mut indices = Vec::new();
    let mut index_ok = nonzero;
    if nonzero {
        for q in prob.points.points() {
            let iv = weighted_index(poly, q, &prob.weight).expect("nonzero");
            index_ok &= iv.value >= prob.target_index;
            indices.push(crate::rat::fmt_rat(&iv.value));
        }
    }
    let height = poly.height().to_integer().magnitude().clone();
    let height_ok = height <= *bound;
    VerifyReport {
        valid: nonzero && integral && fits_bidegree && index_ok && height_ok,
        nonzero,
        integral,
        fits_bidegree,
        indices,
        index_ok,
        height,
        height_ok,
    }
}

pub fn verify_solution(prob: &SiegelProblem, sol: &SiegelSolution) -> bool {
    verify_report(prob, sol).valid
}

/// A seeded random problem with `M' < N` and at least two free directions.
pub fn random_feasible_problem(rng: &mut impl Rng) -> SiegelProblem {
    loop {
        let d1 = rng.gen_range(1..=4u32);
        let d2 = rng.gen_range(1..=4u32);
        let m = rng.gen_range(1..=3usize);
        let mut xs: Vec<i64> = (-3..=3).collect();
        let mut ys: Vec<i64> = (-3..=3).collect();
        xs.shuffle(rng);
        ys.shuffle(rng);
        let pts: Vec<(Rat, Rat)> = xs
            .iter()
            .zip(&ys)
            .take(m)
            .map(|(&a, &b)| (rat(a, rng.gen_range(1..=2)), rat(b, rng.gen_range(1..=2))))
            .collect();
        let Ok(points) = PointConfig::new(pts) else {
            continue;
        };
        let b1 = rat(rng.gen_range(1..=2 * d1 as i64), 2);
        let b2 = rat(rng.gen_range(1..=2 * d2 as i64), 2);
        let tau = rat(rng.gen_range(1..=8), 8);
        let weight = Weight::new(b1, b2).expect("positive");
        let prob = SiegelProblem::new((d1, d2), points, weight, tau).expect("valid tau");
        let sys = vanishing_conditions(&prob);
        let (kept, _) = independent_rows(&sys.rows);
        if kept.len() + 2 <= sys.n_unknowns() {
            return prob;
        }
    }
}

/// Deterministic stream of random feasible problems.
pub fn random_problems(seed: u64, n: usize) -> Vec<SiegelProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_feasible_problem(&mut rng)).collect()
}

/// Lattice points `(i1, i2)` in `[0, b]^2` with `i1/b + i2/b < tau`, i.e. the
/// number of conditions one point imposes at bidegree `(b, b)` and weight `(b, b)`.
pub fn condition_count(b: u32, tau: &Rat) -> usize {
    let bb = int(b as i64);
    (0..=b)
        .flat_map(|i| (0..=b).map(move |j| (i, j)))
        .filter(|&(i, j)| int((i + j) as i64) / &bb < *tau)
        .count()
}

/// `M / (b^2 V(tau))` as a float, for convergence diagnostics.
pub fn count_ratio(b: u32, tau: &Rat) -> f64 {
    let m = condition_count(b, tau) as f64;
    let area = crate::index::v_of(tau).expect("tau >= 0") * int((b * b) as i64);
    m / crate::rat::to_f64(&area)
}
