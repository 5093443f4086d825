//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::{taylor_expansion, taylor_index};
use dyson_gap::dyson::{corpus_case, dyson_report, random_dyson_corpus, PointConfig};
use dyson_gap::gap::{
    admissible_params, bound_index_check, cone_cover, cos_sq_20_lower, deduction_chain, sample_admissible_deltas,
    Lemma61Params, MWLattice, Sign,
};
use dyson_gap::index::{cauchy_bound_report, multiplicity, v_of, weighted_index, Weight, CAUCHY_GRID};
use dyson_gap::poly::{analyze_divisor, BiPoly};
use dyson_gap::rat::{int, pow, rat, sqrt_bounds, to_f64, Rat};
use dyson_gap::siegel::{condition_count, random_problems, siegel_solve, vanishing_conditions, verify_report};
use dyson_gap::SiegelProblem;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, name: &str, ok: bool, elapsed: Duration, limit: Option<Duration>, detail: &str) {
    let timing = match limit {
        Some(l) => format!("{:.3}s (limit {}s)", elapsed.as_secs_f64(), l.as_secs()),
        None => format!("{:.3}s", elapsed.as_secs_f64()),
    };
    let verdict = if ok { "PASS" } else { "FAIL" };
    // straight to the stream so the line shows without --nocapture
    let _ = writeln!(std::io::stderr().lock(), "criterion {n}: {verdict} {name} [{timing}] {detail}");
}

fn finish(n: u32, name: &str, failures: Vec<String>, start: Instant, limit: Option<Duration>, detail: &str) {
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let ok = failures.is_empty() && in_time;
    report(n, name, ok, elapsed, limit, detail);
    assert!(failures.is_empty(), "criterion {n} failures: {failures:#?}");
    assert!(in_time, "criterion {n} took {elapsed:?}, limit {limit:?}");
}

#[test]
fn criterion_1_dyson_sharpness() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let d = analyze_divisor(&BiPoly::from_ints(&[((1, 0), 1), ((0, 1), -1)]), (1, 1)).unwrap();
    for m in 2..=10i64 {
        let cfg = PointConfig::new((0..m).map(|k| (int(k), int(k))).collect()).unwrap();
        let r = dyson_report(&d, &cfg, &Weight::unit()).unwrap();
        let half_m = rat(m, 2);
        if r.lhs != half_m || r.rhs != half_m || !r.holds {
            failures.push(format!("m={m}: lhs {} rhs {}", r.lhs, r.rhs));
        }
    }
    finish(1, "dyson sharpness on the diagonal", failures, start, Some(Duration::from_secs(1)), "m=2..10, lhs=rhs=m/2");
}

#[test]
fn criterion_2_dyson_property_suite() {
    let start = Instant::now();
    let (seed, n, max) = (20_240_601u64, 1000usize, (6, 6));
    let summary = random_dyson_corpus(seed, n, max);
    let mut failures = Vec::new();
    for o in &summary.outcomes {
        if !o.holds {
            failures.push(format!("case {}: lhs {} > rhs {}", o.case, o.lhs, o.rhs));
        }
        if o.has_fibers && o.strip_identity != Some(true) {
            failures.push(format!("case {}: shift identity", o.case));
        }
    }
    // independent recomputation of both sides on a slice of the corpus
    for case in 0..150 {
        let c = corpus_case(seed, case, max);
        let w = &c.weight;
        let mut lhs = Rat::zero();
        for p in c.points.points() {
            let (i, _) = taylor_index(&c.divisor.poly, p, w).expect("nonzero");
            lhs += v_of(&i).unwrap();
        }
        let (d1, d2) = c.divisor.designated_bidegree;
        let two_b = int(2) * &w.b1 * &w.b2;
        let m1 = c.points.m1() as i64;
        let rhs = int(2 * d1 as i64 * d2 as i64) / &two_b
            + int(c.divisor.e_of_d as i64 * d2 as i64) / &two_b * int((m1 - 2).max(0));
        let o = &summary.outcomes[case];
        if lhs != o.lhs || rhs != o.rhs || lhs > rhs {
            failures.push(format!("case {case}: oracle lhs {lhs} rhs {rhs} vs {} {}", o.lhs, o.rhs));
        }
        if c.divisor.reconstruct() != c.divisor.poly {
            failures.push(format!("case {case}: factorization does not reconstruct"));
        }
    }
    let detail = format!(
        "{} cases, {} hold, {} with fibers ({} identities hold), {} with positive index",
        summary.n_cases, summary.n_hold, summary.n_with_fibers, summary.n_strip_identity_hold, summary.n_positive_index
    );
    if summary.n_with_fibers == 0 || summary.n_positive_index < n / 4 {
        failures.push(format!("corpus too degenerate: {detail}"));
    }
    finish(2, "dyson property suite", failures, start, Some(Duration::from_secs(60)), &detail);
}

#[test]
fn criterion_3_index_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    let mut positive = 0;
    for k in 0..500 {
        let p = common::random_point(&mut rng);
        let f = common::random_poly_vanishing(&mut rng, &p, (3, 3));
        let w = common::random_weight(&mut rng);
        let lib = weighted_index(&f, &p, &w).unwrap();
        let (val, e) = taylor_index(&f, &p, &w).unwrap();
        if lib.value != val || lib.attaining_exponent != e {
            failures.push(format!("case {k}: {f} at {p:?}: {} {:?} vs {val} {e:?}", lib.value, lib.attaining_exponent));
        }
        if lib.value.is_positive() {
            positive += 1;
        }
        let mult = multiplicity(&f, &p).unwrap();
        let unit = taylor_index(&f, &p, &Weight::unit()).unwrap().0;
        if int(mult as i64) != unit {
            failures.push(format!("case {k}: multiplicity {mult} vs {unit}"));
        }
    }
    let detail = format!("500 cases, {positive} with positive index");
    finish(3, "index oracle equivalence", failures, start, Some(Duration::from_secs(30)), &detail);
}

#[test]
fn criterion_4_v_function() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let expect = [(rat(1, 2), rat(1, 8)), (int(1), rat(1, 2)), (rat(3, 2), rat(7, 8)), (int(2), int(1)), (int(3), int(1)), (rat(41, 7), int(1))];
    for (a, v) in expect {
        if v_of(&a).unwrap() != v {
            failures.push(format!("V({a}) = {}, expected {v}", v_of(&a).unwrap()));
        }
    }
    // 2000 grid points on [0, 5/2)
    let grid: Vec<Rat> = (0..2000).map(|k| rat(k, 800)).collect();
    let vals: Vec<Rat> = grid.iter().map(|a| v_of(a).unwrap()).collect();
    for (a, v) in grid.iter().zip(&vals) {
        if *v > a * a / int(2) {
            failures.push(format!("V({a}) > a^2/2"));
        }
    }
    for k in 1..grid.len() {
        let slope = (&vals[k] - &vals[k - 1]) / (&grid[k] - &grid[k - 1]);
        if slope > int(1) || slope.is_negative() {
            failures.push(format!("slope {slope} at {}", grid[k]));
        }
    }
    finish(4, "V function", failures, start, None, "exact values, V(a) <= a^2/2, slope in [0,1] on 2000 points");
}

#[test]
fn criterion_5_siegel() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let probs = random_problems(5, 200);
    let mut tight = 0;
    for (k, p) in probs.iter().enumerate() {
        let sol = match siegel_solve(p) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("problem {k}: {e}"));
                continue;
            }
        };
        let rep = verify_report(p, &sol);
        if !rep.valid {
            failures.push(format!("problem {k}: {rep:?} bound {}", sol.pigeonhole_bound));
        }
        // Taylor-coefficient recheck of the index, independent of both the
        // constraint rows and the index module
        for q in p.points.points() {
            match taylor_index(&sol.poly, q, &p.weight) {
                Some((i, _)) if i >= p.target_index => {}
                other => failures.push(format!("problem {k}: oracle index {other:?} at {q:?}")),
            }
        }
        if sol.height == sol.pigeonhole_bound {
            tight += 1;
        }
    }
    // lattice-point count against the area b^2 V(tau) at b = 40
    let b = 40u32;
    let mut ratios = Vec::new();
    for tau in [rat(1, 2), rat(3, 4), int(1), rat(5, 4), rat(3, 2), int(2)] {
        let m = condition_count(b, &tau);
        let area = v_of(&tau).unwrap() * int((b * b) as i64);
        let rel = (int(m as i64) - &area).abs() / &area;
        if rel >= rat(1, 10) {
            failures.push(format!("tau={tau}: M={m}, b^2 V = {area}, relative error {}", to_f64(&rel)));
        }
        ratios.push(format!("{tau}:{:.4}", to_f64(&rel)));
    }
    // the count matches the constraint system the solver builds
    let origin = PointConfig::new(vec![(int(0), int(0))]).unwrap();
    let big = SiegelProblem::new((b, b), origin, Weight::new(int(b as i64), int(b as i64)).unwrap(), int(1)).unwrap();
    let m_sys = vanishing_conditions(&big).n_constraints();
    if m_sys != condition_count(b, &int(1)) {
        failures.push(format!("constraint count {m_sys} vs lattice count {}", condition_count(b, &int(1))));
    }
    let detail = format!("200 problems, {tight} at the bound; b=40 relative errors {}", ratios.join(" "));
    finish(5, "siegel small solutions", failures, start, None, &detail);
}

/// Gram matrix `[[n1, p], [p, n2]]` with `P1 = e1`, `P2 = e2`.
fn two_point_lattice(n1: &Rat, n2: &Rat, p: &Rat) -> MWLattice {
    MWLattice::new(
        vec![vec![n1.clone(), p.clone()], vec![p.clone(), n2.clone()]],
        vec![("P1".into(), vec![int(1), int(0)]), ("P2".into(), vec![int(0), int(1)])],
    )
    .unwrap()
}

#[test]
fn criterion_6_explicit_constant_chain() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let c0 = rat(1, 50);
    let ch = deduction_chain(2, &c0).unwrap();
    if ch.lambda != rat(1, 6912) || ch.condition1_rhs != rat(1, 144) || !ch.condition1_holds {
        failures.push(format!("condition 1: λ={} rhs={}", ch.lambda, ch.condition1_rhs));
    }
    if ch.t2 != int(6 * 6912) || !ch.guard_holds {
        failures.push(format!("T2 = {}", ch.t2));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut n_pos, mut n_nonpos) = (0, 0);
    for k in 0..200 {
        // |P1|^2 >= T1, |P2|^2 / |P1|^2 >= T2, with T1 = sqrt(T1^2) rounded up
        let t1 = sqrt_bounds(&ch.t1_sq, 8).1;
        let n1 = &t1 * rat(rng.gen_range(100..=400), 100);
        let n2 = &n1 * &ch.t2 * rat(rng.gen_range(100..=300), 100);
        let a = ch.assemble(&n1, &n2, &int(0)).unwrap();
        // pairing anywhere from -lhs to lhs of the height inequality
        let frac = rat(rng.gen_range(-1000..=1000), 1000);
        let pairing = &a.lhs_lower * &frac;
        let l = two_point_lattice(&n1, &n2, &pairing);
        let got = l.pairing(0, 1);
        let r = ch.assemble(&l.norm_sq(0), &l.norm_sq(1), &got).unwrap();
        if !(r.conditions_hold() && r.condition2_via_c && r.hypothesis_certified) {
            failures.push(format!("case {k}: synthetic data misses thresholds: {r:?}"));
            continue;
        }
        let conclusion = got <= int(0) || &got * &got <= rat(9, 16) * &n1 * &n2;
        if !r.conclusion || !conclusion || r.pairing_sign != Sign::of(&got) {
            failures.push(format!("case {k}: conclusion fails for pairing {got}"));
        }
        if l.vojta_predicate(0, 1).unwrap() != r.conclusion {
            failures.push(format!("case {k}: lattice predicate disagrees"));
        }
        if got.is_positive() {
            n_pos += 1;
        } else {
            n_nonpos += 1;
        }
    }
    let detail = format!("λ=1/6912, 1/6912 <= 1/144, T2=41472, 200 synthetic pairs ({n_pos} positive, {n_nonpos} nonpositive)");
    finish(6, "explicit-constant chain", failures, start, Some(Duration::from_secs(1)), &detail);
}

#[test]
fn criterion_7_index_bound_chain() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut nonzero_exponents = 0;
    for g in [2u32, 3, 4] {
        for k in 0..100 {
            let (delta1, delta2, n1, n2) = admissible_params(g, &mut rng);
            let d = rng.gen_range(10..=200u64);
            let mut params = Lemma61Params { g, delta1, delta2, d, e1: 0, e2: 0, normsq1: n1, normsq2: n2 };
            // exponents meeting the Dyson input V(I) <= bound, by rejection
            let bound = params.dyson_bound();
            for _ in 0..50 {
                let e1 = rng.gen_range(0..=(to_f64(&params.delta1) * d as f64) as u64);
                let e2 = rng.gen_range(0..=(to_f64(&params.delta2) * d as f64) as u64);
                let trial = Lemma61Params { e1, e2, ..params.clone() };
                if v_of(&trial.index()).unwrap() <= bound {
                    params = trial;
                    break;
                }
            }
            if params.e1 + params.e2 > 0 {
                nonzero_exponents += 1;
            }
            match bound_index_check(&params) {
                Ok(r) => {
                    for s in r.steps.iter().filter(|s| !s.holds) {
                        failures.push(format!("g={g} pair {k}: step {} fails: {} vs {}", s.step, s.lhs, s.rhs));
                    }
                }
                Err(e) => failures.push(format!("g={g} pair {k}: {e}")),
            }
        }
    }
    // c^2 < g on a second, independent sweep of the admissible region
    for g in [2u32, 3, 4] {
        for _ in 0..100 {
            let (d1, d2) = sample_admissible_deltas(g, &mut rng);
            let c_sq = dyson_gap::gap::c_coefficient_sq(g, &d1, &d2).unwrap();
            if c_sq >= int(g as i64) {
                failures.push(format!("g={g}: c^2 = {c_sq} at ({d1}, {d2})"));
            }
        }
    }
    let detail = format!("300 admissible pairs, {nonzero_exponents} with nonzero exponents, every step exact");
    finish(7, "index bound chain", failures, start, Some(Duration::from_secs(5)), &detail);
}

/// `(cos, sin)` of `deg` degrees rounded to six decimals.
fn direction(deg: f64) -> Vec<Rat> {
    let t = deg.to_radians();
    vec![rat((t.cos() * 1e6).round() as i64, 1_000_000), rat((t.sin() * 1e6).round() as i64, 1_000_000)]
}

#[test]
fn criterion_8_cone_cover() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let h = cos_sq_20_lower();
    let nine: Vec<Vec<Rat>> = (0..9).map(|k| direction(40.0 * k as f64)).collect();
    let cover = cone_cover(2, &h, &nine).unwrap();
    if cover.centers.len() != 9 {
        failures.push(format!("9 directions gave {} centers", cover.centers.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut sizes = Vec::new();
    for r in [2usize, 3, 4] {
        let dirs: Vec<Vec<Rat>> = (0..100)
            .map(|_| loop {
                let v: Vec<Rat> = (0..r).map(|_| int(rng.gen_range(-50..=50))).collect();
                if v.iter().any(|x| !x.is_zero()) {
                    break v;
                }
            })
            .collect();
        let cover = cone_cover(r, &h, &dirs).unwrap();
        let euclid = |u: &[Rat], v: &[Rat]| u.iter().zip(v).map(|(a, b)| a * b).sum::<Rat>();
        for (i, d) in dirs.iter().enumerate() {
            let c = &dirs[cover.centers[cover.assignment[i]]];
            let ip = euclid(d, c);
            let ok = ip.is_positive() && &ip * &ip > &h * euclid(d, d) * euclid(c, c);
            if !ok || cover.certificates[i] != &ip * &ip / (euclid(d, d) * euclid(c, c)) {
                failures.push(format!("r={r}: direction {i} lacks a valid certificate"));
            }
        }
        if !cover.verify(euclid, &dirs) || !cover.verify_pairs(euclid, &dirs) {
            failures.push(format!("r={r}: cover self-check failed"));
        }
        sizes.push(format!("r={r}:{}", cover.centers.len()));
    }
    let detail = format!("9 centers for 9 directions at 40°; random covers {}", sizes.join(" "));
    finish(8, "cone cover", failures, start, Some(Duration::from_secs(5)), &detail);
}

#[test]
fn criterion_9_cauchy_invariant() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let radii: Vec<Rat> = vec![rat(1, 4), rat(1, 2), rat(3, 4), int(1), rat(3, 2), int(2), int(3), int(4)];
    let mut tight = 0;
    for k in 0..200 {
        let f = common::random_poly(&mut rng, (4, 4), 9);
        let p = common::random_point(&mut rng);
        let r1 = radii[rng.gen_range(0..radii.len())].clone();
        let r2 = radii[rng.gen_range(0..radii.len())].clone();
        let rep = cauchy_bound_report(&f, &p, &r1, &r2, CAUCHY_GRID).unwrap();
        // independent: Taylor coefficients, their weighted sum, each coefficient against it
        let g = taylor_expansion(&f, &p);
        let s: Rat = g.terms().map(|(e, c)| c.abs() * pow(&r1, e.0) * pow(&r2, e.1)).sum();
        if s != rep.s_upper {
            failures.push(format!("case {k}: S_upper {} vs oracle {s}", rep.s_upper));
        }
        let oracle_ok = g.terms().all(|(e, c)| c.abs() * pow(&r1, e.0) * pow(&r2, e.1) <= s);
        if !rep.all_hold || !oracle_ok || rep.checks.len() != g.num_terms() {
            failures.push(format!("case {k}: coefficient inequality fails"));
        }
        // the sampled torus sup can never exceed the certified bound
        if rep.diagnostics.sampled_torus_sup > to_f64(&s) * (1.0 + 1e-9) {
            failures.push(format!("case {k}: sampled sup above S_upper"));
        }
        tight += rep.checks.iter().filter(|c| c.tight).count();
    }
    let detail = format!("200 cases, {tight} tight coefficient checks");
    finish(9, "cauchy coefficient bound", failures, start, None, &detail);
}
