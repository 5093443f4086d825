use std::path::Path;

use dyson_gap::dyson::{dyson2_report, dyson_report, random_dyson_corpus, strip_fibers, PointConfig};
use dyson_gap::gap::{
    admissible_params, bound_index_check, cone_cover_with, cos_sq_20_lower, deduction_chain, finiteness_partition,
    mumford_bracket, mumford_rhs, sample_admissible_deltas, Lemma61Params, MWLattice,
};
use dyson_gap::index::{v_of, v_table, weighted_index, Weight};
use dyson_gap::json::{self as dj, parse_lattice, parse_points, parse_poly, points_json, PolyJson};
use dyson_gap::poly::{analyze_divisor, ComponentSummary, DivisorData};
use dyson_gap::rat::{fmt_rat, int, parse_rat, parse_rat_pair, Rat};
use dyson_gap::siegel::{certify, random_problems, siegel_solve, verify_poly, verify_report, SiegelProblem};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{
    ChainArgs, Command, CorpusArgs, CorpusKind, CoverArgs, DysonArgs, DysonMode, GapCommand, IndexArgs, InputError,
    Lemma61Args, Outcome, PipelineArgs, SiegelArgs, VcurveArgs, VerifyArgs, VojtaArgs,
};

type Res = Result<Outcome, InputError>;

pub fn run(cmd: &Command, verbose: u8) -> Res {
    match cmd {
        Command::Index(a) => index(a),
        Command::Vcurve(a) => vcurve(a),
        Command::Dyson(a) => dyson(a, a.mode),
        Command::Strip(a) => dyson(a, DysonMode::Strip),
        Command::Siegel(a) => siegel(a),
        Command::Verify(a) => verify(a),
        Command::Cover(a) | Command::Gap(GapCommand::Cover(a)) => cover(a),
        Command::Vojta(a) | Command::Gap(GapCommand::Vojta(a)) => vojta(a),
        Command::Chain(a) | Command::Gap(GapCommand::Chain(a)) => chain(a),
        Command::Lemma61(a) | Command::Gap(GapCommand::Lemma61(a)) => lemma61(a),
        Command::Corpus(a) => corpus(a, verbose),
        Command::Pipeline(a) => pipeline(a, verbose),
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))
}

fn rat_arg(s: &str) -> Result<Rat, InputError> {
    Ok(parse_rat(s.trim())?)
}

fn pair_arg(s: &str) -> Result<(Rat, Rat), InputError> {
    Ok(parse_rat_pair(s)?)
}

fn bidegree_arg(s: &str) -> Result<(u32, u32), InputError> {
    let bad = || InputError(format!("expected a bidegree d1,d2, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn weight_arg(s: &str) -> Result<Weight, InputError> {
    let (a, b) = pair_arg(s)?;
    Ok(Weight::new(a, b)?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn point_value(p: &(Rat, Rat)) -> Value {
    json!([fmt_rat(&p.0), fmt_rat(&p.1)])
}

fn divisor_value(d: &DivisorData) -> Value {
    json!({
        "poly": PolyJson::from_poly(&d.poly, Some(d.designated_bidegree)),
        "constant": fmt_rat(&d.constant),
        "components": d.components.iter().map(ComponentSummary::from).collect::<Vec<_>>(),
        "e_of_d": d.e_of_d,
        "dot_f1": d.dot_f1(),
        "dot_f2": d.dot_f2(),
        "self_intersection": d.self_intersection(),
    })
}

fn index(a: &IndexArgs) -> Res {
    let (f, _) = parse_poly(&read(&a.poly)?)?;
    let p = pair_arg(&a.point)?;
    let w = weight_arg(&a.weight)?;
    let iv = weighted_index(&f, &p, &w)?;
    Ok(Outcome {
        command: "index",
        report: json!({
            "point": point_value(&p),
            "weight": to_value(&w),
            "value": fmt_rat(&iv.value),
            "attaining_exponent": [iv.attaining_exponent.0, iv.attaining_exponent.1],
        }),
        holds: true,
    })
}

fn vcurve(a: &VcurveArgs) -> Res {
    let table = v_table(&rat_arg(&a.step)?, &rat_arg(&a.upto)?)?;
    let rows: Vec<Value> = table.iter().map(|(x, v)| json!({"a": fmt_rat(x), "v": fmt_rat(v)})).collect();
    Ok(Outcome {
        command: "vcurve",
        report: json!({ "table": rows }),
        holds: true,
    })
}

fn load_divisor(a: &DysonArgs) -> Result<(DivisorData, PointConfig, Weight), InputError> {
    let (f, bd) = parse_poly(&read(&a.divisor)?)?;
    let d = analyze_divisor(&f, bd)?;
    let cfg = PointConfig::new(parse_points(&read(&a.points)?)?)?;
    Ok((d, cfg, weight_arg(&a.weight)?))
}

fn dyson(a: &DysonArgs, mode: DysonMode) -> Res {
    let (d, cfg, w) = load_divisor(a)?;
    let mut report = json!({ "divisor": divisor_value(&d), "points": points_json(cfg.points()), "weight": to_value(&w) });
    let holds = match mode {
        DysonMode::Thm51 => {
            let r = dyson_report(&d, &cfg, &w)?;
            report["lhs"] = json!(fmt_rat(&r.lhs));
            report["rhs"] = json!(fmt_rat(&r.rhs));
            report["inequality"] = to_value(&r);
            r.holds
        }
        DysonMode::Thm52 => {
            let r = dyson2_report(&d, &cfg, &w)?;
            report["lhs"] = json!(fmt_rat(&r.lhs));
            report["rhs"] = json!(fmt_rat(&r.rhs));
            report["inequality"] = to_value(&r);
            r.holds
        }
        DysonMode::Strip => {
            let s = strip_fibers(&d, &cfg, &w)?;
            report["reduced"] = divisor_value(&s.reduced);
            report["identities"] = to_value(&s.identities);
            let reduced_ok = if s.reduced.poly.is_constant() {
                report["reduced_inequality"] = Value::Null;
                true
            } else {
                let r = dyson2_report(&s.reduced, &cfg, &w)?;
                report["reduced_inequality"] = to_value(&r);
                r.holds
            };
            s.identity_holds() && reduced_ok
        }
    };
    Ok(Outcome {
        command: match mode {
            DysonMode::Strip => "strip",
            _ => "dyson",
        },
        report,
        holds,
    })
}

fn siegel_problem(a: &SiegelArgs) -> Result<SiegelProblem, InputError> {
    let bd = bidegree_arg(&a.bidegree)?;
    let cfg = PointConfig::new(parse_points(&read(&a.points)?)?)?;
    let w = match &a.weight {
        Some(s) => weight_arg(s)?,
        None => Weight::new(int(bd.0 as i64), int(bd.1 as i64))?,
    };
    Ok(SiegelProblem::new(bd, cfg, w, rat_arg(&a.tau)?)?)
}

fn problem_value(p: &SiegelProblem) -> Value {
    json!({
        "bidegree": [p.bidegree.0, p.bidegree.1],
        "points": points_json(p.points.points()),
        "weight": to_value(&p.weight),
        "tau": fmt_rat(&p.target_index),
    })
}

fn siegel(a: &SiegelArgs) -> Res {
    let prob = siegel_problem(a)?;
    let sol = siegel_solve(&prob)?;
    let check = verify_report(&prob, &sol);
    let mut solution = to_value(&sol);
    solution["poly"] = to_value(&PolyJson::from_poly(&sol.poly, Some(prob.bidegree)));
    Ok(Outcome {
        command: "siegel",
        report: json!({ "problem": problem_value(&prob), "solution": solution, "verification": to_value(&check) }),
        holds: check.valid,
    })
}

fn verify(a: &VerifyArgs) -> Res {
    let prob = siegel_problem(&a.problem)?;
    let text = read(&a.poly)?;
    let v: Value = dj::from_str(&text)?;
    // accept a bare polynomial or a siegel report
    let poly_v = v
        .pointer("/report/solution/poly")
        .or_else(|| v.pointer("/solution/poly"))
        .cloned()
        .unwrap_or(v);
    let (f, _) = serde_json::from_value::<PolyJson>(poly_v)?.to_poly()?;
    let cert = certify(&prob)?;
    let check = verify_poly(&prob, &f, &cert.pigeonhole_bound);
    Ok(Outcome {
        command: "verify",
        report: json!({ "problem": problem_value(&prob), "certificate": to_value(&cert), "verification": to_value(&check) }),
        holds: check.valid,
    })
}

fn load_lattice(gram: &Path, points: Option<&Path>) -> Result<MWLattice, InputError> {
    let pts = points.map(read).transpose()?;
    Ok(parse_lattice(&read(gram)?, pts.as_deref())?)
}

fn cover(a: &CoverArgs) -> Res {
    let l = load_lattice(&a.gram, a.points.as_deref())?;
    let h = match &a.half_angle_cos_sq {
        Some(s) => rat_arg(s)?,
        None => cos_sq_20_lower(),
    };
    let cov = cone_cover_with(|u, v| l.inner(u, v), &h, l.coords())?;
    let certified = cov.verify(|u, v| l.inner(u, v), l.coords());
    let labels = l.labels();
    let cones: Vec<Value> = cov
        .centers
        .iter()
        .enumerate()
        .map(|(slot, &c)| {
            let members: Vec<&String> = (0..l.len()).filter(|&i| cov.assignment[i] == slot).map(|i| &labels[i]).collect();
            json!({ "center": labels[c], "members": members })
        })
        .collect();
    let mut report = json!({
        "half_angle_cos_sq": fmt_rat(&h),
        "cones": cones,
        "certificates": labels.iter().zip(&cov.certificates).map(|(k, c)| json!({"label": k, "cos_sq": fmt_rat(c)})).collect::<Vec<_>>(),
        "certified": certified,
    });
    let mut holds = certified;
    match (&a.a1, &a.a2) {
        (Some(a1), Some(a2)) => {
            let part = finiteness_partition(&l, &rat_arg(a1)?, &rat_arg(a2)?)?;
            holds &= !part.has_violations();
            report["partition"] = to_value(&part);
        }
        (None, None) => {}
        _ => return Err(InputError("--a1 and --a2 go together".into())),
    }
    Ok(Outcome {
        command: "cover",
        report,
        holds,
    })
}

fn lookup(l: &MWLattice, key: &str) -> Result<usize, InputError> {
    let key = key.trim();
    if let Ok(i) = l.position(key) {
        return Ok(i);
    }
    match key.parse::<usize>() {
        Ok(i) if i < l.len() => Ok(i),
        _ => Err(InputError(format!("unknown point {key:?}"))),
    }
}

fn vojta(a: &VojtaArgs) -> Res {
    let l = load_lattice(&a.gram, a.points.as_deref())?;
    let (p, q) = a.pair.split_once(',').ok_or_else(|| InputError("--pair expects i,j".into()))?;
    let (i, j) = (lookup(&l, p)?, lookup(&l, q)?);
    let (sign, c2) = l.cos_sq_signed(i, j)?;
    let pred = l.vojta_predicate(i, j)?;
    Ok(Outcome {
        command: "vojta",
        report: json!({
            "pair": [l.labels()[i], l.labels()[j]],
            "pairing": fmt_rat(&l.pairing(i, j)),
            "norm_sq": [fmt_rat(&l.norm_sq(i)), fmt_rat(&l.norm_sq(j))],
            "sign": to_value(&sign),
            "cos_sq": fmt_rat(&c2),
            "predicate": pred,
            "diagnostics": { "angle_degrees": approx_angle(sign, &c2) },
        }),
        holds: pred,
    })
}

fn approx_angle(sign: dyson_gap::gap::Sign, c2: &Rat) -> f64 {
    let c = dyson_gap::rat::to_f64(c2).sqrt();
    let c = if sign == dyson_gap::gap::Sign::Negative { -c } else { c };
    c.clamp(-1.0, 1.0).acos().to_degrees()
}

fn chain(a: &ChainArgs) -> Res {
    let ch = deduction_chain(a.g, &rat_arg(&a.c0)?)?;
    let mut report = json!({ "thresholds": to_value(&ch) });
    let mut holds = ch.condition1_holds && ch.guard_holds;
    match (&a.normsq1, &a.normsq2, &a.pairing) {
        (Some(n1), Some(n2), Some(p)) => {
            let (n1, n2, p) = (rat_arg(n1)?, rat_arg(n2)?, rat_arg(p)?);
            let asm = ch.assemble(&n1, &n2, &p)?;
            holds &= asm.consistent();
            report["assembled"] = to_value(&asm);
            if let Some(ds) = &a.deltas {
                let (d1, d2) = pair_arg(ds)?;
                let main = mumford_rhs(a.g, &d1, &d2, &n1, &n2, &p)?;
                report["height_main_term"] = to_value(&mumford_bracket(main, rat_arg(&a.slack)?));
            }
        }
        (None, None, None) => {}
        _ => return Err(InputError("--normsq1, --normsq2 and --pairing go together".into())),
    }
    Ok(Outcome {
        command: "chain",
        report,
        holds,
    })
}

fn lemma61(a: &Lemma61Args) -> Res {
    let params: Lemma61Params = dj::from_str(&read(&a.params)?)?;
    let r = bound_index_check(&params)?;
    Ok(Outcome {
        command: "lemma61",
        holds: r.all_hold(),
        report: json!({ "params": to_value(&params), "chain": to_value(&r) }),
    })
}

/// Exponents with `V(I) <= bound`, drawn by rejection; zero if none is found.
fn dyson_compatible_exponents(p: &Lemma61Params, rng: &mut impl rand::Rng) -> (u64, u64) {
    let bound = p.dyson_bound();
    let cap = |delta: &Rat| (delta * int(p.d as i64)).to_integer().to_u64().unwrap_or(0);
    for _ in 0..64 {
        let e1 = rng.gen_range(0..=cap(&p.delta1));
        let e2 = rng.gen_range(0..=cap(&p.delta2));
        let trial = Lemma61Params { e1, e2, ..p.clone() };
        if v_of(&trial.index()).map(|v| v <= bound).unwrap_or(false) {
            return (e1, e2);
        }
    }
    (0, 0)
}

fn corpus(a: &CorpusArgs, verbose: u8) -> Res {
    let max = bidegree_arg(&a.max_bidegree)?;
    if verbose > 0 {
        eprintln!("corpus {:?}: seed {} n {}", a.kind, a.seed, a.n);
    }
    let (report, holds) = match a.kind {
        CorpusKind::Dyson => {
            let s = random_dyson_corpus(a.seed, a.n, max);
            let holds = s.all_hold();
            let mut v = to_value(&s);
            if !a.full {
                let failed: Vec<&Value> = v["outcomes"]
                    .as_array()
                    .map(|o| o.iter().filter(|c| c["holds"] != json!(true)).collect())
                    .unwrap_or_default();
                v["failures"] = json!(failed);
                v.as_object_mut().expect("object").remove("outcomes");
            }
            (v, holds)
        }
        CorpusKind::Siegel => {
            let probs = random_problems(a.seed, a.n);
            let rows: Vec<Value> = probs
                .par_iter()
                .enumerate()
                .map(|(k, p)| match siegel_solve(p) {
                    Ok(sol) => {
                        let c = verify_report(p, &sol);
                        json!({"case": k, "valid": c.valid, "height": sol.height.to_string(),
                               "bound": sol.pigeonhole_bound.to_string(), "rank": sol.rank, "n_unknowns": sol.n_unknowns})
                    }
                    Err(e) => json!({"case": k, "valid": false, "error": e.to_string()}),
                })
                .collect();
            let n_valid = rows.iter().filter(|r| r["valid"] == json!(true)).count();
            let mut v = json!({"seed": a.seed, "n_cases": a.n, "n_valid": n_valid});
            if a.full {
                v["outcomes"] = json!(rows);
            }
            (v, n_valid == a.n)
        }
        CorpusKind::Lemma61 => {
            let rows: Vec<(bool, Value)> = (0..a.n)
                .into_par_iter()
                .map(|k| {
                    let mut rng = dyson_gap::dyson::case_rng(a.seed, k);
                    let g = 2 + (k % 3) as u32;
                    let (delta1, delta2, normsq1, normsq2) = admissible_params(g, &mut rng);
                    let mut p = Lemma61Params { g, delta1, delta2, d: 100, e1: 0, e2: 0, normsq1, normsq2 };
                    (p.e1, p.e2) = dyson_compatible_exponents(&p, &mut rng);
                    match bound_index_check(&p) {
                        Ok(r) => (r.all_hold(), json!({"case": k, "params": to_value(&p), "holds": r.all_hold()})),
                        Err(e) => (false, json!({"case": k, "error": e.to_string()})),
                    }
                })
                .collect();
            let n_hold = rows.iter().filter(|r| r.0).count();
            let mut v = json!({"seed": a.seed, "n_cases": a.n, "n_hold": n_hold});
            if a.full {
                v["outcomes"] = json!(rows.into_iter().map(|r| r.1).collect::<Vec<_>>());
            }
            (v, n_hold == a.n)
        }
    };
    Ok(Outcome {
        command: "corpus",
        report,
        holds,
    })
}

fn ceil_div(a: u32, delta: &Rat) -> u64 {
    let q = int(a as i64) / delta;
    let c = q.ceil().to_integer();
    c.to_u64().unwrap_or(u64::MAX)
}

/// Smallest `d >= floor` passing a test that is monotone in `d`.
fn smallest_dyson_d(floor: u64, ok: impl Fn(u64) -> bool) -> u64 {
    if ok(floor) {
        return floor;
    }
    let (mut lo, mut hi) = (floor, floor.saturating_mul(2));
    while !ok(hi) {
        lo = hi;
        hi = hi.saturating_mul(2);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn pipeline(a: &PipelineArgs, verbose: u8) -> Res {
    let bd = bidegree_arg(&a.bidegree)?;
    let cfg = PointConfig::new(parse_points(&read(&a.points)?)?)?;
    let w = Weight::new(int(bd.0 as i64), int(bd.1 as i64))?;
    let prob = SiegelProblem::new(bd, cfg.clone(), w.clone(), rat_arg(&a.tau)?)?;

    if verbose > 0 {
        eprintln!("siegel: bidegree {bd:?}, {} points", cfg.m());
    }
    let sol = siegel_solve(&prob)?;
    let check = verify_report(&prob, &sol);
    let mut solution = to_value(&sol);
    solution["poly"] = to_value(&PolyJson::from_poly(&sol.poly, Some(bd)));

    let indices: Vec<_> = cfg
        .points()
        .iter()
        .map(|q| weighted_index(&sol.poly, q, &w))
        .collect::<Result<_, _>>()?;

    if verbose > 0 {
        eprintln!("dyson: {}", sol.poly);
    }
    let div = analyze_divisor(&sol.poly, bd)?;
    let dy = dyson_report(&div, &cfg, &w)?;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
    let (delta1, delta2) = sample_admissible_deltas(a.g, &mut rng);
    let d_floor = ceil_div(bd.0, &delta1).max(ceil_div(bd.1, &delta2)).max(1);
    let normsq2 = &delta1 / &delta2;
    let params_at = |d: u64| -> Vec<Lemma61Params> {
        indices
            .iter()
            .map(|iv| Lemma61Params {
                g: a.g,
                delta1: delta1.clone(),
                delta2: delta2.clone(),
                d,
                e1: iv.attaining_exponent.0 as u64,
                e2: iv.attaining_exponent.1 as u64,
                normsq1: int(1),
                normsq2: normsq2.clone(),
            })
            .collect()
    };
    let d = smallest_dyson_d(d_floor, |d| {
        params_at(d)
            .iter()
            .all(|p| v_of(&p.index()).map(|v| v <= p.dyson_bound()).unwrap_or(false))
    });
    if verbose > 0 {
        eprintln!("lemma61: deltas {delta1}, {delta2}; d {d} (floor {d_floor})");
    }
    let mut per_point = Vec::new();
    let mut lemma_ok = true;
    for (q, p) in cfg.points().iter().zip(params_at(d)) {
        let (e1, e2) = (p.e1, p.e2);
        let r = bound_index_check(&p)?;
        lemma_ok &= r.all_hold();
        per_point.push(json!({ "point": point_value(q), "exponent": [e1, e2], "chain": to_value(&r) }));
    }

    let holds = check.valid && dy.holds && lemma_ok;
    let report = json!({
        "problem": problem_value(&prob),
        "siegel": { "solution": solution, "verification": to_value(&check) },
        "index": cfg.points().iter().zip(&indices).map(|(q, iv)| json!({
            "point": point_value(q), "value": fmt_rat(&iv.value),
            "attaining_exponent": [iv.attaining_exponent.0, iv.attaining_exponent.1],
        })).collect::<Vec<_>>(),
        "dyson": { "divisor": divisor_value(&div), "inequality": to_value(&dy) },
        "lemma61": {
            "g": a.g, "seed": a.seed,
            "delta1": fmt_rat(&delta1), "delta2": fmt_rat(&delta2), "d_floor": d_floor, "d": d,
            "normsq": ["1/1", fmt_rat(&normsq2)],
            "points": per_point,
        },
        "stages": { "siegel": check.valid, "dyson": dy.holds, "lemma61": lemma_ok },
    });
    Ok(Outcome {
        command: "pipeline",
        report,
        holds,
    })
}
