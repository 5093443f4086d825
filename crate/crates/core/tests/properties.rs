mod common;

use dyson_gap::dyson::{random_dyson_corpus, strip_fibers, PointConfig};
use dyson_gap::gap::{
    amgm_min_sq, bound_index_check, cone_cover, deduction_chain, lambda, mumford_rhs, optimal_deltas,
    sample_admissible_deltas, Lemma61Params, MWLattice,
};
use dyson_gap::index::{v_of, weighted_index, Weight};
use dyson_gap::json::{parse_lattice, parse_poly, LatticeJson, PolyJson};
use dyson_gap::poly::{analyze_divisor, sqfree, squarefree_decompose, BiPoly};
use dyson_gap::rat::{int, rat, Rat};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn arb_pos_rat() -> impl Strategy<Value = Rat> {
    (1i64..=12, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn arb_poly(max: u32) -> impl Strategy<Value = BiPoly> {
    prop::collection::vec(((0..=max, 0..=max), -5i64..=5, 1i64..=3), 1..6).prop_map(|ts| {
        let mut f = BiPoly::zero();
        for (e, n, d) in ts {
            f.add_term(e, rat(n, d));
        }
        f
    })
}

fn arb_nonzero_poly(max: u32) -> impl Strategy<Value = BiPoly> {
    arb_poly(max).prop_filter("nonzero", |f| !f.is_zero())
}

fn arb_point() -> impl Strategy<Value = (Rat, Rat)> {
    (arb_rat(), arb_rat())
}

fn arb_weight() -> impl Strategy<Value = Weight> {
    (arb_pos_rat(), arb_pos_rat()).prop_map(|(a, b)| Weight::new(a, b).unwrap())
}

/// A product of small factors, some repeated, possibly with fibers.
fn arb_product() -> impl Strategy<Value = BiPoly> {
    let factor = prop_oneof![
        arb_rat().prop_map(|a| BiPoly::x() - BiPoly::constant(a)),
        arb_rat().prop_map(|a| BiPoly::y() - BiPoly::constant(a)),
        (1i64..=3, arb_rat()).prop_map(|(k, a)| BiPoly::x() - BiPoly::y().scale(&int(k)) - BiPoly::constant(a)),
        arb_rat().prop_map(|a| BiPoly::x() * BiPoly::y() - BiPoly::constant(a)),
        arb_rat().prop_map(|a| BiPoly::x().pow(2) - BiPoly::y() + BiPoly::constant(a)),
    ];
    (prop::collection::vec((factor, 1u32..=3), 1..4), 1i64..=6).prop_map(|(fs, c)| {
        fs.into_iter().fold(BiPoly::constant(int(c)), |acc, (g, k)| &acc * &g.pow(k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(f in arb_poly(3), g in arb_poly(3), h in arb_poly(2), p in arb_point()) {
        prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f - &g) + &g, f.clone());
        prop_assert_eq!((&f * &g).eval(&p.0, &p.1), f.eval(&p.0, &p.1) * g.eval(&p.0, &p.1));
    }

    #[test]
    fn shift_is_group_action_and_ring_map(f in arb_poly(3), g in arb_poly(2), p in arb_point(), q in arb_point()) {
        prop_assert_eq!(f.shift(&int(0), &int(0)), f.clone());
        prop_assert_eq!(f.shift(&p.0, &p.1).shift(&q.0, &q.1), f.shift(&(&p.0 + &q.0), &(&p.1 + &q.1)));
        prop_assert_eq!((&f * &g).shift(&p.0, &p.1), &f.shift(&p.0, &p.1) * &g.shift(&p.0, &p.1));
        prop_assert_eq!(f.shift(&p.0, &p.1).shift(&-p.0.clone(), &-p.1.clone()), f.clone());
    }

    #[test]
    fn shift_matches_taylor_oracle(f in arb_poly(4), p in arb_point()) {
        prop_assert_eq!(f.shift(&p.0, &p.1), common::taylor_expansion(&f, &p));
    }

    #[test]
    fn index_matches_taylor_oracle(f in arb_nonzero_poly(4), p in arb_point(), w in arb_weight()) {
        let lib = weighted_index(&f, &p, &w).unwrap();
        let (v, e) = common::taylor_index(&f, &p, &w).unwrap();
        prop_assert_eq!(lib.value, v);
        prop_assert_eq!(lib.attaining_exponent, e);
    }

    #[test]
    fn index_is_additive_on_products(f in arb_nonzero_poly(3), g in arb_nonzero_poly(3), p in arb_point(), w in arb_weight()) {
        let i = |h: &BiPoly| weighted_index(h, &p, &w).unwrap().value;
        prop_assert_eq!(i(&(&f * &g)), i(&f) + i(&g));
    }

    #[test]
    fn index_is_superadditive_on_sums(f in arb_nonzero_poly(3), g in arb_nonzero_poly(3), p in arb_point(), w in arb_weight()) {
        let s = &f + &g;
        prop_assume!(!s.is_zero());
        let i = |h: &BiPoly| weighted_index(h, &p, &w).unwrap().value;
        prop_assert!(i(&s) >= i(&f).min(i(&g)));
    }

    #[test]
    fn index_scales_inversely_with_weight(f in arb_nonzero_poly(3), p in arb_point(), w in arb_weight(), c in arb_pos_rat()) {
        let a = weighted_index(&f, &p, &w).unwrap().value;
        let b = weighted_index(&f, &p, &w.scaled(&c)).unwrap().value;
        prop_assert_eq!(b * &c, a);
    }

    #[test]
    fn v_properties(n in 0i64..=3000, d in 1i64..=1000) {
        let a = rat(n, d);
        let v = v_of(&a).unwrap();
        prop_assert!(v >= Rat::zero() && v <= Rat::one());
        prop_assert!(v <= &a * &a / int(2));
        if a <= int(2) {
            prop_assert_eq!(&v + v_of(&(int(2) - &a)).unwrap(), Rat::one());
        }
        let next = &a + rat(1, d);
        prop_assert!(v_of(&next).unwrap() >= v);
    }

    #[test]
    fn divisor_reconstructs(f in arb_product()) {
        let d = analyze_divisor(&f, f.bidegree()).unwrap();
        prop_assert_eq!(d.reconstruct(), f.clone());
        let (c, parts) = squarefree_decompose(&f).unwrap();
        let back = parts.iter().fold(BiPoly::constant(c), |acc, (g, k)| &acc * &g.pow(*k));
        prop_assert_eq!(back, f.clone());
        for (i, (g, _)) in parts.iter().enumerate() {
            for (h, _) in &parts[i + 1..] {
                prop_assert!(sqfree::gcd(g, h).is_constant());
            }
        }
    }

    #[test]
    fn stripping_identity(f in arb_product(), pts in prop::collection::btree_set(-4i64..=4, 1..4), w in arb_weight()) {
        let points: Vec<(Rat, Rat)> = pts.iter().map(|&k| (int(k), int(-k))).collect();
        let cfg = PointConfig::new(points).unwrap();
        let d = analyze_divisor(&f, f.bidegree()).unwrap();
        let s = strip_fibers(&d, &cfg, &w).unwrap();
        prop_assert!(s.identity_holds());
        prop_assert!(!s.reduced.has_fibers());
    }

    #[test]
    fn vojta_invariant_under_scaling(a in 1i64..=20, b in -10i64..=10, c in 1i64..=20, s in arb_pos_rat(),
                                     u in prop::collection::vec(-5i64..=5, 2), v in prop::collection::vec(-5i64..=5, 2)) {
        prop_assume!(a * c > b * b);
        prop_assume!(u.iter().any(|x| *x != 0) && v.iter().any(|x| *x != 0));
        let l = MWLattice::new(
            vec![vec![int(a), int(b)], vec![int(b), int(c)]],
            vec![("P".into(), u.iter().map(|&x| int(x)).collect()), ("Q".into(), v.iter().map(|&x| int(x)).collect())],
        ).unwrap();
        let ls = l.scaled(&s);
        prop_assert_eq!(l.vojta_predicate(0, 1).unwrap(), ls.vojta_predicate(0, 1).unwrap());
        prop_assert_eq!(l.cos_sq_signed(0, 1).unwrap(), ls.cos_sq_signed(0, 1).unwrap());
    }

    #[test]
    fn cone_cover_sound(dirs in prop::collection::vec(prop::collection::vec(-9i64..=9, 3), 1..40)) {
        let dirs: Vec<Vec<Rat>> = dirs.into_iter().filter(|v| v.iter().any(|x| *x != 0))
            .map(|v| v.into_iter().map(int).collect()).collect();
        prop_assume!(!dirs.is_empty());
        let h = rat(7, 8);
        let cover = cone_cover(3, &h, &dirs).unwrap();
        let e = |u: &[Rat], v: &[Rat]| u.iter().zip(v).map(|(a, b)| a * b).sum::<Rat>();
        prop_assert!(cover.verify(e, &dirs));
        prop_assert!(cover.verify_pairs(e, &dirs));
        // centers are pairwise outside each other's cones
        for (i, &a) in cover.centers.iter().enumerate() {
            for &b in &cover.centers[..i] {
                let ip = e(&dirs[a], &dirs[b]);
                prop_assert!(!(ip.is_positive() && &ip * &ip > &h * e(&dirs[a], &dirs[a]) * e(&dirs[b], &dirs[b])));
            }
        }
    }

    #[test]
    fn amgm_minimum_at_optimal_deltas(n1 in arb_pos_rat(), n2 in arb_pos_rat(), t in 1i64..=50, pairing in arb_rat()) {
        let g = 2u32;
        let p = int(g as i64) + lambda();
        // any (δ1, p/δ1) on the curve δ1 δ2 = p
        let d1 = rat(t, 10);
        let d2 = &p / &d1;
        let main = mumford_rhs(g, &d1, &d2, &n1, &n2, &pairing).unwrap();
        let v = (&main + int(2) * &pairing) * int(g as i64);
        prop_assert!(&v * &v >= amgm_min_sq(&p, &n1, &n2));
        // at the optimum, δ1 n1 = δ2 n2 = sqrt(p n1 n2): equality on squares
        let (s1, s2) = optimal_deltas(g, &lambda(), &n1, &n2).unwrap();
        prop_assert_eq!(&s1 * &n1 * &n1, &s2 * &n2 * &n2);
        prop_assert_eq!(int(4) * &s1 * &n1 * &n1, amgm_min_sq(&p, &n1, &n2));
        prop_assert_eq!(&s1 * &s2, &p * &p);
    }

    #[test]
    fn chain_conclusion_follows(seed in 0u64..10_000, c0n in 0i64..=20, frac in -1000i64..=1000) {
        let ch = deduction_chain(2, &rat(c0n, 100)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let t1 = dyson_gap::rat::sqrt_bounds(&ch.t1_sq, 4).1 + Rat::one();
        let n1 = &t1 * rat(rng.gen_range(100..=300), 100);
        let n2 = &n1 * &ch.t2 * rat(rng.gen_range(100..=300), 100);
        let lo = ch.assemble(&n1, &n2, &int(0)).unwrap().lhs_lower;
        let r = ch.assemble(&n1, &n2, &(lo * rat(frac, 1000))).unwrap();
        prop_assert!(r.conditions_hold() && r.hypothesis_certified);
        prop_assert!(r.conclusion);
        prop_assert!(r.consistent());
    }

    #[test]
    fn index_bound_chain(seed in 0u64..10_000, g in 2u32..=5, d in 1u64..=300, e1 in 0u64..=400, e2 in 0u64..=400) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (delta1, delta2) = sample_admissible_deltas(g, &mut rng);
        let n2 = &delta1 / &delta2;
        let p = Lemma61Params { g, delta1, delta2, d, e1, e2, normsq1: Rat::one(), normsq2: n2 };
        let r = bound_index_check(&p).unwrap();
        // whenever the Dyson input holds, every derived step holds
        if r.step("i_dyson").unwrap().holds {
            prop_assert!(r.all_hold(), "{:?}", r);
        }
        prop_assert!(r.step("ii_bound_below_half").unwrap().holds);
        prop_assert!(r.step("c_below_sqrt_g").unwrap().holds);
    }

    #[test]
    fn json_round_trips(f in arb_poly(4), d1 in 0u32..6, d2 in 0u32..6) {
        let text = serde_json::to_string(&PolyJson::from_poly(&f, Some((d1, d2)))).unwrap();
        prop_assert_eq!(parse_poly(&text).unwrap(), (f.clone(), (d1, d2)));
        let lemma = Lemma61Params { g: 2, delta1: rat(4, 1), delta2: rat(51, 100), d: d1 as u64 + 1, e1: 3, e2: 1,
                                    normsq1: Rat::one(), normsq2: rat(400, 51) };
        let back: Lemma61Params = serde_json::from_str(&serde_json::to_string(&lemma).unwrap()).unwrap();
        prop_assert_eq!(back, lemma);
    }
}

#[test]
fn lattice_json_round_trip() {
    let l = MWLattice::new(
        vec![vec![rat(5, 2), int(1)], vec![int(1), int(3)]],
        vec![("A".into(), vec![int(1), rat(-1, 3)]), ("B".into(), vec![int(0), int(2)])],
    )
    .unwrap();
    let text = serde_json::to_string(&LatticeJson::from_lattice(&l)).unwrap();
    assert_eq!(parse_lattice(&text, None).unwrap(), l);
}

#[test]
fn corpus_is_independent_of_thread_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| serde_json::to_string(&random_dyson_corpus(11, 60, (4, 4))).unwrap())
    };
    assert_eq!(run(1), run(4));
}
