use accthr::caps::Caps;
use accthr::circuit::*;
use accthr::evaluator::*;
use accthr::random::{random_depth2, random_symsym, BottomKind, Depth2Config, TopKind};
use accthr::rng::stream;
use accthr::transforms::SymSymCircuit;
use proptest::prelude::*;
use rand::Rng;

fn ckt(s: &str) -> Circuit {
    parse_circuit(s).unwrap()
}

const METHODS: [Method; 3] = [Method::Oracle, Method::SymrankNaive, Method::DirectOuterSum];

fn check_all_methods(c: &Circuit) {
    let want = brute_force_truth_table(c).unwrap();
    let ss = SymSymCircuit::from_circuit(c, &Caps::default()).unwrap();
    for m in METHODS {
        let got = eval_all_symsym(&ss, &EvalPlan::new(m)).unwrap();
        assert_eq!(got, want, "method {m}");
    }
}

#[test]
fn and_two_inputs() {
    let c = ckt("inputs 2\ngate g AND x1 x2\ngate t SYM 01 g\noutput t");
    let ss = SymSymCircuit::from_circuit(&c, &Caps::default()).unwrap();
    for m in METHODS {
        assert_eq!(eval_all_symsym(&ss, &EvalPlan::new(m)).unwrap().to_bit_string(), "0001");
    }
}

#[test]
fn parity_of_parities() {
    let mut s = String::from("inputs 12\n");
    for k in 0..4 {
        s += &format!("gate p{k} XOR x{} x{} x{}\n", 3 * k + 1, 3 * k + 2, 3 * k + 3);
    }
    s += "gate t XOR p0 p1 p2 p3\noutput t";
    check_all_methods(&ckt(&s));
}

#[test]
fn random_symsym_all_methods() {
    for seed in 0..30 {
        let mut rng = stream(seed, "symsym", 0);
        let c = random_symsym(&mut rng, 12, 80);
        check_all_methods(&c);
    }
}

#[test]
fn method_names_roundtrip() {
    for m in [Method::Oracle, Method::SymrankNaive, Method::SymrankCoppersmith, Method::DirectOuterSum] {
        assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
    }
    assert!("fast".parse::<Method>().is_err());
}

#[test]
fn filter_examples() {
    assert_eq!(apply_filter(&[0, 1, 1, 0], &[false, true]).unwrap(), vec![false, true, true, false]);
    let parity = [false, true, false, true];
    assert_eq!(apply_filter(&[2, 3, 0, 1], &parity).unwrap(), vec![false, true, false, true]);
    assert!(apply_filter(&[4], &parity).is_err());
    let mut rng = stream(1, "filter", 0);
    let vals: Vec<u64> = (0..500).map(|_| rng.gen_range(0..40)).collect();
    let f: Vec<bool> = (0..40).map(|v| v >= 17).collect();
    let got = apply_filter(&vals, &f).unwrap();
    for (v, b) in vals.iter().zip(got) {
        assert_eq!(b, *v >= 17);
    }
}

#[test]
fn rank_cap_falls_back() {
    let mut rng = stream(2, "cap", 0);
    let c = random_symsym(&mut rng, 10, 60);
    let ss = SymSymCircuit::from_circuit(&c, &Caps::default()).unwrap();
    let mut plan = EvalPlan::new(Method::SymrankNaive);
    plan.caps.rank = 0;
    let out = eval_all_symsym_report(&ss, &plan).unwrap();
    assert!(out.fell_back);
    assert_eq!(out.method, Method::DirectOuterSum);
    assert_eq!(out.table, ss.brute_force());
    plan.fallback = false;
    assert!(eval_all_symsym(&ss, &plan).unwrap_err().is_cap());
}

#[test]
fn coppersmith_tiny_rank() {
    let c = ckt("inputs 16\ngate g AND x2 x11\ngate t SYM 01 g\noutput t");
    let ss = SymSymCircuit::from_circuit(&c, &Caps::default()).unwrap();
    let out = eval_all_symsym_report(&ss, &EvalPlan::new(Method::SymrankCoppersmith)).unwrap();
    assert_eq!(out.method, Method::SymrankCoppersmith);
    assert_eq!(out.rank, Some(1));
    assert!(out.base_mults.unwrap() > 0);
    assert_eq!(out.table, brute_force_truth_table(&c).unwrap());
    assert_eq!(coppersmith_rank_limit(8), 2);
}

#[test]
fn coppersmith_rank_too_large_falls_back() {
    let mut rng = stream(3, "cfall", 0);
    let c = random_symsym(&mut rng, 12, 80);
    let ss = SymSymCircuit::from_circuit(&c, &Caps::default()).unwrap();
    let out = eval_all_symsym_report(&ss, &EvalPlan::new(Method::SymrankCoppersmith)).unwrap();
    assert!(out.fell_back);
    assert_eq!(out.table, ss.brute_force());
}

#[test]
fn count_examples() {
    let plan = EvalPlan::default();
    let par = ckt("inputs 8\ngate p XOR x1 x2 x3 x4 x5 x6 x7 x8\noutput p");
    assert_eq!(count_sat_split(&par, 2, &plan).unwrap().count, 128);
    let thr = ckt("inputs 3\ngate g THR 2 1@x1 1@x2 1@x3\noutput g");
    assert_eq!(count_sat_split(&thr, 1, &plan).unwrap().count, 4);
    assert!(count_sat_split(&thr, 2, &plan).is_err());
}

#[test]
fn count_and_of_thr() {
    for seed in 0..6 {
        let mut rng = stream(seed, "andthr", 0);
        let cfg = Depth2Config::new(14, 3, TopKind::And, BottomKind::Thr);
        let c = random_depth2(&mut rng, &cfg);
        let want = brute_force_count_sat(&c).unwrap();
        for ell in 1..=3 {
            for m in [Method::SymrankNaive, Method::DirectOuterSum] {
                let got = count_sat_split(&c, ell, &EvalPlan::new(m)).unwrap();
                assert_eq!(got.count, want, "seed {seed} ell {ell} {m}");
                assert_eq!(got.bit_totals.len(), 2 * ell + 1);
            }
        }
    }
}

#[test]
fn randomized_count_or_top() {
    let plan = EvalPlan::new(Method::DirectOuterSum);
    let mut ok = 0;
    for seed in 0..10 {
        let mut rng = stream(seed, "ac0", 0);
        let c = accthr::random::random_ac0_top(&mut rng, 10, 4, 3);
        let want = brute_force_count_sat(&c).unwrap();
        let got = count_sat_split_randomized(&c, 1, &plan, DEFAULT_REPEATS, &mut rng).unwrap();
        ok += (got.count == want) as usize;
    }
    assert!(ok >= 9, "{ok}/10");
}

#[test]
fn abstraction_rejects_sym_above_bottom() {
    let c = ckt("inputs 3\ngate a AND x1 x2\ngate b SYM 0110 a x3 x1\ngate t OR b x2\noutput t");
    assert!(ac0_abstraction(&c).is_err());
}

#[test]
fn equivalence_examples() {
    let plan = EvalPlan::default();
    let c = |s: &str| ckt(&format!("inputs 4\n{s}"));
    let and12 = c("gate g AND x1 x2\noutput g");
    let x1 = c("gate g AND x1\noutput g");
    let x2 = c("gate g AND x2\noutput g");
    let nx1 = c("gate g AND ~x1\noutput g");
    assert!(equiv_via_count(&and12, &and12, 1, &plan).unwrap());
    assert!(!equiv_via_count(&x1, &x2, 1, &plan).unwrap());
    assert!(antiequiv_via_count(&x1, &nx1, 1, &plan).unwrap());
    assert!(!antiequiv_via_count(&x1, &x1, 1, &plan).unwrap());
}

#[test]
fn equivalence_random_pairs() {
    let plan = EvalPlan::default();
    for seed in 0..20 {
        let mut rng = stream(seed, "equiv", 0);
        let cfg = Depth2Config::new(10, 3, TopKind::Sym, BottomKind::Mixed);
        let g = random_depth2(&mut rng, &cfg);
        let h = if rng.gen_bool(0.3) { g.clone() } else if rng.gen_bool(0.3) { g.negate() } else { random_depth2(&mut rng, &cfg) };
        let tg = brute_force_truth_table(&g).unwrap();
        let th = brute_force_truth_table(&h).unwrap();
        let anti = tg.words().iter().zip(th.words()).all(|(a, b)| a ^ b == u64::MAX >> (64 - (1 << 10).min(64)));
        assert_eq!(equiv_via_count(&g, &h, 2, &plan).unwrap(), tg == th, "seed {seed}");
        assert_eq!(antiequiv_via_count(&g, &h, 2, &plan).unwrap(), anti, "seed {seed}");
    }
}

#[test]
fn default_ell_values() {
    assert_eq!(default_ell(3), 1);
    assert_eq!(default_ell(8), 2);
    assert_eq!(default_ell(14), 2);
    assert_eq!(default_ell(27), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn count_independent_of_ell(seed in any::<u64>()) {
        let mut rng = stream(seed, "ell", 0);
        let mut cfg = Depth2Config::new(9, 3, TopKind::Sym, BottomKind::Mixed);
        cfg.weight = 6;
        let c = random_depth2(&mut rng, &cfg);
        let plan = EvalPlan::new(Method::DirectOuterSum);
        let want = brute_force_count_sat(&c).unwrap();
        for ell in 1..=3 {
            prop_assert_eq!(count_sat_split(&c, ell, &plan).unwrap().count, want);
        }
    }
}
