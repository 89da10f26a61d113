use accthr::caps::Caps;
use accthr::circuit::*;
use accthr::random::{random_circuit, random_gate, random_symsym, BottomKind};
use accthr::rng::stream;
use accthr::transforms::*;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::Rng;

fn ckt(s: &str) -> Circuit {
    parse_circuit(s).unwrap()
}

fn big(v: &[u64]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}


fn thr_gate(s: &str) -> Gate {
    ckt(s).output_gate().clone()
}

#[test]
fn thr_already_nonnegative() {
    let g = normalize_thr_to_sym(&thr_gate("inputs 2\ngate g THR 4 2@x1 3@x2\noutput g"), &Caps::default()).unwrap();
    assert_eq!(g.weights, big(&[2, 3]));
    assert_eq!(g.accepted_sums(), big(&[4, 5]));
}

#[test]
fn thr_negative_weight_flips_literal() {
    let g = normalize_thr_to_sym(&thr_gate("inputs 2\ngate g THR 1 -1@x1 2@x2\noutput g"), &Caps::default()).unwrap();
    assert_eq!(g.literals, vec![Literal::new(0, true), Literal::new(1, false)]);
    assert_eq!(g.weights, big(&[1, 2]));
    assert_eq!(g.predicate, SumPredicate::AtLeast(BigUint::from(2u32)));
    assert_eq!(g.accepted_sums(), big(&[2, 3]));
}

#[test]
fn thr_weight_cap() {
    let mut caps = Caps::default();
    caps.weight = BigUint::from(10u32);
    let g = thr_gate("inputs 2\ngate g THR 1 -6@x1 6@x2\noutput g");
    assert!(normalize_thr_to_sym(&g, &caps).unwrap_err().is_cap());
}

#[test]
fn random_thr_gates_exhaustive() {
    let caps = Caps::default();
    for seed in 0..20 {
        let mut rng = stream(seed, "thr", 0);
        let inputs = (0..10).map(|i| if rng.gen_bool(0.3) { Wire::input(i).neg() } else { Wire::input(i) }).collect();
        let g = random_gate(&mut rng, "g".into(), BottomKind::Thr, inputs, 100);
        let c = Circuit::new(10, vec![g.clone()], 0).unwrap();
        let s = normalize_thr_to_sym(c.output_gate(), &caps).unwrap();
        assert!(s.weights.iter().all(|w| *w > BigUint::from(0u32)));
        for idx in 0..1 << 10 {
            let x = assignment(10, idx);
            assert_eq!(s.eval(&x), eval_on_assignment(&c, &x), "seed {seed} idx {idx}");
        }
    }
}

#[test]
fn collapse_single_gate_is_identity() {
    let g = lower_gate(&thr_gate("inputs 3\ngate g MOD 3 x1 x2 x3\noutput g"), &Caps::default()).unwrap();
    assert_eq!(collapse_and_of_sym(vec![g.clone()]), g);
}

#[test]
fn collapse_exactly_one_and_parity() {
    let caps = Caps::default();
    let s1 = lower_gate(&thr_gate("inputs 3\ngate g SYM 010 x1 x2\noutput g"), &caps).unwrap();
    let s2 = lower_gate(&thr_gate("inputs 3\ngate g XOR x2 x3\noutput g"), &caps).unwrap();
    let c = collapse_and_of_sym(vec![s1, s2]);
    let SumPredicate::Digits { base, .. } = &c.predicate else { panic!() };
    assert_eq!(*base, BigUint::from(3u32));
    let mut pairs: Vec<(usize, BigUint)> = c.literals.iter().map(|l| l.input).zip(c.weights.iter().cloned()).collect();
    pairs.sort();
    assert_eq!(pairs, vec![(0, 1u32.into()), (1, 4u32.into()), (2, 3u32.into())]);
    for idx in 0..8 {
        let x = assignment(3, idx);
        let want = (x[0] as u8 + x[1] as u8 == 1) && (x[1] ^ x[2]);
        assert_eq!(c.eval(&x), want);
        assert_eq!(c.eval_structural(&x), want);
    }
}

fn random_sym_gate(rng: &mut impl Rng, n: usize) -> GeneralizedSymGate {
    let mut inputs = Vec::new();
    for i in 0..n {
        if rng.gen_bool(0.7) {
            inputs.push(Wire { negated: rng.gen_bool(0.3), ..Wire::input(i) });
        }
    }
    let inputs = if inputs.is_empty() { vec![Wire::input(0)] } else { inputs };
    let kind = if rng.gen_bool(0.5) { BottomKind::Sym } else { BottomKind::Thr };
    lower_gate(&random_gate(rng, "g".into(), kind, inputs, 9), &Caps::default()).unwrap()
}

#[test]
fn collapse_two_random_sym_gates() {
    for seed in 0..20 {
        let mut rng = stream(seed, "collapse", 0);
        let a = random_sym_gate(&mut rng, 8);
        let b = random_sym_gate(&mut rng, 8);
        let c = collapse_and_of_sym(vec![a.clone(), b.clone()]);
        for idx in 0..256 {
            let x = assignment(8, idx);
            assert_eq!(c.eval(&x), a.eval(&x) && b.eval(&x));
        }
    }
}

#[test]
fn collapse_circuit_matches_oracle() {
    let caps = Caps::default();
    for seed in 0..30 {
        let mut rng = stream(seed, "collapse-circuit", 0);
        let c = random_circuit(&mut rng, 7, 8);
        let g = collapse_circuit(&c, &caps).unwrap();
        let ss = SymSymCircuit::from_circuit(&c, &caps).unwrap();
        let tt = brute_force_truth_table(&c).unwrap();
        assert_eq!(ss.brute_force(), tt, "seed {seed}");
        for idx in 0..1 << 7 {
            let x = assignment(7, idx);
            assert_eq!(g.eval(&x), tt.get(idx), "seed {seed} idx {idx}");
        }
    }
}

#[test]
fn symsym_from_sym_top_keeps_children() {
    let caps = Caps::default();
    for seed in 0..20 {
        let mut rng = stream(seed, "symsym", 0);
        let c = random_symsym(&mut rng, 8, 6);
        let ss = SymSymCircuit::from_circuit(&c, &caps).unwrap();
        assert!(ss.bottom.iter().all(|g| g.is_atomic()));
        assert_eq!(ss.brute_force(), brute_force_truth_table(&c).unwrap());
    }
}

#[test]
fn prob_poly_identity() {
    let c = ckt("inputs 1\ngate g AND x1\noutput g");
    for seed in 0..10 {
        let p = sample_prob_poly(&c, &ProbPolyParams::new(1, 10), &mut stream(seed, "pp", 0)).unwrap();
        assert_eq!(p, F2Polynomial::var(1, 0));
    }
}

#[test]
fn prob_poly_wide_and() {
    let c = ckt("inputs 9\ngate g AND x1 x2 x3 x4 x5 x6 x7 x8 x9\noutput g");
    let params = ProbPolyParams::new(1, 80);
    assert_eq!(params.ell(1), 7);
    for seed in 0..50 {
        let mut rng = stream(seed, "and9", 0);
        let p = sample_prob_poly(&c, &params, &mut rng).unwrap();
        assert!(p.len() <= 512);
        assert!(p.degree() <= 7);
        assert!(p.eval(&[true; 9]));
        let q = sample_prob_poly_sparse(&c, &params, &mut stream(seed, "and9", 0)).unwrap();
        assert_eq!(p, q);
    }
}

#[test]
fn prob_poly_or_agreement() {
    let c = ckt("inputs 6\ngate g OR x1 x2 x3 x4 x5 x6\noutput g");
    let params = ProbPolyParams::new(1, 10);
    let samples = 2000;
    let mut agree = vec![0u32; 64];
    for s in 0..samples {
        let p = sample_prob_poly(&c, &params, &mut stream(7, "or6", s)).unwrap();
        let tt = p.to_truth_table();
        for (idx, a) in agree.iter_mut().enumerate() {
            if (tt[0] >> idx & 1 == 1) == (idx != 0) {
                *a += 1;
            }
        }
    }
    let eps = params.eps();
    let sigma = (eps * (1.0 - eps) / samples as f64).sqrt();
    for (idx, &a) in agree.iter().enumerate() {
        assert!(a as f64 / samples as f64 >= 1.0 - eps - 3.0 * sigma, "x={idx}: {a}");
    }
    assert_eq!(agree[0], samples as u32);
}

#[test]
fn combiner_single_subcircuit() {
    let mut ones = 0;
    for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
        let c = RandomCombiner { r1: vec![a], r2: vec![b] };
        assert!(!c.combine(&[false]));
        ones += c.combine(&[true]) as u32;
    }
    assert_eq!(ones, 3);
}

#[test]
fn combiner_no_false_positives() {
    for count in 1..=10usize {
        for r in 0..1u32 << (2 * count).min(16) {
            let c = RandomCombiner {
                r1: (0..count).map(|i| r >> i & 1 == 1).collect(),
                r2: (0..count).map(|i| r >> (count + i) % 32 & 1 == 1).collect(),
            };
            assert!(!c.combine(&vec![false; count]));
        }
    }
}

#[test]
fn combiner_success_rate() {
    let values = [false, true, false, false, true, true, false, false];
    let draws = 10_000;
    let mut rng = stream(3, "combiner", 0);
    let hits = (0..draws).filter(|_| RandomCombiner::sample(8, &mut rng).combine(&values)).count();
    let sigma = (0.75f64 * 0.25 / draws as f64).sqrt();
    assert!(hits as f64 / draws as f64 >= 0.75 - 3.0 * sigma, "{hits}");
}

#[test]
fn combiner_polys_match_values() {
    let subs: Vec<F2Polynomial> = (0..3).map(|i| F2Polynomial::var(3, i)).collect();
    let mut rng = stream(1, "cpoly", 0);
    for _ in 0..20 {
        let (comb, p) = or_to_xor_randomized(&subs, &mut rng, 1 << 10).unwrap();
        for idx in 0..8 {
            let x = assignment(3, idx);
            assert_eq!(p.eval(&x), comb.combine(&x));
        }
    }
}

fn bank_counts(bank: &[Circuit]) -> Vec<u64> {
    let tts: Vec<TruthTableBitmap> = bank.iter().map(|b| brute_force_truth_table(b).unwrap()).collect();
    (0..tts[0].len()).map(|x| tts.iter().enumerate().map(|(i, t)| (t.get(x) as u64) << i).sum()).collect()
}

#[test]
fn bank_identity_circuit() {
    let c = Circuit::identity(3, 0);
    let bank = build_bit_extractor_bank(&c, 1, &Caps::default()).unwrap();
    assert_eq!(bank.len(), 3);
    assert_eq!(brute_force_truth_table(&bank[2]).unwrap().to_bit_string(), "01");
    assert_eq!(brute_force_truth_table(&bank[0]).unwrap().to_bit_string(), "00");
    assert_eq!(brute_force_truth_table(&bank[1]).unwrap().to_bit_string(), "00");
}

#[test]
fn bank_and4() {
    let c = ckt("inputs 4\ngate g AND x1 x2 x3 x4\noutput g");
    let bank = build_bit_extractor_bank(&c, 1, &Caps::default()).unwrap();
    assert_eq!(brute_force_truth_table(&bank[0]).unwrap().to_bit_string(), "0001");
    assert_eq!(bank_counts(&bank), vec![0, 0, 0, 1]);
}

#[test]
fn bank_random_sums_to_count() {
    for seed in 0..10 {
        let c = random_circuit(&mut stream(seed, "bank", 0), 10, 8);
        let bank = build_bit_extractor_bank(&c, 2, &Caps::default()).unwrap();
        assert!(bank.iter().all(|b| b.n() == 6));
        let total: u64 = bank_counts(&bank).iter().sum();
        assert_eq!(total, brute_force_count_sat(&c).unwrap());
    }
}

#[test]
fn bank_copy_cap() {
    let mut caps = Caps::default();
    caps.copies = 8;
    let c = Circuit::identity(6, 0);
    assert!(build_bit_extractor_bank(&c, 2, &caps).unwrap_err().is_cap());
    assert!(build_bit_extractor_bank(&c, 3, &Caps::default()).is_err());
}

#[test]
fn expand_copies_examples() {
    let c = ckt("inputs 2\ngate g AND x1 x2\noutput g");
    let caps = Caps::default();
    assert_eq!(expand_copies(&c, 0, &caps).unwrap(), vec![c.clone()]);
    let cs = expand_copies(&c, 1, &caps).unwrap();
    assert_eq!(brute_force_truth_table(&cs[0]).unwrap().to_bit_string(), "00");
    assert_eq!(brute_force_truth_table(&cs[1]).unwrap().to_bit_string(), "01");
}

#[test]
fn expand_copies_marginal() {
    let caps = Caps::default();
    for seed in 0..10 {
        let c = random_circuit(&mut stream(seed, "copies", 0), 10, 8);
        let tt = brute_force_truth_table(&c).unwrap();
        let cs = expand_copies(&c, 3, &caps).unwrap();
        let tts: Vec<TruthTableBitmap> = cs.iter().map(|x| brute_force_truth_table(x).unwrap()).collect();
        for y in 0..1 << 7 {
            let any = tts.iter().any(|t| t.get(y));
            let want = (0..8).any(|j| tt.get(j | y << 3));
            assert_eq!(any, want);
        }
    }
}

fn arb_gate() -> impl Strategy<Value = GeneralizedSymGate> {
    (any::<u64>(), 1usize..=10).prop_map(|(seed, n)| random_sym_gate(&mut stream(seed, "arb", 0), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn collapse_digits_are_part_sums(gates in prop::collection::vec(arb_gate(), 1..4), xi in 0usize..1024) {
        prop_assume!(gates.len() > 1);
        let x = assignment(10, xi);
        let c = collapse_and_of_sym(gates.clone());
        let ds = digits(&c, &c.sum(&x)).unwrap();
        for (g, d) in gates.iter().zip(&ds) {
            prop_assert_eq!(&g.sum(&x), d);
        }
        prop_assert_eq!(c.eval(&x), gates.iter().all(|g| g.eval(&x)));
    }

    #[test]
    fn prob_poly_degree_bound(seed in any::<u64>(), k in 2usize..6) {
        let mut rng = stream(seed, "shape", 0);
        let n = 8;
        let mut gates = Vec::new();
        for i in 0..k {
            let f = rng.gen_range(1..=n);
            let ws = (0..f).map(|_| Wire { negated: rng.gen_bool(0.3), ..Wire::input(rng.gen_range(0..n)) }).collect();
            let kind = if i % 2 == 0 { GateKind::And } else { GateKind::Or };
            gates.push(Gate::new(format!("g{i}"), kind, ws));
        }
        let top_kind = if rng.gen_bool(0.5) { GateKind::And } else { GateKind::Or };
        gates.push(Gate::new("top", top_kind, (0..k).map(Wire::gate).collect()));
        let c = Circuit::new(n, gates, k).unwrap();
        let params = ProbPolyParams::new(1, 3);
        let p = sample_prob_poly(&c, &params, &mut rng).unwrap();
        prop_assert!(p.degree() <= degree_bound(&c, &params).unwrap());
    }
}

#[test]
fn prob_poly_one_sided_and_or() {
    let and = ckt("inputs 12\ngate g AND x1 x2 ~x3 x4 x5 x6 x7 x8 x9 x10 x11 x12\noutput g");
    let or = ckt("inputs 12\ngate g OR x1 x2 ~x3 x4 x5 x6 x7 x8 x9 x10 x11 x12\noutput g");
    let params = ProbPolyParams::new(1, 4);
    for seed in 0..50 {
        let pa = sample_prob_poly(&and, &params, &mut stream(seed, "os", 0)).unwrap();
        let po = sample_prob_poly(&or, &params, &mut stream(seed, "os", 1)).unwrap();
        let ta = brute_force_truth_table(&and).unwrap();
        let to = brute_force_truth_table(&or).unwrap();
        let (pat, pot) = (pa.to_truth_table(), po.to_truth_table());
        for idx in 0..1usize << 12 {
            let bit = |t: &[u64]| t[idx / 64] >> (idx % 64) & 1 == 1;
            if ta.get(idx) {
                assert!(bit(&pat));
            }
            if !to.get(idx) {
                assert!(!bit(&pot));
            }
        }
        assert!(pa.degree() <= degree_bound(&and, &params).unwrap());
    }
}
