use accthr::circuit::{brute_force_count_sat, brute_force_truth_table, serialize_circuit, Circuit};
use accthr::depth2::{brute_force_rectangle, format_bitstrings, BitMatrix, RectInput};
use accthr::ilp::{brute_force_optimum, random_instance, serialize_ilp};
use accthr::random::{random_depth2, random_symsym, random_thrthr, BottomKind, Depth2Config, TopKind};
use accthr::rectmm::FieldMatrix;
use accthr::rng::stream;
use accthr::{PrimeField, TruthTableBitmap};
use rand::Rng;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn accthr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_accthr")).args(args).env_remove("ACCTHR_CAPS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "status {:?}, stderr {}", o.status, String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Value of `key` in the last summary line.
fn field(out: &str, key: &str) -> String {
    let line = out.lines().last().unwrap();
    line.split(' ').find_map(|kv| kv.strip_prefix(&format!("{key}="))).unwrap_or_else(|| panic!("{key} missing in {line}")).to_string()
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn put_circuit(dir: &TempDir, name: &str, c: &Circuit) -> PathBuf {
    put(dir, name, &serialize_circuit(c))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_all_symrank_matches_oracle() {
    let dir = TempDir::new().unwrap();
    for seed in 0..5 {
        let mut rng = stream(seed, "cli-eval", 0);
        let c = random_symsym(&mut rng, 12, 80);
        let ckt = put_circuit(&dir, "c.ckt", &c);
        let (fast, slow) = (dir.path().join("fast.bin"), dir.path().join("slow.bin"));
        let out = stdout(&accthr(&["eval-all", "--circuit", s(&ckt), "--out", s(&fast), "--method", "symrank"]));
        assert_eq!(field(&out, "method"), "symrank-naive-mm");
        assert!(field(&out, "rank").parse::<usize>().is_ok());
        stdout(&accthr(&["eval-all", "--circuit", s(&ckt), "--out", s(&slow), "--method", "naive"]));
        let a = std::fs::read(&fast).unwrap();
        assert_eq!(a, std::fs::read(&slow).unwrap());
        assert_eq!(TruthTableBitmap::from_bytes(12, &a).unwrap(), brute_force_truth_table(&c).unwrap());
    }
}

#[test]
fn equiv_matches_truth_tables() {
    let dir = TempDir::new().unwrap();
    let mut rng = stream(1, "cli-equiv", 0);
    let cfg = Depth2Config::new(9, 3, TopKind::Sym, BottomKind::Mixed);
    for round in 0..6 {
        let g = random_depth2(&mut rng, &cfg);
        let h = match round % 3 {
            0 => g.clone(),
            1 => g.negate(),
            _ => random_depth2(&mut rng, &cfg),
        };
        let (pa, pb) = (put_circuit(&dir, "g.ckt", &g), put_circuit(&dir, "h.ckt", &h));
        let (tg, th) = (brute_force_truth_table(&g).unwrap(), brute_force_truth_table(&h).unwrap());
        let out = stdout(&accthr(&["equiv", "--a", s(&pa), "--b", s(&pb)]));
        assert_eq!(field(&out, "equivalent"), (tg == th).to_string());
        let anti = (0..tg.len()).all(|i| tg.get(i) != th.get(i));
        let out = stdout(&accthr(&["equiv", "--a", s(&pa), "--b", s(&pb), "--anti"]));
        assert_eq!(field(&out, "antiequivalent"), anti.to_string());
    }
}

#[test]
fn count_sat_paths() {
    let dir = TempDir::new().unwrap();
    let mut rng = stream(2, "cli-count", 0);
    let c = random_depth2(&mut rng, &Depth2Config::new(10, 3, TopKind::And, BottomKind::Thr));
    let want = brute_force_count_sat(&c).unwrap().to_string();
    let p = put_circuit(&dir, "c.ckt", &c);
    for path in ["auto", "deterministic", "oracle"] {
        assert_eq!(field(&stdout(&accthr(&["count-sat", "--circuit", s(&p), "--path", path])), "count"), want);
    }
    let or = random_depth2(&mut rng, &Depth2Config::new(10, 3, TopKind::Or, BottomKind::Thr));
    let p = put_circuit(&dir, "or.ckt", &or);
    let out = stdout(&accthr(&["count-sat", "--circuit", s(&p), "--path", "randomized", "--seed", "7", "--repeats", "25"]));
    assert_eq!(field(&out, "seed"), "7");
    assert_eq!(field(&out, "repeats"), "25");
    assert_eq!(field(&out, "count"), brute_force_count_sat(&or).unwrap().to_string());
}

#[test]
fn ilp_matches_brute_force() {
    let dir = TempDir::new().unwrap();
    let mut rng = stream(3, "cli-ilp", 0);
    for _ in 0..3 {
        let inst = random_instance(&mut rng, 10, 3, 100);
        let p = put(&dir, "i.ilp", &serialize_ilp(&inst));
        let out = stdout(&accthr(&["ilp", "--instance", s(&p), "--k", "2"]));
        match brute_force_optimum(&inst) {
            None => assert_eq!(field(&out, "status"), "infeasible"),
            Some(v) => {
                assert_eq!(field(&out, "value"), v.map_or("none".into(), |v| v.to_string()));
                let w: Vec<bool> = field(&out, "witness").chars().map(|c| c == '1').collect();
                assert!(inst.satisfies(&w));
            }
        }
        assert_eq!(field(&out, "repeats"), "25");
    }
}

#[test]
fn thr2_matches_oracle() {
    let dir = TempDir::new().unwrap();
    let mut rng = stream(4, "cli-thr2", 0);
    let c = random_thrthr(&mut rng, 10, 6, 24, 1);
    let zs = |rng: &mut accthr::rng::Rng| (0..20).map(|_| (0..5).map(|_| rng.gen()).collect()).collect::<Vec<Vec<bool>>>();
    let rect = RectInput::new(5, zs(&mut rng), zs(&mut rng)).unwrap();
    let (pc, pa, pb) = (put_circuit(&dir, "c.ckt", &c), put(&dir, "a.txt", &format_bitstrings(&rect.a)), put(&dir, "b.txt", &format_bitstrings(&rect.b)));
    let out = dir.path().join("m.bin");
    stdout(&accthr(&["thr2", "--circuit", s(&pc), "--a", s(&pa), "--b", s(&pb), "--out", s(&out), "--s", "4"]));
    let (m, k) = BitMatrix::from_bytes(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(k, 5);
    assert_eq!(m, brute_force_rectangle(&c, &rect).unwrap());
}

#[test]
fn mm_coppersmith_matches_naive() {
    let dir = TempDir::new().unwrap();
    let f = PrimeField::new(1_000_003).unwrap();
    let mut rng = stream(5, "cli-mm", 0);
    let a = put(&dir, "a.mat", &FieldMatrix::random(64, 2, &f, &mut rng).to_text());
    let b = put(&dir, "b.mat", &FieldMatrix::random(2, 64, &f, &mut rng).to_text());
    let (c1, c2) = (dir.path().join("c1.mat"), dir.path().join("c2.mat"));
    let out = stdout(&accthr(&["mm", "--a", s(&a), "--b", s(&b), "--mode", "coppersmith", "--out", s(&c1), "--count-ops"]));
    assert_eq!(field(&out, "fallback"), "false");
    assert!(field(&out, "core_mults").parse::<u64>().unwrap() > 0);
    assert_eq!(field(&out, "naive_mults"), "8192");
    stdout(&accthr(&["mm", "--a", s(&a), "--b", s(&b), "--mode", "naive", "--out", s(&c2)]));
    assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());
}

#[test]
fn selfcheck_and_fault_injection() {
    let ok = accthr(&["selfcheck"]);
    let text = stdout(&ok);
    assert_eq!(text.lines().filter(|l| l.ends_with("status=pass")).count(), 7);
    assert_eq!(field(&text, "failed"), "0");
    let again = accthr(&["selfcheck"]);
    assert_eq!(ok.stdout, again.stdout);

    let bad = accthr(&["selfcheck", "--inject-fault", "symrank"]);
    assert!(!bad.status.success());
    let text = String::from_utf8(bad.stdout).unwrap();
    assert!(text.contains("check=symrank status=fail"));
    assert!(text.contains("check=depth2 status=pass"));
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let mut rng = stream(6, "cli-det", 0);
    let c = random_depth2(&mut rng, &Depth2Config::new(10, 3, TopKind::Or, BottomKind::Thr));
    let p = put_circuit(&dir, "c.ckt", &c);
    let run = |seed: &str| accthr(&["count-sat", "--circuit", s(&p), "--path", "randomized", "--seed", seed]).stdout;
    assert_eq!(run("11"), run("11"));
    let inst = random_instance(&mut rng, 8, 3, 50);
    let q = put(&dir, "i.ilp", &serialize_ilp(&inst));
    let run = || accthr(&["ilp", "--instance", s(&q)]).stdout;
    assert_eq!(run(), run());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(accthr(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(accthr(&["eval-all"]).status.code(), Some(2));
    let missing = dir.path().join("missing.ckt");
    assert_eq!(accthr(&["eval-all", "--circuit", s(&missing)]).status.code(), Some(3));
    let bad = put(&dir, "bad.ckt", "inputs 2\ngate g FROB x1\noutput g\n");
    assert_eq!(accthr(&["eval-all", "--circuit", s(&bad)]).status.code(), Some(3));
    let mut rng = stream(7, "cli-exit", 0);
    let c = put_circuit(&dir, "c.ckt", &random_symsym(&mut rng, 10, 60));
    let capped = accthr(&["eval-all", "--circuit", s(&c), "--caps", "rank=1", "--no-fallback"]);
    assert_eq!(capped.status.code(), Some(4));
    let fell = stdout(&accthr(&["eval-all", "--circuit", s(&c), "--caps", "rank=1"]));
    assert_eq!(field(&fell, "fallback"), "true");
    let env = Command::new(env!("CARGO_BIN_EXE_accthr"))
        .args(["eval-all", "--circuit", s(&c), "--method", "oracle"])
        .env("ACCTHR_CAPS", "oracle-n=4")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(4));
}
