use accthr::caps::Caps;
use accthr::circuit::{parse_circuit, Circuit};
use accthr::depth2::{eval_symthr_rectangle, eval_thrthr_rectangle, parse_bitstrings, Depth2Params, MmMode, RectInput};
use accthr::evaluator::{
    antiequiv_via_count, count_sat_split, count_sat_split_randomized, default_ell, equiv_via_count, eval_all, EvalPlan,
    DEFAULT_REPEATS,
};
use accthr::ilp::{optimize, parse_ilp, IlpSolveParams};
use accthr::rectmm::{coppersmith_rect_mm, naive_mm, CoppersmithParams, FieldMatrix, MAX_ALPHA};
use accthr::rng::{effective_seed, stream};
use accthr::{Error, PrimeField};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod selfcheck;

/// Batch evaluation, counting and equivalence for SYM/THR circuits.
#[derive(Parser)]
#[command(name = "accthr", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Global {
    /// Seed for every randomized step; 0 selects the fixed default seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for exhaustive evaluation.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Cap overrides `key=value,...` (oracle-n, rank, monomials, weight, copies),
    /// applied on top of ACCTHR_CAPS.
    #[arg(long, global = true)]
    caps: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Truth table of a circuit on all 2^n inputs.
    EvalAll {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// oracle | symrank | coppersmith | direct
        #[arg(long, default_value = "symrank")]
        method: String,
        /// Fail instead of falling back when a rank or shape cap is hit.
        #[arg(long)]
        no_fallback: bool,
    },
    /// Number of satisfying assignments.
    CountSat {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, default_value = "symrank")]
        method: String,
        #[arg(long, value_enum, default_value_t = CountPath::Auto)]
        path: CountPath,
        #[arg(long, default_value_t = DEFAULT_REPEATS)]
        repeats: usize,
    },
    /// Decides G ≡ H (or G ≡ ¬H with --anti) from satisfying-assignment counts.
    Equiv {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        anti: bool,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, default_value = "symrank")]
        method: String,
    },
    /// Maximizes a 0-1 integer linear program.
    Ilp {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_REPEATS)]
        repeats: usize,
    },
    /// Evaluates a depth-two threshold circuit on A × B.
    Thr2 {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Bucket capacity.
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, default_value = "naive")]
        mm: String,
    },
    /// Matrix product over the prime field of the inputs.
    Mm {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value = "naive")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        count_ops: bool,
        /// Recursion level of the rectangular engine.
        #[arg(long, default_value_t = 5)]
        level: usize,
    },
    /// Runs the built-in oracle checks.
    Selfcheck {
        /// Test hook: corrupt one module's intermediate result.
        #[arg(long)]
        inject_fault: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CountPath {
    /// Deterministic when the shape allows, randomized otherwise.
    Auto,
    Deterministic,
    Randomized,
    Oracle,
}

/// Failure with its exit status.
struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = if e.is_cap() { 4 } else { 3 };
        Fail { code, msg: e.to_string() }
    }
}

type Res<T> = Result<T, Fail>;

fn input_err(msg: impl Display) -> Fail {
    Fail { code: 3, msg: msg.to_string() }
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Res<()> {
    std::fs::write(path, bytes).map_err(|e| Fail { code: 1, msg: format!("{}: {e}", path.display()) })
}

fn load_circuit(path: &Path) -> Res<Circuit> {
    parse_circuit(&read(path)?).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

/// `key=value` pairs on one line.
struct Summary(Vec<(String, String)>);

impl Summary {
    fn new(cmd: &str) -> Self {
        Summary(vec![("command".into(), cmd.into())])
    }

    fn kv(&mut self, k: &str, v: impl Display) -> &mut Self {
        self.0.push((k.into(), v.to_string()));
        self
    }

    fn opt(&mut self, k: &str, v: Option<impl Display>) -> &mut Self {
        match v {
            Some(v) => self.kv(k, v),
            None => self.kv(k, "none"),
        }
    }

    fn print(&self) {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("{}", parts.join(" "));
    }
}

fn caps(g: &Global) -> Res<Caps> {
    let mut caps = Caps::from_env();
    if let Some(s) = &g.caps {
        caps.apply(s)?;
    }
    Ok(caps)
}

fn plan(g: &Global, method: &str) -> Res<EvalPlan> {
    let mut p = EvalPlan::new(method.parse()?);
    p.caps = caps(g)?;
    p.threads = g.threads.max(1);
    Ok(p)
}

fn pick_ell(c: &Circuit, ell: Option<usize>) -> usize {
    ell.unwrap_or_else(|| default_ell(c.n()))
}

fn run(cli: Cli) -> Res<()> {
    let g = &cli.global;
    let seed = effective_seed(g.seed);
    match cli.cmd {
        Cmd::EvalAll { circuit, out, method, no_fallback } => {
            let c = load_circuit(&circuit)?;
            let mut p = plan(g, &method)?;
            p.fallback = !no_fallback;
            let o = eval_all(&c, &p)?;
            if let Some(out) = out {
                write(&out, &o.table.to_bytes())?;
            }
            Summary::new("eval-all")
                .kv("n", c.n())
                .kv("method", o.method)
                .opt("rank", o.rank)
                .kv("fallback", o.fell_back)
                .opt("base_mults", o.base_mults)
                .kv("ones", o.table.count_ones())
                .print();
        }
        Cmd::CountSat { circuit, ell, method, path, repeats } => {
            let c = load_circuit(&circuit)?;
            let p = plan(g, &method)?;
            let mut s = Summary::new("count-sat");
            s.kv("n", c.n());
            let randomized = |ell| {
                let mut rng = stream(seed, "count-sat", 0);
                count_sat_split_randomized(&c, ell, &p, repeats, &mut rng)
            };
            let (count, used, ell) = match path {
                CountPath::Oracle => (accthr::circuit::brute_force_count_sat(&c)?, "oracle", None),
                CountPath::Deterministic => {
                    let ell = pick_ell(&c, ell);
                    (count_sat_split(&c, ell, &p)?.count, "deterministic", Some(ell))
                }
                CountPath::Randomized => {
                    let ell = pick_ell(&c, ell);
                    (randomized(ell)?.count, "randomized", Some(ell))
                }
                CountPath::Auto => {
                    let ell = pick_ell(&c, ell);
                    match count_sat_split(&c, ell, &p) {
                        Ok(o) => (o.count, "deterministic", Some(ell)),
                        Err(Error::Shape(_)) => (randomized(ell)?.count, "randomized", Some(ell)),
                        Err(e) => return Err(e.into()),
                    }
                }
            };
            s.kv("count", count).kv("path", used).opt("ell", ell);
            if used == "randomized" {
                s.kv("seed", seed).kv("repeats", repeats);
            }
            s.print();
        }
        Cmd::Equiv { a, b, anti, ell, method } => {
            let (ga, gb) = (load_circuit(&a)?, load_circuit(&b)?);
            let p = plan(g, &method)?;
            let ell = pick_ell(&ga, ell);
            let mut s = Summary::new("equiv");
            if anti {
                s.kv("antiequivalent", antiequiv_via_count(&ga, &gb, ell, &p)?);
            } else {
                s.kv("equivalent", equiv_via_count(&ga, &gb, ell, &p)?);
            }
            s.kv("ell", ell).print();
        }
        Cmd::Ilp { instance, k, repeats } => {
            let inst = parse_ilp(&read(&instance)?).map_err(|e| input_err(format!("{}: {e}", instance.display())))?;
            let params = IlpSolveParams { k, repeats, caps: caps(g)? };
            let mut rng = stream(seed, "ilp", 0);
            let r = optimize(&inst, &params, &mut rng)?;
            let bits = |w: &Vec<bool>| w.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
            Summary::new("ilp")
                .kv("status", r.status)
                .opt("value", r.value.as_ref())
                .opt("witness", r.witness.as_ref().map(bits))
                .kv("calls", r.probes.len())
                .kv("k", r.k)
                .kv("seed", seed)
                .kv("repeats", repeats)
                .kv("fallback", r.fell_back)
                .print();
        }
        Cmd::Thr2 { circuit, a, b, out, s, mm } => {
            let c = load_circuit(&circuit)?;
            let za = parse_bitstrings(&read(&a)?)?;
            let zb = parse_bitstrings(&read(&b)?)?;
            let k = c.n() / 2;
            let rect = RectInput::new(k, za, zb)?;
            let params = Depth2Params { s, mm: mm.parse::<MmMode>()?, ..Default::default() };
            let (top, _) = c.top();
            let sym = c.gates()[top].sym_table().is_some();
            let m = if sym { eval_symthr_rectangle(&c, &rect, &params)? } else { eval_thrthr_rectangle(&c, &rect, &params)? };
            if let Some(out) = out {
                write(&out, &m.to_bytes(k))?;
            }
            Summary::new("thr2")
                .kv("n", rect.len())
                .kv("k", k)
                .kv("top", if sym { "sym" } else { "thr" })
                .kv("ones", m.count_ones())
                .print();
        }
        Cmd::Mm { a, b, mode, out, count_ops, level } => {
            let ma = FieldMatrix::parse(&read(&a)?).map_err(|e| input_err(format!("{}: {e}", a.display())))?;
            let mb = FieldMatrix::parse(&read(&b)?).map_err(|e| input_err(format!("{}: {e}", b.display())))?;
            if ma.p() != mb.p() {
                return Err(input_err(format!("moduli differ: {} and {}", ma.p(), mb.p())));
            }
            let f = PrimeField::new(ma.p())?;
            let mut s = Summary::new("mm");
            let z = match mode.as_str() {
                "naive" => {
                    let z = naive_mm(&ma, &mb, &f)?;
                    if count_ops {
                        s.kv("naive_mults", ma.rows() * ma.cols() * mb.cols());
                    }
                    z
                }
                "coppersmith" if ma.cols() as f64 > (ma.rows().max(mb.cols()) as f64).powf(MAX_ALPHA) + 1e-9 => {
                    // outside the engine's shape range
                    s.kv("fallback", true);
                    let z = naive_mm(&ma, &mb, &f)?;
                    if count_ops {
                        s.kv("naive_mults", ma.rows() * ma.cols() * mb.cols());
                    }
                    z
                }
                "coppersmith" => {
                    s.kv("fallback", false);
                    let params = CoppersmithParams { m: level, ..Default::default() };
                    let (z, ops) = coppersmith_rect_mm(&ma, &mb, &f, &params)?;
                    if count_ops {
                        s.kv("core_mults", ops.core).kv("linear_mults", ops.linear).kv("naive_mults", ops.naive);
                    }
                    z
                }
                other => return Err(input_err(format!("unknown mode {other:?}"))),
            };
            if let Some(out) = out {
                write(&out, z.to_text().as_bytes())?;
            }
            s.kv("mode", mode).kv("rows", z.rows()).kv("cols", z.cols()).kv("p", f.p()).print();
        }
        Cmd::Selfcheck { inject_fault } => {
            let results = selfcheck::run(seed, inject_fault.as_deref())?;
            let failed = results.iter().filter(|r| !r.1).count();
            for (name, ok) in &results {
                println!("check={name} status={}", if *ok { "pass" } else { "fail" });
            }
            Summary::new("selfcheck").kv("seed", seed).kv("checks", results.len()).kv("failed", failed).print();
            if failed > 0 {
                return Err(Fail { code: 1, msg: format!("{failed} check(s) failed") });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
