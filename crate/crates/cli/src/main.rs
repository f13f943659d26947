mod cache;

use cache::{write_atomic, Cache};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qehrhart_core::equivariant::{self, CharacterTable, Group};
use qehrhart_core::kernel::{SearchBounds, TDegBound};
use qehrhart_core::modp::{beta_bound, closure_check_modp};
use qehrhart_core::par::{self, Exec};
use qehrhart_core::polytope::{PolytopeJson, PosetJson};
use qehrhart_core::qehrhart::{default_bounds, reciprocity_check, QEhrhartRecord};
use qehrhart_core::suites::{self, Corpus, SuiteReport, TableConfig};
use qehrhart_core::{LatticePolytope, PointLocus, Poset, QPoly};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qehrhart", version, about = "Exact q-Ehrhart series of lattice polytopes")]
struct Cli {
    #[command(flatten)]
    cfg: Config,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Config {
    /// Truncation order T of every series
    #[arg(long, global = true, default_value_t = 10)]
    max_t: usize,
    /// Largest dilate M for per-dilate checks [default: 3]
    #[arg(long, global = true)]
    max_m: Option<usize>,
    #[arg(long, global = true)]
    den_b_max: Option<u32>,
    #[arg(long, global = true)]
    den_a_max: Option<u32>,
    #[arg(long, global = true)]
    nu_max: Option<usize>,
    /// Numerator t-degree slack over the denominator
    #[arg(long, global = true)]
    t_deg_max: Option<usize>,
    /// Primes for the modular suites (repeatable)
    #[arg(long = "prime", global = true)]
    primes: Vec<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 1 runs sequentially
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Cache directory (defaults to $QEHRHART_CACHE)
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Write the JSON result here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Trials for randomized suites
    #[arg(long, global = true)]
    trials: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Series E and Ē of a polytope to order T
    Compute { polytope: PathBuf },
    /// Interior series Ē only
    Interior { polytope: PathBuf },
    /// Series plus rational forms found by denominator search
    Guess { polytope: PathBuf },
    /// Reproduce a built-in golden table
    Table { corpus: Corpus },
    /// Run a property suite
    Verify { what: Suite },
    /// Graded characters under a symmetry group
    Equivariant {
        polytope: PathBuf,
        /// Group JSON file, or one of negation, symmetric, signs
        #[arg(long)]
        group: String,
        /// Character table JSON file, or one of trivial, s2, s3, z2
        #[arg(long)]
        table: Option<String>,
    },
    #[command(subcommand)]
    Poset(PosetCmd),
    #[command(subcommand)]
    Modp(ModpCmd),
}

#[derive(Subcommand)]
enum PosetCmd {
    /// q-Ehrhart record of the order polytope
    Order { poset: PathBuf },
    /// q-Ehrhart record of the chain polytope
    Chain { poset: PathBuf },
    /// Stanley's transfer map applied to a point of an order polytope dilate
    Transfer {
        poset: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<i64>,
    },
}

#[derive(Subcommand)]
enum ModpCmd {
    /// V_Z · V_W ⊆ V_{Z+W} over each prime
    Closure { z: PathBuf, w: PathBuf },
    /// Lower bound on |Z + W| over F_p
    Beta {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        r2: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Closure,
    Identities,
    Chainorder,
    Modp,
    Equivariant,
    Classical,
    Oracle,
}

#[derive(Serialize, Deserialize)]
struct LocusJson {
    n: usize,
    points: Vec<Vec<i64>>,
}

enum Failure {
    /// Mismatch or failed property.
    Mismatch(String),
    /// Unreadable or invalid input.
    Input(String),
    /// Failed internal invariant.
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

/// Output plus an optional failure to report after it is written.
struct Outcome {
    value: Value,
    failure: Option<Failure>,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, failure: None }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_polytope(path: &Path) -> Result<(String, LatticePolytope), Failure> {
    let j: PolytopeJson = read_json(path)?;
    let p = LatticePolytope::from_json(&j).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((j.name, p))
}

fn read_poset(path: &Path) -> Result<Poset, Failure> {
    let j: PosetJson = read_json(path)?;
    Poset::from_json(&j).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_locus(path: &Path) -> Result<PointLocus, Failure> {
    let j: LocusJson = read_json(path)?;
    if let Some(p) = j.points.iter().find(|p| p.len() != j.n) {
        return Err(Failure::Input(format!("{}: point {p:?} is not in dimension {}", path.display(), j.n)));
    }
    Ok(PointLocus::new(j.n, j.points))
}

fn poly_strings(p: &QPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

impl Config {
    fn validate(&self) -> Result<(), Failure> {
        if let Some(m) = self.max_m.filter(|&m| m > self.max_t) {
            return Err(Failure::Input(format!("--max-t {} is smaller than --max-m {m}", self.max_t)));
        }
        if let Some(p) = self.primes.iter().find(|&&p| !qehrhart_core::modp::is_prime(p)) {
            return Err(Failure::Input(format!("--prime {p} is not prime")));
        }
        if self.jobs == Some(0) {
            return Err(Failure::Input("--jobs must be at least 1".into()));
        }
        Ok(())
    }

    fn exec(&self) -> Exec {
        if self.jobs == Some(1) {
            Exec::Sequential
        } else {
            Exec::default()
        }
    }

    fn primes(&self) -> Vec<u64> {
        if self.primes.is_empty() {
            vec![2, 3, 5]
        } else {
            self.primes.clone()
        }
    }

    /// Flag overrides on top of `base`.
    fn bounds(&self, base: SearchBounds) -> SearchBounds {
        SearchBounds {
            b_max: self.den_b_max.unwrap_or(base.b_max),
            a_max: self.den_a_max.unwrap_or(base.a_max),
            nu_max: self.nu_max.unwrap_or(base.nu_max),
            t_deg: self.t_deg_max.map_or(base.t_deg, TDegBound::OverDenominator),
        }
    }
}

fn bounds_json(b: &SearchBounds) -> Value {
    let t_deg = match b.t_deg {
        TDegBound::Absolute(k) => json!({"absolute": k}),
        TDegBound::OverDenominator(k) => json!({"overDenominator": k}),
    };
    json!({"bMax": b.b_max, "aMax": b.a_max, "nuMax": b.nu_max, "tDeg": t_deg})
}

/// Serve from the cache when possible, otherwise compute and store.
fn cached(cache: Option<&Cache>, request: Value, f: impl FnOnce() -> Result<Value, Failure>) -> Result<Value, Failure> {
    if let Some(v) = cache.and_then(|c| c.get(&request)) {
        return Ok(v);
    }
    let v = f()?;
    if let Some(c) = cache {
        c.put(&request, &v).map_err(|e| Failure::Internal(format!("cache write failed: {e}")))?;
    }
    Ok(v)
}

/// `E(t, 1)` must count lattice points of every dilate.
fn check_counts(p: &LatticePolytope, rec: &QEhrhartRecord) -> Result<(), Failure> {
    for (m, c) in rec.series().at_q1().iter().enumerate() {
        let n = p.lattice_points(m).len();
        if *c != n.into() {
            return Err(Failure::Internal(format!("i_P({m}; 1) = {c} but the dilate has {n} lattice points")));
        }
    }
    for (m, c) in rec.series_bar().at_q1().iter().enumerate().skip(1) {
        let n = p.interior_lattice_points(m).len();
        if *c != n.into() {
            return Err(Failure::Internal(format!("interior i_P({m}; 1) = {c} but the dilate has {n} interior points")));
        }
    }
    Ok(())
}

fn record(cfg: &Config, cache: Option<&Cache>, name: &str, p: &LatticePolytope, guess: bool) -> Result<Value, Failure> {
    let bounds = guess.then(|| cfg.bounds(default_bounds(p)));
    let request = json!({
        "cmd": if guess { "guess" } else { "compute" },
        "vertices": p.vertices(),
        "name": name,
        "T": cfg.max_t,
        "bounds": bounds.as_ref().map(bounds_json),
    });
    cached(cache, request, || {
        let rec = QEhrhartRecord::compute(p, name, cfg.max_t, bounds.as_ref());
        check_counts(p, &rec)?;
        serde_json::to_value(&rec).map_err(|e| Failure::Internal(e.to_string()))
    })
}

fn cmd_guess(cfg: &Config, cache: Option<&Cache>, name: &str, p: &LatticePolytope) -> Result<Outcome, Failure> {
    let value = record(cfg, cache, name, p, true)?;
    let rec: QEhrhartRecord = serde_json::from_value(value.clone()).map_err(|e| Failure::Internal(e.to_string()))?;
    let failure = match (rec.guessed_e(), rec.guessed_ebar()) {
        (Some(e), Some(eb)) if !reciprocity_check(&e, &eb, p.dim()) => {
            Some(Failure::Internal("guessed forms violate reciprocity".into()))
        }
        (None, _) | (_, None) => Some(Failure::Mismatch("no rational form within the search bounds".into())),
        _ => None,
    };
    Ok(Outcome { value, failure })
}

fn cmd_table(cfg: &Config, corpus: Corpus) -> Outcome {
    let base = TableConfig::standard();
    let tc = TableConfig { order: cfg.max_t, high_dim_order: base.high_dim_order, bounds: base.bounds.map(|b| cfg.bounds(b)), exec: cfg.exec() };
    let report = suites::run_table(corpus, &tc);
    let failure = (!report.passed()).then(|| {
        let lines: Vec<String> = report
            .failures()
            .map(|r| {
                let bad: Vec<&str> = r.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect();
                format!("  {}: failed {}", r.name, bad.join(", "))
            })
            .collect();
        Failure::Mismatch(format!("{corpus}: {} row(s) differ\n{}", lines.len(), lines.join("\n")))
    });
    Outcome { value: serde_json::to_value(&report).expect("json"), failure }
}

fn identities_order(cfg: &Config) -> usize {
    cfg.max_t.min(8)
}

fn cmd_verify(cfg: &Config, what: Suite) -> Outcome {
    let exec = cfg.exec();
    let report: SuiteReport = match what {
        Suite::Closure => suites::closure_suite(cfg.trials.unwrap_or(200), cfg.seed, exec),
        Suite::Modp => suites::closure_modp_suite(cfg.trials.unwrap_or(100), &cfg.primes(), cfg.seed, exec),
        Suite::Oracle => suites::oracle_suite(&suites::random_oracle_loci(cfg.trials.unwrap_or(50), cfg.seed), exec),
        Suite::Identities => suites::identities_suite(identities_order(cfg), exec),
        Suite::Chainorder => suites::chain_order_suite(4, cfg.max_m.unwrap_or(3), 2, exec),
        Suite::Equivariant => suites::equivariant_suite(exec),
        Suite::Classical => suites::classical_suite(exec),
    };
    let failure = (!report.passed()).then(|| Failure::Mismatch(report.to_string()));
    Outcome { value: serde_json::to_value(&report).expect("json"), failure }
}

fn builtin_or_file<T>(
    spec: &str,
    builtin: impl FnOnce(&str) -> Option<T>,
    parse: impl FnOnce(&str) -> Result<T, String>,
) -> Result<T, Failure> {
    if let Some(t) = builtin(spec) {
        return Ok(t);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Failure::Input(format!("{spec}: {e}")))?;
    parse(&text).map_err(|e| Failure::Input(format!("{spec}: {e}")))
}

fn cmd_equivariant(
    cfg: &Config,
    cache: Option<&Cache>,
    p: &LatticePolytope,
    group: &str,
    table: Option<&str>,
) -> Result<Outcome, Failure> {
    let n = p.ambient_dim();
    let g = builtin_or_file(
        group,
        |s| match s {
            "negation" => Some(Group::negation(n)),
            "symmetric" => Some(Group::symmetric(n)),
            "signs" => Some(Group::signs(n)),
            _ => None,
        },
        |t| Group::from_json(t).map_err(|e| e.to_string()),
    )?;
    let table = table
        .map(|s| {
            builtin_or_file(
                s,
                |s| match s {
                    "trivial" => Some(CharacterTable::trivial()),
                    "s2" => Some(CharacterTable::s2()),
                    "s3" => Some(CharacterTable::s3()),
                    "z2" => Some(CharacterTable::z2("-1")),
                    _ => None,
                },
                |t| CharacterTable::from_json(t).map_err(|e| e.to_string()),
            )
        })
        .transpose()?;
    let request = json!({
        "cmd": "equivariant",
        "vertices": p.vertices(),
        "T": cfg.max_t,
        "group": serde_json::from_str::<Value>(&g.to_json()).expect("json"),
        "table": table.as_ref().map(|t| serde_json::from_str::<Value>(&t.to_json()).expect("json")),
    });
    let value = cached(cache, request, || {
        let ch = equivariant::equivariant_series_with(p, &g.elements, cfg.max_t, cfg.exec()).map_err(input)?;
        for el in &g.elements {
            for (m, v) in ch.get(&el.id).expect("element").iter().enumerate() {
                let fixed = equivariant::fixed_points(p, el, m);
                if v.eval_one() != fixed.into() {
                    return Err(Failure::Internal(format!("character of {} at t^{m} disagrees with fixed points", el.id)));
                }
            }
        }
        let chars: serde_json::Map<String, Value> = ch
            .per_element
            .iter()
            .map(|(id, vs)| (id.clone(), json!(vs.iter().map(poly_strings).collect::<Vec<_>>())))
            .collect();
        let mut out = json!({"T": cfg.max_t, "characters": chars});
        if let Some(t) = &table {
            let mut mult = Vec::new();
            for m in 0..=cfg.max_t {
                let vals = equivariant::class_values(&ch, t, m).map_err(input)?;
                let d = equivariant::decompose(&vals, t).map_err(|e| Failure::Internal(e.to_string()))?;
                let row: serde_json::Map<String, Value> =
                    t.irreducibles.iter().zip(&d).map(|(irr, q)| (irr.name.clone(), json!(poly_strings(q)))).collect();
                mult.push(Value::Object(row));
            }
            out["multiplicities"] = Value::Array(mult);
        }
        Ok(out)
    })?;
    Ok(Outcome::ok(value))
}

fn cmd_modp(cfg: &Config, cmd: &ModpCmd) -> Result<Outcome, Failure> {
    match cmd {
        ModpCmd::Closure { z, w } => {
            let (z, w) = (read_locus(z)?, read_locus(w)?);
            if z.ambient_dim() != w.ambient_dim() {
                return Err(Failure::Input("loci live in different dimensions".into()));
            }
            let mut rows = Vec::new();
            let mut bad = Vec::new();
            for p in cfg.primes() {
                let rep = closure_check_modp(&z, &w, p).map_err(input)?;
                let witness = rep.witness.as_ref().map(|(f, g, h)| json!([f.to_string(), g.to_string(), h.to_string()]));
                if !rep.holds {
                    bad.push(p.to_string());
                }
                rows.push(json!({"p": p, "holds": rep.holds, "witness": witness}));
            }
            let failure = (!bad.is_empty()).then(|| Failure::Mismatch(format!("closure fails for p = {}", bad.join(", "))));
            Ok(Outcome { value: Value::Array(rows), failure })
        }
        ModpCmd::Beta { r, r2 } => {
            if *r == 0 || *r2 == 0 {
                return Err(Failure::Input("--r and --r2 must be at least 1".into()));
            }
            let rows: Vec<Value> =
                cfg.primes().into_iter().map(|p| json!({"p": p, "beta": beta_bound(*r, *r2, p)})).collect();
            Ok(Outcome::ok(Value::Array(rows)))
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let cfg = &cli.cfg;
    cfg.validate()?;
    if let Some(j) = cfg.jobs {
        par::set_jobs(j);
    }
    let cache = Cache::from_config(cfg.cache.as_deref());
    let cache = cache.as_ref();
    match &cli.cmd {
        Cmd::Compute { polytope } => {
            let (name, p) = read_polytope(polytope)?;
            Ok(Outcome::ok(record(cfg, cache, &name, &p, false)?))
        }
        Cmd::Interior { polytope } => {
            let (name, p) = read_polytope(polytope)?;
            let v = record(cfg, cache, &name, &p, false)?;
            Ok(Outcome::ok(json!({"polytope": v["polytope"], "T": v["T"], "iqInterior": v["iqInterior"]})))
        }
        Cmd::Guess { polytope } => {
            let (name, p) = read_polytope(polytope)?;
            cmd_guess(cfg, cache, &name, &p)
        }
        Cmd::Table { corpus } => Ok(cmd_table(cfg, *corpus)),
        Cmd::Verify { what } => Ok(cmd_verify(cfg, *what)),
        Cmd::Equivariant { polytope, group, table } => {
            let (_, p) = read_polytope(polytope)?;
            cmd_equivariant(cfg, cache, &p, group, table.as_deref())
        }
        Cmd::Poset(PosetCmd::Order { poset }) => {
            let p = read_poset(poset)?.order_polytope();
            Ok(Outcome::ok(record(cfg, cache, "order polytope", &p, false)?))
        }
        Cmd::Poset(PosetCmd::Chain { poset }) => {
            let p = read_poset(poset)?.chain_polytope();
            Ok(Outcome::ok(record(cfg, cache, "chain polytope", &p, false)?))
        }
        Cmd::Poset(PosetCmd::Transfer { poset, point }) => {
            let poset = read_poset(poset)?;
            if point.len() != poset.len() {
                return Err(Failure::Input(format!("point has {} coordinates, poset has {}", point.len(), poset.len())));
            }
            let image = poset.stanley_transfer(point).map_err(input)?;
            Ok(Outcome::ok(json!({"point": point, "image": image})))
        }
        Cmd::Modp(m) => cmd_modp(cfg, m),
    }
}

fn emit(out: Option<&Path>, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("json") + "\n";
    match out {
        Some(path) => write_atomic(path, &text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|o| {
        emit(cli.cfg.out.as_deref(), &o.value)?;
        o.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn t_below_m_rejected() {
        let cli = Cli::try_parse_from(["qehrhart", "--max-t", "2", "--max-m", "3", "verify", "classical"]).unwrap();
        assert_eq!(cli.cfg.validate().err().map(|f| f.code()), Some(2));
    }

    #[test]
    fn flags_override_bounds() {
        let cli = Cli::try_parse_from(["qehrhart", "table", "fig1", "--den-b-max", "3"]).unwrap();
        let b = cli.cfg.bounds(SearchBounds::new(1, 1, 1, 1));
        assert_eq!((b.b_max, b.a_max), (3, 1));
    }
}
