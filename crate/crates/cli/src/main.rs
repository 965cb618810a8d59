//! `metahecke` command-line front end.
//!
//! Exit codes: 0 success, 1 other error or failed check, 2 closure cap exceeded,
//! 3 non-unique eigenvector, 4 normalization failure, 5 weight not dominant,
//! 6 fixture mismatch.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use metahecke::checks::{run_daha_suite, run_root_suite, CheckOptions, CheckReport, Suite, DEFAULT_SEED, DEFAULT_TRIALS};
use metahecke::daha_gl::{e_poly, GLMetaData, GlRep, SolverOptions, DEFAULT_CLOSURE_CAP};
use metahecke::finite_hecke::Rep;
use metahecke::fixtures::{compare, gl3_table, load, Fixture, TableReport};
use metahecke::grouplalg::Laurent;
use metahecke::parse::parse_weight;
use metahecke::render::{reduce, render, to_json, to_latex, Format};
use metahecke::roots::{Lattice, MetaRootSystem};
use metahecke::scalars::{set_simplify_level, Scalar, SimplifyLevel};
use metahecke::weight::Weight;
use metahecke::Error;

#[derive(Parser, Debug)]
#[command(name = "metahecke", version, about = "Metaplectic Hecke algebra representations and GL_r metaplectic polynomials")]
struct Cli {
    #[command(flatten)]
    cfg: Config,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
struct Config {
    /// Cartan type for root-system commands, e.g. A2, B2, G2
    #[arg(long = "type", global = true, default_value = "A1")]
    cartan: String,
    /// Rank of GL_r for epoly, table and the daha suite
    #[arg(long, global = true, default_value_t = 3)]
    r: usize,
    #[arg(long, global = true, default_value_t = 1)]
    n: u32,
    #[arg(long, global = true, default_value_t = 1)]
    kappa: u32,
    /// Sign ε in {+1, -1}, used for both length classes unless overridden
    #[arg(long, global = true, default_value = "+1", allow_hyphen_values = true, value_parser = parse_sign)]
    epsilon: i8,
    #[arg(long = "epsilon-sh", global = true, allow_hyphen_values = true, value_parser = parse_sign)]
    epsilon_sh: Option<i8>,
    #[arg(long = "epsilon-lg", global = true, allow_hyphen_values = true, value_parser = parse_sign)]
    epsilon_lg: Option<i8>,
    /// weight (P) or root (Q)
    #[arg(long, global = true, default_value = "weight", value_parser = |s: &str| s.parse::<Lattice>().map_err(|e| e.to_string()))]
    lattice: Lattice,
    /// Intermediate simplification: none, content or gcd; output is always fully reduced
    #[arg(long, global = true, default_value = "content", value_parser = parse_simplify)]
    simplify: SimplifyLevel,
    /// Maximum number of monomials in the eigenvector support closure
    #[arg(long, global = true, default_value_t = DEFAULT_CLOSURE_CAP)]
    cap: usize,
    /// Total-degree bound for the daha suite
    #[arg(long, global = true, default_value_t = 2)]
    degree: i32,
    #[arg(long, global = true, default_value = "plain", value_parser = |s: &str| s.parse::<Format>().map_err(|e| e.to_string()))]
    format: Format,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random specializations tried before any symbolic run
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Also run checks symbolically after the random pre-screen
    #[arg(long, global = true)]
    symbolic: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Metaplectic polynomial E_mu for GL_r
    Epoly {
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// Recompute the GL_3 table for m = 1..5 and compare with the fixtures
    Table {
        /// Alternative fixture file in `m|mu|polynomial` format
        #[arg(long)]
        fixtures: Option<String>,
    },
    /// Run an invariant suite: sigma-braid, dl-hecke, daha, localization, scaffold
    Check {
        #[arg(value_parser = |s: &str| s.parse::<Suite>().map_err(|e| e.to_string()))]
        suite: Suite,
    },
    /// Whittaker sum for a dominant weight, given in fundamental-weight coordinates
    Whittaker {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Output the symmetrization tau(1_+) x^lambda instead
        #[arg(long)]
        symmetric: bool,
    },
}

fn parse_sign(s: &str) -> Result<i8, String> {
    match s {
        "1" | "+1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        _ => Err(format!("epsilon must be +1 or -1, got {s}")),
    }
}

fn parse_simplify(s: &str) -> Result<SimplifyLevel, String> {
    match s {
        "none" => Ok(SimplifyLevel::None),
        "content" => Ok(SimplifyLevel::Content),
        "gcd" => Ok(SimplifyLevel::Gcd),
        _ => Err(format!("unknown simplification level {s}")),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ClosureCapExceeded { .. } => 2,
        Error::NonUniqueEigenvector { .. } => 3,
        Error::NormalizationFailure => 4,
        Error::NotDominant(_) => 5,
        Error::FixtureMismatch { .. } => 6,
        _ => 1,
    }
}

impl Config {
    fn eps_sh(&self) -> i8 {
        self.epsilon_sh.unwrap_or(self.epsilon)
    }

    fn eps_lg(&self) -> i8 {
        self.epsilon_lg.unwrap_or(self.epsilon)
    }

    fn params_json(&self) -> Value {
        json!({"n": self.n, "kappa": self.kappa, "eps_sh": self.eps_sh(), "eps_lg": self.eps_lg()})
    }

    fn root_system(&self) -> metahecke::Result<MetaRootSystem> {
        MetaRootSystem::from_str_type(&self.cartan, self.n, self.kappa, self.lattice)
    }
}

fn emit_poly(cfg: &Config, command: &str, input: Value, f: &Laurent<Scalar>) -> String {
    let f = reduce(f);
    match cfg.format {
        Format::Json => json!({
            "command": command,
            "params": cfg.params_json(),
            "input": input,
            "rank": f.rank(),
            "poly": to_json(&f),
        })
        .to_string(),
        fmt => render(&f, fmt),
    }
}

fn cmd_epoly(cfg: &Config, mu: &str) -> metahecke::Result<String> {
    let mu = parse_weight(mu)?;
    if mu.len() != cfg.r {
        return Err(Error::InvalidConfig(format!("mu has {} coordinates, expected r = {}", mu.len(), cfg.r)));
    }
    let data = GLMetaData::new(cfg.r, cfg.n, cfg.kappa as i64, cfg.epsilon)?;
    let p = data.params();
    let e = e_poly(&GlRep::new(&data, &p), &mu, SolverOptions { cap: cfg.cap })?;
    Ok(emit_poly(cfg, "epoly", json!({"r": cfg.r, "mu": mu.coords(), "m": data.m}), &e))
}

fn table_latex(fixtures: &[Fixture], rep: &TableReport) -> String {
    let mut out = String::new();
    let mut last: Option<Weight> = None;
    for (f, p) in fixtures.iter().zip(&rep.polys) {
        if last.is_some_and(|l| l != f.mu) {
            out.push_str("\n\\bigskip\n\n");
        }
        last = Some(f.mu);
        let body = p.as_ref().map(|p| to_latex(&reduce(p))).unwrap_or_else(|| "\\text{(error)}".into());
        let mu: Vec<String> = f.mu.coords().iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("$E_{{({})}}^{{({})}}(x) = {body}$\n\n", mu.join(","), f.m));
    }
    out
}

fn cmd_table(cfg: &Config, path: Option<&str>) -> (String, Option<Error>) {
    let fixtures = match path {
        None => gl3_table(),
        Some(p) => match std::fs::read_to_string(p).map_err(|e| Error::InvalidConfig(format!("{p}: {e}"))).and_then(|t| load(&t)) {
            Ok(f) => f,
            Err(e) => return (String::new(), Some(e)),
        },
    };
    let rep = compare(&fixtures, cfg.epsilon, SolverOptions { cap: cfg.cap });
    let summary = format!("{}/{} entries match", rep.matched, rep.total);
    let text = match cfg.format {
        Format::Json => {
            let entries: Vec<Value> = rep
                .entries
                .iter()
                .zip(&rep.polys)
                .map(|(e, p)| {
                    json!({
                        "m": e.m,
                        "mu": e.mu,
                        "matched": e.matched,
                        "poly": p.as_ref().map(|p| to_json(&reduce(p))),
                        "expected": e.expected,
                        "error": e.error,
                    })
                })
                .collect();
            json!({"command": "table", "eps": rep.eps, "total": rep.total, "matched": rep.matched, "entries": entries})
                .to_string()
        }
        Format::Latex => format!("% {summary}\n{}", table_latex(&fixtures, &rep)),
        Format::Plain => {
            let mut s = String::new();
            for (e, p) in rep.entries.iter().zip(&rep.polys) {
                let mark = if e.matched { "ok" } else { "MISMATCH" };
                let body = p.as_ref().map(|p| reduce(p).to_string()).or(e.error.clone()).unwrap_or_default();
                let mu: Vec<String> = e.mu.iter().map(|c| c.to_string()).collect();
                s.push_str(&format!("[{mark}] E^({})_({}) = {body}\n", e.m, mu.join(",")));
                if !e.matched {
                    s.push_str(&format!("         expected {}\n", e.expected));
                }
            }
            s.push_str(&summary);
            s
        }
    };
    (text, rep.mismatch_error())
}

fn cmd_check(cfg: &Config, suite: Suite) -> metahecke::Result<CheckReport> {
    let opts = CheckOptions { seed: cfg.seed, trials: cfg.trials, symbolic: cfg.symbolic, degree: cfg.degree };
    if suite == Suite::Daha {
        let data = GLMetaData::new(cfg.r, cfg.n, cfg.kappa as i64, cfg.epsilon)?;
        return Ok(run_daha_suite(&data, &opts));
    }
    let sys = cfg.root_system()?;
    let field = sys.ground_field(cfg.eps_sh(), cfg.eps_lg())?;
    Ok(run_root_suite(suite, &sys, &field, &opts))
}

fn render_check(cfg: &Config, rep: &CheckReport) -> String {
    if cfg.format == Format::Json {
        return serde_json::to_string(rep).expect("report serializes");
    }
    let mut s = format!("{} [{}]\n", rep.suite.name(), rep.config);
    for r in &rep.runs {
        let tag = if r.passed { "pass" } else { "FAIL" };
        s.push_str(&format!("  {tag} {} ({} relations): {}\n", r.mode, r.checked, r.params));
        for f in r.failures.iter().take(20) {
            s.push_str(&format!("    {} at {}\n", f.relation, f.basis));
        }
    }
    s.push_str(if rep.passed { "pass" } else { "FAIL" });
    s
}

fn cmd_whittaker(cfg: &Config, lambda: &str, symmetric: bool) -> metahecke::Result<String> {
    let lam = parse_weight(lambda)?;
    let sys = cfg.root_system()?;
    if lam.len() != sys.rank {
        return Err(Error::InvalidConfig(format!("lambda has {} coordinates, rank is {}", lam.len(), sys.rank)));
    }
    let p = sys.ground_field(cfg.eps_sh(), cfg.eps_lg())?.params();
    let rep = Rep::new(&sys, &p);
    let group = sys.weyl_group()?;
    let f = if symmetric { rep.symmetric_hl(&group, &lam)? } else { rep.whittaker(&group, &lam)? };
    let name = if symmetric { "whittaker-symmetric" } else { "whittaker" };
    Ok(emit_poly(cfg, name, json!({"type": cfg.cartan, "lambda": lam.coords()}), &f))
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.cfg;
    set_simplify_level(cfg.simplify);
    let out = match &cli.cmd {
        Command::Epoly { mu } => cmd_epoly(&cfg, mu),
        Command::Whittaker { lambda, symmetric } => cmd_whittaker(&cfg, lambda, *symmetric),
        Command::Table { fixtures } => {
            let (text, err) = cmd_table(&cfg, fixtures.as_deref());
            if !text.is_empty() {
                println!("{text}");
            }
            return match err {
                Some(e) => fail(&e),
                None => ExitCode::SUCCESS,
            };
        }
        Command::Check { suite } => match cmd_check(&cfg, *suite) {
            Ok(rep) => {
                println!("{}", render_check(&cfg, &rep));
                return if rep.passed { ExitCode::SUCCESS } else { ExitCode::from(1) };
            }
            Err(e) => Err(e),
        },
    };
    match out {
        Ok(s) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
