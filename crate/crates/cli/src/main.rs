//! `hypersym`: evaluate 1F1 / Ψ2, run verification suites, list catalogues.
//!
//! Exit codes: 0 success, 1 verification failure or non-convergence,
//! 2 usage or configuration error.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hypersym::hypfun::{
    f11_eval_exact, f11_eval_float, psi2_3var_float, psi2_3var_series, psi2_eval_exact, psi2_eval_float, Params1F1,
    ParamsPsi2, DEFAULT_TERM_CAP,
};
use hypersym::identities::catalogue;
use hypersym::liealg::{build_catalogue, FlowSpec};
use hypersym::suite::{self, Scope};
use hypersym::{Error, ExactScalar, Var};

use config::{Format, RunConfig};

#[derive(Parser)]
#[command(name = "hypersym", version, about = "Exact verification engine for 1F1 and Ψ2 symmetry algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Function {
    F11,
    Psi2,
    Psi2x3,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Identities,
    Actions,
    Recursions,
    Flows,
    Commutators,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Listing {
    Identities,
    Operators,
    Flows,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function exactly (rational partial sum) or in floating point
    Eval {
        #[arg(long = "fn", value_enum)]
        function: Function,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: Option<String>,
        #[arg(long, default_value = "0")]
        x: String,
        #[arg(long, default_value = "0")]
        y: String,
        #[arg(long, default_value = "0")]
        z: String,
        /// Exact rational partial sum up to order `terms` in each variable
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 20)]
        terms: u32,
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_TERM_CAP)]
        term_cap: usize,
    },
    /// Run verification suites and write JSON / Markdown reports
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        scope: ScopeArg,
        /// Flat JSON file with the same keys as the long flags
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Print the identity, operator and flow catalogues
    Catalogue {
        #[arg(value_enum, default_value = "all")]
        what: Listing,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence(_) => Failure::Verification(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn rational(name: &str, s: &str) -> Result<ExactScalar, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(format!("--{name}: {e}")))
}

fn float(name: &str, s: &str) -> Result<f64, Failure> {
    s.parse::<ExactScalar>()
        .map(|r| r.to_f64())
        .or_else(|_| s.parse::<f64>())
        .map_err(|_| Failure::Usage(format!("--{name}: cannot parse {s:?}")))
}

#[allow(clippy::too_many_arguments)]
fn eval(
    function: Function,
    a: &str,
    b: &str,
    c: Option<&str>,
    (x, y, z): (&str, &str, &str),
    exact: bool,
    terms: u32,
    tol: f64,
    term_cap: usize,
) -> Result<(), Failure> {
    let (a, b) = (rational("a", a)?, rational("b", b)?);
    let psi = |c: Option<&str>| -> Result<ParamsPsi2, Failure> {
        let c = c.ok_or_else(|| Failure::Usage("--c is required for psi2".into()))?;
        Ok(ParamsPsi2::new(a.clone(), b.clone(), rational("c", c)?)?)
    };
    if exact {
        let (x, y, z) = (rational("x", x)?, rational("y", y)?, rational("z", z)?);
        let value = match function {
            Function::F11 => f11_eval_exact(&Params1F1::new(a.clone(), b.clone())?, &x, terms),
            Function::Psi2 => psi2_eval_exact(&psi(c)?, &x, &y, terms, terms),
            Function::Psi2x3 => psi2_3var_series(&psi(c)?, terms, terms, terms).eval(&[(Var::X, x), (Var::Y, y), (Var::Z, z)])?,
        };
        println!("{value}");
    } else {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
        }
        let (x, y, z) = (float("x", x)?, float("y", y)?, float("z", z)?);
        let out = match function {
            Function::F11 => f11_eval_float(&Params1F1::new(a.clone(), b.clone())?, x, tol, term_cap)?,
            Function::Psi2 => psi2_eval_float(&psi(c)?, x, y, tol, term_cap)?,
            Function::Psi2x3 => {
                let p = psi(c)?;
                psi2_3var_float(p.a().to_f64(), p.b().to_f64(), p.c().to_f64(), x, y, z, tol, term_cap)?
            }
        };
        println!("{}", out.value);
        eprintln!("terms used: {}", out.terms_used);
    }
    Ok(())
}

fn verify(scope: ScopeArg, config: Option<PathBuf>, flags: RunConfig) -> Result<(), Failure> {
    let base = match &config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let cfg = base.overlay(flags);
    let scope = match scope {
        ScopeArg::Identities => Scope::Identities,
        ScopeArg::Actions => Scope::Actions,
        ScopeArg::Recursions => Scope::Recursions,
        ScopeArg::Flows => Scope::Flows,
        ScopeArg::Commutators => Scope::Commutators,
        ScopeArg::All => Scope::All,
    };
    let settings = cfg.settings(scope)?;
    let report = suite::run(&settings)?;
    let dir = cfg.out_dir();
    std::fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    let write = |name: &str, text: String| -> Result<(), Failure> {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        println!("wrote {}", path.display());
        Ok(())
    };
    if matches!(cfg.format(), Format::Json | Format::Both) {
        write("report.json", suite::to_json(&report))?;
    }
    if matches!(cfg.format(), Format::Md | Format::Both) {
        write("report.md", suite::to_markdown(&report))?;
    }
    if let Some(id) = &report.identities {
        let s = &id.summary;
        println!(
            "identities: {} rows, {} as stated verified, {} as stated mismatched, {} corrected verified, {} unresolved",
            s.rows, s.as_stated_verified, s.as_stated_mismatched, s.corrected_verified, s.unresolved
        );
    }
    for d in &report.discrepancies {
        println!("discrepancy: {d}");
    }
    if report.passed {
        println!("PASS");
        Ok(())
    } else {
        Err(Failure::Verification("verification failed; see report".into()))
    }
}

fn list(what: Listing) {
    let all = matches!(what, Listing::All);
    if all || matches!(what, Listing::Identities) {
        println!("# identities");
        for rec in catalogue() {
            println!("{} [{}] valid for {}", rec.id, rec.variant, rec.validity.describe());
            println!("    {}", rec.formula);
            println!("    from: {}", rec.anchor);
        }
    }
    if all || matches!(what, Listing::Operators) {
        println!("# operators");
        for ((family, id), op) in build_catalogue() {
            println!("{family} {id:<5} = {op}");
        }
    }
    if all || matches!(what, Listing::Flows) {
        println!("# flows");
        for spec in FlowSpec::all() {
            println!("{} {}: {}", spec.family, spec.operator, spec.characteristic_system().join("; "));
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Eval {
            function,
            a,
            b,
            c,
            x,
            y,
            z,
            exact,
            terms,
            tol,
            term_cap,
        } => eval(function, &a, &b, c.as_deref(), (&x, &y, &z), exact, terms, tol, term_cap),
        Command::Verify { scope, config, run } => verify(scope, config, run),
        Command::Catalogue { what } => {
            list(what);
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
