use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use frobcurve::cli::{self, parse_coeffs, CliResult, RunConfig};

#[derive(Parser)]
#[command(
    name = "frobcurve",
    version,
    about = "Frobenius/Cartier invariants of genus-2 curves y² = f(x) in odd characteristic"
)]
struct Opts {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CurveArgs {
    /// Characteristic (odd prime)
    #[arg(long)]
    p: u64,
    /// Coefficients c0..c5 of f, lowest first; `a:b` denotes a + b·t over F_{p^k}
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    /// Work over F_{p^k}
    #[arg(long = "ext-k", default_value_t = 1)]
    ext_k: usize,
}

#[derive(Args)]
struct Common {
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    workers: Option<usize>,
    /// Output path (scan: JSON-lines row file, appended and resumed)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a curve; print its Cartier–Manin matrix and ordinarity
    Curve {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate p-torsion forms
    Torsion {
        #[command(flatten)]
        curve: CurveArgs,
        /// brute | semilinear
        #[arg(long, default_value = "semilinear")]
        method: String,
        /// Also run the other method and compare
        #[arg(long)]
        crosscheck: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Check the two-sums lemma, off-diagonal closed forms and rigidity
    Verify {
        #[command(flatten)]
        curve: CurveArgs,
        /// Rigidity scan mode: brute | linear
        #[arg(long, default_value = "brute")]
        method: String,
        #[command(flatten)]
        common: Common,
    },
    /// Summarize a catalog or a seeded batch of random curves
    Scan {
        /// Catalog file (JSON array or JSON lines of {"p", "ext", "f"})
        #[arg(long, conflicts_with_all = ["p", "seed"])]
        catalog: Option<PathBuf>,
        #[arg(long, required_unless_present = "catalog")]
        p: Option<u64>,
        #[arg(long = "ext-k", default_value_t = 1)]
        ext_k: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random curves
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form counts and their consistency check
    Formulas {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        g: u64,
        #[command(flatten)]
        common: Common,
    },
}

fn config(cmd: Command) -> CliResult<RunConfig> {
    let mut c = RunConfig::default();
    let curve = |c: &mut RunConfig, a: CurveArgs| -> CliResult<()> {
        c.p = Some(a.p);
        c.f = Some(parse_coeffs(&a.f)?);
        c.ext_k = a.ext_k;
        Ok(())
    };
    let common = |c: &mut RunConfig, a: Common| {
        c.workers = a.workers;
        c.out = a.out;
    };
    match cmd {
        Command::Curve {
            curve: a,
            common: o,
        } => {
            c.command = "curve".into();
            curve(&mut c, a)?;
            common(&mut c, o);
        }
        Command::Torsion {
            curve: a,
            method,
            crosscheck,
            common: o,
        } => {
            c.command = "torsion".into();
            curve(&mut c, a)?;
            c.method = Some(method);
            c.crosscheck = crosscheck;
            common(&mut c, o);
        }
        Command::Verify {
            curve: a,
            method,
            common: o,
        } => {
            c.command = "verify".into();
            curve(&mut c, a)?;
            c.method = Some(method);
            common(&mut c, o);
        }
        Command::Scan {
            catalog,
            p,
            ext_k,
            seed,
            count,
            common: o,
        } => {
            c.command = "scan".into();
            c.catalog = catalog;
            c.p = p;
            c.ext_k = ext_k;
            c.seed = seed.unwrap_or(0);
            c.count = count;
            common(&mut c, o);
        }
        Command::Formulas { p, g, common: o } => {
            c.command = "formulas".into();
            c.p = Some(p);
            c.genus = g;
            common(&mut c, o);
        }
    }
    Ok(c)
}

fn execute(cmd: Command) -> CliResult<()> {
    let cfg = config(cmd)?;
    let report = cli::run(&cfg)?;
    match (&cfg.out, cfg.command.as_str()) {
        // scan rows already went to the file; the aggregate goes to stdout
        (Some(_), "scan") | (None, _) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("json"));
        }
        (Some(path), _) => {
            std::fs::write(
                path,
                serde_json::to_string_pretty(&report).expect("json") + "\n",
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let opts = match Opts::try_parse() {
        Ok(o) => o,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(opts.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            eprintln!(
                "{}",
                serde_json::json!({ "error": e.to_string(), "exit_code": code })
            );
            ExitCode::from(code as u8)
        }
    }
}
