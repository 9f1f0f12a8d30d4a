use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use supercong::arith::{harmonic_exact, parse_rational, rational_binomial, reduce_rational};
use supercong::hyperseries::{truncated_3f2, truncated_3f2_mod};
use supercong::padic::gamma_p;
use supercong::report::{
    emit_report, fmt_rational, run_grid, ConfigSource, Jobs, StrOrList, CHECKS,
};
use supercong::{selftest, Error, PadicContext};

#[derive(Parser)]
#[command(
    name = "supercong",
    version,
    about = "Exact checks of truncated 3F2 supercongruences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a grid of checks and write a JSON report.
    Verify(VerifyArgs),
    /// Evaluate a single quantity.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// List check ids with their labels.
    ListChecks,
    /// Run the built-in example corpus.
    SelfTest {
        /// Invert every verdict (negative control).
        #[arg(long)]
        self_test_perturb: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Prime range A:B.
    #[arg(long)]
    primes: Option<String>,
    /// Comma-separated rationals, `special4` or `grid-default`.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Range A:B for n.
    #[arg(long)]
    n: Option<String>,
    /// Range A:B for the block index r.
    #[arg(long)]
    r: Option<String>,
    /// Precision exponent k (1 or 2).
    #[arg(long)]
    prec: Option<u32>,
    /// Comma-separated check ids, or `all`.
    #[arg(long)]
    checks: Option<String>,
    /// Report path; the report goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker count or `auto`.
    #[arg(long)]
    jobs: Option<String>,
    /// Perturb every right-hand side so passing checks fail.
    #[arg(long)]
    self_test_perturb: bool,
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Morita Gamma_p(x) mod p^k.
    GammaP {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        prec: u32,
    },
    /// Truncated sum F(a; N), exact or mod p^k.
    #[command(name = "3f2")]
    ThreeF2 {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 2)]
        prec: u32,
    },
    /// Harmonic number H_n, exact or mod p^k.
    Harmonic {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        prec: u32,
    },
    /// Generalized binomial C(x, m), exact or mod p^k.
    Binomial {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 2)]
        prec: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Verify(args) => verify(args),
        Command::Eval(e) => {
            println!("{}", eval(e)?);
            Ok(0)
        }
        Command::ListChecks => {
            let mut out = std::io::stdout().lock();
            for c in CHECKS {
                // a closed pipe (e.g. `| head`) is not an error
                if writeln!(out, "{:<18} {}", c.id, c.label).is_err() {
                    break;
                }
            }
            Ok(0)
        }
        Command::SelfTest { self_test_perturb } => {
            let results = selftest::run(self_test_perturb);
            let failed = results.iter().filter(|r| !r.pass).count();
            for r in &results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                match &r.detail {
                    Some(d) => println!("{status} {} ({d})", r.name),
                    None => println!("{status} {}", r.name),
                }
            }
            println!("{} passed, {failed} failed", results.len() - failed);
            Ok(u8::from(failed > 0))
        }
    }
}

fn verify(args: VerifyArgs) -> Result<u8, Error> {
    let file = match &args.config {
        Some(path) => ConfigSource::from_json_file(path)?,
        None => ConfigSource::default(),
    };
    let flags = ConfigSource {
        primes: args.primes,
        a: args.a.map(StrOrList::Str),
        n: args.n,
        r: args.r,
        prec: args.prec,
        checks: args.checks.map(StrOrList::Str),
        out: args.out,
        jobs: args.jobs.map(Jobs::Token),
        self_test_perturb: args.self_test_perturb.then_some(true),
    };
    let config = flags.over(file).resolve()?;
    let report = run_grid(&config)?;
    match &config.output_path {
        Some(path) => emit_report(&report, path)?,
        None => println!("{}", report.to_json()?),
    }
    let s = report.summary;
    eprintln!(
        "pass {} fail {} skip {} error {} ({} ms)",
        s.pass, s.fail, s.skip, s.error, report.wall_time_ms
    );
    Ok(report.exit_code() as u8)
}

fn eval(command: EvalCommand) -> Result<String, Error> {
    match command {
        EvalCommand::GammaP { x, p, prec } => {
            let ctx = PadicContext::new(p, prec)?;
            Ok(gamma_p(&parse_rational(&x)?, &ctx)?.to_string())
        }
        EvalCommand::ThreeF2 { a, n, p, prec } => {
            let a = parse_rational(&a)?;
            match p {
                Some(p) => Ok(truncated_3f2_mod(&a, n, &PadicContext::new(p, prec)?)?.to_string()),
                None => Ok(fmt_rational(&truncated_3f2(&a, n))),
            }
        }
        EvalCommand::Harmonic { n, p, prec } => {
            let h = harmonic_exact(n);
            match p {
                Some(p) => Ok(reduce_rational(&h, &PadicContext::new(p, prec)?)?.to_string()),
                None => Ok(fmt_rational(&h)),
            }
        }
        EvalCommand::Binomial { x, m, p, prec } => {
            let b = rational_binomial(&parse_rational(&x)?, m)?;
            match p {
                Some(p) => Ok(reduce_rational(&b, &PadicContext::new(p, prec)?)?.to_string()),
                None => Ok(fmt_rational(&b)),
            }
        }
    }
}
