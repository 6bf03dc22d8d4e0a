use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use secant_core::prover::{ProveOutcome, Prover, ProverConfig};
use secant_core::scan::{run_scan, write_csv, write_json_lines, ResultCache, ScanConfig};
use secant_core::strassen::strassen_report;
use secant_core::terracini::{eval_statement, witness_rmm, CertificateKind, Outcome};
use secant_core::{Error, PrimeField, Statement};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_DEFICIENT: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser, Debug)]
#[command(name = "secant", version, about = "Secant dimensions of Segre-Veronese varieties P^m x P^n in O(1,d)")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Prime modulus, in [2^30, 2^32).
    #[arg(long, global = true, default_value_t = 2_147_483_647)]
    prime: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Independent seeded configurations tried before reporting a deficiency.
    #[arg(long, global = true, default_value_t = 3)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank of s tangent spaces and t Y-spans at seeded general points.
    Dim(StatementArgs),
    /// Scan T(m,n;1,2;s) over 1..=max-m x 1..=max-n.
    Scan {
        #[arg(long)]
        max_m: usize,
        #[arg(long)]
        max_n: usize,
        /// Append-only JSON-lines result cache.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Check a named span certificate.
    Certify {
        name: CertName,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
    },
    /// Prove a statement with the splitting theorem and print the proof tree.
    Prove {
        #[command(flatten)]
        statement: StatementArgs,
        /// Forbid closing statements by rank certificates.
        #[arg(long)]
        no_rank_leaves: bool,
    },
    /// Rank and Pfaffian of S_phi for a sum of s seeded decomposables, n = 2k+1.
    Strassen {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
    },
}

#[derive(Args, Debug)]
struct StatementArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 0)]
    t: usize,
}

impl StatementArgs {
    fn statement(&self) -> Statement {
        Statement::new(self.m, self.n, self.d, self.s, self.t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CertName {
    #[value(name = "Q")]
    Q,
    #[value(name = "Runder")]
    Runder,
    #[value(name = "Rover")]
    Rover,
    #[value(name = "R2n")]
    R2n,
    #[value(name = "witnessRmm")]
    WitnessRmm,
    #[value(name = "strassen")]
    Strassen,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Core(Error::from(e))
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(Error::Io(_)) => EXIT_IO,
            CliError::Core(Error::OutOfRange(_) | Error::UnsupportedModulus(_) | Error::InfeasibleConstraint { .. }) => {
                EXIT_USAGE
            }
            CliError::Core(_) => EXIT_ERROR,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("secant: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(global: &GlobalOpts, value: &serde_json::Value) -> Result<(), CliError> {
    let mut w = open_output(&global.out)?;
    writeln!(w, "{}", serde_json::to_string_pretty(value).expect("json value serializes"))?;
    w.flush()?;
    Ok(())
}

fn require(v: Option<usize>, flag: &str, name: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("certify {name} needs --{flag}")))
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let g = &cli.global;
    let field = PrimeField::new(g.prime)?;
    if g.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if g.format == Format::Csv && !matches!(cli.command, Command::Scan { .. }) {
        return Err(CliError::Usage("--format csv is only supported by scan".into()));
    }
    match &cli.command {
        Command::Dim(args) => {
            let v = eval_statement(&field, &args.statement(), g.seed, g.trials)?;
            emit(
                g,
                &json!({"rank": v.rank, "expected": v.expected, "defect": v.defect(), "outcome": v.outcome}),
            )?;
            Ok(match v.outcome {
                Outcome::True => EXIT_OK,
                Outcome::DeficientEvidence => EXIT_DEFICIENT,
                Outcome::Error => EXIT_ERROR,
            })
        }
        Command::Scan { max_m, max_n, cache } => {
            let cfg = ScanConfig { seed: g.seed, trials: g.trials, jobs: g.jobs, ..ScanConfig::new(*max_m, *max_n) }
                .with_field(field);
            let mut cache = cache.as_ref().map(ResultCache::open).transpose()?;
            let out = run_scan(&cfg, cache.as_mut())?;
            let w = open_output(&g.out)?;
            match g.format {
                Format::Json => write_json_lines(&out.records, w)?,
                Format::Csv => write_csv(&out.records, w)?,
            }
            eprintln!("{}", out.summary);
            Ok(if out.summary.is_clean() { EXIT_OK } else { EXIT_DEFICIENT })
        }
        Command::Certify { name, m, n, k, s } => certify(g, &field, *name, *m, *n, *k, *s),
        Command::Prove { statement, no_rank_leaves } => {
            let prover = Prover::new(ProverConfig {
                field,
                seed: g.seed,
                trials: g.trials,
                allow_rank_leaves: !no_rank_leaves,
                ..ProverConfig::default()
            });
            let outcome = prover.prove(&statement.statement())?;
            match &outcome {
                ProveOutcome::Proved { proof } => {
                    emit(g, &serde_json::to_value(proof).expect("proof serializes"))?;
                    Ok(EXIT_OK)
                }
                ProveOutcome::Unknown { .. } => {
                    emit(g, &serde_json::to_value(&outcome).expect("outcome serializes"))?;
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
        Command::Strassen { k, s } => strassen(g, &field, *k, *s),
    }
}

fn certify(
    g: &GlobalOpts,
    field: &PrimeField,
    name: CertName,
    m: Option<usize>,
    n: Option<usize>,
    k: Option<usize>,
    s: Option<usize>,
) -> Result<u8, CliError> {
    let kind = match name {
        CertName::Q => CertificateKind::Q,
        CertName::Runder => CertificateKind::RUnder,
        CertName::Rover => CertificateKind::ROver,
        CertName::R2n => CertificateKind::R2n,
        CertName::WitnessRmm => {
            let m = require(m, "m", "witnessRmm")?;
            let ok = witness_rmm(field, m)?;
            emit(g, &json!({"certificate": "witnessRmm", "m": m, "spans": ok}))?;
            return Ok(if ok { EXIT_OK } else { EXIT_DEFICIENT });
        }
        CertName::Strassen => {
            return strassen(g, field, require(k, "k", "strassen")?, require(s, "s", "strassen")?);
        }
    };
    let n = require(n, "n", kind.name())?;
    let m = if kind == CertificateKind::R2n { m.unwrap_or(2) } else { require(m, "m", kind.name())? };
    let v = kind.certify(field, m, n, g.seed, g.trials)?;
    let mut value = serde_json::to_value(&v).expect("verdict serializes");
    value["certificate"] = json!(kind.name());
    value["m"] = json!(m);
    value["n"] = json!(n);
    emit(g, &value)?;
    Ok(match v.outcome {
        Outcome::True => EXIT_OK,
        Outcome::DeficientEvidence => EXIT_DEFICIENT,
        Outcome::Error => EXIT_ERROR,
    })
}

fn strassen(g: &GlobalOpts, field: &PrimeField, k: usize, s: usize) -> Result<u8, CliError> {
    let r = strassen_report(field, k, s, g.seed)?;
    emit(g, &serde_json::to_value(&r).expect("report serializes"))?;
    Ok(if r.within_bound { EXIT_OK } else { EXIT_DEFICIENT })
}
