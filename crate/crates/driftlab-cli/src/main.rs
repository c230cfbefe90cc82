//! Batch command-line front end: classification, counting, scanning,
//! witness families, asymptotic profiles, and oscillation certificates,
//! all with stable machine-readable output.

mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use driftlab::ball::Precision;
use driftlab::counting::{
    brute_count, classify, dp_count, g_exact, gelfond_exponent, scan, Quintuple, Scanner,
};
use driftlab::drift_div_q::{witness_negative, witness_positive};
use driftlab::drift_div_qm1::{certify_oscillation, profile};
use driftlab::unity::count_via_filter;
use driftlab::Error;

use output::*;

const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_PRECISION: u8 = 4;
const EXIT_WRONG_CASE: u8 = 5;

#[derive(Parser)]
#[command(
    name = "driftlab",
    about = "Exact counting by residue class and digit-sum congruence, with certified drift analysis",
    version
)]
struct Cli {
    /// Working precision in bits (64–4096); DRIFTLAB_PRECISION overrides
    /// the default.
    #[arg(long, global = true)]
    bits: Option<u32>,
    /// Precision-escalation cap in bits.
    #[arg(long, global = true, default_value_t = 4096)]
    max_bits: u32,
    /// Largest N a scan may visit.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    scan_budget: u64,
    /// Largest N the brute-force counter may visit.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    brute_budget: u64,
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    /// Per-N series for `scan` (columns: N, g_num, g_den, sign).
    Csv,
}

#[derive(Args)]
struct QuintupleArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    a: u64,
    #[arg(long)]
    j: u64,
}

impl QuintupleArgs {
    fn build(&self) -> Result<Quintuple, Error> {
        Quintuple::new(self.q, self.d, self.m, self.a, self.j)
    }
}

/// Commands whose quintuple is implicitly `m = q` (the drift theorems).
#[derive(Args)]
struct CaseArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    a: u64,
    #[arg(long)]
    j: u64,
}

impl CaseArgs {
    fn build(&self) -> Result<Quintuple, Error> {
        Quintuple::new(self.q, self.d, self.q, self.a, self.j)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Brute,
    Dp,
    Filter,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Pos,
    Neg,
}

#[derive(Subcommand)]
enum Command {
    /// Classify (q, d) into the drift regimes.
    Classify {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: u64,
    },
    /// Count {0 ≤ n < N : n ≡ a (mod d), s_q(n) ≡ j (mod m)}.
    Count {
        #[command(flatten)]
        quintuple: QuintupleArgs,
        /// N as decimal text of unbounded length.
        #[arg(long = "N", visible_alias = "n")]
        n: String,
        #[arg(long, value_enum, default_value_t = Algorithm::Dp)]
        algo: Algorithm,
        /// Also print g(N) = count − N/(dm) as p/q.
        #[arg(long)]
        with_g: bool,
    },
    /// Exact error term g(N) = count(N) − N/(dm).
    G {
        #[command(flatten)]
        quintuple: QuintupleArgs,
        #[arg(long = "N", visible_alias = "n")]
        n: String,
    },
    /// Scan g(N) for 1 ≤ N ≤ n_max and report extremes and sign changes.
    Scan {
        #[command(flatten)]
        quintuple: QuintupleArgs,
        #[arg(long)]
        n_max: u64,
        /// Write the per-N series (N, g_num, g_den, sign) to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Witness family of constant-sign g values (requires d | q, m = q).
    Witness {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, value_enum)]
        sign: SignArg,
        /// Search bound for concrete members.
        #[arg(long, default_value_t = 1_000_000)]
        member_limit: u64,
        /// Write the JSON artifact here (write-then-rename).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Roots-of-unity asymptotic profile (requires d | q−1, m = q).
    Profile {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Oscillation certificate with exact verification up to k_check.
    Certify {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, default_value_t = 16)]
        k_check: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The Gelfond exponent λ(q, m) with a certified enclosure.
    GelfondLambda {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidBase(_)
        | Error::InvalidModulus { .. }
        | Error::ResidueOutOfRange { .. }
        | Error::Domain(_) => EXIT_INPUT,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::PrecisionExhausted { .. } => EXIT_PRECISION,
        Error::WrongCase { .. } => EXIT_WRONG_CASE,
        Error::SearchExhausted(_) | Error::Contradiction(_) => 1,
    }
}

fn precision(cli: &Cli) -> Result<Precision, Error> {
    let bits = match cli.bits {
        Some(b) => b,
        None => match std::env::var("DRIFTLAB_PRECISION") {
            Ok(v) => v
                .parse::<u32>()
                .map_err(|_| Error::Domain(format!("DRIFTLAB_PRECISION is not a number: {v}")))?,
            Err(_) => 128,
        },
    };
    if !(64..=4096).contains(&bits) {
        return Err(Error::Domain(format!(
            "precision {bits} outside the supported range [64, 4096]"
        )));
    }
    if cli.max_bits < bits || cli.max_bits > 4096 {
        return Err(Error::Domain(format!(
            "precision cap {} outside [{bits}, 4096]",
            cli.max_bits
        )));
    }
    Ok(Precision::new(bits, cli.max_bits))
}

fn parse_n(text: &str) -> Result<BigUint, Error> {
    let t = text.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Domain(format!(
            "N must be nonnegative decimal text, got {text:?}"
        )));
    }
    Ok(BigUint::parse_bytes(t.as_bytes(), 10).expect("validated digits"))
}

fn emit<T: Serialize>(cli: &Cli, dto: &T, plain: String) -> Result<(), Error> {
    match cli.format {
        Format::Json => {
            let json = serde_json::to_string_pretty(dto).expect("serializable");
            println!("{json}");
        }
        Format::Plain => println!("{plain}"),
        Format::Csv => {
            return Err(Error::Domain(
                "csv format applies only to the scan series".into(),
            ))
        }
    }
    Ok(())
}

/// Writes atomically: temp file in the target directory, then rename.
fn write_artifact(path: &Path, contents: &str) -> Result<(), Error> {
    let tmp = path.with_extension("tmp");
    let io = |e: std::io::Error| Error::Domain(format!("writing {}: {e}", path.display()));
    let mut f = std::fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.write_all(b"\n").map_err(io)?;
    f.sync_all().map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)?;
    Ok(())
}

fn emit_artifact<T: Serialize>(
    cli: &Cli,
    dto: &T,
    out: Option<&PathBuf>,
    summary: String,
) -> Result<(), Error> {
    let json = serde_json::to_string_pretty(dto).expect("serializable");
    match out {
        Some(path) => {
            write_artifact(path, &json)?;
            if cli.format == Format::Json {
                println!("{json}");
            } else {
                println!("{summary}");
                println!("wrote {}", path.display());
            }
        }
        None => {
            if cli.format == Format::Json {
                println!("{json}");
            } else {
                println!("{summary}");
                println!("{json}");
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Error> {
    let prec = precision(cli)?;
    match &cli.command {
        Command::Classify { q, d } => {
            if *q < 2 {
                return Err(Error::InvalidBase(*q));
            }
            if *d < 1 {
                return Err(Error::InvalidModulus { min: 1, got: *d });
            }
            let case = classify(*q, *d);
            emit(
                cli,
                &ClassifyDto {
                    schema: 1,
                    kind: "classify",
                    q: *q,
                    d: *d,
                    case: case.to_string(),
                },
                case.to_string(),
            )
        }
        Command::Count {
            quintuple,
            n,
            algo,
            with_g,
        } => {
            let p = quintuple.build()?;
            let n = parse_n(n)?;
            let (count, name) = match algo {
                Algorithm::Brute => (
                    BigUint::from(brute_count(&p, &n, cli.brute_budget)?),
                    "brute",
                ),
                Algorithm::Dp => (dp_count(&p, &n), "dp"),
                Algorithm::Filter => {
                    let k = power_exponent(&n, p.q()).ok_or_else(|| {
                        Error::Domain(format!(
                            "filter algorithm needs N = q^k with k ≥ 1; {n} is not a power of {}",
                            p.q()
                        ))
                    })?;
                    (count_via_filter(&p, k, prec)?, "filter")
                }
            };
            let g = with_g.then(|| rational(&g_exact(&p, &n)));
            let plain = match &g {
                Some(g) => format!("{count}\ng = {g}"),
                None => count.to_string(),
            };
            emit(
                cli,
                &CountDto {
                    schema: 1,
                    kind: "count",
                    quintuple: QuintupleDto::of(&p),
                    n: n.to_string(),
                    algorithm: name.to_string(),
                    count: count.to_string(),
                    g,
                },
                plain,
            )
        }
        Command::G { quintuple, n } => {
            let p = quintuple.build()?;
            let n = parse_n(n)?;
            let g = g_exact(&p, &n);
            let dto = CountDto {
                schema: 1,
                kind: "g",
                quintuple: QuintupleDto::of(&p),
                n: n.to_string(),
                algorithm: "dp".to_string(),
                count: dp_count(&p, &n).to_string(),
                g: Some(rational(&g)),
            };
            emit(cli, &dto, rational(&g))
        }
        Command::Scan {
            quintuple,
            n_max,
            csv,
        } => {
            let p = quintuple.build()?;
            if let Some(path) = csv {
                write_scan_csv(&p, *n_max, cli.scan_budget, path)?;
            }
            if cli.format == Format::Csv {
                stream_scan_csv(&p, *n_max, cli.scan_budget)?;
                return Ok(());
            }
            let report = scan(&p, *n_max, cli.scan_budget, prec)?;
            let plain = format!(
                "N ≤ {}: sign_changes = {}, min g = {} at N = {}, max g = {} at N = {}{}{}",
                report.n_max,
                report.sign_changes,
                rational(&report.min_g),
                report.argmin_n,
                rational(&report.max_g),
                report.argmax_n,
                report
                    .lambda
                    .as_ref()
                    .map(|l| format!(", lambda ≈ {}", l.decimal_mid(12)))
                    .unwrap_or_default(),
                report
                    .empirical_envelope
                    .map(|e| format!(", envelope = {e:.4}"))
                    .unwrap_or_default(),
            );
            emit(cli, &ScanDto::of(&report), plain)
        }
        Command::Witness {
            case,
            sign,
            member_limit,
            out,
        } => {
            let p = case.build()?;
            let fam = match sign {
                SignArg::Neg => witness_negative(&p, *member_limit)?,
                SignArg::Pos => witness_positive(&p, *member_limit)?,
            };
            let summary = format!(
                "{} family: {} with g = {} on every member; members {:?}",
                fam.sign,
                fam.constraint_string(),
                rational(&fam.predicted_g),
                fam.members
            );
            emit_artifact(cli, &WitnessDto::of(&fam), out.as_ref(), summary)
        }
        Command::Profile { case, out } => {
            let p = case.build()?;
            let prof = profile(&p, prec)?;
            let summary = format!(
                "R ≈ {} (h = {}), R2 ≈ {}, M = {}, k1 = {}, k2 = {}",
                prof.r.decimal_mid(12),
                prof.h,
                prof.r2.decimal_mid(12),
                prof.m_period,
                prof.k1,
                prof.k2
            );
            emit_artifact(cli, &ProfileDto::of(&prof), out.as_ref(), summary)
        }
        Command::Certify { case, k_check, out } => {
            let p = case.build()?;
            let cert = certify_oscillation(&p, *k_check, prec)?;
            let summary = format!(
                "R ≈ {}, M = {}, k1 = {}, k2 = {}, k* = {}; verified k ≤ {} with zero contradictions",
                cert.r.decimal_mid(12),
                cert.m_period,
                cert.k1,
                cert.k2,
                cert.k_star,
                k_check
            );
            emit_artifact(cli, &CertificateDto::of(&cert), out.as_ref(), summary)
        }
        Command::GelfondLambda { q, m } => {
            let lambda = gelfond_exponent(*q, *m, prec)?;
            let dto = LambdaDto {
                schema: 1,
                kind: "lambda",
                q: *q,
                m: *m,
                lambda: BallDto::of(&lambda),
                below_one: true,
            };
            emit(
                cli,
                &dto,
                format!(
                    "lambda({q}, {m}) = {} ± {} ({} bits), < 1",
                    lambda.decimal_mid(40),
                    lambda.decimal_rad(3),
                    lambda.bits()
                ),
            )
        }
    }
}

/// `k ≥ 1` with `n = q^k`, when it exists.
fn power_exponent(n: &BigUint, q: u64) -> Option<u32> {
    if n.is_zero() || n.is_one() {
        return None;
    }
    let base = BigUint::from(q);
    let mut acc = base.clone();
    let mut k = 1u32;
    while acc < *n {
        acc *= &base;
        k += 1;
    }
    (acc == *n).then_some(k)
}

fn scan_csv_rows(p: &Quintuple, n_max: u64, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "N,g_num,g_den,sign")?;
    let dm = p.dm();
    for (n, scaled) in Scanner::new(*p).take(n_max as usize) {
        // g = scaled/dm in lowest terms
        let g = num_rational::Ratio::new(scaled, i128::from(dm));
        let sign = match scaled.cmp(&0) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        };
        writeln!(out, "{n},{},{},{sign}", g.numer(), g.denom())?;
    }
    Ok(())
}

fn write_scan_csv(p: &Quintuple, n_max: u64, budget: u64, path: &Path) -> Result<(), Error> {
    if n_max > budget {
        return Err(Error::BudgetExceeded {
            what: "scan bound",
            requested: n_max.to_string(),
            limit: budget,
        });
    }
    let tmp = path.with_extension("tmp");
    let io = |e: std::io::Error| Error::Domain(format!("writing {}: {e}", path.display()));
    let mut f = std::io::BufWriter::new(std::fs::File::create(&tmp).map_err(io)?);
    scan_csv_rows(p, n_max, &mut f).map_err(io)?;
    f.flush().map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)?;
    Ok(())
}

fn stream_scan_csv(p: &Quintuple, n_max: u64, budget: u64) -> Result<(), Error> {
    if n_max > budget {
        return Err(Error::BudgetExceeded {
            what: "scan bound",
            requested: n_max.to_string(),
            limit: budget,
        });
    }
    let stdout = std::io::stdout();
    let mut lock = std::io::BufWriter::new(stdout.lock());
    scan_csv_rows(p, n_max, &mut lock)
        .map_err(|e| Error::Domain(format!("writing to stdout: {e}")))?;
    lock.flush()
        .map_err(|e| Error::Domain(format!("writing to stdout: {e}")))?;
    Ok(())
}
