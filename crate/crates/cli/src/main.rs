use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use cdelta::cdiff::{spectrum, uniformity, AConvention, CFilter, SweepOptions};
use cdelta::number_theory::{gcd_power_formula, trinomial_roots};
use cdelta::report::ReportEnvelope;
use cdelta::tables::{reproduce, ReferenceData, ReproduceOptions};
use cdelta::theorems::{preset, sweep, verify, ClaimId, ClaimParams, Grid, Status, SweepReport};
use cdelta::walsh::{apcn_statistic, convolution_statistic, pcn_power_sum, WalshLimits};
use cdelta::{Error, FieldElement, FieldSpec, FunctionSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Work limit (q^2 per value of c) for sweeps without --allow-long.
const SWEEP_WORK_LIMIT: u128 = 200_000_000_000;

const EXIT_REFUTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_OTHER: u8 = 4;

#[derive(Parser)]
#[command(name = "cdelta", version, about = "c-differential uniformity over GF(p^n)")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: u32,
    /// Extension degree.
    #[arg(long)]
    n: u32,
    /// Modulus coefficients, constant term first, leading 1 included
    /// (e.g. 1,1,0,1 for x^3+x+1). Defaults to the smallest primitive
    /// polynomial. Element ranks refer to this modulus.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

impl FieldArgs {
    fn build(&self) -> cdelta::Result<FieldSpec> {
        FieldSpec::new(self.p, self.n, self.modulus.as_deref())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// a ranges over all of GF(q) when c != 1.
    Paper,
    /// a ranges over nonzero elements only.
    Nonzero,
}

impl From<ConventionArg> for AConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => AConvention::PaperFootnote,
            ConventionArg::Nonzero => AConvention::NonzeroOnly,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectrumFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    Quick,
    Standard,
}

#[derive(Subcommand)]
enum Command {
    /// Print the field model as JSON.
    FieldInfo {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// c-differential uniformity of one function at one c, with a witness.
    Uniformity {
        #[command(flatten)]
        field: FieldArgs,
        /// monomial:D | poly:E1=C1,E2=C2,... | inverse | table:PATH
        #[arg(long)]
        function: String,
        /// Rank of c.
        #[arg(long)]
        c: u32,
        #[arg(long, value_enum)]
        a_convention: ConventionArg,
        /// Skip symmetry reductions.
        #[arg(long)]
        brute_force: bool,
    },
    /// Uniformity for a set of c values.
    ///
    /// CSV columns: c_rank, uniformity, witness_a, witness_b, classification
    /// (PcN, APcN or higher), preceded by '#' comment lines describing the
    /// field, function and convention.
    Spectrum {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        function: String,
        /// all | nonzero | no01 | comma-separated ranks
        #[arg(long)]
        c_set: String,
        #[arg(long, value_enum)]
        a_convention: ConventionArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: SpectrumFormat,
        #[arg(long)]
        brute_force: bool,
        /// Lift the work guard.
        #[arg(long)]
        allow_long: bool,
    },
    /// Walsh-spectrum characterizations, checked against the counts.
    WalshCheck {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        function: String,
        #[arg(long)]
        c: u32,
        #[arg(long, default_value_t = 2)]
        delta: u32,
    },
    /// Roots of z^(p^k) - a z - b.
    Trinomial {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: u32,
        /// Rank of a.
        #[arg(long)]
        a: u32,
        /// Rank of b.
        #[arg(long)]
        b: u32,
    },
    /// gcd(p^k + 1, p^n - 1) by closed form, checked against Euclid.
    GcdLemma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
    },
    /// Check a claim (T0..T9) by brute force.
    ///
    /// Verdicts go to stdout as JSON lines, the summary table to stderr.
    Verify {
        #[arg(long)]
        claim: String,
        /// Preset field grid; ignored when --p and --n are given.
        #[arg(long, value_enum, default_value = "quick")]
        grid: GridArg,
        #[arg(long, requires = "n")]
        p: Option<u32>,
        #[arg(long, requires = "p")]
        n: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        /// Rank of c.
        #[arg(long)]
        c: Option<u32>,
        /// Rank of u.
        #[arg(long)]
        u: Option<u32>,
        /// Convention for a single-field run (default: the claim's own).
        #[arg(long, value_enum)]
        a_convention: Option<ConventionArg>,
        /// Exit 1 if any verdict is Refuted.
        #[arg(long)]
        strict: bool,
    },
    /// Recompute a reference table and diff it against the stored values.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=2))]
        table: u32,
        #[arg(long)]
        max_n: Option<u32>,
        /// Also run rows over fields with 10^4 or more elements.
        #[arg(long)]
        allow_long: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_OTHER);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::SizeGuardExceeded { .. }) => EXIT_GUARD,
        Some(
            Error::InvalidArgument(_)
            | Error::UnknownClaim(_)
            | Error::RankOutOfRange { .. }
            | Error::UnitC
            | Error::DegenerateCs
            | Error::InvalidExponent(_)
            | Error::NonPrimeCharacteristic(_)
            | Error::DegreeMismatch { .. }
            | Error::InvalidCoefficient { .. }
            | Error::ReducibleModulus(_)
            | Error::FieldTooLarge { .. },
        ) => EXIT_USAGE,
        _ => EXIT_OTHER,
    }
}

fn print_json<T: Serialize>(env: &ReportEnvelope<T>) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "{}", env.to_json_pretty()?)?;
    Ok(())
}

fn element(field: &FieldSpec, rank: u32) -> cdelta::Result<FieldElement> {
    field.element(rank as u64)
}

fn sweep_guard(field: &FieldSpec, count: usize, allow_long: bool) -> cdelta::Result<()> {
    let q = field.q() as u128;
    let needed = q * q * count as u128;
    if !allow_long && needed > SWEEP_WORK_LIMIT {
        return Err(Error::SizeGuardExceeded { what: "c-sweep (pass --allow-long to run it)".into(), needed, limit: SWEEP_WORK_LIMIT });
    }
    Ok(())
}

/// A statistic over its size guard is reported as skipped, not as an error.
fn guarded<T>(r: cdelta::Result<T>) -> cdelta::Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::SizeGuardExceeded { what, .. }) => {
            eprintln!("skipped: {what} exceeds its guard");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn options(brute_force: bool) -> SweepOptions {
    if brute_force {
        SweepOptions::BRUTE_FORCE
    } else {
        SweepOptions::default()
    }
}

#[derive(Serialize)]
struct FieldInfo {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: FieldElement,
    log_tables: bool,
}

#[derive(Serialize)]
struct WalshReport {
    c: FieldElement,
    uniformity_all_a: u32,
    pcn: Option<Verdict<cdelta::walsh::Statistic>>,
    apcn: Option<Verdict<cdelta::walsh::Statistic>>,
    convolution: Option<Verdict<cdelta::walsh::ConvolutionStatistic>>,
}

/// A statistic, its equality verdict and whether that agrees with the counts.
#[derive(Serialize)]
struct Verdict<T> {
    statistic: T,
    equality: bool,
    predicts_bound: bool,
    consistent: bool,
}

#[derive(Serialize)]
struct GcdReport {
    p: u64,
    k: u32,
    n: u32,
    gcd: String,
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::FieldInfo { field } => {
            let f = field.build()?;
            let info = FieldInfo {
                p: f.p(),
                n: f.n(),
                q: f.q(),
                modulus: f.modulus().to_vec(),
                generator: f.generator(),
                log_tables: f.has_log_tables(),
            };
            print_json(&ReportEnvelope::new("field_info", info).field(&f))?;
        }
        Command::Uniformity { field, function, c, a_convention, brute_force } => {
            let fs = field.build()?;
            let f = function.parse::<FunctionSpec>()?.build(&fs)?;
            sweep_guard(&fs, 1, false)?;
            let c = element(&fs, c)?;
            let conv = a_convention.into();
            let u = cdelta::cdiff::uniformity_with(&f, c, conv, options(brute_force));
            print_json(&ReportEnvelope::new("uniformity", u).field(&fs).function(f.origin().describe()).convention(conv))?;
        }
        Command::Spectrum { field, function, c_set, a_convention, format, brute_force, allow_long } => {
            let fs = field.build()?;
            let f = function.parse::<FunctionSpec>()?.build(&fs)?;
            let filter: CFilter = c_set.parse()?;
            sweep_guard(&fs, filter.values(&fs)?.len(), allow_long)?;
            let conv: AConvention = a_convention.into();
            let report = spectrum(&f, &filter, conv, options(brute_force))?;
            match format {
                SpectrumFormat::Json => {
                    let env = ReportEnvelope::new("spectrum", &report).field(&fs).function(f.origin().describe()).convention(conv);
                    print_json(&env)?;
                }
                SpectrumFormat::Csv => {
                    let mut out = io::stdout().lock();
                    writeln!(out, "# {} {}", env!("CARGO_BIN_NAME"), env!("CARGO_PKG_VERSION"))?;
                    writeln!(out, "# field p={} n={} modulus={:?}", fs.p(), fs.n(), fs.modulus())?;
                    writeln!(out, "# function {}", f.origin().describe())?;
                    writeln!(out, "# a_convention {} c_set {}", conv.label(), filter.describe())?;
                    match report.overall_max {
                        Some(m) => writeln!(out, "# overall_max {m}")?,
                        None => writeln!(out, "# overall_max none")?,
                    }
                    report.write_csv(&mut out)?;
                }
            }
        }
        Command::WalshCheck { field, function, c, delta } => {
            let fs = field.build()?;
            let f = function.parse::<FunctionSpec>()?.build(&fs)?;
            let c = element(&fs, c)?;
            let limits = WalshLimits::default();
            let u = uniformity(&f, c, AConvention::PaperFootnote).value;
            let pcn = guarded(pcn_power_sum(&f, c, &limits))?.map(|s| Verdict {
                statistic: s,
                equality: s.equality(),
                predicts_bound: u <= 1,
                consistent: s.equality() == (u <= 1),
            });
            let apcn = guarded(apcn_statistic(&f, c, &limits))?.map(|s| Verdict {
                statistic: s,
                equality: s.equality(),
                predicts_bound: u <= 2,
                consistent: s.equality() == (u <= 2),
            });
            let convolution = guarded(convolution_statistic(&f, c, delta, &limits))?.map(|s| Verdict {
                statistic: s,
                equality: s.equality(),
                predicts_bound: u <= delta,
                consistent: s.equality() == (u <= delta) && s.sides_agree() != Some(false),
            });
            let report = WalshReport { c, uniformity_all_a: u, pcn, apcn, convolution };
            let env = ReportEnvelope::new("walsh_check", report)
                .field(&fs)
                .function(f.origin().describe())
                .convention(AConvention::PaperFootnote);
            print_json(&env)?;
        }
        Command::Trinomial { field, k, a, b } => {
            let fs = field.build()?;
            let out = trinomial_roots(&fs, k, element(&fs, a)?, element(&fs, b)?)?;
            print_json(&ReportEnvelope::new("trinomial", out).field(&fs))?;
        }
        Command::GcdLemma { p, k, n } => {
            let g = gcd_power_formula(p, k, n)?;
            print_json(&ReportEnvelope::new("gcd_lemma", GcdReport { p, k, n, gcd: g.to_string() }))?;
        }
        Command::Verify { claim, grid, p, n, k, c, u, a_convention, strict } => {
            let claim: ClaimId = claim.parse()?;
            let report = match (p, n) {
                (Some(p), Some(n)) => {
                    let field = FieldSpec::new(p, n, None)?;
                    let params = ClaimParams {
                        p,
                        n,
                        k,
                        c: c.map(|r| element(&field, r)).transpose()?,
                        u: u.map(|r| element(&field, r)).transpose()?,
                    };
                    let conv = a_convention.map(Into::into).unwrap_or(claim.pinned_convention());
                    let verdicts = verify(claim, &params, conv)?;
                    SweepReport::from_verdicts(verdicts)
                }
                _ => {
                    let grid = match grid {
                        GridArg::Quick => Grid::Quick,
                        GridArg::Standard => Grid::Standard,
                    };
                    sweep(claim, &preset(claim, grid))?
                }
            };
            io::stdout().lock().write_all(report.json_lines()?.as_bytes()).context("writing verdicts")?;
            eprint!("{}", report.summary_table());
            if strict && report.verdicts.iter().any(|v| v.status == Status::Refuted) {
                return Ok(EXIT_REFUTED);
            }
        }
        Command::Reproduce { table, max_n, allow_long, format } => {
            let data = ReferenceData::load()?;
            let diff = reproduce(data.table(table)?, ReproduceOptions { max_n, allow_long })?;
            match format {
                TextFormat::Text => print!("{}", diff.render()),
                TextFormat::Json => print_json(&ReportEnvelope::new("table_reproduction", &diff))?,
            }
        }
    }
    Ok(0)
}
