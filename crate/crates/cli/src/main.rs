//! `spacing-lc`: linear complexity of residue and primitive-root spacing parities.
//!
//! Every experiment writes a CSV (one row per prime or trial) plus a JSON summary next to
//! it, and prints a tally table. `--out -` streams the CSV to stdout instead and moves the
//! table to stderr.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::Ratio;

use spacing_lc::experiments::{
    default_thresholds, mc_run_with, parse_ratio, spacing_distribution, sweep, write_csv,
    write_results, HistogramSpec, McConfig, ResultRow, Summary, SweepOptions,
};
use spacing_lc::linear_complexity::{
    berlekamp_massey, legendre_closed_form, periodic_complexity, FieldSeq,
};
use spacing_lc::numtheory::{
    is_prime, next_prime, PrimeModulus, DEFAULT_ECM_CURVES, DEFAULT_RHO_BUDGET,
};
use spacing_lc::sequences::{legendre_sequence, parity_word, Kind};
use spacing_lc::Error;

/// Where results go when `--out` is not given.
const OUT_DIR_ENV: &str = "SPACING_LC_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "spacing-lc", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complexity of the quadratic-residue spacing word for consecutive primes
    QrSweep {
        /// Smallest prime considered (the first prime >= START is used)
        #[arg(long, default_value_t = 5)]
        start: u64,
        #[command(flatten)]
        common: SweepArgs,
    },
    /// Complexity of the primitive-root spacing word for consecutive primes
    PrSweep {
        /// Smallest prime considered (the first prime >= START is used)
        #[arg(long, default_value_t = 11)]
        start: u64,
        #[command(flatten)]
        common: SweepArgs,
    },
    /// Monte Carlo: quadratic residues in random windows of large primes
    McQr(McArgs),
    /// Monte Carlo: primitive roots in random windows of large primes
    McPr(McArgs),
    /// Compare Berlekamp-Massey on Legendre sequences against the closed form
    LegendreCheck {
        /// Check every odd prime up to this bound
        #[arg(long, default_value_t = 257)]
        max_prime: u64,
    },
    /// Minimal recurrence of a finite sequence and periodic complexity of it as a period
    Bm {
        /// Sequence of digits, or comma-separated values when the field needs more
        #[arg(long)]
        bits: String,
        /// Field characteristic (a prime)
        #[arg(long = "char", default_value_t = 2)]
        characteristic: u32,
    },
    /// Print a parity word as a bit string, first element first
    Word {
        #[arg(long)]
        prime: u64,
        #[arg(long, value_enum)]
        kind: WordKind,
    },
    /// Spacing histogram of residues or primitive roots as CSV
    SpacingDist {
        #[arg(long)]
        prime: u64,
        #[arg(long, value_enum)]
        kind: ResidueKind,
        /// Output file, or - for stdout
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Results CSV (JSON summary goes beside it); - streams the CSV to stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for the default output file
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    out_dir: PathBuf,
    /// Worker threads; results do not depend on it [default: all cores]
    #[arg(long)]
    jobs: Option<usize>,
    /// Extra reporting threshold, as a decimal or a/b (repeatable)
    #[arg(long = "threshold", value_name = "T", value_parser = ratio_arg)]
    thresholds: Vec<Ratio<u64>>,
    /// Histogram lower edge
    #[arg(long, value_parser = ratio_arg, default_value = "9/10")]
    hist_lower: Ratio<u64>,
    /// Histogram bin width
    #[arg(long, value_parser = ratio_arg, default_value = "1/500")]
    bin_width: Ratio<u64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Number of consecutive primes
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct McArgs {
    /// Number of trials
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Window size K
    #[arg(long, default_value_t = 1000)]
    window: u64,
    /// Lower end of the prime range, e.g. 1e30
    #[arg(long, value_parser = big_arg, default_value = "1e30")]
    min: BigUint,
    /// Upper end of the prime range, e.g. 1e40
    #[arg(long, value_parser = big_arg, default_value = "1e40")]
    max: BigUint,
    /// RNG seed; trial t draws from stream t of this seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Pollard rho iterations per split when factoring p - 1
    #[arg(long, default_value_t = DEFAULT_RHO_BUDGET)]
    rho_budget: u64,
    /// ECM curves tried after rho gives up; 0 for rho only
    #[arg(long, default_value_t = DEFAULT_ECM_CURVES)]
    ecm_curves: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ResidueKind {
    Qr,
    Pr,
}

impl From<ResidueKind> for Kind {
    fn from(k: ResidueKind) -> Self {
        match k {
            ResidueKind::Qr => Kind::Qr,
            ResidueKind::Pr => Kind::Pr,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WordKind {
    Qr,
    Pr,
    Legendre,
}

fn ratio_arg(s: &str) -> Result<Ratio<u64>, String> {
    parse_ratio(s).ok_or_else(|| format!("`{s}` is not a non-negative decimal or a/b fraction"))
}

/// Accepts plain decimal integers and `AeN` with integer `A`.
fn big_arg(s: &str) -> Result<BigUint, String> {
    let bad = || format!("`{s}` is not a non-negative integer or AeN");
    match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let m = BigUint::from_str(m).map_err(|_| bad())?;
            let e: u32 = e.parse().map_err(|_| bad())?;
            Ok(m * BigUint::from(10u8).pow(e))
        }
        None => BigUint::from_str(s).map_err(|_| bad()),
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("writing output: {0}")]
    Io(#[from] io::Error),
}

impl OutputArgs {
    fn options(&self) -> Result<SweepOptions, CliError> {
        if *self.bin_width.numer() == 0 {
            return Err(CliError::Usage("--bin-width must be positive".into()));
        }
        if self.hist_lower >= Ratio::from_integer(1) {
            return Err(CliError::Usage("--hist-lower must be below 1".into()));
        }
        let mut thresholds = default_thresholds();
        thresholds.extend(self.thresholds.iter().copied());
        thresholds.sort();
        thresholds.dedup();
        Ok(SweepOptions {
            thresholds,
            histogram: HistogramSpec {
                lower: self.hist_lower,
                width: self.bin_width,
            },
            parallel: self.jobs != Some(1),
        })
    }

    fn in_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
        match self.jobs {
            Some(0) => Err(CliError::Usage("--jobs must be positive".into())),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::Usage(format!("--jobs {n}: {e}")))?;
                Ok(pool.install(f))
            }
            None => Ok(f()),
        }
    }

    /// Writes the CSV and JSON, or the CSV to stdout for `-`; then prints the tallies.
    fn emit<R: ResultRow>(&self, summary: &Summary<R>, default_name: &str) -> Result<(), CliError> {
        let table = format!("{}{}", summary.tally_table(), summary.histogram_text());
        match self.out.as_deref() {
            Some(p) if p == Path::new("-") => {
                let stdout = io::stdout();
                write_csv(summary, stdout.lock())?;
                eprint!("{table}");
            }
            out => {
                let path = match out {
                    Some(p) => p.to_path_buf(),
                    None => {
                        fs::create_dir_all(&self.out_dir).map_err(|source| Error::Io {
                            path: self.out_dir.clone(),
                            source,
                        })?;
                        self.out_dir.join(default_name)
                    }
                };
                write_results(summary, &path)?;
                print!("{table}");
                eprintln!("wrote {}", path.display());
            }
        }
        Ok(())
    }
}

fn run_sweep(kind: Kind, start: u64, args: &SweepArgs, name: &str) -> Result<(), CliError> {
    if args.count == 0 {
        return Err(CliError::Usage("--count must be positive".into()));
    }
    let opts = args.output.options()?;
    let summary = args
        .output
        .in_pool(|| sweep(kind, start, args.count, &opts))??;
    args.output.emit(&summary, &format!("{name}.csv"))
}

fn run_mc(kind: Kind, args: &McArgs, name: &str) -> Result<(), CliError> {
    let mut cfg = McConfig::new(kind);
    cfg.trials = args.trials;
    cfg.window = args.window;
    cfg.prime_lo = args.min.clone();
    cfg.prime_hi = args.max.clone();
    cfg.seed = args.seed;
    cfg.rho_budget = args.rho_budget;
    cfg.ecm_curves = args.ecm_curves;
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let opts = args.output.options()?;
    let summary = args.output.in_pool(|| mc_run_with(&cfg, &opts))??;
    args.output.emit(&summary, &format!("{name}.csv"))
}

fn legendre_check(max_prime: u64) -> Result<bool, CliError> {
    let primes: Vec<u64> = std::iter::successors(Some(3u64), |p| Some(next_prime(p)))
        .take_while(|&p| p <= max_prime)
        .collect();
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{:>8} {:>5} {:>10} {:>10}  ok",
        "p", "p%8", "closed", "bm"
    )?;
    let mut agree = 0;
    for &p in &primes {
        let pm = PrimeModulus::new(p)?;
        let expect = legendre_closed_form(&pm);
        let got = periodic_complexity(&legendre_sequence(&pm).to_field_seq()) as u64;
        let ok = expect == got;
        agree += ok as usize;
        writeln!(
            out,
            "{p:>8} {:>5} {expect:>10} {got:>10}  {}",
            p % 8,
            if ok { "yes" } else { "NO" }
        )?;
    }
    let verdict = if agree == primes.len() {
        "PASS"
    } else {
        "FAIL"
    };
    writeln!(out, "{verdict} ({agree}/{} primes)", primes.len())?;
    Ok(agree == primes.len())
}

fn parse_elems(s: &str, q: u32) -> Result<Vec<u32>, CliError> {
    let s = s.trim();
    let parsed: Option<Vec<u32>> = if s.contains(',') {
        s.split(',').map(|t| t.trim().parse().ok()).collect()
    } else {
        s.chars().map(|c| c.to_digit(10)).collect()
    };
    let elems = parsed.ok_or_else(|| CliError::Usage(format!("--bits: cannot parse `{s}`")))?;
    if let Some(bad) = elems.iter().find(|&&e| e >= q) {
        return Err(CliError::Usage(format!(
            "--bits: element {bad} is not reduced modulo {q}"
        )));
    }
    Ok(elems)
}

fn bm(bits: &str, q: u32) -> Result<(), CliError> {
    if q < 2 || !is_prime(&(q as u64)) {
        return Err(CliError::Usage(format!("--char {q} is not a prime")));
    }
    let elems = parse_elems(bits, q)?;
    if elems.is_empty() {
        return Err(CliError::Usage("--bits is empty".into()));
    }
    let s = FieldSeq::new(q, elems)?;
    let f = berlekamp_massey(&s);
    println!("L={}; {}", f.degree(), f);
    println!("connection polynomial: {}", f.polynomial_string());
    println!("periodic complexity: {}", periodic_complexity(&s));
    Ok(())
}

fn prime_arg(p: u64) -> Result<PrimeModulus<u64>, CliError> {
    PrimeModulus::new(p).map_err(|e| CliError::Usage(format!("--prime: {e}")))
}

fn word(p: u64, kind: WordKind) -> Result<(), CliError> {
    let pm = prime_arg(p)?;
    let w = match kind {
        WordKind::Legendre => legendre_sequence(&pm),
        WordKind::Qr => parity_word(&pm, Kind::Qr)?,
        WordKind::Pr => parity_word(&pm, Kind::Pr)?,
    };
    println!("{}", w.bit_string());
    Ok(())
}

fn spacing_dist(p: u64, kind: ResidueKind, out: &Path) -> Result<(), CliError> {
    let pm = prime_arg(p)?;
    let hist = spacing_distribution(&pm, kind.into())?;
    let mut text = String::from("spacing,count\n");
    for (d, c) in hist {
        text.push_str(&format!("{d},{c}\n"));
    }
    if out == Path::new("-") {
        io::stdout().lock().write_all(text.as_bytes())?;
    } else {
        fs::write(out, text).map_err(|source| Error::Io {
            path: out.to_path_buf(),
            source,
        })?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::QrSweep { start, common } => run_sweep(Kind::Qr, *start, common, "qr-sweep")?,
        Command::PrSweep { start, common } => run_sweep(Kind::Pr, *start, common, "pr-sweep")?,
        Command::McQr(args) => run_mc(Kind::Qr, args, "mc-qr")?,
        Command::McPr(args) => run_mc(Kind::Pr, args, "mc-pr")?,
        Command::LegendreCheck { max_prime } => return legendre_check(*max_prime),
        Command::Bm {
            bits,
            characteristic,
        } => bm(bits, *characteristic)?,
        Command::Word { prime, kind } => word(*prime, *kind)?,
        Command::SpacingDist { prime, kind, out } => spacing_dist(*prime, *kind, out)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
