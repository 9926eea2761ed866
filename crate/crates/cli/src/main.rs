//! `wrl`: secrecy capacity, uniformization and wiretap code experiments
//! from the command line. Machine output is CSV on stdout (or `--out`);
//! summaries, notes and warnings go to stderr.

mod commands;
mod error;
mod spec;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wrl_core::sim::Decoder;
use wrl_core::Limits;

use commands::{Io, JammingSimSpec, Randomizer, SimulateArgs};
use error::{CliError, Result};

/// Overrides the enumeration guard (largest |A|^n enumerated exactly).
const MAX_ENUM_VAR: &str = "WRL_MAX_ENUM";

#[derive(Debug, Parser)]
#[command(name = "wrl", version, about = "Wiretap coding with rate-limited local randomness")]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Secrecy capacity under a randomness budget.
    Capacity {
        #[arg(long)]
        channel: PathBuf,
        /// Bits of randomness per channel use, or `inf`.
        #[arg(long, value_parser = parse_budget)]
        budget: f64,
        /// Input grid resolution (points per unit of probability).
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(2..))]
        grid: u32,
    },
    /// Rate curve (I(X;Z), I(X;Y) - I(X;Z)) over the input grid, with
    /// upper concave envelope membership.
    Curve {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(2..))]
        grid: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random wiretap codes: exact leakage and error probability per codebook.
    Simulate {
        #[arg(long)]
        channel: PathBuf,
        /// `uniform`, or a source file (an explicit source is uniformized
        /// by the extractor; a biased_example file is used as is).
        #[arg(long, default_value = "uniform")]
        source: String,
        /// Block lengths, comma separated.
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..))]
        n: Vec<u32>,
        /// `R0,R,Rr` in bits per channel use.
        #[arg(long, value_parser = parse_rates)]
        rates: Rates,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
        codebooks: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `ml` or `typ:EPS`.
        #[arg(long, default_value = "ml")]
        decoder: Decoder,
        /// Monte Carlo trials when |Y|^n is too large to enumerate.
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Codebook input law p_X, comma separated (default uniform).
        #[arg(long, value_delimiter = ',')]
        input: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the greedy extractor for a source and report its distance to
    /// uniform.
    Uniformize {
        #[arg(long)]
        source: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Output rate in bits per source symbol; K = 2^ceil(n * rr).
        #[arg(long, value_parser = parse_nonnegative)]
        rr: f64,
        /// Write the assignment table to this file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Largest cooperative jamming power a randomness source can sustain.
    Jamming {
        #[arg(long, value_parser = parse_positive)]
        sigma2: f64,
        /// Source entropy H(R) in bits.
        #[arg(long, value_parser = parse_nonnegative)]
        hr: f64,
        /// `n,rate,samples,seed`: also compare Gaussian codebook noise to
        /// N(0, sigma2 + rho_max) with a two-sample KS statistic.
        #[arg(long, value_parser = parse_jamming_sim)]
        simulate: Option<JammingSimSpec>,
    },
}

#[derive(Debug, Clone, Copy)]
struct Rates([f64; 3]);

fn parse_nonnegative(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("expected a finite value >= 0, got {s}"))
    }
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    match parse_nonnegative(s)? {
        v if v > 0.0 => Ok(v),
        _ => Err(format!("expected a value > 0, got {s}")),
    }
}

fn parse_budget(s: &str) -> std::result::Result<f64, String> {
    if s.eq_ignore_ascii_case("inf") {
        Ok(f64::INFINITY)
    } else {
        parse_nonnegative(s)
    }
}

fn parse_rates(s: &str) -> std::result::Result<Rates, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected R0,R,Rr, got {s:?}"));
    }
    let mut rates = [0.0; 3];
    for (r, p) in rates.iter_mut().zip(parts) {
        *r = parse_nonnegative(p.trim())?;
    }
    Ok(Rates(rates))
}

fn parse_jamming_sim(s: &str) -> std::result::Result<JammingSimSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [n, rate, samples, seed] = parts[..] else {
        return Err(format!("expected n,rate,samples,seed, got {s:?}"));
    };
    let int = |v: &str| v.parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    let spec = JammingSimSpec {
        n: int(n)?,
        rate: parse_nonnegative(rate)?,
        samples: int(samples)?,
        seed: seed.parse().map_err(|e| format!("{seed:?}: {e}"))?,
    };
    if spec.n == 0 || spec.samples == 0 {
        return Err("n and samples must be positive".into());
    }
    Ok(spec)
}

fn limits_from_env() -> Result<Limits> {
    let mut limits = Limits::default();
    if let Ok(v) = std::env::var(MAX_ENUM_VAR) {
        limits.max_enumeration = v
            .trim()
            .parse()
            .map_err(|e| CliError::Usage(format!("{MAX_ENUM_VAR}={v:?}: {e}")))?;
    }
    Ok(limits)
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {t} threads: {e}")))?;
    }
    let limits = limits_from_env()?;
    let out_path = match &cli.command {
        Command::Curve { out, .. } | Command::Simulate { out, .. } => out.clone(),
        _ => None,
    };
    let mut out = output(out_path.as_ref())?;
    let mut diag = io::stderr().lock();
    let mut io = Io {
        out: &mut *out,
        diag: &mut diag,
        limits,
    };
    match cli.command {
        Command::Capacity { channel, budget, grid } => commands::capacity(&channel, budget, grid as usize, &mut io)?,
        Command::Curve { channel, grid, .. } => commands::curve(&channel, grid as usize, &mut io)?,
        Command::Simulate {
            channel,
            source,
            n,
            rates,
            codebooks,
            seed,
            decoder,
            trials,
            input,
            ..
        } => {
            let args = SimulateArgs {
                channel,
                source: if source == "uniform" {
                    Randomizer::Uniform
                } else {
                    Randomizer::File(source.into())
                },
                block_lengths: n.into_iter().map(|v| v as usize).collect(),
                rates: rates.0,
                codebooks: codebooks as usize,
                seed,
                decoder,
                trials,
                input,
            };
            commands::simulate(&args, &mut io)?
        }
        Command::Uniformize { source, n, rr, export } => {
            commands::uniformize(&source, n as usize, rr, export.as_deref(), &mut io)?
        }
        Command::Jamming { sigma2, hr, simulate } => commands::jamming_cmd(sigma2, hr, simulate, &mut io)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
