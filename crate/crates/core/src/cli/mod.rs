//! `fermicorr` command line.
//!
//! Exit status is 0 when every check passes, 1 on a usage or input error and
//! 2 when a result misses its tolerance.

pub mod format;
pub mod sweep;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::entangle::MaximizeOptions;
use crate::error::Error;
use crate::firstq;
use crate::hubbard::{HubbardModel, HubbardParams, ObservablePair};
use crate::slater::{self, DEFAULT_TOL};
use crate::spindensity;
use format::g15;
use sweep::{Format, Maxima, Scale};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_TOLERANCE: u8 = 2;

pub const SEED_ENV: &str = "FERMICORR_SEED";
pub const DEFAULT_SEED: u64 = 42;

/// Correlation-based entanglement in the two-site Hubbard model.
#[derive(Debug, Parser)]
#[command(name = "fermicorr", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground-state correlations and degrees over a range of x = U/(4t).
    Sweep(SweepArgs),
    /// Run the invariant suite and print a pass/fail table.
    Verify(VerifyArgs),
    /// Conditional spin coincidences for the doubly occupied bonding orbital.
    Epr(EprArgs),
    /// Slater rank of the ground state next to its spin correlation.
    Slater(SlaterArgs),
    /// Largest |C| for one observable pair over all two-electron states.
    Maximize(MaximizeArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 17)]
    pub n_points: usize,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    pub scale: Scale,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct EprArgs {
    #[arg(long, default_value_t = spindensity::DEFAULT_CELLS)]
    pub n_cells: usize,
    /// Output file for the coincidence table; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SlaterArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x: f64,
}

#[derive(Debug, Args)]
pub struct MaximizeArgs {
    /// i = electron spins, ii = site spins, iii = bonding occupations,
    /// iv = site occupations.
    #[arg(long, value_parser = parse_pair)]
    pub pair: ObservablePair,
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub oracle_samples: usize,
}

fn parse_pair(s: &str) -> Result<ObservablePair, String> {
    ObservablePair::from_roman(&s.to_ascii_lowercase())
        .ok_or_else(|| format!("expected i, ii, iii or iv, got {s:?}"))
}

/// Failure of a subcommand, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Tolerance(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o: {e}"))
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn open_out(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    let result = match &cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Epr(a) => cmd_epr(a),
        Command::Slater(a) => cmd_slater(a),
        Command::Maximize(a) => cmd_maximize(a),
    };
    match result {
        Ok(()) => EXIT_PASS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Tolerance(msg)) => {
            eprintln!("tolerance failure: {msg}");
            EXIT_TOLERANCE
        }
    }
}

pub fn cmd_sweep(a: &SweepArgs) -> CmdResult {
    let xs = sweep::grid(a.x_min, a.x_max, a.n_points, a.scale)?;
    let model = HubbardModel::default();
    let options = MaximizeOptions {
        seed: a.seed,
        oracle_samples: 0,
        ..MaximizeOptions::default()
    };
    let maxima = Maxima::compute(&model, &options)?;
    let rows = sweep::sweep(&model, &xs, &maxima)?;

    let mut out = open_out(a.out.as_deref())?;
    match a.format {
        Format::Csv => sweep::write_csv(&mut out, &rows)?,
        Format::Json => sweep::write_json(&mut out, &rows, &maxima, a.seed)?,
    }
    out.flush()?;

    let bad: Vec<_> = rows
        .iter()
        .filter(|r| r.err_max.is_nan() || r.err_max > sweep::SWEEP_TOL)
        .collect();
    if bad.is_empty() {
        return Ok(());
    }
    for r in &bad {
        eprintln!("  x = {}: err_max = {}", g15(r.x), g15(r.err_max));
    }
    Err(Failure::Tolerance(format!(
        "{} of {} rows exceed {:e}",
        bad.len(),
        rows.len(),
        sweep::SWEEP_TOL
    )))
}

pub fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    let checks = verify::run_checks(a.seed)?;
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = io::stdout().lock();
    for c in &checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict}  {:<width$}  {}", c.name, c.detail)?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(out, "{} passed, {failed} failed", checks.len() - failed)?;
    if failed > 0 {
        return Err(Failure::Tolerance(format!("{failed} checks failed")));
    }
    Ok(())
}

pub const EPR_TOL: f64 = 1e-10;

pub fn cmd_epr(a: &EprArgs) -> CmdResult {
    let u = spindensity::default_bonding_orbital(a.n_cells)?;
    let psi = spindensity::doubly_occupied(&u)?;
    let table = spindensity::coincidence_table(&u.grid(), &psi)?;

    let mut out = open_out(a.out.as_deref())?;
    writeln!(out, "k,k_prime,numerator,denominator,conditional")?;
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.k,
            r.k_prime,
            g15(r.numerator),
            g15(r.denominator),
            g15(r.conditional)
        )?;
    }
    out.flush()?;

    let worst = table
        .rows
        .iter()
        .map(|r| (r.conditional + 1.0).abs())
        .fold(0.0, f64::max);
    eprintln!(
        "{} cell pairs ({} without joint density), mean {}, spread {}",
        table.rows.len(),
        table.skipped.len(),
        g15(table.mean()),
        g15(table.spread())
    );
    if table.rows.is_empty() {
        return Err(Failure::Tolerance("no cell pair has joint density".into()));
    }
    if worst > EPR_TOL || table.spread() > EPR_TOL {
        return Err(Failure::Tolerance(format!(
            "max |conditional + 1| = {worst:e}, spread = {:e}",
            table.spread()
        )));
    }
    Ok(())
}

pub fn cmd_slater(a: &SlaterArgs) -> CmdResult {
    let model = HubbardModel::default();
    let gs = model.ground_state(&HubbardParams::from_x(a.x)?)?;
    if gs.degenerate {
        return Err(Failure::Usage(format!(
            "ground state at x = {} is degenerate",
            a.x
        )));
    }
    let w = firstq::from_second_quantized(&gs.state)?;
    let s = slater::slater_rank(&w, DEFAULT_TOL)?;
    let c_spin = model
        .pair_correlation(&gs.state, ObservablePair::ElectronSpins)?
        .re;
    let c_num = model
        .pair_correlation(&gs.state, ObservablePair::SiteOccupations)?
        .re;
    let amps: Vec<String> = s.amplitudes.iter().map(|&z| g15(z)).collect();

    let mut out = io::stdout().lock();
    writeln!(out, "x = {}", g15(a.x))?;
    writeln!(out, "slater_rank = {}", s.rank)?;
    writeln!(out, "single_determinant = {}", s.is_single_determinant())?;
    writeln!(
        out,
        "pfaffian_residual = {}",
        g15(s.pfaffian_residual.unwrap_or(f64::NAN))
    )?;
    writeln!(out, "block_amplitudes = {}", amps.join(" "))?;
    writeln!(out, "C_s1s2 = {}", g15(c_spin))?;
    writeln!(out, "C_N1N2 = {}", g15(c_num))?;
    Ok(())
}

pub const MAXIMUM_TOL: f64 = 1e-6;

pub fn cmd_maximize(a: &MaximizeArgs) -> CmdResult {
    if a.restarts == 0 {
        return Err(Failure::Usage("restarts must be at least 1".into()));
    }
    let model = HubbardModel::default();
    let options = MaximizeOptions {
        restarts: a.restarts,
        seed: a.seed,
        oracle_samples: a.oracle_samples,
        ..MaximizeOptions::default()
    };
    let m = model.pair_maximum(a.pair, &options)?;
    let d = &m.diagnostics;
    let known = a.pair.known_maximum();

    let mut out = io::stdout().lock();
    writeln!(out, "pair = {} ({})", a.pair.roman(), a.pair.description())?;
    writeln!(out, "max_abs_C = {}", g15(m.value))?;
    writeln!(out, "expected = {}", g15(known))?;
    writeln!(out, "restarts = {}", d.restarts)?;
    writeln!(out, "best_restart = {}", d.best_restart)?;
    writeln!(out, "iterations = {}", d.iterations)?;
    writeln!(out, "converged = {}", d.converged)?;
    writeln!(out, "final_grad_norm = {}", g15(d.final_grad_norm))?;
    if let (Some(om), Some(gap)) = (d.oracle_max, d.oracle_gap) {
        writeln!(out, "oracle_samples = {}", a.oracle_samples)?;
        writeln!(out, "oracle_max = {}", g15(om))?;
        writeln!(out, "oracle_gap = {}", g15(gap))?;
    }
    out.flush()?;

    let err = (m.value - known).abs();
    if err > MAXIMUM_TOL {
        return Err(Failure::Tolerance(format!("|max - expected| = {err:e}")));
    }
    if let Some(om) = d.oracle_max {
        if m.value < om - MAXIMUM_TOL {
            return Err(Failure::Tolerance(format!(
                "sampling found {om}, above the optimizer's {}",
                m.value
            )));
        }
    }
    Ok(())
}
