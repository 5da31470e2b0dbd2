//! Command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 on success, 1 when a verification check fails and 2 for
//! usage or input errors.

mod statefile;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

pub use statefile::{parse_complex, parse_state_file, LabeledBasis, StateFile};

use crate::bounds::{evaluate_all, BoundKind};
use crate::coherence::{coherence, MeasureKind};
use crate::harness::{linspace, run_suite, Suite, ViolationReport};
use crate::numlin::basis_pair_geometry;
use crate::tightsolver::{tight_bound_1d, tight_bound_2d_crosscheck, SolveMethod, SolverOptions};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "quncert", version, about = "Coherence-based uncertainty bounds for qubits")]
pub struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Replace negative bound values by zero in scan output.
    #[arg(long, global = true)]
    pub clamp: bool,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every analytic bound at one (c, P).
    Bounds {
        #[arg(long, value_parser = half_unit)]
        c: f64,
        #[arg(long, value_parser = half_unit)]
        purity: f64,
    },
    /// Tabulate the bounds over a (c, P) grid as CSV.
    Scan {
        #[arg(long, default_value_t = 0.5, value_parser = half_unit)]
        c_start: f64,
        #[arg(long, default_value_t = 1.0, value_parser = half_unit)]
        c_end: f64,
        #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u32).range(2..))]
        c_steps: u32,
        #[arg(long, default_value_t = 0.5, value_parser = half_unit)]
        p_start: f64,
        #[arg(long, default_value_t = 1.0, value_parser = half_unit)]
        p_end: f64,
        #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u32).range(2..))]
        p_steps: u32,
        /// Comma-separated subset of re, cf, l1.
        #[arg(long, value_delimiter = ',', default_values_t = ["re".to_string(), "cf".to_string(), "l1".to_string()])]
        measures: Vec<String>,
        /// Append the numerically tight minimum for each selected measure.
        #[arg(long)]
        tight: bool,
    },
    /// Run a verification suite.
    Verify {
        /// lemmas, bounds, tightness, purification, theorem1 or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Monte Carlo samples per check.
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Numerically tight lower bound for one measure at one (c, P).
    Tight {
        #[arg(long, default_value = "re")]
        measure: String,
        #[arg(long, value_parser = half_unit)]
        c: f64,
        #[arg(long, value_parser = half_unit)]
        purity: f64,
        #[arg(long, default_value_t = 2048)]
        grid_points: usize,
        /// Also brute-force the two-angle problem at this resolution.
        #[arg(long)]
        crosscheck: Option<usize>,
    },
    /// Coherence of a state from a file, with the bounds it must satisfy.
    State { path: PathBuf },
}

fn half_unit(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if (0.5..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside the valid range [0.5, 1]"))
    }
}

/// `value` with 12 significant digits, `%g` style: plain notation for
/// exponents in `[-5, 12)`, scientific otherwise, trailing zeros removed.
pub fn format_sig(value: f64) -> String {
    const DIGITS: usize = 12;
    if value == 0.0 {
        return "0".into();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let sci = format!("{:.*e}", DIGITS - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS as i32).contains(&exp) {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{value:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Exit code for a finished verification run.
pub fn verification_exit_code(reports: &[ViolationReport]) -> i32 {
    if reports.iter().all(ViolationReport::passed) {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

/// Text printed by `verify`: every report followed by a summary line.
pub fn render_reports(reports: &[ViolationReport]) -> String {
    let mut text: String = reports.iter().map(ViolationReport::to_text).collect();
    let passed = reports.iter().filter(|r| r.passed()).count();
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.check_name.as_str()).collect();
    text.push_str(&format!("summary\t{passed}/{} checks passed\n", reports.len()));
    if !failed.is_empty() {
        text.push_str(&format!("failed\t{}\n", failed.join(",")));
    }
    text
}

/// Grid and column selection for `scan`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanSpec {
    pub c_start: f64,
    pub c_end: f64,
    pub c_steps: usize,
    pub p_start: f64,
    pub p_end: f64,
    pub p_steps: usize,
    pub measures: Vec<MeasureKind>,
    pub include_tight: bool,
    pub clamp: bool,
}

impl Default for ScanSpec {
    fn default() -> Self {
        Self {
            c_start: 0.5,
            c_end: 1.0,
            c_steps: 101,
            p_start: 0.5,
            p_end: 1.0,
            p_steps: 101,
            measures: MeasureKind::ALL.to_vec(),
            include_tight: false,
            clamp: false,
        }
    }
}

impl ScanSpec {
    fn bound_columns(&self) -> Vec<BoundKind> {
        BoundKind::ALL.into_iter().filter(|k| self.measures.contains(&k.measure())).collect()
    }

    fn tight_columns(&self) -> Vec<MeasureKind> {
        if self.include_tight {
            MeasureKind::ALL.into_iter().filter(|m| self.measures.contains(m)).collect()
        } else {
            Vec::new()
        }
    }

    pub fn header(&self) -> String {
        let mut cols = vec!["c".to_string(), "purity".to_string()];
        cols.extend(self.bound_columns().iter().map(|k| k.tag().to_string()));
        cols.extend(self.tight_columns().iter().map(|m| format!("tight_{}", m.tag())));
        cols.join(",")
    }
}

/// The CSV produced by `scan`, rows ordered with `c` outer and `P` inner.
pub fn scan_csv(spec: &ScanSpec) -> Result<String> {
    if spec.c_steps < 2 || spec.p_steps < 2 {
        return Err(Error::InvalidInput("grid needs at least 2 steps per axis".into()));
    }
    let cs = linspace(spec.c_start, spec.c_end, spec.c_steps);
    let ps = linspace(spec.p_start, spec.p_end, spec.p_steps);
    let points: Vec<(f64, f64)> = cs.iter().flat_map(|&c| ps.iter().map(move |&p| (c, p))).collect();
    let bounds = spec.bound_columns();
    let tights = spec.tight_columns();
    let opts = SolverOptions::default();
    let rows: Vec<Result<String>> = points
        .par_iter()
        .map(|&(c, purity)| {
            let all = evaluate_all(c, purity)?;
            let mut fields = vec![format_sig(c), format_sig(purity)];
            for kind in &bounds {
                let v = all[kind];
                fields.push(format_sig(if spec.clamp { v.clamped } else { v.raw }));
            }
            for &m in &tights {
                let v = tight_bound_1d(m, c, purity, &opts)?.value;
                fields.push(format_sig(if spec.clamp { v.max(0.0) } else { v }));
            }
            Ok(fields.join(","))
        })
        .collect();
    let mut csv = spec.header();
    csv.push('\n');
    for row in rows {
        csv.push_str(&row?);
        csv.push('\n');
    }
    Ok(csv)
}

/// Table printed by `bounds`.
pub fn bounds_table(c: f64, purity: f64) -> Result<String> {
    let mut text = format!("{:<12} {:>18} {:>18}\n", "bound", "raw", "clamped");
    for (kind, v) in evaluate_all(c, purity)? {
        text.push_str(&format!("{:<12} {:>18} {:>18}\n", kind.tag(), format_sig(v.raw), format_sig(v.clamped)));
    }
    Ok(text)
}

/// Report printed by `tight`.
pub fn tight_report(
    measure: MeasureKind,
    c: f64,
    purity: f64,
    grid_points: usize,
    crosscheck: Option<usize>,
) -> Result<String> {
    let opts = SolverOptions {
        grid_points,
        ..SolverOptions::default()
    };
    let t = tight_bound_1d(measure, c, purity, &opts)?;
    let mut text = format!(
        "measure\t{}\nc\t{}\npurity\t{}\nvalue\t{}\nargmin_alpha\t{}\nmethod\t{}\n",
        measure.tag(),
        format_sig(c),
        format_sig(purity),
        format_sig(t.value),
        format_sig(t.argmin_alpha),
        t.method.name()
    );
    if let Some(grid) = crosscheck {
        let v = tight_bound_2d_crosscheck(measure, c, purity, grid)?;
        text.push_str(&format!(
            "{}\t{}\ndifference\t{}\n",
            SolveMethod::Grid2dCrosscheck.name(),
            format_sig(v),
            format_sig(v - t.value)
        ));
    }
    Ok(text)
}

/// Report printed by `state`.
pub fn state_report(file: &StateFile) -> Result<String> {
    let rho = &file.rho;
    let d = rho.dim();
    let [first, second] = &file.bases;
    let (c_max, c_min) = basis_pair_geometry(&first.basis, &second.basis)?;
    let purity = rho.purity();
    let mut text = format!(
        "dim\t{d}\npurity\t{}\nc_max\t{}\nc_min\t{}\n",
        format_sig(purity),
        format_sig(c_max),
        format_sig(c_min)
    );
    let measures: Vec<MeasureKind> = if d == 2 {
        MeasureKind::ALL.to_vec()
    } else {
        vec![MeasureKind::RelativeEntropy, MeasureKind::L1]
    };
    let mut sums = Vec::new();
    for &m in &measures {
        let a = coherence(m, rho, &first.basis)?.value;
        let b = coherence(m, rho, &second.basis)?.value;
        text.push_str(&format!("C_{}[{}]\t{}\n", label(m), first.label, format_sig(a)));
        text.push_str(&format!("C_{}[{}]\t{}\n", label(m), second.label, format_sig(b)));
        sums.push((m, a + b));
    }
    if d != 2 {
        text.push_str("bounds\tqubit only, skipped\n");
        return Ok(text);
    }
    let all = evaluate_all(c_max.clamp(0.5, 1.0), purity.clamp(0.5, 1.0))?;
    for (kind, v) in all {
        let sum = sums.iter().find(|(m, _)| *m == kind.measure()).expect("all measures evaluated").1;
        let status = if sum >= v.raw - 1e-9 { "satisfied" } else { "violated" };
        text.push_str(&format!("{}\t{}\t{}\t{status}\n", kind.tag(), format_sig(v.raw), format_sig(sum)));
    }
    Ok(text)
}

fn label(m: MeasureKind) -> &'static str {
    match m {
        MeasureKind::RelativeEntropy => "RE",
        MeasureKind::Formation => "CF",
        MeasureKind::L1 => "l1",
    }
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(cli: &Cli, text: &str, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("cannot write output: {e}"))),
    }
}

/// Output text, and whether every verification check passed.
fn execute(cli: &Cli) -> std::result::Result<(String, bool), Failure> {
    Ok(match &cli.command {
        Command::Bounds { c, purity } => (bounds_table(*c, *purity)?, true),
        Command::Scan {
            c_start,
            c_end,
            c_steps,
            p_start,
            p_end,
            p_steps,
            measures,
            tight,
        } => {
            let mut selected = measures
                .iter()
                .map(|m| m.parse::<MeasureKind>())
                .collect::<Result<Vec<_>>>()?;
            selected.sort();
            selected.dedup();
            let spec = ScanSpec {
                c_start: *c_start,
                c_end: *c_end,
                c_steps: *c_steps as usize,
                p_start: *p_start,
                p_end: *p_end,
                p_steps: *p_steps as usize,
                measures: selected,
                include_tight: *tight,
                clamp: cli.clamp,
            };
            (scan_csv(&spec)?, true)
        }
        Command::Verify { suite, samples } => {
            let suite: Suite = suite.parse()?;
            let reports = run_suite(suite, cli.seed, *samples)?;
            (render_reports(&reports), verification_exit_code(&reports) == EXIT_OK)
        }
        Command::Tight {
            measure,
            c,
            purity,
            grid_points,
            crosscheck,
        } => {
            let measure: MeasureKind = measure.parse()?;
            (tight_report(measure, *c, *purity, *grid_points, *crosscheck)?, true)
        }
        Command::State { path } => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            let file = parse_state_file(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            (state_report(&file)?, true)
        }
    })
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Failure::Usage(format!("cannot start thread pool: {e}"))),
        },
        None => execute(&cli),
    };
    let result = result.and_then(|(text, passed)| {
        emit(&cli, &text, out)?;
        if passed {
            Ok(())
        } else {
            Err(Failure::Verification)
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Verification) => EXIT_FAILED,
        Err(Failure::Usage(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(0.5), "0.5");
        assert_eq!(format_sig(0.8724293398564681), "0.872429339856");
        assert_eq!(format_sig(-0.0227262), "-0.0227262");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(2.0 / 3.0 * 1e-7), "6.66666666667e-08");
        assert_eq!(format_sig(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(1e-5), "0.00001");
    }

    #[test]
    fn half_unit_range() {
        assert!(half_unit("0.5").is_ok());
        assert!(half_unit("1").is_ok());
        assert!(half_unit("0.3").unwrap_err().contains("[0.5, 1]"));
        assert!(half_unit("x").is_err());
    }

    #[test]
    fn small_scan() {
        let spec = ScanSpec {
            c_steps: 2,
            p_steps: 2,
            include_tight: true,
            ..ScanSpec::default()
        };
        let csv = scan_csv(&spec).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "c,purity,mu_re,berta_re,sanchez_re,korzekwa_re,thm2_re,thm3_cf,thm4_l1,tight_re,tight_cf,tight_l1"
        );
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0.5,0.5,"));
        assert!(lines[2].starts_with("0.5,1,1,1,1,1,0.872429339856,0.872429339856,1,1,"));
    }
}
