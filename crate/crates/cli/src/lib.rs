//! `rrcyclic` command-line front end: `analyze`, `verify` and `sweep`.

pub mod codefile;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rrcyclic::codes::{CyclicCode, MAX_LENGTH};
use rrcyclic::galois::{Field, FieldSpec};
use rrcyclic::random::random_code;
use rrcyclic::weights::{analyze, AnalyzeError, WeightReport, DEFAULT_WEIGHT_CAP};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_FILE: i32 = 66;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Parser, Debug)]
#[command(name = "rrcyclic", version, about = "Torsional degrees and minimum weights of cyclic codes over F_q[u]/<u^4>")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form t3 and minimum weights of the code in FILE.
    Analyze {
        file: PathBuf,
        /// Cross-check against the span oracle and, when feasible, codeword enumeration.
        #[arg(long)]
        verify: bool,
        /// Largest number of codewords the enumeration oracle may visit.
        #[arg(long, default_value_t = DEFAULT_WEIGHT_CAP)]
        enum_cap: u64,
        #[arg(long)]
        json: bool,
        /// Also report enumerated minima with codewords read in the s-basis.
        #[arg(long)]
        s_basis_diagnostic: bool,
    },
    /// Compare formulas with the oracles on seeded random codes.
    Verify {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_WEIGHT_CAP)]
        enum_cap: u64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate random codes over a (p, m, k) grid from a TOML config and write CSV.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    File(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::File(_) => EXIT_FILE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::File(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<AnalyzeError> for CliError {
    fn from(e: AnalyzeError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("write failed: {e}"))
    }
}

/// Runs the command line `args` (program name first); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Analyze {
            file,
            verify,
            enum_cap,
            json,
            s_basis_diagnostic,
        } => cmd_analyze(&file, verify, enum_cap, json, s_basis_diagnostic, out),
        Command::Verify {
            p,
            m,
            k,
            trials,
            seed,
            enum_cap,
            json,
        } => cmd_verify(p, m, k, trials, seed, enum_cap, json, out),
        Command::Sweep { config, out: path } => cmd_sweep(&config, path.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::File(format!("{}: {e}", path.display())))
}

fn cmd_analyze(
    path: &Path,
    verify: bool,
    cap: u64,
    json: bool,
    s_basis: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let text = read_file(path)?;
    let (_, code) = codefile::parse_code_file(&text).map_err(|e| CliError::File(format!("{}: {e}", path.display())))?;
    let report = analyze(&code, verify, cap)?;
    let s_minima = s_basis.then(|| report::s_basis_minima(&code, cap));
    if json {
        report::write_analyze_json(out, &code, &report, s_minima.as_ref())?;
    } else {
        report::write_analyze_text(out, &code, &report, s_minima.as_ref())?;
    }
    let ok = report.verified.as_ref().map_or(true, |v| v.agrees());
    Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
}

fn make_field(p: u32, m: u32, k: u32) -> Result<Field, String> {
    let field = FieldSpec::with_default_modulus(p, m).map_err(|e| format!("field p={p} m={m}: {e}"))?;
    let ok = k >= 1 && (p as usize).checked_pow(k).is_some_and(|n| n <= MAX_LENGTH);
    if !ok {
        return Err(format!("length p^k with p={p}, k={k} must satisfy k >= 1 and p^k <= {MAX_LENGTH}"));
    }
    Ok(Arc::new(field))
}

/// One random code and its report, drawn from its own ChaCha8 stream.
pub struct Trial {
    pub index: usize,
    pub code: CyclicCode,
    pub report: WeightReport,
}

impl Trial {
    pub fn t3_agrees(&self) -> bool {
        self.report.verified.as_ref().is_some_and(|v| v.t3_agrees)
    }

    pub fn weights_checked(&self) -> bool {
        self.report.verified.as_ref().is_some_and(|v| v.enumeration.is_some())
    }

    pub fn agrees(&self) -> bool {
        self.report.verified.as_ref().is_some_and(|v| v.agrees())
    }
}

/// Trial `index` of stream `stream` under `seed`; independent of evaluation order.
pub fn run_trial(field: &Field, k: u32, seed: u64, stream: u64, index: usize, cap: u64) -> Result<Trial, AnalyzeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let code = random_code(field, k, &mut rng);
    let report = analyze(&code, true, cap)?;
    Ok(Trial { index, code, report })
}

#[derive(Serialize)]
struct VerifySummary {
    p: u32,
    m: u32,
    k: u32,
    n: usize,
    trials: usize,
    seed: u64,
    formula_oracle_pass: usize,
    weights_checked: usize,
    weights_pass: usize,
    weights_skipped: usize,
    mismatches: Vec<report::Mismatch>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    p: u32,
    m: u32,
    k: u32,
    trials: usize,
    seed: u64,
    cap: u64,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let field = make_field(p, m, k).map_err(CliError::Usage)?;
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(&field, k, seed, i as u64, i, cap))
        .collect::<Result<_, _>>()?;
    let n = (p as usize).pow(k);
    let summary = VerifySummary {
        p,
        m,
        k,
        n,
        trials,
        seed,
        formula_oracle_pass: results.iter().filter(|t| t.t3_agrees()).count(),
        weights_checked: results.iter().filter(|t| t.weights_checked()).count(),
        weights_pass: results.iter().filter(|t| t.weights_checked() && t.agrees()).count(),
        weights_skipped: results.iter().filter(|t| !t.weights_checked()).count(),
        mismatches: results.iter().filter(|t| !t.agrees()).map(report::Mismatch::of).collect(),
    };
    if json {
        serde_json::to_writer_pretty(&mut *out, &summary).map_err(|e| CliError::Internal(e.to_string()))?;
        writeln!(out)?;
    } else {
        writeln!(out, "verify p={p} m={m} k={k} n={n} trials={trials} seed={seed}")?;
        for mm in &summary.mismatches {
            writeln!(out, "{}", mm.line())?;
        }
        writeln!(out, "{}/{} formula==oracle", summary.formula_oracle_pass, trials)?;
        writeln!(
            out,
            "{}/{} table==enumeration ({} skipped over the enumeration cap)",
            summary.weights_pass, summary.weights_checked, summary.weights_skipped
        )?;
    }
    Ok(if summary.mismatches.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
}

/// Sweep configuration; every (p, m, k) combination of the grids is a cell.
#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub p: Vec<u32>,
    #[serde(default = "default_m")]
    pub m: Vec<u32>,
    pub k: Vec<u32>,
    pub trials: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    #[serde(default = "default_cap")]
    pub enum_cap: u64,
}

fn default_m() -> Vec<u32> {
    vec![1]
}

fn default_cap() -> u64 {
    DEFAULT_WEIGHT_CAP
}

/// CSV columns, in order.
pub const SWEEP_HEADER: [&str; 9] = ["p", "m", "k", "ideal_type", "degrees", "t3", "wt_sp", "wt_rt", "verified"];

fn cmd_sweep(config_path: &Path, out_path: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = read_file(config_path)?;
    let config: SweepConfig = toml::from_str(&text).map_err(|e| CliError::File(format!("{}: {e}", config_path.display())))?;
    let target = out_path
        .map(Path::to_path_buf)
        .or_else(|| config.out.clone())
        .ok_or_else(|| CliError::Usage("no output path: pass --out or set `out` in the config".into()))?;
    if config.trials == 0 {
        return Err(CliError::File(format!("{}: trials must be at least 1", config_path.display())));
    }
    let mut cells = Vec::new();
    for &p in &config.p {
        for &m in &config.m {
            for &k in &config.k {
                let field = make_field(p, m, k).map_err(|e| CliError::File(format!("{}: {e}", config_path.display())))?;
                cells.push((p, m, k, field));
            }
        }
    }
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..config.trials).map(move |t| (c, t)))
        .collect();
    let results: Vec<Trial> = jobs
        .par_iter()
        .map(|&(c, t)| {
            let (_, _, k, field) = &cells[c];
            let stream = ((c as u64) << 32) | t as u64;
            run_trial(field, *k, config.seed, stream, t, config.enum_cap)
        })
        .collect::<Result<_, _>>()?;
    let file = std::fs::File::create(&target).map_err(|e| CliError::File(format!("{}: {e}", target.display())))?;
    let mut w = csv::Writer::from_writer(file);
    let csv_err = |e: csv::Error| CliError::File(format!("{}: {e}", target.display()));
    w.write_record(SWEEP_HEADER).map_err(csv_err)?;
    let mut mismatches = 0;
    for (&(c, _), trial) in jobs.iter().zip(&results) {
        let (p, m, k, _) = &cells[c];
        let verified = if !trial.agrees() {
            mismatches += 1;
            "mismatch"
        } else if trial.weights_checked() {
            "t3+weights"
        } else {
            "t3"
        };
        w.write_record([
            p.to_string(),
            m.to_string(),
            k.to_string(),
            trial.code.ideal_type().to_string(),
            report::degrees_field(&trial.code),
            trial.report.t3.to_string(),
            trial.report.wt_sp.to_string(),
            trial.report.wt_rt.to_string(),
            verified.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::File(format!("{}: {e}", target.display())))?;
    writeln!(
        out,
        "wrote {} rows to {} ({} mismatches)",
        results.len(),
        target.display(),
        mismatches
    )?;
    Ok(if mismatches == 0 { EXIT_OK } else { EXIT_MISMATCH })
}
