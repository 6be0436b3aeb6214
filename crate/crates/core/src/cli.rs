//! Command-line front end: argument model, input parsing and the JSON/CSV
//! writers for each subcommand.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{success_probability_exact, sweep, write_sweep_csv, SweepFamily, SweepRow};
use crate::bases::{
    bell_basis, qubit_choice_basis, qudit_nme_basis, MeasurementBasis, QubitChoice,
};
use crate::error::{Error, Result};
use crate::numfmt::round_sig;
use crate::protocol::{
    derive_correction_table, run_trials, InputSpec, MonteCarloSummary, Transcript,
};
use crate::states::{PauliLabel, ResourceState, UnknownQudit};
use crate::tensor::{C64, EQ_TOL};
use crate::verify::{format_report, run_verify, VerifyConfig};

/// Probe states used when deriving correction tables from the CLI.
pub const CLI_PROBES: usize = 6;

#[derive(Debug, Parser)]
#[command(
    name = "qudit-teleport",
    version,
    about = "Exact simulation of qudit teleportation through maximally and non-maximally entangled resources"
)]
pub struct Cli {
    /// Worker threads for trials and sweep rows (output order does not depend on it).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run teleportation trials and emit one transcript per line.
    Teleport(TeleportArgs),
    /// Tabulate success probabilities along a resource family.
    Sweep(SweepArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
    /// Dump a measurement basis.
    Basis(BasisArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisChoice {
    Bell,
    Nme,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    QubitN,
    DirichletRandom,
    TwoLevelQudit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QubitChoiceArg {
    DirectConj,
    DirectInverse,
    InverseInverse,
    InverseConj,
}

impl From<QubitChoiceArg> for QubitChoice {
    fn from(c: QubitChoiceArg) -> Self {
        match c {
            QubitChoiceArg::DirectConj => QubitChoice::DirectConj,
            QubitChoiceArg::DirectInverse => QubitChoice::DirectInverse,
            QubitChoiceArg::InverseInverse => QubitChoice::InverseInverse,
            QubitChoiceArg::InverseConj => QubitChoice::InverseConj,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ResourceArgs {
    /// Local dimension; inferred from --lambda when omitted.
    #[arg(long)]
    pub d: Option<usize>,
    /// Schmidt weights: "uniform", comma-separated reals, or "n=<complex>".
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Qubit resource N(|00> + n|11>) with the given complex n.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda")]
    pub lambda_from_n: Option<String>,
    /// Phase label per class for the heralding vectors (comma-separated).
    #[arg(long)]
    pub l_choice: Option<String>,
    /// Use the qubit basis matched to n under one of the four parameter choices.
    #[arg(long, value_enum)]
    pub qubit_choice: Option<QubitChoiceArg>,
}

#[derive(Debug, Clone, Args)]
pub struct TeleportArgs {
    #[command(flatten)]
    pub resource: ResourceArgs,
    #[arg(long, value_enum, default_value = "nme")]
    pub basis: BasisChoice,
    /// "random", "uniform", "basis:<k>", or comma-separated complex amplitudes.
    #[arg(long, default_value = "random", allow_hyphen_values = true)]
    pub state: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Local dimension (defaults to 2 for qubit-n, 3 otherwise).
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Monte Carlo trials per row; 0 leaves the Monte Carlo columns empty.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Dimension or inclusive range, e.g. "3" or "2..6".
    #[arg(long, default_value = "2..6")]
    pub d: String,
    /// Replace every group's tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BasisArgs {
    #[command(flatten)]
    pub resource: ResourceArgs,
    #[arg(long, value_enum, alias = "basis", default_value = "nme")]
    pub kind: BasisChoice,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `a`, `a+bi`, `a-bi`, `bi`, `i`, `-i`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Config(format!("cannot parse complex number {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let real = |x: &str| {
        x.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(bad)
    };
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(C64::new(real(&t)?, 0.0));
    };
    let imag = |x: &str| match x {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(x),
    };
    // split before the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    Ok(match split {
        Some(k) => C64::new(real(&body[..k])?, imag(&body[k..])?),
        None => C64::new(0.0, imag(body)?),
    })
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',').map(|x| f(x.trim())).collect()
}

/// Resource and basis settings resolved from the common flags.
#[derive(Debug, Clone)]
pub struct ResolvedResource {
    pub resource: ResourceState,
    pub qubit_n: Option<C64>,
    pub l_choice: Vec<usize>,
    pub qubit_choice: Option<QubitChoice>,
}

impl ResourceArgs {
    pub fn resolve(&self) -> Result<ResolvedResource> {
        let n_spec = match (&self.lambda, &self.lambda_from_n) {
            (Some(l), None) => l.strip_prefix("n=").map(str::to_owned),
            (None, Some(n)) => Some(n.clone()),
            _ => None,
        };
        let (resource, qubit_n) = if let Some(n) = n_spec {
            if let Some(d) = self.d.filter(|&d| d != 2) {
                return Err(Error::Config(format!(
                    "a qubit resource needs d = 2, got {d}"
                )));
            }
            let n = parse_complex(&n)?;
            (ResourceState::qubit(n)?, Some(n))
        } else {
            match self.lambda.as_deref() {
                None | Some("uniform") => {
                    let d = self.d.ok_or_else(|| {
                        Error::Config("--d is required with a uniform spectrum".into())
                    })?;
                    if d < 2 {
                        return Err(Error::Config(format!("d must be at least 2, got {d}")));
                    }
                    (ResourceState::maximal(d)?, None)
                }
                Some(list) => {
                    let lambdas = parse_list(list, |x| {
                        x.parse::<f64>()
                            .map_err(|_| Error::Config(format!("bad weight {x:?}")))
                    })?;
                    if let Some(d) = self.d.filter(|&d| d != lambdas.len()) {
                        return Err(Error::Config(format!(
                            "--d {d} does not match {} weights",
                            lambdas.len()
                        )));
                    }
                    (ResourceState::from_lambdas(&lambdas)?, None)
                }
            }
        };
        let d = resource.d();
        let l_choice = match &self.l_choice {
            None => vec![0; d],
            Some(s) => {
                let v = parse_list(s, |x| {
                    x.parse::<usize>()
                        .map_err(|_| Error::Config(format!("bad phase label {x:?}")))
                })?;
                if v.len() != d || v.iter().any(|&l| l >= d) {
                    return Err(Error::Config(format!(
                        "--l-choice needs {d} labels in 0..{d}"
                    )));
                }
                v
            }
        };
        let qubit_choice = self.qubit_choice.map(QubitChoice::from);
        if qubit_choice.is_some() && qubit_n.is_none() {
            return Err(Error::Config(
                "--qubit-choice needs a qubit resource (--lambda-from-n)".into(),
            ));
        }
        Ok(ResolvedResource {
            resource,
            qubit_n,
            l_choice,
            qubit_choice,
        })
    }
}

impl ResolvedResource {
    pub fn basis(&self, choice: BasisChoice) -> Result<MeasurementBasis> {
        let d = self.resource.d();
        match choice {
            BasisChoice::Bell => {
                if !self.resource.is_maximal(EQ_TOL) {
                    return Err(Error::Precondition(
                        "the Bell-basis protocol needs a maximally entangled resource".into(),
                    ));
                }
                bell_basis(d)
            }
            BasisChoice::Nme => match (self.qubit_choice, self.qubit_n) {
                (Some(c), Some(n)) => qubit_choice_basis(n, c),
                _ => qudit_nme_basis(&self.resource, &self.l_choice),
            },
        }
    }
}

/// Parses the `--state` flag.
pub fn parse_state(spec: &str, d: usize) -> Result<InputSpec> {
    match spec {
        "random" => Ok(InputSpec::Random),
        "uniform" => Ok(InputSpec::Fixed(UnknownQudit::uniform(d))),
        s if s.starts_with("basis:") => {
            let k: usize = s["basis:".len()..]
                .parse()
                .map_err(|_| Error::Config(format!("bad basis state {s:?}")))?;
            if k >= d {
                return Err(Error::Config(format!(
                    "basis state {k} out of range for d = {d}"
                )));
            }
            Ok(InputSpec::Fixed(UnknownQudit::basis(d, k)))
        }
        s => {
            let amps = parse_list(s, parse_complex)?;
            if amps.len() != d {
                return Err(Error::Config(format!(
                    "state has {} amplitudes, expected {d}",
                    amps.len()
                )));
            }
            let q = UnknownQudit::new(amps).map_err(|e| Error::Config(format!("state: {e}")))?;
            Ok(InputSpec::Fixed(q))
        }
    }
}

#[derive(Serialize)]
struct OutcomeJson {
    m: usize,
    slot: usize,
}

#[derive(Serialize)]
struct TranscriptJson<'a> {
    d: usize,
    lambda: Vec<f64>,
    basis_kind: &'static str,
    outcome: OutcomeJson,
    message_bits: String,
    designated: bool,
    correction: Option<PauliLabel>,
    fidelity: f64,
    success: bool,
    seed: u64,
    rng: &'a str,
}

impl<'a> From<&'a Transcript> for TranscriptJson<'a> {
    fn from(t: &'a Transcript) -> Self {
        TranscriptJson {
            d: t.input.d(),
            lambda: t.lambdas.iter().map(|&l| round_sig(l)).collect(),
            basis_kind: t.basis_kind.as_str(),
            outcome: OutcomeJson {
                m: t.class_m,
                slot: t.slot,
            },
            message_bits: format!(
                "{:0width$b}",
                t.message.bits,
                width = t.message.width as usize
            ),
            designated: t.designated,
            correction: t.correction,
            fidelity: round_sig(t.fidelity),
            success: t.success,
            seed: t.seed,
            rng: t.rng,
        }
    }
}

#[derive(Serialize)]
struct SummaryJson {
    trials: usize,
    success_count: usize,
    empirical_p: f64,
    exact_p: f64,
    stderr: f64,
    mean_fidelity_on_success: Option<f64>,
}

#[derive(Serialize)]
struct SummaryLine {
    summary: SummaryJson,
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Io(e.to_string())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Exact heralded success probability for the chosen protocol.
fn exact_success(resolved: &ResolvedResource, choice: BasisChoice) -> Result<f64> {
    match choice {
        BasisChoice::Bell => Ok(1.0),
        BasisChoice::Nme => success_probability_exact(&resolved.resource),
    }
}

pub fn cmd_teleport(args: &TeleportArgs, out: &mut dyn Write) -> Result<()> {
    if args.trials == 0 {
        return Err(Error::Config("--trials must be at least 1".into()));
    }
    let resolved = args.resource.resolve()?;
    let basis = resolved.basis(args.basis)?;
    let d = basis.d();
    let input = parse_state(&args.state, d)?;
    let table = derive_correction_table(&resolved.resource, &basis, CLI_PROBES, args.seed)?;
    let transcripts = run_trials(
        &input,
        &resolved.resource,
        &basis,
        &table,
        args.trials,
        args.seed,
    )?;
    let summary = MonteCarloSummary::from_transcripts(&transcripts);
    let summary = SummaryJson {
        trials: summary.trials,
        success_count: summary.success_count,
        empirical_p: round_sig(summary.empirical_p),
        exact_p: round_sig(exact_success(&resolved, args.basis)?),
        stderr: round_sig(summary.stderr),
        mean_fidelity_on_success: summary.mean_fidelity_on_success.map(round_sig),
    };
    match args.format {
        OutputFormat::Json => {
            for t in &transcripts {
                serde_json::to_writer(&mut *out, &TranscriptJson::from(t)).map_err(json_err)?;
                writeln!(out)?;
            }
            serde_json::to_writer(&mut *out, &SummaryLine { summary }).map_err(json_err)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "d",
                "basis_kind",
                "outcome_m",
                "outcome_slot",
                "message_bits",
                "designated",
                "fidelity",
                "success",
                "seed",
            ])
            .map_err(csv_err)?;
            for t in &transcripts {
                let j = TranscriptJson::from(t);
                w.write_record([
                    j.d.to_string(),
                    j.basis_kind.to_string(),
                    j.outcome.m.to_string(),
                    j.outcome.slot.to_string(),
                    j.message_bits,
                    j.designated.to_string(),
                    crate::numfmt::fmt_num(t.fidelity),
                    j.success.to_string(),
                    j.seed.to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
        }
        OutputFormat::Text => {
            return Err(Error::Config(
                "teleport supports --format json or csv".into(),
            ))
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRowJson<'a> {
    d: usize,
    lambda_spec: &'a str,
    entropy_bits: f64,
    p_succ_exact: f64,
    p_succ_mc: Option<f64>,
    mc_stderr: Option<f64>,
    #[serde(rename = "repetitions_R")]
    repetitions_r: f64,
    basis_entropy_bits: f64,
}

impl<'a> From<&'a SweepRow> for SweepRowJson<'a> {
    fn from(r: &'a SweepRow) -> Self {
        SweepRowJson {
            d: r.d,
            lambda_spec: &r.lambda_spec,
            entropy_bits: round_sig(r.entropy_bits),
            p_succ_exact: round_sig(r.p_succ_exact),
            p_succ_mc: r.p_succ_mc.map(round_sig),
            mc_stderr: r.mc_stderr.map(round_sig),
            repetitions_r: round_sig(r.repetitions_r),
            basis_entropy_bits: round_sig(r.basis_entropy_bits),
        }
    }
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let family = match args.family {
        FamilyArg::QubitN => SweepFamily::QubitN,
        FamilyArg::DirichletRandom => SweepFamily::DirichletRandom,
        FamilyArg::TwoLevelQudit => SweepFamily::TwoLevelQudit,
    };
    let d = args
        .d
        .unwrap_or(if family == SweepFamily::QubitN { 2 } else { 3 });
    let rows = sweep(family, d, args.points, args.trials, args.seed)?;
    match args.format {
        OutputFormat::Csv => write_sweep_csv(&rows, out),
        OutputFormat::Json => {
            let rows: Vec<SweepRowJson> = rows.iter().map(SweepRowJson::from).collect();
            serde_json::to_writer_pretty(&mut *out, &rows).map_err(json_err)?;
            writeln!(out)?;
            Ok(())
        }
        OutputFormat::Text => Err(Error::Config("sweep supports --format csv or json".into())),
    }
}

/// Parses "3", "2..6" or "2-6".
pub fn parse_d_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Config(format!("bad dimension range {s:?}"));
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = if let Some((a, b)) = s.split_once("..") {
        (num(a)?, num(b.trim_start_matches('='))?)
    } else if let Some((a, b)) = s.split_once('-') {
        (num(a)?, num(b)?)
    } else {
        let d = num(s)?;
        (d, d)
    };
    Ok((lo, hi))
}

#[derive(Serialize)]
struct CheckJson {
    group: &'static str,
    max_error: f64,
    tolerance: f64,
    passed: bool,
}

/// Runs the invariant suite; returns whether every group passed.
pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let (d_min, d_max) = parse_d_range(&args.d)?;
    let defaults = VerifyConfig::default();
    if let Some(t) = args.tolerance.filter(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::Config(format!("bad tolerance {t}")));
    }
    let cfg = VerifyConfig {
        d_min,
        d_max,
        tolerance: args.tolerance,
        seed: args.seed.unwrap_or(defaults.seed),
    };
    let results = run_verify(&cfg)?;
    match args.format {
        OutputFormat::Text => write!(out, "{}", format_report(&cfg, &results))?,
        OutputFormat::Json => {
            let rows: Vec<CheckJson> = results
                .iter()
                .map(|r| CheckJson {
                    group: r.group,
                    max_error: round_sig(r.max_error),
                    tolerance: r.tolerance,
                    passed: r.passed,
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &rows).map_err(json_err)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["group", "max_error", "tolerance", "passed"])
                .map_err(csv_err)?;
            for r in &results {
                w.write_record([
                    r.group.to_string(),
                    format!("{:e}", round_sig(r.max_error)),
                    format!("{:e}", r.tolerance),
                    r.passed.to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
        }
    }
    Ok(results.iter().all(|r| r.passed))
}

#[derive(Serialize)]
struct BasisVectorJson {
    index: usize,
    class_m: usize,
    slot: usize,
    phase_l: Option<usize>,
    designated: bool,
    norm_const: Option<f64>,
    entropy_bits: f64,
    amplitudes: Vec<[f64; 2]>,
}

pub fn cmd_basis(args: &BasisArgs, out: &mut dyn Write) -> Result<()> {
    let resolved = args.resource.resolve()?;
    let basis = resolved.basis(args.kind)?;
    let d = basis.d();
    let rows = basis
        .vectors()
        .iter()
        .enumerate()
        .map(|(index, v)| {
            Ok(BasisVectorJson {
                index,
                class_m: v.class_m,
                slot: v.slot,
                phase_l: v.phase_l,
                designated: v.designated,
                norm_const: v.norm_const.map(round_sig),
                entropy_bits: round_sig(v.entropy(d)?),
                amplitudes: v
                    .ket
                    .iter()
                    .map(|c| [round_sig(c.re) + 0.0, round_sig(c.im) + 0.0])
                    .collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    serde_json::to_writer_pretty(&mut *out, &rows).map_err(json_err)?;
    writeln!(out)?;
    Ok(())
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

/// Executes a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    let code = match &cli.command {
        Command::Teleport(a) => {
            let mut out = open_out(&a.out)?;
            cmd_teleport(a, &mut out)?;
            out.flush()?;
            0
        }
        Command::Sweep(a) => {
            let mut out = open_out(&a.out)?;
            cmd_sweep(a, &mut out)?;
            out.flush()?;
            0
        }
        Command::Verify(a) => {
            let mut out = open_out(&a.out)?;
            let ok = cmd_verify(a, &mut out)?;
            out.flush()?;
            if ok {
                0
            } else {
                4
            }
        }
        Command::Basis(a) => {
            let mut out = open_out(&a.out)?;
            cmd_basis(a, &mut out)?;
            out.flush()?;
            0
        }
    };
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0.7").unwrap(), C64::new(0.7, 0.0));
        assert_eq!(parse_complex("0.3+0.4i").unwrap(), C64::new(0.3, 0.4));
        assert_eq!(parse_complex("-0.3-0.4i").unwrap(), C64::new(-0.3, -0.4));
        assert_eq!(parse_complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e-3i").unwrap(), C64::new(1e-3, 2e-3));
        assert_eq!(parse_complex(" 1 - i ").unwrap(), C64::new(1.0, -1.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
        assert!(parse_complex("inf").is_err());
    }

    #[test]
    fn d_ranges() {
        assert_eq!(parse_d_range("2..6").unwrap(), (2, 6));
        assert_eq!(parse_d_range("2..=4").unwrap(), (2, 4));
        assert_eq!(parse_d_range("3-5").unwrap(), (3, 5));
        assert_eq!(parse_d_range("2").unwrap(), (2, 2));
        assert!(parse_d_range("x").is_err());
    }

    #[test]
    fn state_specs() {
        assert_eq!(parse_state("random", 3).unwrap(), InputSpec::Random);
        assert!(matches!(
            parse_state("basis:2", 3).unwrap(),
            InputSpec::Fixed(_)
        ));
        assert!(parse_state("basis:3", 3).is_err());
        assert!(parse_state("0.6,0.8i", 2).is_ok());
        // 0.6² + 0.7² is not within 1e-8 of one
        assert!(parse_state("0.6,0.7", 2).is_err());
        assert!(parse_state("1,0,0", 2).is_err());
    }

    fn res(d: Option<usize>, lambda: Option<&str>) -> ResourceArgs {
        ResourceArgs {
            d,
            lambda: lambda.map(str::to_owned),
            lambda_from_n: None,
            l_choice: None,
            qubit_choice: None,
        }
    }

    #[test]
    fn resource_resolution() {
        let r = res(None, Some("0.5,0.25,0.25")).resolve().unwrap();
        assert_eq!(r.resource.d(), 3);
        let r = res(Some(4), Some("uniform")).resolve().unwrap();
        assert!(r.resource.is_maximal(1e-12));
        let r = res(None, Some("n=0.5+0.5i")).resolve().unwrap();
        assert_eq!(r.qubit_n, Some(C64::new(0.5, 0.5)));
        assert!(res(Some(3), Some("n=0.5")).resolve().is_err());
        assert!(res(Some(2), Some("0.5,0.25,0.25")).resolve().is_err());
        assert!(res(None, None).resolve().is_err());
        assert!(res(None, Some("0.5,x")).resolve().is_err());
        // weights are rescaled
        let r = res(None, Some("2,1,1")).resolve().unwrap();
        assert!((r.resource.lambdas()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bell_needs_maximal_resource() {
        let r = res(None, Some("0.7,0.3")).resolve().unwrap();
        assert!(matches!(
            r.basis(BasisChoice::Bell),
            Err(Error::Precondition(_))
        ));
        let r = res(None, Some("1,0,0")).resolve().unwrap();
        assert!(matches!(
            r.basis(BasisChoice::Nme),
            Err(Error::RankDeficient { .. })
        ));
    }
}
