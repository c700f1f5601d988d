//! Command-line front end: argument parsing, CSV/JSON emission and the
//! `--verify` report.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};

use crate::experiment::{run_transfer, sweep, LabelPolicy, Representations, SweepReport, TransferReport};
use crate::verify::run_checks;
use crate::walk::{validate_labels, Family, ModelSpec, Walk, WalkModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Stdout,
    Path(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: Family,
    /// Graph size; `None` only in sweep mode.
    pub n: Option<usize>,
    pub sender: usize,
    pub receiver: usize,
    pub steps: Option<u64>,
    pub reprs: Representations,
    pub format: Format,
    pub output: Output,
    pub seed: u64,
    pub verify: bool,
    pub sweep: Option<Vec<usize>>,
}

impl RunConfig {
    pub fn model_spec(&self) -> Option<ModelSpec> {
        Some(ModelSpec { family: self.family, n: self.n?, sender: self.sender, receiver: self.receiver })
    }
}

#[derive(Debug)]
pub enum CliError {
    /// `--help` or `--version` output; not an error.
    Info(String),
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Runtime(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pst", version, about = "Quantum-walk state transfer between two marked vertices")]
struct Args {
    /// Walk family: star, complete-loops or szegedy
    #[arg(long, value_parser = parse_family)]
    model: Family,
    /// Number of vertices (external vertices for the star graph)
    #[arg(long, required_unless_present = "sweep")]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    sender: usize,
    #[arg(long, default_value_t = 2)]
    receiver: usize,
    /// Number of steps (default: three times the predicted transfer time)
    #[arg(long)]
    steps: Option<u64>,
    /// Comma list of full, reduced, analytic
    #[arg(long = "repr", default_value = "full,reduced,analytic", value_parser = Representations::parse_list)]
    reprs: Representations,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path, or "-" for standard output
    #[arg(long, default_value = "-")]
    out: String,
    /// Seed for the random states used by --verify
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run the invariant checks for the model instead of a transfer
    #[arg(long, conflicts_with = "sweep")]
    verify: bool,
    /// Comma list of sizes to sweep
    #[arg(long, value_delimiter = ',')]
    sweep: Option<Vec<usize>>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;

    if let Some(sizes) = &args.sweep {
        for &n in sizes {
            validate_labels(args.model, n, args.sender, args.receiver)
                .map_err(|e| CliError::Usage(format!("error: invalid value for '--sweep': {e}\n")))?;
        }
    } else {
        let n = args.n.expect("clap enforces --n without --sweep");
        validate_labels(args.model, n, args.sender, args.receiver)
            .map_err(|e| CliError::Usage(format!("error: invalid value for '--n/--sender/--receiver': {e}\n")))?;
    }
    if args.reprs == Representations::NONE {
        return Err(CliError::Usage("error: '--repr' selects no representation\n".into()));
    }

    let output = match args.out.as_str() {
        "-" => Output::Stdout,
        path => Output::Path(PathBuf::from(path)),
    };
    Ok(RunConfig {
        family: args.model,
        n: args.n,
        sender: args.sender,
        receiver: args.receiver,
        steps: args.steps,
        reprs: args.reprs,
        format: args.format,
        output,
        seed: args.seed,
        verify: args.verify,
        sweep: args.sweep,
    })
}

fn fixed(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.12}")).unwrap_or_default()
}

/// Serializes a transfer report as CSV or JSON.
pub fn emit_report(report: &TransferReport, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("t,fidelity_full,fidelity_reduced,fidelity_analytic\n");
            for p in &report.series {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    p.t,
                    fixed(p.fidelity_full),
                    fixed(p.fidelity_reduced),
                    fixed(p.fidelity_analytic)
                );
            }
            out
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

pub fn emit_sweep(report: &SweepReport, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("n,predicted_T,peak_step,peak_fidelity\n");
            for row in &report.rows {
                let _ = writeln!(out, "{},{},{},{:.12}", row.n, row.predicted_t, row.peak_step, row.peak_fidelity);
            }
            out
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

fn write_output(output: &Output, text: &str) -> Result<(), CliError> {
    let result = match output {
        Output::Stdout => io::stdout().lock().write_all(text.as_bytes()),
        Output::Path(path) => File::create(path).and_then(|mut f| f.write_all(text.as_bytes())),
    };
    result.map_err(|e| {
        let target = match output {
            Output::Stdout => "standard output".to_string(),
            Output::Path(p) => p.display().to_string(),
        };
        CliError::Runtime(format!("cannot write {target}: {e}"))
    })
}

fn runtime(e: crate::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Executes a parsed configuration.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    if let Some(sizes) = &config.sweep {
        let labels = LabelPolicy { sender: config.sender, receiver: config.receiver };
        let report = sweep(config.family, sizes, labels).map_err(runtime)?;
        return write_output(&config.output, &emit_sweep(&report, config.format));
    }

    let spec = config.model_spec().expect("validated");
    let model = WalkModel::from_spec(spec).map_err(runtime)?;

    if config.verify {
        let checks = run_checks(&model, config.seed).map_err(runtime)?;
        let mut text = String::new();
        for c in &checks {
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(text, "{verdict} {}: {:.3e} (tolerance {:.1e})", c.name, c.value, c.tolerance);
        }
        write_output(&config.output, &text)?;
        return match checks.iter().filter(|c| !c.passed()).count() {
            0 => Ok(()),
            k => Err(CliError::Runtime(format!("{k} check(s) failed"))),
        };
    }

    let steps = config.steps.unwrap_or_else(|| 3 * model.transfer_time());
    let report = run_transfer(&model, steps, config.reprs).map_err(runtime)?;
    write_output(&config.output, &emit_report(&report, config.format))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(line: &str) -> Result<RunConfig, CliError> {
        parse_args(std::iter::once("pst").chain(line.split_whitespace()))
    }

    #[test]
    fn parses_star_defaults() {
        let c = parse("--model star --n 100 --sender 1 --receiver 2").unwrap();
        assert_eq!(c.family, Family::Star);
        assert_eq!(c.n, Some(100));
        assert_eq!(c.steps, None);
        assert_eq!(c.reprs, Representations::ALL);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.output, Output::Stdout);
        assert_eq!(c.seed, 0);
        assert!(!c.verify);
    }

    #[test]
    fn rejects_small_n() {
        let e = parse("--model star --n 2").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(matches!(&e, CliError::Usage(m) if m.contains("N >= 3")));
    }

    #[test]
    fn rejects_equal_labels() {
        let e = parse("--model szegedy --n 30 --sender 3 --receiver 3").unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn rejects_unknown_flags_and_values() {
        for line in [
            "--model star --n 10 --bogus",
            "--model cycle --n 10",
            "--model star --n 10 --repr full,nope",
            "--model star --n 10 --format xml",
            "--model star",
            "--model star --sweep 10,2",
            "--model star --n 10 --verify --sweep 10",
        ] {
            match parse(line) {
                Err(e) => assert_eq!(e.exit_code(), 2, "{line}"),
                Ok(_) if line.ends_with("10,2") => panic!("sweep size 2 accepted"),
                Ok(c) => panic!("{line} parsed to {c:?}"),
            }
        }
    }

    #[test]
    fn help_is_not_an_error() {
        assert_eq!(parse("--help").unwrap_err().exit_code(), 0);
    }

    #[test]
    fn csv_leaves_missing_fields_empty() {
        let m = WalkModel::new(Family::Star, 100, 1, 2).unwrap();
        let report = run_transfer(&m, 3, Representations::ALL).unwrap();
        let csv = emit_report(&report, Format::Csv);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,fidelity_full,fidelity_reduced,fidelity_analytic");
        assert_eq!(lines[1], "0,0.000000000000,0.000000000000,0.000000000000");
        assert_eq!(lines[2], "1,0.000000000000,,0.000000000000");
        assert_eq!(lines.len(), 5);
    }
}
