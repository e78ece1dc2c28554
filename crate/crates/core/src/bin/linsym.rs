use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use linsym::report::{parse_batch, render_text, run_report, RunConfig, SCHEMA_VERSION};
use linsym::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Classify y'' = A y' + B y + f by its Lie point symmetries.
#[derive(Debug, Parser)]
#[command(name = "linsym", version)]
struct Cli {
    /// Input JSON (a system or a list of systems); stdin when omitted or "-".
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Also verify every generator by flowing numerical solutions.
    #[arg(long)]
    verify: bool,
    /// Rescale x so that lambda = 1 in the J1 branch.
    #[arg(long)]
    normalize_lambda: bool,
    /// Pass threshold for numeric residuals.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Seed for the initial data of verification trajectories.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Group parameters for the flow check.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-0.1,-0.05,0.05,0.1")]
    epsilons: Vec<f64>,
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(fs::read_to_string(p)?),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn error_line(e: &Error, index: Option<usize>) -> String {
    serde_json::json!({
        "schema": SCHEMA_VERSION,
        "index": index,
        "error": e.to_string(),
        "exit_code": e.exit_code(),
    })
    .to_string()
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig {
        verify: cli.verify,
        normalize_lambda: cli.normalize_lambda,
        tol: cli.tol,
        seed: cli.seed,
        epsilons: cli.epsilons.clone(),
        ..Default::default()
    };
    cfg.validate()?;
    let systems = parse_batch(&read_input(&cli.input)?)?;
    let mut code = 0;
    for (i, sys) in systems.into_iter().enumerate() {
        match sys.and_then(|s| run_report(&s, &cfg)) {
            Ok(report) => {
                match cli.format {
                    Format::Json => writeln!(out, "{}", report.to_json())?,
                    Format::Text => writeln!(out, "{}", render_text(&report))?,
                }
                if !report.passed && code == 0 {
                    code = 1;
                }
            }
            Err(e) => {
                match cli.format {
                    Format::Json => writeln!(out, "{}", error_line(&e, Some(i)))?,
                    Format::Text => writeln!(out, "system {i}: error: {e}\n")?,
                }
                eprintln!("linsym: system {i}: {e}");
                if code == 0 || code == 1 {
                    code = e.exit_code();
                }
            }
        }
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.output {
        Some(path) => fs::File::create(path)
            .map_err(Error::from)
            .and_then(|mut f| run(&cli, &mut f)),
        None => run(&cli, &mut io::stdout().lock()),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("linsym: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
