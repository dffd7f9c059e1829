mod commands;
mod scene;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use corkkit::casson::Convention;
use serde_json::json;
use sha2::{Digest, Sha256};

use scene::Scene;

#[derive(Parser, Debug)]
#[command(
    name = "corkkit",
    version,
    about = "Exact invariants and certificates for the Wⁿ cork family"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Sign convention for Casson invariants.
    #[arg(long, value_enum, default_value_t = ConventionArg::Conway, global = true)]
    convention: ConventionArg,
    /// Curve data for the Wⁿ fibrations, replacing the bundled file.
    #[arg(long, value_name = "PATH", global = true)]
    wn_curves: Option<PathBuf>,
    /// Require det(S - Sᵀ) = 1 for every Seifert matrix.
    #[arg(long, global = true)]
    strict_seifert: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Alexander and Conway polynomials of the scene's Seifert matrix.
    Alexander { scene: PathBuf },
    /// Casson invariants of 1/n surgeries on the scene's knot.
    Casson { scene: PathBuf },
    /// Front invariants, stabilizations and (with a census) admissibility.
    Legendrian { scene: PathBuf },
    /// Homology of the scene's planar Lefschetz fibration.
    Palf { scene: PathBuf },
    /// Full pipeline with certificates for each n in the scene's range.
    Family { scene: PathBuf },
    /// Forward chaining over the scene's facts.
    Certify { scene: PathBuf },
    /// One summary row per n = 1..=N.
    Ledger {
        #[arg(long, default_value_t = 10)]
        n_max: u32,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Conway,
    Paper,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Conway => Convention::ConwayNormalized,
            ConventionArg::Paper => Convention::PositiveRepresentative,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed or missing input; exit code 2.
    Schema(String),
    /// The input was well formed but a computation failed; exit code 1.
    Compute(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "input error: {m}"),
            CliError::Compute(m) => write!(f, "computation failed: {m}"),
        }
    }
}

/// What a subcommand produced: prose for people, a JSON value for scripts,
/// and an optional failure to report after the output is printed.
pub struct Output {
    pub human: String,
    pub machine: serde_json::Value,
    pub failure: Option<CliError>,
}

pub struct Options {
    pub convention: Convention,
    pub wn_curves: Option<PathBuf>,
    pub strict_seifert: bool,
}

fn read(path: &PathBuf, what: &str) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Schema(format!("{what} `{}`: {e}", path.display())))
}

fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn run(cli: &Cli) -> Result<(Output, Option<String>), CliError> {
    let opts = Options {
        convention: cli.convention.into(),
        wn_curves: cli.wn_curves.clone(),
        strict_seifert: cli.strict_seifert,
    };
    let load = |path: &PathBuf| -> Result<(Scene, String), CliError> {
        let bytes = read(path, "scene")?;
        Ok((Scene::parse(&bytes)?, digest(&bytes)))
    };
    let (out, d) = match &cli.command {
        Command::Alexander { scene } => {
            let (s, d) = load(scene)?;
            (commands::alexander(&s, &opts)?, Some(d))
        }
        Command::Casson { scene } => {
            let (s, d) = load(scene)?;
            (commands::casson(&s, &opts)?, Some(d))
        }
        Command::Legendrian { scene } => {
            let (s, d) = load(scene)?;
            (commands::legendrian(&s)?, Some(d))
        }
        Command::Palf { scene } => {
            let (s, d) = load(scene)?;
            (commands::palf(&s)?, Some(d))
        }
        Command::Family { scene } => {
            let (s, d) = load(scene)?;
            (commands::family(&s, &opts)?, Some(d))
        }
        Command::Certify { scene } => {
            let (s, d) = load(scene)?;
            (commands::certify(&s)?, Some(d))
        }
        Command::Ledger { n_max } => (commands::ledger(*n_max, &opts)?, None),
    };
    Ok((out, d))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Alexander { .. } => "alexander",
        Command::Casson { .. } => "casson",
        Command::Legendrian { .. } => "legendrian",
        Command::Palf { .. } => "palf",
        Command::Family { .. } => "family",
        Command::Certify { .. } => "certify",
        Command::Ledger { .. } => "ledger",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, input_digest)) => {
            match cli.format {
                Format::Human => print!("{}", out.human),
                Format::Machine => {
                    let wn_curves = cli
                        .wn_curves
                        .as_ref()
                        .and_then(|p| std::fs::read(p).ok())
                        .map(|b| digest(&b));
                    let doc = json!({
                        "tool": "corkkit",
                        "version": env!("CARGO_PKG_VERSION"),
                        "command": command_name(&cli.command),
                        "convention": corkkit::casson::Convention::from(cli.convention).to_string(),
                        "input_digest": input_digest,
                        "wn_curves_digest": wn_curves,
                        "status": if out.failure.is_some() { "failed" } else { "ok" },
                        "results": out.machine,
                    });
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&doc).expect("JSON values serialize")
                    );
                }
            }
            match out.failure {
                Some(e) => {
                    eprintln!("corkkit: {e}");
                    ExitCode::from(e.exit_code())
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("corkkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
