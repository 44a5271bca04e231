//! `cbrn`: encode labels, train and pair cue balls, and run recall/association.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 runtime failure
//! (I/O, unreadable files, recognition or association failure).

mod commands;
mod config;
mod table;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::ConfigFile;
use crate::table::Format;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<cbrn_core::Error> for CliError {
    fn from(e: cbrn_core::Error) -> Self {
        if e.is_validation() {
            CliError::usage(e.to_string())
        } else {
            CliError::runtime(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cbrn",
    version,
    about = "Attribute-wise associative memory with cue balls and a recall net"
)]
pub struct Cli {
    /// Configuration file of `key = value` lines mirroring the long flags.
    #[arg(long, global = true, env = "CBRN_CONFIG")]
    config: Option<PathBuf>,

    /// Output style for tables.
    #[arg(long, global = true, value_enum, env = "CBRN_FORMAT")]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render a label as a QR-code PBM.
    Encode(EncodeArgs),
    /// Store every catalog label on its cue neuron and write a model.
    Train(TrainArgs),
    /// Train bidirectional cross links between cue neurons of different balls.
    Pair(PairArgs),
    /// Present a pattern to one ball and print every cue neuron's response.
    Recall(RecallArgs),
    /// Present a pattern to one ball and recall the linked pattern of another.
    Associate(AssociateArgs),
    /// Print cue-response tables for a trained model.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(long, env = "CBRN_LABEL")]
    label: Option<String>,
    #[arg(long, env = "CBRN_OUT")]
    out: Option<PathBuf>,
    /// Pixels per module (4 gives 116×116).
    #[arg(long, env = "CBRN_SCALE")]
    scale: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ProviderKind {
    Qr,
    Random,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Catalog of `group:index:label` lines; the bundled 3×7 catalog when omitted.
    #[arg(long, env = "CBRN_CATALOG")]
    catalog: Option<PathBuf>,
    #[arg(long, env = "CBRN_OUT")]
    out: Option<PathBuf>,
    /// Continue training an existing model instead of starting from zero weights.
    #[arg(long, env = "CBRN_RESUME")]
    resume: Option<PathBuf>,
    #[arg(long, env = "CBRN_THETA")]
    theta: Option<f64>,
    #[arg(long, env = "CBRN_THRESHOLD")]
    threshold: Option<f64>,
    #[arg(long = "eps-w", env = "CBRN_EPS_W")]
    eps_w: Option<f64>,
    #[arg(long = "eps-v", env = "CBRN_EPS_V")]
    eps_v: Option<f64>,
    #[arg(long = "lambda-cb", env = "CBRN_LAMBDA_CB")]
    lambda_cb: Option<f64>,
    #[arg(long, env = "CBRN_EPOCHS")]
    epochs: Option<usize>,
    /// Present raw 0/1 pixels instead of unit-norm vectors.
    #[arg(long, env = "CBRN_UNNORMALIZED")]
    unnormalized: bool,
    #[arg(long, value_enum, env = "CBRN_PROVIDER")]
    provider: Option<ProviderKind>,
    /// Seed for the random pattern provider.
    #[arg(long, env = "CBRN_SEED")]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long, env = "CBRN_MODEL")]
    model: Option<PathBuf>,
    /// `ball:index=ball:index`, repeatable.
    #[arg(long = "pair")]
    pairs: Vec<String>,
    /// Where to write the updated model; defaults to overwriting --model.
    #[arg(long, env = "CBRN_OUT")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecallArgs {
    #[arg(long, env = "CBRN_MODEL")]
    model: Option<PathBuf>,
    #[arg(long, env = "CBRN_BALL")]
    ball: Option<String>,
    #[arg(long, env = "CBRN_PATTERN")]
    pattern: Option<PathBuf>,
    /// Firing threshold D; the model's value when omitted.
    #[arg(long, env = "CBRN_THRESHOLD")]
    threshold: Option<f64>,
    /// Write the winning neuron's recalled pattern here.
    #[arg(long, env = "CBRN_OUT")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AssociateArgs {
    #[arg(long, env = "CBRN_MODEL")]
    model: Option<PathBuf>,
    #[arg(long, env = "CBRN_FROM")]
    from: Option<String>,
    #[arg(long, env = "CBRN_PATTERN")]
    pattern: Option<PathBuf>,
    #[arg(long, env = "CBRN_TO")]
    to: Option<String>,
    #[arg(long, env = "CBRN_OUT")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, env = "CBRN_MODEL")]
    model: Option<PathBuf>,
    /// 3: cue responses to stored probes; 4: cross-ball responses.
    #[arg(long, env = "CBRN_FIGURE")]
    figure: Option<u8>,
    /// Override a ball's probe neuron, `ball:index`, repeatable.
    #[arg(long = "probe")]
    probes: Vec<String>,
}

fn run(cli: Cli) -> Result<String, CliError> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let format = match cli.format {
        Some(f) => f,
        None => match config.get("format") {
            None | Some("table") => Format::Table,
            Some("csv") => Format::Csv,
            Some(other) => return Err(CliError::usage(format!("unknown format {other:?}"))),
        },
    };
    match cli.command {
        Command::Encode(args) => commands::encode(args, &config),
        Command::Train(args) => commands::train(args, &config, format),
        Command::Pair(args) => commands::pair(args, &config, format),
        Command::Recall(args) => commands::recall(args, &config, format),
        Command::Associate(args) => commands::associate(args, &config, format),
        Command::Report(args) => commands::report(args, &config, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
