use clap::{Args, Parser, Subcommand};
use nlkit_cli::config::{FamilySpec, Format, GraphSpec, RunConfig};
use nlkit_cli::suites::{catalog_json, catalog_text};
use nlkit_cli::{explain, render_text, run, write_outputs, CliError};
use std::path::PathBuf;
use std::process::ExitCode;

/// Verification suites for Thompson-like groups, quasimorphisms and
/// cone-offs of hyperbolic graphs.
#[derive(Parser)]
#[command(name = "nlkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite and emit a report (exit 1 if any check failed).
    Run(RunArgs),
    /// List the available suites.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Summarize a JSON report.
    Explain { report: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<usize>,
    /// Report file; without it the report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Edge-list graph file for the graph suites.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// V, V(n,r), sV, <s>V, SVG or T.
    #[arg(long)]
    family: Option<String>,
    /// Directory for DOT exports.
    #[arg(long)]
    dot_dir: Option<PathBuf>,
    /// Nonzero threshold as a rational, e.g. 1/4.
    #[arg(long)]
    tolerance: Option<String>,
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => {
                let suite =
                    self.suite.clone().ok_or_else(|| CliError::Usage("--suite is required without --config".into()))?;
                let seed = self.seed.ok_or_else(|| CliError::Usage("--seed is mandatory".into()))?;
                RunConfig::new(suite, seed)
            }
        };
        if let Some(s) = self.suite {
            cfg.suite = s;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.budget.is_some() {
            cfg.budget = self.budget;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if self.format.is_some() {
            cfg.format = self.format;
        }
        if let Some(path) = self.graph {
            cfg.graph = Some(GraphSpec::File { path });
        }
        if let Some(f) = self.family {
            cfg.family = Some(FamilySpec::Text(f));
        }
        if self.dot_dir.is_some() {
            cfg.dot_dir = self.dot_dir;
        }
        if self.tolerance.is_some() {
            cfg.tolerance = self.tolerance;
        }
        Ok(cfg)
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::List { format } => {
            match format {
                Format::Text => print!("{}", catalog_text()),
                Format::Json => print!("{}", catalog_json()),
            }
            Ok(0)
        }
        Command::Explain { report } => {
            let (text, code) = explain(&report)?;
            print!("{text}");
            Ok(code)
        }
        Command::Run(args) => {
            let cfg = args.into_config()?;
            let out = run(&cfg)?;
            match &cfg.out {
                Some(path) => {
                    write_outputs(&out, path, cfg.format())?;
                    print!("{}", render_text(&out.report));
                }
                None => match cfg.format() {
                    Format::Json => print!("{}", out.report.to_json()),
                    Format::Text => print!("{}", render_text(&out.report)),
                },
            }
            Ok(out.report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("nlkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
