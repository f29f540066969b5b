//! `crshadow`: decide shadowing properties of finite closed relations, run
//! the gallery, audits and shift demos.
//!
//! Exit codes: 0 ok, 1 input error, 2 flagged system, 3 claim or audit
//! failure.

mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crshadow::gallery;
use crshadow::shadow::Property;

use report::{envelope, markdown_header, pretty, CmdResult, Outcome};

#[derive(Parser)]
#[command(name = "crshadow", version, about = "Shadowing properties of closed relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the four shadowing properties of a finite system.
    Decide(DecideArgs),
    /// Audit the deciders on seeded random systems.
    Audit(AuditArgs),
    /// Named examples with checkable claims.
    Gallery {
        #[command(subcommand)]
        command: GalleryCommand,
    },
    /// Shift-space demos.
    Shift {
        #[command(subcommand)]
        command: ShiftCommand,
    },
    /// Convert between finite systems and isolated-point planar relations.
    Convert(ConvertArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Args)]
pub struct DecideArgs {
    /// Finite system JSON file.
    #[arg(long = "in")]
    pub input: String,
    /// Only this property, as `i,j`.
    #[arg(long, value_parser = parse_property)]
    pub property: Option<Property>,
    /// Decide the inverse relation instead.
    #[arg(long)]
    pub inverse: bool,
    /// Re-validate the verdicts in this report instead of deciding.
    #[arg(long)]
    pub check_witness: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args)]
pub struct AuditArgs {
    #[arg(long)]
    pub count: usize,
    /// Largest point count.
    #[arg(long)]
    pub size: usize,
    #[arg(long)]
    pub seed: u64,
    /// Highest power checked by the power audit.
    #[arg(long, default_value_t = 3)]
    pub kmax: usize,
    /// Also compare counterexample search with the bounded oracle.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Subcommand)]
enum GalleryCommand {
    /// Item names, sorted.
    List,
    /// Run the named items, or all of them.
    Run(GalleryRunArgs),
}

#[derive(Args)]
pub struct GalleryRunArgs {
    pub names: Vec<String>,
    /// Item parameter as key=value; repeatable.
    #[arg(long = "param")]
    pub params: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Subcommand)]
enum ShiftCommand {
    /// Bounded shift-shadowing check on one system.
    Demo(ShiftDemoArgs),
    /// Closing check on the diagonal-plus-line system.
    Closing(ShiftClosingArgs),
    /// Tabulate (2,1) and (2,2) against the shift demo on random systems.
    Search(SearchArgs),
}

#[derive(Args)]
pub struct ShiftDemoArgs {
    #[arg(long)]
    pub system: String,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub orbit_len: usize,
}

#[derive(Args)]
pub struct ShiftClosingArgs {
    #[arg(long)]
    pub n: u64,
    /// Base point of the horizontal line.
    #[arg(long, default_value = "0")]
    pub c: String,
}

#[derive(Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub size: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub orbit_len: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Target {
    Finite,
    Planar,
}

#[derive(Args)]
pub struct ConvertArgs {
    #[arg(long = "in")]
    pub input: String,
    #[arg(long)]
    pub to: Target,
}

fn parse_property(s: &str) -> Result<Property, String> {
    s.parse().map_err(|e: crshadow::Error| e.to_string())
}

/// Writes to stdout; a closed pipe is not an error.
fn say(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(config: &Value, out: &Outcome, format: Format) {
    match (format, &out.markdown) {
        (Format::Markdown, Some(md)) => say(&format!("{}{md}", markdown_header(config))),
        _ => say(&format!("{}\n", pretty(&envelope(config, out.body.clone())))),
    }
}

fn run(cli: Cli) -> CmdResult<ExitCode> {
    let (config, out, format) = match cli.command {
        Command::Decide(a) => {
            let (config, out) = commands::decide(&a)?;
            (config, out, a.format)
        }
        Command::Audit(a) => (commands::audit_config(&a), commands::audit(&a)?, a.format),
        Command::Gallery { command: GalleryCommand::List } => {
            say(&gallery::NAMES.map(|n| format!("{n}\n")).concat());
            return Ok(ExitCode::SUCCESS);
        }
        Command::Gallery { command: GalleryCommand::Run(a) } => {
            let params = commands::parse_params(&a.params)?;
            (commands::gallery_config(&a, &params), commands::gallery_run(&a, &params)?, a.format)
        }
        Command::Shift { command } => match command {
            ShiftCommand::Demo(a) => {
                let (c, o) = commands::shift_demo(&a)?;
                (c, o, Format::Json)
            }
            ShiftCommand::Closing(a) => {
                let (c, o) = commands::shift_closing(&a)?;
                (c, o, Format::Json)
            }
            ShiftCommand::Search(a) => (commands::search_config(&a), commands::shift_search(&a)?, Format::Json),
        },
        Command::Convert(a) => {
            say(&format!("{}\n", pretty(&commands::convert(&a)?)));
            return Ok(ExitCode::SUCCESS);
        }
    };
    emit(&config, &out, format);
    Ok(out.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{f}");
            if let report::Failure::Flagged(_) = f {
                say(&format!("{}\n", pretty(&json!({ "flagged": true }))));
            }
            f.code()
        }
    }
}
