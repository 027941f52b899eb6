//! Command-line front end: argument parsing, report assembly and rendering.
//!
//! [`execute`] returns the full output text so the binary, the tests and the
//! acceptance harness share one code path.

pub mod config;
pub mod error;
pub mod render;
pub mod report;

use synthrank_core::load_fixture;

pub use config::{Cli, Command, Format, InputSource, RunConfig};
pub use error::CliError;
pub use render::Style;

/// Name of the environment variable that disables ANSI styling.
pub const NO_COLOR_ENV: &str = "SYNTHRANK_NO_COLOR";

/// CSV dump of the embedded fixture.
pub fn cmd_fixture() -> String {
    load_fixture().to_csv()
}

pub fn cmd_rank(cfg: &RunConfig, style: Style) -> Result<String, CliError> {
    let doc = report::rank_document(cfg)?;
    Ok(match cfg.format {
        Format::Table => render::rank_text(&doc, style),
        Format::Csv => render::rank_csv_text(&doc),
        Format::Json => render::json(&doc),
    })
}

pub fn cmd_regress(cfg: &RunConfig, style: Style) -> Result<String, CliError> {
    let doc = report::regress_document(cfg)?;
    Ok(match cfg.format {
        Format::Table => render::regress_text(&doc, style),
        Format::Csv => render::regress_csv_text(&doc),
        Format::Json => render::json(&doc),
    })
}

pub fn cmd_report(cfg: &RunConfig, style: Style) -> Result<String, CliError> {
    let doc = report::report_document(cfg)?;
    Ok(match cfg.format {
        Format::Table => render::report_text(&doc, style),
        Format::Csv => render::report_csv_text(&doc),
        Format::Json => render::json(&doc),
    })
}

/// Runs a parsed command. Styling applies to table output only.
pub fn execute(command: &Command, style: Style) -> Result<String, CliError> {
    match command {
        Command::Fixture => Ok(cmd_fixture()),
        Command::Rank(args) => cmd_rank(&RunConfig::from_rank(args)?, style),
        Command::Regress(args) => cmd_regress(&RunConfig::from_regress(args)?, style),
        Command::Report(args) => cmd_report(&RunConfig::from_report(args)?, style),
    }
}
