//! Experiment runner: `nestpol <command> [--key value]... [--config path]`.
//!
//! Parameters are resolved from the command's defaults, then the optional
//! config document, then command-line flags. Output is CSV: a comment line
//! with the seed and command, a header row, then one row per measurement.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 a measured value
//! exceeded its bound or an analytic hypothesis failed.

pub mod commands;
pub mod scenario;

use std::ffi::OsString;

use clap::{Arg, ArgAction, ArgMatches, Command};

use crate::commands::Report;
use crate::scenario::{schema, CommandName, Scenario};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("bound or hypothesis violated: {0}")]
    Violation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Violation(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<nestpol_core::Error> for CliError {
    fn from(e: nestpol_core::Error) -> Self {
        use nestpol_core::Error as E;
        match e {
            E::Domain(_) | E::Index(_) => CliError::Config(e.to_string()),
            E::Hypothesis(_) | E::Evaluation { .. } | E::Audit(_) => CliError::Violation(e.to_string()),
        }
    }
}

pub fn cli() -> Command {
    let mut app = Command::new("nestpol")
        .about("Interpolation on Bernstein discs: measured errors against analytic bounds")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for name in CommandName::ALL {
        let mut sub = Command::new(name.as_str()).about(name.about()).arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .action(ArgAction::Set)
                .help("flat `key = value` document; flags override it"),
        );
        for p in schema(name) {
            sub = sub.arg(
                Arg::new(p.key)
                    .long(p.key)
                    .value_name("VALUE")
                    .action(ArgAction::Set)
                    .allow_hyphen_values(true)
                    .help(format!("{} [default: {}]", p.help, p.default)),
            );
        }
        app = app.subcommand(sub);
    }
    app
}

/// Resolves the scenario of a parsed subcommand.
pub fn scenario_from(name: CommandName, matches: &ArgMatches) -> Result<Scenario, CliError> {
    let mut scenario = Scenario::defaults(name);
    if let Some(path) = matches.get_one::<String>("config") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config `{path}`: {e}")))?;
        scenario.apply_document(&text)?;
    }
    for p in schema(name) {
        if let Some(v) = matches.get_one::<String>(p.key) {
            scenario.set(p.key, v)?;
        }
    }
    Ok(scenario)
}

/// Runs a resolved scenario and writes its CSV. Violations are reported
/// after the CSV has been written.
pub fn execute(scenario: &Scenario) -> Result<Report, CliError> {
    let report = commands::run(scenario)?;
    let csv = report.render();
    match scenario.raw("out") {
        "-" => print!("{csv}"),
        path => std::fs::write(path, csv).map_err(|e| CliError::Io(format!("cannot write `{path}`: {e}")))?,
    }
    Ok(report)
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let outcome = name
        .parse::<CommandName>()
        .and_then(|command| scenario_from(command, sub))
        .and_then(|scenario| execute(&scenario));
    match outcome {
        Ok(report) if report.violations.is_empty() => 0,
        Ok(report) => {
            for v in &report.violations {
                eprintln!("violation: {v}");
            }
            3
        }
        Err(e) => {
            eprintln!("nestpol: {e}");
            e.exit_code()
        }
    }
}
