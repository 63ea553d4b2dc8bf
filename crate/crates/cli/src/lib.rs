//! Batch interface over `polcyl-core`.
//!
//! [`run_command`] takes an argument vector and returns an exit code with a
//! JSON report. Exit 0 is success, 1 a failed verification or an unmet
//! hypothesis, 2 invalid input.

mod commands;
pub mod spec;

use clap::{Parser, Subcommand};
use polcyl_core::Error;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "polcyl", version, about = "Exact polar-cylinder computations on blow-ups of P(1,1,m)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dump the lattice, canonical classes and curve catalog.
    Surface {
        #[arg(long)]
        m: usize,
        #[arg(value_parser = ["info"])]
        action: String,
    },
    /// Fujita invariant, face and type of a polarization.
    Classify {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = polcyl_core::cone::DEFAULT_FIBER_BOUND)]
        fiber_bound: usize,
    },
    /// Build and verify a polar cylinder certificate.
    Cylinder {
        #[arg(long)]
        input: String,
        /// Fixed epsilon `p/q`; defaults to half the admissible supremum.
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Replay one of the contraction pipelines.
    Blowdown {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        lemma: u8,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: Option<usize>,
    },
    /// List the negative classes spanning the effective cone model.
    EnumerateCurves {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = polcyl_core::cone::DEFAULT_FIBER_BOUND)]
        fiber_bound: usize,
    },
    /// Run every contraction and cylinder check over a range of m.
    VerifyPaper {
        #[arg(long)]
        m_from: usize,
        #[arg(long)]
        m_to: usize,
    },
}

/// Exit code together with the rendered report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

pub(crate) enum Status {
    Ok,
    Failed,
}

/// Errors that reject the input rather than a claim about it.
pub(crate) fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidParameter(_)
            | Error::InvalidClass(_)
            | Error::InvalidDecomposition(_)
            | Error::NotAmple(_)
    )
}

pub(crate) fn error_json(e: &Error) -> Value {
    json!({ "kind": e.kind(), "message": e.to_string() })
}

fn render(command: &str, code: i32, mut body: Value) -> Outcome {
    let status = match code {
        0 => "ok",
        1 => "failed",
        _ => "invalid-input",
    };
    if let Value::Object(map) = &mut body {
        map.insert("command".into(), json!(command));
        map.insert("status".into(), json!(status));
    }
    let mut report = serde_json::to_string_pretty(&body).expect("reports serialize");
    report.push('\n');
    Outcome { code, report }
}

pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, report: e.to_string() };
            }
            let body = json!({ "error": { "kind": "usage", "message": e.to_string() } });
            return render("", 2, body);
        }
    };
    let (name, result) = match &cli.command {
        Command::Surface { m, .. } => ("surface", commands::surface(*m)),
        Command::Classify { input, fiber_bound } => ("classify", commands::classify(input, *fiber_bound)),
        Command::Cylinder { input, epsilon } => ("cylinder", commands::cylinder(input, epsilon.as_deref())),
        Command::Blowdown { lemma, m, t } => ("blowdown", commands::blowdown(*lemma, *m, *t)),
        Command::EnumerateCurves { m, fiber_bound } => {
            ("enumerate-curves", commands::enumerate_curves(*m, *fiber_bound))
        }
        Command::VerifyPaper { m_from, m_to } => ("verify-paper", commands::verify_paper(*m_from, *m_to)),
    };
    match result {
        Ok((Status::Ok, body)) => render(name, 0, body),
        Ok((Status::Failed, body)) => render(name, 1, body),
        Err(e) => {
            let code = if is_input_error(&e) { 2 } else { 1 };
            render(name, code, json!({ "error": error_json(&e) }))
        }
    }
}
