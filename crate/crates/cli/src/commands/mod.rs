use crate::args::Command;
use crate::error::{CliError, EXIT_FAILURE, EXIT_OK};
use crate::report::Report;
use ghom_core::checks::Suite;

mod af;
mod sft;
mod towers;
mod zn;

/// A finished command: its report, the exit status, and the human-readable
/// rendering when it differs from the generic one.
pub struct Outcome {
    pub report: Report,
    pub exit: u8,
    pub text: Option<String>,
}

impl Outcome {
    pub fn ok(report: Report) -> Self {
        Outcome { report, exit: EXIT_OK, text: None }
    }
}

pub fn run(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Sft(c) => sft::run(c),
        Command::Af(c) => af::run(c),
        Command::Towers(c) => towers::run(c),
        Command::Zn(c) => zn::run(c),
        Command::Check(a) => {
            let suite: Suite = a.suite.parse().map_err(CliError::Invalid)?;
            let outcomes = suite.run(a.seed);
            let passed = outcomes.iter().all(|o| o.passed);
            let text: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
            let result = serde_json::json!({ "all_passed": passed, "outcomes": outcomes });
            let inputs = serde_json::json!({ "suite": a.suite, "seed": a.seed });
            Ok(Outcome {
                report: Report::new("check", inputs, result),
                exit: if passed { EXIT_OK } else { EXIT_FAILURE },
                text: Some(text),
            })
        }
    }
}
