use std::fmt;

use ghom_core::af::AfError;
use ghom_core::sft::SftError;
use ghom_core::towers::TowersError;
use ghom_core::zn_lab::ZnError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_UNDECIDED: u8 = 3;
pub const EXIT_NOT_FOUND: u8 = 4;
pub const EXIT_CLASSES_DIFFER: u8 = 5;
pub const EXIT_BUDGET: u8 = 6;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed document, with `path:line:column` when known.
    Parse { path: String, message: String },
    Invalid(String),
    Undecided(String),
    NotFound(String),
    ClassesDiffer(String),
    Budget(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Invalid(_) => EXIT_INVALID,
            CliError::Undecided(_) => EXIT_UNDECIDED,
            CliError::NotFound(_) => EXIT_NOT_FOUND,
            CliError::ClassesDiffer(_) => EXIT_CLASSES_DIFFER,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Failed(_) => EXIT_FAILURE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { path, message } => write!(f, "{path}: {message}"),
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Undecided(m) => write!(f, "undecided: {m}"),
            CliError::NotFound(m) => write!(f, "not found: {m}"),
            CliError::ClassesDiffer(m) => write!(f, "{m}"),
            CliError::Budget(m) => write!(f, "budget exhausted: {m}"),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<SftError> for CliError {
    fn from(e: SftError) -> Self {
        let m = e.to_string();
        match e {
            SftError::NotFound { .. } => CliError::NotFound(m),
            SftError::ExceedsBudget { .. } | SftError::Unstabilized { .. } => CliError::Budget(m),
            SftError::InvalidMatrix(_)
            | SftError::InvalidWord(_)
            | SftError::InadmissibleWord(_)
            | SftError::InvalidTableau(_)
            | SftError::InfeasibleBounds { .. }
            | SftError::OutsideWindow { .. }
            | SftError::UnsupportedDegree(_) => CliError::Invalid(m),
            _ => CliError::Failed(m),
        }
    }
}

impl From<AfError> for CliError {
    fn from(e: AfError) -> Self {
        let m = e.to_string();
        match e {
            AfError::ClassesDiffer { .. } => CliError::ClassesDiffer(m),
            AfError::Undecided { .. } | AfError::PreconditionUncertified => CliError::Undecided(m),
            AfError::Zmat(_) => CliError::Failed(m),
            _ => CliError::Invalid(m),
        }
    }
}

impl From<TowersError> for CliError {
    fn from(e: TowersError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<ZnError> for CliError {
    fn from(e: ZnError) -> Self {
        CliError::Invalid(e.to_string())
    }
}
