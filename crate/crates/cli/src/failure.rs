use std::fmt;

use funcseries::Error;

/// Process exit status for each failure class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitKind {
    Other = 1,
    Parse = 2,
    DerivativeZero = 3,
    Singular = 4,
    Disagreement = 5,
}

impl ExitKind {
    fn label(self) -> &'static str {
        match self {
            ExitKind::Other => "error",
            ExitKind::Parse => "parse error",
            ExitKind::DerivativeZero => "vanishing derivative of s at z0",
            ExitKind::Singular => "singularity",
            ExitKind::Disagreement => "engine and oracle disagree",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn parse(message: String) -> Self {
        CliError {
            kind: ExitKind::Parse,
            message,
        }
    }

    pub fn other(message: String) -> Self {
        CliError {
            kind: ExitKind::Other,
            message,
        }
    }

    pub fn disagreement(message: String) -> Self {
        CliError {
            kind: ExitKind::Disagreement,
            message,
        }
    }

    pub fn code(&self) -> i32 {
        self.kind as i32
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.label(), self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::Syntax { .. }
            | Error::UnknownFunction { .. }
            | Error::MultipleVariables { .. } => ExitKind::Parse,
            Error::ConstantComposite | Error::CompositeDerivativeZero { .. } => {
                ExitKind::DerivativeZero
            }
            Error::SingularEvaluation(_)
            | Error::SingularAtExpansionPoint(_)
            | Error::DivisionBySingularSeries
            | Error::QuadratureSingularity { .. } => ExitKind::Singular,
            _ => ExitKind::Other,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::other(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::other(e.to_string())
    }
}
