use std::fmt;

/// Process exit codes.
pub mod code {
    pub const OK: i32 = 0;
    pub const PARTIAL: i32 = 2;
    pub const INAPPLICABLE: i32 = 3;
    pub const INVALID: i32 = 4;
    pub const IO: i32 = 5;
    pub const USAGE: i32 = 64;
    pub const DATA: i32 = 65;
    pub const NO_INPUT: i32 = 66;
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::new(code::USAGE, message)
    }

    pub fn range(message: impl Into<String>) -> Self {
        CliError::new(code::DATA, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<recforge::Error> for CliError {
    fn from(e: recforge::Error) -> Self {
        use recforge::Error as E;
        let code = match &e {
            E::Io(_) => code::IO,
            E::Precondition(_) | E::NotRecurrent { .. } | E::BudgetExceeded { .. } | E::ColoringNotTotal(_) => {
                code::INAPPLICABLE
            }
            E::WindowExhausted { .. } => code::PARTIAL,
            _ => code::DATA,
        };
        CliError::new(code, e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
