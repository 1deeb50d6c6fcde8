use negdep::Error;

pub const MALFORMED: u8 = 64;
pub const SIZE: u8 = 65;
pub const USAGE: u8 = 66;
pub const IO: u8 = 74;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn usage(e: impl std::fmt::Display) -> Self {
        CliError { code: USAGE, message: e.to_string() }
    }

    pub fn io(e: impl std::fmt::Display) -> Self {
        CliError { code: IO, message: e.to_string() }
    }

    /// Error while reading an input file.
    pub fn input(e: Error) -> Self {
        let code = if matches!(e, Error::RankOutOfRange { .. }) { SIZE } else { MALFORMED };
        CliError { code, message: e.to_string() }
    }

    /// Error from an operation on already loaded inputs.
    pub fn op(e: Error) -> Self {
        let code = match e {
            Error::RankOutOfRange { .. } => SIZE,
            Error::InvalidGraph(_) | Error::Parse(_) => MALFORMED,
            _ => USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}
