//! Exit codes and the error type that carries them.

/// Configuration or input error.
pub const EXIT_INPUT: u8 = 2;
/// Detections incomplete (UNKNOWN statuses) and not allowed.
pub const EXIT_UNKNOWN: u8 = 3;
/// Audit cannot draw the requested samples.
pub const EXIT_AUDIT: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code,
            error: error.into(),
        }
    }

    pub fn input(error: impl Into<anyhow::Error>) -> Self {
        Failure::new(EXIT_INPUT, error)
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::input(anyhow::anyhow!(s))
    }
}

pub trait ExitContext<T> {
    /// Maps any error to a failure with exit code 2.
    fn input(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> ExitContext<T> for Result<T, E> {
    fn input(self) -> Result<T, Failure> {
        self.map_err(Failure::input)
    }
}
