//! Batch front end for crtkit: file formats and the four subcommands.
//!
//! Each command returns a [`Report`] whose `stdout` is the deterministic
//! verdict text; `main` prints it and exits with `code`.

pub mod commands;
pub mod format;

use thiserror::Error;

pub use commands::{check, classify2, conlat, gen_hard, Method};

/// Exit code for a CR verdict (and other successful commands).
pub const EXIT_CR: i32 = 0;
/// Exit code for a NOT-CR verdict.
pub const EXIT_NOT_CR: i32 = 10;
/// Exit code for any failure.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] crtkit_core::Error),

    #[error("{0}")]
    Usage(String),

    /// Formula rejected by the 3SAT' validator; one violation per entry.
    #[error("formula is not a 3SAT' instance:\n{}", .0.join("\n"))]
    Invalid(Vec<String>),
}

/// What a command prints and how the process should exit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub stdout: String,
    /// Diagnostics, e.g. complexity warnings on the exhaustive route.
    pub stderr: String,
    pub code: i32,
}

impl Report {
    fn line(&mut self, s: impl AsRef<str>) {
        self.stdout.push_str(s.as_ref());
        self.stdout.push('\n');
    }
}

/// Reads `path`, tagging IO errors with the path.
pub fn read_file(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// `CRTKIT_BUDGET` when set and numeric.
pub fn budget_from_env() -> Result<Option<u64>, CliError> {
    match std::env::var("CRTKIT_BUDGET") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("CRTKIT_BUDGET must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}
