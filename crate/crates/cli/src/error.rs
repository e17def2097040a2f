use std::path::{Path, PathBuf};
use std::process::ExitCode;

use calibtk::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Data {
        path: PathBuf,
        #[source]
        source: Error,
    },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 1 for I/O, 2 for invalid input data, 3 for bad parameters.
    pub fn exit_code(&self) -> ExitCode {
        let code = match self {
            CliError::Io { .. } => 1,
            CliError::Data { source, .. } | CliError::Core(source) => match source {
                Error::Parameter(_) | Error::TooLarge(_) => 3,
                Error::NoData | Error::Input(_) | Error::Training(_) => 2,
            },
            CliError::Usage(_) => 3,
        };
        ExitCode::from(code)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn write_text(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

/// Writes to `path`, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        Some(p) => write_text(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

/// Attaches the offending file to a parse error.
pub fn in_file<T>(path: &Path, r: calibtk::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::Data { path: path.to_owned(), source })
}

pub fn warn(msg: impl std::fmt::Display) {
    eprintln!("warning: {msg}");
}
