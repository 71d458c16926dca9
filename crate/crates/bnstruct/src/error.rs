use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input file. `line` is 1-based when known.
    #[error("{source_name}{}: {message}", line.map(|l| format!(":{l}")).unwrap_or_default())]
    Parse {
        source_name: String,
        line: Option<u64>,
        message: String,
    },

    /// The file parsed but its contents do not form a valid dataset.
    #[error("{source_name}: {source}")]
    Data {
        source_name: String,
        #[source]
        source: bnstruct_core::Error,
    },

    #[error("config {source_name}: {message}")]
    Config {
        source_name: String,
        message: String,
    },

    #[error(transparent)]
    Analysis(#[from] bnstruct_core::Error),
}

impl Error {
    pub fn parse(
        source_name: impl Into<String>,
        line: Option<u64>,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            source_name: source_name.into(),
            line,
            message: message.into(),
        }
    }

    pub fn config(source_name: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            source_name: source_name.into(),
            message: message.into(),
        }
    }

    /// Process exit code for this error category.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 3,
            Error::Parse { .. } | Error::Data { .. } => 4,
            Error::Analysis(_) => 5,
            Error::Io { .. } => 6,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
