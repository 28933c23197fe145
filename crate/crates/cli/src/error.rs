use thiserror::Error;

use gkf_core::GkfError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] GkfError),

    #[error("bad set descriptor `{0}`: {1}")]
    Descriptor(String, String),

    #[error("bad argument: {0}")]
    Argument(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("output: {0}")]
    Output(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
