use std::io;
use std::path::Path;

use thiserror::Error;
use wikiindex::crawler::CrawlError;
use wikiindex::export::ExportError;
use wikiindex::index::IndexError;
use wikiindex::source::SourceError;

/// Process exit codes. Stable: scripts depend on them.
pub mod exit {
    pub const USAGE: i32 = 2;
    pub const SEED_NOT_FOUND: i32 = 3;
    pub const IO: i32 = 4;
    pub const MALFORMED: i32 = 5;
    pub const SOURCE: i32 = 6;
    pub const CHECKPOINT: i32 = 7;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("seed page not found: {0}")]
    SeedNotFound(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Malformed(String),
    #[error("{0}")]
    Source(String),
    #[error("{0}")]
    Checkpoint(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::SeedNotFound(_) => exit::SEED_NOT_FOUND,
            CliError::Io { .. } => exit::IO,
            CliError::Malformed(_) => exit::MALFORMED,
            CliError::Source(_) => exit::SOURCE,
            CliError::Checkpoint(_) => exit::CHECKPOINT,
        }
    }

    pub fn io(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
        move |source| CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<CrawlError> for CliError {
    fn from(e: CrawlError) -> Self {
        match e {
            CrawlError::SeedNotFound(t) => CliError::SeedNotFound(t),
            CrawlError::SeedUnreadable { .. } => CliError::Source(e.to_string()),
            CrawlError::CheckpointCorrupt(_) => CliError::Checkpoint(e.to_string()),
            CrawlError::Config(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SourceError> for CliError {
    fn from(e: SourceError) -> Self {
        match e {
            SourceError::Config(_) | SourceError::Title(_) => CliError::Usage(e.to_string()),
            SourceError::CorpusError(_) => CliError::Malformed(e.to_string()),
            _ => CliError::Source(e.to_string()),
        }
    }
}

impl From<ExportError> for CliError {
    fn from(e: ExportError) -> Self {
        match e {
            ExportError::Io { path, source } => CliError::Io { path, source },
            ExportError::UnsupportedFormat(_) => CliError::Usage(e.to_string()),
            ExportError::Malformed(_) | ExportError::Inconsistent(_) => {
                CliError::Malformed(e.to_string())
            }
        }
    }
}

impl From<IndexError> for CliError {
    fn from(e: IndexError) -> Self {
        match e {
            IndexError::UnknownGrowth(_) | IndexError::InvalidFunction { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Malformed(e.to_string()),
        }
    }
}
