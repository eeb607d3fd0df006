//! Expression language, configuration, and command layer over the engine.

pub mod commands;
pub mod config;
pub mod eval;
pub mod expr;
pub mod report;

/// Errors at the tool level; `Config` maps to exit code 2, the rest surface
/// as failed checks or exit code 2 depending on where they arise.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] expr::ParseError),
    #[error("{0}")]
    Algebra(#[from] qlattice::Error),
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
