//! Scenario runner: operator-spec parsing, scenario configs, result
//! bundles written as CSV/JSON with optional SVG plots.

pub mod bundle;
pub mod config;
pub mod plot;
pub mod scenarios;
pub mod spec;

pub use bundle::{fmt_complex, ResultBundle, Table};
pub use config::{parse_grid, Parameters, ScenarioConfig};
pub use plot::{emit_plot, PlotKind};
pub use scenarios::{run_scenario, Scenario};
pub use spec::{parse_operator_spec, OperatorSpec, ParsedOperator};

use chaoskit_core::diagnostics::DiagnosticsError;
use chaoskit_core::hardy::HardyError;
use chaoskit_core::numerics::NumericsError;
use chaoskit_core::operators::OperatorError;
use chaoskit_core::spectral::SpectralError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError { line: usize, column: usize, message: String },
    #[error("i/o error: {0}")]
    IoError(#[from] std::io::Error),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error(transparent)]
    Hardy(#[from] HardyError),
}

impl CliError {
    pub(crate) fn from_json(e: serde_json::Error) -> Self {
        CliError::ParseError {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
