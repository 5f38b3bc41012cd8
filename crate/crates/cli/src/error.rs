use std::path::Path;

use cubuland::chargeless::ChargeError;
use cubuland::dual_complex::DualError;
use cubuland::generate::GenerateError;
use cubuland::graph_manifold::ManifoldError;
use cubuland::halfplane::HalfplaneError;
use cubuland::planar::PlanarError;
use cubuland::wallspace::WallspaceError;
use serde::de::DeserializeOwned;

pub const NEGATIVE: u8 = 1;
pub const INVALID: u8 = 2;
pub const BUDGET: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError { code: INVALID, message: message.into() }
    }
}

fn err(code: u8, e: impl ToString) -> CliError {
    CliError { code, message: e.to_string() }
}

impl From<WallspaceError> for CliError {
    fn from(e: WallspaceError) -> Self {
        match e {
            WallspaceError::BudgetExceeded { .. } => err(BUDGET, e),
            _ => err(INVALID, e),
        }
    }
}

impl From<DualError> for CliError {
    fn from(e: DualError) -> Self {
        match e {
            DualError::Wallspace(w) => w.into(),
            DualError::BudgetExceeded { .. } => err(BUDGET, e),
            DualError::Structural(_) => err(NEGATIVE, e),
            _ => err(INVALID, e),
        }
    }
}

impl From<PlanarError> for CliError {
    fn from(e: PlanarError) -> Self {
        match e {
            PlanarError::Wallspace(w) => w.into(),
            PlanarError::Dual(d) => d.into(),
            PlanarError::Structural(_) | PlanarError::BelowMinimum { .. } => err(NEGATIVE, e),
            _ => err(INVALID, e),
        }
    }
}

impl From<HalfplaneError> for CliError {
    fn from(e: HalfplaneError) -> Self {
        match e {
            HalfplaneError::Dual(d) => d.into(),
            HalfplaneError::Structural(_) | HalfplaneError::NotUnbounded(_) => err(NEGATIVE, e),
            HalfplaneError::InvalidInput(_) => err(INVALID, e),
        }
    }
}

impl From<ManifoldError> for CliError {
    fn from(e: ManifoldError) -> Self {
        err(INVALID, e)
    }
}

impl From<ChargeError> for CliError {
    fn from(e: ChargeError) -> Self {
        match e {
            ChargeError::BudgetExceeded { .. } => err(BUDGET, e),
            ChargeError::Structural(_) => err(NEGATIVE, e),
            _ => err(INVALID, e),
        }
    }
}

impl From<GenerateError> for CliError {
    fn from(e: GenerateError) -> Self {
        err(INVALID, e)
    }
}

/// Reads and parses a JSON file; parse errors carry `path:line:column`.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::invalid(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))
}
