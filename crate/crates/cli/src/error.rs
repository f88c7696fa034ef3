use std::fmt::Display;

use elliptic_blocks::blocks::{BlockError, PlanError};
use elliptic_blocks::corpus::CorpusError;
use elliptic_blocks::format::FormatError;
use elliptic_blocks::laplacian::LaplacianError;
use elliptic_blocks::torus_system::TorusSystemError;

/// Anything that makes the command unable to run: exit status 2.
#[derive(Debug)]
pub struct InputError {
    pub code: &'static str,
    pub message: String,
}

impl InputError {
    pub fn new(code: &'static str, message: impl Display) -> Self {
        InputError {
            code,
            message: message.to_string(),
        }
    }
}

impl From<FormatError> for InputError {
    fn from(e: FormatError) -> Self {
        InputError::new(e.code(), e)
    }
}

impl From<LaplacianError> for InputError {
    fn from(e: LaplacianError) -> Self {
        InputError::new("invalid-input", e)
    }
}

impl From<TorusSystemError> for InputError {
    fn from(e: TorusSystemError) -> Self {
        let code = match e {
            TorusSystemError::TooManyBranches { .. } => "too-many-branches",
            TorusSystemError::Reduction(_) => "not-reducible",
            _ => "invalid-decorated",
        };
        InputError::new(code, e)
    }
}

impl From<BlockError> for InputError {
    fn from(e: BlockError) -> Self {
        let code = match e {
            BlockError::SiteValues { .. } => "site-values",
            BlockError::SiteDegree { .. } => "site-degree",
            BlockError::PrimeMismatch(..) => "prime-mismatch",
            BlockError::NotOnCycle => "not-on-cycle",
            _ => "invalid-block",
        };
        InputError::new(code, e)
    }
}

impl From<PlanError> for InputError {
    fn from(e: PlanError) -> Self {
        match e {
            PlanError::Block(b) => b.into(),
            other => InputError::new("invalid-plan", other),
        }
    }
}

impl From<CorpusError> for InputError {
    fn from(e: CorpusError) -> Self {
        InputError::new("corpus", e)
    }
}
