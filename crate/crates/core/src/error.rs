use thiserror::Error;

use crate::crease_pattern::PatternError;
use crate::double_line::DoubleLineError;
use crate::fold3d::FoldError;
use crate::kinematics::KinematicsError;
use crate::patterns::PatternsError;
use crate::symmetric::SymmetricError;
use crate::thickening::ThickeningError;

/// Any module error, for callers that drive several modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error(transparent)]
    DoubleLine(#[from] DoubleLineError),
    #[error(transparent)]
    Symmetric(#[from] SymmetricError),
    #[error(transparent)]
    Fold(#[from] FoldError),
    #[error(transparent)]
    Thickening(#[from] ThickeningError),
    #[error(transparent)]
    Patterns(#[from] PatternsError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
