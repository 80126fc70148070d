use thiserror::Error;

/// Errors raised by the mixing operators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MixError {
    /// Operand shapes (or label lengths) disagree.
    #[error("dimension error: {0}")]
    Dimension(String),
    /// A scalar parameter is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// A foreground mask does not fit its image or holds invalid values.
    #[error("mask error: {0}")]
    Mask(String),
    /// A tensor or label violates its value invariants.
    #[error("invalid value: {0}")]
    InvalidValue(String),
    /// A frequency-domain result lost the structure it should have kept.
    #[error("numerical integrity error: {0}")]
    NumericalIntegrity(String),
}

pub type Result<T> = std::result::Result<T, MixError>;

pub(crate) fn check_unit(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(MixError::Parameter(format!("{name} must lie in [0, 1], got {value}")))
    }
}
