use thiserror::Error;

/// Failures of exact field and series arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series with zero leading coefficient cannot be inverted")]
    NonInvertibleSeries,
    #[error("exp requires a series with vanishing constant term")]
    NonzeroConstantTerm,
    #[error("log requires a series with offset 0 and constant term 1")]
    ConstantTermNotOne,
    #[error("rescaling by zero")]
    ZeroScale,
    #[error("series directions differ (expansion at 0 vs at infinity)")]
    DirectionMismatch,
    #[error("power substitution requires k >= 1, got {0}")]
    BadPower(i64),
}
