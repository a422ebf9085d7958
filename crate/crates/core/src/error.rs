use thiserror::Error;

/// Errors raised across the series, family, path-series and census layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero series")]
    DivisionByZeroSeries,
    #[error("quotient has a pole at 0: dividend valuation {dividend} < divisor valuation {divisor}")]
    ValuationError { dividend: usize, divisor: usize },
    #[error("cannot combine an OGF with an EGF")]
    KindMismatch,
    #[error("series square root needs constant term 1, got {got}")]
    NonUnitConstantTerm { got: String },
    #[error("series composition needs inner constant term 0, got {got}")]
    NonzeroInnerConstant { got: String },
    #[error("characteristic equation has no root below {limit}")]
    NoSingularitySolution { limit: f64 },
    #[error("no {what} for {stat} paths in the {family} family")]
    UnsupportedKind {
        family: &'static str,
        stat: &'static str,
        what: String,
    },
    #[error("n = {n} exceeds the enumeration cap {cap} for the {family} family")]
    SizeLimitExceeded {
        family: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("closed formula is valid only for n >= {floor}, got n = {n}")]
    BelowValidityFloor { floor: u64, n: u64 },
    #[error("no paths of this kind at n = {n}: zero denominator")]
    ZeroDenominator { n: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
