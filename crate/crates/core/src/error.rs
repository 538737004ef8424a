use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot reach |err| <= {target:e} at t = {t} (best bound {achieved:e})")]
    PrecisionUnreachable { t: f64, target: f64, achieved: f64 },
    #[error("scan step underflow near t = {t}")]
    StepUnderflow { t: f64 },
    #[error("no sign change of g' found in {lo}..{hi}")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("t = {t} lies within the zero tolerance of a zero of f (|f| = {abs_f:e})")]
    OnZero { t: f64, abs_f: f64 },
    #[error("argument continuation failed to resolve at t = {t}")]
    UnwindAmbiguity { t: f64 },
    #[error("Newton iteration did not converge from ({a0}, {b0})")]
    NewtonDivergence { a0: f64, b0: f64 },
    #[error("iterates collapsed to a single point near t = {t}")]
    CollapsedPair { t: f64 },
    #[error("both derivatives are negligible at ({a}, {b})")]
    ZeroJacobian { a: f64, b: f64 },
    #[error("series is indistinguishable from zero up to its truncation order")]
    ZeroSeries,
    #[error("series must vanish at the origin")]
    NonzeroConstantTerm,
    #[error("leading coefficient ratio b_n/a_m is a negative real")]
    NegativeLeadingRatio,
    #[error("leading coefficient ratio b_n/a_m is not real")]
    NonRealLeadingRatio,
    #[error("truncation order exhausted: need {needed} known terms, have {available}")]
    TruncationExhausted { needed: usize, available: usize },
    #[error("series has no compositional inverse (zero linear coefficient)")]
    NotInvertible,
    #[error("not enough samples: {0}")]
    InsufficientSamples(String),
    #[error("image arcs do not overlap near ({a}, {b}): gap {gap:e}")]
    NoOverlap { a: f64, b: f64, gap: f64 },
    #[error("({gamma}, {delta}) is not a period pair: {reason}")]
    NotAPeriodPair { gamma: f64, delta: f64, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
