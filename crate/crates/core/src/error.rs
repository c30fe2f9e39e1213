use core::fmt;

/// Errors raised by model construction, fitting, measures and valuation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A probability argument fell outside its open interval.
    ProbabilityOutOfRange { p: f64 },
    /// An input was NaN or infinite.
    NonFinite { what: &'static str },
    NonPositiveMean { mean: f64 },
    InvalidParameter { name: &'static str, value: f64 },
    /// A sample value was ≤ 0 where strictly positive travel times are required.
    NonPositiveSample { index: usize, value: f64 },
    TooFewSamples { needed: usize, got: usize },
    /// Higher sample moments are undefined for a zero-variance sample.
    ZeroVariance,
    InvalidPreferences { reason: &'static str },
    /// Burr XII fit with `c·k ≤ 2`: mean or variance would not exist.
    MomentNotFinite { c: f64, k: f64 },
    ConvergenceFailure { iterations: usize },
    /// A tail integral did not reach its tolerance within the panel cap.
    TailDivergence { abs_error: f64 },
    /// Valuation requires `γ > β` and a strictly positive standardized TTB quantile.
    NonRiskAverse { tau: f64, zeta_ttm: f64 },
    /// The model has zero spread, so standardized quantities are 0/0.
    DegenerateVariability,
    /// No probability mass above the mean-excess travel time.
    EmptyUpperTail,
    NonFiniteDeparture { departure: f64 },
    /// A finite-difference perturbation left the risk-averse domain.
    StepTooLarge { step: f64 },
    NumericalCurvatureUnstable { p: f64 },
    TooFewDraws { needed: usize, got: usize },
    RequiresContinuousModel,
    InvalidGrid { reason: &'static str },
    TooFewRoutes { got: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ProbabilityOutOfRange { p } => write!(f, "probability {p} outside (0, 1)"),
            Error::NonFinite { what } => write!(f, "{what} is not finite"),
            Error::NonPositiveMean { mean } => write!(f, "mean {mean} must be positive"),
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid parameter {name} = {value}")
            }
            Error::NonPositiveSample { index, value } => {
                write!(f, "sample {index} has non-positive value {value}")
            }
            Error::TooFewSamples { needed, got } => {
                write!(f, "need at least {needed} samples, got {got}")
            }
            Error::ZeroVariance => write!(f, "zero variance: higher moments undefined"),
            Error::InvalidPreferences { reason } => write!(f, "invalid preferences: {reason}"),
            Error::MomentNotFinite { c, k } => write!(
                f,
                "Burr XII fit has c*k = {} <= 2; variance does not exist",
                c * k
            ),
            Error::ConvergenceFailure { iterations } => {
                write!(f, "optimizer did not converge after {iterations} iterations")
            }
            Error::TailDivergence { abs_error } => {
                write!(f, "tail integral failed to converge (error estimate {abs_error:e})")
            }
            Error::NonRiskAverse { tau, zeta_ttm } => write!(
                f,
                "valuation needs gamma > beta and a positive TTB margin (tau = {tau}, standardized margin = {zeta_ttm})"
            ),
            Error::DegenerateVariability => write!(f, "travel time has zero variability"),
            Error::EmptyUpperTail => write!(f, "no probability mass beyond the mean-excess travel time"),
            Error::NonFiniteDeparture { departure } => {
                write!(f, "departure time {departure} is not finite")
            }
            Error::StepTooLarge { step } => {
                write!(f, "finite-difference step {step} leaves the risk-averse domain")
            }
            Error::NumericalCurvatureUnstable { p } => {
                write!(f, "quantile curvature estimate unstable at p = {p}")
            }
            Error::TooFewDraws { needed, got } => {
                write!(f, "need at least {needed} Monte Carlo draws, got {got}")
            }
            Error::RequiresContinuousModel => write!(f, "operation requires a continuous model"),
            Error::InvalidGrid { reason } => write!(f, "invalid grid: {reason}"),
            Error::TooFewRoutes { got } => write!(f, "need at least 2 routes, got {got}"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// True for failures of the numerical machinery itself, as opposed to
    /// inputs outside an operation's domain.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::MomentNotFinite { .. }
                | Error::ConvergenceFailure { .. }
                | Error::TailDivergence { .. }
                | Error::DegenerateVariability
                | Error::EmptyUpperTail
                | Error::NumericalCurvatureUnstable { .. }
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
