use core::fmt;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors reported by the analysis routines.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A period needed by the computation is undefined because the
    /// corresponding derivative of `F` vanishes at the energy point.
    PeriodUndefined {
        /// Name of the missing period, e.g. `"t_rev12"`.
        which: &'static str,
    },
    /// An input is outside its admissible range.
    InvalidParameter(&'static str),
    /// The truncated coefficient window carries no mass.
    WindowDegenerate,
    /// The envelope has no Fourier transform attached.
    NotAvailable,
    /// Not enough data points for a fit.
    InsufficientData {
        /// Points supplied.
        got: usize,
        /// Points required.
        need: usize,
    },
    /// A floating-point continued fraction ran out of precision.
    PrecisionExhausted {
        /// Partial quotients obtained before stopping.
        terms: usize,
    },
    /// `eta` is at or above the admissible limit `√2^(1+ε)/2`.
    EtaTooLarge {
        /// Requested value.
        eta: f64,
        /// Exclusive upper limit.
        limit: f64,
    },
    /// No rational relation between the revival periods was found.
    NoResonance,
    /// An array does not have the expected shape.
    ShapeMismatch {
        /// Expected `(rows, cols)`.
        expected: (usize, usize),
        /// Actual `(rows, cols)`.
        found: (usize, usize),
    },
    /// `p` and `q` share a common factor.
    NotCoprime {
        /// Numerator.
        p: i64,
        /// Denominator.
        q: i64,
    },
    /// The hypothesis of the requested check does not hold.
    HypothesisNotMet(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PeriodUndefined { which } => {
                write!(f, "period {which} is undefined (vanishing derivative of F)")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::WindowDegenerate => f.write_str("coefficient window is empty"),
            Error::NotAvailable => f.write_str("envelope transform not available"),
            Error::InsufficientData { got, need } => {
                write!(f, "insufficient data: got {got} points, need {need}")
            }
            Error::PrecisionExhausted { terms } => {
                write!(f, "floating-point precision exhausted after {terms} terms")
            }
            Error::EtaTooLarge { eta, limit } => {
                write!(f, "eta = {eta} must be below {limit}")
            }
            Error::NoResonance => f.write_str("revival periods are not in resonance"),
            Error::ShapeMismatch { expected, found } => write!(
                f,
                "shape mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::NotCoprime { p, q } => write!(f, "{p} and {q} are not coprime"),
            Error::HypothesisNotMet(msg) => write!(f, "hypothesis not met: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
