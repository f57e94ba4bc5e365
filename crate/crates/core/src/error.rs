use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure mode surfaced by the library.
///
/// Variants are grouped by the layer that raises them; the CLI maps all of
/// them to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // q-arithmetic substrate
    #[error("negative exponent {0} cannot be represented in the exact backend")]
    NegativeExponentInExactBackend(String),
    #[error("negative monomial exponent {0}")]
    NegativeExponent(i64),
    #[error("exponent {exponent} is not representable at series scale {scale}")]
    ScaleOverflow { exponent: String, scale: u64 },
    #[error("q is outside the admissible domain: {0}")]
    QOutOfDomain(String),
    #[error("series constant term is not invertible")]
    NonUnitConstantTerm,
    #[error("series scale mismatch: {0} vs {1}")]
    ScaleMismatch(u64, u64),
    #[error("series order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("cannot rescale from {from} to {to}: {from} does not divide {to}")]
    IncompatibleRescale { from: u64, to: u64 },
    #[error("zero base in complex power")]
    ZeroBase,
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision {0} bits is below the 53-bit minimum")]
    PrecisionTooLow(usize),
    #[error("invalid number literal {0:?}")]
    Parse(String),

    // Genocchi family
    #[error("the formal series does not truncate at h = 0 in the exact backend")]
    H0InExactBackend,
    #[error("{terms} terms are insufficient: {reason}")]
    InsufficientTerms { terms: usize, reason: String },
    #[error("argument must be non-negative, got {0}")]
    NegativeArgument(String),
    #[error("backend does not support this operation: {0}")]
    BackendUnsupported(String),

    // zeta
    #[error("x must be positive for general s, got {0}")]
    NonPositiveX(String),
    #[error("series did not reach tolerance within {0} terms")]
    MaxTermsExceeded(usize),
    #[error("Re(s) must be positive: {0}")]
    ConvergenceDomain(String),

    // p-adic
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("residue {residue} is outside 0..{modulus}")]
    ResidueOutOfRange { residue: String, modulus: String },
    #[error("q = {0} is not p-adically close to 1 (need v_p(1 - q) >= 1)")]
    QNotPadicallyClose(String),
    #[error("level sum with {0} terms exceeds the 10^6 cap")]
    LevelTooLarge(String),
    #[error("integrand shift must be a non-negative integer, got {0}")]
    NonIntegralShift(String),

    // identity engine
    #[error("identity {identity} requires odd moduli, got a = {a}, b = {b}")]
    ParityViolation { identity: String, a: u32, b: u32 },
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    // output
    #[error("unsupported output format {0:?}")]
    UnsupportedFormat(String),
}
