use thiserror::Error;

/// Errors raised by the pencil, model, geometry and bounds layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "Levi form is numerically singular: sigma_min = {sigma_min:e}, threshold = {threshold:e}"
    )]
    SingularLevi { sigma_min: f64, threshold: f64 },

    #[error(
        "signature set for q = {q} is unbounded: Levi signature is ({n_minus}, {n_plus}) so Y({q}) fails"
    )]
    UnboundedSignatureSet {
        q: usize,
        n_minus: usize,
        n_plus: usize,
    },

    #[error("q = {q} out of range for CR dimension {dim}")]
    QOutOfRange { q: usize, dim: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eta = {eta} lies outside the signature set")]
    EtaOutsideSet { eta: f64 },

    #[error("weight matrix mu is not diagonal")]
    NonDiagonalWeight,

    #[error("Levi eigenvalue at index {index} is zero")]
    DegenerateLevi { index: usize },

    #[error("length mismatch: lambda has {lambda} entries, mu has {mu}")]
    LengthMismatch { lambda: usize, mu: usize },

    #[error("{which}[{index}] is zero")]
    ZeroEntry { which: &'static str, index: usize },

    #[error(
        "lambda must list negative entries first, then positive ones (violated at index {index})"
    )]
    SignPatternViolation { index: usize },

    #[error("defining-function gradient vanishes")]
    ZeroGradient,

    #[error("curvature form is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error(
        "samples disagree on the Levi signature: {first:?} at sample 0, {other:?} at sample {index}"
    )]
    MixedSignature {
        first: (usize, usize),
        other: (usize, usize),
        index: usize,
    },

    #[error("condition Y({j}) fails; strong Morse sum over this range is undefined")]
    YViolation { j: usize },

    #[error("exponent at index {index} is {value}, must be strictly negative")]
    NonNegativeExponent { index: usize, value: f64 },
}

impl Error {
    /// Stable name of the variant, used in machine-readable error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SingularLevi { .. } => "SingularLevi",
            Error::UnboundedSignatureSet { .. } => "UnboundedSignatureSet",
            Error::QOutOfRange { .. } => "QOutOfRange",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::InconsistentInput(_) => "InconsistentInput",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::EtaOutsideSet { .. } => "EtaOutsideSet",
            Error::NonDiagonalWeight => "NonDiagonalWeight",
            Error::DegenerateLevi { .. } => "DegenerateLevi",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::ZeroEntry { .. } => "ZeroEntry",
            Error::SignPatternViolation { .. } => "SignPatternViolation",
            Error::ZeroGradient => "ZeroGradient",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::MixedSignature { .. } => "MixedSignature",
            Error::YViolation { .. } => "YViolation",
            Error::NonNegativeExponent { .. } => "NonNegativeExponent",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
