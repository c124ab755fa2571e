use thiserror::Error;

/// Errors raised across the simulation and analysis modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("Hurst index must lie in (0, 1), got {value}")]
    InvalidHurst { value: f64 },

    #[error(
        "circulant embedding is degenerate: eigenvalue {eigenvalue:.6e} is more negative \
         than -{tolerance:.1e} * lambda_max = {threshold:.6e}"
    )]
    DegenerateEmbedding {
        eigenvalue: f64,
        tolerance: f64,
        threshold: f64,
    },

    #[error("filter coefficients sum to zero; the attraction constant vanishes")]
    DegenerateFilter,

    #[error("AR polynomial has a zero of modulus {modulus} inside or on the unit circle")]
    UnstableArPolynomial { modulus: f64 },

    #[error("MA polynomial has a zero of modulus {modulus} inside or on the unit circle")]
    NoninvertibleMaPolynomial { modulus: f64 },

    #[error("AR and MA polynomials share a zero near {re}{im:+}i")]
    CommonPolynomialZero { re: f64, im: f64 },

    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,

    #[error(
        "quadrature did not reach the requested tolerance {requested:.1e}: \
         estimate {estimate:.17e} with error bound {achieved:.3e}"
    )]
    Accuracy {
        estimate: f64,
        achieved: f64,
        requested: f64,
    },

    #[error("degenerate path: sum of squared regressors is zero")]
    DegeneratePath,

    #[error("decomposition identity requires X_0 = 0, got {x0}")]
    NonzeroInitialValue { x0: f64 },

    #[error("decomposition identity requires beta > 0, got {beta}")]
    UnsupportedCoefficient { beta: f64 },

    #[error("scaling regime {regime} is inconsistent with H = {h}")]
    RegimeMismatch { regime: &'static str, h: f64 },

    #[error("degenerate driver: integral of the squared path is zero")]
    DegenerateDriver,

    #[error("grid lengths differ: {left} vs {right}")]
    GridMismatch { left: usize, right: usize },

    #[error("sample is empty")]
    EmptySample,

    #[error("invalid length: {0}")]
    InvalidLength(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the command-line front end.
    ///
    /// 0 success, 2 config/validation, 3 numeric accuracy, 4 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Accuracy { .. } => 3,
            Error::Io(_) => 4,
            _ => 2,
        }
    }
}
