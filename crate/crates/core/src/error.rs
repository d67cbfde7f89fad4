use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("backend {backend} cannot run on a {grid} grid")]
    BackendGridMismatch {
        backend: &'static str,
        grid: &'static str,
    },
    #[error("field has nonzero mean {mean:.3e} (tolerance {tol:.3e}); not a d-bar image on the torus")]
    NonZeroMean { mean: f64, tol: f64 },
    #[error("exponent mismatch: {0}")]
    ExponentMismatch(String),
    #[error("all oscillations vanish; nothing to certify")]
    AllZeroOscillation,
    #[error("symbol is singular at a grid node: {0}")]
    SingularSample(String),
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("cube does not fit the grid: {0}")]
    CubeOutOfRange(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed field file: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}
