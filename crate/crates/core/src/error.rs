use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("kernel query on the wave front (r = {r}, ct = {ct}); clip the integration domain")]
    FrontSingularity { r: f64, ct: f64 },
    #[error("kernel evaluated at the source point (R = 0)")]
    SingularOrigin,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("coverage error: {0}")]
    Coverage(String),
    #[error("misuse: {0}")]
    Misuse(String),
    #[error("evaluation point placement: {0}")]
    Placement(String),
    #[error("discretization error: {0}")]
    Discretization(String),
    #[error("probe error: {0}")]
    Probe(String),
    #[error("stability: {0}")]
    Stability(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<WaveError>,
    },
}

impl WaveError {
    pub fn context(self, context: impl Into<String>) -> Self {
        WaveError::Context { context: context.into(), source: Box::new(self) }
    }

    /// Innermost error, skipping context wrappers.
    pub fn root(&self) -> &WaveError {
        match self {
            WaveError::Context { source, .. } => source.root(),
            e => e,
        }
    }
}

impl WaveError {
    /// Process exit status: 2 for configuration problems, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            WaveError::Config(_) => 2,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for WaveError {
    fn from(e: std::io::Error) -> Self {
        WaveError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, WaveError>;
