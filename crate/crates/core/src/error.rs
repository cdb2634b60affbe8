use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("degree {degree} out of range (dimension {dim})")]
    Degree { degree: usize, dim: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("ray is not a path in the complex: {0}")]
    NotAPath(String),
    #[error("filling failed within radius budget {radius} for simplex {simplex:?}")]
    FillingBudget { simplex: Vec<usize>, radius: usize },
    #[error("coverage error: {0}")]
    Coverage(String),
    #[error("region error: {0}")]
    Region(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("singular differential at sample {0}")]
    SingularDifferential(usize),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
