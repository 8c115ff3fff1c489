use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} = {value} is outside the admissible domain {domain}")]
    Domain {
        name: &'static str,
        value: String,
        domain: &'static str,
    },
    #[error("invalid step set: {0}")]
    InvalidSteps(String),
    #[error("closed form produced a non-integral value {0}")]
    NonIntegral(String),
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),
    #[error("quadrature did not converge: estimated error {error:e} > target {target:e}")]
    Quadrature { error: f64, target: f64 },
    #[error("root bracketing failed for {0}")]
    Bracketing(&'static str),
    #[error("ambiguous root assignment: roots {0:e} apart")]
    RootAmbiguity(f64),
    #[error("hypergeometric series: {0}")]
    Hypergeometric(String),
    #[error("invalid lattice: periods {0} and {1} are linearly dependent over the reals")]
    DegenerateLattice(String, String),
    #[error("exact series: {0}")]
    Series(String),
    #[error("count table of order {have} is too short, need {need}")]
    TableTooShort { have: usize, need: usize },
    #[error("{0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: impl ToString, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value: value.to_string(),
            domain,
        }
    }
}
