use thiserror::Error;

/// Failures surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("recurrence denominator vanishes at index {n}")]
    DegenerateDenominator { n: usize },

    #[error("leading coefficient product vanishes at n = {n}")]
    DegenerateLeadingCoefficient { n: usize },

    #[error("eigenvalue of index {n} is degenerate: kernel dimension {dimension}")]
    DegenerateSpectrum { n: usize, dimension: usize },

    #[error("series kernel is empty for n = {n}")]
    EmptyKernel { n: usize },

    #[error("lower parameter {index} produces a zero Pochhammer factor before termination")]
    ZeroLowerParameter { index: usize },

    #[error("series does not terminate: no upper parameter is a nonpositive integer")]
    NotTerminating,

    #[error("no closed form covers this configuration: {0}")]
    UnsupportedBranch(String),

    #[error("imaginary residue {imag:e} exceeds tolerance for real part {real:e}")]
    ImaginaryResidue { real: f64, imag: f64 },

    #[error("weight constraints violated: {}", .0.join("; "))]
    ConstraintViolated(Vec<String>),

    #[error("integral diverges: {0}")]
    NonIntegrable(String),

    #[error("quadrature did not converge (estimate {estimate:e}, error {error:e})")]
    QuadratureNoConvergence { estimate: f64, error: f64 },

    #[error("point {x} is a singular point of the equation")]
    SingularPoint { x: f64 },

    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),

    #[error("missing argument `{arg}` for `{name}`")]
    MissingArg { name: String, arg: String },

    #[error("polynomial {n} is not proportional to the reference at coefficient {index}")]
    ProportionalityFailure { n: usize, index: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse `{0}` as a rational number")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
