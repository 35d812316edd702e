use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown function `{name}` at position {pos}")]
    UnknownFunction { name: String, pos: usize },
    #[error("expression uses more than one variable (`{first}` and `{second}`)")]
    MultipleVariables { first: char, second: char },
    #[error("singular evaluation: {0}")]
    SingularEvaluation(String),
    #[error("composite function has identically zero derivative")]
    ConstantComposite,
    #[error("|s'(z0)| = {value} is at or below the tolerance {tolerance:e}")]
    CompositeDerivativeZero { value: f64, tolerance: f64 },
    #[error("not evaluable at the expansion point: {0}")]
    SingularAtExpansionPoint(String),
    #[error("division by a truncated series with zero constant term")]
    DivisionBySingularSeries,
    #[error("inner series of a composition must vanish at the point (constant term {0:e})")]
    CompositionOffsetNonzero(f64),
    #[error("leading coefficient of s(z0 + t) - s(z0) is zero")]
    LeadingCoefficientZero,
    #[error("supplied inverse does not invert s: {0}")]
    InverseMismatch(String),
    #[error("s is not monotone on the real segment: its derivative changes sign near z = {at}")]
    NonMonotoneComposite { at: f64 },
    #[error("quadrature integrand is not finite at node {node}")]
    QuadratureSingularity { node: usize },
    #[error("point lies outside the sampled annulus of validity: {0}")]
    AnnulusViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
