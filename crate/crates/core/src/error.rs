use thiserror::Error;

use crate::series::Var;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse rational literal {0:?}")]
    ParseRational(String),

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("series caps differ ({left} vs {right})")]
    CapMismatch { left: String, right: String },

    #[error("unknown variable {0}")]
    UnknownVariable(Var),

    #[error("series constant term must be 1, found {0}")]
    NonUnitConstantTerm(String),

    #[error("series argument must have zero constant term")]
    NonzeroConstantTerm,

    #[error("factor series is not a deformation in {0}: some non-constant term is free of it")]
    NotADeformation(Var),

    #[error("no trusted order left: {0}")]
    CapUnderflow(String),

    #[error("negative power of body variable {0}")]
    NegativeBodyPower(Var),

    #[error("prefactors differ: {0} vs {1}")]
    PrefactorMismatch(String, String),

    #[error("float series did not converge within {0} terms")]
    NoConvergence(usize),

    #[error("deformation parameter {chi} outside validity domain {domain}")]
    DomainViolation { chi: f64, domain: String },

    #[error("second-order terms survived in commutator: {0}")]
    InternalSimplificationFailure(String),

    #[error("flow is singular: {0}")]
    SingularFlow(String),

    #[error("unknown identifier {0:?}")]
    UnknownId(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}
