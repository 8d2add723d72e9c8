//! Exact verification engine for the dynamical symmetry algebras of the
//! confluent hypergeometric function 1F1 and the Humbert function Ψ2.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactnum`]: rational scalars, Pochhammer symbols, gamma ratios
//! - [`series`]: truncated multivariate power series and prefactor series
//! - [`hypfun`]: 1F1 / Ψ2 evaluators and the contiguous relations of 1F1
//! - [`liealg`]: first-order differential operators, their actions on the
//!   basis families, commutators and one-parameter flows
//! - [`identities`]: generating relations and reduction formulas, verified
//!   coefficient-wise in the deformation parameter χ
//! - [`suite`]: report assembly used by the command-line front end

pub mod error;
pub mod exactnum;
pub mod hypfun;
pub mod identities;
pub mod liealg;
pub mod series;
pub mod suite;

pub use error::{Error, Result};
pub use exactnum::ExactScalar;
pub use series::{Frame, MultiSeries, PrefactorSeries, Var};
