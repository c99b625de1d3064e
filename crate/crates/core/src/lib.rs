//! Exact q-series engine for theta/eta/mock-theta identities and the
//! branching of N=3 superconformal characters.

pub mod branching;
pub mod cyclo;
pub mod error;
pub mod identities;
pub mod lazy;
pub mod linsolve;
pub mod numerators;
pub mod rat;
pub mod series;
pub mod theta;

pub use cyclo::CycloNum;
pub use error::{Error, Result};
pub use lazy::Lazy;
pub use linsolve::{Decomposition, Status};
pub use numerators::{ModuleLabel, Sector};
pub use rat::Rat;
pub use series::{Monomial, Series, SeriesJson};
pub use theta::{Mumford, ThetaSpec};
