use thiserror::Error;

use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("phase outside Q(zeta_8): e^(2 pi i * {0}) is not an eighth root of unity")]
    PhaseNotRepresentable(Rat),

    #[error("division by zero")]
    DivisionByZero,

    #[error("denominator vanishes identically below q^{0}")]
    VanishingDenominator(Rat),

    #[error("non-unit leading coefficient: {0}")]
    NonUnitLeading(String),

    #[error("insufficient trusted order: requested {requested}, trusted only below {available}")]
    InsufficientOrder { requested: Rat, available: Rat },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("divergent truncation: {0}")]
    DivergentTruncation(String),

    #[error("integer-s numerator undefined for even m (m = {0})")]
    IntegerSectorEvenLevel(u32),

    #[error("no explicit character formula for label ({m}, {m2})")]
    UnsupportedCharacter { m: u32, m2: u32 },

    #[error("basis not available in paper: {0}")]
    BasisUnavailable(String),

    #[error("unknown identity id: {0}")]
    UnknownIdentity(String),

    #[error("infeasible order {requested}: maximal certifiable order is {max}")]
    InfeasibleOrder { requested: Rat, max: Rat },

    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
