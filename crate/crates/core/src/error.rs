use thiserror::Error;

/// Errors raised by model construction and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("moment does not exist: {0}")]
    MomentDoesNotExist(String),

    #[error("inadmissible theta: constraint {value:.3e} < 0 at sign vector {signs:?}")]
    InadmissibleTheta { signs: Vec<i8>, value: f64 },

    #[error("asymmetric marginals: P(I_{coord} = 1) = {prob}")]
    AsymmetricMarginals { coord: usize, prob: f64 },

    #[error("k = {k} exceeds family definition ({family} supports k <= {max})")]
    KExceedsFamily { family: String, k: usize, max: usize },

    #[error("dimension too large: {d} > {max}")]
    DimensionTooLarge { d: usize, max: usize },

    #[error("dependence coordinates 1..k are not exchangeable")]
    NotExchangeable,

    #[error("n = {0} outside support")]
    OutsideSupport(u64),

    #[error("nonfinite expectation")]
    NonfiniteExpectation,

    #[error("severity not mixed-Erlang")]
    NotMixedErlang,

    #[error("severity not on a discrete grid")]
    NotDiscrete,

    #[error("mass truncation {mass:.3e} exceeds tolerance {eps:.3e}")]
    TruncationExceeded { mass: f64, eps: f64 },

    #[error("aliasing exceeds tolerance ({mass:.3e} > {tol:.3e}); increase L")]
    Aliasing { mass: f64, tol: f64 },

    #[error("span too small: tail mass {tail:.3e} exceeds {eps:.3e}")]
    SpanTooSmall { tail: f64, eps: f64 },

    #[error("negative probability {0:.3e} after inversion")]
    NegativeMass(f64),

    #[error("conditional pmf unavailable for this dependence family")]
    ConditionalPmfUnavailable,

    #[error("family undefined at required length {0}")]
    FamilyUndefinedAtLength(usize),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
