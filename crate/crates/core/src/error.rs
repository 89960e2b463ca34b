use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A malformed argument, e.g. reversed integration limits.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A grid or stepper configuration that cannot be run.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("level n = {n} is not trapped: the action target {target:.6} exceeds the barrier-top value {max:.6}")]
    LevelNotTrapped { n: u32, target: f64, max: f64 },

    #[error("barrier too shallow: zero-point energy {eps0:e} is not below the barrier height {eps_s:e}")]
    BarrierTooShallow { eps0: f64, eps_s: f64 },

    #[error("rate above prefactor: 2*tau*Gamma = {0} must be < 1")]
    RateAbovePrefactor(f64),

    #[error("no metastable well: s = I/I_c = {0} must lie in (0, 1)")]
    NoMetastableWell(f64),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("divergence at step {step}: non-finite coefficient")]
    Divergence { step: usize },
}
