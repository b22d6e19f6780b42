use thiserror::Error;

/// Errors surfaced by field construction, operators, and the iteration engine.
#[derive(Debug, Error)]
pub enum SqgError {
    #[error("invalid grid: n = {n} (need even n >= 4)")]
    InvalidGrid { n: usize },

    #[error("invalid dealias fraction {num}/{den} (need 0 < num/den <= 1)")]
    InvalidDealias { num: u32, den: u32 },

    #[error("non-finite value in field data")]
    NonFinite,

    #[error("grid mismatch: {0} vs {1}")]
    GridMismatch(usize, usize),

    #[error("input must be mean-zero, got mean {mean:.3e} for {what}")]
    NotMeanZero { what: &'static str, mean: f64 },

    #[error("CFL violation: dt*max|u|*n/(2pi) = {cfl:.3} >= 0.5")]
    CflViolation { cfl: f64 },

    #[error("requested window [{t0:.4}, {t1:.4}] exceeds sampled data range [{lo:.4}, {hi:.4}]")]
    WindowExceedsData { t0: f64, t1: f64, lo: f64, hi: f64 },

    #[error("solver blow-up at t = {t:.5}: norm {norm:.3e} exceeds {limit:.3e}")]
    BlowUp { t: f64, norm: f64, limit: f64 },

    #[error(
        "geometric ball violation at grid point ({x1:.4}, {x2:.4}), t = {t:.4}: \
         |G - Id|_F = {dist:.4} >= 0.5; consider a larger base parameter a or a smaller perturbation"
    )]
    BallViolation { x1: f64, x2: f64, t: f64, dist: f64 },

    #[error("matrix outside decomposition domain: |R - Id|_F = {dist:.4} >= 0.5")]
    OutsideBall { dist: f64 },

    #[error("annulus hypothesis violated at grid point ({x1:.4}, {x2:.4}): |grad(Phi)^T xi| = {value:.4} outside [{lo:.3}, {hi:.3}]")]
    AnnulusHypothesis { x1: f64, x2: f64, value: f64, lo: f64, hi: f64 },

    #[error("grid n = {n} cannot resolve frequency {need} (need n >= {min_n})")]
    Resolution { n: usize, need: i64, min_n: usize },

    #[error("unknown oscillator key: xi index {xi}, parity {parity}, n {n}")]
    UnknownKey { xi: usize, parity: usize, n: usize },

    #[error("insufficient time margin: need {need:.4} on both sides, have {have:.4}")]
    TimeMargin { need: f64, have: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed file: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, SqgError>;
