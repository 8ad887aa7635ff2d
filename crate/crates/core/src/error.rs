use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Every variant corresponds to a guard that rejects an input or a
/// numerical state instead of returning a silently wrong number.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order l = {l} exceeds the supported maximum {max}")]
    OrderTooLarge { l: usize, max: usize },

    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid Hankel kind {0}, expected 1 or 2")]
    InvalidKind(u8),

    #[error("non-finite result in {what} (l = {l}, argument = {arg})")]
    Overflow {
        what: &'static str,
        l: usize,
        arg: f64,
    },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("radial solution vanishes at the match radius r = {r_match}; shift the match point")]
    NodeAtMatchPoint { r_match: f64 },

    #[error("match radius {r_match} lies inside the potential cutoff {cutoff}")]
    MatchInsidePotential { r_match: f64, cutoff: f64 },

    #[error("partial-wave series diverges at kr = {kr}: term magnitudes grow through l = {l}")]
    Divergence { l: usize, kr: f64 },

    #[error("scattered flux vanishes at r = {r}, theta = {theta}; obliquity angle undefined")]
    UndefinedAngle { r: f64, theta: f64 },

    #[error(
        "radial scattered flux vanishes at r = {r}, theta = {theta}; obliquity factor singular"
    )]
    SingularObliquity { r: f64, theta: f64 },

    #[error("near-tangential flux at theta = {theta}: |tan gamma| = {tan_gamma} exceeds 10")]
    StepInstability { theta: f64, tan_gamma: f64 },

    #[error(
        "wave-front trace not converged: step-halving difference {difference} exceeds {tolerance}"
    )]
    NotConverged { difference: f64, tolerance: f64 },

    #[error("curve has {found} samples, at least {needed} required")]
    InsufficientSamples { found: usize, needed: usize },

    #[error("tabulated potential input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}
