//! Error type shared across the crate.

use std::fmt;

/// Errors produced by spec construction, the cosine engine, inversion and
/// the reference oracles.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Distribution parameters violate their constraints.
    InvalidSpec(String),
    /// An operation argument is out of its domain (non-finite input, odd
    /// moment order, probability outside (0,1), ...).
    InvalidArgument(String),
    /// Truncation produced an empty or non-finite interval; the requested
    /// tolerance is too large for the distribution's scale, or the spec's
    /// moments are not finite.
    DegenerateRange { a: f64, b: f64 },
    /// A quadrature failed its node-doubling stability check or could not
    /// reach the requested truncation point.
    QuadratureNonConvergence(String),
    /// The bisection bracket does not straddle the target probability.
    /// Usually means the approximate CDF is non-monotone from too few
    /// terms; rebuild with a larger term count.
    NoSignChange { p: f64 },
    /// `p ± eps` leaves (0,1); a smaller CDF tolerance is required before
    /// the quantile bound applies.
    ProbabilityOutOfRange { p: f64, eps: f64 },
    /// The adaptive refinement budget ran out before the quantile bound
    /// reached the target. Carries the diagnostics of the last attempt.
    RefinementExhausted {
        p: f64,
        last_eps: f64,
        last_bound: f64,
        last_density_floor: f64,
        refinements: u32,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpec(msg) => write!(f, "invalid distribution spec: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::DegenerateRange { a, b } => write!(
                f,
                "degenerate truncation range ({a}, {b}); tolerance too large for this scale"
            ),
            Error::QuadratureNonConvergence(msg) => write!(f, "quadrature did not converge: {msg}"),
            Error::NoSignChange { p } => write!(
                f,
                "no sign change over the bracket for p = {p}; increase the term count"
            ),
            Error::ProbabilityOutOfRange { p, eps } => write!(
                f,
                "p = {p} with eps = {eps} leaves (0,1); reduce the CDF tolerance"
            ),
            Error::RefinementExhausted {
                p,
                last_eps,
                last_bound,
                refinements,
                ..
            } => write!(
                f,
                "refinement budget exhausted for p = {p} after {refinements} refinements \
                 (eps = {last_eps}, bound = {last_bound})"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
