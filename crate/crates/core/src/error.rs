use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("degenerate toroid: a = {a} must exceed b = {b}")]
    DegenerateToroid { a: f64, b: f64 },

    #[error("argument {z} too close to 1 (degenerate toroid / axis singularity)")]
    NearSingularArgument { z: f64 },

    #[error("degree {requested} overflows at argument {z}; maximum safe n is {max_safe}")]
    Overflow {
        z: f64,
        requested: usize,
        max_safe: usize,
    },

    #[error("(xi, eta) = (0, 0) is the point at infinity")]
    PointAtInfinity,

    #[error("metric coefficient is singular at (xi, eta) = (0, 0)")]
    SingularMetric,

    #[error("point lies on the focal ring r = f, z = 0")]
    FocalRing,

    #[error("field and source points coincide")]
    CoincidentPoints,

    #[error("field point xi = {xi} lies inside the conductor (xi0 = {xi0})")]
    OutOfRegion { xi: f64, xi0: f64 },

    #[error("series not converged after {n_used} terms: partial sum {partial_sum:e}, tail bound {bound:e}")]
    Truncation {
        partial_sum: f64,
        bound: f64,
        n_used: usize,
    },

    #[error("no sign change of the force in [{lo}, {hi}] (F = {f_lo:e}, {f_hi:e})")]
    NoRoot {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("threshold outside search range [{lo}, {hi}]")]
    RangeExceeded { lo: f64, hi: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("mesh needs at least {min} panels, got {n_panels}")]
    MeshTooCoarse { n_panels: usize, min: usize },

    #[error("field point lies on a source ring")]
    SingularKernel,

    #[error("boundary-element system is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("source at z = {z} lies inside the conductor")]
    InsideConductor { z: f64 },
}
