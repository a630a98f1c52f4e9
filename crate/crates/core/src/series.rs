//! Adaptive truncation of the harmonic series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation policy: stop once `|term| < rel_tol * |sum|` for three
/// consecutive degrees and the caller's tail bound is also below `rel_tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub rel_tol: f64,
    pub n_cap: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            n_cap: 2000,
        }
    }
}

impl Truncation {
    pub fn new(rel_tol: f64, n_cap: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::Domain {
                what: "relative tolerance",
                value: rel_tol,
            });
        }
        if n_cap < 3 {
            return Err(Error::Domain {
                what: "n_cap",
                value: n_cap as f64,
            });
        }
        Ok(Self { rel_tol, n_cap })
    }
}

/// Warnings attached to otherwise successful evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Warning {
    /// Source beyond `1e6 f` on the axis; the induced potential is reported as zero.
    FarSource,
}

/// A series value together with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: f64,
    /// Number of terms summed.
    pub terms: usize,
    /// Tail bound at the stopping index, relative to the leading term.
    pub tail: f64,
    pub warning: Option<Warning>,
}

impl Evaluation {
    pub(crate) fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            ..self
        }
    }

    pub(crate) fn far_source() -> Self {
        Self {
            value: 0.0,
            terms: 0,
            tail: 0.0,
            warning: Some(Warning::FarSource),
        }
    }
}

/// Sums `term(n)` for `n = 0..n_avail` under `trunc`. `tail(n)` is a
/// term-independent bound on the remaining series relative to its start.
pub(crate) fn sum_adaptive(
    trunc: Truncation,
    n_avail: usize,
    mut term: impl FnMut(usize) -> f64,
    tail: impl Fn(usize) -> f64,
) -> Result<Evaluation> {
    let n_avail = n_avail.min(trunc.n_cap);
    let mut sum = 0.0;
    let mut quiet = 0;
    let mut last_tail = f64::INFINITY;
    for n in 0..n_avail {
        let t = term(n);
        sum += t;
        if n > 0 && t.abs() <= trunc.rel_tol * sum.abs() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 3 {
            last_tail = tail(n);
            if last_tail <= trunc.rel_tol {
                return Ok(Evaluation {
                    value: sum,
                    terms: n + 1,
                    tail: last_tail,
                    warning: None,
                });
            }
        }
    }
    if last_tail.is_infinite() && n_avail > 0 {
        last_tail = tail(n_avail - 1);
    }
    Err(Error::Truncation {
        partial_sum: sum,
        bound: last_tail,
        n_used: n_avail,
    })
}
