//! Structured results of identity checks and the float tolerance policy.

use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// Outcome of one identity check at one spin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub identity: String,
    pub two_j: u32,
    pub mode: Mode,
    /// Zero for a passing exact check.
    pub max_residual: f64,
    /// Threshold the residual was compared against; `None` in exact mode.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub elapsed_ms: f64,
    /// Free-form notes (ring used, failing entries, eigenvalue counts).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl Report {
    /// An exact check: passes iff `failures == 0`.
    pub fn exact(identity: &str, two_j: u32, failures: usize, max_residual: f64, started: Instant) -> Self {
        Report {
            identity: identity.to_owned(),
            two_j,
            mode: Mode::Exact,
            max_residual,
            tolerance: None,
            pass: failures == 0,
            elapsed_ms: elapsed_ms(started),
            detail: None,
        }
    }

    /// A float check: passes iff `max_residual < tolerance`.
    pub fn float(identity: &str, two_j: u32, max_residual: f64, tolerance: f64, started: Instant) -> Self {
        Report {
            identity: identity.to_owned(),
            two_j,
            mode: Mode::Float,
            max_residual,
            tolerance: Some(tolerance),
            pass: max_residual < tolerance,
            elapsed_ms: elapsed_ms(started),
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

fn elapsed_ms(started: Instant) -> f64 {
    started.elapsed().as_secs_f64() * 1e3
}

/// Float tolerance: either the dimension-scaled default `1e-12·d²` or a fixed value.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Tolerance {
    #[default]
    Scaled,
    Fixed(f64),
}

impl Tolerance {
    pub const SCALE: f64 = 1e-12;

    pub fn for_dim(self, dim: usize) -> f64 {
        match self {
            Tolerance::Scaled => Self::SCALE * (dim * dim) as f64,
            Tolerance::Fixed(t) => t,
        }
    }
}

/// `ε(d) = 1e-12·d²`.
pub fn eps(dim: usize) -> f64 {
    Tolerance::Scaled.for_dim(dim)
}
