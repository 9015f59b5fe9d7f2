//! The full identity suite over a range of spins.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::report::{Report, Tolerance};
use crate::{func, oscillator, poly, su2, transform};

/// Settings for [`run_suite`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Replaces every float threshold when set.
    pub tolerance: Option<f64>,
    pub euler_samples: usize,
    pub coherent_samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { tolerance: None, euler_samples: 10, coherent_samples: 20, seed: 0x4b72_6176 }
    }
}

impl SuiteConfig {
    fn tol(&self) -> Tolerance {
        self.tolerance.map_or(Tolerance::Scaled, Tolerance::Fixed)
    }
}

/// Every check for one spin, sorted by identity name.
pub fn run_spin(two_j: u32, cfg: &SuiteConfig) -> Vec<Report> {
    let tol = cfg.tol();
    let mut reports = vec![
        poly::check_orthogonality_exact(two_j),
        poly::check_phase_sum_exact(two_j),
        poly::check_generating_function(two_j),
        poly::check_hypergeometric(two_j),
        poly::check_recurrence_exact(two_j),
        func::check_basis(two_j, tol),
        func::check_recurrence(two_j, tol),
        func::check_phase_sum(two_j, tol),
        transform::check_cube_identity(two_j, tol),
        transform::check_fourier(two_j, tol),
        su2::check_generators(two_j, tol),
        su2::check_ladder(two_j, tol),
        su2::check_euler(two_j, cfg.euler_samples, cfg.seed, cfg.tolerance),
        su2::check_double_cover(two_j, cfg.tolerance),
        su2::check_coherent_states(two_j, cfg.coherent_samples, cfg.seed, cfg.tolerance),
        oscillator::check_oscillator_forms(two_j, tol),
        oscillator::check_oscillator_eigen(two_j, tol),
    ];
    reports.sort_by(|a, b| a.identity.cmp(&b.identity));
    reports
}

/// Runs [`run_spin`] for every spin in `range` in parallel; the output is
/// ordered by `(two_j, identity)` regardless of scheduling.
pub fn run_suite(range: RangeInclusive<u32>, cfg: &SuiteConfig) -> Vec<Report> {
    let mut reports: Vec<Report> = range.into_par_iter().flat_map_iter(|two_j| run_spin(two_j, cfg)).collect();
    reports.sort_by(|a, b| (a.two_j, &a.identity).cmp(&(b.two_j, &b.identity)));
    reports
}

pub fn all_pass(reports: &[Report]) -> bool {
    reports.iter().all(|r| r.pass)
}
