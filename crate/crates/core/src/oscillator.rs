//! Finite oscillator with momentum `P̃ = K†QK` and Hamiltonian
//! `H̃ = P̃²/2 + Q²/2 = j(j+1)/2 - Jy²/2`.
//!
//! `K|j;m⟩` is an eigenstate with energy `E_m = (j(j+1) - m²)/2`: since
//! `Jy = KQK†` and `K†K = I`, `Jy K|j;m⟩ = KQ|j;m⟩ = m K|j;m⟩`.

use std::time::Instant;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::func::KravchukFuncMatrix;
use crate::halfint::{LabelSet, TwiceInt};
use crate::report::{Report, Tolerance};
use crate::transform::{apply, conjugate_diag, coordinate_diagonal, diag_mul, kravchuk_transform_from, mul_diag, CMatrix, StateVector, UnitaryMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct OscillatorSystem {
    two_j: u32,
    k: UnitaryMatrix,
    p_tilde: CMatrix,
    jy: CMatrix,
    /// `P̃²/2 + Q²/2`
    h_tilde: CMatrix,
    /// `j(j+1)/2 - Jy²/2`
    h_tilde_casimir: CMatrix,
}

pub fn build_oscillator(two_j: u32) -> OscillatorSystem {
    let k = kravchuk_transform_from(&KravchukFuncMatrix::new(two_j));
    let q = coordinate_diagonal(two_j);
    let p_tilde = conjugate_diag(k.matrix(), &q);
    let jy = conjugate_diag(&k.matrix().adjoint(), &q);
    let half = Complex64::new(0.5, 0.0);

    let mut h_tilde = &p_tilde * &p_tilde * half;
    for (i, x) in q.iter().enumerate() {
        h_tilde[(i, i)] += Complex64::new(0.5 * x * x, 0.0);
    }

    let j = two_j as f64 / 2.0;
    let mut h_tilde_casimir = &jy * &jy * (-half);
    for i in 0..q.len() {
        h_tilde_casimir[(i, i)] += Complex64::new(0.5 * j * (j + 1.0), 0.0);
    }

    OscillatorSystem { two_j, k, p_tilde, jy, h_tilde, h_tilde_casimir }
}

/// `E_m = (j(j+1) - m²)/2`.
pub fn oscillator_energy(two_j: u32, m: TwiceInt) -> f64 {
    let tj = two_j as f64;
    let tm = m.doubled() as f64;
    (tj * (tj + 2.0) - tm * tm) / 8.0
}

impl OscillatorSystem {
    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.h_tilde.nrows()
    }

    pub fn p_tilde(&self) -> &CMatrix {
        &self.p_tilde
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.h_tilde
    }

    pub fn hamiltonian_casimir_form(&self) -> &CMatrix {
        &self.h_tilde_casimir
    }

    /// `‖(P̃² + Q²)/2 - (j(j+1) - Jy²)/2‖_F`.
    pub fn form_residual(&self) -> f64 {
        (&self.h_tilde - &self.h_tilde_casimir).norm()
    }

    /// `‖[Q, P̃] - iJy‖_F`.
    pub fn commutator_residual(&self) -> f64 {
        let q = coordinate_diagonal(self.two_j);
        let comm = diag_mul(&q, &self.p_tilde) - mul_diag(&self.p_tilde, &q);
        (comm - &self.jy * Complex64::new(0.0, 1.0)).norm()
    }

    /// `K|j;m⟩` and its energy.
    pub fn eigenstate(&self, m: TwiceInt) -> Result<(StateVector, f64)> {
        let basis = StateVector::basis(self.two_j, m)?;
        let psi = apply(&self.k, &basis, false)?;
        Ok((psi, oscillator_energy(self.two_j, m)))
    }

    /// `‖H̃ψ - Eψ‖`.
    pub fn eigen_residual(&self, psi: &StateVector, energy: f64) -> f64 {
        let h_psi = &self.h_tilde * psi.amplitudes();
        (h_psi - psi.amplitudes() * Complex64::new(energy, 0.0)).norm()
    }

    /// Eigenvalues of `H̃` from a generic Hermitian eigensolver, ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let eig = SymmetricEigen::try_new(self.h_tilde.clone(), f64::EPSILON, 0)
            .ok_or_else(|| Error::Eigen("Hermitian eigensolver did not converge".into()))?;
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }
}

/// `K|j;m⟩` with `E_m = (j(j+1) - m²)/2`.
pub fn oscillator_eigenstate(two_j: u32, m: TwiceInt) -> Result<(StateVector, f64)> {
    LabelSet::of(two_j).validate(m)?;
    build_oscillator(two_j).eigenstate(m)
}

/// Tolerance for `‖H̃ψ - E_mψ‖`: `1e-11·d`.
pub fn eigen_tolerance(dim: usize) -> f64 {
    1e-11 * dim as f64
}

/// Checks that both Hamiltonian forms agree and `[Q, P̃] = iJy`.
pub fn check_oscillator_forms(two_j: u32, tol: Tolerance) -> Report {
    let started = Instant::now();
    let osc = build_oscillator(two_j);
    let form = osc.form_residual();
    let comm = osc.commutator_residual();
    Report::float("oscillator_forms", two_j, form.max(comm), tol.for_dim(osc.dim()), started)
        .with_detail(format!("forms={form:.3e} commutator={comm:.3e}"))
}

/// Checks `‖H̃ K|j;m⟩ - E_m K|j;m⟩‖` for every `m` against `1e-11·d`
/// (or a fixed override).
pub fn check_oscillator_eigen(two_j: u32, tol: Tolerance) -> Report {
    let started = Instant::now();
    let osc = build_oscillator(two_j);
    let d = osc.dim();
    let threshold = match tol {
        Tolerance::Scaled => eigen_tolerance(d),
        Tolerance::Fixed(t) => t,
    };
    let worst = LabelSet::of(two_j)
        .labels()
        .map(|m| {
            let (psi, e) = osc.eigenstate(m).expect("valid label");
            osc.eigen_residual(&psi, e)
        })
        .fold(0.0, f64::max);
    Report::float("oscillator_eigen", two_j, worst, threshold, started)
}
