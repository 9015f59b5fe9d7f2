//! su(2) generators `Jz = Q`, `Jx = K†QK`, `Jy = KQK†`, ladder operators,
//! rotation matrices and spin coherent states.
//!
//! Euler angles follow the z-x-z convention
//! `D(α, β, γ) = e^{-iαJz} e^{-iβJx} e^{-iγJz}`, with `Jx` in the middle slot
//! rather than the `Jy` of the usual Wigner-D convention. The two differ by
//! `α → α - π/2`, `γ → γ + π/2`.
//!
//! [`exp_oracle`] recomputes `D` from the textbook ladder matrix elements and a
//! dense eigendecomposition; it never touches the Kravchuk functions.

use std::time::Instant;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{binomial_amplitudes, KravchukFuncMatrix};
use crate::halfint::{raising_coefficient, LabelSet, TwiceInt};
use crate::report::{Report, Tolerance};
use crate::transform::{coordinate_diagonal, conjugate_diag, diag_mul, kravchuk_transform_from, max_entry_norm, mul_diag, CMatrix, CVector, StateVector, UnitaryMatrix};

/// Hermitian generators of the spin-`two_j/2` representation.
#[derive(Clone, Debug, PartialEq)]
pub struct Su2Generators {
    two_j: u32,
    jz: Vec<f64>,
    jx: CMatrix,
    jy: CMatrix,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        EulerAngles { alpha, beta, gamma }
    }
}

/// Builds `Jz`, `Jx = K†QK` and `Jy = KQK†`.
pub fn build_generators(two_j: u32) -> Su2Generators {
    let k = kravchuk_transform_from(&KravchukFuncMatrix::new(two_j));
    let q = coordinate_diagonal(two_j);
    let jx = conjugate_diag(k.matrix(), &q);
    let kd = k.matrix().adjoint();
    let jy = conjugate_diag(&kd, &q);
    Su2Generators { two_j, jz: q, jx, jy }
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

fn i_times(a: &CMatrix) -> CMatrix {
    a * Complex64::new(0.0, 1.0)
}

impl Su2Generators {
    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.jz.len()
    }

    /// Diagonal of `Jz`.
    pub fn jz(&self) -> &[f64] {
        &self.jz
    }

    pub fn jz_matrix(&self) -> CMatrix {
        crate::transform::diag_matrix(&self.jz)
    }

    pub fn jx(&self) -> &CMatrix {
        &self.jx
    }

    pub fn jy(&self) -> &CMatrix {
        &self.jy
    }

    /// `max(‖Jx - Jx†‖_F, ‖Jy - Jy†‖_F)`.
    pub fn hermiticity_residual(&self) -> f64 {
        (&self.jx - self.jx.adjoint()).norm().max((&self.jy - self.jy.adjoint()).norm())
    }

    /// `‖[Jx,Jy] - iJz‖`, `‖[Jy,Jz] - iJx‖`, `‖[Jz,Jx] - iJy‖` (Frobenius).
    pub fn commutator_residuals(&self) -> [f64; 3] {
        let jz = self.jz_matrix();
        let xy = commutator(&self.jx, &self.jy) - i_times(&jz);
        let yz = mul_diag(&self.jy, &self.jz) - diag_mul(&self.jz, &self.jy) - i_times(&self.jx);
        let zx = diag_mul(&self.jz, &self.jx) - mul_diag(&self.jx, &self.jz) - i_times(&self.jy);
        [xy.norm(), yz.norm(), zx.norm()]
    }

    /// `‖Jx² + Jy² + Jz² - j(j+1) I‖_F`.
    pub fn casimir_residual(&self) -> f64 {
        let j = self.two_j as f64 / 2.0;
        let mut total = &self.jx * &self.jx + &self.jy * &self.jy;
        for (i, z) in self.jz.iter().enumerate() {
            total[(i, i)] += Complex64::new(z * z - j * (j + 1.0), 0.0);
        }
        total.norm()
    }
}

/// `J± = Jx ± iJy`.
pub fn ladder_ops(g: &Su2Generators) -> (CMatrix, CMatrix) {
    let iy = i_times(&g.jy);
    (&g.jx + &iy, &g.jx - iy)
}

/// `J₊` from `⟨j;m+1|J₊|j;m⟩ = √((j-m)(j+m+1))`, rows and columns by label position.
pub fn standard_raising(two_j: u32) -> DMatrix<f64> {
    let set = LabelSet::of(two_j);
    let d = set.dim();
    let mut jp = DMatrix::zeros(d, d);
    for (i, m) in set.labels().enumerate().take(d.saturating_sub(1)) {
        jp[(i + 1, i)] = raising_coefficient(two_j, m);
    }
    jp
}

/// `Jx = (J₊ + J₋)/2` from the standard ladder elements.
pub fn standard_jx(two_j: u32) -> DMatrix<f64> {
    let jp = standard_raising(two_j);
    (&jp + jp.transpose()) * 0.5
}

/// `Jy = (J₊ - J₋)/(2i)` from the standard ladder elements.
pub fn standard_jy(two_j: u32) -> CMatrix {
    let jp = standard_raising(two_j);
    let diff = (&jp - jp.transpose()) * 0.5;
    diff.map(|x| Complex64::new(0.0, -x))
}

fn real_to_complex(a: &DMatrix<f64>) -> CMatrix {
    a.map(|x| Complex64::new(x, 0.0))
}

/// Largest entrywise deviation of `J±` from the standard ladder matrices.
pub fn ladder_residual(g: &Su2Generators) -> f64 {
    let (jp, jm) = ladder_ops(g);
    let reference = real_to_complex(&standard_raising(g.two_j));
    let up = max_entry_norm(&(&jp - &reference));
    let down = max_entry_norm(&(&jm - reference.transpose()));
    up.max(down)
}

/// `e^{iβk}` for every label `k`.
fn beta_phases(two_j: u32, beta: f64) -> Vec<Complex64> {
    LabelSet::of(two_j).labels().map(|k| Complex64::from_polar(1.0, beta * k.value())).collect()
}

/// `Σ_k e^{iβk} 𝔎_m(k) 𝔎_n(k)`.
fn spectral_x_rotation(basis: &KravchukFuncMatrix, beta: f64) -> CMatrix {
    let phases = beta_phases(basis.two_j(), beta);
    let d = basis.dim();
    CMatrix::from_fn(d, d, |im, in_| {
        (0..d).map(|ik| phases[ik] * (basis.at(im, ik) * basis.at(in_, ik))).sum()
    })
}

/// `e^{-iβJx}` from its spectral decomposition over the Kravchuk basis.
pub fn x_rotation(two_j: u32, beta: f64) -> UnitaryMatrix {
    UnitaryMatrix::from_parts(two_j, spectral_x_rotation(&KravchukFuncMatrix::new(two_j), beta))
}

fn z_phases(two_j: u32, angle: f64) -> Vec<Complex64> {
    LabelSet::of(two_j).labels().map(|m| Complex64::from_polar(1.0, -angle * m.value())).collect()
}

/// `D(α, β, γ)[m][n] = e^{-i(αm+γn)} Σ_k e^{iβk} 𝔎_m(k) 𝔎_n(k)`.
pub fn euler_matrix(two_j: u32, angles: EulerAngles) -> UnitaryMatrix {
    euler_matrix_from(&KravchukFuncMatrix::new(two_j), angles)
}

pub fn euler_matrix_from(basis: &KravchukFuncMatrix, angles: EulerAngles) -> UnitaryMatrix {
    let two_j = basis.two_j();
    let rot = spectral_x_rotation(basis, angles.beta);
    let left = z_phases(two_j, angles.alpha);
    let right = z_phases(two_j, angles.gamma);
    let d = basis.dim();
    UnitaryMatrix::from_parts(two_j, CMatrix::from_fn(d, d, |im, in_| left[im] * rot[(im, in_)] * right[in_]))
}

/// `e^{-iαJz} e^{-iβJx} e^{-iγJz}` with `Jx` from the standard ladder
/// elements and `e^{-iβJx}` from a dense symmetric eigendecomposition.
pub fn exp_oracle(two_j: u32, angles: EulerAngles) -> Result<UnitaryMatrix> {
    let jx = standard_jx(two_j);
    let d = jx.nrows();
    let eig = SymmetricEigen::try_new(jx, f64::EPSILON, 0)
        .ok_or_else(|| Error::Eigen(format!("symmetric eigensolver did not converge for two_j = {two_j}")))?;
    if eig.eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::Eigen("non-finite eigenvalue".into()));
    }
    let v = real_to_complex(&eig.eigenvectors);
    let phases: Vec<Complex64> = eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, -angles.beta * l)).collect();
    let mut scaled = v.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    let rot = scaled * v.adjoint();
    let left = z_phases(two_j, angles.alpha);
    let right = z_phases(two_j, angles.gamma);
    let out = CMatrix::from_fn(d, d, |i, j| left[i] * rot[(i, j)] * right[j]);
    Ok(UnitaryMatrix::from_parts(two_j, out))
}

/// `|α, β⟩ ∝ Σ_m e^{-iαm} Σ_k e^{iβk} √C(2j,j+k) 𝔎_m(k) |j;m⟩ / 2^j`,
/// the rotated lowest-weight state with the unimodular factor `e^{ijγ}` dropped.
pub fn spin_coherent_state(two_j: u32, alpha: f64, beta: f64) -> StateVector {
    spin_coherent_state_from(&KravchukFuncMatrix::new(two_j), alpha, beta)
}

pub fn spin_coherent_state_from(basis: &KravchukFuncMatrix, alpha: f64, beta: f64) -> StateVector {
    let two_j = basis.two_j();
    let d = basis.dim();
    let weights = binomial_amplitudes(two_j);
    let beta_ph = beta_phases(two_j, beta);
    let alpha_ph = z_phases(two_j, alpha);
    let amplitudes = CVector::from_fn(d, |im, _| {
        let inner: Complex64 = (0..d).map(|ik| beta_ph[ik] * (weights[ik] * basis.at(im, ik))).sum();
        alpha_ph[im] * inner
    });
    StateVector::new(two_j, amplitudes).expect("dimension matches")
}

/// Deterministic angle triples in `[-2π, 2π]` for sampling checks.
pub fn sample_angles(count: usize, seed: u64) -> Vec<EulerAngles> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = 2.0 * std::f64::consts::PI;
    (0..count)
        .map(|_| {
            EulerAngles::new(
                rng.random_range(-span..=span),
                rng.random_range(-span..=span),
                rng.random_range(-span..=span),
            )
        })
        .collect()
}

/// Commutators, Casimir, Hermiticity and agreement of `Jx`, `Jy` with the
/// standard ladder construction.
pub fn check_generators(two_j: u32, tol: Tolerance) -> Report {
    let started = Instant::now();
    let g = build_generators(two_j);
    let [xy, yz, zx] = g.commutator_residuals();
    let casimir = g.casimir_residual();
    let herm = g.hermiticity_residual();
    let jx_ref = (g.jx() - real_to_complex(&standard_jx(two_j))).norm();
    let jy_ref = (g.jy() - standard_jy(two_j)).norm();
    let worst = [xy, yz, zx, casimir, herm, jx_ref, jy_ref].into_iter().fold(0.0, f64::max);
    Report::float("su2_commutators", two_j, worst, tol.for_dim(g.dim()), started).with_detail(format!(
        "xy={xy:.3e} yz={yz:.3e} zx={zx:.3e} casimir={casimir:.3e} hermitian={herm:.3e} jx_vs_ladder={jx_ref:.3e} jy_vs_ladder={jy_ref:.3e}"
    ))
}

/// Entries of `J±` against `√((j∓m)(j±m+1))`, and `[Jz,J±] = ±J±`, `[J₋,J₊] = -2Jz`.
pub fn check_ladder(two_j: u32, tol: Tolerance) -> Report {
    let started = Instant::now();
    let g = build_generators(two_j);
    let entries = ladder_residual(&g);
    let (jp, jm) = ladder_ops(&g);
    let z = &g.jz;
    let raise = max_entry_norm(&(diag_mul(z, &jp) - mul_diag(&jp, z) - &jp));
    let lower = max_entry_norm(&(diag_mul(z, &jm) - mul_diag(&jm, z) + &jm));
    let mut cas = commutator(&jm, &jp);
    for (i, zi) in z.iter().enumerate() {
        cas[(i, i)] += Complex64::new(2.0 * zi, 0.0);
    }
    let worst = entries.max(raise).max(lower).max(max_entry_norm(&cas));
    Report::float("ladder_structure", two_j, worst, tol.for_dim(g.dim()), started)
}

/// Largest `‖D - oracle‖_F` over the sampled angles.
pub fn euler_oracle_residual(two_j: u32, angles: &[EulerAngles]) -> Result<f64> {
    let basis = KravchukFuncMatrix::new(two_j);
    let mut worst = 0f64;
    for &a in angles {
        let d = euler_matrix_from(&basis, a);
        let oracle = exp_oracle(two_j, a)?;
        worst = worst.max(d.distance(oracle.matrix()));
    }
    Ok(worst)
}

pub const EULER_ORACLE_TOL: f64 = 1e-9;
pub const DOUBLE_COVER_TOL: f64 = 1e-10;
pub const COHERENT_NORM_TOL: f64 = 1e-12;
pub const COHERENT_ORBIT_TOL: f64 = 1e-10;

/// Euler matrices against [`exp_oracle`] on `samples` seeded angle triples.
pub fn check_euler(two_j: u32, samples: usize, seed: u64, tol: Option<f64>) -> Report {
    let started = Instant::now();
    let angles = sample_angles(samples, seed ^ u64::from(two_j));
    let tol = tol.unwrap_or(EULER_ORACLE_TOL);
    match euler_oracle_residual(two_j, &angles) {
        Ok(r) => Report::float("euler_vs_oracle", two_j, r, tol, started),
        Err(e) => Report::float("euler_vs_oracle", two_j, f64::INFINITY, tol, started).with_detail(e.to_string()),
    }
}

/// `e^{-2πiJx} = (-1)^{2j} I`.
pub fn check_double_cover(two_j: u32, tol: Option<f64>) -> Report {
    let started = Instant::now();
    let r = x_rotation(two_j, 2.0 * std::f64::consts::PI);
    let d = r.dim();
    let sign = if two_j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let expected = CMatrix::identity(d, d) * Complex64::new(sign, 0.0);
    Report::float("x_rotation_double_cover", two_j, r.distance(&expected), tol.unwrap_or(DOUBLE_COVER_TOL), started)
}

/// Coherent states: unit norm and equality with `D(α,β,0)|j;-j⟩`. A fixed
/// `tol` replaces both thresholds.
pub fn check_coherent_states(two_j: u32, samples: usize, seed: u64, tol: Option<f64>) -> Report {
    let started = Instant::now();
    let basis = KravchukFuncMatrix::new(two_j);
    let lowest = StateVector::basis(two_j, TwiceInt::from_doubled(-(two_j as i64))).expect("valid label");
    let mut norm_dev = 0f64;
    let mut orbit_dev = 0f64;
    for a in sample_angles(samples, seed ^ (u64::from(two_j) << 8)) {
        let psi = spin_coherent_state_from(&basis, a.alpha, a.beta);
        norm_dev = norm_dev.max((psi.norm() - 1.0).abs());
        let d = euler_matrix_from(&basis, EulerAngles::new(a.alpha, a.beta, 0.0));
        let rotated = crate::transform::apply(&d, &lowest, false).expect("dimension matches");
        orbit_dev = orbit_dev.max(psi.distance(&rotated));
    }
    let (norm_tol, orbit_tol) = tol.map_or((COHERENT_NORM_TOL, COHERENT_ORBIT_TOL), |t| (t, t));
    let mut report = Report::float("coherent_states", two_j, orbit_dev, orbit_tol, started)
        .with_detail(format!("norm_deviation={norm_dev:.3e} orbit_deviation={orbit_dev:.3e}"));
    report.pass = report.pass && norm_dev < norm_tol;
    report
}
