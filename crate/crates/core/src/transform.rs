//! The Kravchuk transform `K` with `K³ = I`, and the finite Fourier
//! transform `F` with `F⁴ = I` for comparison.
//!
//! Matrices are indexed by label position: row `i(n)`, column `i(m)`. The
//! coordinate operator `Q` is never materialized; products with it scale
//! rows or columns by the labels.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::func::KravchukFuncMatrix;
use crate::halfint::{quarter_phase_power, LabelSet, PhaseBase, TwiceInt};
use crate::report::{Report, Tolerance};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// A square complex matrix acting on the spin-`two_j/2` space.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    two_j: u32,
    matrix: CMatrix,
}

impl UnitaryMatrix {
    pub fn new(two_j: u32, matrix: CMatrix) -> Result<Self> {
        let d = two_j as usize + 1;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: matrix.nrows().max(matrix.ncols()) });
        }
        Ok(UnitaryMatrix { two_j, matrix })
    }

    pub(crate) fn from_parts(two_j: u32, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), two_j as usize + 1);
        UnitaryMatrix { two_j, matrix }
    }

    pub fn identity(two_j: u32) -> Self {
        let d = two_j as usize + 1;
        UnitaryMatrix { two_j, matrix: CMatrix::identity(d, d) }
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Entry `⟨j;n|U|j;m⟩`.
    pub fn entry(&self, n: TwiceInt, m: TwiceInt) -> Result<Complex64> {
        let set = LabelSet::of(self.two_j);
        Ok(self.matrix[(set.index(n)?, set.index(m)?)])
    }

    pub fn adjoint(&self) -> Self {
        UnitaryMatrix { two_j: self.two_j, matrix: self.matrix.adjoint() }
    }

    pub fn compose(&self, rhs: &UnitaryMatrix) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: rhs.dim() });
        }
        Ok(UnitaryMatrix { two_j: self.two_j, matrix: &self.matrix * &rhs.matrix })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = CMatrix::identity(self.dim(), self.dim());
        for _ in 0..n {
            acc = &acc * &self.matrix;
        }
        UnitaryMatrix { two_j: self.two_j, matrix: acc }
    }

    /// `‖U†U - I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.dim();
        (self.matrix.adjoint() * &self.matrix - CMatrix::identity(d, d)).norm()
    }

    /// `‖U - V‖_F`.
    pub fn distance(&self, other: &CMatrix) -> f64 {
        (&self.matrix - other).norm()
    }
}

/// A state `ψ` with `ψ[i(n)] = ψ(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    two_j: u32,
    amplitudes: CVector,
}

impl StateVector {
    pub fn new(two_j: u32, amplitudes: CVector) -> Result<Self> {
        let d = two_j as usize + 1;
        if amplitudes.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: amplitudes.len() });
        }
        Ok(StateVector { two_j, amplitudes })
    }

    /// The basis state `|j;m⟩`.
    pub fn basis(two_j: u32, m: TwiceInt) -> Result<Self> {
        let set = LabelSet::of(two_j);
        let mut amplitudes = CVector::zeros(set.dim());
        amplitudes[set.index(m)?] = Complex64::new(1.0, 0.0);
        Ok(StateVector { two_j, amplitudes })
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: TwiceInt) -> Result<Complex64> {
        Ok(self.amplitudes[LabelSet::of(self.two_j).index(n)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self, other⟩ = Σ conj(self(n)) other(n)`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        (&self.amplitudes - &other.amplitudes).norm()
    }
}

fn phase(base: PhaseBase, k: TwiceInt) -> Complex64 {
    quarter_phase_power(base, k).to_complex()
}

/// `K[i(n)][i(m)] = (-1)^{2j} i^n 𝔎_{-n}(m)`.
pub fn kravchuk_transform_matrix(two_j: u32) -> UnitaryMatrix {
    kravchuk_transform_from(&KravchukFuncMatrix::new(two_j))
}

/// Builds `K` from an existing Kravchuk basis.
pub fn kravchuk_transform_from(basis: &KravchukFuncMatrix) -> UnitaryMatrix {
    let two_j = basis.two_j();
    let set = LabelSet::of(two_j);
    let d = set.dim();
    let sign = if two_j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let i_pow: Vec<Complex64> = set.labels().map(|n| phase(PhaseBase::I, n) * sign).collect();
    // 𝔎_{-n} sits in row d-1-i(n)
    let matrix = CMatrix::from_fn(d, d, |in_, im| i_pow[in_] * basis.at(d - 1 - in_, im));
    UnitaryMatrix { two_j, matrix }
}

/// Applies `U` (or `U†` when `inverse`) to `ψ`.
pub fn apply(u: &UnitaryMatrix, psi: &StateVector, inverse: bool) -> Result<StateVector> {
    if u.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: psi.dim() });
    }
    let amplitudes = if inverse {
        u.matrix.ad_mul(&psi.amplitudes)
    } else {
        &u.matrix * &psi.amplitudes
    };
    Ok(StateVector { two_j: u.two_j, amplitudes })
}

/// `K[ψ]` or `K⁺[ψ]` evaluated from the explicit sums
/// `K[ψ](n) = (-1)^{2j} Σ_m i^n (-1)^{j+m} 𝔎_n(m) ψ(m)` and
/// `K⁺[ψ](n) = (-1)^{2j} Σ_m (-i)^m (-1)^{j+n} 𝔎_n(m) ψ(m)`.
pub fn kravchuk_apply_sum_form(basis: &KravchukFuncMatrix, psi: &StateVector, inverse: bool) -> Result<StateVector> {
    let two_j = basis.two_j();
    if psi.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: psi.dim() });
    }
    let set = LabelSet::of(two_j);
    let d = set.dim();
    let global = if two_j.is_multiple_of(2) { 1.0 } else { -1.0 };
    // (-1)^{j+m} with j+m = i(m)
    let parity = |i: usize| if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    let amplitudes = CVector::from_fn(d, |in_, _| {
        let n = set.label(in_);
        let mut acc = Complex64::new(0.0, 0.0);
        for (im, m) in set.labels().enumerate() {
            let f = basis.at(in_, im) * global;
            let c = if inverse {
                phase(PhaseBase::MinusI, m) * (parity(in_) * f)
            } else {
                phase(PhaseBase::I, n) * (parity(im) * f)
            };
            acc += c * psi.amplitudes[im];
        }
        acc
    });
    Ok(StateVector { two_j, amplitudes })
}

/// `F[i(k)][i(n)] = e^{-2πi kn/d} / √d`; `kn` is a quarter-integer for half-integer `j`.
pub fn fourier_matrix(two_j: u32) -> UnitaryMatrix {
    let set = LabelSet::of(two_j);
    let d = set.dim();
    let norm = (d as f64).sqrt().recip();
    let matrix = CMatrix::from_fn(d, d, |ik, in_| {
        // (2k)(2n) mod 4d keeps the angle argument small and exact
        let kn4 = (set.label(ik).doubled() * set.label(in_).doubled()).rem_euclid(4 * d as i64);
        let angle = -2.0 * PI * kn4 as f64 / (4 * d) as f64;
        Complex64::from_polar(norm, angle)
    });
    UnitaryMatrix { two_j, matrix }
}

/// Diagonal of `Q`, the labels `-j..j` as reals.
pub fn coordinate_diagonal(two_j: u32) -> Vec<f64> {
    LabelSet::of(two_j).labels().map(TwiceInt::value).collect()
}

/// `diag(q) · A`.
pub fn diag_mul(q: &[f64], a: &CMatrix) -> CMatrix {
    let mut out = a.clone();
    for (i, mut row) in out.row_iter_mut().enumerate() {
        row *= Complex64::new(q[i], 0.0);
    }
    out
}

/// `A · diag(q)`.
pub fn mul_diag(a: &CMatrix, q: &[f64]) -> CMatrix {
    let mut out = a.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        col *= Complex64::new(q[j], 0.0);
    }
    out
}

/// `diag(q)` as a dense complex matrix, for output only.
pub fn diag_matrix(q: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(q.len(), q.iter().map(|&x| Complex64::new(x, 0.0))))
}

/// Largest entry modulus.
pub fn max_entry_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `A† · diag(q) · A`.
pub fn conjugate_diag(a: &CMatrix, q: &[f64]) -> CMatrix {
    a.adjoint() * diag_mul(q, a)
}

/// The momentum `P = F†QF` of the Fourier picture.
pub fn fourier_momentum(two_j: u32) -> CMatrix {
    conjugate_diag(fourier_matrix(two_j).matrix(), &coordinate_diagonal(two_j))
}

/// Residuals of the cubic relations for one `K`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicResiduals {
    /// `‖K³ - I‖_F`
    pub cube: f64,
    /// `‖K†QK†QK† - KQKQK - iQ‖_F`
    pub commutation: f64,
    /// `‖QK†QK - K†QKQ - iKQK†‖_F`
    pub commutation_alt: f64,
    /// `‖K² - K†‖_F`
    pub square_is_adjoint: f64,
}

pub fn cubic_residuals(k: &UnitaryMatrix) -> CubicResiduals {
    let d = k.dim();
    let q = coordinate_diagonal(k.two_j);
    let kk = k.matrix();
    let kd = kk.adjoint();
    let id = CMatrix::identity(d, d);
    let i = Complex64::new(0.0, 1.0);
    let qm = diag_matrix(&q);

    let k2 = kk * kk;
    let cube = (&k2 * kk - &id).norm();

    // K†QK†QK† and KQKQK
    let kd_q = mul_diag(&kd, &q);
    let k_q = mul_diag(kk, &q);
    let lhs = &kd_q * &kd_q * &kd;
    let rhs = &k_q * &k_q * kk;
    let commutation = (lhs - rhs - &qm * i).norm();

    // QK†QK - K†QKQ = iKQK†
    let kd_q_k = &kd_q * kk;
    let left = diag_mul(&q, &kd_q_k) - mul_diag(&kd_q_k, &q);
    let right = &k_q * &kd * i;
    let commutation_alt = (left - right).norm();

    let square_is_adjoint = (k2 - kd).norm();
    CubicResiduals { cube, commutation, commutation_alt, square_is_adjoint }
}

/// Checks `K³ = I`, `K†QK†QK† - KQKQK = iQ` and its equivalent forms.
pub fn check_cube_identity(two_j: u32, tol: Tolerance) -> Report {
    let started = Instant::now();
    let k = kravchuk_transform_matrix(two_j);
    let r = cubic_residuals(&k);
    let worst = r.cube.max(r.commutation).max(r.commutation_alt).max(r.square_is_adjoint);
    Report::float("kravchuk_cube", two_j, worst, tol.for_dim(k.dim()), started).with_detail(format!(
        "cube={:.3e} commutation={:.3e} commutation_alt={:.3e} square_vs_adjoint={:.3e}",
        r.cube, r.commutation, r.commutation_alt, r.square_is_adjoint
    ))
}

/// Checks `F⁴ = I`.
pub fn check_fourier(two_j: u32, tol: Tolerance) -> Report {
    let started = Instant::now();
    let f = fourier_matrix(two_j);
    let d = f.dim();
    let f2 = f.matrix() * f.matrix();
    let residual = (&f2 * &f2 - CMatrix::identity(d, d)).norm();
    Report::float("fourier_fourth_power", two_j, residual, tol.for_dim(d), started)
}

/// How many eigenvalues of `K` sit at `1`, `e^{2πi/3}` and `e^{-2πi/3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CubeRootMultiplicities {
    pub one: usize,
    pub omega: usize,
    pub omega_bar: usize,
    /// Eigenvalues farther than the tolerance from every cube root of unity.
    pub stray: usize,
}

/// Eigenvalues of a unitary matrix from its complex Schur form.
pub fn unitary_eigenvalues(u: &UnitaryMatrix) -> Result<Vec<Complex64>> {
    let schur = nalgebra::linalg::Schur::try_new(u.matrix().clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigen("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Sorts the eigenvalues of `K` onto the three cube roots of unity.
pub fn kravchuk_eigen_multiplicities(two_j: u32, tol: f64) -> Result<CubeRootMultiplicities> {
    let k = kravchuk_transform_matrix(two_j);
    let roots = [
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(1.0, 2.0 * PI / 3.0),
        Complex64::from_polar(1.0, -2.0 * PI / 3.0),
    ];
    let mut counts = [0usize; 4];
    for lambda in unitary_eigenvalues(&k)? {
        let slot = roots.iter().position(|r| (lambda - r).norm() < tol).unwrap_or(3);
        counts[slot] += 1;
    }
    Ok(CubeRootMultiplicities { one: counts[0], omega: counts[1], omega_bar: counts[2], stray: counts[3] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eps;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_spin() {
        assert_eq!(kravchuk_transform_matrix(0).matrix(), &CMatrix::identity(1, 1));
        assert_eq!(fourier_matrix(0).matrix(), &CMatrix::identity(1, 1));
        let r = check_cube_identity(0, Tolerance::Scaled);
        assert!(r.pass);
        assert_eq!(r.max_residual, 0.0);
        let psi = StateVector::new(0, CVector::from_element(1, c(0.3, -2.0))).unwrap();
        assert_eq!(apply(&kravchuk_transform_matrix(0), &psi, false).unwrap(), psi);
    }

    #[test]
    fn spin_half_transform_entries() {
        // K[n][m] = -i^n 𝔎_{-n}(m), 𝔎 = [[h, h], [h, -h]]
        let k = kravchuk_transform_matrix(1);
        let h = FRAC_1_SQRT_2;
        let zeta = c(h, h);
        let zeta_bar = zeta.conj();
        // n = -1/2: i^{-1/2} = ζ̄, row 𝔎_{1/2} = (h, -h)
        // n = +1/2: i^{1/2} = ζ, row 𝔎_{-1/2} = (h, h)
        let expected = CMatrix::from_row_slice(
            2,
            2,
            &[-zeta_bar * h, zeta_bar * h, -zeta * h, -zeta * h],
        );
        assert!(k.distance(&expected) < 1e-15, "{}", k.matrix());
        assert!(k.unitarity_residual() < eps(2));
        assert!((k.pow(3).matrix() - CMatrix::identity(2, 2)).norm() < eps(2));
    }

    #[test]
    fn spin_half_fourier() {
        let f = fourier_matrix(1);
        let h = FRAC_1_SQRT_2;
        let em = c(h, -h) * h;
        let ep = c(h, h) * h;
        let expected = CMatrix::from_row_slice(2, 2, &[em, ep, ep, em]);
        assert!(f.distance(&expected) < 1e-15);
        let swap = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(f.pow(2).distance(&swap) < 1e-15);
        assert!(check_fourier(1, Tolerance::Scaled).pass);
        assert!(check_fourier(4, Tolerance::Scaled).pass);
    }

    #[test]
    fn cube_identity_examples() {
        for two_j in [2, 3, 40] {
            let r = check_cube_identity(two_j, Tolerance::Scaled);
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn eigenvalues_are_cube_roots() {
        for two_j in 0..=12 {
            let m = kravchuk_eigen_multiplicities(two_j, eps(two_j as usize + 1)).unwrap();
            assert_eq!(m.stray, 0, "{two_j}: {m:?}");
            assert_eq!(m.one + m.omega + m.omega_bar, two_j as usize + 1);
        }
    }

    #[test]
    fn fourier_momentum_is_hermitian() {
        let p = fourier_momentum(5);
        assert!((&p - p.adjoint()).norm() < 1e-13);
    }

    #[test]
    fn dimension_mismatch() {
        let k = kravchuk_transform_matrix(2);
        let psi = StateVector::basis(1, TwiceInt::from_doubled(1)).unwrap();
        assert_eq!(apply(&k, &psi, false), Err(Error::DimensionMismatch { expected: 3, found: 2 }));
        assert!(UnitaryMatrix::new(2, CMatrix::identity(2, 2)).is_err());
    }
}
