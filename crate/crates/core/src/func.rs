//! Kravchuk functions `𝔎_m(k) = 2^{-j} √(C(2j,j+k) / C(2j,j+m)) K_m(k)`.
//!
//! Each value is formed exactly as the rational `𝔎_m(k)²` and only then
//! rounded and square-rooted, so no intermediate overflows at large `j`.

use std::time::Instant;

use nalgebra::DMatrix;
use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Result;
use crate::halfint::{binomial, binomial_row, lowering_coefficient, quarter_phase_power, raising_coefficient, LabelSet, PhaseBase, TwiceInt};
use crate::poly::{kravchuk_poly, KravchukTable};
use crate::report::{Report, Tolerance};

/// Normalizes an exact `K_m(k)` given the weights `C(2j,j+k)` and `C(2j,j+m)`.
fn normalized(poly: &BigInt, weight_k: &BigInt, weight_m: &BigInt, two_j: u32) -> f64 {
    if poly.is_zero() {
        return 0.0;
    }
    let num = poly * poly * weight_k;
    let den = weight_m << two_j as usize;
    let square = BigRational::new(num, den).to_f64().unwrap_or(f64::NAN);
    let magnitude = square.sqrt();
    match poly.sign() {
        Sign::Minus => -magnitude,
        _ => magnitude,
    }
}

/// `𝔎_m(k)` for labels of spin `two_j/2`.
pub fn kravchuk_func(two_j: u32, m: TwiceInt, k: TwiceInt) -> Result<f64> {
    let set = LabelSet::of(two_j);
    set.validate(m)?;
    set.validate(k)?;
    let poly = kravchuk_poly(two_j, m, k)?;
    let tj = two_j as i64;
    let weight_k = binomial(two_j as u64, (tj + k.doubled()) / 2);
    let weight_m = binomial(two_j as u64, (tj + m.doubled()) / 2);
    Ok(normalized(&poly, &weight_k, &weight_m, two_j))
}

/// The orthogonal matrix `M[i(m)][i(k)] = 𝔎_m(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KravchukFuncMatrix {
    two_j: u32,
    values: DMatrix<f64>,
}

/// Builds all Kravchuk functions of one spin from a single exact table.
pub fn kravchuk_basis_matrix(two_j: u32) -> KravchukFuncMatrix {
    KravchukFuncMatrix::new(two_j)
}

impl KravchukFuncMatrix {
    pub fn new(two_j: u32) -> Self {
        let table = KravchukTable::new(two_j);
        let weights = binomial_row(two_j as u64);
        let d = table.dim();
        let values = DMatrix::from_fn(d, d, |im, ik| normalized(table.at(im, ik), &weights[ik], &weights[im], two_j));
        KravchukFuncMatrix { two_j, values }
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// `𝔎_m(k)` by position.
    pub fn at(&self, im: usize, ik: usize) -> f64 {
        self.values[(im, ik)]
    }

    pub fn get(&self, m: TwiceInt, k: TwiceInt) -> Result<f64> {
        let set = LabelSet::of(self.two_j);
        Ok(self.at(set.index(m)?, set.index(k)?))
    }

    /// `max |𝔎_m(n) - 𝔎_n(m)|`.
    pub fn symmetry_residual(&self) -> f64 {
        (&self.values - self.values.transpose()).amax()
    }

    /// `‖MᵀM - I‖_F`.
    pub fn orthonormality_residual(&self) -> f64 {
        let d = self.dim();
        (self.values.transpose() * &self.values - DMatrix::identity(d, d)).norm()
    }

    /// `‖MMᵀ - I‖_F`, i.e. `Σ_m |𝔎_m⟩⟨𝔎_m| = I`.
    pub fn completeness_residual(&self) -> f64 {
        let d = self.dim();
        (&self.values * self.values.transpose() - DMatrix::identity(d, d)).norm()
    }

    /// `max |𝔎_m(-n) - (-1)^{j+m} 𝔎_m(n)|`.
    pub fn parity_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0f64;
        for im in 0..d {
            // j + m = im
            let sign = if im % 2 == 0 { 1.0 } else { -1.0 };
            for in_ in 0..d {
                let mirrored = self.at(im, d - 1 - in_);
                worst = worst.max((mirrored - sign * self.at(im, in_)).abs());
            }
        }
        worst
    }

    /// Residual matrix `R[i(m)][i(k)]` of
    /// `√((j-m)(j+m+1)) 𝔎_{m+1}(k) + √((j+m)(j-m+1)) 𝔎_{m-1}(k) + 2k 𝔎_m(k)`.
    pub fn recurrence_residuals(&self) -> DMatrix<f64> {
        let set = LabelSet::of(self.two_j);
        let d = self.dim();
        DMatrix::from_fn(d, d, |im, ik| {
            let m = set.label(im);
            let k = set.label(ik);
            let up = if im + 1 < d { raising_coefficient(self.two_j, m) * self.at(im + 1, ik) } else { 0.0 };
            let down = if im > 0 { lowering_coefficient(self.two_j, m) * self.at(im - 1, ik) } else { 0.0 };
            up + down + k.doubled() as f64 * self.at(im, ik)
        })
    }
}

fn phase(base: PhaseBase, k: TwiceInt) -> Complex64 {
    quarter_phase_power(base, k).to_complex()
}

/// Checks symmetry, parity, orthonormality and completeness of the basis.
pub fn check_basis(two_j: u32, tol: Tolerance) -> Report {
    let started = Instant::now();
    let basis = KravchukFuncMatrix::new(two_j);
    let residual = basis
        .symmetry_residual()
        .max(basis.parity_residual())
        .max(basis.orthonormality_residual())
        .max(basis.completeness_residual());
    Report::float("kravchuk_basis", two_j, residual, tol.for_dim(basis.dim()), started)
}

/// Checks the three-term recurrence in `m` and that its residual matrix is
/// symmetric, which is the dual recurrence in the argument.
pub fn check_recurrence(two_j: u32, tol: Tolerance) -> Report {
    let started = Instant::now();
    let basis = KravchukFuncMatrix::new(two_j);
    let r = basis.recurrence_residuals();
    let residual = r.amax().max((&r - r.transpose()).amax());
    Report::float("kravchuk_recurrence", two_j, residual, tol.for_dim(basis.dim()), started)
}

/// Checks `Σ_k (-i)^k 𝔎_m(k) 𝔎_k(n) = i^{j+m} i^{j+n} 𝔎_m(n)` for all `m, n`.
pub fn check_phase_sum(two_j: u32, tol: Tolerance) -> Report {
    let started = Instant::now();
    let set = LabelSet::of(two_j);
    let basis = KravchukFuncMatrix::new(two_j);
    let d = set.dim();
    let j = set.j();
    let minus_i: Vec<Complex64> = set.labels().map(|k| phase(PhaseBase::MinusI, k)).collect();
    let i_pow: Vec<Complex64> = set.labels().map(|m| phase(PhaseBase::I, j + m)).collect();
    let mut worst = 0f64;
    for im in 0..d {
        for in_ in 0..d {
            let lhs: Complex64 = (0..d).map(|ik| minus_i[ik] * (basis.at(im, ik) * basis.at(ik, in_))).sum();
            let rhs = i_pow[im] * i_pow[in_] * basis.at(im, in_);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Report::float("phase_sum_functions", two_j, worst, tol.for_dim(d), started)
}

/// `-2 Σ_k k 𝔎_m(k) 𝔎_n(k)`.
///
/// Equals `√((j+m)(j-m+1))` for `n = m-1`, `√((j-m)(j+m+1))` for `n = m+1`
/// and vanishes otherwise.
pub fn tridiagonal_moment(two_j: u32, m: TwiceInt, n: TwiceInt) -> Result<f64> {
    let set = LabelSet::of(two_j);
    set.validate(m)?;
    set.validate(n)?;
    let sum: f64 = set
        .labels()
        .map(|k| -> Result<f64> { Ok(k.value() * kravchuk_func(two_j, m, k)? * kravchuk_func(two_j, n, k)?) })
        .sum::<Result<f64>>()?;
    Ok(-2.0 * sum)
}

/// Expected value of [`tridiagonal_moment`].
pub fn tridiagonal_moment_expected(two_j: u32, m: TwiceInt, n: TwiceInt) -> f64 {
    let one = TwiceInt::from_int(1);
    if n == m - one {
        lowering_coefficient(two_j, m)
    } else if n == m + one {
        raising_coefficient(two_j, m)
    } else {
        0.0
    }
}

/// `√(C(2j, j+k) / 2^{2j})` for every label `k`, the binomial amplitudes of
/// the lowest-weight state rotated by `e^{-iβJx}`.
pub fn binomial_amplitudes(two_j: u32) -> Vec<f64> {
    let den = BigInt::one() << two_j as usize;
    binomial_row(two_j as u64)
        .into_iter()
        .map(|c| BigRational::new(c, den.clone()).to_f64().unwrap_or(f64::NAN).sqrt())
        .collect()
}
