//! Half-integer labels, label sets, extended binomials and exact quarter phases.
//!
//! Spins and magnetic labels are carried as their doubles so that `j = 3/2`
//! is the integer `3`. Phases such as `i^{1/2}` live in the ring
//! `Z[e^{iπ/4}]`, which [`Cyclotomic8`] implements with four integer
//! coordinates.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A half-integer stored losslessly as twice its value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TwiceInt(i64);

impl TwiceInt {
    pub const ZERO: TwiceInt = TwiceInt(0);

    pub const fn from_doubled(doubled: i64) -> Self {
        TwiceInt(doubled)
    }

    pub const fn from_int(n: i64) -> Self {
        TwiceInt(2 * n)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub const fn to_integer(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.0 / 2)
        } else {
            None
        }
    }
}

impl Add for TwiceInt {
    type Output = TwiceInt;
    fn add(self, rhs: TwiceInt) -> TwiceInt {
        TwiceInt(self.0 + rhs.0)
    }
}

impl Sub for TwiceInt {
    type Output = TwiceInt;
    fn sub(self, rhs: TwiceInt) -> TwiceInt {
        TwiceInt(self.0 - rhs.0)
    }
}

impl Neg for TwiceInt {
    type Output = TwiceInt;
    fn neg(self) -> TwiceInt {
        TwiceInt(-self.0)
    }
}

impl fmt::Display for TwiceInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_integer() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/2", self.0),
        }
    }
}

/// The ordered labels `-j, -j+1, ..., j` of a spin-`j` space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LabelSet {
    two_j: u32,
}

/// Builds the label set of dimension `two_j + 1`.
pub fn make_label_set(two_j: i64) -> Result<LabelSet> {
    LabelSet::new(two_j)
}

impl LabelSet {
    pub fn new(two_j: i64) -> Result<Self> {
        let two_j = u32::try_from(two_j).map_err(|_| Error::NegativeSpin(two_j))?;
        Ok(LabelSet { two_j })
    }

    pub const fn of(two_j: u32) -> Self {
        LabelSet { two_j }
    }

    pub const fn two_j(&self) -> u32 {
        self.two_j
    }

    pub const fn j(&self) -> TwiceInt {
        TwiceInt(self.two_j as i64)
    }

    pub const fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// Label at position `index` (0 is `-j`).
    pub fn label(&self, index: usize) -> TwiceInt {
        debug_assert!(index < self.dim());
        TwiceInt(2 * index as i64 - self.two_j as i64)
    }

    pub fn labels(&self) -> impl DoubleEndedIterator<Item = TwiceInt> + ExactSizeIterator + Clone {
        let two_j = self.two_j as i64;
        (0..self.dim()).map(move |i| TwiceInt(2 * i as i64 - two_j))
    }

    /// Checks parity and range of `m` against this set.
    pub fn validate(&self, m: TwiceInt) -> Result<()> {
        if !self.has_parity_of(m) {
            return Err(Error::LabelParity { two_j: self.two_j, label: m.0 });
        }
        if m.0.abs() > self.two_j as i64 {
            return Err(Error::LabelOutOfRange { two_j: self.two_j, label: m.0 });
        }
        Ok(())
    }

    /// True when `m` is integer for integer `j` and half-integer otherwise.
    pub fn has_parity_of(&self, m: TwiceInt) -> bool {
        (m.0 - self.two_j as i64).rem_euclid(2) == 0
    }

    pub fn contains(&self, m: TwiceInt) -> bool {
        self.validate(m).is_ok()
    }

    /// Position of `m` in the ordered set.
    pub fn index(&self, m: TwiceInt) -> Result<usize> {
        self.validate(m)?;
        Ok(((m.0 + self.two_j as i64) / 2) as usize)
    }
}

/// `C(m, n)` with `C(m, n) = 0` whenever `n` falls outside `0..=m`.
pub fn binomial(m: u64, n: i64) -> BigInt {
    if n < 0 || n as u64 > m {
        return BigInt::zero();
    }
    let n = (n as u64).min(m - n as u64);
    let mut acc = BigInt::one();
    for i in 0..n {
        acc *= m - i;
        acc /= i + 1;
    }
    acc
}

/// The full row `C(m, 0), ..., C(m, m)`.
pub fn binomial_row(m: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(m as usize + 1);
    let mut acc = BigInt::one();
    row.push(acc.clone());
    for i in 0..m {
        acc *= m - i;
        acc /= i + 1;
        row.push(acc.clone());
    }
    row
}

/// `√((j-m)(j+m+1))`, the matrix element of `J₊` from `|j;m⟩` to `|j;m+1⟩`.
pub fn raising_coefficient(two_j: u32, m: TwiceInt) -> f64 {
    let tj = two_j as i64;
    let (a, b) = (tj - m.doubled(), tj + m.doubled() + 2);
    ((a * b) as f64 / 4.0).max(0.0).sqrt()
}

/// `√((j+m)(j-m+1))`, the matrix element of `J₋` from `|j;m⟩` to `|j;m-1⟩`.
pub fn lowering_coefficient(two_j: u32, m: TwiceInt) -> f64 {
    raising_coefficient(two_j, -m)
}

/// The three bases whose half-integer powers are needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhaseBase {
    MinusOne,
    I,
    MinusI,
}

impl PhaseBase {
    /// Accepts the Gaussian integer `re + i·im` if it is `-1`, `i` or `-i`.
    pub fn from_gaussian(re: i64, im: i64) -> Result<Self> {
        match (re, im) {
            (-1, 0) => Ok(PhaseBase::MinusOne),
            (0, 1) => Ok(PhaseBase::I),
            (0, -1) => Ok(PhaseBase::MinusI),
            _ => Err(Error::UnsupportedBase { re, im }),
        }
    }

    /// Principal argument in (-π, π], in units of π/4.
    const fn arg_eighths(self) -> i64 {
        match self {
            PhaseBase::MinusOne => 4,
            PhaseBase::I => 2,
            PhaseBase::MinusI => -2,
        }
    }
}

/// `z^k = |z|^k e^{ik arg z}` for `z ∈ {-1, i, -i}` and half-integer `k`.
pub fn quarter_phase_power(base: PhaseBase, k: TwiceInt) -> PhaseExact {
    // arg_eighths is even, so the exponent of e^{iπ/4} is an integer.
    PhaseExact::zeta_pow(base.arg_eighths() / 2 * k.doubled())
}

/// Exact value `(re + i·im)·√2^sqrt2_exp` with Gaussian-integer part.
#[derive(Clone, Debug)]
pub struct PhaseExact {
    re: BigInt,
    im: BigInt,
    sqrt2_exp: i64,
}

impl PhaseExact {
    pub fn new(re: BigInt, im: BigInt, sqrt2_exp: i64) -> Self {
        PhaseExact { re, im, sqrt2_exp }
    }

    pub fn one() -> Self {
        PhaseExact::new(BigInt::one(), BigInt::zero(), 0)
    }

    /// `e^{iπ e/4}`.
    pub fn zeta_pow(e: i64) -> Self {
        let (re, im, s) = match e.rem_euclid(8) {
            0 => (1, 0, 0),
            1 => (1, 1, -1),
            2 => (0, 1, 0),
            3 => (-1, 1, -1),
            4 => (-1, 0, 0),
            5 => (-1, -1, -1),
            6 => (0, -1, 0),
            _ => (1, -1, -1),
        };
        PhaseExact::new(BigInt::from(re), BigInt::from(im), s)
    }

    /// `√2^e`, so `sqrt2_pow(2j)` is `2^j`.
    pub fn sqrt2_pow(e: i64) -> Self {
        PhaseExact::new(BigInt::one(), BigInt::zero(), e)
    }

    pub fn gaussian(&self) -> (&BigInt, &BigInt) {
        (&self.re, &self.im)
    }

    pub fn sqrt2_exp(&self) -> i64 {
        self.sqrt2_exp
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_complex(&self) -> Complex64 {
        let scale = sqrt2_pow_f64(self.sqrt2_exp);
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN) * scale,
            self.im.to_f64().unwrap_or(f64::NAN) * scale,
        )
    }

    /// The same value as an element of `Z[e^{iπ/4}]`, if it lies there.
    pub fn to_cyclotomic(&self) -> Option<Cyclotomic8> {
        let g = Cyclotomic8::gaussian(self.re.clone(), self.im.clone());
        if self.sqrt2_exp >= 0 {
            return Some(g * Cyclotomic8::sqrt2_pow(self.sqrt2_exp as u32));
        }
        let neg = (-self.sqrt2_exp) as u32;
        let (q, r) = (neg / 2, neg % 2);
        let lifted = g * Cyclotomic8::sqrt2_pow(r);
        lifted.div_exact_pow2(q + r)
    }
}

fn sqrt2_pow_f64(e: i64) -> f64 {
    let half = e.div_euclid(2);
    let base = 2f64.powi(half as i32);
    if e.rem_euclid(2) == 1 {
        base * std::f64::consts::SQRT_2
    } else {
        base
    }
}

impl Mul for &PhaseExact {
    type Output = PhaseExact;
    fn mul(self, rhs: &PhaseExact) -> PhaseExact {
        PhaseExact {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
            sqrt2_exp: self.sqrt2_exp + rhs.sqrt2_exp,
        }
    }
}

impl Mul for PhaseExact {
    type Output = PhaseExact;
    fn mul(self, rhs: PhaseExact) -> PhaseExact {
        &self * &rhs
    }
}

impl PartialEq for PhaseExact {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let diff = self.sqrt2_exp - other.sqrt2_exp;
        if diff.rem_euclid(2) != 0 {
            // a·√2 is never a Gaussian integer for nonzero a
            return false;
        }
        let shift = (diff.abs() / 2) as usize;
        let (lo, hi) = if diff >= 0 { (other, self) } else { (self, other) };
        (&hi.re << shift) == lo.re && (&hi.im << shift) == lo.im
    }
}

impl Eq for PhaseExact {}

/// An element `c0 + c1 ζ + c2 ζ² + c3 ζ³` of `Z[ζ]`, `ζ = e^{iπ/4}`, `ζ⁴ = -1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cyclotomic8 {
    c: [BigInt; 4],
}

impl Cyclotomic8 {
    pub fn new(c: [BigInt; 4]) -> Self {
        Cyclotomic8 { c }
    }

    pub fn zero() -> Self {
        Cyclotomic8::default()
    }

    pub fn from_integer(n: BigInt) -> Self {
        Cyclotomic8::gaussian(n, BigInt::zero())
    }

    /// `re + i·im`, with `i = ζ²`.
    pub fn gaussian(re: BigInt, im: BigInt) -> Self {
        Cyclotomic8::new([re, BigInt::zero(), im, BigInt::zero()])
    }

    pub fn zeta_pow(e: i64) -> Self {
        let r = e.rem_euclid(8) as usize;
        let mut c: [BigInt; 4] = Default::default();
        if r < 4 {
            c[r] = BigInt::one();
        } else {
            c[r - 4] = -BigInt::one();
        }
        Cyclotomic8::new(c)
    }

    /// `√2^e` with `√2 = ζ - ζ³`.
    pub fn sqrt2_pow(e: u32) -> Self {
        let pow2 = BigInt::one() << (e / 2) as usize;
        let even = Cyclotomic8::from_integer(pow2);
        if e.is_multiple_of(2) {
            even
        } else {
            even * Cyclotomic8::new([BigInt::zero(), BigInt::one(), BigInt::zero(), -BigInt::one()])
        }
    }

    pub fn coords(&self) -> &[BigInt; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// True when the value is a Gaussian integer.
    pub fn is_gaussian(&self) -> bool {
        self.c[1].is_zero() && self.c[3].is_zero()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Cyclotomic8::new(self.c.clone().map(|x| x * k))
    }

    fn div_exact_pow2(&self, p: u32) -> Option<Self> {
        let d = BigInt::one() << p as usize;
        let mut out: [BigInt; 4] = Default::default();
        for (o, x) in out.iter_mut().zip(&self.c) {
            let (q, r) = x.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            *o = q;
        }
        Some(Cyclotomic8::new(out))
    }

    pub fn to_complex(&self) -> Complex64 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        let (c0, c1, c2, c3) = (f(&self.c[0]), f(&self.c[1]), f(&self.c[2]), f(&self.c[3]));
        Complex64::new(c0 + h * (c1 - c3), c2 + h * (c1 + c3))
    }

    /// Largest coordinate magnitude, used as an exact residual summary.
    pub fn max_abs_coord(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl Add for Cyclotomic8 {
    type Output = Cyclotomic8;
    fn add(mut self, rhs: Cyclotomic8) -> Cyclotomic8 {
        self += &rhs;
        self
    }
}

impl AddAssign<&Cyclotomic8> for Cyclotomic8 {
    fn add_assign(&mut self, rhs: &Cyclotomic8) {
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a += b;
        }
    }
}

impl Sub for Cyclotomic8 {
    type Output = Cyclotomic8;
    fn sub(self, rhs: Cyclotomic8) -> Cyclotomic8 {
        self + (-rhs)
    }
}

impl Neg for Cyclotomic8 {
    type Output = Cyclotomic8;
    fn neg(self) -> Cyclotomic8 {
        Cyclotomic8::new(self.c.map(|x| -x))
    }
}

impl Mul for &Cyclotomic8 {
    type Output = Cyclotomic8;
    fn mul(self, rhs: &Cyclotomic8) -> Cyclotomic8 {
        let mut out: [BigInt; 4] = Default::default();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                let p = a * b;
                if i + j < 4 {
                    out[i + j] += p;
                } else {
                    out[i + j - 4] -= p;
                }
            }
        }
        Cyclotomic8::new(out)
    }
}

impl Mul for Cyclotomic8 {
    type Output = Cyclotomic8;
    fn mul(self, rhs: Cyclotomic8) -> Cyclotomic8 {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn half(d: i64) -> TwiceInt {
        TwiceInt::from_doubled(d)
    }

    #[test]
    fn label_sets() {
        let s = make_label_set(0).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.labels().collect::<Vec<_>>(), vec![TwiceInt::ZERO]);

        let s = make_label_set(1).unwrap();
        assert_eq!(s.labels().map(|m| m.value()).collect::<Vec<_>>(), vec![-0.5, 0.5]);

        let s = make_label_set(4).unwrap();
        assert_eq!(s.dim(), 5);
        assert_eq!(
            s.labels().map(|m| m.to_integer().unwrap()).collect::<Vec<_>>(),
            vec![-2, -1, 0, 1, 2]
        );
        for (i, m) in s.labels().enumerate() {
            assert_eq!(s.index(m).unwrap(), i);
            assert_eq!(s.label(i), m);
        }
    }

    #[test]
    fn label_errors() {
        assert_eq!(make_label_set(-1), Err(Error::NegativeSpin(-1)));
        let s = LabelSet::of(2);
        assert!(matches!(s.index(half(1)), Err(Error::LabelParity { .. })));
        assert!(matches!(s.index(half(4)), Err(Error::LabelOutOfRange { .. })));
    }

    #[test]
    fn ladder_coefficients() {
        assert_eq!(raising_coefficient(1, half(-1)), 1.0);
        assert_eq!(raising_coefficient(1, half(1)), 0.0);
        assert_eq!(raising_coefficient(2, half(0)), 2f64.sqrt());
        assert_eq!(lowering_coefficient(2, half(-2)), 0.0);
        assert_eq!(lowering_coefficient(4, half(2)), 6f64.sqrt());
    }

    #[test]
    fn display() {
        assert_eq!(half(3).to_string(), "3/2");
        assert_eq!(half(-4).to_string(), "-2");
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        let row = binomial_row(10);
        for (n, c) in row.iter().enumerate() {
            assert_eq!(*c, binomial(10, n as i64));
        }
    }

    #[test]
    fn quarter_phase_examples() {
        let i_half = quarter_phase_power(PhaseBase::I, half(1));
        assert_eq!(i_half, PhaseExact::zeta_pow(1));
        let mi_half = quarter_phase_power(PhaseBase::MinusI, half(1));
        assert_eq!(mi_half, PhaseExact::zeta_pow(-1));
        assert_eq!(quarter_phase_power(PhaseBase::MinusOne, half(4)), PhaseExact::one());

        let z = i_half.to_complex();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(z, Complex64::new(h, h));
    }

    #[test]
    fn unsupported_base() {
        assert_eq!(PhaseBase::from_gaussian(1, 1), Err(Error::UnsupportedBase { re: 1, im: 1 }));
        assert_eq!(PhaseBase::from_gaussian(0, -1), Ok(PhaseBase::MinusI));
    }

    #[test]
    fn cross_base_product_fails_for_half_powers() {
        // (-1)^{1/2} i^{1/2} = e^{3iπ/4} but (-i)^{1/2} = e^{-iπ/4}
        let lhs = quarter_phase_power(PhaseBase::MinusOne, half(1))
            * quarter_phase_power(PhaseBase::I, half(1));
        let rhs = quarter_phase_power(PhaseBase::MinusI, half(1));
        assert_ne!(lhs, rhs);
        // and holds for integer exponents
        for k in -6..=6 {
            let lhs = quarter_phase_power(PhaseBase::MinusOne, TwiceInt::from_int(k))
                * quarter_phase_power(PhaseBase::I, TwiceInt::from_int(k));
            assert_eq!(lhs, quarter_phase_power(PhaseBase::MinusI, TwiceInt::from_int(k)));
        }
    }

    #[test]
    fn sqrt2_equality() {
        // 2·√2^0 == 1·√2^2, and √2 differs from any Gaussian integer
        let a = PhaseExact::new(BigInt::from(2), BigInt::zero(), 0);
        assert_eq!(a, PhaseExact::sqrt2_pow(2));
        assert_ne!(PhaseExact::sqrt2_pow(1), PhaseExact::one());
    }

    #[test]
    fn cyclotomic_conversion() {
        for e in -9..9 {
            assert_eq!(PhaseExact::zeta_pow(e).to_cyclotomic(), Some(Cyclotomic8::zeta_pow(e)));
        }
        let sqrt2 = PhaseExact::sqrt2_pow(1).to_cyclotomic().unwrap();
        assert_eq!(&sqrt2 * &sqrt2, Cyclotomic8::from_integer(BigInt::from(2)));
        // 1/√2 is not an algebraic integer
        assert_eq!(PhaseExact::sqrt2_pow(-1).to_cyclotomic(), None);
    }

    fn base_strategy() -> impl Strategy<Value = PhaseBase> {
        prop_oneof![Just(PhaseBase::MinusOne), Just(PhaseBase::I), Just(PhaseBase::MinusI)]
    }

    proptest! {
        #[test]
        fn product_rule_within_one_base(base in base_strategy(), k in -41i64..41, m in -41i64..41) {
            let lhs = quarter_phase_power(base, half(k)) * quarter_phase_power(base, half(m));
            prop_assert_eq!(lhs, quarter_phase_power(base, half(k + m)));
        }

        #[test]
        fn float_product_agrees(e1 in -20i64..20, e2 in -20i64..20, s1 in -6i64..6, s2 in -6i64..6) {
            let a = PhaseExact::zeta_pow(e1) * PhaseExact::sqrt2_pow(s1);
            let b = PhaseExact::zeta_pow(e2) * PhaseExact::sqrt2_pow(s2);
            let exact = (&a * &b).to_complex();
            let float = a.to_complex() * b.to_complex();
            let tol = 4.0 * f64::EPSILON * exact.norm().max(f64::MIN_POSITIVE);
            prop_assert!((exact - float).norm() <= tol, "{exact} vs {float}");
        }

        #[test]
        fn binomial_symmetry(m in 0u64..200, n in 0i64..200) {
            prop_assume!(n as u64 <= m);
            prop_assert_eq!(binomial(m, n), binomial(m, m as i64 - n));
        }

        #[test]
        fn cyclotomic_matches_complex(a in proptest::array::uniform4(-50i64..50), b in proptest::array::uniform4(-50i64..50)) {
            let x = Cyclotomic8::new(a.map(BigInt::from));
            let y = Cyclotomic8::new(b.map(BigInt::from));
            let exact = (&x * &y).to_complex();
            let float = x.to_complex() * y.to_complex();
            prop_assert!((exact - float).norm() < 1e-9);
        }
    }
}
