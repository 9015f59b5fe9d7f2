//! Exact Kravchuk polynomials `K_m(k)` over big integers.
//!
//! Three independent routes produce the same integers: the alternating
//! binomial sum ([`kravchuk_poly`]), coefficients of the generating
//! polynomial `(1-X)^{j+k} (1+X)^{j-k}` ([`kravchuk_row_gf_oracle`]) and the
//! terminating `₂F₁(-j-m, -j-k; -2j | 2)` ([`kravchuk_hypergeometric`]).
//! [`KravchukTable`] fills the whole matrix from the three-term recurrence
//! in `m`.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::halfint::{binomial, binomial_row, quarter_phase_power, Cyclotomic8, LabelSet, PhaseBase, PhaseExact, TwiceInt};
use crate::report::Report;

/// `K_m(k) = Σ_n (-1)^n C(j+k, n) C(j-k, j+m-n)`.
///
/// Labels of the right parity but outside `-j..j` give 0.
pub fn kravchuk_poly(two_j: u32, m: TwiceInt, k: TwiceInt) -> Result<BigInt> {
    let set = LabelSet::of(two_j);
    for label in [m, k] {
        if !set.has_parity_of(label) {
            return Err(Error::LabelParity { two_j, label: label.doubled() });
        }
    }
    if !set.contains(m) || !set.contains(k) {
        return Ok(BigInt::zero());
    }
    let tj = two_j as i64;
    let j_plus_m = (tj + m.doubled()) / 2;
    let j_plus_k = ((tj + k.doubled()) / 2) as u64;
    let j_minus_k = ((tj - k.doubled()) / 2) as u64;
    let mut sum = BigInt::zero();
    for n in 0..=j_plus_m {
        let term = binomial(j_plus_k, n) * binomial(j_minus_k, j_plus_m - n);
        if n % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

/// Coefficients of `(1-X)^{j+k} (1+X)^{j-k}`; entry `j+m` is `K_m(k)`.
pub fn kravchuk_row_gf_oracle(two_j: u32, k: TwiceInt) -> Result<Vec<BigInt>> {
    let set = LabelSet::of(two_j);
    set.validate(k)?;
    let tj = two_j as i64;
    let minus = (tj + k.doubled()) / 2;
    let plus = (tj - k.doubled()) / 2;
    let mut poly = vec![BigInt::one()];
    let factors = std::iter::repeat_n(-1i32, minus as usize).chain(std::iter::repeat_n(1, plus as usize));
    for sign in factors {
        // multiply by (1 + sign·X)
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c;
            if sign < 0 {
                next[i + 1] -= c;
            } else {
                next[i + 1] += c;
            }
        }
        poly = next;
    }
    Ok(poly)
}

/// `(x)_n = x(x+1)...(x+n-1)`.
fn pochhammer(x: i64, n: u64) -> BigInt {
    (0..n as i64).fold(BigInt::one(), |acc, i| acc * (x + i))
}

/// Exact value of a terminating Gauss series `₂F₁(a, b; c | z)`.
///
/// The sum stops after `min(-a, -b)` terms over the nonpositive upper
/// parameters. A nonpositive `c` is allowed as long as `(c)_n` stays nonzero
/// over those terms.
pub fn hyp2f1_terminating(a: i64, b: i64, c: i64, z: &BigRational) -> Result<BigRational> {
    let terms = match (a <= 0, b <= 0) {
        (true, true) => (-a).min(-b),
        (true, false) => -a,
        (false, true) => -b,
        (false, false) => {
            return Err(Error::NonTerminating(format!("upper parameters {a}, {b} are both positive")));
        }
    } as u64;
    if c <= 0 && terms > (-c) as u64 {
        return Err(Error::NonTerminating(format!(
            "lower parameter {c} vanishes before the series terminates after {terms} terms"
        )));
    }
    let mut sum = BigRational::zero();
    let mut z_pow = BigRational::one();
    let mut factorial = BigInt::one();
    for n in 0..=terms {
        if n > 0 {
            z_pow *= z;
            factorial *= n;
        }
        let num = pochhammer(a, n) * pochhammer(b, n);
        let den = pochhammer(c, n) * &factorial;
        sum += BigRational::new(num, den) * &z_pow;
    }
    Ok(sum)
}

/// `C(2j, j+m) · ₂F₁(-j-m, -j-k; -2j | 2)`, which equals `K_m(k)`.
pub fn kravchuk_hypergeometric(two_j: u32, m: TwiceInt, k: TwiceInt) -> Result<BigRational> {
    let set = LabelSet::of(two_j);
    set.validate(m)?;
    set.validate(k)?;
    let tj = two_j as i64;
    let j_plus_m = (tj + m.doubled()) / 2;
    let j_plus_k = (tj + k.doubled()) / 2;
    let f = hyp2f1_terminating(-j_plus_m, -j_plus_k, -tj, &BigRational::from_integer(BigInt::from(2)))?;
    Ok(f * BigRational::from_integer(binomial(two_j as u64, j_plus_m)))
}

/// All `K_m(k)` for one spin, indexed `[i(m)][i(k)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct KravchukTable {
    two_j: u32,
    values: Vec<BigInt>,
}

impl KravchukTable {
    /// Fills the table column by column with
    /// `(j+m+1) K_{m+1}(k) = -2k K_m(k) - (j-m+1) K_{m-1}(k)`,
    /// starting from `K_{-j} = 1`, `K_{-j-1} = 0`. Every division is exact.
    pub fn new(two_j: u32) -> Self {
        let set = LabelSet::of(two_j);
        let d = set.dim();
        let tj = two_j as i64;
        let columns: Vec<Vec<BigInt>> = set
            .labels()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|k| {
                let mut col = Vec::with_capacity(d);
                let mut prev = BigInt::zero();
                let mut cur = BigInt::one();
                for m in set.labels() {
                    col.push(cur.clone());
                    let jpm1 = (tj + m.doubled()) / 2 + 1;
                    let jmm1 = (tj - m.doubled()) / 2 + 1;
                    let num = -(&cur * k.doubled()) - &prev * jmm1;
                    let (next, rem) = num.div_rem(&BigInt::from(jpm1));
                    debug_assert!(rem.is_zero());
                    prev = std::mem::replace(&mut cur, next);
                }
                col
            })
            .collect();
        let mut values = vec![BigInt::zero(); d * d];
        for (ik, col) in columns.into_iter().enumerate() {
            for (im, v) in col.into_iter().enumerate() {
                values[im * d + ik] = v;
            }
        }
        KravchukTable { two_j, values }
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// Entry by position, `im = i(m)`, `ik = i(k)`.
    pub fn at(&self, im: usize, ik: usize) -> &BigInt {
        &self.values[im * self.dim() + ik]
    }

    pub fn get(&self, m: TwiceInt, k: TwiceInt) -> Result<&BigInt> {
        let set = LabelSet::of(self.two_j);
        Ok(self.at(set.index(m)?, set.index(k)?))
    }

    pub fn row(&self, im: usize) -> &[BigInt] {
        let d = self.dim();
        &self.values[im * d..(im + 1) * d]
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Checks `2^{-2j} Σ_k C(2j, j+k) K_m(k) K_n(k) = C(2j, j+m) δ_mn` for all `m, n`.
///
/// Both sides are scaled by `2^{2j}` so the comparison stays in integers.
pub fn check_orthogonality_exact(two_j: u32) -> Report {
    let started = Instant::now();
    let table = KravchukTable::new(two_j);
    let d = table.dim();
    let weights = binomial_row(two_j as u64);
    let scale = BigInt::one() << two_j as usize;
    let (failures, worst) = (0..d)
        .into_par_iter()
        .map(|im| {
            let mut failures = 0usize;
            let mut worst = BigInt::zero();
            for in_ in 0..d {
                let lhs: BigInt = (0..d).map(|ik| &weights[ik] * table.at(im, ik) * table.at(in_, ik)).sum();
                let rhs = if im == in_ { &weights[im] * &scale } else { BigInt::zero() };
                let diff = (lhs - rhs).abs();
                if !diff.is_zero() {
                    failures += 1;
                    worst = worst.max(diff);
                }
            }
            (failures, worst)
        })
        .reduce(|| (0, BigInt::zero()), |a, b| (a.0 + b.0, a.1.max(b.1)));
    let residual = big_to_f64(&worst) / big_to_f64(&scale);
    Report::exact("orthogonality_exact", two_j, failures, residual, started)
        .with_detail(format!("{} of {} entries differ", failures, d * d))
}

/// Checks `Σ_k (-i)^k K_m(k) K_k(n) = 2^j i^{j+m} i^{j+n} K_m(n)` exactly.
///
/// Integer `j` keeps every quantity in `Z[i]`; half-integer `j` needs
/// `Z[e^{iπ/4}]`, where `(-i)^{1/2} = e^{-iπ/4}` and `2^{1/2} = ζ - ζ³`.
pub fn check_phase_sum_exact(two_j: u32) -> Report {
    let started = Instant::now();
    let set = LabelSet::of(two_j);
    let table = KravchukTable::new(two_j);
    let d = set.dim();
    let labels: Vec<TwiceInt> = set.labels().collect();
    let j = set.j();
    let ring_elem = |p: PhaseExact| p.to_cyclotomic().expect("unit phases lie in Z[zeta8]");
    let minus_i_pow: Vec<Cyclotomic8> = labels
        .iter()
        .map(|&k| ring_elem(quarter_phase_power(PhaseBase::MinusI, k)))
        .collect();
    let i_pow: Vec<PhaseExact> = labels.iter().map(|&m| quarter_phase_power(PhaseBase::I, j + m)).collect();
    let two_pow_j = PhaseExact::sqrt2_pow(two_j as i64);
    let integer_j = j.is_integer();

    let (failures, worst, left_ring) = (0..d)
        .into_par_iter()
        .map(|im| {
            let mut failures = 0usize;
            let mut worst = BigInt::zero();
            let mut left_ring = false;
            for in_ in 0..d {
                let mut lhs = Cyclotomic8::zero();
                for ik in 0..d {
                    let coeff = table.at(im, ik) * table.at(ik, in_);
                    if !coeff.is_zero() {
                        lhs += &minus_i_pow[ik].scale(&coeff);
                    }
                }
                let phase = &(&two_pow_j * &i_pow[im]) * &i_pow[in_];
                let rhs = ring_elem(phase).scale(table.at(im, in_));
                if integer_j && !(lhs.is_gaussian() && rhs.is_gaussian()) {
                    left_ring = true;
                }
                let diff = lhs - rhs;
                if !diff.is_zero() {
                    failures += 1;
                    worst = worst.max(diff.max_abs_coord());
                }
            }
            (failures, worst, left_ring)
        })
        .reduce(
            || (0, BigInt::zero(), false),
            |a, b| (a.0 + b.0, a.1.max(b.1), a.2 || b.2),
        );
    let ring = if integer_j { "Z[i]" } else { "Z[exp(i*pi/4)]" };
    let failures = failures + usize::from(left_ring);
    Report::exact("phase_sum_exact", two_j, failures, big_to_f64(&worst), started)
        .with_detail(format!("ring={ring}; {failures} of {} (m,n) pairs differ", d * d))
}

/// Checks the table against the binomial sum and the generating polynomial.
pub fn check_generating_function(two_j: u32) -> Report {
    let started = Instant::now();
    let set = LabelSet::of(two_j);
    let table = KravchukTable::new(two_j);
    let mut failures = 0;
    for (ik, k) in set.labels().enumerate() {
        let gf = kravchuk_row_gf_oracle(two_j, k).expect("valid label");
        for (im, m) in set.labels().enumerate() {
            let direct = kravchuk_poly(two_j, m, k).expect("valid label");
            if direct != gf[im] || table.at(im, ik) != &gf[im] {
                failures += 1;
            }
        }
    }
    Report::exact("generating_function_exact", two_j, failures, 0.0, started)
}

/// Checks `C(2j, j+m) ₂F₁(-j-m, -j-k; -2j | 2) = K_m(k)` for every entry.
pub fn check_hypergeometric(two_j: u32) -> Report {
    let started = Instant::now();
    let set = LabelSet::of(two_j);
    let table = KravchukTable::new(two_j);
    let mut failures = 0;
    for (im, m) in set.labels().enumerate() {
        for (ik, k) in set.labels().enumerate() {
            let h = kravchuk_hypergeometric(two_j, m, k).expect("valid labels");
            if h != BigRational::from_integer(table.at(im, ik).clone()) {
                failures += 1;
            }
        }
    }
    Report::exact("hypergeometric_exact", two_j, failures, 0.0, started)
}

/// Checks `(j+m+1) K_{m+1}(k) + (j-m+1) K_{m-1}(k) = -2k K_m(k)` with
/// `K_{±(j+1)} = 0`, evaluating every term by the binomial sum.
pub fn check_recurrence_exact(two_j: u32) -> Report {
    let started = Instant::now();
    let set = LabelSet::of(two_j);
    let tj = two_j as i64;
    let mut failures = 0;
    for m in set.labels() {
        for k in set.labels() {
            let up = kravchuk_poly(two_j, m + TwiceInt::from_int(1), k).expect("parity");
            let down = kravchuk_poly(two_j, m - TwiceInt::from_int(1), k).expect("parity");
            let here = kravchuk_poly(two_j, m, k).expect("parity");
            let lhs = up * ((tj + m.doubled()) / 2 + 1) + down * ((tj - m.doubled()) / 2 + 1);
            if lhs != -here * k.doubled() {
                failures += 1;
            }
        }
    }
    Report::exact("recurrence_exact", two_j, failures, 0.0, started)
}
