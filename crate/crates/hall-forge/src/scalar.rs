//! Exact coefficient arithmetic.
//!
//! Three layers, from concrete to symbolic:
//!
//! * [`Rational`] — arbitrary-precision rationals (backed by `num`).
//! * [`LaurentPoly`] — Laurent polynomials in one variable `q` over the
//!   rationals, with exact division and evaluation.
//! * [`QScalar`] — rational functions `n(q) / ∏_d Φ_d(q)^{e_d}` whose
//!   denominators are products of cyclotomic polynomials.  Every quantity the
//!   workbench divides by symbolically — products of `q^k − 1`, q-factorials,
//!   orders of general linear groups, automorphism-group orders — factors into
//!   cyclotomics, and distinct cyclotomics are coprime, so this ring has a
//!   canonical reduced form that needs exact division only, never a general
//!   polynomial gcd.
//!
//! [`Scalar`] wraps either a rational (evaluation at a concrete field
//! cardinality) or a [`QScalar`] (symbolic in `q`); the two kinds never mix
//! implicitly.  A [`QMode`] selects which kind a computation produces.

use num::{BigInt, One, Signed, Zero};
use once_cell::sync::Lazy;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = num::BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `n/d`.
pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Errors produced by exact scalar arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    /// Division by the zero scalar.
    #[error("division by zero")]
    DivisionByZero,
    /// Laurent-polynomial division with a nonzero remainder.
    #[error("inexact Laurent division: {0}")]
    InexactDivision(String),
    /// The value has no inverse in the coefficient ring.
    #[error("not invertible: {0}")]
    NotInvertible(String),
}

// ======================= Laurent polynomials in q =======================

/// A Laurent polynomial in `q` with rational coefficients.
///
/// Stored as a sparse exponent-to-coefficient map holding no zero
/// coefficients, so equality of values is equality of representations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        LaurentPoly { coeffs: BTreeMap::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::monomial(1, Rational::one())
    }

    /// The monomial `q^exp`.
    pub fn q_pow(exp: i64) -> Self {
        Self::monomial(exp, Rational::one())
    }

    /// The monomial `coeff * q^exp`.
    pub fn monomial(exp: i64, coeff: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        LaurentPoly { coeffs }
    }

    /// The constant polynomial `n`.
    pub fn from_int(n: i64) -> Self {
        Self::monomial(0, rat(n))
    }

    /// The constant polynomial `c`.
    pub fn from_rational(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, summing
    /// duplicates and dropping zeros.
    pub fn from_coeffs<I: IntoIterator<Item = (i64, Rational)>>(iter: I) -> Self {
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (e, c) in iter {
            let entry = coeffs.entry(e).or_insert_with(Rational::zero);
            *entry += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        LaurentPoly { coeffs }
    }

    /// True iff this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True iff this is the constant polynomial 1.
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1
            && self
                .coeffs
                .get(&0)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// If the polynomial is a single term `c*q^e`, returns `(e, c)`.
    pub fn as_monomial(&self) -> Option<(i64, &Rational)> {
        if self.coeffs.len() == 1 {
            let (e, c) = self.coeffs.iter().next().unwrap();
            Some((*e, c))
        } else {
            None
        }
    }

    /// The coefficient of `q^exp` (zero if absent).
    pub fn coeff(&self, exp: i64) -> Rational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Iterates over (exponent, coefficient) pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Smallest exponent with nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Largest exponent with nonzero coefficient.
    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Dense coefficient window `(min_exp, coefficients)`; zero polynomial
    /// yields `(0, [])`.
    fn dense(&self) -> (i64, Vec<Rational>) {
        let (min, max) = match (self.min_exp(), self.max_exp()) {
            (Some(a), Some(b)) => (a, b),
            _ => return (0, Vec::new()),
        };
        let mut v = vec![Rational::zero(); (max - min + 1) as usize];
        for (e, c) in &self.coeffs {
            v[(e - min) as usize] = c.clone();
        }
        (min, v)
    }

    fn from_dense(min: i64, v: Vec<Rational>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (i, c) in v.into_iter().enumerate() {
            if !c.is_zero() {
                coeffs.insert(min + i as i64, c);
            }
        }
        LaurentPoly { coeffs }
    }

    /// Sum of two polynomials.
    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &other.coeffs {
            let entry = coeffs.entry(*e).or_insert_with(Rational::zero);
            *entry += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        LaurentPoly { coeffs }
    }

    /// Difference of two polynomials.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    /// Product of two polynomials (dense schoolbook multiplication).
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (amin, av) = self.dense();
        let (bmin, bv) = other.dense();
        let mut out = vec![Rational::zero(); av.len() + bv.len() - 1];
        for (i, a) in av.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in bv.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] += a * b;
            }
        }
        Self::from_dense(amin + bmin, out)
    }

    /// Multiplies by the scalar `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Multiplies by the monomial `c*q^exp`.
    pub fn mul_monomial(&self, exp: i64, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, a)| (e + exp, a * c)).collect(),
        }
    }

    /// `self^n` by binary exponentiation.
    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Evaluates at `q = value` (`value` must be nonzero).
    pub fn specialize(&self, value: &Rational) -> Rational {
        assert!(!value.is_zero(), "cannot specialize a Laurent polynomial at q = 0");
        if self.is_zero() {
            return Rational::zero();
        }
        let (min, v) = self.dense();
        // Horner on the polynomial part, then shift by value^min.
        let mut acc = Rational::zero();
        for c in v.iter().rev() {
            acc = &acc * value + c;
        }
        match min.cmp(&0) {
            std::cmp::Ordering::Equal => acc,
            std::cmp::Ordering::Greater => acc * pow_rational(value, min as u64),
            std::cmp::Ordering::Less => acc / pow_rational(value, (-min) as u64),
        }
    }

    /// Exact division: returns `self / d` when the remainder is zero.
    pub fn div_exact(&self, d: &Self) -> Result<Self, ScalarError> {
        if d.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if let Some((e, c)) = d.as_monomial() {
            return Ok(self.mul_monomial(-e, &(Rational::one() / c)));
        }
        let (smin, mut rem) = self.dense();
        let (dmin, dv) = d.dense();
        if rem.len() < dv.len() {
            return Err(ScalarError::InexactDivision(format!("{} by {}", self, d)));
        }
        let dlead = dv.last().unwrap();
        let qlen = rem.len() - dv.len() + 1;
        let mut quo = vec![Rational::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + dv.len() - 1] / dlead;
            if !c.is_zero() {
                for (i, di) in dv.iter().enumerate() {
                    let t = &c * di;
                    rem[k + i] -= t;
                }
                quo[k] = c;
            }
        }
        if rem.iter().any(|r| !r.is_zero()) {
            return Err(ScalarError::InexactDivision(format!("{} by {}", self, d)));
        }
        Ok(Self::from_dense(smin - dmin, quo))
    }
}

/// `v^n` by binary exponentiation.
pub fn pow_rational(v: &Rational, n: u64) -> Rational {
    let mut result = Rational::one();
    let mut base = v.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

fn fmt_coeff(c: &Rational) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical rendering with exponents in increasing order, e.g.
    /// `-1*q^-1 + 2 + 1*q + 3*q^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter() {
            let (sep, shown) = if first {
                ("", c.clone())
            } else if c.is_negative() {
                (" - ", -c)
            } else {
                (" + ", c.clone())
            };
            first = false;
            match e {
                0 => write!(f, "{}{}", sep, fmt_coeff(&shown))?,
                1 => write!(f, "{}{}*q", sep, fmt_coeff(&shown))?,
                _ => write!(f, "{}{}*q^{}", sep, fmt_coeff(&shown), e)?,
            }
        }
        Ok(())
    }
}

// ======================= Cyclotomic polynomials =======================

static CYCLOTOMICS: Lazy<Mutex<Vec<LaurentPoly>>> = Lazy::new(|| Mutex::new(Vec::new()));

/// The `d`-th cyclotomic polynomial `Φ_d(q)`, computed by the recursion
/// `q^n − 1 = ∏_{d|n} Φ_d(q)` and cached.
pub fn cyclotomic(d: u32) -> LaurentPoly {
    assert!(d >= 1, "cyclotomic index must be positive");
    let mut cache = CYCLOTOMICS.lock().unwrap();
    while (cache.len() as u32) < d {
        let n = cache.len() as u32 + 1;
        let mut phi = LaurentPoly::q_pow(n as i64).sub(&LaurentPoly::one());
        for m in 1..n {
            if n % m == 0 {
                phi = phi
                    .div_exact(&cache[(m - 1) as usize])
                    .expect("cyclotomic recursion divides exactly");
            }
        }
        cache.push(phi);
    }
    cache[(d - 1) as usize].clone()
}

/// Euler's totient, the degree of `Φ_d`.
pub fn euler_phi(d: u32) -> u32 {
    let mut n = d;
    let mut result = d;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result = result / p * (p - 1);
        }
        p += 1;
    }
    if n > 1 {
        result = result / n * (n - 1);
    }
    result
}

/// The exponent map of the cyclotomic factorization of `q^k − 1`,
/// i.e. the divisors of `k` each with multiplicity 1.
pub fn qk_minus_one_factors(k: u32) -> BTreeMap<u32, u32> {
    assert!(k >= 1);
    (1..=k).filter(|d| k % d == 0).map(|d| (d, 1)).collect()
}

fn cyclo_product(factors: &BTreeMap<u32, u32>) -> LaurentPoly {
    let mut out = LaurentPoly::one();
    for (d, e) in factors {
        out = out.mul(&cyclotomic(*d).pow(*e));
    }
    out
}

// ======================= Cyclotomic-denominator fractions =======================

/// A rational function `num(q) / ∏_d Φ_d(q)^{e_d}`.
///
/// Canonical form: the numerator is not divisible by any `Φ_d` appearing in
/// the denominator, and the map of denominator exponents holds no zeros, so
/// derived equality is equality of values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QScalar {
    num: LaurentPoly,
    den: BTreeMap<u32, u32>,
}

impl QScalar {
    /// Zero.
    pub fn zero() -> Self {
        QScalar { num: LaurentPoly::zero(), den: BTreeMap::new() }
    }

    /// One.
    pub fn one() -> Self {
        QScalar { num: LaurentPoly::one(), den: BTreeMap::new() }
    }

    /// Embeds a Laurent polynomial.
    pub fn from_laurent(p: LaurentPoly) -> Self {
        QScalar { num: p, den: BTreeMap::new() }
    }

    /// Embeds a rational constant.
    pub fn from_rational(c: Rational) -> Self {
        Self::from_laurent(LaurentPoly::from_rational(c))
    }

    /// Embeds an integer constant.
    pub fn from_int(n: i64) -> Self {
        Self::from_laurent(LaurentPoly::from_int(n))
    }

    /// The monomial `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Self::from_laurent(LaurentPoly::q_pow(k))
    }

    /// Builds `num / ∏ Φ_d^{e_d}` and reduces to canonical form.
    pub fn with_cyclotomic_den<I: IntoIterator<Item = (u32, u32)>>(num: LaurentPoly, den: I) -> Self {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        for (d, e) in den {
            if e > 0 {
                *map.entry(d).or_insert(0) += e;
            }
        }
        let mut s = QScalar { num, den: map };
        s.reduce();
        s
    }

    /// Numerator of the canonical form.
    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    /// Denominator exponents of the canonical form (cyclotomic index ↦ power).
    pub fn denominator_factors(&self) -> &BTreeMap<u32, u32> {
        &self.den
    }

    /// True iff the value is zero.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True iff the value is one.
    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    /// If the value is a Laurent polynomial (empty denominator), returns it.
    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Restores the canonical form by dividing the numerator by denominator
    /// cyclotomics as long as the division is exact.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let ds: Vec<u32> = self.den.keys().copied().collect();
        for d in ds {
            let phi = cyclotomic(d);
            while self.den.get(&d).copied().unwrap_or(0) > 0 {
                if !divisible_probe(&self.num, d) {
                    break;
                }
                match self.num.div_exact(&phi) {
                    Ok(quotient) => {
                        self.num = quotient;
                        let e = self.den.get_mut(&d).unwrap();
                        *e -= 1;
                        if *e == 0 {
                            self.den.remove(&d);
                        }
                    }
                    Err(_) => break,
                }
            }
        }
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut den: BTreeMap<u32, u32> = self.den.clone();
        for (d, e) in &other.den {
            let entry = den.entry(*d).or_insert(0);
            *entry = (*entry).max(*e);
        }
        let scale_for = |own: &BTreeMap<u32, u32>| -> LaurentPoly {
            let missing: BTreeMap<u32, u32> = den
                .iter()
                .filter_map(|(d, e)| {
                    let have = own.get(d).copied().unwrap_or(0);
                    if *e > have {
                        Some((*d, e - have))
                    } else {
                        None
                    }
                })
                .collect();
            cyclo_product(&missing)
        };
        let num = self
            .num
            .mul(&scale_for(&self.den))
            .add(&other.num.mul(&scale_for(&other.den)));
        let mut s = QScalar { num, den };
        s.reduce();
        s
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        QScalar { num: self.num.neg(), den: self.den.clone() }
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        for (d, e) in &other.den {
            *den.entry(*d).or_insert(0) += e;
        }
        let mut s = QScalar { num: self.num.mul(&other.num), den };
        s.reduce();
        s
    }

    /// `self^n`.
    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse.  Defined exactly when the numerator factors as
    /// a monomial times cyclotomics; found by trial division over all `Φ_d`
    /// of degree at most the numerator's.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.num.is_zero() {
            return Err(ScalarError::NotInvertible("zero".into()));
        }
        let shift = self.num.min_exp().unwrap();
        let mut rem = self.num.mul_monomial(-shift, &Rational::one());
        let mut den: BTreeMap<u32, u32> = BTreeMap::new();
        let mut d: u32 = 1;
        while rem.max_exp().unwrap() > 0 {
            let deg = rem.max_exp().unwrap() as u64;
            // φ(d) ≥ √(d/2), so every divisor of degree ≤ deg has d ≤ 2·deg².
            let bound = 2 * deg * deg + 6;
            if d as u64 > bound {
                return Err(ScalarError::NotInvertible(format!(
                    "{} has a non-cyclotomic factor",
                    self.num
                )));
            }
            if euler_phi(d) as u64 <= deg && divisible_probe(&rem, d) {
                let phi = cyclotomic(d);
                let mut divided = false;
                while let Ok(quotient) = rem.div_exact(&phi) {
                    rem = quotient;
                    *den.entry(d).or_insert(0) += 1;
                    divided = true;
                    if rem.max_exp().unwrap_or(0) == 0 {
                        break;
                    }
                }
                if divided {
                    continue;
                }
            }
            d += 1;
        }
        let c = rem.coeff(0);
        let new_num =
            cyclo_product(&self.den).mul_monomial(-shift, &(Rational::one() / c));
        let mut s = QScalar { num: new_num, den };
        s.reduce();
        Ok(s)
    }

    /// Quotient `self / other`.
    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // Prefer exact polynomial division when both are polynomials and it
        // succeeds; otherwise invert the divisor.
        if self.den.is_empty() && other.den.is_empty() {
            if let Ok(quotient) = self.num.div_exact(&other.num) {
                return Ok(Self::from_laurent(quotient));
            }
        }
        Ok(self.mul(&other.inv()?))
    }

    /// Evaluates at `q = value`; fails only if a denominator factor vanishes.
    pub fn specialize(&self, value: &Rational) -> Result<Rational, ScalarError> {
        let mut den_val = Rational::one();
        for (d, e) in &self.den {
            let phi_val = cyclotomic(*d).specialize(value);
            if phi_val.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            den_val *= pow_rational(&phi_val, *e as u64);
        }
        Ok(self.num.specialize(value) / den_val)
    }
}

/// Fast necessary condition for `Φ_d | p`: compares integer evaluations at
/// `q = 3` (after clearing coefficient denominators).  A false positive only
/// costs one exact trial division; a true negative skips it.
fn divisible_probe(p: &LaurentPoly, d: u32) -> bool {
    if p.is_zero() {
        return true;
    }
    let mut lcm = BigInt::one();
    for (_, c) in p.terms() {
        lcm = num::integer::lcm(lcm, c.denom().clone());
    }
    let three = BigInt::from(3);
    let min = p.min_exp().unwrap();
    let mut val = BigInt::zero();
    for (e, c) in p.terms() {
        let scaled = c * Rational::from_integer(lcm.clone());
        val += scaled.to_integer() * three.pow((e - min) as u32);
    }
    let phi_val = cyclotomic(d).specialize(&rat(3)).to_integer();
    (val % phi_val).is_zero()
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let den_str = self
            .den
            .iter()
            .map(|(d, e)| {
                if *e == 1 {
                    format!("Phi_{}(q)", d)
                } else {
                    format!("Phi_{}(q)^{}", d, e)
                }
            })
            .collect::<Vec<_>>()
            .join("*");
        write!(f, "({}) / {}", self.num, den_str)
    }
}

// ======================= Mode-tagged scalars =======================

/// A coefficient: either a concrete rational (numeric mode) or a symbolic
/// rational function of `q`.  Arithmetic between the two kinds is a bug and
/// panics; conversions are always explicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    /// Numeric value (all symbols already specialized).
    Rat(Rational),
    /// Symbolic value in `q`.
    Sym(QScalar),
}

impl Scalar {
    /// True iff the value is zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Sym(s) => s.is_zero(),
        }
    }

    /// True iff the value is one.
    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Sym(s) => s.is_one(),
        }
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Sym(a), Scalar::Sym(b)) => Scalar::Sym(a.add(b)),
            _ => panic!("scalar mode mismatch: numeric and symbolic values cannot mix"),
        }
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Sym(a), Scalar::Sym(b)) => Scalar::Sym(a.sub(b)),
            _ => panic!("scalar mode mismatch: numeric and symbolic values cannot mix"),
        }
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Sym(a), Scalar::Sym(b)) => Scalar::Sym(a.mul(b)),
            _ => panic!("scalar mode mismatch: numeric and symbolic values cannot mix"),
        }
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Sym(s) => Scalar::Sym(s.neg()),
        }
    }

    /// `self^n`.
    pub fn pow(&self, n: u32) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(pow_rational(r, n as u64)),
            Scalar::Sym(s) => Scalar::Sym(s.pow(n)),
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    Err(ScalarError::NotInvertible("zero".into()))
                } else {
                    Ok(Scalar::Rat(Rational::one() / r))
                }
            }
            Scalar::Sym(s) => Ok(Scalar::Sym(s.inv()?)),
        }
    }

    /// Quotient.
    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => {
                if b.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(a / b))
                }
            }
            (Scalar::Sym(a), Scalar::Sym(b)) => Ok(Scalar::Sym(a.div(b)?)),
            _ => panic!("scalar mode mismatch: numeric and symbolic values cannot mix"),
        }
    }

    /// The concrete rational, when in numeric mode.
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Sym(_) => None,
        }
    }

    /// The symbolic value, when in symbolic mode.
    pub fn as_symbolic(&self) -> Option<&QScalar> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Sym(s) => Some(s),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", fmt_coeff(r)),
            Scalar::Sym(s) => write!(f, "{}", s),
        }
    }
}

/// Selects whether computations run at a concrete cardinality `q = value`
/// or symbolically in `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QMode {
    /// Evaluate with `q` specialized to the given (nonzero) rational.
    At(Rational),
    /// Keep `q` as a formal variable.
    Symbolic,
}

impl QMode {
    /// Numeric mode at an integer cardinality.
    pub fn at_int(q: i64) -> Self {
        QMode::At(rat(q))
    }

    /// The zero scalar in this mode.
    pub fn zero(&self) -> Scalar {
        match self {
            QMode::At(_) => Scalar::Rat(Rational::zero()),
            QMode::Symbolic => Scalar::Sym(QScalar::zero()),
        }
    }

    /// The unit scalar in this mode.
    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    /// The integer constant `n` in this mode.
    pub fn int(&self, n: i64) -> Scalar {
        self.constant(rat(n))
    }

    /// The rational constant `c` in this mode.
    pub fn constant(&self, c: Rational) -> Scalar {
        match self {
            QMode::At(_) => Scalar::Rat(c),
            QMode::Symbolic => Scalar::Sym(QScalar::from_rational(c)),
        }
    }

    /// The scalar `q` in this mode.
    pub fn q(&self) -> Scalar {
        self.q_pow(1)
    }

    /// The scalar `q^k` in this mode.
    pub fn q_pow(&self, k: i64) -> Scalar {
        match self {
            QMode::At(v) => {
                let p = if k >= 0 {
                    pow_rational(v, k as u64)
                } else {
                    Rational::one() / pow_rational(v, (-k) as u64)
                };
                Scalar::Rat(p)
            }
            QMode::Symbolic => Scalar::Sym(QScalar::q_pow(k)),
        }
    }

    /// Display label used in reports/config echoes.
    pub fn label(&self) -> String {
        match self {
            QMode::At(v) => format!("q={}", fmt_coeff(v)),
            QMode::Symbolic => "symbolic".into(),
        }
    }
}

// =============================== Tests ===============================

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_coeffs(pairs.iter().map(|(e, c)| (*e, rat(*c))))
    }

    fn rand_rational(rng: &mut ChaCha8Rng) -> Rational {
        let n = rng.gen_range(-9..=9i64);
        let d = rng.gen_range(1..=9i64);
        rat_frac(n, d)
    }

    fn rand_poly(rng: &mut ChaCha8Rng) -> LaurentPoly {
        let terms = rng.gen_range(0..6);
        LaurentPoly::from_coeffs(
            (0..terms).map(|_| (rng.gen_range(-5..=5i64), rand_rational(rng))),
        )
    }

    #[test]
    fn rational_arithmetic() {
        assert_eq!(rat_frac(1, 2) + rat_frac(1, 3), rat_frac(5, 6));
    }

    #[test]
    fn laurent_product() {
        let lhs = poly(&[(1, 1), (0, -1)]).mul(&poly(&[(1, 1), (0, 1)]));
        assert_eq!(lhs, poly(&[(2, 1), (0, -1)]));
    }

    #[test]
    fn laurent_division_exact() {
        // Frozen long-division result, confirmed by multiplying back.
        let num = poly(&[(2, 1), (0, -1)]);
        let den = poly(&[(1, 1), (0, -1)]);
        let quotient = num.div_exact(&den).unwrap();
        assert_eq!(quotient, poly(&[(1, 1), (0, 1)]));
        assert_eq!(quotient.mul(&den), num);
    }

    #[test]
    fn laurent_division_inexact_is_error() {
        let num = poly(&[(2, 1), (0, 1)]);
        let den = poly(&[(1, 1), (0, -1)]);
        assert!(matches!(num.div_exact(&den), Err(ScalarError::InexactDivision(_))));
    }

    #[test]
    fn laurent_division_by_zero_is_error() {
        assert!(matches!(
            LaurentPoly::one().div_exact(&LaurentPoly::zero()),
            Err(ScalarError::DivisionByZero)
        ));
    }

    #[test]
    fn laurent_division_by_monomial() {
        let p = poly(&[(3, 2), (1, 4)]);
        let m = LaurentPoly::monomial(2, rat(2));
        assert_eq!(p.div_exact(&m).unwrap(), poly(&[(1, 1), (-1, 2)]));
    }

    #[test]
    fn specialization_examples() {
        assert_eq!(poly(&[(0, 1), (1, 1), (2, 1)]).specialize(&rat(2)), rat(7));
        assert_eq!(poly(&[(-1, 1)]).specialize(&rat(2)), rat_frac(1, 2));
        assert_eq!(poly(&[(3, 1)]).specialize(&rat(3)), rat(27));
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let a = rand_poly(&mut rng);
            let b = rand_poly(&mut rng);
            let c = rand_poly(&mut rng);
            assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.add(&b), b.add(&a));
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.sub(&a), LaurentPoly::zero());
        }
    }

    #[test]
    fn specialize_is_ring_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let point = rat_frac(5, 3);
        for _ in 0..100 {
            let a = rand_poly(&mut rng);
            let b = rand_poly(&mut rng);
            assert_eq!(
                a.mul(&b).specialize(&point),
                a.specialize(&point) * b.specialize(&point)
            );
            assert_eq!(
                a.add(&b).specialize(&point),
                a.specialize(&point) + b.specialize(&point)
            );
        }
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), poly(&[(1, 1), (0, -1)]));
        assert_eq!(cyclotomic(2), poly(&[(1, 1), (0, 1)]));
        assert_eq!(cyclotomic(3), poly(&[(2, 1), (1, 1), (0, 1)]));
        assert_eq!(cyclotomic(4), poly(&[(2, 1), (0, 1)]));
        assert_eq!(cyclotomic(6), poly(&[(2, 1), (1, -1), (0, 1)]));
    }

    #[test]
    fn cyclotomic_product_recovers_qn_minus_one() {
        for n in 1..=30u32 {
            let product = cyclo_product(&qk_minus_one_factors(n));
            let direct = LaurentPoly::q_pow(n as i64).sub(&LaurentPoly::one());
            assert_eq!(product, direct, "n = {}", n);
        }
    }

    #[test]
    fn euler_phi_matches_cyclotomic_degree() {
        for d in 1..=40u32 {
            assert_eq!(euler_phi(d) as i64, cyclotomic(d).max_exp().unwrap(), "d = {}", d);
        }
    }

    #[test]
    fn qscalar_cancels_cyclotomic_denominator() {
        // (1 / Φ_2) · (1 + q) = 1   since [2]_q = 1 + q = Φ_2.
        let inv_two_fact = QScalar::with_cyclotomic_den(LaurentPoly::one(), [(2, 1)]);
        let two_fact = QScalar::from_laurent(poly(&[(0, 1), (1, 1)]));
        assert!(inv_two_fact.mul(&two_fact).is_one());
    }

    #[test]
    fn qscalar_addition_finds_common_denominator() {
        // 1/Φ_1 + 1/Φ_2 = (Φ_1 + Φ_2)/(Φ_1 Φ_2) = 2q/(q²−1).
        let a = QScalar::with_cyclotomic_den(LaurentPoly::one(), [(1, 1)]);
        let b = QScalar::with_cyclotomic_den(LaurentPoly::one(), [(2, 1)]);
        let sum = a.add(&b);
        assert_eq!(sum.numerator(), &poly(&[(1, 2)]));
        assert_eq!(
            sum.denominator_factors().iter().map(|(d, e)| (*d, *e)).collect::<Vec<_>>(),
            vec![(1, 1), (2, 1)]
        );
    }

    #[test]
    fn qscalar_inverse_roundtrip() {
        // x = (q⁶−1)(q²−1) · q^{-3} · 3/7, a unit of the coefficient ring.
        let q6 = LaurentPoly::q_pow(6).sub(&LaurentPoly::one());
        let q2 = LaurentPoly::q_pow(2).sub(&LaurentPoly::one());
        let x = QScalar::from_laurent(
            q6.mul(&q2).mul_monomial(-3, &rat_frac(3, 7)),
        );
        let inv = x.inv().unwrap();
        assert!(x.mul(&inv).is_one());
        // The inverse exposes the cyclotomic factorization 6·2 ↦ {1:2, 2:2, 3:1, 6:1}.
        assert_eq!(
            inv.denominator_factors().iter().map(|(d, e)| (*d, *e)).collect::<Vec<_>>(),
            vec![(1, 2), (2, 2), (3, 1), (6, 1)]
        );
    }

    #[test]
    fn qscalar_non_cyclotomic_is_not_invertible() {
        let x = QScalar::from_laurent(poly(&[(1, 1), (0, 2)])); // q + 2
        assert!(matches!(x.inv(), Err(ScalarError::NotInvertible(_))));
        assert!(matches!(QScalar::zero().inv(), Err(ScalarError::NotInvertible(_))));
    }

    #[test]
    fn qscalar_specialize_is_ring_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let point = rat(5);
        for _ in 0..50 {
            let mut a = QScalar::with_cyclotomic_den(
                rand_poly(&mut rng),
                [(rng.gen_range(1..=4u32), rng.gen_range(0..=2u32))],
            );
            let b = QScalar::with_cyclotomic_den(
                rand_poly(&mut rng),
                [(rng.gen_range(1..=4u32), rng.gen_range(0..=2u32))],
            );
            if rng.gen_bool(0.3) {
                a = a.neg();
            }
            let sa = a.specialize(&point).unwrap();
            let sb = b.specialize(&point).unwrap();
            assert_eq!(a.mul(&b).specialize(&point).unwrap(), &sa * &sb);
            assert_eq!(a.add(&b).specialize(&point).unwrap(), &sa + &sb);
            assert_eq!(a.sub(&b).specialize(&point).unwrap(), &sa - &sb);
        }
    }

    #[test]
    fn qscalar_division_prefers_exact_polynomial_quotient() {
        let a = QScalar::from_laurent(poly(&[(2, 1), (0, -1)]));
        let b = QScalar::from_laurent(poly(&[(1, 1), (0, 1)]));
        let q = a.div(&b).unwrap();
        assert_eq!(q, QScalar::from_laurent(poly(&[(1, 1), (0, -1)])));
    }

    #[test]
    fn scalar_modes_do_not_mix() {
        let numeric = QMode::at_int(2);
        let symbolic = QMode::Symbolic;
        assert_eq!(numeric.q_pow(3), Scalar::Rat(rat(8)));
        assert_eq!(
            symbolic.q_pow(-1),
            Scalar::Sym(QScalar::q_pow(-1))
        );
        let result = std::panic::catch_unwind(|| {
            numeric.one().add(&symbolic.one());
        });
        assert!(result.is_err());
    }

    #[test]
    fn rendering_follows_increasing_exponents() {
        let p = poly(&[(2, 3), (0, 2), (-1, -1)]);
        assert_eq!(p.to_string(), "-1*q^-1 + 2 + 3*q^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(poly(&[(1, 1)]).to_string(), "1*q");
        let s = QScalar::with_cyclotomic_den(poly(&[(0, 1), (1, 1)]), [(3, 2)]);
        assert_eq!(s.to_string(), "(1 + 1*q) / Phi_3(q)^2");
    }
}
