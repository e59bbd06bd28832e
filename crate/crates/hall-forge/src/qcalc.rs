//! q-combinatorics and truncated one-variable power series with the divided
//! q-derivative calculus.
//!
//! Everything is parameterized by a [`QMode`]: evaluate numerically at a
//! concrete cardinality or symbolically in `q`.  Series are dense and carry a
//! fixed truncation order; arithmetic between series demands equal orders, and
//! the divided derivative lowers the order by its degree, keeping every
//! computed coefficient exact.

use crate::scalar::{QMode, QScalar, Scalar};
use thiserror::Error;

/// Errors from series calculus.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QcalcError {
    /// A divided derivative of order beyond the series truncation.
    #[error("derivative order {j} exceeds truncation order {order}")]
    DerivativeTooLarge { j: usize, order: usize },
    /// Inverting a series whose constant term is not invertible.
    #[error("series constant term is not invertible")]
    NonInvertibleSeries,
}

/// `binom(n, 2) = n(n−1)/2`, valid for any integer.
pub fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// The q-integer `[n]_q = 1 + q + … + q^{n−1}` (zero for `n = 0`).
pub fn q_int(mode: &QMode, n: u64) -> Scalar {
    let mut acc = mode.zero();
    for k in 0..n {
        acc = acc.add(&mode.q_pow(k as i64));
    }
    acc
}

/// The q-factorial `[n]_q! = [1]_q [2]_q ⋯ [n]_q`.
pub fn q_factorial(mode: &QMode, n: u64) -> Scalar {
    let mut acc = mode.one();
    for k in 1..=n {
        acc = acc.mul(&q_int(mode, k));
    }
    acc
}

/// `1 / [n]_q!`, built directly: in symbolic mode the denominator is the
/// cyclotomic factorization `[k]_q = ∏_{d | k, d > 1} Φ_d(q)`, so no general
/// inversion is ever attempted.
pub fn q_factorial_inv(mode: &QMode, n: u64) -> Scalar {
    match mode {
        QMode::At(_) => q_factorial(mode, n)
            .inv()
            .expect("q-factorial is nonzero at a prime-power cardinality"),
        QMode::Symbolic => {
            let mut factors: Vec<(u32, u32)> = Vec::new();
            for k in 2..=n as u32 {
                for d in 2..=k {
                    if k % d == 0 {
                        factors.push((d, 1));
                    }
                }
            }
            Scalar::Sym(QScalar::with_cyclotomic_den(
                crate::scalar::LaurentPoly::one(),
                factors,
            ))
        }
    }
}

/// The Gaussian binomial `[n choose k]_q = [n]_q!/([k]_q! [n−k]_q!)`;
/// zero when `k < 0` or `k > n`.
pub fn q_binomial(mode: &QMode, n: u64, k: i64) -> Scalar {
    if k < 0 || k as u64 > n {
        return mode.zero();
    }
    let k = k as u64;
    let num = q_factorial(mode, n);
    let den_inv = q_factorial_inv(mode, k).mul(&q_factorial_inv(mode, n - k));
    let result = num.mul(&den_inv);
    if let Scalar::Sym(s) = &result {
        debug_assert!(s.as_laurent().is_some(), "Gaussian binomial must reduce to a polynomial");
    }
    result
}

/// Order of the general linear group:
/// `|GL(n, q)| = q^{binom(n,2)} ∏_{k=1}^{n} (q^k − 1)`.
pub fn gl_order(mode: &QMode, n: u64) -> Scalar {
    let mut acc = mode.q_pow(binom2(n as i64));
    for k in 1..=n {
        acc = acc.mul(&mode.q_pow(k as i64).sub(&mode.one()));
    }
    acc
}

/// `1 / |GL(n, q)|` without general inversion (cyclotomic denominator in
/// symbolic mode).
pub fn gl_order_inv(mode: &QMode, n: u64) -> Scalar {
    match mode {
        QMode::At(_) => gl_order(mode, n).inv().expect("GL order is nonzero"),
        QMode::Symbolic => {
            let mut factors: Vec<(u32, u32)> = Vec::new();
            for k in 1..=n as u32 {
                for d in 1..=k {
                    if k % d == 0 {
                        factors.push((d, 1));
                    }
                }
            }
            Scalar::Sym(QScalar::with_cyclotomic_den(
                crate::scalar::LaurentPoly::q_pow(-binom2(n as i64)),
                factors,
            ))
        }
    }
}

/// Elementary symmetric polynomial `e_j` evaluated at the given scalars.
pub fn elementary_symmetric(mode: &QMode, values: &[Scalar], j: usize) -> Scalar {
    if j > values.len() {
        return mode.zero();
    }
    // DP over prefix products: e[t] after processing v becomes e[t] + v·e[t−1].
    let mut e: Vec<Scalar> = (0..=j).map(|t| if t == 0 { mode.one() } else { mode.zero() }).collect();
    for v in values {
        for t in (1..=j).rev() {
            e[t] = e[t].add(&v.mul(&e[t - 1]));
        }
    }
    e[j].clone()
}

/// Complete homogeneous symmetric polynomial `h_j` evaluated at the given scalars.
pub fn complete_homogeneous(mode: &QMode, values: &[Scalar], j: usize) -> Scalar {
    if values.is_empty() {
        return if j == 0 { mode.one() } else { mode.zero() };
    }
    // h[t] over the first m variables: h_m[t] = h_{m−1}[t] + x_m·h_m[t−1].
    let mut h: Vec<Scalar> = (0..=j).map(|t| if t == 0 { mode.one() } else { mode.zero() }).collect();
    for v in values {
        for t in 1..=j {
            h[t] = h[t].add(&v.mul(&h[t - 1]));
        }
    }
    h[j].clone()
}

// =========================== Truncated series ===========================

/// A truncated power series `Σ_{k=0}^{order} c_k x^k` with exact scalar
/// coefficients, all in the same mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    mode: QMode,
    coeffs: Vec<Scalar>,
}

impl QSeries {
    /// The zero series at the given truncation order.
    pub fn zero(mode: &QMode, order: usize) -> Self {
        QSeries { mode: mode.clone(), coeffs: vec![mode.zero(); order + 1] }
    }

    /// The constant series 1.
    pub fn one(mode: &QMode, order: usize) -> Self {
        Self::constant(mode, mode.one(), order)
    }

    /// A constant series.
    pub fn constant(mode: &QMode, c: Scalar, order: usize) -> Self {
        let mut s = Self::zero(mode, order);
        s.coeffs[0] = c;
        s
    }

    /// The monomial `c·x^deg` (zero series if `deg` exceeds the order).
    pub fn monomial(mode: &QMode, deg: usize, c: Scalar, order: usize) -> Self {
        let mut s = Self::zero(mode, order);
        if deg <= order {
            s.coeffs[deg] = c;
        }
        s
    }

    /// Builds a series from coefficients (order = `coeffs.len() − 1`).
    pub fn from_coeffs(mode: &QMode, coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty());
        QSeries { mode: mode.clone(), coeffs }
    }

    pub fn mode(&self) -> &QMode {
        &self.mode
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowers the truncation order (must not exceed the current one).
    pub fn truncate(&self, new_order: usize) -> Self {
        assert!(new_order <= self.order(), "cannot extend a truncated series");
        QSeries { mode: self.mode.clone(), coeffs: self.coeffs[..=new_order].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "series orders must agree");
        QSeries {
            mode: self.mode.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "series orders must agree");
        QSeries {
            mode: self.mode.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        QSeries { mode: self.mode.clone(), coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        QSeries {
            mode: self.mode.clone(),
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "series orders must agree");
        let n = self.order();
        let mut out = Self::zero(&self.mode, n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        out
    }

    /// Multiplicative inverse by the standard coefficient recursion; the
    /// constant term must be invertible.
    pub fn invert(&self) -> Result<Self, QcalcError> {
        let c0 = self.coeffs[0].inv().map_err(|_| QcalcError::NonInvertibleSeries)?;
        let n = self.order();
        let mut out = Self::zero(&self.mode, n);
        out.coeffs[0] = c0.clone();
        for k in 1..=n {
            let mut acc = self.mode.zero();
            for i in 1..=k {
                acc = acc.add(&self.coeffs[i].mul(&out.coeffs[k - i]));
            }
            out.coeffs[k] = acc.mul(&c0).neg();
        }
        Ok(out)
    }

    /// Substitutes `x ↦ c·x` (coefficient `a` picks up `c^a`).
    pub fn scale_argument(&self, c: &Scalar) -> Self {
        let mut pow = self.mode.one();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(a, v)| {
                if a > 0 {
                    pow = pow.mul(c);
                }
                v.mul(&pow)
            })
            .collect();
        QSeries { mode: self.mode.clone(), coeffs }
    }

    /// Substitutes `x ↦ q^s·x`.
    pub fn scale_argument_q_pow(&self, s: i64) -> Self {
        self.scale_argument(&self.mode.q_pow(s))
    }
}

/// The divided q-derivative `D^{(j)}`, acting on monomials by
/// `D^{(j)} x^a = [a choose j]_q x^{a−j}`; the result's truncation order
/// drops by `j`.
pub fn q_derivative(f: &QSeries, j: usize) -> Result<QSeries, QcalcError> {
    let order = f.order();
    if j > order {
        return Err(QcalcError::DerivativeTooLarge { j, order });
    }
    let mode = f.mode().clone();
    let mut out = QSeries::zero(&mode, order - j);
    for a in j..=order {
        let c = q_binomial(&mode, a as u64, j as i64).mul(f.coeff(a));
        out.coeffs[a - j] = c;
    }
    Ok(out)
}

/// The q-exponential `Σ_{n≥0} x^n/[n]_q!`, truncated.
pub fn exp_q(mode: &QMode, order: usize) -> QSeries {
    let coeffs = (0..=order).map(|n| q_factorial_inv(mode, n as u64)).collect();
    QSeries::from_coeffs(mode, coeffs)
}

/// The closed product form of `Φ_ν`:
/// `∏_{r=0}^{ν−1} (1 + q^r(q−1) x)` for `ν ≥ 0`, and
/// `∏_{r=1}^{−ν} (1 + q^{−r}(q−1) x)^{−1}` for `ν < 0`, truncated.
pub fn phi_nu(mode: &QMode, nu: i64, order: usize) -> QSeries {
    let q_minus_one = mode.q().sub(&mode.one());
    let mut acc = QSeries::one(mode, order);
    if nu >= 0 {
        for r in 0..nu {
            let factor = QSeries::one(mode, order).add(&QSeries::monomial(
                mode,
                1,
                mode.q_pow(r).mul(&q_minus_one),
                order,
            ));
            acc = acc.mul(&factor);
        }
    } else {
        for r in 1..=(-nu) {
            let factor = QSeries::one(mode, order).add(&QSeries::monomial(
                mode,
                1,
                mode.q_pow(-r).mul(&q_minus_one),
                order,
            ));
            acc = acc.mul(&factor.invert().expect("constant term 1 is invertible"));
        }
    }
    acc
}

// =========================== Identity checks ===========================

/// Divided-power Leibniz rule:
/// `D^{(j)}(f·g) = Σ_{s=0}^{j} (D^{(j−s)} f)(q^s x) · D^{(s)} g`,
/// compared at the shared truncation order.
pub fn check_q_leibniz(f: &QSeries, g: &QSeries, j: usize) -> Result<bool, QcalcError> {
    assert_eq!(f.order(), g.order(), "series orders must agree");
    let target = q_derivative(&f.mul(g), j)?;
    let n = target.order();
    let mode = f.mode().clone();
    let mut rhs = QSeries::zero(&mode, n);
    for s in 0..=j {
        let df = q_derivative(f, j - s)?.truncate(n).scale_argument_q_pow(s as i64);
        let dg = q_derivative(g, s)?.truncate(n);
        rhs = rhs.add(&df.mul(&dg));
    }
    Ok(target == rhs)
}

/// Defining property of `Φ_ν`: `exp_q(x)^{−1} · exp_q(q^ν x)` equals the
/// closed product form, coefficientwise up to the truncation order.
pub fn check_phi_definition(mode: &QMode, nu: i64, order: usize) -> bool {
    let exp = exp_q(mode, order);
    let lhs = exp
        .invert()
        .expect("q-exponential has constant term 1")
        .mul(&exp.scale_argument_q_pow(nu));
    lhs == phi_nu(mode, nu, order)
}

/// The two classical product/sum identities
/// `∏_{r=0}^{n} (1 + q^r x) = Σ_s q^{binom(s,2)} [n+1 choose s]_q x^s` and
/// `∏_{r=0}^{n} (1 − q^r x)^{−1} = Σ_s [s+n choose s]_q x^s`,
/// checked as truncated series.
pub fn check_gauss_product_sum(mode: &QMode, n: u64, order: usize) -> bool {
    // First identity.
    let mut lhs1 = QSeries::one(mode, order);
    for r in 0..=n {
        let factor = QSeries::one(mode, order).add(&QSeries::monomial(
            mode,
            1,
            mode.q_pow(r as i64),
            order,
        ));
        lhs1 = lhs1.mul(&factor);
    }
    let rhs1 = QSeries::from_coeffs(
        mode,
        (0..=order)
            .map(|s| {
                mode.q_pow(binom2(s as i64))
                    .mul(&q_binomial(mode, n + 1, s as i64))
            })
            .collect(),
    );
    if lhs1 != rhs1 {
        return false;
    }
    // Second identity.
    let mut lhs2 = QSeries::one(mode, order);
    for r in 0..=n {
        let factor = QSeries::one(mode, order).sub(&QSeries::monomial(
            mode,
            1,
            mode.q_pow(r as i64),
            order,
        ));
        lhs2 = lhs2.mul(&factor.invert().expect("constant term 1"));
    }
    let rhs2 = QSeries::from_coeffs(
        mode,
        (0..=order)
            .map(|s| q_binomial(mode, s as u64 + n, s as i64))
            .collect(),
    );
    lhs2 == rhs2
}

// =============================== Tests ===============================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, LaurentPoly, QMode, QScalar};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sym() -> QMode {
        QMode::Symbolic
    }

    fn sym_poly(pairs: &[(i64, i64)]) -> Scalar {
        Scalar::Sym(QScalar::from_laurent(LaurentPoly::from_coeffs(
            pairs.iter().map(|(e, c)| (*e, rat(*c))),
        )))
    }

    #[test]
    fn q_integers() {
        assert!(q_int(&sym(), 0).is_zero());
        assert_eq!(q_int(&sym(), 2), sym_poly(&[(0, 1), (1, 1)]));
        assert_eq!(q_int(&QMode::at_int(2), 4), Scalar::Rat(rat(15)));
    }

    /// Independent oracle: Gaussian binomials by the q-Pascal recursion
    /// [n choose k] = [n−1 choose k−1] + q^k·[n−1 choose k].
    fn pascal_qbinom(n: u64, k: i64) -> LaurentPoly {
        if k < 0 || k as u64 > n {
            return LaurentPoly::zero();
        }
        if n == 0 {
            return LaurentPoly::one();
        }
        let left = pascal_qbinom(n - 1, k - 1);
        let right = pascal_qbinom(n - 1, k).mul_monomial(k, &rat(1));
        left.add(&right)
    }

    #[test]
    fn gaussian_binomials_match_pascal_oracle() {
        for n in 0..=8u64 {
            for k in -1..=(n as i64 + 1) {
                let expected = Scalar::Sym(QScalar::from_laurent(pascal_qbinom(n, k)));
                assert_eq!(q_binomial(&sym(), n, k), expected, "n={} k={}", n, k);
            }
        }
    }

    #[test]
    fn gaussian_binomial_examples() {
        assert!(q_binomial(&sym(), 5, 0).is_one());
        assert_eq!(q_binomial(&sym(), 2, 1), sym_poly(&[(0, 1), (1, 1)]));
        assert_eq!(
            q_binomial(&sym(), 4, 2),
            sym_poly(&[(0, 1), (1, 1), (2, 2), (3, 1), (4, 1)])
        );
    }

    #[test]
    fn gaussian_binomial_symmetry_and_positivity() {
        for n in 0..=8u64 {
            for k in 0..=n {
                let a = q_binomial(&sym(), n, k as i64);
                let b = q_binomial(&sym(), n, (n - k) as i64);
                assert_eq!(a, b);
                let poly = a.as_symbolic().unwrap().as_laurent().unwrap().clone();
                for (e, c) in poly.terms() {
                    assert!(e >= 0, "negative exponent in Gaussian binomial");
                    assert!(c.denom() == &num::BigInt::from(1) && c.numer() >= &num::BigInt::from(0));
                }
            }
        }
    }

    #[test]
    fn gl_orders() {
        // |GL(2, 2)| = 6, |GL(3, 2)| = 168, |GL(2, 3)| = 48.
        let m2 = QMode::at_int(2);
        let m3 = QMode::at_int(3);
        assert_eq!(gl_order(&m2, 2), Scalar::Rat(rat(6)));
        assert_eq!(gl_order(&m2, 3), Scalar::Rat(rat(168)));
        assert_eq!(gl_order(&m3, 2), Scalar::Rat(rat(48)));
        // Inverse is really the inverse, in both modes.
        assert!(gl_order(&m3, 3).mul(&gl_order_inv(&m3, 3)).is_one());
        assert!(gl_order(&sym(), 4).mul(&gl_order_inv(&sym(), 4)).is_one());
    }

    #[test]
    fn derivative_examples() {
        let mode = sym();
        let constant = QSeries::constant(&mode, mode.int(7), 4);
        assert!(q_derivative(&constant, 1).unwrap().is_zero());
        // D_q(x²) = (1+q)x
        let x2 = QSeries::monomial(&mode, 2, mode.one(), 4);
        let d = q_derivative(&x2, 1).unwrap();
        assert_eq!(d.coeff(1), &q_int(&mode, 2));
        // D^{(2)}(x⁴) = [4 choose 2]_q x²
        let x4 = QSeries::monomial(&mode, 4, mode.one(), 5);
        let d2 = q_derivative(&x4, 2).unwrap();
        assert_eq!(d2.coeff(2), &q_binomial(&mode, 4, 2));
        assert!(matches!(
            q_derivative(&x2, 9),
            Err(QcalcError::DerivativeTooLarge { .. })
        ));
    }

    #[test]
    fn exponential_series() {
        let mode = sym();
        let e = exp_q(&mode, 8);
        assert!(e.coeff(0).is_one());
        // Coefficient of x² is 1/(1+q).
        let two_fact = q_int(&mode, 2);
        assert!(e.coeff(2).mul(&two_fact).is_one());
        // exp_q · exp_q^{-1} = 1 at order 8.
        let product = e.mul(&e.invert().unwrap());
        assert_eq!(product, QSeries::one(&mode, 8));
    }

    #[test]
    fn phi_closed_forms() {
        let mode = sym();
        assert_eq!(phi_nu(&mode, 0, 6), QSeries::one(&mode, 6));
        let p1 = phi_nu(&mode, 1, 6);
        assert_eq!(p1.coeff(1), &mode.q().sub(&mode.one()));
        assert!(p1.coeff(2).is_zero());
        // ν = −1: geometric series in −(q−1)q^{−1} x.
        let pm1 = phi_nu(&mode, -1, 5);
        let ratio = mode.q_pow(-1).mul(&mode.q().sub(&mode.one())).neg();
        let mut expected = mode.one();
        for k in 0..=5 {
            assert_eq!(pm1.coeff(k), &expected, "k = {}", k);
            expected = expected.mul(&ratio);
        }
    }

    #[test]
    fn phi_matches_defining_equation() {
        let mode = sym();
        assert!(check_phi_definition(&mode, 0, 6));
        assert!(check_phi_definition(&mode, 2, 10));
        assert!(check_phi_definition(&mode, -3, 10));
    }

    #[test]
    fn phi_product_inverse_property() {
        let mode = sym();
        for nu in -5..=5i64 {
            let lhs = phi_nu(&mode, nu, 8).mul(&phi_nu(&mode, -nu, 8).scale_argument_q_pow(nu));
            assert_eq!(lhs, QSeries::one(&mode, 8), "nu = {}", nu);
        }
    }

    fn random_series(mode: &QMode, rng: &mut ChaCha8Rng, order: usize) -> QSeries {
        QSeries::from_coeffs(
            mode,
            (0..=order)
                .map(|_| {
                    let c = rng.gen_range(-4..=4i64);
                    let e = rng.gen_range(-2..=2i64);
                    match mode {
                        QMode::Symbolic => Scalar::Sym(QScalar::from_laurent(
                            LaurentPoly::monomial(e, rat(c)),
                        )),
                        QMode::At(v) => {
                            let mut s = mode.int(c);
                            s = s.mul(&QMode::At(v.clone()).q_pow(e));
                            s
                        }
                    }
                })
                .collect(),
        )
    }

    #[test]
    fn leibniz_rule_examples_and_random_pairs() {
        let mode = sym();
        let one = QSeries::one(&mode, 6);
        assert!(check_q_leibniz(&one, &one, 3).unwrap());
        let x = QSeries::monomial(&mode, 1, mode.one(), 6);
        let x2 = QSeries::monomial(&mode, 2, mode.one(), 6);
        assert!(check_q_leibniz(&x, &x2, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(314);
        for trial in 0..50 {
            let f = random_series(&mode, &mut rng, 7);
            let g = random_series(&mode, &mut rng, 7);
            let j = rng.gen_range(0..=3usize);
            assert!(check_q_leibniz(&f, &g, j).unwrap(), "trial {}", trial);
        }
    }

    #[test]
    fn divided_derivatives_compose() {
        let mode = sym();
        let mut rng = ChaCha8Rng::seed_from_u64(2718);
        for _ in 0..20 {
            let f = random_series(&mode, &mut rng, 8);
            for i in 0..=2usize {
                for j in 0..=2usize {
                    let lhs = q_derivative(&q_derivative(&f, j).unwrap(), i).unwrap();
                    let rhs = q_derivative(&f, i + j)
                        .unwrap()
                        .scale(&q_binomial(&mode, (i + j) as u64, i as i64));
                    assert_eq!(lhs, rhs, "i={} j={}", i, j);
                }
            }
        }
    }

    #[test]
    fn gauss_product_sum_identities() {
        let mode = sym();
        assert!(check_gauss_product_sum(&mode, 0, 3));
        assert!(check_gauss_product_sum(&mode, 3, 6));
        assert!(check_gauss_product_sum(&mode, 5, 8));
        assert!(check_gauss_product_sum(&QMode::at_int(3), 4, 7));
    }

    #[test]
    fn inverse_product_polynomiality_witness() {
        // For invertible polynomial f, ∏_{s=0}^{j} f(q^s x) · D^{(j)}(f^{−1})
        // is a polynomial of degree ≤ j (its higher truncated coefficients vanish).
        let mode = sym();
        let order = 10;
        let f = QSeries::one(&mode, order).add(&QSeries::monomial(
            &mode,
            1,
            mode.q().sub(&mode.one()),
            order,
        ));
        for j in 0..=4usize {
            let dinv = q_derivative(&f.invert().unwrap(), j).unwrap();
            let n = dinv.order();
            let mut prod = QSeries::one(&mode, n);
            for s in 0..=j {
                prod = prod.mul(&f.truncate(n).scale_argument_q_pow(s as i64));
            }
            let witness = prod.mul(&dinv);
            for k in j + 1..=n {
                assert!(witness.coeff(k).is_zero(), "j={} k={}", j, k);
            }
        }
    }

    #[test]
    fn symmetric_polynomial_helpers() {
        let mode = QMode::at_int(1); // plain rational arithmetic
        let vals: Vec<Scalar> = [2i64, 3, 5].iter().map(|&v| mode.int(v)).collect();
        // (1+2t)(1+3t)(1+5t) = 1 + 10t + 31t² + 30t³
        assert_eq!(elementary_symmetric(&mode, &vals, 0), mode.int(1));
        assert_eq!(elementary_symmetric(&mode, &vals, 1), mode.int(10));
        assert_eq!(elementary_symmetric(&mode, &vals, 2), mode.int(31));
        assert_eq!(elementary_symmetric(&mode, &vals, 3), mode.int(30));
        assert!(elementary_symmetric(&mode, &vals, 4).is_zero());
        // h_2(2,3) = 4 + 6 + 9 = 19, h_3(2,3) = 8 + 12 + 18 + 27 = 65.
        let two: Vec<Scalar> = [2i64, 3].iter().map(|&v| mode.int(v)).collect();
        assert_eq!(complete_homogeneous(&mode, &two, 2), mode.int(19));
        assert_eq!(complete_homogeneous(&mode, &two, 3), mode.int(65));
        assert_eq!(complete_homogeneous(&mode, &[], 0), mode.int(1));
    }
}
