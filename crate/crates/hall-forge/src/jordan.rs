//! Length-graded nilpotent linear algebra: partition-indexed module classes
//! over a power-series base with finite residue field, invariant-subspace
//! counting, automorphism counts, and the symmetric-function image of the
//! class basis (Hall–Littlewood polynomials).
//!
//! A class here is a partition: the Jordan type of a nilpotent operator.
//! Everything is computed over the prime field `F_p`, with the truncated
//! power-series structure realised by the operator itself.

use crate::linalg::{enumerate_subspaces, FpMat};
use crate::qcalc::{self, QSeries};
use crate::repfield::{Caps, IsoClass, RepError};
use crate::scalar::{QMode, Rational, Scalar};
use num::{BigInt, One, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// A partition: weakly decreasing positive parts.
pub type Partition = Vec<usize>;

// ==== Partition helpers ====

/// All partitions of `n`, parts weakly decreasing.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, prefix: &mut Partition, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            prefix.push(part);
            rec(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n.max(1), &mut Vec::new(), &mut out);
    out
}

/// All partitions of every weight from 0 through `n` (the empty partition
/// first).
pub fn partitions_up_to(n: usize) -> Vec<Partition> {
    let mut out = vec![Vec::new()];
    for k in 1..=n {
        out.extend(partitions_of(k));
    }
    out
}

/// Total weight `|λ|`.
pub fn weight(lam: &Partition) -> usize {
    lam.iter().sum()
}

/// The statistic `n(λ) = Σ (i-1)·λ_i` over 1-based positions.
pub fn n_stat(lam: &Partition) -> u64 {
    lam.iter().enumerate().map(|(i, &x)| (i as u64) * (x as u64)).sum()
}

/// Multiplicities: part size → count.
pub fn mult_form(lam: &Partition) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &part in lam {
        *m.entry(part).or_insert(0) += 1;
    }
    m
}

/// The class encoding of a partition: summand index `k` is a block of
/// length `k+1`.
pub fn class_of(lam: &Partition) -> IsoClass {
    let mut acc = IsoClass::empty();
    for (part, mult) in mult_form(lam) {
        acc = acc.add(&IsoClass::with_multiplicity(part - 1, mult));
    }
    acc
}

/// Inverse of [`class_of`].
pub fn partition_of(class: &IsoClass) -> Partition {
    let mut lam = Vec::new();
    for (idx, mult) in class.entries() {
        for _ in 0..mult {
            lam.push(idx + 1);
        }
    }
    lam.sort_unstable_by(|a, b| b.cmp(a));
    lam
}

// ==== The category ====

/// Nilpotent-operator classes over `F_p`, truncated at block length
/// `max_len`.
#[derive(Debug, Clone)]
pub struct JordanCat {
    pub p: u32,
    pub max_len: usize,
    pub caps: Caps,
}

impl JordanCat {
    pub fn new(p: u32, max_len: usize) -> Self {
        let mut caps = Caps::default_for(p);
        caps.apply_env_override();
        caps.cover_truncation(max_len);
        JordanCat { p, max_len, caps }
    }

    /// Every class of total length at most `total`.
    pub fn classes_up_to(&self, total: usize) -> Vec<IsoClass> {
        partitions_up_to(total.min(self.max_len))
            .iter()
            .filter(|lam| lam.first().copied().unwrap_or(0) <= self.max_len)
            .map(|lam| class_of(lam))
            .collect()
    }
}

/// The block-diagonal nilpotent matrix of Jordan type `λ` (each block a
/// single lower shift).
pub fn nilpotent_matrix(p: u32, lam: &Partition) -> FpMat {
    let n = weight(lam);
    let mut m = FpMat::zero(p, n, n);
    let mut offset = 0;
    for &part in lam {
        for i in 0..part.saturating_sub(1) {
            m.set(offset + i + 1, offset + i, 1);
        }
        offset += part;
    }
    m
}

/// Jordan type of a nilpotent matrix from its rank sequence:
/// the number of parts equal to `s` is `r_{s-1} - 2 r_s + r_{s+1}`.
pub fn jordan_type(m: &FpMat) -> Partition {
    let n = m.rows;
    let mut ranks = vec![n];
    let mut power = FpMat::identity(m.p, n);
    loop {
        power = power.mul(m);
        let r = power.rank();
        ranks.push(r);
        if r == 0 {
            break;
        }
        assert!(ranks.len() <= n + 1, "matrix is not nilpotent");
    }
    while ranks.len() < n + 2 {
        let last = *ranks.last().unwrap();
        ranks.push(last);
    }
    let mut lam = Vec::new();
    for s in (1..=n).rev() {
        let mult = ranks[s - 1] + ranks[s + 1] - 2 * ranks[s];
        for _ in 0..mult {
            lam.push(s);
        }
    }
    assert_eq!(weight(&lam), n, "rank sequence does not sum to the dimension");
    lam
}

/// Gaussian binomial count of `k`-dimensional subspaces of `F_p^n`,
/// as an exact big integer.
fn subspace_count(p: u32, n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let q = BigInt::from(p);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// For the class `λ` and a chosen sub-length `k`: how many invariant
/// subspaces realise each (quotient class, sub class) pair.
pub fn invariant_profile(
    cat: &JordanCat,
    lam: &Partition,
    k: usize,
) -> Result<BTreeMap<(IsoClass, IsoClass), u64>, RepError> {
    let n = weight(lam);
    if n > cat.caps.subspace_total_dim {
        return Err(RepError::CapExceeded(format!(
            "ambient length {n} exceeds subspace cap {}",
            cat.caps.subspace_total_dim
        )));
    }
    if k > n {
        return Ok(BTreeMap::new());
    }
    let count = subspace_count(cat.p, n, k);
    if count > BigInt::from(cat.caps.ext_enum_count) {
        return Err(RepError::CapExceeded(format!(
            "{count} subspaces of dimension {k} in length {n} ambient"
        )));
    }
    let nmat = nilpotent_matrix(cat.p, lam);
    let mut out: BTreeMap<(IsoClass, IsoClass), u64> = BTreeMap::new();
    for sub in enumerate_subspaces(cat.p, n, k) {
        // Invariance: the operator must map each basis vector back in.
        let images: Vec<Vec<u32>> =
            (0..k).map(|i| nmat.mat_vec(sub.mat.row(i))).collect();
        if !images.iter().all(|v| sub.contains(v)) {
            continue;
        }
        // Restriction in subspace coordinates.
        let mut rest = FpMat::zero(cat.p, k, k);
        for (col, img) in images.iter().enumerate() {
            let coords = sub.coords_of(img).expect("invariant image has coordinates");
            for (row, &c) in coords.iter().enumerate() {
                rest.set(row, col, c);
            }
        }
        let sub_type = jordan_type(&rest);
        // Induced operator on the quotient, in non-pivot coordinates.
        let nonpivots = sub.nonpivots();
        let m = nonpivots.len();
        let mut quot = FpMat::zero(cat.p, m, m);
        for (col, &j) in nonpivots.iter().enumerate() {
            let mut e = vec![0u32; n];
            e[j] = 1;
            let img = nmat.mat_vec(&e);
            let coords = sub.quotient_coords(&img);
            for (row, &c) in coords.iter().enumerate() {
                quot.set(row, col, c);
            }
        }
        let quot_type = jordan_type(&quot);
        *out.entry((class_of(&quot_type), class_of(&sub_type))).or_insert(0) += 1;
    }
    Ok(out)
}

/// The structure constant: invariant subspaces of `I_λ` isomorphic to
/// `I_ν` with quotient `I_μ`.
pub fn hall_number(
    cat: &JordanCat,
    mu: &Partition,
    nu: &Partition,
    lam: &Partition,
) -> Result<u64, RepError> {
    if weight(mu) + weight(nu) != weight(lam) {
        return Ok(0);
    }
    let profile = invariant_profile(cat, lam, weight(nu))?;
    Ok(profile.get(&(class_of(mu), class_of(nu))).copied().unwrap_or(0))
}

/// Morphism-space dimension between the classes `λ` and `μ`:
/// `Σ_{i,j} min(λ_i, μ_j)`.
pub fn hom_dim_partitions(lam: &Partition, mu: &Partition) -> usize {
    lam.iter().map(|&a| mu.iter().map(|&b| a.min(b)).sum::<usize>()).sum()
}

/// Morphism-space dimension computed from actual matrices: solutions of
/// `X·N_λ = N_μ·X`.
pub fn hom_dim_brute(p: u32, lam: &Partition, mu: &Partition) -> usize {
    let a = nilpotent_matrix(p, lam);
    let b = nilpotent_matrix(p, mu);
    let (n, m) = (weight(lam), weight(mu));
    // Unknown X is m×n, flattened row-major; equation X·a - b·X = 0.
    let mut sys = FpMat::zero(p, n * m, n * m);
    for r in 0..m {
        for c in 0..n {
            let eq = r * n + c;
            // (X·a)[r][c] = Σ_k X[r][k]·a[k][c]
            for k in 0..n {
                let coef = a.get(k, c);
                if coef != 0 {
                    let var = r * n + k;
                    sys.set(eq, var, (sys.get(eq, var) + coef) % p);
                }
            }
            // -(b·X)[r][c] = -Σ_k b[r][k]·X[k][c]
            for k in 0..m {
                let coef = b.get(r, k);
                if coef != 0 {
                    let var = k * n + c;
                    sys.set(eq, var, (sys.get(eq, var) + p - coef) % p);
                }
            }
        }
    }
    sys.nullspace().len()
}

/// Automorphism count of the class `λ = (1^{a_1} 2^{a_2} ...)` in closed
/// form: `q^{Σ (min(i,j)-δ_ij)·a_i·a_j} · Π_i |GL(a_i, F_q)|`.
pub fn aut_order_formula_partition(p: u32, lam: &Partition) -> BigInt {
    let q = BigInt::from(p);
    let mults = mult_form(lam);
    let mut exp: u64 = 0;
    for (&i, &ai) in &mults {
        for (&j, &aj) in &mults {
            let min = i.min(j) as u64;
            let delta = u64::from(i == j);
            exp += (min - delta) * (ai as u64) * (aj as u64);
        }
    }
    let mut out = q.pow(exp as u32);
    for (_, &a) in &mults {
        let mut gl = BigInt::one();
        for k in 0..a {
            gl *= q.pow(a as u32) - q.pow(k as u32);
        }
        out *= gl;
    }
    out
}

/// Automorphism count by enumerating the commutant of the block matrix and
/// testing invertibility of every element.
pub fn aut_order_brute_partition(cat: &JordanCat, lam: &Partition) -> Result<BigInt, RepError> {
    let p = cat.p;
    let n = weight(lam);
    let nmat = nilpotent_matrix(p, lam);
    // Basis of the commutant: X·N = N·X.
    let mut sys = FpMat::zero(p, n * n, n * n);
    for r in 0..n {
        for c in 0..n {
            let eq = r * n + c;
            for k in 0..n {
                let coef = nmat.get(k, c);
                if coef != 0 {
                    let var = r * n + k;
                    sys.set(eq, var, (sys.get(eq, var) + coef) % p);
                }
                let coef = nmat.get(r, k);
                if coef != 0 {
                    let var = k * n + c;
                    sys.set(eq, var, (sys.get(eq, var) + p - coef) % p);
                }
            }
        }
    }
    let basis = sys.nullspace();
    let d = basis.len();
    let total = BigInt::from(p).pow(d as u32);
    if total > BigInt::from(cat.caps.ext_enum_count) {
        return Err(RepError::CapExceeded(format!(
            "commutant has {total} elements, beyond the enumeration cap"
        )));
    }
    let total = total.to_u64().unwrap();
    let mut count: u64 = 0;
    for idx in 0..total {
        let mut rem = idx;
        let mut flat = vec![0u32; n * n];
        for b in basis.iter() {
            let c = (rem % p as u64) as u32;
            rem /= p as u64;
            if c != 0 {
                for (slot, &bv) in flat.iter_mut().zip(b.iter()) {
                    *slot = (*slot + c * bv) % p;
                }
            }
        }
        let mat = FpMat::from_flat(p, n, n, &flat.iter().map(|&x| x as i64).collect::<Vec<_>>());
        if mat.rank() == n {
            count += 1;
        }
    }
    Ok(BigInt::from(count))
}

// ==== Symmetric polynomials ====

/// A symmetric (or general) polynomial in a fixed number of variables with
/// mode-aware scalar coefficients.
#[derive(Debug, Clone)]
pub struct SymPoly {
    pub nvars: usize,
    terms: BTreeMap<Vec<u16>, Scalar>,
}

impl SymPoly {
    pub fn zero(nvars: usize) -> Self {
        SymPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(mode: &QMode, nvars: usize, c: Scalar) -> Self {
        let mut s = Self::zero(nvars);
        let _ = mode;
        if !c.is_zero() {
            s.terms.insert(vec![0; nvars], c);
        }
        s
    }

    pub fn one(mode: &QMode, nvars: usize) -> Self {
        Self::constant(mode, nvars, mode.one())
    }

    /// A single monomial with the given exponents.
    pub fn monomial(nvars: usize, exps: Vec<u16>, c: Scalar) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut s = Self::zero(nvars);
        if !c.is_zero() {
            s.terms.insert(exps, c);
        }
        s
    }

    /// The variable `x_i`.
    pub fn var(mode: &QMode, nvars: usize, i: usize) -> Self {
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, mode.one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u16]) -> Option<&Scalar> {
        self.terms.get(exps)
    }

    fn insert_add(&mut self, exps: Vec<u16>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.insert_add(e.clone(), c.mul(s));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_add(e, ca.mul(cb));
            }
        }
        out
    }

    /// Apply the variable permutation `x_i -> x_{sigma[i]}`.
    pub fn permute(&self, sigma: &[usize]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0u16; self.nvars];
            for (i, &x) in e.iter().enumerate() {
                ne[sigma[i]] = x;
            }
            out.insert_add(ne, c.clone());
        }
        out
    }

    /// Exact division by `(x_a - x_b)`, panicking on a nonzero remainder.
    pub fn div_linear(&self, a: usize, b: usize) -> Self {
        // View the polynomial as univariate in x_a with SymPoly coefficients.
        let mut layers: BTreeMap<u16, SymPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let da = e[a];
            let mut rest = e.clone();
            rest[a] = 0;
            layers
                .entry(da)
                .or_insert_with(|| SymPoly::zero(self.nvars))
                .insert_add(rest, c.clone());
        }
        let top = match layers.keys().next_back() {
            None => return Self::zero(self.nvars),
            Some(&d) => d,
        };
        // a_k = q_{k-1} - x_b·q_k, so q_{k-1} = a_k + x_b·q_k from the top.
        let xb = {
            let mut e = vec![0u16; self.nvars];
            e[b] = 1;
            e
        };
        let mut q: BTreeMap<u16, SymPoly> = BTreeMap::new();
        let mut carry = SymPoly::zero(self.nvars); // q_k while descending
        for k in (0..=top).rev() {
            let empty = SymPoly::zero(self.nvars);
            let a_k = layers.get(&k).unwrap_or(&empty);
            let shifted = {
                // x_b · carry
                let mut s = SymPoly::zero(self.nvars);
                for (e, c) in &carry.terms {
                    let ne: Vec<u16> = e.iter().zip(&xb).map(|(x, y)| x + y).collect();
                    s.insert_add(ne, c.clone());
                }
                s
            };
            let q_km1 = a_k.add(&shifted);
            if k == 0 {
                assert!(q_km1.is_zero(), "division by linear factor left a remainder");
            } else {
                q.insert(k - 1, q_km1.clone());
                carry = q_km1;
            }
        }
        let mut out = Self::zero(self.nvars);
        for (k, layer) in q {
            for (e, c) in layer.terms {
                let mut ne = e;
                ne[a] += k;
                out.insert_add(ne, c);
            }
        }
        out
    }
}

/// Elementary symmetric polynomial `e_r` in `nvars` variables.
pub fn elementary_poly(mode: &QMode, nvars: usize, r: usize) -> SymPoly {
    if r > nvars {
        return SymPoly::zero(nvars);
    }
    let mut out = SymPoly::zero(nvars);
    for combo in crate::linalg::combinations(nvars, r) {
        let mut e = vec![0u16; nvars];
        for i in combo {
            e[i] = 1;
        }
        out.insert_add_pub(e, mode.one());
    }
    out
}

/// Complete homogeneous symmetric polynomial `h_r` in `nvars` variables.
pub fn complete_poly(mode: &QMode, nvars: usize, r: usize) -> SymPoly {
    let mut out = SymPoly::zero(nvars);
    fn rec(nvars: usize, pos: usize, left: usize, e: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if pos + 1 == nvars {
            e[pos] = left as u16;
            out.push(e.clone());
            e[pos] = 0;
            return;
        }
        for take in 0..=left {
            e[pos] = take as u16;
            rec(nvars, pos + 1, left - take, e, out);
        }
        e[pos] = 0;
    }
    if nvars == 0 {
        return if r == 0 { SymPoly::one(mode, 0) } else { SymPoly::zero(0) };
    }
    let mut exps = Vec::new();
    rec(nvars, 0, r, &mut vec![0u16; nvars], &mut exps);
    for e in exps {
        out.insert_add_pub(e, mode.one());
    }
    out
}

impl SymPoly {
    fn insert_add_pub(&mut self, exps: Vec<u16>, c: Scalar) {
        self.insert_add(exps, c);
    }
}

/// All permutations of `0..n`, each with the parity sign of its inversion
/// count.
fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(remaining: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, i32)>) {
        if remaining.is_empty() {
            let mut inversions = 0;
            for i in 0..prefix.len() {
                for j in (i + 1)..prefix.len() {
                    if prefix[i] > prefix[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for idx in 0..remaining.len() {
            let x = remaining.remove(idx);
            prefix.push(x);
            rec(remaining, prefix, out);
            prefix.pop();
            remaining.insert(idx, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// The Hall–Littlewood polynomial `P_λ(x_1..x_n; q)` via antisymmetrization:
/// divide `Σ_σ sgn(σ)·σ(x^λ·Π_{i<j}(x_i - q·x_j))` by the Vandermonde
/// determinant, then normalise by `Π_i [m_i]_q!` over all part
/// multiplicities including the number of zero parts.
pub fn hall_littlewood(mode: &QMode, lam: &Partition, nvars: usize) -> SymPoly {
    assert!(lam.len() <= nvars, "partition has more parts than variables");
    // x^λ · Π_{i<j} (x_i - q x_j)
    let mut exps = vec![0u16; nvars];
    for (i, &part) in lam.iter().enumerate() {
        exps[i] = part as u16;
    }
    let mut w = SymPoly::monomial(nvars, exps, mode.one());
    for i in 0..nvars {
        for j in (i + 1)..nvars {
            let factor = SymPoly::var(mode, nvars, i)
                .sub(&SymPoly::var(mode, nvars, j).scale(&mode.q()));
            w = w.mul(&factor);
        }
    }
    // Antisymmetrize.  Alternation kills every monomial with a repeated
    // exponent, and sends a distinct-exponent monomial to the sign-adjusted
    // alternant of its sorted exponent vector, so group coefficients by
    // sorted vector first and expand only the alternants that survive.
    let mut alternants: BTreeMap<Vec<u16>, Scalar> = BTreeMap::new();
    for (e, c) in w.terms() {
        let mut sorted = e.clone();
        sorted.sort_unstable_by(|x, y| y.cmp(x));
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            continue;
        }
        // Parity of the rearrangement taking `e` to its descending sort.
        let mut inversions = 0usize;
        for i in 0..e.len() {
            for j in (i + 1)..e.len() {
                if e[i] < e[j] {
                    inversions += 1;
                }
            }
        }
        let signed = if inversions % 2 == 0 { c.clone() } else { c.neg() };
        match alternants.entry(sorted) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(signed);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&signed);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
    let mut anti = SymPoly::zero(nvars);
    for (sigma, sign) in permutations_with_sign(nvars) {
        for (mu, c) in &alternants {
            let mut ne = vec![0u16; nvars];
            for (i, &x) in mu.iter().enumerate() {
                ne[sigma[i]] = x;
            }
            anti.insert_add(ne, if sign > 0 { c.clone() } else { c.neg() });
        }
    }
    // Divide by the Vandermonde product.
    let mut quot = anti;
    for i in 0..nvars {
        for j in (i + 1)..nvars {
            quot = quot.div_linear(i, j);
        }
    }
    // Normalise by the multiplicity factorials (zero parts included).
    let mut norm = mode.one();
    let mut mults = mult_form(lam);
    let zero_parts = nvars - lam.len();
    if zero_parts > 0 {
        mults.insert(0, zero_parts);
    }
    for (_, m) in mults {
        norm = norm.mul(&qcalc::q_factorial_inv(mode, m as u64));
    }
    quot.scale(&norm)
}

/// The symmetric-function image of the class `λ`: with `q` the residue
/// field size, the class maps to `q^{-n(λ)}·P_λ(x; q^{-1})`.
pub fn phi_of_class(p: u32, lam: &Partition, nvars: usize) -> SymPoly {
    let q_inv = Rational::new(BigInt::one(), BigInt::from(p));
    let mode = QMode::At(q_inv.clone());
    let hl = hall_littlewood(&mode, lam, nvars);
    let mut scale = Rational::one();
    for _ in 0..n_stat(lam) {
        scale *= &q_inv;
    }
    hl.scale(&Scalar::Rat(scale))
}

// ==== Identity checks ====

/// Degree-by-degree: `Σ_λ q^{n(λ)} P_λ(x;q)` times `Σ_r (-1)^r e_r` is 1.
pub fn check_hl_inverse_identity(r_max: usize) -> Result<(), String> {
    let mode = QMode::Symbolic;
    let nvars = r_max;
    let mut p_sums: Vec<SymPoly> = Vec::new(); // degree k -> Σ_{λ⊢k} q^{n(λ)} P_λ
    for k in 0..=r_max {
        let mut acc = SymPoly::zero(nvars);
        for lam in partitions_of(k) {
            if lam.len() > nvars {
                continue;
            }
            let coeff = mode.q_pow(n_stat(&lam) as i64);
            acc = acc.add(&hall_littlewood(&mode, &lam, nvars).scale(&coeff));
        }
        if k == 0 {
            acc = SymPoly::one(&mode, nvars);
        }
        p_sums.push(acc);
    }
    for r in 1..=r_max {
        let mut total = SymPoly::zero(nvars);
        for s in 0..=r {
            let e = elementary_poly(&mode, nvars, s);
            let signed = if s % 2 == 0 { e } else { e.neg() };
            total = total.add(&p_sums[r - s].mul(&signed));
        }
        if !total.is_zero() {
            return Err(format!("degree {r} component does not cancel"));
        }
    }
    Ok(())
}

/// `Σ_{λ⊢r} q^{n(λ)} P_λ(x;q) = h_r` for each `r` up to the bound.
pub fn check_hl_complete_identity(r_max: usize) -> Result<(), String> {
    let mode = QMode::Symbolic;
    let nvars = r_max;
    for r in 1..=r_max {
        let mut acc = SymPoly::zero(nvars);
        for lam in partitions_of(r) {
            if lam.len() > nvars {
                continue;
            }
            let coeff = mode.q_pow(n_stat(&lam) as i64);
            acc = acc.add(&hall_littlewood(&mode, &lam, nvars).scale(&coeff));
        }
        if !acc.sub(&complete_poly(&mode, nvars, r)).is_zero() {
            return Err(format!("degree {r} sum differs from the complete polynomial"));
        }
    }
    Ok(())
}

/// `P_(1^r) = e_r` for each `r` up to the bound (symbolically).
pub fn check_hl_alternating(r_max: usize) -> Result<(), String> {
    let mode = QMode::Symbolic;
    let nvars = r_max.max(1);
    for r in 1..=r_max {
        let lam: Partition = vec![1; r];
        let p = hall_littlewood(&mode, &lam, nvars);
        if !p.sub(&elementary_poly(&mode, nvars, r)).is_zero() {
            return Err(format!("single-column class at weight {r} is not elementary"));
        }
    }
    Ok(())
}

/// The class map turns products into products: for every pair of classes
/// with combined weight at most `total`, the image of `[I_μ][I_ν]` matches
/// `Φ(μ)·Φ(ν)`.
pub fn check_phi_multiplicative(p: u32, total: usize) -> Result<(), String> {
    let cat = JordanCat::new(p, total);
    for wa in 0..=total {
        for wb in 0..=(total - wa) {
            for mu in partitions_of(wa) {
                for nu in partitions_of(wb) {
                    let nvars = (wa + wb).max(1);
                    let lhs = phi_of_class(p, &mu, nvars).mul(&phi_of_class(p, &nu, nvars));
                    let mut rhs = SymPoly::zero(nvars);
                    for lam in partitions_of(wa + wb) {
                        let f = hall_number(&cat, &mu, &nu, &lam)
                            .map_err(|e| format!("structure constant failed: {e}"))?;
                        if f != 0 {
                            let img = phi_of_class(p, &lam, nvars);
                            rhs = rhs.add(&img.scale(&Scalar::Rat(Rational::from(
                                BigInt::from(f),
                            ))));
                        }
                    }
                    if !lhs.sub(&rhs).is_zero() {
                        return Err(format!("pair {mu:?}, {nu:?} fails at p={p}"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Closed-form automorphism counts match brute-force enumeration.
pub fn check_aut_formula(p: u32, max_weight: usize) -> Result<(), String> {
    let cat = JordanCat::new(p, max_weight);
    for w in 1..=max_weight {
        for lam in partitions_of(w) {
            let formula = aut_order_formula_partition(p, &lam);
            let brute = aut_order_brute_partition(&cat, &lam)
                .map_err(|e| format!("brute enumeration failed for {lam:?}: {e}"))?;
            if formula != brute {
                return Err(format!("class {lam:?} at p={p}: {formula} vs {brute}"));
            }
        }
    }
    Ok(())
}

/// The weighted generating series of all classes times the alternating
/// single-column series telescopes to 1:
/// `(Σ_r t^r Σ_{λ⊢r} a_λ(q)^{-1}) · (Σ_s (-1)^s q^{s(s-1)/2} t^s / |GL_s|) = 1`.
pub fn check_gl_series(max_deg: usize) -> Result<(), String> {
    let mode = QMode::Symbolic;
    let mut left = QSeries::zero(&mode, max_deg);
    let mut lcoeffs = Vec::new();
    for r in 0..=max_deg {
        let mut acc = mode.zero();
        for lam in partitions_of(r) {
            acc = acc.add(&aut_order_inv_symbolic(&lam)?);
        }
        if r == 0 {
            acc = mode.one();
        }
        lcoeffs.push(acc);
    }
    left = left.add(&QSeries::from_coeffs(&mode, lcoeffs));
    let mut rcoeffs = Vec::new();
    for s in 0..=max_deg {
        let sign = if s % 2 == 0 { mode.one() } else { mode.one().neg() };
        let tri = mode.q_pow((s as i64) * (s as i64 - 1) / 2);
        let gl_inv = qcalc::gl_order_inv(&mode, s as u64);
        rcoeffs.push(sign.mul(&tri).mul(&gl_inv));
    }
    let right = QSeries::from_coeffs(&mode, rcoeffs);
    let product = left.mul(&right);
    let one = QSeries::one(&mode, max_deg);
    if !product.sub(&one).is_zero() {
        return Err("series product is not 1".into());
    }
    // Cross-form: per degree, Σ_{s} (Π_{j≤s} (1-q^j)^{-1}) Σ_{λ⊢r-s} a_λ^{-1} = 0.
    for r in 1..=max_deg {
        let mut acc = mode.zero();
        for s in 0..=r {
            let mut factor = mode.one();
            for j in 1..=s {
                let term = mode.one().sub(&mode.q_pow(j as i64));
                factor = factor.mul(
                    &term.inv().map_err(|e| format!("inverting 1-q^{j}: {e}"))?,
                );
            }
            let mut tail = mode.zero();
            for lam in partitions_of(r - s) {
                tail = tail.add(&aut_order_inv_symbolic(&lam)?);
            }
            if r == s {
                tail = mode.one();
            }
            acc = acc.add(&factor.mul(&tail));
        }
        if !acc.is_zero() {
            return Err(format!("per-degree form fails at degree {r}"));
        }
    }
    Ok(())
}

/// `a_λ(q)^{-1}` as a symbolic scalar with cyclotomic denominator.
fn aut_order_inv_symbolic(lam: &Partition) -> Result<Scalar, String> {
    let mode = QMode::Symbolic;
    let mults = mult_form(lam);
    let mut exp: i64 = 0;
    for (&i, &ai) in &mults {
        for (&j, &aj) in &mults {
            let min = i.min(j) as i64;
            let delta = i64::from(i == j);
            exp += (min - delta) * (ai as i64) * (aj as i64);
        }
    }
    let mut out = mode.q_pow(-exp);
    for (_, &a) in &mults {
        out = out.mul(&qcalc::gl_order_inv(&mode, a as u64));
    }
    Ok(out)
}
