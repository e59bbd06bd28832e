//! Dense linear algebra over prime fields and over the rationals.
//!
//! Provides exactly what the representation-theoretic layers need:
//! matrix arithmetic and rank/nullspace computations over `𝔽_p`, reduced
//! row-echelon subspaces with membership and quotient coordinates, an
//! enumerator for all subspaces of `𝔽_p^n`, and small exact Gaussian
//! elimination over arbitrary-precision rationals.

use crate::scalar::Rational;
use num::{One, Zero};

// =========================== 𝔽_p arithmetic ===========================

/// Inverse of `a` modulo the prime `p` (extended Euclid); `a` must be nonzero mod `p`.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    let a = (a % p) as i64;
    assert!(a != 0, "zero has no inverse mod {}", p);
    let (mut old_r, mut r) = (a, p as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "{} is not invertible mod {}", a, p);
    old_s.rem_euclid(p as i64) as u32
}

/// A dense row-major matrix over `𝔽_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMat {
    /// The prime modulus.
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl FpMat {
    /// The zero `rows × cols` matrix.
    pub fn zero(p: u32, rows: usize, cols: usize) -> Self {
        FpMat { p, rows, cols, data: vec![0; rows * cols] }
    }

    /// The identity matrix of size `n`.
    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows, reducing entries mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut m = Self::zero(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Builds a matrix from a flat row-major slice of integers (reduced mod `p`).
    pub fn from_flat(p: u32, rows: usize, cols: usize, flat: &[i64]) -> Self {
        assert_eq!(flat.len(), rows * cols, "flat data has wrong length");
        let mut m = Self::zero(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = flat[i * cols + j].rem_euclid(p as i64) as u32;
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    /// A row as a slice.
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Matrix sum.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.p, self.rows, self.cols), (other.p, other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a + b) % self.p)
            .collect();
        FpMat { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    /// Matrix difference.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.p, self.rows, self.cols), (other.p, other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a + self.p - b) % self.p)
            .collect();
        FpMat { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (out.get(i, j) + a * other.get(k, j)) % self.p;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn mat_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc += (self.get(i, j) as u64) * (v[j] as u64);
                }
                (acc % self.p as u64) as u32
            })
            .collect()
    }

    /// In-place reduction to reduced row-echelon form; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Find a pivot in column c at or below row r.
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    let (a, b) = (self.get(r, j), self.get(pr, j));
                    self.set(r, j, b);
                    self.set(pr, j, a);
                }
            }
            let inv = inv_mod(self.get(r, c), self.p);
            for j in 0..self.cols {
                let v = (self.get(r, j) as u64 * inv as u64 % self.p as u64) as u32;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) != 0 {
                    let f = self.get(i, c);
                    for j in 0..self.cols {
                        let v = (self.get(i, j) as u64 + (self.p - f) as u64 * self.get(r, j) as u64)
                            % self.p as u64;
                        self.set(i, j, v as u32);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank via Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// A basis of the right nullspace `{v : self·v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (c, pr) in pivot_set.iter().enumerate() {
                if let Some(r) = pr {
                    // pivot column c: value = -m[r][free]
                    v[c] = (self.p - m.get(*r, free)) % self.p;
                }
            }
            basis.push(v);
        }
        basis
    }
}

// =========================== Subspaces ===========================

/// A subspace of `𝔽_p^n`, stored as its unique reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    /// `dim × n` matrix whose rows are the RREF basis.
    pub mat: FpMat,
    /// Pivot column of each basis row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Subspace {
    /// The zero subspace of `𝔽_p^n`.
    pub fn zero(p: u32, n: usize) -> Self {
        Subspace { mat: FpMat::zero(p, 0, n), pivots: Vec::new() }
    }

    /// The full space `𝔽_p^n`.
    pub fn full(p: u32, n: usize) -> Self {
        Subspace { mat: FpMat::identity(p, n), pivots: (0..n).collect() }
    }

    /// The span of the given vectors.
    pub fn span(p: u32, vectors: &[Vec<u32>], n: usize) -> Self {
        if vectors.is_empty() {
            return Self::zero(p, n);
        }
        let mut m = FpMat::from_rows(p, vectors);
        let pivots = m.rref_in_place();
        let dim = pivots.len();
        let mut basis = FpMat::zero(p, dim, n);
        for i in 0..dim {
            for j in 0..n {
                basis.set(i, j, m.get(i, j));
            }
        }
        Subspace { mat: basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.mat.cols
    }

    /// Subtracts the projection onto the subspace: the returned vector has
    /// zeros in all pivot coordinates, and is zero iff `v` lies in the subspace.
    pub fn reduce_vector(&self, v: &[u32]) -> Vec<u32> {
        let p = self.mat.p;
        let mut v = v.to_vec();
        for (r, &c) in self.pivots.iter().enumerate() {
            let f = v[c] % p;
            if f != 0 {
                for j in 0..self.mat.cols {
                    v[j] = (v[j] + (p - f) * self.mat.get(r, j)) % p;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce_vector(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the RREF basis, if `v` lies in the subspace.
    pub fn coords_of(&self, v: &[u32]) -> Option<Vec<u32>> {
        let coords: Vec<u32> = self.pivots.iter().map(|&c| v[c] % self.mat.p).collect();
        if self.contains(v) {
            Some(coords)
        } else {
            None
        }
    }

    /// The non-pivot columns, indexing a basis of the quotient space.
    pub fn nonpivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.mat.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.mat.cols).filter(|&j| !is_pivot[j]).collect()
    }

    /// Coordinates of the class of `v` in the quotient, with respect to the
    /// images of the non-pivot standard basis vectors.
    pub fn quotient_coords(&self, v: &[u32]) -> Vec<u32> {
        let reduced = self.reduce_vector(v);
        self.nonpivots().iter().map(|&j| reduced[j]).collect()
    }
}

/// All `k`-subsets of `{0, …, n−1}` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Enumerates every `k`-dimensional subspace of `𝔽_p^n` exactly once via its
/// reduced row-echelon basis: choose pivot columns, then all values for the
/// free entries (entries right of the pivot in non-pivot columns).
pub fn enumerate_subspaces(p: u32, n: usize, k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(Subspace::zero(p, n));
        return out;
    }
    for pivots in combinations(n, k) {
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        // Free positions: (row, col) with col > pivot[row] and col not a pivot.
        let mut free_positions = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..n {
                if !is_pivot[c] {
                    free_positions.push((r, c));
                }
            }
        }
        let total = free_positions.len();
        let mut values = vec![0u32; total];
        loop {
            let mut mat = FpMat::zero(p, k, n);
            for (r, &pc) in pivots.iter().enumerate() {
                mat.set(r, pc, 1);
            }
            for (idx, &(r, c)) in free_positions.iter().enumerate() {
                mat.set(r, c, values[idx]);
            }
            out.push(Subspace { mat, pivots: pivots.clone() });
            // Odometer increment over 𝔽_p^total.
            let mut i = 0;
            while i < total {
                values[i] += 1;
                if values[i] < p {
                    break;
                }
                values[i] = 0;
                i += 1;
            }
            if i == total {
                break;
            }
        }
    }
    out
}

/// Enumerates all subspaces of `𝔽_p^n` of every dimension.
pub fn enumerate_all_subspaces(p: u32, n: usize) -> Vec<Subspace> {
    (0..=n).flat_map(|k| enumerate_subspaces(p, n, k)).collect()
}

// =========================== Rational matrices ===========================

/// A dense row-major matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl RatMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Builds from integer entries, row-major.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            &rows
                .iter()
                .map(|row| row.iter().map(|&v| crate::scalar::rat(v)).collect())
                .collect::<Vec<_>>(),
        )
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k).clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + &a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..self.cols {
                    acc += self.get(i, j) * &v[j];
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// In-place reduced row-echelon form; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    let (a, b) = (self.get(r, j).clone(), self.get(pr, j).clone());
                    self.set(r, j, b);
                    self.set(pr, j, a);
                }
            }
            let inv = Rational::one() / self.get(r, c);
            for j in 0..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let f = self.get(i, c).clone();
                    for j in 0..self.cols {
                        let v = self.get(i, j) - &f * self.get(r, j);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Solves `self · x = b` when the solution exists and is unique.
    pub fn solve_unique(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref_in_place();
        // Inconsistent if a pivot lands in the augmented column.
        if pivots.contains(&self.cols) {
            return None;
        }
        // Unique only if every variable column has a pivot.
        if pivots.len() != self.cols {
            return None;
        }
        Some((0..self.cols).map(|i| aug.get(i, self.cols).clone()).collect())
    }

    /// Matrix inverse, if the matrix is square and nonsingular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        let mut aug = Self::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut out = Self::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(out)
    }
}

// =============================== Tests ===============================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn modular_inverses() {
        for &p in &[2u32, 3, 5, 7, 11, 13] {
            for a in 1..p {
                assert_eq!(a * inv_mod(a, p) % p, 1, "a={} p={}", a, p);
            }
        }
    }

    #[test]
    fn matrix_product_example() {
        let a = FpMat::from_rows(5, &[vec![1, 2], vec![3, 4]]);
        let b = FpMat::from_rows(5, &[vec![0, 1], vec![1, 1]]);
        // [[1,2],[3,4]]·[[0,1],[1,1]] = [[2,3],[4,7]] ≡ [[2,3],[4,2]] mod 5
        assert_eq!(a.mul(&b), FpMat::from_rows(5, &[vec![2, 3], vec![4, 2]]));
    }

    #[test]
    fn rank_and_nullspace() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &p in &[2u32, 3, 5] {
            for _ in 0..50 {
                let rows = rng.gen_range(1..5);
                let cols = rng.gen_range(1..5);
                let data: Vec<Vec<u32>> = (0..rows)
                    .map(|_| (0..cols).map(|_| rng.gen_range(0..p)).collect())
                    .collect();
                let m = FpMat::from_rows(p, &data);
                let ns = m.nullspace();
                assert_eq!(m.rank() + ns.len(), cols, "rank-nullity");
                for v in &ns {
                    assert!(m.mat_vec(v).iter().all(|&x| x == 0), "nullspace vector");
                }
            }
        }
    }

    /// Independent Gaussian-count oracle: number of k-subspaces of 𝔽_p^n,
    /// via the integer product formula ∏ (p^{n−i}−1)/(p^{k−i}−1).
    fn subspace_count_oracle(p: u64, n: u32, k: u32) -> u64 {
        if k > n {
            return 0;
        }
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..k {
            num *= (p.pow(n - i) - 1) as u128;
            den *= (p.pow(k - i) - 1) as u128;
        }
        assert_eq!(num % den, 0);
        (num / den) as u64
    }

    #[test]
    fn subspace_enumeration_matches_gaussian_count() {
        for &p in &[2u32, 3] {
            for n in 0..=5usize {
                for k in 0..=n {
                    let subs = enumerate_subspaces(p, n, k);
                    assert_eq!(
                        subs.len() as u64,
                        subspace_count_oracle(p as u64, n as u32, k as u32),
                        "p={} n={} k={}",
                        p,
                        n,
                        k
                    );
                    // All distinct (RREF is a canonical form).
                    let mut seen = std::collections::HashSet::new();
                    for s in &subs {
                        assert_eq!(s.dim(), k);
                        assert!(seen.insert(s.mat.clone()), "duplicate subspace");
                    }
                }
            }
        }
    }

    #[test]
    fn subspace_membership_and_quotient() {
        // U = span{(1,0,1), (0,1,1)} in 𝔽_2³.
        let u = Subspace::span(2, &[vec![1, 0, 1], vec![0, 1, 1]], 3);
        assert_eq!(u.dim(), 2);
        assert!(u.contains(&[1, 1, 0]));
        assert!(!u.contains(&[1, 0, 0]));
        assert_eq!(u.coords_of(&[1, 1, 0]), Some(vec![1, 1]));
        assert_eq!(u.nonpivots(), vec![2]);
        // Quotient is one-dimensional; (0,0,1) maps to the basis class.
        assert_eq!(u.quotient_coords(&[0, 0, 1]), vec![1]);
        assert_eq!(u.quotient_coords(&[1, 0, 0]), vec![1]); // (1,0,0) ≡ (0,0,1) mod U
        assert_eq!(u.quotient_coords(&[1, 1, 0]), vec![0]);
    }

    #[test]
    fn span_reduces_redundant_generators() {
        let u = Subspace::span(3, &[vec![1, 2, 0], vec![2, 4, 0], vec![0, 0, 1]], 3);
        assert_eq!(u.dim(), 2);
        assert!(u.contains(&[1, 2, 0]));
    }

    #[test]
    fn combinations_are_complete_and_ordered() {
        let c = combinations(5, 3);
        assert_eq!(c.len(), 10);
        assert_eq!(c[0], vec![0, 1, 2]);
        assert_eq!(c[9], vec![2, 3, 4]);
        let c0 = combinations(4, 0);
        assert_eq!(c0, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn rational_inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let n = rng.gen_range(1..5usize);
            let m = RatMat::from_int_rows(
                &(0..n)
                    .map(|_| (0..n).map(|_| rng.gen_range(-5..=5i64)).collect())
                    .collect::<Vec<_>>(),
            );
            match m.inverse() {
                Some(inv) => assert_eq!(m.mul(&inv), RatMat::identity(n)),
                None => assert!(m.rank() < n),
            }
        }
    }

    #[test]
    fn rational_solve_unique() {
        let a = RatMat::from_int_rows(&[vec![2, 1], vec![1, 3]]);
        let b = vec![rat(5), rat(10)];
        let x = a.solve_unique(&b).unwrap();
        assert_eq!(a.mat_vec(&x), b);
        assert_eq!(x, vec![rat(1), rat(3)]);
        // Singular system with no unique solution.
        let s = RatMat::from_int_rows(&[vec![1, 1], vec![2, 2]]);
        assert!(s.solve_unique(&[rat(1), rat(3)]).is_none());
    }
}
