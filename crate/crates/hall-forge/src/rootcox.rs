//! Grade-lattice combinatorics: the integral bilinear form of a scenario,
//! its Coxeter transformation, the orbits that sweep out projective and
//! injective grades, and rank-2 recursions in Chebyshev-style closed form.
//!
//! Everything here lives in the Grothendieck lattice `Z^r` with the basis of
//! simple grades ordered so that the form matrix is upper triangular.  The
//! representation engine is used only in tests, to compare predicted
//! morphism-space dimensions against ones computed from actual matrices.

use crate::linalg::RatMat;
use crate::repfield::QuiverSpec;
use num::rational::Ratio;
use num::{BigInt, ToPrimitive};
use std::collections::BTreeSet;

/// Small dense integer matrix as rows.
type IMat = Vec<Vec<i64>>;

fn imat_apply(m: &IMat, v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn imat_from_rat(m: &RatMat) -> Option<IMat> {
    let mut out = vec![vec![0i64; m.cols]; m.rows];
    for i in 0..m.rows {
        for j in 0..m.cols {
            let x = m.get(i, j);
            if !x.is_integer() {
                return None;
            }
            out[i][j] = x.to_integer().to_i64()?;
        }
    }
    Some(out)
}

fn rat_from_imat(m: &IMat) -> RatMat {
    RatMat::from_int_rows(&m.iter().map(|r| r.clone()).collect::<Vec<_>>())
}

/// Is `v` a nonzero vector with all coordinates nonnegative?
pub fn in_positive_cone(v: &[i64]) -> bool {
    v.iter().all(|&x| x >= 0) && v.iter().any(|&x| x > 0)
}

/// One point of a Coxeter orbit: which simple it started from (0-based),
/// how many steps were taken, and the grade reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPoint {
    pub simple: usize,
    pub depth: usize,
    pub grade: Vec<i64>,
}

/// The two families of orbit points and whether each walk terminated (every
/// orbit left the positive cone) before the depth cap.
#[derive(Debug, Clone)]
pub struct GammaOrbits {
    pub minus: Vec<OrbitPoint>,
    pub plus: Vec<OrbitPoint>,
    pub minus_complete: bool,
    pub plus_complete: bool,
}

impl GammaOrbits {
    /// Grades reached by the downward (projective-side) walk.
    pub fn minus_grades(&self) -> BTreeSet<Vec<i64>> {
        self.minus.iter().map(|p| p.grade.clone()).collect()
    }

    /// Grades reached by the upward (injective-side) walk.
    pub fn plus_grades(&self) -> BTreeSet<Vec<i64>> {
        self.plus.iter().map(|p| p.grade.clone()).collect()
    }

    /// Projective-side points in the product order: shallow orbits first,
    /// and at equal depth the later simple first.
    pub fn ordered_minus(&self) -> Vec<OrbitPoint> {
        let mut v = self.minus.clone();
        v.sort_by(|a, b| a.depth.cmp(&b.depth).then(b.simple.cmp(&a.simple)));
        v
    }

    /// Injective-side points in the product order: deep orbits first, and at
    /// equal depth the later simple first.  Meaningful once the walk is
    /// complete.
    pub fn ordered_plus(&self) -> Vec<OrbitPoint> {
        let mut v = self.plus.clone();
        v.sort_by(|a, b| b.depth.cmp(&a.depth).then(b.simple.cmp(&a.simple)));
        v
    }
}

/// The integral bilinear form of a finitary scenario together with the
/// derived data: the diagonal `d_i = (e_i, e_i)`, the Coxeter transformation
/// `c` and its inverse, and the distinguished grade vectors `g^-_i` and
/// `g^+_i` characterised by `(g^-_i, e_j) = d_i δ_ij = (e_j, g^+_i)`.
#[derive(Debug, Clone)]
pub struct EulerLattice {
    pub rank: usize,
    pub form: IMat,
    pub d: Vec<i64>,
    pub cox: IMat,
    pub cox_inv: IMat,
    pub gamma_minus: Vec<Vec<i64>>,
    pub gamma_plus: Vec<Vec<i64>>,
}

impl EulerLattice {
    /// Build the lattice data from an upper-triangular form matrix.
    ///
    /// Panics if the matrix is not square upper triangular with positive
    /// diagonal, or if the derived vectors fail to be integral.
    pub fn from_form(form: IMat) -> Self {
        let rank = form.len();
        assert!(rank > 0, "empty form");
        for (i, row) in form.iter().enumerate() {
            assert_eq!(row.len(), rank, "form matrix must be square");
            assert!(row[i] > 0, "diagonal entries must be positive");
            for (j, &x) in row.iter().enumerate() {
                assert!(j >= i || x == 0, "form matrix must be upper triangular");
            }
        }
        let d: Vec<i64> = (0..rank).map(|i| form[i][i]).collect();
        let c = rat_from_imat(&form);
        let ct = c.transpose();
        let c_inv = c.inverse().expect("form matrix is invertible");
        let ct_inv = ct.inverse().expect("transposed form matrix is invertible");
        // Scale columns of the inverses by the diagonal to get the
        // distinguished vectors, and assemble the Coxeter matrices.
        let mut gamma_minus = Vec::with_capacity(rank);
        let mut gamma_plus = Vec::with_capacity(rank);
        for i in 0..rank {
            let gm: Vec<Ratio<BigInt>> =
                (0..rank).map(|k| ct_inv.get(k, i) * Ratio::from_integer(BigInt::from(d[i]))).collect();
            let gp: Vec<Ratio<BigInt>> =
                (0..rank).map(|k| c_inv.get(k, i) * Ratio::from_integer(BigInt::from(d[i]))).collect();
            let to_int = |v: Vec<Ratio<BigInt>>| -> Vec<i64> {
                v.into_iter()
                    .map(|x| {
                        assert!(x.is_integer(), "distinguished grade vector is not integral");
                        x.to_integer().to_i64().expect("grade entry overflows i64")
                    })
                    .collect()
            };
            gamma_minus.push(to_int(gm));
            gamma_plus.push(to_int(gp));
        }
        let neg = |m: RatMat| -> IMat {
            let mut rows = Vec::with_capacity(m.rows);
            for i in 0..m.rows {
                rows.push((0..m.cols).map(|j| -m.get(i, j)).collect::<Vec<Ratio<BigInt>>>());
            }
            let m = RatMat::from_rows(&rows);
            imat_from_rat(&m).expect("Coxeter matrix is integral")
        };
        let cox = neg(c_inv.mul(&ct));
        let cox_inv = neg(ct_inv.mul(&c));
        EulerLattice { rank, form, d, cox, cox_inv, gamma_minus, gamma_plus }
    }

    /// Build from a quiver: the form matrix on simple grades.
    pub fn from_quiver(spec: &QuiverSpec) -> Self {
        assert!(spec.is_hereditary(), "lattice combinatorics needs a relation-free quiver");
        let n = spec.n_vertices();
        let mut form = vec![vec![0i64; n]; n];
        for (i, row) in form.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let a: Vec<i64> = (0..n).map(|k| i64::from(k == i)).collect();
                let b: Vec<i64> = (0..n).map(|k| i64::from(k == j)).collect();
                *x = spec.euler_form(&a, &b);
            }
        }
        Self::from_form(form)
    }

    /// The rank-2 lattice with weights `(a0, a1)` and symmetrisers
    /// `(d0, d1)`, requiring `a0·d0 = a1·d1`.  Basis order puts the source
    /// simple first: coordinates are `(coefficient of e1, coefficient of e0)`.
    pub fn rank2(a0: i64, a1: i64, d0: i64, d1: i64) -> Self {
        assert!(a0 > 0 && a1 > 0 && d0 > 0 && d1 > 0);
        assert_eq!(a0 * d0, a1 * d1, "weights must symmetrise the form");
        Self::from_form(vec![vec![d1, -a0 * d0], vec![0, d0]])
    }

    /// Rank-2 with the minimal symmetriser for the given weights.
    pub fn rank2_minimal(a0: i64, a1: i64) -> Self {
        let g = gcd(a0, a1);
        Self::rank2(a0, a1, a1 / g, a0 / g)
    }

    /// The bilinear pairing `u^T · form · v`.
    pub fn pair(&self, u: &[i64], v: &[i64]) -> i64 {
        let mut acc = 0i64;
        for (i, &ui) in u.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                acc += ui * self.form[i][j] * vj;
            }
        }
        acc
    }

    /// Apply the Coxeter transformation `k` times (negative `k` uses the
    /// inverse).
    pub fn cox_pow(&self, k: i64, v: &[i64]) -> Vec<i64> {
        let m = if k >= 0 { &self.cox } else { &self.cox_inv };
        let mut out = v.to_vec();
        for _ in 0..k.unsigned_abs() {
            out = imat_apply(m, &out);
        }
        out
    }

    /// Walk every orbit on both sides until it leaves the positive cone or
    /// hits the depth cap.
    pub fn gamma_orbits(&self, depth_cap: usize) -> GammaOrbits {
        let mut minus = Vec::new();
        let mut plus = Vec::new();
        let mut minus_complete = true;
        let mut plus_complete = true;
        for i in 0..self.rank {
            let mut v = self.gamma_minus[i].clone();
            let mut k = 0usize;
            while in_positive_cone(&v) {
                if k > depth_cap {
                    minus_complete = false;
                    break;
                }
                minus.push(OrbitPoint { simple: i, depth: k, grade: v.clone() });
                v = imat_apply(&self.cox_inv, &v);
                k += 1;
            }
            let mut v = self.gamma_plus[i].clone();
            let mut k = 0usize;
            while in_positive_cone(&v) {
                if k > depth_cap {
                    plus_complete = false;
                    break;
                }
                plus.push(OrbitPoint { simple: i, depth: k, grade: v.clone() });
                v = imat_apply(&self.cox, &v);
                k += 1;
            }
        }
        GammaOrbits { minus, plus, minus_complete, plus_complete }
    }

    /// Predicted morphism-space dimension between two projective-side orbit
    /// objects, `(g^-_i, c^{k-r}(g^-_j))`, defined for `r >= k`.
    pub fn orbit_hom(&self, i: usize, k: usize, j: usize, r: usize) -> Option<i64> {
        if r < k {
            return None;
        }
        let moved = self.cox_pow(k as i64 - r as i64, &self.gamma_minus[j]);
        Some(self.pair(&self.gamma_minus[i], &moved))
    }

    /// Predicted extension-space dimension from the `(j, r)` orbit object to
    /// the `(i, k)` one, `(g^-_i, c^{k+1-r}(g^-_j))`, defined for `r > k`.
    pub fn orbit_ext(&self, j: usize, r: usize, i: usize, k: usize) -> Option<i64> {
        if r <= k {
            return None;
        }
        let moved = self.cox_pow(k as i64 + 1 - r as i64, &self.gamma_minus[j]);
        Some(self.pair(&self.gamma_minus[i], &moved))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

// ==== Rank-2 recursions ====

/// `lambda_n(t)` from the three-term recursion `f_{n+1} = (t-2)f_n - f_{n-1}`
/// with seeds `lambda_0 = 0`, `lambda_1 = 1`, extended to negative indices by
/// running the recursion backwards.
pub fn lambda_poly(t: i64, n: i64) -> i64 {
    three_term(t, 0, 1, n)
}

/// `mu_n(t)` from the same recursion with seeds `mu_0 = 1`, `mu_1 = t - 1`.
pub fn mu_poly(t: i64, n: i64) -> i64 {
    three_term(t, 1, t - 1, n)
}

fn three_term(t: i64, f0: i64, f1: i64, n: i64) -> i64 {
    if n == 0 {
        return f0;
    }
    let (mut a, mut b) = (f0, f1);
    if n > 0 {
        for _ in 1..n {
            let c = (t - 2) * b - a;
            a = b;
            b = c;
        }
        b
    } else {
        // f_{k-1} = (t-2) f_k - f_{k+1}
        let mut k = 0i64;
        while k > n {
            let c = (t - 2) * a - b;
            b = a;
            a = c;
            k -= 1;
        }
        a
    }
}

/// The rank-2 grade sequence by its recursion `b_{r+1} = a_r·b_r - b_{r-1}`
/// (with `a_r` depending on the parity of `r`), seeded by `b_0 = e0` and
/// `b_{-1} = -e1`.  Coordinates are `(coefficient of e1, coefficient of e0)`.
pub fn beta_recursive(a0: i64, a1: i64, r: i64) -> [i64; 2] {
    let a = |k: i64| if k.rem_euclid(2) == 0 { a0 } else { a1 };
    if r == 0 {
        return [0, 1];
    }
    if r == -1 {
        return [-1, 0];
    }
    let (mut prev, mut cur) = ([-1i64, 0], [0i64, 1]);
    if r > 0 {
        // prev = b_{k-1}, cur = b_k starting at k = 0
        let mut k = 0i64;
        while k < r {
            let next = [a(k) * cur[0] - prev[0], a(k) * cur[1] - prev[1]];
            prev = cur;
            cur = next;
            k += 1;
        }
        cur
    } else {
        // prev = b_{k-1} and cur = b_k; one step back gives
        // b_{k-2} = a_{k-1}·b_{k-1} - b_k.
        let mut k = 0i64;
        while k > r + 1 {
            let before = [a(k - 1) * prev[0] - cur[0], a(k - 1) * prev[1] - cur[1]];
            cur = prev;
            prev = before;
            k -= 1;
        }
        prev
    }
}

/// The same sequence in closed form through the three-term polynomials:
/// `b_r = a_{r+1}·lambda_{floor((r+1)/2)}(a0·a1)·e_{r+1} + mu_{floor(r/2)}(a0·a1)·e_r`
/// with indices read modulo 2.
pub fn beta_closed(a0: i64, a1: i64, r: i64) -> [i64; 2] {
    let t = a0 * a1;
    let a = |k: i64| if k.rem_euclid(2) == 0 { a0 } else { a1 };
    let e = |k: i64| -> [i64; 2] {
        if k.rem_euclid(2) == 0 { [0, 1] } else { [1, 0] }
    };
    let floor_div2 = |x: i64| x.div_euclid(2);
    let l = lambda_poly(t, floor_div2(r + 1));
    let m = mu_poly(t, floor_div2(r));
    let ea = e(r + 1);
    let eb = e(r);
    [a(r + 1) * l * ea[0] + m * eb[0], a(r + 1) * l * ea[1] + m * eb[1]]
}

/// Predicted morphism-space dimension between rank-2 projective-side objects
/// `P_r` and `P_s` (`r <= s`), in units of the endomorphism field of `P_r`.
pub fn rank2_hom_pp(a0: i64, a1: i64, r: i64, s: i64) -> Option<i64> {
    if r > s || r < 0 {
        return None;
    }
    let t = a0 * a1;
    let a = |k: i64| if k.rem_euclid(2) == 0 { a0 } else { a1 };
    if (s - r) % 2 == 0 {
        Some(mu_poly(t, (s - r) / 2))
    } else {
        Some(a(r) * lambda_poly(t, (s + 1 - r) / 2))
    }
}

/// Predicted extension-space dimension from `P_s` back to `P_r` (`r <= s`),
/// in units of the endomorphism field of `P_r`.  Same-index pairs are rigid.
pub fn rank2_ext_pp(a0: i64, a1: i64, s: i64, r: i64) -> Option<i64> {
    if r > s || r < 0 {
        return None;
    }
    if r == s {
        return Some(0);
    }
    let t = a0 * a1;
    let a = |k: i64| if k.rem_euclid(2) == 0 { a0 } else { a1 };
    if (s - r) % 2 == 0 {
        Some(mu_poly(t, (s - r) / 2 - 1))
    } else {
        Some(a(r) * lambda_poly(t, (s - r - 1) / 2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repfield::fixtures;
    use crate::repfield::{ext_dim, hom_dim};

    #[test]
    fn two_vertex_lattice_has_expected_vectors() {
        let scn = fixtures::a2(2);
        let lat = EulerLattice::from_quiver(&scn.spec);
        // Basis order (e1, e0); arrow source first.
        assert_eq!(lat.form, vec![vec![1, -1], vec![0, 1]]);
        assert_eq!(lat.gamma_minus, vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(lat.gamma_plus, vec![vec![1, 0], vec![1, 1]]);
        // The Coxeter transformation sends each projective grade to minus
        // the matching injective grade.
        for i in 0..2 {
            let img = imat_apply(&lat.cox, &lat.gamma_minus[i]);
            let expect: Vec<i64> = lat.gamma_plus[i].iter().map(|x| -x).collect();
            assert_eq!(img, expect);
        }
        // And its inverse undoes it.
        let round = imat_apply(&lat.cox_inv, &imat_apply(&lat.cox, &[3, 5]));
        assert_eq!(round, vec![3, 5]);
    }

    #[test]
    fn orbit_walks_match_indecomposable_grades_in_finite_cases() {
        for (name, n) in [("a2", 2usize), ("a3", 3), ("a4", 4)] {
            let scn = fixtures::by_name(name, 2).unwrap();
            let lat = EulerLattice::from_quiver(&scn.spec);
            let orbits = lat.gamma_orbits(20);
            assert!(orbits.minus_complete && orbits.plus_complete, "{name} walk should finish");
            let table_grades: BTreeSet<Vec<i64>> = scn
                .table
                .entries
                .iter()
                .map(|e| e.rep.dims.iter().map(|&d| d as i64).collect())
                .collect();
            assert_eq!(orbits.minus_grades(), table_grades, "{name} downward grades");
            assert_eq!(orbits.plus_grades(), table_grades, "{name} upward grades");
            assert_eq!(orbits.minus.len(), scn.table.len(), "{name} counts each grade once");
            assert_eq!(n * (n + 1) / 2, scn.table.len());
        }
    }

    #[test]
    fn rank2_small_weights_have_equal_orbit_sets() {
        for (a0, a1) in [(1, 1), (2, 1), (1, 2), (3, 1), (1, 3)] {
            let lat = EulerLattice::rank2_minimal(a0, a1);
            let orbits = lat.gamma_orbits(20);
            assert!(orbits.minus_complete && orbits.plus_complete);
            assert_eq!(
                orbits.minus_grades(),
                orbits.plus_grades(),
                "weights ({a0},{a1}) should give the same set from both sides"
            );
        }
    }

    #[test]
    fn rank2_large_weights_have_disjoint_unbounded_orbits() {
        for (a0, a1) in [(2, 2), (2, 3), (3, 2)] {
            let lat = EulerLattice::rank2_minimal(a0, a1);
            let orbits = lat.gamma_orbits(30);
            assert!(!orbits.minus_complete && !orbits.plus_complete);
            assert!(orbits.minus_grades().is_disjoint(&orbits.plus_grades()));
            // Every point reached stays in the positive cone by construction;
            // spot-check the deepest ones explicitly.
            for p in orbits.minus.iter().chain(&orbits.plus) {
                assert!(in_positive_cone(&p.grade));
            }
        }
    }

    #[test]
    fn ordered_walk_flattens_two_vertex_case_in_expected_order() {
        let scn = fixtures::a2(2);
        let lat = EulerLattice::from_quiver(&scn.spec);
        let orbits = lat.gamma_orbits(10);
        let minus: Vec<Vec<i64>> = orbits.ordered_minus().iter().map(|p| p.grade.clone()).collect();
        // Sink simple, then the length-two module, then the source simple.
        assert_eq!(minus, vec![vec![0, 1], vec![1, 1], vec![1, 0]]);
        let plus: Vec<Vec<i64>> = orbits.ordered_plus().iter().map(|p| p.grade.clone()).collect();
        assert_eq!(plus, vec![vec![0, 1], vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn chebyshev_closed_form_matches_recursion() {
        for (a0, a1) in [(1, 1), (2, 1), (1, 2), (3, 1), (2, 2), (3, 2)] {
            for r in -12..=12 {
                assert_eq!(
                    beta_closed(a0, a1, r),
                    beta_recursive(a0, a1, r),
                    "weights ({a0},{a1}), index {r}"
                );
            }
        }
    }

    #[test]
    fn beta_negative_indices_give_negated_injective_grades() {
        // b_{-1} = -e1 and b_{-2} = -(a1·e1 + e0): the first two injective
        // grades with a sign, continuing by the backward recursion.
        for (a0, a1) in [(1, 1), (2, 1), (3, 2)] {
            assert_eq!(beta_recursive(a0, a1, -1), [-1, 0]);
            assert_eq!(beta_recursive(a0, a1, -2), [-a1, -1]);
        }
        // In the symmetric finite case the negated tail sweeps the same
        // grades as the forward one.
        let fwd: BTreeSet<[i64; 2]> = (0..10)
            .map(|r| beta_recursive(1, 1, r))
            .filter(|b| b[0] >= 0 && b[1] >= 0 && (b[0] > 0 || b[1] > 0))
            .collect();
        let bwd: BTreeSet<[i64; 2]> = (1..10)
            .map(|r| {
                let b = beta_recursive(1, 1, -r);
                [-b[0], -b[1]]
            })
            .filter(|b| b[0] >= 0 && b[1] >= 0 && (b[0] > 0 || b[1] > 0))
            .collect();
        assert_eq!(fwd, bwd);
    }

    #[test]
    fn beta_forward_tail_matches_downward_orbit_grades() {
        for (a0, a1) in [(1, 1), (2, 1), (3, 1), (2, 2), (2, 3)] {
            let lat = EulerLattice::rank2_minimal(a0, a1);
            let orbits = lat.gamma_orbits(15);
            let orbit_grades = orbits.minus_grades();
            let mut r = 0;
            loop {
                let b = beta_recursive(a0, a1, r);
                if !(b[0] >= 0 && b[1] >= 0 && (b[0] > 0 || b[1] > 0)) {
                    break;
                }
                if r > 30 {
                    break;
                }
                assert!(
                    orbit_grades.contains(&vec![b[0], b[1]]),
                    "weights ({a0},{a1}): sequence grade {b:?} missing from orbit walk"
                );
                r += 1;
            }
            if orbits.minus_complete {
                assert_eq!(r as usize, orbit_grades.len(), "weights ({a0},{a1})");
            }
        }
    }

    #[test]
    fn orbit_dimension_formulas_match_representation_engine() {
        for name in ["a2", "a3"] {
            let scn = fixtures::by_name(name, 2).unwrap();
            let lat = EulerLattice::from_quiver(&scn.spec);
            let orbits = lat.gamma_orbits(10);
            assert!(orbits.minus_complete);
            let find_rep = |grade: &[i64]| {
                scn.table
                    .entries
                    .iter()
                    .find(|e| e.rep.dims.iter().map(|&d| d as i64).collect::<Vec<_>>() == grade)
                    .map(|e| &e.rep)
                    .expect("orbit grade has a table entry")
            };
            for a in &orbits.minus {
                for b in &orbits.minus {
                    let x = find_rep(&a.grade);
                    let y = find_rep(&b.grade);
                    if b.depth >= a.depth {
                        let predicted = lat.orbit_hom(a.simple, a.depth, b.simple, b.depth).unwrap();
                        let actual = hom_dim(&scn.spec, x, y) as i64;
                        assert_eq!(predicted, actual, "{name}: hom {:?} -> {:?}", a.grade, b.grade);
                    }
                    if b.depth > a.depth {
                        let predicted = lat.orbit_ext(b.simple, b.depth, a.simple, a.depth).unwrap();
                        let actual = ext_dim(&scn.spec, y, x).unwrap() as i64;
                        assert_eq!(predicted, actual, "{name}: ext {:?} -> {:?}", b.grade, a.grade);
                    }
                }
            }
        }
    }

    #[test]
    fn rank2_closed_form_dimensions_match_representation_engine() {
        // Two-vertex case: P_0 is the sink simple, P_1 the length-two
        // module, P_2 the source simple.
        let scn = fixtures::a2(2);
        let idx = |label: &str| scn.table.index_of(label).unwrap();
        let rep = |label: &str| &scn.table.entries[idx(label)].rep;
        let tower = ["S0", "E", "S1"];
        for r in 0..3i64 {
            for s in r..3i64 {
                let hom = rank2_hom_pp(1, 1, r, s).unwrap();
                let ext = rank2_ext_pp(1, 1, s, r).unwrap();
                let x = rep(tower[r as usize]);
                let y = rep(tower[s as usize]);
                assert_eq!(hom, hom_dim(&scn.spec, x, y) as i64, "hom P_{r} -> P_{s}");
                assert_eq!(ext, ext_dim(&scn.spec, y, x).unwrap() as i64, "ext P_{s} -> P_{r}");
                if s > r {
                    // Nothing maps backwards down the tower.
                    assert_eq!(hom_dim(&scn.spec, y, x), 0);
                }
            }
        }
    }

    #[test]
    fn rank2_closed_form_dimensions_match_orbit_formulas_in_valued_cases() {
        // The closed forms count over the endomorphism field of P_r; the
        // orbit pairing counts over the prime field.  They differ by the
        // symmetriser weight of the tower the earlier object sits in.
        for (a0, a1) in [(1i64, 1i64), (2, 2), (2, 3), (3, 2)] {
            let lat = EulerLattice::rank2_minimal(a0, a1);
            let d = [lat.d[1], lat.d[0]]; // d[parity]: even towers sit over the sink
            let orbits = lat.gamma_orbits(10);
            // P_{2k} is the (0-based) simple-1 orbit at depth k, P_{2k+1}
            // the simple-0 orbit.
            let point = |t: i64| ((1 - (t % 2)) as usize, (t / 2) as usize);
            let exists = |t: i64| {
                let (i, k) = point(t);
                orbits.minus.iter().any(|p| p.simple == i && p.depth == k)
            };
            for r in 0..=5i64 {
                for s in r..=5i64 {
                    if !exists(r) || !exists(s) {
                        continue;
                    }
                    let (i, k) = point(r);
                    let (j, rr) = point(s);
                    let hom_closed = rank2_hom_pp(a0, a1, r, s).unwrap();
                    let hom_orbit = lat.orbit_hom(i, k, j, rr).unwrap();
                    assert_eq!(
                        d[(r % 2) as usize] * hom_closed,
                        hom_orbit,
                        "weights ({a0},{a1}): hom P_{r} -> P_{s}"
                    );
                    if s > r {
                        let ext_closed = rank2_ext_pp(a0, a1, s, r).unwrap();
                        match lat.orbit_ext(j, rr, i, k) {
                            Some(ext_orbit) => assert_eq!(
                                d[(r % 2) as usize] * ext_closed,
                                ext_orbit,
                                "weights ({a0},{a1}): ext P_{s} -> P_{r}"
                            ),
                            // Same orbit depth: adjacent towers of projective
                            // objects never extend each other.
                            None => assert_eq!(ext_closed, 0, "weights ({a0},{a1}): P_{s}, P_{r}"),
                        }
                    }
                }
            }
        }
    }
}
