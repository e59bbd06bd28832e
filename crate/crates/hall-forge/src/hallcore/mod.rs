//! Truncated completed Hall algebras.
//!
//! The multiplication rule counts, for isomorphism classes `M`, `N`, `K`, the
//! subobjects of `K` that are isomorphic to `N` and have quotient isomorphic
//! to `M`; that count is the structure constant attached to `[K]` in the
//! product `[M]·[N]`.  Working with a componentwise truncation of the grading
//! (dimension vectors for quiver categories, total length for the nilpotent
//! k[x] category) keeps every sum finite while remaining an exact quotient of
//! the completed algebra: every identity verified here is the truncation of
//! an identity in the full completion.
//!
//! Coefficients are exact — arbitrary-precision rationals at a concrete prime
//! `q = p`, or polynomials in a formal `q` when the structure constants are
//! known to be polynomial (closed Gaussian-binomial form on one vertex;
//! prime-interpolated counts on two-vertex hereditary quivers).
//!
//! Submodules: [`identities`] (exponential factorizations, straightening
//! relations, conjugation closed forms), [`coproduct`] (the extension-pairing
//! comultiplication and its compatibility with the twisted product on the
//! tensor square), [`express`] (rewriting every basis class as a polynomial
//! in the simple generators).

pub mod coproduct;
pub mod express;
pub mod identities;

use crate::jordan::{self, JordanCat};
use crate::par;
use crate::qcalc::{binom2, q_binomial};
use crate::repfield::{
    self, IsoClass, RepError, Representation, Scenario, TableEntry,
};
use crate::scalar::{rat, LaurentPoly, QMode, QScalar, Rational, Scalar, ScalarError};
use dashmap::DashMap;
use num::{BigInt, One};
use std::collections::BTreeMap;
use std::sync::Arc;

// =============================== Errors ===============================

/// Failure modes of Hall-algebra computations.
#[derive(Debug, thiserror::Error)]
pub enum HallError {
    /// The underlying representation/linear-algebra engine failed.
    #[error("representation engine: {0}")]
    Rep(#[from] RepError),
    /// Scalar arithmetic failed (non-invertible element, mode mismatch).
    #[error("scalar arithmetic: {0}")]
    Scalar(#[from] ScalarError),
    /// The request is outside what this builder supports.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An element with no multiplicative inverse was inverted.
    #[error("not invertible: {0}")]
    NotInvertible(String),
    /// Two independently computed values disagree; this indicates a bug and
    /// is never swallowed.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

// ========================= Verification outcomes =========================

/// A concrete mismatch found by an identity check: a short message plus the
/// first few basis classes where the two sides differ (with the differing
/// coefficient).
#[derive(Debug, Clone)]
pub struct Discrepancy {
    pub message: String,
    pub support: Vec<String>,
}

/// Outcome of one identity check: either the identity held exactly, or a
/// description of where it failed.
#[derive(Debug, Clone)]
pub enum Verdict {
    Pass,
    Fail(Discrepancy),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    /// Combines sequentially: the first failure wins.
    pub fn and(self, other: Verdict) -> Verdict {
        match self {
            Verdict::Pass => other,
            fail => fail,
        }
    }

    /// Collapses a list of verdicts, keeping the first failure.
    pub fn all<I: IntoIterator<Item = Verdict>>(iter: I) -> Verdict {
        for v in iter {
            if !v.is_pass() {
                return v;
            }
        }
        Verdict::Pass
    }
}

// =============================== Category ===============================

/// The finitary category a Hall algebra is built from: representations of a
/// (possibly bound) quiver over 𝔽_p, or nilpotent 𝔽_p[x]-modules.
#[derive(Debug, Clone)]
pub enum Cat {
    Quiver(Scenario),
    Jordan(JordanCat),
}

impl Cat {
    pub fn name(&self) -> String {
        match self {
            Cat::Quiver(scn) => scn.name.clone(),
            Cat::Jordan(jc) => format!("jordan(p={})", jc.p),
        }
    }

    pub fn p(&self) -> u32 {
        match self {
            Cat::Quiver(scn) => scn.p(),
            Cat::Jordan(jc) => jc.p,
        }
    }

    /// Number of components in the grading group (vertices, or 1 for the
    /// length grading of the nilpotent category).
    pub fn grade_rank(&self) -> usize {
        match self {
            Cat::Quiver(scn) => scn.spec.n_vertices(),
            Cat::Jordan(_) => 1,
        }
    }

    /// Whether second extension groups vanish, so that the extension-pairing
    /// coproduct and Euler-form identities apply.
    pub fn is_hereditary(&self) -> bool {
        match self {
            Cat::Quiver(scn) => scn.spec.is_hereditary(),
            Cat::Jordan(_) => true,
        }
    }

    /// Every isomorphism class with grade within `trunc`, the class of the
    /// zero object included.
    pub fn classes_up_to(&self, trunc: &[usize]) -> Vec<IsoClass> {
        match self {
            Cat::Quiver(scn) => scn.classes_up_to(trunc),
            Cat::Jordan(jc) => jc.classes_up_to(trunc[0]),
        }
    }

    pub fn grade(&self, class: &IsoClass) -> Vec<usize> {
        match self {
            Cat::Quiver(scn) => scn.dim_vec(class),
            Cat::Jordan(_) => vec![jordan::weight(&jordan::partition_of(class))],
        }
    }

    pub fn label(&self, class: &IsoClass) -> String {
        if class.is_empty() {
            return "1".into();
        }
        match self {
            Cat::Quiver(scn) => scn.class_label(class),
            Cat::Jordan(_) => {
                let parts: Vec<String> = jordan::partition_of(class)
                    .iter()
                    .map(|k| k.to_string())
                    .collect();
                format!("I({})", parts.join(","))
            }
        }
    }

    pub fn n_simples(&self) -> usize {
        match self {
            Cat::Quiver(scn) => scn.spec.n_vertices(),
            Cat::Jordan(_) => 1,
        }
    }

    /// The class of the `i`-th simple object.  For quivers the numbering is
    /// the vertex order, which all bundled scenarios arrange so that
    /// extensions only go from earlier simples to later ones.
    pub fn simple_class(&self, i: usize) -> Result<IsoClass, HallError> {
        match self {
            Cat::Quiver(scn) => Ok(scn.simple_class(i)?),
            Cat::Jordan(_) => {
                if i == 0 {
                    Ok(jordan::class_of(&vec![1]))
                } else {
                    Err(HallError::Unsupported("the nilpotent category has one simple".into()))
                }
            }
        }
    }

    /// Dimension of the endomorphism algebra of the `idx`-th indecomposable.
    pub fn end_dim_indec(&self, idx: usize) -> usize {
        match self {
            Cat::Quiver(scn) => scn.table.hom_matrix[idx][idx],
            Cat::Jordan(_) => idx + 1,
        }
    }

    /// Whether the `idx`-th indecomposable is simple.
    pub fn indec_is_simple(&self, idx: usize) -> bool {
        match self {
            Cat::Quiver(scn) => scn.table.entries[idx].rep.total_dim() == 1,
            Cat::Jordan(_) => idx == 0,
        }
    }

    /// `dim Hom(A, B)` for arbitrary classes (additive in both arguments).
    pub fn hom_dim(&self, a: &IsoClass, b: &IsoClass) -> Result<usize, HallError> {
        match self {
            Cat::Quiver(scn) => Ok(repfield::hom_dim(
                &scn.spec,
                &scn.class_rep(a),
                &scn.class_rep(b),
            )),
            Cat::Jordan(_) => Ok(jordan::hom_dim_partitions(
                &jordan::partition_of(a),
                &jordan::partition_of(b),
            )),
        }
    }

    /// `dim Ext¹(A, B)` for arbitrary classes; hereditary quivers only.
    pub fn ext_dim(&self, a: &IsoClass, b: &IsoClass) -> Result<usize, HallError> {
        match self {
            Cat::Quiver(scn) => Ok(repfield::ext_dim(
                &scn.spec,
                &scn.class_rep(a),
                &scn.class_rep(b),
            )?),
            Cat::Jordan(_) => Err(HallError::Unsupported(
                "extension dimensions are not implemented for the nilpotent category".into(),
            )),
        }
    }

    /// Exact automorphism-group order of a class.
    pub fn aut_order(&self, class: &IsoClass) -> Result<BigInt, HallError> {
        match self {
            Cat::Quiver(scn) => Ok(repfield::aut_order(scn, class)?),
            Cat::Jordan(jc) => Ok(jordan::aut_order_formula_partition(
                jc.p,
                &jordan::partition_of(class),
            )),
        }
    }

    /// The full `(quotient class, sub class) → count` profile of invariant
    /// subobjects of `k` with the given sub-grade.
    pub fn profile(
        &self,
        k: &IsoClass,
        sub_grade: &[usize],
    ) -> Result<BTreeMap<(IsoClass, IsoClass), u64>, HallError> {
        match self {
            Cat::Quiver(scn) => {
                Ok(repfield::subrep_profile(scn, &scn.class_rep(k), sub_grade)?)
            }
            Cat::Jordan(jc) => Ok(jordan::invariant_profile(
                jc,
                &jordan::partition_of(k),
                sub_grade[0],
            )?),
        }
    }
}

// ============================ Hall elements ============================

/// An element of the truncated Hall algebra: a finite coefficient map over
/// isomorphism classes.  Zero coefficients are never stored.  Equality must
/// be tested with [`HallElement::eq_elem`] (difference-is-zero), because
/// symbolic coefficients have non-unique representations.
#[derive(Debug, Clone)]
pub struct HallElement {
    terms: BTreeMap<IsoClass, Scalar>,
}

impl HallElement {
    pub fn zero() -> Self {
        HallElement { terms: BTreeMap::new() }
    }

    /// Builds from raw terms, dropping zero coefficients.
    pub fn from_terms(terms: BTreeMap<IsoClass, Scalar>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        HallElement { terms }
    }

    /// The single term `coeff·[class]`.
    pub fn term(class: IsoClass, coeff: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(class, coeff);
        }
        HallElement { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IsoClass, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, class: &IsoClass) -> Option<&Scalar> {
        self.terms.get(class)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            match terms.get_mut(k) {
                Some(c) => *c = c.add(v),
                None => {
                    terms.insert(k.clone(), v.clone());
                }
            }
        }
        Self::from_terms(terms)
    }

    pub fn neg(&self) -> Self {
        HallElement {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(
            self.terms
                .iter()
                .map(|(k, v)| (k.clone(), v.mul(c)))
                .collect(),
        )
    }

    /// Exact equality via vanishing of the difference.
    pub fn eq_elem(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

// ============================ The algebra ============================

/// How symbolic structure constants are produced.
#[derive(Debug, Clone, PartialEq)]
enum SymKind {
    /// Concrete prime: counts are integers read off subobject profiles.
    Numeric,
    /// One vertex, no arrows: the count is a Gaussian binomial.
    SingleVertex,
    /// Two-vertex hereditary quiver: counts are polynomial in the field
    /// cardinality and are recovered by interpolation over several primes.
    Interp2,
}

/// A truncated completed Hall algebra over a fixed category, truncation, and
/// coefficient mode.  All computational state (subobject profiles, cached
/// symbolic coefficients) lives behind thread-safe caches, so products may
/// run data-parallel.
pub struct HallAlgebra {
    cat: Cat,
    trunc: Vec<usize>,
    mode: QMode,
    classes: Vec<IsoClass>,
    by_grade: BTreeMap<Vec<usize>, Vec<IsoClass>>,
    sym: SymKind,
    profiles: DashMap<(IsoClass, Vec<usize>), Arc<BTreeMap<(IsoClass, IsoClass), u64>>>,
    sym_coeffs: DashMap<(IsoClass, IsoClass, IsoClass), Scalar>,
    aut_cache: DashMap<IsoClass, BigInt>,
    /// Numeric companion scenarios (one per interpolation prime), present
    /// only in `Interp2` mode.
    companions: Vec<Scenario>,
}

/// Primes used for polynomial interpolation of two-vertex structure
/// constants; the last point taken is always reserved for verification.
const INTERP_PRIMES: [u32; 7] = [2, 3, 5, 7, 11, 13, 17];

impl HallAlgebra {
    /// Builds the algebra, widening enumeration caps to cover the requested
    /// truncation.  Symbolic mode is accepted only where structure constants
    /// are provably polynomial in the field cardinality and the machinery
    /// can certify the result (one vertex, or a two-vertex hereditary quiver
    /// with a small truncation).
    pub fn new(mut cat: Cat, trunc: Vec<usize>, mode: QMode) -> Result<Self, HallError> {
        if trunc.len() != cat.grade_rank() {
            return Err(HallError::Unsupported(format!(
                "truncation has {} components but the grading has {}",
                trunc.len(),
                cat.grade_rank()
            )));
        }
        let total: usize = trunc.iter().sum();
        match &mut cat {
            Cat::Quiver(scn) => scn.caps.cover_truncation(total),
            Cat::Jordan(jc) => {
                jc.max_len = jc.max_len.max(trunc[0]);
                jc.caps.cover_truncation(total);
            }
        }
        let sym = match &mode {
            QMode::At(_) => SymKind::Numeric,
            QMode::Symbolic => match &cat {
                Cat::Quiver(scn)
                    if scn.spec.n_vertices() == 1 && scn.spec.arrows.is_empty() =>
                {
                    SymKind::SingleVertex
                }
                Cat::Quiver(scn)
                    if scn.spec.n_vertices() == 2 && scn.spec.is_hereditary() =>
                {
                    if total > 4 {
                        return Err(HallError::Unsupported(
                            "symbolic two-vertex coefficients are limited to total truncation ≤ 4"
                                .into(),
                        ));
                    }
                    SymKind::Interp2
                }
                _ => {
                    return Err(HallError::Unsupported(format!(
                        "symbolic coefficients are not available for {}",
                        cat.name()
                    )))
                }
            },
        };
        let companions = if sym == SymKind::Interp2 {
            let Cat::Quiver(scn) = &cat else { unreachable!() };
            INTERP_PRIMES
                .iter()
                .map(|&p2| retarget_scenario(scn, p2, total))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            Vec::new()
        };
        let classes = cat.classes_up_to(&trunc);
        let mut by_grade: BTreeMap<Vec<usize>, Vec<IsoClass>> = BTreeMap::new();
        for c in &classes {
            by_grade.entry(cat.grade(c)).or_default().push(c.clone());
        }
        Ok(HallAlgebra {
            cat,
            trunc,
            mode,
            classes,
            by_grade,
            sym,
            profiles: DashMap::new(),
            sym_coeffs: DashMap::new(),
            aut_cache: DashMap::new(),
            companions,
        })
    }

    pub fn cat(&self) -> &Cat {
        &self.cat
    }

    pub fn trunc(&self) -> &[usize] {
        &self.trunc
    }

    pub fn mode(&self) -> &QMode {
        &self.mode
    }

    /// All classes within the truncation, sorted; the zero class included.
    pub fn classes(&self) -> &[IsoClass] {
        &self.classes
    }

    /// Classes of a given grade, if any.
    pub fn classes_at(&self, grade: &[usize]) -> &[IsoClass] {
        self.by_grade.get(grade).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn grade(&self, class: &IsoClass) -> Vec<usize> {
        self.cat.grade(class)
    }

    pub fn label(&self, class: &IsoClass) -> String {
        self.cat.label(class)
    }

    pub fn within_trunc(&self, grade: &[usize]) -> bool {
        grade.iter().zip(&self.trunc).all(|(g, t)| g <= t)
    }

    /// Short human-readable rendering of an element (first few terms).
    pub fn describe(&self, x: &HallElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = x
            .terms()
            .take(8)
            .map(|(c, s)| format!("({})·[{}]", s, self.label(c)))
            .collect();
        if x.num_terms() > 8 {
            parts.push(format!("… ({} terms)", x.num_terms()));
        }
        parts.join(" + ")
    }

    // ------------------------- scalars and data -------------------------

    /// `|Aut K|` as a scalar in the current mode.  Symbolic mode uses the
    /// one-way-morphism closed form and therefore requires every summand
    /// type to be a brick.
    pub fn aut_order_scalar(&self, class: &IsoClass) -> Result<Scalar, HallError> {
        match &self.mode {
            QMode::At(_) => {
                if let Some(a) = self.aut_cache.get(class) {
                    return Ok(Scalar::Rat(Rational::from_integer(a.clone())));
                }
                let a = self.cat.aut_order(class)?;
                self.aut_cache.insert(class.clone(), a.clone());
                Ok(Scalar::Rat(Rational::from_integer(a)))
            }
            QMode::Symbolic => {
                let Cat::Quiver(scn) = &self.cat else {
                    return Err(HallError::Unsupported(
                        "symbolic automorphism orders need a quiver table".into(),
                    ));
                };
                let entries: Vec<(usize, usize)> = class.entries().collect();
                let mut exp_cross: i64 = 0;
                for &(i, mi) in &entries {
                    if scn.table.hom_matrix[i][i] != 1 {
                        return Err(HallError::Unsupported(
                            "symbolic automorphism orders require brick summands".into(),
                        ));
                    }
                    for &(j, mj) in &entries {
                        if i != j {
                            exp_cross +=
                                (mi * mj * scn.table.hom_matrix[i][j]) as i64;
                        }
                    }
                }
                let mut acc = self.mode.q_pow(exp_cross);
                for &(_, mi) in &entries {
                    acc = acc.mul(&crate::qcalc::gl_order(&self.mode, mi as u64));
                }
                Ok(acc)
            }
        }
    }

    /// Cached subobject profile of `k` at the given sub-grade.
    pub fn profile_arc(
        &self,
        k: &IsoClass,
        sub_grade: &[usize],
    ) -> Result<Arc<BTreeMap<(IsoClass, IsoClass), u64>>, HallError> {
        let key = (k.clone(), sub_grade.to_vec());
        if let Some(v) = self.profiles.get(&key) {
            return Ok(v.value().clone());
        }
        let prof = Arc::new(self.cat.profile(k, sub_grade)?);
        self.profiles.insert(key, prof.clone());
        Ok(prof)
    }

    /// The structure constant attached to `[k]` in `[m]·[n]`: the number of
    /// subobjects of `k` isomorphic to `n` with quotient isomorphic to `m`.
    pub fn hall_coeff(
        &self,
        m: &IsoClass,
        n: &IsoClass,
        k: &IsoClass,
    ) -> Result<Scalar, HallError> {
        match self.sym {
            SymKind::Numeric => {
                let sub_grade = self.grade(n);
                let prof = self.profile_arc(k, &sub_grade)?;
                let count = prof.get(&(m.clone(), n.clone())).copied().unwrap_or(0);
                Ok(self
                    .mode
                    .constant(Rational::from_integer(BigInt::from(count))))
            }
            SymKind::SingleVertex => {
                let a = m.multiplicity(0);
                let b = n.multiplicity(0);
                if k.multiplicity(0) != a + b {
                    return Ok(self.mode.zero());
                }
                Ok(q_binomial(&self.mode, (a + b) as u64, b as i64))
            }
            SymKind::Interp2 => self.interp_coeff(m, n, k),
        }
    }

    /// Two-vertex symbolic structure constant by Lagrange interpolation: the
    /// count is polynomial in the field cardinality of degree at most the
    /// dimension of the product of vertex Grassmannians, so sampling one more
    /// prime than the degree determines it, and a further prime certifies it.
    fn interp_coeff(
        &self,
        m: &IsoClass,
        n: &IsoClass,
        k: &IsoClass,
    ) -> Result<Scalar, HallError> {
        let key = (m.clone(), n.clone(), k.clone());
        if let Some(v) = self.sym_coeffs.get(&key) {
            return Ok(v.value().clone());
        }
        let c = self.grade(k);
        let b = self.grade(n);
        let bound: usize = b.iter().zip(&c).map(|(bv, cv)| bv * (cv - bv)).sum();
        if bound + 2 > self.companions.len() {
            return Err(HallError::Unsupported(format!(
                "interpolation degree bound {} needs more primes than available",
                bound
            )));
        }
        let mut points: Vec<(Rational, Rational)> = Vec::new();
        for scn in self.companions.iter().take(bound + 2) {
            let prof = repfield::subrep_profile(scn, &scn.class_rep(k), &b)?;
            let count = prof.get(&(m.clone(), n.clone())).copied().unwrap_or(0);
            points.push((rat(scn.p() as i64), Rational::from_integer(BigInt::from(count))));
        }
        let poly = lagrange(&points[..bound + 1]);
        let (xv, yv) = &points[bound + 1];
        if &poly.specialize(xv) != yv {
            return Err(HallError::Inconsistent(format!(
                "interpolated coefficient for [{}]·[{}] at [{}] fails at the verification prime",
                self.label(m),
                self.label(n),
                self.label(k)
            )));
        }
        for (_, coef) in poly.terms() {
            if !coef.is_integer() {
                return Err(HallError::Inconsistent(
                    "interpolated subobject count has a non-integer coefficient".into(),
                ));
            }
        }
        let s = Scalar::Sym(QScalar::from_laurent(poly));
        self.sym_coeffs.insert(key, s.clone());
        Ok(s)
    }

    // --------------------------- ring structure ---------------------------

    /// The unit element `[0]`.
    pub fn one(&self) -> HallElement {
        HallElement::term(IsoClass::empty(), self.mode.one())
    }

    /// The basis element `[class]`.
    pub fn from_class(&self, class: &IsoClass) -> HallElement {
        HallElement::term(class.clone(), self.mode.one())
    }

    /// The truncated product `x·y`.
    pub fn product(&self, x: &HallElement, y: &HallElement) -> Result<HallElement, HallError> {
        let mut pairs: Vec<(IsoClass, Scalar, IsoClass, Scalar, Vec<usize>)> = Vec::new();
        for (m, cm) in x.terms() {
            let gm = self.grade(m);
            for (n, cn) in y.terms() {
                let gn = self.grade(n);
                let g: Vec<usize> = gm.iter().zip(&gn).map(|(a, b)| a + b).collect();
                if self.within_trunc(&g) {
                    pairs.push((m.clone(), cm.clone(), n.clone(), cn.clone(), g));
                }
            }
        }
        let partials = par::map_collect(pairs, |(m, cm, n, cn, g)| {
            let mut out: Vec<(IsoClass, Scalar)> = Vec::new();
            for k in self.classes_at(&g) {
                let f = self.hall_coeff(&m, &n, k)?;
                if !f.is_zero() {
                    out.push((k.clone(), cm.mul(&cn).mul(&f)));
                }
            }
            Ok::<_, HallError>(out)
        });
        let mut terms: BTreeMap<IsoClass, Scalar> = BTreeMap::new();
        for part in partials {
            for (k, v) in part? {
                match terms.get_mut(&k) {
                    Some(c) => *c = c.add(&v),
                    None => {
                        terms.insert(k, v);
                    }
                }
            }
        }
        Ok(HallElement::from_terms(terms))
    }

    /// `x^n` by repeated multiplication.
    pub fn power(&self, x: &HallElement, n: usize) -> Result<HallElement, HallError> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.product(&acc, x)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse of an element whose `[0]`-coefficient is
    /// invertible; the rest is nilpotent in the truncation, so a finite
    /// geometric series suffices.
    pub fn inverse(&self, x: &HallElement) -> Result<HallElement, HallError> {
        let c0 = x
            .coeff(&IsoClass::empty())
            .cloned()
            .ok_or_else(|| HallError::NotInvertible("zero constant term".into()))?;
        let c0inv = c0.inv()?;
        let neg_u = self.one().sub(&x.scale(&c0inv));
        let bound: usize = self.trunc.iter().sum();
        let mut acc = self.one();
        let mut pow = self.one();
        for _ in 1..=bound {
            pow = self.product(&pow, &neg_u)?;
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow);
        }
        Ok(acc.scale(&c0inv))
    }

    /// The group commutator `x⁻¹·y·x·y⁻¹`.
    pub fn commutator(
        &self,
        x: &HallElement,
        y: &HallElement,
    ) -> Result<HallElement, HallError> {
        let xi = self.inverse(x)?;
        let yi = self.inverse(y)?;
        let t = self.product(&xi, y)?;
        let t = self.product(&t, x)?;
        self.product(&t, &yi)
    }

    // --------------------------- exponentials ---------------------------

    /// `Σ_a [a·class]` — the sum of all multiples of one class.  For a rigid
    /// brick `E` this equals the `|End E|`-exponential of `[E]`, because
    /// `[E]^a = [a]!·[E^{⊕a}]` in that base.
    pub fn exp_brick(&self, class: &IsoClass) -> HallElement {
        let mut terms = BTreeMap::new();
        terms.insert(IsoClass::empty(), self.mode.one());
        if !class.is_empty() {
            let g = self.grade(class);
            for a in 1.. {
                let ga: Vec<usize> = g.iter().map(|x| x * a).collect();
                if !self.within_trunc(&ga) {
                    break;
                }
                let cls =
                    IsoClass::from_pairs(class.entries().map(|(i, m)| (i, m * a)));
                terms.insert(cls, self.mode.one());
            }
        }
        HallElement::from_terms(terms)
    }

    /// `1/[a]!` in base `q^d` (numeric: base `p^d`).
    pub fn factorial_inv_base(&self, a: usize, d: usize) -> Result<Scalar, HallError> {
        if d == 1 {
            return Ok(crate::qcalc::q_factorial_inv(&self.mode, a as u64));
        }
        match &self.mode {
            QMode::At(v) => {
                let qe = crate::scalar::pow_rational(v, d as u64);
                if qe.is_one() {
                    return Err(HallError::Unsupported(
                        "factorial base 1 is degenerate".into(),
                    ));
                }
                let mut acc = Rational::one();
                let mut qk = Rational::one();
                for _ in 1..=a {
                    qk *= &qe;
                    acc *= (&qk - Rational::one()) / (&qe - Rational::one());
                }
                Ok(Scalar::Rat(Rational::one() / acc))
            }
            QMode::Symbolic => Err(HallError::Unsupported(
                "symbolic factorials in base q^d with d > 1 are not needed here".into(),
            )),
        }
    }

    /// The exponential series `Σ_a x^a/[a]!` in base `q^end_dim`, for `x`
    /// with zero constant term (so the series terminates at the truncation).
    pub fn exp_series(
        &self,
        x: &HallElement,
        end_dim: usize,
    ) -> Result<HallElement, HallError> {
        if x.coeff(&IsoClass::empty()).is_some() {
            return Err(HallError::Unsupported(
                "exponential of an element with nonzero constant term".into(),
            ));
        }
        let bound: usize = self.trunc.iter().sum();
        let mut acc = self.one();
        let mut pow = self.one();
        for a in 1..=bound {
            pow = self.product(&pow, x)?;
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow.scale(&self.factorial_inv_base(a, end_dim)?));
        }
        Ok(acc)
    }

    /// The sum of all classes within the truncation, each with coefficient 1.
    pub fn exp_full(&self) -> HallElement {
        HallElement::from_terms(
            self.classes
                .iter()
                .map(|c| (c.clone(), self.mode.one()))
                .collect(),
        )
    }

    /// The sum of all classes whose every indecomposable summand is kept by
    /// the filter — the full exponential of an extension-closed additive
    /// subcategory selected by its indecomposables.
    pub fn exp_filtered<F: Fn(usize) -> bool>(&self, keep: F) -> HallElement {
        HallElement::from_terms(
            self.classes
                .iter()
                .filter(|c| c.entries().all(|(i, _)| keep(i)))
                .map(|c| (c.clone(), self.mode.one()))
                .collect(),
        )
    }

    /// The inverse of the all-classes sum, written directly: it is supported
    /// on semisimple classes, with coefficient
    /// `∏_i (−1)^{m_i} q_i^{m_i(m_i−1)/2}` over simple multiplicities `m_i`,
    /// where `q_i` is the cardinality of the `i`-th simple's endomorphism
    /// field.
    pub fn reineke_inverse(&self) -> Result<HallElement, HallError> {
        let mut terms = BTreeMap::new();
        for class in &self.classes {
            if !class.entries().all(|(i, _)| self.cat.indec_is_simple(i)) {
                continue;
            }
            let mut coeff = self.mode.one();
            let mut parity = 0usize;
            for (i, mult) in class.entries() {
                let d = self.cat.end_dim_indec(i) as i64;
                parity += mult;
                coeff = coeff.mul(&self.mode.q_pow(d * binom2(mult as i64)));
            }
            if parity % 2 == 1 {
                coeff = coeff.neg();
            }
            terms.insert(class.clone(), coeff);
        }
        Ok(HallElement::from_terms(terms))
    }

    // ---------------------------- comparison ----------------------------

    /// Compares two elements, producing a pass/fail verdict with the first
    /// few differing classes on failure.
    pub fn compare(&self, what: &str, lhs: &HallElement, rhs: &HallElement) -> Verdict {
        let d = lhs.sub(rhs);
        if d.is_zero() {
            Verdict::Pass
        } else {
            Verdict::Fail(Discrepancy {
                message: format!("{}: sides differ on {} classes", what, d.num_terms()),
                support: self.support_strings(&d, 10),
            })
        }
    }

    /// Renders the first `limit` terms of an element as `label: coeff`.
    pub fn support_strings(&self, x: &HallElement, limit: usize) -> Vec<String> {
        x.terms()
            .take(limit)
            .map(|(c, s)| format!("{}: {}", self.label(c), s))
            .collect()
    }
}

/// Rebuilds a scenario over a different prime.  Requires structure matrices
/// with entries in {0,1} and no relations, so the same integer data defines
/// the same indecomposables over every prime.
fn retarget_scenario(scn: &Scenario, p2: u32, total: usize) -> Result<Scenario, HallError> {
    if !scn.spec.relations.is_empty() {
        return Err(HallError::Unsupported(
            "prime retargeting requires an unbound quiver".into(),
        ));
    }
    let mut spec2 = scn.spec.clone();
    spec2.p = p2;
    let entries2: Vec<TableEntry> = scn
        .table
        .entries
        .iter()
        .map(|e| {
            let mats = e
                .rep
                .mats
                .iter()
                .map(|m| {
                    let mut flat = Vec::with_capacity(m.rows * m.cols);
                    for i in 0..m.rows {
                        for j in 0..m.cols {
                            let v = m.get(i, j);
                            if v > 1 {
                                return Err(HallError::Unsupported(
                                    "prime retargeting requires 0/1 structure matrices".into(),
                                ));
                            }
                            flat.push(v as i64);
                        }
                    }
                    Ok(crate::linalg::FpMat::from_flat(p2, m.rows, m.cols, &flat))
                })
                .collect::<Result<Vec<_>, HallError>>()?;
            Ok(TableEntry {
                label: e.label.clone(),
                rep: Representation { dims: e.rep.dims.clone(), mats },
            })
        })
        .collect::<Result<Vec<_>, HallError>>()?;
    let mut out = Scenario::new(&format!("{}@p={}", scn.name, p2), spec2, entries2)?;
    out.caps.cover_truncation(total);
    Ok(out)
}

/// The unique polynomial through the given points (Lagrange form).
fn lagrange(points: &[(Rational, Rational)]) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut term = LaurentPoly::from_rational(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let num = LaurentPoly::from_coeffs([
                (1, Rational::one()),
                (0, -xj.clone()),
            ]);
            let den = xi - xj;
            term = term.mul(&num).scale(&(Rational::one() / den));
        }
        acc = acc.add(&term);
    }
    acc
}

// =============================== Tests ===============================
