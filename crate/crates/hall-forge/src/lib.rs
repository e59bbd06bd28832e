//! hall-forge: an exact-arithmetic workbench for truncated completed Hall
//! algebras of small finitary categories.
//!
//! The library builds Hall algebras of quiver-representation categories over
//! prime fields and of the category of nilpotent modules over k[x], computes
//! their structure constants exactly (as integers, or as polynomials in a
//! formal cardinality q), and mechanically verifies a battery of algebraic
//! identities: Gaussian extension-counting formulas, the inversion of the sum
//! of all isomorphism classes, exponential factorizations and pentagon-style
//! identities, conjugation formulas, quantum-dilogarithm identities in a
//! quantum plane, and Hall–Littlewood symmetric-function expansions.
//!
//! All arithmetic is exact: rationals are arbitrary-precision, symbolic
//! coefficients live in a ring of Laurent polynomials localized at the
//! cyclotomic polynomials. No floating point is used anywhere.

pub mod scalar;
pub mod linalg;
pub mod qcalc;
pub mod repfield;
pub mod rootcox;
pub mod hallcore;
pub mod jordan;
pub mod qtorus;
pub mod scenario;
pub mod par;
pub mod checks;
pub mod report;
