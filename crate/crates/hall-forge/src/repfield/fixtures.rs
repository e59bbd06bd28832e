//! Built-in scenarios: one vertex with no arrows, the two-vertex line,
//! linear quivers of any length, and the commutative square bound by its
//! commutativity relation.  All indecomposables of these quivers are thin
//! (dimensions 0 or 1 with identity maps on the support), so each table is
//! generated from support sets.

use super::{Arrow, QuiverSpec, Relation, Representation, Scenario, TableEntry};
use crate::linalg::FpMat;

/// A thin representation: dimension 1 on `support`, identity on every arrow
/// whose endpoints both lie in the support.
fn thin_entry(spec: &QuiverSpec, label: &str, support: &[usize]) -> TableEntry {
    let mut dims = vec![0usize; spec.n_vertices()];
    for &v in support {
        dims[v] = 1;
    }
    let mats = spec
        .arrows
        .iter()
        .map(|a| {
            let mut m = FpMat::zero(spec.p, dims[a.tgt], dims[a.src]);
            if dims[a.src] == 1 && dims[a.tgt] == 1 {
                m.set(0, 0, 1);
            }
            m
        })
        .collect();
    TableEntry {
        label: label.into(),
        rep: Representation { dims, mats },
    }
}

/// One vertex, no arrows: the category of finite `𝔽_p`-vector spaces.  The
/// unique indecomposable is the one-dimensional space `S`.
pub fn single_vertex(p: u32) -> Scenario {
    let spec = QuiverSpec {
        vertices: vec!["0".into()],
        arrows: vec![],
        relations: vec![],
        p,
    };
    let entries = vec![thin_entry(&spec, "S", &[0])];
    Scenario::new(&format!("single_vertex(p={})", p), spec, entries).unwrap()
}

/// The two-vertex line with one arrow `1 → 0`.  Indecomposables: the simples
/// `S1`, `S0` and the extension `E` of `S1` by `S0`.
pub fn a2(p: u32) -> Scenario {
    let spec = QuiverSpec {
        vertices: vec!["1".into(), "0".into()],
        arrows: vec![Arrow { src: 0, tgt: 1, label: "a".into() }],
        relations: vec![],
        p,
    };
    let entries = vec![
        thin_entry(&spec, "S1", &[0]),
        thin_entry(&spec, "S0", &[1]),
        thin_entry(&spec, "E", &[0, 1]),
    ];
    Scenario::new(&format!("a2(p={})", p), spec, entries).unwrap()
}

/// The linear quiver `1 → 2 → … → n`.  Indecomposables are the interval
/// representations `E[a,b]`, labelled `S{a}` when `a = b` and by the
/// concatenated vertex names otherwise (`E12`, `E123`, …).
pub fn a_n(n: usize, p: u32) -> Scenario {
    assert!(n >= 2, "use single_vertex for n = 1");
    let spec = QuiverSpec {
        vertices: (1..=n).map(|i| i.to_string()).collect(),
        arrows: (1..n)
            .map(|i| Arrow {
                src: i - 1,
                tgt: i,
                label: format!("a{}{}", i, i + 1),
            })
            .collect(),
        relations: vec![],
        p,
    };
    let mut entries = Vec::new();
    for a in 1..=n {
        for b in a..=n {
            let support: Vec<usize> = (a..=b).map(|v| v - 1).collect();
            let label = if a == b {
                format!("S{}", a)
            } else {
                let digits: String = (a..=b).map(|v| v.to_string()).collect();
                format!("E{}", digits)
            };
            entries.push(thin_entry(&spec, &label, &support));
        }
    }
    Scenario::new(&format!("a{}(p={})", n, p), spec, entries).unwrap()
}

/// The commutative square: vertices `1, 2, 3, 4`, arrows `1→2, 1→3, 2→4,
/// 3→4`, bound by the relation equating the two paths from `1` to `4`.
/// There are exactly eleven indecomposables, all thin; the dimension vector
/// `(1,1,0,1)` is excluded because the relation would force the composite
/// through vertex `2` to vanish, splitting the representation.
pub fn bound_square(p: u32) -> Scenario {
    let spec = QuiverSpec {
        vertices: (1..=4).map(|i| i.to_string()).collect(),
        arrows: vec![
            Arrow { src: 0, tgt: 1, label: "a12".into() },
            Arrow { src: 0, tgt: 2, label: "a13".into() },
            Arrow { src: 1, tgt: 3, label: "a24".into() },
            Arrow { src: 2, tgt: 3, label: "a34".into() },
        ],
        relations: vec![Relation {
            // path via 2 minus path via 3 (coefficient p−1 ≡ −1)
            terms: vec![(1, vec![0, 2]), (p - 1, vec![1, 3])],
        }],
        p,
    };
    let supports: [(&str, &[usize]); 11] = [
        ("X4", &[3]),
        ("X24", &[1, 3]),
        ("X34", &[2, 3]),
        ("X234", &[1, 2, 3]),
        ("X2", &[1]),
        ("X3", &[2]),
        ("X1234", &[0, 1, 2, 3]),
        ("X123", &[0, 1, 2]),
        ("X12", &[0, 1]),
        ("X13", &[0, 2]),
        ("X1", &[0]),
    ];
    let entries = supports
        .iter()
        .map(|(label, support)| thin_entry(&spec, label, support))
        .collect();
    Scenario::new(&format!("bound_square(p={})", p), spec, entries).unwrap()
}

/// Looks up a built-in scenario by base name.
pub fn by_name(name: &str, p: u32) -> Option<Scenario> {
    match name {
        "single_vertex" => Some(single_vertex(p)),
        "a2" => Some(a2(p)),
        "a3" => Some(a_n(3, p)),
        "a4" => Some(a_n(4, p)),
        "a5" => Some(a_n(5, p)),
        "bound_square" => Some(bound_square(p)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_have_expected_sizes() {
        assert_eq!(single_vertex(2).table.len(), 1);
        assert_eq!(a2(2).table.len(), 3);
        assert_eq!(a_n(3, 2).table.len(), 6);
        assert_eq!(a_n(4, 2).table.len(), 10);
        assert_eq!(bound_square(2).table.len(), 11);
        assert_eq!(bound_square(3).table.len(), 11);
    }

    #[test]
    fn interval_hom_pattern() {
        // Hom(E[a,b], E[c,d]) is one-dimensional exactly when c ≤ a ≤ d ≤ b
        // (restrict-then-include), zero otherwise.
        let n = 4;
        let scn = a_n(n, 2);
        let interval_of = |idx: usize| {
            let dims = &scn.table.entries[idx].rep.dims;
            let a = dims.iter().position(|&d| d == 1).unwrap() + 1;
            let b = dims.iter().rposition(|&d| d == 1).unwrap() + 1;
            (a, b)
        };
        for i in 0..scn.table.len() {
            for j in 0..scn.table.len() {
                let (a, b) = interval_of(i);
                let (c, d) = interval_of(j);
                let expected = usize::from(c <= a && a <= d && d <= b);
                assert_eq!(
                    scn.table.hom_matrix[i][j], expected,
                    "Hom(E[{},{}], E[{},{}])",
                    a, b, c, d
                );
            }
        }
    }

    #[test]
    fn bound_square_relation_holds_on_all_entries() {
        for p in [2, 3] {
            let scn = bound_square(p);
            for e in &scn.table.entries {
                e.rep.validate(&scn.spec).unwrap();
            }
        }
    }

    #[test]
    fn bound_square_excluded_dimension_vector_is_decomposable() {
        // A representation with dimensions (1,1,0,1) must split: the relation
        // kills the composite 1→2→4.
        let scn = bound_square(2);
        let rep = Representation {
            dims: vec![1, 1, 0, 1],
            mats: vec![
                FpMat::from_rows(2, &[vec![1]]),      // a12
                FpMat::zero(2, 0, 1),                 // a13
                FpMat::zero(2, 1, 1),                 // a24 (forced zero)
                FpMat::zero(2, 1, 0),                 // a34
            ],
        };
        rep.validate(&scn.spec).unwrap();
        let class = scn.decompose(&rep).unwrap();
        assert_eq!(class.summand_count(), 2); // X12 ⊕ X4
        assert_eq!(class.multiplicity(scn.table.index_of("X12").unwrap()), 1);
        assert_eq!(class.multiplicity(scn.table.index_of("X4").unwrap()), 1);
    }

    #[test]
    fn lookup_by_name() {
        assert!(by_name("a2", 2).is_some());
        assert!(by_name("bound_square", 3).is_some());
        assert!(by_name("e8", 2).is_none());
    }
}
