//! Enumeration against the counting formulas, plus randomized linear
//! algebra invariants for the canonical representation.

use num::ToPrimitive;
use proptest::prelude::*;

use qekr::gfspace::{
    enumerate_all, lattice_count, layer_count, FiniteField, Grassmannian, Subspace,
    DEFAULT_ENUM_CAP,
};

#[test]
fn layer_counts_match_formulas() {
    // n <= 5 at q=2, n <= 4 at q=3, n <= 3 at q in {4,5}
    let grids: [(u32, u32); 4] = [(5, 2), (4, 3), (3, 4), (3, 5)];
    for (n_max, q) in grids {
        for n in 0..=n_max {
            for k in 0..=n {
                let got = Grassmannian::new(n, k, q, DEFAULT_ENUM_CAP).unwrap().count();
                assert_eq!(got as u64, layer_count(n, k, q).to_u64().unwrap());
            }
        }
    }
    assert_eq!(lattice_count(5, 2).to_u64().unwrap(), 374);
    assert_eq!(lattice_count(4, 3).to_u64().unwrap(), 212);
}

#[test]
fn intersection_dim_bounds_over_lattice() {
    let all: Vec<Subspace> = enumerate_all(3, 2, DEFAULT_ENUM_CAP).unwrap().collect();
    for x in &all {
        for y in &all {
            let d = x.intersection_dim(y).unwrap();
            assert_eq!(d, y.intersection_dim(x).unwrap());
            assert!(d <= x.dim().min(y.dim()));
            let lower = (x.dim() + y.dim()).saturating_sub(3);
            assert!(d >= lower);
            assert_eq!(x.contains(y).unwrap(), d == y.dim());
        }
    }
}

fn matrix_strategy(q: u32) -> impl Strategy<Value = Vec<Vec<u8>>> {
    let entry = 0u8..(q as u8);
    prop::collection::vec(prop::collection::vec(entry, 4), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonicalization_idempotent(q in prop::sample::select(vec![2u32, 3, 4, 5]),
                                   rows_seed in matrix_strategy(5)) {
        let rows: Vec<Vec<u8>> = rows_seed
            .iter()
            .map(|r| r.iter().map(|&e| e % q as u8).collect())
            .collect();
        let s = Subspace::from_spanning(4, q, &rows).unwrap();
        let again = Subspace::from_spanning(
            4,
            q,
            &s.rows().map(|r| r.to_vec()).collect::<Vec<_>>(),
        )
        .unwrap();
        prop_assert_eq!(&s, &again);
    }

    #[test]
    fn row_space_invariant_under_row_ops(q in prop::sample::select(vec![2u32, 3]),
                                         rows_seed in matrix_strategy(3),
                                         scale_pick in 1u8..3,
                                         from in 0usize..4,
                                         to in 0usize..4) {
        let field = FiniteField::get(q).unwrap();
        let rows: Vec<Vec<u8>> = rows_seed
            .iter()
            .map(|r| r.iter().map(|&e| e % q as u8).collect())
            .collect();
        let s = Subspace::from_spanning(4, q, &rows).unwrap();
        // add scale * rows[from] to rows[to] (a random invertible operation
        // when from != to), then re-canonicalize
        let mut mutated = rows.clone();
        if from != to && from < rows.len() && to < rows.len() {
            let scale = scale_pick % q as u8;
            let deltas: Vec<u8> = mutated[from].iter().map(|&e| field.mul(scale, e)).collect();
            for (cell, delta) in mutated[to].iter_mut().zip(deltas) {
                *cell = field.add(*cell, delta);
            }
        }
        let t = Subspace::from_spanning(4, q, &mutated).unwrap();
        prop_assert_eq!(s, t);
    }
}

#[test]
fn serialization_shapes() {
    let s = Subspace::coordinate_subspace(3, 2, 2);
    let json = serde_json::to_value(&s).unwrap();
    assert_eq!(json["n"], 3);
    assert_eq!(json["q"], 2);
    assert_eq!(json["rows"], serde_json::json!([[1, 0, 0], [0, 1, 0]]));
}
