use std::sync::Arc;

use eii_codes::epc::{
    build_h2, build_hg, distance_bound, epc_params, exhaustive_min_distance, hg_field, is_optimal, lemma32_degree,
    matrix_erasure_decode, theorem30_code, theorem30_distance, theorem30_profile, weight_pattern_census,
};
use eii_codes::gf::{default_field, Field, FieldContext, Gf2Poly};
use eii_codes::{DecodeStatus, EiiCode, Profile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn table(degree: usize) -> Arc<eii_codes::TableField> {
    default_field(degree).as_table().unwrap().clone()
}

#[test]
fn h2_on_three_by_three_has_distance_eight() {
    let h = build_h2(table(4), 3, 3).unwrap();
    assert_eq!(h.rank(), 7);
    let d = exhaustive_min_distance(&h, 9).unwrap();
    assert_eq!(d.distance, 8);
    let witness = d.witness.unwrap();
    assert_eq!(witness.len(), 8);
    assert!(!h.columns_independent(&witness));
    let (ok, total, failing) = weight_pattern_census(&h, 7).unwrap();
    assert_eq!((ok, total, failing), (36, 36, None));
    let (ok8, total8, failing8) = weight_pattern_census(&h, 8).unwrap();
    assert_eq!(total8, 9);
    assert!(ok8 < total8);
    assert!(failing8.is_some());
}

#[test]
fn h2_needs_order_at_least_mn() {
    // GF(8) has α of order 7 < 9
    assert!(build_h2(table(3), 3, 3).is_err());
    assert!(build_h2(table(4), 2, 3).is_err());
}

#[test]
fn hg_three_by_three_two_extra_corrects_all_weight_seven() {
    let field = match hg_field(3, 3, 2, false) {
        FieldContext::Poly(f) => f,
        FieldContext::Table(_) => panic!("degree 23 is above the table range"),
    };
    assert_eq!(field.degree(), 23);
    let h = build_hg(field, 3, 3, 2).unwrap();
    let (ok, total, _) = weight_pattern_census(&h, 7).unwrap();
    assert_eq!((ok, total), (36, 36));
    assert!(build_hg(table(4), 3, 3, 2).is_err());
}

#[test]
fn eii_code_corrects_the_pattern_that_defeats_h2() {
    // EP(5,1;5,1;3): rows i0, i1 erased in three columns, i2 in two
    let f = table(5);
    let c = EiiCode::new(f.clone(), Profile::new(vec![1, 1, 2, 3, 5], 5).unwrap()).unwrap();
    let p = epc_params(c.profile());
    assert_eq!((p.m, p.v, p.n, p.h, p.g), (5, 1, 5, 1, 3));
    assert_eq!(c.min_distance(), 8);

    let pattern = [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1)];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let data: Vec<u16> = (0..c.dimension()).map(|_| f.random(&mut rng)).collect();
    let cw = c.encode(&data).unwrap();
    let mut g = cw.clone();
    for &(i, j) in &pattern {
        g.erase(i, j);
    }
    let r = c.decode_rows(&g);
    assert_eq!(r.status, DecodeStatus::FullyCorrected);
    assert_eq!(r.grid, cw);

    let h2 = build_h2(f.clone(), 5, 5).unwrap();
    let word = vec![0u16; 25];
    let erased: Vec<usize> = pattern.iter().map(|&(i, j)| i * 5 + j).collect();
    assert!(!h2.columns_independent(&erased));
    assert!(matrix_erasure_decode(&h2, &word, &erased).is_none());
}

#[test]
fn theorem30_sweep_meets_the_bound() {
    let mut checked = 0;
    for m in 2..=9 {
        for n in 2..=9 {
            for v in 0..m {
                for h in 0..n {
                    for g in 1..n {
                        let Ok(p) = theorem30_profile(m, n, v, h, g) else {
                            continue;
                        };
                        let params = epc_params(&p);
                        assert_eq!((params.v, params.h, params.g), (v, h, g), "{p}");
                        assert_eq!(p.min_distance(), theorem30_distance(v, h, g), "{p}");
                        assert_eq!(distance_bound(&params).unwrap(), p.min_distance(), "{p}");
                        assert!(is_optimal(&p).unwrap());
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn theorem30_codes_have_their_distance_exhaustively() {
    let f = table(3);
    for (m, n, v, h, g) in [(3, 4, 0, 1, 2), (3, 5, 1, 1, 1), (4, 4, 0, 2, 1), (3, 6, 0, 2, 3)] {
        let c = theorem30_code(f.clone(), m, n, v, h, g).unwrap();
        let d = theorem30_distance(v, h, g);
        let found = exhaustive_min_distance(&c.parity_check_matrix(), d).unwrap();
        assert_eq!(found.distance, d, "{}", c.profile());
    }
}

// Leibniz expansion over GF(2)[x]; signs vanish in characteristic 2.
fn symbolic_det(js: &[usize]) -> Gf2Poly {
    let g = js.len();
    let mut perm: Vec<usize> = (0..g).collect();
    let mut acc = Gf2Poly::zero();
    loop {
        let exp: usize = (0..g).map(|row| (row + 1) * js[perm[row]]).sum();
        acc.add_assign(&Gf2Poly::monomial(exp));
        // next permutation in lexicographic order
        let Some(i) = (1..g).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return acc;
        };
        let j = (i..g).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

#[test]
fn lemma32_degree_matches_symbolic_determinants() {
    assert_eq!(lemma32_degree(&[22, 23, 32], 3), 164);
    assert_eq!(lemma32_degree(&[0], 1), 0);
    let mut count = 0;
    for a in 0..=10 {
        assert_eq!(symbolic_det(&[a]).degree(), Some(lemma32_degree(&[a], 1)));
        for b in a + 1..=10 {
            assert_eq!(symbolic_det(&[a, b]).degree(), Some(lemma32_degree(&[a, b], 2)));
            for c in b + 1..=10 {
                let js = [a, b, c];
                assert_eq!(symbolic_det(&js).degree(), Some(lemma32_degree(&js, 3)), "{js:?}");
                count += 1;
            }
        }
    }
    assert_eq!(count, 165);
}
