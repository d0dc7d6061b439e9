use std::sync::Arc;

use eii_codes::gf::{build_field, Field, Gf2Poly, TableField};
use eii_codes::{DecodeStatus, EiiCode, Profile, SymbolGrid};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field(modulus: &[usize]) -> Arc<TableField> {
    let m = Gf2Poly::from_exponents(modulus);
    build_field(m.degree().unwrap(), &m).unwrap().as_table().unwrap().clone()
}

fn code(f: &Arc<TableField>, entries: &[usize], n: usize) -> EiiCode<TableField> {
    EiiCode::new(f.clone(), Profile::new(entries.to_vec(), n).unwrap()).unwrap()
}

fn random_codeword(c: &EiiCode<TableField>, rng: &mut ChaCha8Rng) -> SymbolGrid<u16> {
    let data: Vec<u16> = (0..c.dimension()).map(|_| c.field().random(rng)).collect();
    c.encode(&data).unwrap()
}

fn erase_rows(grid: &mut SymbolGrid<u16>, pattern: &[&[usize]]) {
    for (i, cols) in pattern.iter().enumerate() {
        for &j in cols.iter() {
            grid.erase(i, j);
            grid.set(i, j, 0);
        }
    }
}

const ALL7: &[usize] = &[0, 1, 2, 3, 4, 5, 6];

#[test]
fn six_row_pattern_is_fully_corrected() {
    let f = field(&[0, 1, 3]);
    let c = code(&f, &[1, 1, 3, 4, 7, 7], 7);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let cw = random_codeword(&c, &mut rng);
        let mut g = cw.clone();
        erase_rows(&mut g, &[&[2], ALL7, &[1, 2, 4, 6], &[0, 3, 5], ALL7, &[5]]);
        let report = c.decode_rows(&g);
        assert_eq!(report.status, DecodeStatus::FullyCorrected);
        assert_eq!(report.grid, cw);
        assert_eq!(report.corrected_rows, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(report.passes, 1);
    }
}

#[test]
fn four_row_pattern_is_partially_corrected() {
    let f = field(&[0, 1, 3]);
    let c = code(&f, &[1, 2, 3, 5], 7);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cw = random_codeword(&c, &mut rng);
    let mut g = cw.clone();
    erase_rows(&mut g, &[&[0, 3, 5, 6], &[1, 3], &[2], &[0, 1, 5, 6]]);
    let report = c.decode_rows(&g);
    assert_eq!(report.status, DecodeStatus::PartiallyCorrected);
    assert_eq!(report.corrected_rows, vec![1, 2]);
    assert_eq!(report.residual.len(), 8);
    assert!(report.residual.iter().all(|&(i, _)| i == 0 || i == 3));
    for i in [1, 2] {
        assert_eq!(report.grid.row(i), cw.row(i));
    }
}

#[test]
fn erasure_free_grid_takes_no_pass() {
    let f = field(&[0, 1, 3]);
    let c = code(&f, &[1, 2, 3, 5], 7);
    let report = c.decode_rows(&c.zero_grid());
    assert_eq!(report.status, DecodeStatus::FullyCorrected);
    assert_eq!(report.passes, 0);
}

#[test]
fn tail_layout_matches_worked_array() {
    let f = field(&[0, 1, 3]);
    let c = code(&f, &[1, 1, 3, 4, 7, 7], 7);
    let cells = c.tail_parity_cells();
    assert_eq!(cells.len(), 23);
    let expect: Vec<(usize, usize)> = [(0, 6), (1, 6)]
        .into_iter()
        .chain((4..7).map(|j| (2, j)))
        .chain((3..7).map(|j| (3, j)))
        .chain((0..7).map(|j| (4, j)))
        .chain((0..7).map(|j| (5, j)))
        .collect();
    assert_eq!(cells, expect);
}

#[test]
fn encode_basics() {
    let f = field(&[0, 1, 3]);
    let c = code(&f, &[1, 1, 3, 4, 7, 7], 7);
    assert_eq!(c.encode(&[0; 19]).unwrap(), c.zero_grid());
    assert!(c.encode(&[1, 2]).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let data: Vec<u16> = (0..19).map(|_| f.random(&mut rng)).collect();
    let g = c.encode(&data).unwrap();
    assert!(c.is_codeword(&g).unwrap());
    let parity = c.tail_parity_cells();
    let kept: Vec<u16> = (0..6)
        .flat_map(|i| (0..7).map(move |j| (i, j)))
        .filter(|cell| !parity.contains(cell))
        .map(|(i, j)| *g.get(i, j))
        .collect();
    assert_eq!(kept, data);
}

#[test]
fn single_nonzero_cell_is_not_a_codeword() {
    let f = field(&[0, 1, 3]);
    let c = code(&f, &[1, 1, 3, 4, 7, 7], 7);
    let mut g = c.zero_grid();
    assert!(c.is_codeword(&g).unwrap());
    g.set(3, 2, 5);
    assert!(!c.is_codeword(&g).unwrap());
    g.erase(0, 0);
    assert!(c.is_codeword(&g).is_err());
}

#[test]
fn minimum_weight_codewords_have_rectangular_support() {
    let f = field(&[0, 1, 3]);
    let c = code(&f, &[1, 1, 3, 4, 7, 7], 7);
    let g0 = c.min_weight_codeword(0, &[0, 1, 2, 3, 4], &[1, 5]).unwrap();
    assert!(c.is_codeword(&g0).unwrap());
    assert_eq!(g0.weight(&0), 10);
    let g2 = c.min_weight_codeword(2, &[1, 3, 5], &[0, 2, 3, 4, 6]).unwrap();
    assert!(c.is_codeword(&g2).unwrap());
    assert_eq!(g2.weight(&0), 15);
    let support = g2.support(&0);
    assert!(support.iter().all(|(i, j)| [1, 3, 5].contains(i) && [0, 2, 3, 4, 6].contains(j)));
    assert!(c.min_weight_codeword(0, &[0, 1], &[0, 1]).is_err());
}

#[test]
fn assembled_parity_check_has_the_right_rank() {
    let f = field(&[0, 1, 3]);
    for (entries, n) in [
        (&[1usize, 1, 3, 4, 7, 7][..], 7),
        (&[1, 2, 3, 5], 7),
        (&[1, 1, 2, 5], 5),
        (&[0, 0, 1, 1, 2, 3, 4], 4),
        (&[2, 2, 2, 3, 4, 4, 6], 6),
    ] {
        let c = code(&f, entries, n);
        let h = c.parity_check_matrix();
        assert_eq!(c.m() * c.n() - h.rank(), c.dimension(), "{}", c.profile());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cw = random_codeword(&c, &mut rng);
        assert!(h.is_codeword(cw.cells()));
    }
}

// Random patterns accepted by the row predicate must decode exactly, and
// rejected ones must still fill in exactly the dominated prefix.
#[test]
fn decode_rows_agrees_with_the_row_predicate() {
    let f = field(&[0, 1, 4]);
    let panel: &[(&[usize], usize)] = &[
        (&[1, 1, 3, 4, 7, 7], 7),
        (&[1, 2, 3, 5], 7),
        (&[1, 3, 6, 8, 9], 10),
        (&[3, 3, 5, 8, 8, 15], 15),
        (&[0, 0, 1, 1, 2, 3, 4], 4),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for &(entries, n) in panel {
        let c = code(&f, entries, n);
        let (m, n) = (c.m(), c.n());
        for _ in 0..300 {
            let cw = random_codeword(&c, &mut rng);
            let mut g = cw.clone();
            let w = rng.gen_range(0..=c.profile().parity_count());
            for k in sample(&mut rng, m * n, w) {
                g.erase(k / n, k % n);
                g.set(k / n, k % n, f.random(&mut rng));
            }
            let (ok, rows) = c.profile().row_correctable(&g.row_erasure_counts());
            let report = c.decode_rows(&g);
            assert_eq!(ok, report.status == DecodeStatus::FullyCorrected);
            for i in 0..m {
                let expect_fixed = rows.contains(&i);
                let fixed = report.grid.erased_in_row(i).is_empty();
                assert_eq!(fixed, expect_fixed, "row {i} of {}", c.profile());
                if fixed {
                    assert_eq!(report.grid.row(i), cw.row(i));
                }
            }
        }
    }
}
