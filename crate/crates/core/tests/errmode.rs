use std::sync::Arc;

use eii_codes::errmode::{
    decode_errors_erasures, decode_errors_erasures_with, ErrorDecodeOptions, ErrorDecodeStatus, LineOutcome,
};
use eii_codes::gf::{build_field, Field, Gf2Poly, TableField};
use eii_codes::{DecodeStatus, EiiCode, Profile, SymbolGrid};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gf16() -> Arc<TableField> {
    let m = Gf2Poly::from_exponents(&[0, 1, 4]);
    build_field(4, &m).unwrap().as_table().unwrap().clone()
}

fn code(f: &Arc<TableField>, entries: &[usize], n: usize) -> EiiCode<TableField> {
    EiiCode::new(f.clone(), Profile::new(entries.to_vec(), n).unwrap()).unwrap()
}

fn random_codeword(c: &EiiCode<TableField>, rng: &mut ChaCha8Rng) -> SymbolGrid<u16> {
    let data: Vec<u16> = (0..c.dimension()).map(|_| c.field().random(rng)).collect();
    c.encode(&data).unwrap()
}

fn corrupt(g: &mut SymbolGrid<u16>, f: &TableField, i: usize, j: usize, rng: &mut ChaCha8Rng) {
    let e = f.random_nonzero(rng);
    let v = f.add(g.get(i, j), &e);
    g.set(i, j, v);
}

// errors and erasures per row of a 6 × 15 array
const ERRORS: [&[usize]; 6] = [&[1, 5, 8, 11], &[4], &[1, 4, 7, 11, 13], &[5, 11], &[1], &[3, 6]];
const ERASURES: [&[usize]; 6] = [&[], &[8], &[], &[], &[11], &[1, 5, 11, 13]];

// The trace assumes rows 0, 2, 3 and 5 are detected as uncorrectable in C_0;
// instances where C_0 miscorrects one of them are skipped and counted.
#[test]
fn mixed_pattern_needs_exactly_one_rotation() {
    let f = gf16();
    let c = code(&f, &[3, 3, 5, 8, 8, 15], 15);
    let c0 = c.component(0);
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let mut checked = 0;
    for _ in 0..200 {
        let cw = random_codeword(&c, &mut rng);
        let mut g = cw.clone();
        for i in 0..6 {
            for &j in ERRORS[i] {
                corrupt(&mut g, &f, i, j, &mut rng);
            }
            for &j in ERASURES[i] {
                g.erase(i, j);
            }
        }
        if [0, 2, 3, 5]
            .iter()
            .any(|&i| c0.error_erasure_decode(g.row(i), &g.erased_in_row(i)).is_some())
        {
            continue;
        }
        checked += 1;
        let r = decode_errors_erasures(&c, &g);
        assert_eq!(r.status, ErrorDecodeStatus::Corrected);
        assert_eq!(r.grid, cw);
        assert!(!r.fallback_used);
        assert_eq!(r.rotations, 1);
        assert_eq!(r.rows[1], LineOutcome::FirstCode { errors: 1 });
        assert_eq!(r.rows[4], LineOutcome::FirstCode { errors: 1 });
        let level = |level, errors, rotations| LineOutcome::Level {
            level,
            errors,
            rotations,
        };
        assert_eq!(r.rows[3], level(1, 2, 0));
        assert_eq!(r.rows[0], level(2, 4, 1));
        assert_eq!(r.rows[5], level(2, 2, 0));
        assert_eq!(r.rows[2], level(3, 5, 0));
    }
    assert!(checked >= 150, "only {checked} instances kept");
}

#[test]
fn one_error_per_row_is_fixed_in_the_first_code() {
    let f = gf16();
    let c = code(&f, &[3, 3, 5, 8, 8, 15], 15);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cw = random_codeword(&c, &mut rng);
    let mut g = cw.clone();
    for i in 0..6 {
        let j = rng.gen_range(0..15);
        corrupt(&mut g, &f, i, j, &mut rng);
    }
    let r = decode_errors_erasures(&c, &g);
    assert_eq!(r.status, ErrorDecodeStatus::Corrected);
    assert_eq!(r.grid, cw);
    assert!(r.rows.iter().all(|o| *o == LineOutcome::FirstCode { errors: 1 }));
}

#[test]
fn clean_codeword_is_untouched() {
    let f = gf16();
    let c = code(&f, &[1, 3, 6, 8, 9], 10);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cw = random_codeword(&c, &mut rng);
    let r = decode_errors_erasures(&c, &cw);
    assert_eq!(r.status, ErrorDecodeStatus::Corrected);
    assert_eq!(r.grid, cw);
    assert!(r.rows.iter().all(|o| *o == LineOutcome::Clean));
}

// Without errors and with the fallback off, the result must be the
// erasure-only row decoder's verdict.
#[test]
fn erasures_only_agrees_with_row_decoding() {
    let f = gf16();
    let panel: &[(&[usize], usize)] = &[
        (&[1, 1, 3, 4, 7, 7], 7),
        (&[1, 2, 3, 5], 7),
        (&[1, 3, 6, 8, 9], 10),
        (&[3, 3, 5, 8, 8, 15], 15),
    ];
    let opts = ErrorDecodeOptions { column_fallback: false };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for &(entries, n) in panel {
        let c = code(&f, entries, n);
        let (m, n) = (c.m(), c.n());
        for _ in 0..200 {
            let cw = random_codeword(&c, &mut rng);
            let mut g = cw.clone();
            let w = rng.gen_range(0..=c.profile().parity_count());
            for k in sample(&mut rng, m * n, w) {
                g.erase(k / n, k % n);
            }
            let rows = c.decode_rows(&g);
            let r = decode_errors_erasures_with(&c, &g, opts);
            let full = rows.status == DecodeStatus::FullyCorrected;
            assert_eq!(r.status == ErrorDecodeStatus::Corrected, full, "{}", c.profile());
            if full {
                assert_eq!(r.grid, cw);
            } else {
                assert_eq!(r.status, ErrorDecodeStatus::FailedRows);
            }
        }
    }
}

#[test]
fn column_fallback_rescues_a_row_failure() {
    // rows 0 and 3 stay stuck after the row stage; every column then fits
    let f = gf16();
    let c = code(&f, &[1, 2, 3, 5], 7);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cw = random_codeword(&c, &mut rng);
    let mut g = cw.clone();
    let pattern: [&[usize]; 4] = [&[0, 3, 5, 6], &[1, 3], &[2], &[0, 1, 5, 6]];
    for (i, cols) in pattern.iter().enumerate() {
        for &j in cols.iter() {
            g.erase(i, j);
        }
    }
    let off = decode_errors_erasures_with(&c, &g, ErrorDecodeOptions { column_fallback: false });
    let on = decode_errors_erasures(&c, &g);
    assert_eq!(off.status, ErrorDecodeStatus::FailedRows);
    assert_eq!(on.status, ErrorDecodeStatus::Corrected);
    assert!(on.fallback_used);
    assert_eq!(on.grid, cw);
}
