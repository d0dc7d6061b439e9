//! Combined error and erasure decoding of EII codes.
//!
//! Rows are first decoded alone in C_0 within `2i + j ≤ u_0`. The ℓ rows that
//! remain go through the triangulated combination system one at a time: the
//! row isolated by the last equation is decoded with errors and erasures in
//! the code of that equation. When that fails the uncorrected rows are
//! rotated one step to the right and the next row is tried, at most ℓ times
//! per level. If the rows cannot be finished, the same procedure runs once on
//! the columns with the transposed code.

use serde::{Deserialize, Serialize};

use crate::eii::code::Triangulation;
use crate::eii::EiiCode;
use crate::gf::Field;
use crate::grid::SymbolGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorDecodeStatus {
    Corrected,
    /// Rows could not be finished and the column fallback was disabled.
    FailedRows,
    /// Neither rows nor columns could be finished.
    FailedBoth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineOutcome {
    /// Nothing to correct.
    Clean,
    /// Corrected alone in C_0.
    FirstCode { errors: usize },
    /// Corrected through the combination system in `C_level`, after
    /// `rotations` retries at that stage.
    Level {
        level: usize,
        errors: usize,
        rotations: usize,
    },
    Uncorrected,
}

#[derive(Debug, Clone)]
pub struct ErrorDecodeReport<E> {
    pub grid: SymbolGrid<E>,
    pub status: ErrorDecodeStatus,
    pub rows: Vec<LineOutcome>,
    /// Per-column outcomes when the fallback ran.
    pub columns: Option<Vec<LineOutcome>>,
    pub fallback_used: bool,
    pub rotations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorDecodeOptions {
    pub column_fallback: bool,
}

impl Default for ErrorDecodeOptions {
    fn default() -> Self {
        Self {
            column_fallback: true,
        }
    }
}

struct Pass<E> {
    grid: SymbolGrid<E>,
    outcomes: Vec<LineOutcome>,
    rotations: usize,
    done: bool,
}

pub fn decode_errors_erasures<F: Field>(code: &EiiCode<F>, grid: &SymbolGrid<F::Elem>) -> ErrorDecodeReport<F::Elem> {
    decode_errors_erasures_with(code, grid, ErrorDecodeOptions::default())
}

pub fn decode_errors_erasures_with<F: Field>(
    code: &EiiCode<F>,
    grid: &SymbolGrid<F::Elem>,
    options: ErrorDecodeOptions,
) -> ErrorDecodeReport<F::Elem> {
    let rows = line_pass(code, grid.clone());
    if rows.done && verified(code, &rows.grid) {
        return ErrorDecodeReport {
            grid: rows.grid,
            status: ErrorDecodeStatus::Corrected,
            rows: rows.outcomes,
            columns: None,
            fallback_used: false,
            rotations: rows.rotations,
        };
    }
    if !options.column_fallback {
        return ErrorDecodeReport {
            grid: rows.grid,
            status: ErrorDecodeStatus::FailedRows,
            rows: rows.outcomes,
            columns: None,
            fallback_used: false,
            rotations: rows.rotations,
        };
    }
    let columns_code = code.transpose();
    let cols = line_pass(&columns_code, rows.grid.transpose());
    let out = cols.grid.transpose();
    let status = if cols.done && verified(code, &out) {
        ErrorDecodeStatus::Corrected
    } else {
        ErrorDecodeStatus::FailedBoth
    };
    ErrorDecodeReport {
        grid: out,
        status,
        rows: rows.outcomes,
        columns: Some(cols.outcomes),
        fallback_used: true,
        rotations: rows.rotations + cols.rotations,
    }
}

fn verified<F: Field>(code: &EiiCode<F>, grid: &SymbolGrid<F::Elem>) -> bool {
    code.is_codeword(grid).unwrap_or(false)
}

fn line_pass<F: Field>(code: &EiiCode<F>, mut grid: SymbolGrid<F::Elem>) -> Pass<F::Elem> {
    let f = &**code.field();
    let p = code.profile();
    let (m, n) = (code.m(), code.n());
    let mut outcomes = vec![LineOutcome::Clean; m];
    let mut pending: Vec<(usize, usize)> = Vec::new();

    // step 1: each row alone in C_0
    let c0 = code.component(0);
    for i in 0..m {
        let erased = grid.erased_in_row(i);
        match c0.error_erasure_decode(grid.row(i), &erased) {
            Some(d) => {
                if d.errors > 0 || !erased.is_empty() {
                    outcomes[i] = LineOutcome::FirstCode { errors: d.errors };
                }
                for j in 0..n {
                    grid.restore(i, j, d.word[j].clone());
                }
            }
            None => pending.push((erased.len(), i)),
        }
    }

    // erasure count order, most first, ties by index
    pending.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut order: Vec<usize> = pending.into_iter().map(|(_, i)| i).collect();
    let mut total_rotations = 0;

    while !order.is_empty() {
        let l = order.len();
        if l > p.s_hat(1) {
            break;
        }
        let level = p.combination_level(l - 1);
        let component = code.component(level);
        let mut fixed = false;
        for rotation in 0..l {
            let tri = Triangulation::new(f, order.clone());
            let unknown: Vec<bool> = (0..m).map(|i| order.contains(&i)).collect();
            let mut k: Vec<Vec<F::Elem>> = (0..l)
                .map(|r| {
                    let mut acc = vec![f.zero(); n];
                    for i in (0..m).filter(|&i| !unknown[i]) {
                        let coef = f.alpha_pow((r * i) as i64);
                        for (a, c) in acc.iter_mut().zip(grid.row(i)) {
                            *a = f.add(a, &f.mul(&coef, c));
                        }
                    }
                    acc
                })
                .collect();
            tri.apply(f, &mut k);
            let row = order[l - 1];
            let pivot = &tri.upper[l - 1][l - 1];
            let known = &k[l - 1];
            let erased = grid.erased_in_row(row);
            let target: Vec<F::Elem> = (0..n)
                .map(|j| f.add(&f.mul(pivot, grid.get(row, j)), &known[j]))
                .collect();
            if let Some(d) = component.error_erasure_decode(&target, &erased) {
                let pivot_inv = f.inv(pivot).expect("nonzero pivot");
                for j in 0..n {
                    let v = f.mul(&f.sub(&d.word[j], &known[j]), &pivot_inv);
                    grid.restore(row, j, v);
                }
                outcomes[row] = LineOutcome::Level {
                    level,
                    errors: d.errors,
                    rotations: rotation,
                };
                order.pop();
                fixed = true;
                break;
            }
            if rotation + 1 < l {
                order.rotate_right(1);
                total_rotations += 1;
            }
        }
        if !fixed {
            break;
        }
    }
    for &i in &order {
        outcomes[i] = LineOutcome::Uncorrected;
    }
    Pass {
        grid,
        outcomes,
        rotations: total_rotations,
        done: order.is_empty(),
    }
}
