//! Row/column duality: iterative row-column decoding and the balanced parity
//! distribution.

use serde::{Deserialize, Serialize};

use crate::eii::{place_data, DecodeReport, EiiCode, Profile};
use crate::error::Result;
use crate::gf::Field;
use crate::grid::{Cell, SymbolGrid};

pub fn transpose_profile(profile: &Profile) -> Profile {
    profile.transpose()
}

pub fn transpose_grid<E: Clone>(grid: &SymbolGrid<E>) -> SymbolGrid<E> {
    grid.transpose()
}

/// Alternating row and column passes, rows first, until the grid is clean,
/// a row pass and a column pass in a row both remove nothing, or
/// `max_passes` directional passes have run.
pub fn iterative_decode<F: Field>(
    code: &EiiCode<F>,
    grid: &SymbolGrid<F::Elem>,
    max_passes: usize,
) -> DecodeReport<F::Elem> {
    let before = grid.erasure_count();
    let initial: Vec<usize> = (0..grid.rows())
        .filter(|&i| !grid.erased_in_row(i).is_empty())
        .collect();
    let columns = code.transpose();
    let mut g = grid.clone();
    let mut passes = 0;
    let mut idle = 0;
    while g.has_erasures() && passes < max_passes && idle < 2 {
        let remaining = g.erasure_count();
        g = if passes % 2 == 0 {
            code.decode_rows(&g).grid
        } else {
            columns.decode_rows(&g.transpose()).grid.transpose()
        };
        passes += 1;
        idle = if g.erasure_count() < remaining { 0 } else { idle + 1 };
    }
    let corrected = initial
        .into_iter()
        .filter(|&i| g.erased_in_row(i).is_empty())
        .collect();
    DecodeReport::from_grid(g, before, corrected, passes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayoutStyle {
    Tail,
    Balanced,
}

/// Parity cell placement as a sorted coordinate list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityLayout {
    pub rows: usize,
    pub cols: usize,
    pub style: LayoutStyle,
    pub positions: Vec<Cell>,
}

impl ParityLayout {
    pub fn tail(profile: &Profile) -> Self {
        let positions = (0..profile.m())
            .flat_map(|i| profile.tail_parity(i).map(move |j| (i, j)))
            .collect();
        Self {
            rows: profile.m(),
            cols: profile.n(),
            style: LayoutStyle::Tail,
            positions,
        }
    }

    pub fn row_loads(&self) -> Vec<usize> {
        let mut loads = vec![0; self.rows];
        for &(i, _) in &self.positions {
            loads[i] += 1;
        }
        loads
    }

    pub fn col_loads(&self) -> Vec<usize> {
        let mut loads = vec![0; self.cols];
        for &(_, j) in &self.positions {
            loads[j] += 1;
        }
        loads
    }

    /// With `total = q·m + r`: r rows carry q + 1 cells, the rest carry q.
    pub fn is_balanced(&self) -> bool {
        let total = self.positions.len();
        let (q, r) = (total / self.rows, total % self.rows);
        let loads = self.row_loads();
        loads.iter().filter(|&&x| x == q + 1).count() == r
            && loads.iter().filter(|&&x| x == q).count() == self.rows - r
    }
}

/// Balanced placement: the nonzero column loads of the transpose profile in
/// non-increasing order, column j filled cyclically starting where column
/// j - 1 stopped.
pub fn balanced_layout(profile: &Profile) -> ParityLayout {
    let m = profile.m();
    let mut loads: Vec<usize> = profile
        .transpose()
        .entries()
        .iter()
        .copied()
        .filter(|&v| v > 0)
        .collect();
    loads.sort_unstable_by(|a, b| b.cmp(a));
    let mut positions = Vec::new();
    let mut total = 0;
    for (j, &v) in loads.iter().enumerate() {
        let start = total % m;
        if v <= m - start {
            positions.extend((start..start + v).map(|i| (i, j)));
        } else {
            positions.extend((0..v - (m - start)).map(|i| (i, j)));
            positions.extend((start..m).map(|i| (i, j)));
        }
        total += v;
    }
    positions.sort_unstable();
    ParityLayout {
        rows: m,
        cols: profile.n(),
        style: LayoutStyle::Balanced,
        positions,
    }
}

/// Encoding with the balanced layout: data row-major into the other cells,
/// parity by one column-code pass on the transpose.
pub fn encode_balanced<F: Field>(code: &EiiCode<F>, data: &[F::Elem]) -> Result<SymbolGrid<F::Elem>> {
    let layout = balanced_layout(code.profile());
    encode_with_layout(code, data, &layout.positions)
}

pub(crate) fn encode_with_layout<F: Field>(
    code: &EiiCode<F>,
    data: &[F::Elem],
    parity: &[Cell],
) -> Result<SymbolGrid<F::Elem>> {
    let grid = place_data(code, data, parity)?;
    let report = code.transpose().decode_rows(&grid.transpose());
    debug_assert!(report.residual.is_empty());
    Ok(report.grid.transpose())
}

/// Encoding with either layout.
pub fn encode_layout<F: Field>(code: &EiiCode<F>, data: &[F::Elem], style: LayoutStyle) -> Result<SymbolGrid<F::Elem>> {
    match style {
        LayoutStyle::Tail => code.encode(data),
        LayoutStyle::Balanced => encode_balanced(code, data),
    }
}

/// The data cells of a layout, row-major: the inverse of encoding.
pub fn extract_data<E: Clone>(grid: &SymbolGrid<E>, layout: &ParityLayout) -> Vec<E> {
    let mut parity = vec![false; grid.rows() * grid.cols()];
    for &(i, j) in &layout.positions {
        parity[i * grid.cols() + j] = true;
    }
    (0..grid.rows() * grid.cols())
        .filter(|&k| !parity[k])
        .map(|k| grid.get(k / grid.cols(), k % grid.cols()).clone())
        .collect()
}
