//! m × n arrays of symbols with an erasure mask.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolGrid<E> {
    rows: usize,
    cols: usize,
    cells: Vec<E>,
    erased: Vec<bool>,
}

/// A cell coordinate `(row, col)`.
pub type Cell = (usize, usize);

impl<E: Clone> SymbolGrid<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Self {
            rows,
            cols,
            cells: vec![value; rows * cols],
            erased: vec![false; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let mut cells = Vec::with_capacity(m * n);
        for r in rows {
            assert_eq!(r.len(), n, "ragged grid");
            cells.extend(r);
        }
        Self {
            rows: m,
            cols: n,
            cells,
            erased: vec![false; m * n],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.cells[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.cells[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    pub fn set_row(&mut self, i: usize, values: &[E]) {
        self.cells[i * self.cols..(i + 1) * self.cols].clone_from_slice(values);
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// All cells, row-major.
    pub fn cells(&self) -> &[E] {
        &self.cells
    }

    pub fn is_erased(&self, i: usize, j: usize) -> bool {
        self.erased[i * self.cols + j]
    }

    pub fn erase(&mut self, i: usize, j: usize) {
        self.erased[i * self.cols + j] = true;
    }

    pub fn erase_all(&mut self, cells: &[Cell]) {
        for &(i, j) in cells {
            self.erase(i, j);
        }
    }

    /// Stores a value and clears the erasure flag.
    pub fn restore(&mut self, i: usize, j: usize, v: E) {
        self.set(i, j, v);
        self.erased[i * self.cols + j] = false;
    }

    pub fn mask(&self) -> &[bool] {
        &self.erased
    }

    pub fn has_erasures(&self) -> bool {
        self.erased.iter().any(|&e| e)
    }

    pub fn erasure_count(&self) -> usize {
        self.erased.iter().filter(|&&e| e).count()
    }

    pub fn erased_in_row(&self, i: usize) -> Vec<usize> {
        (0..self.cols).filter(|&j| self.is_erased(i, j)).collect()
    }

    pub fn row_erasure_counts(&self) -> Vec<usize> {
        (0..self.rows).map(|i| self.erased_in_row(i).len()).collect()
    }

    pub fn col_erasure_counts(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|j| (0..self.rows).filter(|&i| self.is_erased(i, j)).count())
            .collect()
    }

    /// Erased coordinates, row-major.
    pub fn erased_cells(&self) -> Vec<Cell> {
        (0..self.rows * self.cols)
            .filter(|&k| self.erased[k])
            .map(|k| (k / self.cols, k % self.cols))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self {
            rows: self.cols,
            cols: self.rows,
            cells: Vec::with_capacity(self.cells.len()),
            erased: Vec::with_capacity(self.cells.len()),
        };
        for j in 0..self.cols {
            for i in 0..self.rows {
                t.cells.push(self.get(i, j).clone());
                t.erased.push(self.is_erased(i, j));
            }
        }
        t
    }

    /// Hamming weight against `zero`, counting every cell.
    pub fn weight(&self, zero: &E) -> usize
    where
        E: PartialEq,
    {
        self.cells.iter().filter(|c| *c != zero).count()
    }

    /// Cells different from `zero`.
    pub fn support(&self, zero: &E) -> Vec<Cell>
    where
        E: PartialEq,
    {
        (0..self.rows * self.cols)
            .filter(|&k| self.cells[k] != *zero)
            .map(|k| (k / self.cols, k % self.cols))
            .collect()
    }
}

/// Parity or data placement as a sorted coordinate list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSet {
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<Cell>,
}
