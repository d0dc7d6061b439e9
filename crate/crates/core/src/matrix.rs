//! Dense matrices over a [`Field`] and the elimination routines the decoders
//! and oracles share.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::gf::{Field, FieldDescriptor};

/// Row-major dense matrix of field elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Self {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn push_row(&mut self, row: Vec<E>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, k| self.get(i, cols[k]).clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
}

impl<E: Clone> Matrix<E> {
    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| dot(f, self.row(i), v))
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref<F: Field<Elem = E>>(&mut self, f: &F) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || f.is_zero(self.get(i, c)) {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), &f.mul(&factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        self.clone().rref(f).len()
    }

    /// A row basis of the row space (rows of the reduced echelon form).
    pub fn row_basis<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let mut m = self.clone();
        let rank = m.rref(f).len();
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// A nonzero vector `x` with `self · x = 0`, if the columns are dependent.
    pub fn null_vector<F: Field<Elem = E>>(&self, f: &F) -> Option<Vec<E>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free = (0..self.cols).find(|c| !pivots.contains(c))?;
        let mut x = vec![f.zero(); self.cols];
        x[free] = f.one();
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = f.sub(&f.zero(), m.get(r, free));
        }
        Some(x)
    }
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if !f.is_zero(x) && !f.is_zero(y) {
            acc = f.add(&acc, &f.mul(x, y));
        }
    }
    acc
}

/// Solves `a · x = rhs` for a unique `x`.
///
/// Returns `None` when the columns of `a` are dependent or the system is
/// inconsistent.
pub fn solve<F: Field>(f: &F, a: &Matrix<F::Elem>, rhs: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(a.rows(), rhs.len());
    let cols = a.cols();
    let mut aug = Matrix::from_fn(a.rows(), cols + 1, |i, j| {
        if j < cols {
            a.get(i, j).clone()
        } else {
            rhs[i].clone()
        }
    });
    let pivots = aug.rref(f);
    if pivots.len() != cols || pivots.contains(&cols) {
        return None;
    }
    Some((0..cols).map(|r| aug.get(r, cols).clone()).collect())
}

/// Erasure decoding against an arbitrary parity-check matrix: fills `erased`
/// positions of `word` so that `h · word = 0`.
///
/// Fails when the erased columns are dependent or the known symbols admit no
/// completion.
pub fn erasure_solve<F: Field>(
    f: &F,
    h: &Matrix<F::Elem>,
    word: &[F::Elem],
    erased: &[usize],
) -> Option<Vec<F::Elem>> {
    assert_eq!(word.len(), h.cols());
    let mut is_erased = vec![false; word.len()];
    for &e in erased {
        is_erased[e] = true;
    }
    let syndrome: Vec<F::Elem> = (0..h.rows())
        .map(|i| {
            let mut acc = f.zero();
            for (j, w) in word.iter().enumerate() {
                if !is_erased[j] && !f.is_zero(w) {
                    acc = f.add(&acc, &f.mul(h.get(i, j), w));
                }
            }
            acc
        })
        .collect();
    let sub = h.select_columns(erased);
    let x = solve(f, &sub, &syndrome)?;
    let mut out = word.to_vec();
    for (k, &e) in erased.iter().enumerate() {
        out[e] = x[k].clone();
    }
    Some(out)
}

/// An echelon basis of column vectors that supports push and pop, for
/// depth-first searches over column subsets.
pub struct IncrementalBasis<E> {
    // each entry: (pivot index, vector normalized so vector[pivot] = 1)
    stack: Vec<(usize, Vec<E>)>,
}

impl<E: Clone> Default for IncrementalBasis<E> {
    fn default() -> Self {
        Self { stack: Vec::new() }
    }
}

impl<E: Clone> IncrementalBasis<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.stack.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stack.is_empty()
    }

    /// Adds `v` if it is independent of the basis; returns whether it was.
    pub fn push<F: Field<Elem = E>>(&mut self, f: &F, mut v: Vec<E>) -> bool {
        for (p, b) in &self.stack {
            if f.is_zero(&v[*p]) {
                continue;
            }
            let c = v[*p].clone();
            for (x, y) in v.iter_mut().zip(b) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[p]).expect("nonzero");
        for x in v.iter_mut() {
            *x = f.mul(x, &inv);
        }
        self.stack.push((p, v));
        true
    }

    pub fn pop(&mut self) {
        self.stack.pop();
    }
}

/// A parity-check matrix bundled with its field, exportable as JSON.
#[derive(Debug, Clone)]
pub struct ParityMatrix<F: Field> {
    pub field: Arc<F>,
    pub matrix: Matrix<F::Elem>,
}

/// JSON form of a [`ParityMatrix`]: hex symbols, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityMatrixFile {
    pub field: FieldDescriptor,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl<F: Field> ParityMatrix<F> {
    pub fn new(field: Arc<F>, matrix: Matrix<F::Elem>) -> Self {
        Self { field, matrix }
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank(&*self.field)
    }

    pub fn syndrome(&self, word: &[F::Elem]) -> Vec<F::Elem> {
        self.matrix.mul_vec(&*self.field, word)
    }

    pub fn is_codeword(&self, word: &[F::Elem]) -> bool {
        self.syndrome(word).iter().all(|s| self.field.is_zero(s))
    }

    pub fn columns_independent(&self, cols: &[usize]) -> bool {
        self.matrix.select_columns(cols).rank(&*self.field) == cols.len()
    }

    pub fn to_file(&self) -> ParityMatrixFile {
        ParityMatrixFile {
            field: self.field.descriptor(),
            rows: self.rows(),
            cols: self.cols(),
            entries: (0..self.rows())
                .map(|i| self.matrix.row(i).iter().map(|e| self.field.to_hex(e)).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }
}
