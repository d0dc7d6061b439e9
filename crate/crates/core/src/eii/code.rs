use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::Profile;
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::grid::{Cell, SymbolGrid};
use crate::matrix::{Matrix, ParityMatrix};
use crate::rs::RsCode;

/// An EII code C(n, u) over a field.
#[derive(Debug)]
pub struct EiiCode<F: Field> {
    field: Arc<F>,
    profile: Profile,
    // one component code per level, C_0 ⊇ ... ⊇ C_t
    codes: Vec<RsCode<F>>,
    tail: OnceLock<Triangulation<F::Elem>>,
}

impl<F: Field> Clone for EiiCode<F> {
    fn clone(&self) -> Self {
        Self {
            field: self.field.clone(),
            profile: self.profile.clone(),
            codes: self.codes.clone(),
            tail: OnceLock::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecodeStatus {
    FullyCorrected,
    PartiallyCorrected,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeReport<E> {
    pub grid: SymbolGrid<E>,
    pub status: DecodeStatus,
    /// Rows (or columns, for a column pass) that had erasures and were filled.
    pub corrected_rows: Vec<usize>,
    pub residual: Vec<Cell>,
    pub passes: usize,
}

impl<E: Clone> DecodeReport<E> {
    pub(crate) fn from_grid(grid: SymbolGrid<E>, before: usize, corrected_rows: Vec<usize>, passes: usize) -> Self {
        let residual = grid.erased_cells();
        let status = if residual.is_empty() {
            DecodeStatus::FullyCorrected
        } else if residual.len() < before {
            DecodeStatus::PartiallyCorrected
        } else {
            DecodeStatus::Failed
        };
        Self {
            grid,
            status,
            corrected_rows,
            residual,
            passes,
        }
    }
}

/// Elimination of the row-combination system for a fixed set of unknown rows.
///
/// Equation r reads `Σ_s a[r][s]·y_s + K_r ∈ C_{L(r)}` with `K_r` the
/// contribution of the known rows. Forward elimination only ever adds deeper
/// equations (smaller r) into shallower ones, so every equation stays in its
/// code; afterwards equation r involves only `y_r, ..., y_{ℓ-1}`.
#[derive(Debug, Clone)]
pub(crate) struct Triangulation<E> {
    /// Unknown rows, most erasures first.
    pub rows: Vec<usize>,
    pub upper: Vec<Vec<E>>,
    // (target r, source s, factor): K_r -= factor · K_s
    ops: Vec<(usize, usize, E)>,
}

impl<E: Clone> Triangulation<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, rows: Vec<usize>) -> Self {
        let l = rows.len();
        let mut a: Vec<Vec<E>> = (0..l)
            .map(|r| rows.iter().map(|&i| f.alpha_pow((r * i) as i64)).collect())
            .collect();
        let mut ops = Vec::new();
        for s in 0..l {
            let pivot_inv = f.inv(&a[s][s]).expect("Vandermonde minors are nonzero");
            for r in s + 1..l {
                if f.is_zero(&a[r][s]) {
                    continue;
                }
                let factor = f.mul(&a[r][s], &pivot_inv);
                for c in s..l {
                    let v = f.sub(&a[r][c], &f.mul(&factor, &a[s][c]));
                    a[r][c] = v;
                }
                ops.push((r, s, factor));
            }
        }
        Self { rows, upper: a, ops }
    }

    pub fn apply<F: Field<Elem = E>>(&self, f: &F, k: &mut [Vec<E>]) {
        for (r, s, factor) in &self.ops {
            let src = k[*s].clone();
            for (x, y) in k[*r].iter_mut().zip(&src) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(factor, y));
                }
            }
        }
    }
}

impl<F: Field> EiiCode<F> {
    pub fn new(field: Arc<F>, profile: Profile) -> Result<Self> {
        let need = profile.m().max(profile.n()) as u64;
        if !field.alpha_order_at_least(need) {
            return Err(Error::OrderTooSmall {
                order: field.alpha_order().unwrap_or(0),
                required: need,
            });
        }
        let codes = profile
            .levels()
            .iter()
            .map(|&u| RsCode::new(field.clone(), profile.n(), u))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            field,
            profile,
            codes,
            tail: OnceLock::new(),
        })
    }

    pub fn field(&self) -> &Arc<F> {
        &self.field
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn m(&self) -> usize {
        self.profile.m()
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn dimension(&self) -> usize {
        self.profile.dimension()
    }

    pub fn min_distance(&self) -> usize {
        self.profile.min_distance()
    }

    /// Component code of level i.
    pub fn component(&self, level: usize) -> &RsCode<F> {
        &self.codes[level]
    }

    /// The column code C(m, u'), over the same field.
    pub fn transpose(&self) -> EiiCode<F> {
        EiiCode::new(self.field.clone(), self.profile.transpose())
            .expect("same field, swapped shape")
    }

    pub fn zero_grid(&self) -> SymbolGrid<F::Elem> {
        SymbolGrid::filled(self.m(), self.n(), self.field.zero())
    }

    fn check_shape(&self, grid: &SymbolGrid<F::Elem>) -> Result<()> {
        if grid.shape() != (self.m(), self.n()) {
            return Err(Error::ShapeMismatch {
                expected: (self.m(), self.n()),
                got: grid.shape(),
            });
        }
        Ok(())
    }

    /// `Σ_j α^(rj) c_j` over the given rows.
    fn combination(&self, grid: &SymbolGrid<F::Elem>, r: usize, rows: impl Iterator<Item = usize>) -> Vec<F::Elem> {
        let f = &*self.field;
        let mut acc = vec![f.zero(); self.n()];
        for j in rows {
            let coef = f.alpha_pow((r * j) as i64);
            for (a, c) in acc.iter_mut().zip(grid.row(j)) {
                if !f.is_zero(c) {
                    *a = f.add(a, &f.mul(&coef, c));
                }
            }
        }
        acc
    }

    /// Membership: every row in C_0 and every combination r in `C_{L(r)}`.
    pub fn is_codeword(&self, grid: &SymbolGrid<F::Elem>) -> Result<bool> {
        self.check_shape(grid)?;
        if grid.has_erasures() {
            return Err(Error::HasErasures);
        }
        if !(0..self.m()).all(|i| self.codes[0].is_codeword(grid.row(i))) {
            return Ok(false);
        }
        Ok((0..self.profile.s_hat(1)).all(|r| {
            let v = self.combination(grid, r, 0..self.m());
            self.codes[self.profile.combination_level(r)].is_codeword(&v)
        }))
    }

    /// Erasure decoding by rows: C_0 first, then triangulation over the rest.
    ///
    /// When the pattern is not fully decodable, the rows of the longest
    /// correctable prefix are still filled in.
    pub fn decode_rows(&self, grid: &SymbolGrid<F::Elem>) -> DecodeReport<F::Elem> {
        self.check_shape(grid).expect("grid shape");
        self.decode_rows_with(grid.clone(), None)
    }

    fn decode_rows_with(&self, mut grid: SymbolGrid<F::Elem>, cached: Option<&Triangulation<F::Elem>>) -> DecodeReport<F::Elem> {
        let f = &*self.field;
        let before = grid.erasure_count();
        if before == 0 {
            return DecodeReport::from_grid(grid, 0, Vec::new(), 0);
        }
        let u0 = self.profile.level(0);
        let mut corrected = Vec::new();
        let mut pending = Vec::new();
        for i in 0..self.m() {
            let erased = grid.erased_in_row(i);
            if erased.is_empty() {
                continue;
            }
            let fixed = (erased.len() <= u0)
                .then(|| self.codes[0].erasure_decode(grid.row(i), &erased))
                .flatten();
            match fixed {
                Some(row) => {
                    for &j in &erased {
                        grid.restore(i, j, row[j].clone());
                    }
                    corrected.push(i);
                }
                None => pending.push((erased.len(), i)),
            }
        }

        let l = pending.len();
        if l > 0 && l <= self.profile.s_hat(1) {
            pending.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let rows: Vec<usize> = pending.iter().map(|&(_, i)| i).collect();
            let built;
            let tri = match cached {
                Some(t) if t.rows == rows => t,
                _ => {
                    built = Triangulation::new(f, rows.clone());
                    &built
                }
            };
            let unknown: Vec<bool> = (0..self.m()).map(|i| rows.contains(&i)).collect();
            let mut k: Vec<Vec<F::Elem>> = (0..l)
                .map(|r| self.combination(&grid, r, (0..self.m()).filter(|&i| !unknown[i])))
                .collect();
            tri.apply(f, &mut k);

            let mut solved: Vec<Option<Vec<F::Elem>>> = vec![None; l];
            for r in (0..l).rev() {
                let row = rows[r];
                let mut known = k[r].clone();
                for s in r + 1..l {
                    let y = solved[s].as_ref().expect("solved from the bottom up");
                    let coef = &tri.upper[r][s];
                    for (a, v) in known.iter_mut().zip(y) {
                        *a = f.add(a, &f.mul(coef, v));
                    }
                }
                let pivot = &tri.upper[r][r];
                let erased = grid.erased_in_row(row);
                let target: Vec<F::Elem> = (0..self.n())
                    .map(|j| f.add(&f.mul(pivot, grid.get(row, j)), &known[j]))
                    .collect();
                let code = &self.codes[self.profile.combination_level(r)];
                let Some(t) = code.erasure_decode(&target, &erased) else {
                    break;
                };
                let pivot_inv = f.inv(pivot).expect("nonzero pivot");
                for &j in &erased {
                    let v = f.mul(&f.sub(&t[j], &known[j]), &pivot_inv);
                    grid.restore(row, j, v);
                }
                solved[r] = Some(grid.row(row).to_vec());
                corrected.push(row);
            }
        }
        corrected.sort_unstable();
        DecodeReport::from_grid(grid, before, corrected, 1)
    }

    /// Parity cells of the tail layout, row-major.
    pub fn tail_parity_cells(&self) -> Vec<Cell> {
        (0..self.m())
            .flat_map(|i| self.profile.tail_parity(i).map(move |j| (i, j)))
            .collect()
    }

    fn tail_triangulation(&self) -> &Triangulation<F::Elem> {
        self.tail.get_or_init(|| {
            let p = &self.profile;
            let u0 = p.level(0);
            let mut rows: Vec<usize> = (0..self.m()).filter(|&i| p.entries()[i] > u0).collect();
            rows.sort_by(|&a, &b| p.entries()[b].cmp(&p.entries()[a]).then(a.cmp(&b)));
            Triangulation::new(&*self.field, rows)
        })
    }

    /// Systematic encoding: data row-major into the non-parity cells of the
    /// tail layout, parity by row decoding with a cached triangulation.
    pub fn encode(&self, data: &[F::Elem]) -> Result<SymbolGrid<F::Elem>> {
        let parity = self.tail_parity_cells();
        let grid = place_data(self, data, &parity)?;
        let report = self.decode_rows_with(grid, Some(self.tail_triangulation()));
        debug_assert_eq!(report.status, DecodeStatus::FullyCorrected);
        Ok(report.grid)
    }

    /// A codeword supported exactly on `rows × cols`, where level j needs
    /// `ŝ_{j+1} + 1` rows and `u_j + 1` columns.
    pub fn min_weight_codeword(&self, level: usize, rows: &[usize], cols: &[usize]) -> Result<SymbolGrid<F::Elem>> {
        let p = &self.profile;
        let f = &*self.field;
        if level >= p.t() || rows.len() != p.s_hat(level + 1) + 1 || cols.len() != p.level(level) + 1 {
            return Err(Error::ParameterOutOfRange(format!(
                "level {level} needs {} rows and {} columns",
                p.s_hat(level + 1) + 1,
                p.level(level) + 1
            )));
        }
        if rows.iter().any(|&i| i >= self.m()) || cols.iter().any(|&j| j >= self.n()) {
            return Err(Error::ParameterOutOfRange("index outside the grid".into()));
        }
        // w ∈ C_j of weight u_j + 1 on cols
        let mut w = vec![f.zero(); self.n()];
        w[cols[0]] = f.one();
        let w = self.codes[level]
            .erasure_decode(&w, &cols[1..])
            .expect("u_j erasures are always decodable");
        // v with Σ_s v_s α^(r·i_s) = 0 for r < ŝ_{j+1}
        let h = p.s_hat(level + 1);
        let vander = Matrix::from_fn(h, rows.len(), |r, s| f.alpha_pow((r * rows[s]) as i64));
        let v = vander.null_vector(f).expect("more columns than rows");
        let mut grid = self.zero_grid();
        for (s, &i) in rows.iter().enumerate() {
            let scaled: Vec<F::Elem> = w.iter().map(|x| f.mul(&v[s], x)).collect();
            grid.set_row(i, &scaled);
        }
        Ok(grid)
    }

    /// Full parity-check matrix on the row-major flattening of the grid: the
    /// C_0 checks of each row, then for each combination r the checks of
    /// `C_{L(r)}` applied to `Σ_j α^(rj) c_j`. Dependent rows are kept.
    pub fn parity_check_matrix(&self) -> ParityMatrix<F> {
        let f = &*self.field;
        let (m, n) = (self.m(), self.n());
        let u0 = self.profile.level(0);
        let mut h = Matrix::filled(0, m * n, f.zero());
        for i in 0..m {
            for k in 0..u0 {
                let mut row = vec![f.zero(); m * n];
                for c in 0..n {
                    row[i * n + c] = f.alpha_pow((k * c) as i64);
                }
                h.push_row(row);
            }
        }
        for r in 0..self.profile.s_hat(1) {
            let u = self.profile.level(self.profile.combination_level(r));
            for k in 0..u {
                let row = (0..m * n)
                    .map(|x| f.alpha_pow((r * (x / n) + k * (x % n)) as i64))
                    .collect();
                h.push_row(row);
            }
        }
        ParityMatrix::new(self.field.clone(), h)
    }
}

pub(crate) fn place_data<F: Field>(code: &EiiCode<F>, data: &[F::Elem], parity: &[Cell]) -> Result<SymbolGrid<F::Elem>> {
    let k = code.dimension();
    if data.len() != k {
        return Err(Error::WrongDataLength {
            expected: k,
            got: data.len(),
        });
    }
    let mut grid = code.zero_grid();
    grid.erase_all(parity);
    let mut it = data.iter();
    for i in 0..code.m() {
        for j in 0..code.n() {
            if !grid.is_erased(i, j) {
                grid.set(i, j, it.next().expect("counted").clone());
            }
        }
    }
    Ok(grid)
}
