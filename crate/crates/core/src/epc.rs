//! Extended product codes EP(m, v; n, h; g): the distance upper bound, its
//! LRC special case, constructions meeting it, and brute-force distance
//! oracles on explicit parity-check matrices.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eii::{EiiCode, Profile};
use crate::error::{Error, Result};
use crate::gf::{build_field, build_mp_field, Field, FieldContext, Gf2Poly};
use crate::matrix::{erasure_solve, IncrementalBasis, Matrix, ParityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EpcParams {
    pub m: usize,
    pub n: usize,
    pub v: usize,
    pub h: usize,
    pub g: usize,
}

impl std::fmt::Display for EpcParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EP({},{};{},{};{})", self.m, self.v, self.n, self.h, self.g)
    }
}

/// v = s_t, h = u_0, and g counts every parity beyond the product code.
pub fn epc_params(profile: &Profile) -> EpcParams {
    let (m, n) = (profile.m(), profile.n());
    let t = profile.t();
    let v = profile.multiplicities()[t];
    let h = profile.level(0);
    let g = profile.parity_count() - h * m - v * (n - h);
    EpcParams { m, n, v, h, g }
}

/// One evaluation of the bound at a given a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundTerm {
    pub a: usize,
    pub b: usize,
    pub r: usize,
    pub d: usize,
}

fn bound_term(v: usize, h: usize, g: usize, a: usize) -> BoundTerm {
    let b = (g + 1) / a;
    let r = g + 1 - a * b;
    let mut d = (v + b) * (h + a);
    if r != 0 {
        d += h + r;
    }
    BoundTerm { a, b, r, d }
}

/// All terms over `⌈(g+1)/(m-v)⌉ ≤ a ≤ min(g+1, n-h)`.
pub fn distance_bound_terms(p: &EpcParams) -> Result<Vec<BoundTerm>> {
    if p.v >= p.m || p.h >= p.n {
        return Err(Error::ParameterOutOfRange(format!("{p} needs v < m and h < n")));
    }
    let lo = (p.g + 1).div_ceil(p.m - p.v);
    let hi = (p.g + 1).min(p.n - p.h);
    if lo > hi {
        return Err(Error::EmptyRange);
    }
    Ok((lo..=hi).map(|a| bound_term(p.v, p.h, p.g, a)).collect())
}

/// Upper bound on the minimum distance of any EP(m, v; n, h; g) code.
pub fn distance_bound(p: &EpcParams) -> Result<usize> {
    Ok(distance_bound_terms(p)?.iter().map(|t| t.d).min().expect("non-empty"))
}

/// The bound when m and n are large enough not to cut the range: a runs over
/// `1..=g+1`.
pub fn distance_bound_unbounded(v: usize, h: usize, g: usize) -> usize {
    (1..=g + 1).map(|a| bound_term(v, h, g, a).d).min().expect("non-empty")
}

/// `⌈(g+1)/(n-h)⌉·h + g + 1`.
pub fn lrc_bound(n: usize, h: usize, g: usize) -> usize {
    assert!(h < n, "h < n");
    (g + 1).div_ceil(n - h) * h + g + 1
}

fn theorem30_check(m: usize, n: usize, v: usize, h: usize, g: usize) -> Result<()> {
    let ok = v + 1 < m && v <= h && h + g < n && g >= 1 && g <= (h - v + 1).div_ceil(v + 1);
    if ok {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!(
            "need v < m-1, v ≤ h, h+g < n and 1 ≤ g ≤ ⌈(h-v+1)/(v+1)⌉; got m={m} n={n} v={v} h={h} g={g}"
        )))
    }
}

/// `(h, ..., h, h+g, n, ..., n)` with m-v-1 entries h and v entries n.
pub fn theorem30_profile(m: usize, n: usize, v: usize, h: usize, g: usize) -> Result<Profile> {
    theorem30_check(m, n, v, h, g)?;
    let mut e = vec![h; m - v - 1];
    e.push(h + g);
    e.extend(std::iter::repeat_n(n, v));
    Profile::new(e, n)
}

/// Its distance, `(h+g+1)(v+1)`.
pub fn theorem30_distance(v: usize, h: usize, g: usize) -> usize {
    (h + g + 1) * (v + 1)
}

pub fn theorem30_code<F: Field>(field: Arc<F>, m: usize, n: usize, v: usize, h: usize, g: usize) -> Result<EiiCode<F>> {
    EiiCode::new(field, theorem30_profile(m, n, v, h, g)?)
}

/// Whether the code's distance meets the bound for its parameters.
pub fn is_optimal(profile: &Profile) -> Result<bool> {
    Ok(profile.min_distance() == distance_bound(&epc_params(profile))?)
}

fn product_rows<F: Field>(f: &F, m: usize, n: usize) -> Matrix<F::Elem> {
    let mut h = Matrix::filled(0, m * n, f.zero());
    for i in 0..m {
        h.push_row((0..m * n).map(|x| if x / n == i { f.one() } else { f.zero() }).collect());
    }
    for j in 0..n {
        h.push_row((0..m * n).map(|x| if x % n == j { f.one() } else { f.zero() }).collect());
    }
    h
}

/// The single-parity product code plus the rows `(α^j)` and `(α^-j)`.
pub fn build_h2<F: Field>(field: Arc<F>, m: usize, n: usize) -> Result<ParityMatrix<F>> {
    if m < 3 || n < 3 {
        return Err(Error::ParameterOutOfRange("H2 needs m, n ≥ 3".into()));
    }
    let need = (m * n) as u64;
    if !field.alpha_order_at_least(need) {
        return Err(Error::OrderTooSmall {
            order: field.alpha_order().unwrap_or(0),
            required: need,
        });
    }
    let f = &*field;
    let mut h = product_rows(f, m, n);
    h.push_row((0..m * n).map(|j| f.alpha_pow(j as i64)).collect());
    h.push_row((0..m * n).map(|j| f.alpha_pow(-(j as i64))).collect());
    Ok(ParityMatrix::new(field.clone(), h))
}

/// `Σ_{i<g} (i+1)(mn-g+i)`, the field degree H(m, n; g) needs.
pub fn hg_required_degree(m: usize, n: usize, g: usize) -> usize {
    (0..g).map(|i| (i + 1) * (m * n - g + i)).sum()
}

/// The single-parity product code plus g rows `(α^((i+1)j))`.
pub fn build_hg<F: Field>(field: Arc<F>, m: usize, n: usize, g: usize) -> Result<ParityMatrix<F>> {
    let required = hg_required_degree(m, n, g);
    if field.degree() < required {
        return Err(Error::FieldTooSmall {
            degree: field.degree(),
            required,
        });
    }
    let need = (m * n) as u64;
    if g > 0 && !field.alpha_order_at_least(need) {
        return Err(Error::OrderTooSmall {
            order: field.alpha_order().unwrap_or(0),
            required: need,
        });
    }
    let f = &*field;
    let mut h = product_rows(f, m, n);
    for i in 0..g {
        h.push_row((0..m * n).map(|j| f.alpha_pow(((i + 1) * j) as i64)).collect());
    }
    Ok(ParityMatrix::new(field.clone(), h))
}

/// GF(2^b) over the smallest irreducible polynomial of degree b.
pub fn irreducible_field(degree: usize) -> FieldContext {
    build_field(degree, &Gf2Poly::smallest_irreducible(degree)).expect("irreducible by construction")
}

/// Smallest prime p with `p - 1 ≥ degree` and `M_p(x)` irreducible.
pub fn mp_prime_at_least(degree: usize) -> usize {
    (degree + 1..)
        .find(|&p| build_mp_field(p).is_ok())
        .expect("such primes are plentiful")
}

/// A field large enough for H(m, n; g): the M_p route when requested,
/// otherwise the smallest irreducible of exactly the required degree.
pub fn hg_field(m: usize, n: usize, g: usize, prefer_mp: bool) -> FieldContext {
    let required = hg_required_degree(m, n, g).max(1);
    if prefer_mp {
        build_mp_field(mp_prime_at_least(required)).expect("checked")
    } else {
        irreducible_field(required)
    }
}

/// Solves for the erased coordinates against any parity-check matrix.
pub fn matrix_erasure_decode<F: Field>(h: &ParityMatrix<F>, word: &[F::Elem], erased: &[usize]) -> Option<Vec<F::Elem>> {
    erasure_solve(&*h.field, &h.matrix, word, erased)
}

/// `Σ (i+1)·j_i`, the degree of the determinant of the matrix `x^((i+1)j_k)`.
pub fn lemma32_degree(js: &[usize], g: usize) -> usize {
    assert_eq!(js.len(), g, "need g exponents");
    assert!(js.windows(2).all(|w| w[0] < w[1]), "exponents must increase");
    js.iter().enumerate().map(|(i, &j)| (i + 1) * j).sum()
}

/// Outcome of an exhaustive distance search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceSearch {
    /// Smallest dependent column-set size, or `cap + 1` when none is ≤ cap.
    pub distance: usize,
    /// A dependent set of that size (the support of a minimum-weight codeword).
    pub witness: Option<Vec<usize>>,
}

/// Largest search the exhaustive oracles will start.
pub const SEARCH_LIMIT: u128 = 1 << 26;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Smallest number of linearly dependent columns of `h`, searched up to `cap`.
///
/// Small-dimension codes enumerate codewords directly; otherwise a depth-first
/// search over column subsets keeps an incremental echelon basis and stops a
/// branch at its first dependency.
pub fn exhaustive_min_distance<F: Field>(h: &ParityMatrix<F>, cap: usize) -> Result<DistanceSearch> {
    let f = &*h.field;
    let reduced = h.matrix.row_basis(f);
    let cols = reduced.cols();
    let dim = cols - reduced.rows();
    let cap = cap.min(cols);

    let codewords = h.field.size().and_then(|q| {
        let count = (q as u128).checked_pow(dim as u32)?;
        Some(count / (q as u128 - 1))
    });
    let subsets: u128 = (0..=cap).map(|w| binomial(cols, w)).sum();
    if let Some(c) = codewords {
        if c <= subsets.min(SEARCH_LIMIT) {
            return Ok(min_weight_by_enumeration(f, &reduced, cap));
        }
    }
    if subsets > SEARCH_LIMIT {
        return Err(Error::TooLarge {
            patterns: subsets,
            limit: SEARCH_LIMIT,
        });
    }
    Ok(min_dependent_by_dfs(f, &reduced, cap))
}

fn min_dependent_by_dfs<F: Field>(f: &F, h: &Matrix<F::Elem>, cap: usize) -> DistanceSearch {
    let columns: Vec<Vec<F::Elem>> = (0..h.cols()).map(|j| h.column(j)).collect();
    let best = AtomicUsize::new(cap + 1);
    let witness = Mutex::new(None);

    fn dfs<F: Field>(
        f: &F,
        columns: &[Vec<F::Elem>],
        basis: &mut IncrementalBasis<F::Elem>,
        chosen: &mut Vec<usize>,
        best: &AtomicUsize,
        witness: &Mutex<Option<Vec<usize>>>,
    ) {
        let start = chosen.last().map_or(0, |&c| c + 1);
        for c in start..columns.len() {
            // adding c makes a set of size chosen.len() + 1
            if chosen.len() + 1 >= best.load(Ordering::Relaxed) {
                return;
            }
            if basis.push(f, columns[c].clone()) {
                chosen.push(c);
                dfs(f, columns, basis, chosen, best, witness);
                chosen.pop();
                basis.pop();
            } else {
                let size = chosen.len() + 1;
                let mut w = witness.lock().unwrap();
                if size < best.load(Ordering::Relaxed) {
                    best.store(size, Ordering::Relaxed);
                    let mut set = chosen.clone();
                    set.push(c);
                    *w = Some(set);
                }
            }
        }
    }

    (0..columns.len()).into_par_iter().for_each(|c0| {
        if best.load(Ordering::Relaxed) <= 1 {
            return;
        }
        let mut basis = IncrementalBasis::new();
        if !basis.push(f, columns[c0].clone()) {
            let mut w = witness.lock().unwrap();
            if best.load(Ordering::Relaxed) > 1 {
                best.store(1, Ordering::Relaxed);
                *w = Some(vec![c0]);
            }
            return;
        }
        let mut chosen = vec![c0];
        dfs(f, &columns, &mut basis, &mut chosen, &best, &witness);
    });
    let distance = best.into_inner();
    let witness = witness.into_inner().unwrap();
    DistanceSearch { distance, witness }
}

fn min_weight_by_enumeration<F: Field>(f: &F, h: &Matrix<F::Elem>, cap: usize) -> DistanceSearch {
    let cols = h.cols();
    // generator rows from the reduced echelon form: one per free column
    let mut r = h.clone();
    let pivots = r.rref(f);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let gens: Vec<Vec<F::Elem>> = free
        .iter()
        .map(|&fc| {
            let mut x = vec![f.zero(); cols];
            x[fc] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = f.sub(&f.zero(), r.get(row, fc));
            }
            x
        })
        .collect();
    let k = gens.len();
    if k == 0 {
        return DistanceSearch {
            distance: cap + 1,
            witness: None,
        };
    }
    let q = f.size().expect("small field") as usize;
    let elems: Vec<F::Elem> = (0..q as u64).map(|v| f.from_poly(&Gf2Poly::from_u64(v))).collect();

    let mut best = cap + 1;
    let mut witness = None;
    // coefficient vectors whose leading nonzero entry is 1
    for lead in 0..k {
        let tail = k - lead - 1;
        let total = q.pow(tail as u32);
        for idx in 0..total {
            let mut word = gens[lead].clone();
            let mut rest = idx;
            for g in gens.iter().skip(lead + 1) {
                let c = &elems[rest % q];
                rest /= q;
                if f.is_zero(c) {
                    continue;
                }
                for (w, x) in word.iter_mut().zip(g) {
                    if !f.is_zero(x) {
                        *w = f.add(w, &f.mul(c, x));
                    }
                }
            }
            let weight = word.iter().filter(|x| !f.is_zero(x)).count();
            if weight < best {
                best = weight;
                witness = Some((0..cols).filter(|&j| !f.is_zero(&word[j])).collect());
            }
        }
    }
    DistanceSearch {
        distance: best,
        witness,
    }
}

/// Counts the weight-w erasure patterns whose columns are independent.
/// Returns `(correctable, total, first failing pattern)`.
pub fn weight_pattern_census<F: Field>(h: &ParityMatrix<F>, w: usize) -> Result<(u128, u128, Option<Vec<usize>>)> {
    let cols = h.cols();
    let total = binomial(cols, w);
    if total > SEARCH_LIMIT {
        return Err(Error::TooLarge {
            patterns: total,
            limit: SEARCH_LIMIT,
        });
    }
    let f = &*h.field;
    let reduced = h.matrix.row_basis(f);
    let patterns = combinations(cols, w);
    let results: Vec<(bool, Vec<usize>)> = patterns
        .into_par_iter()
        .map(|p| (reduced.select_columns(&p).rank(f) == w, p))
        .collect();
    let correctable = results.iter().filter(|r| r.0).count() as u128;
    let failing = results.into_iter().find(|r| !r.0).map(|r| r.1);
    Ok((correctable, total, failing))
}

/// All w-subsets of `0..n` in colexicographic order.
pub fn combinations(n: usize, w: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if w > n {
        return out;
    }
    let mut c: Vec<usize> = (0..w).collect();
    loop {
        out.push(c.clone());
        // colex successor: bump the first index that can move, reset the ones below
        let mut i = 0;
        while i < w && (if i + 1 < w { c[i] + 1 == c[i + 1] } else { c[i] + 1 == n }) {
            i += 1;
        }
        if i == w {
            return out;
        }
        c[i] += 1;
        for (k, x) in c.iter_mut().enumerate().take(i) {
            *x = k;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: usize, n: usize, v: usize, h: usize, g: usize) -> EpcParams {
        EpcParams { m, n, v, h, g }
    }

    #[test]
    fn params_from_profiles() {
        let p = Profile::new(vec![1, 1, 3, 4, 7, 7], 7).unwrap();
        assert_eq!(epc_params(&p), params(6, 7, 2, 1, 5));
        let q = Profile::new(vec![1, 1, 1, 1, 2, 3, 9], 9).unwrap();
        assert_eq!(epc_params(&q), params(7, 9, 1, 1, 3));
        let prod = Profile::new(vec![2, 2, 2, 6, 6], 6).unwrap();
        assert_eq!(epc_params(&prod).g, 0);
    }

    #[test]
    fn worked_bound() {
        let terms = distance_bound_terms(&params(5, 8, 2, 3, 3)).unwrap();
        let ds: Vec<usize> = terms.iter().map(|t| t.d).collect();
        assert_eq!(ds, vec![20, 22, 21]);
        assert_eq!(distance_bound(&params(5, 8, 2, 3, 3)).unwrap(), 20);
    }

    #[test]
    fn unbounded_table() {
        let table: Vec<usize> = (0..=13).map(|g| distance_bound_unbounded(1, 1, g)).collect();
        assert_eq!(table, vec![4, 6, 8, 9, 11, 12, 14, 15, 16, 18, 19, 20, 22, 23]);
        // large m, n reproduce the same numbers through the bounded form
        for g in 0..=13 {
            assert_eq!(
                distance_bound(&params(50, 50, 1, 1, g)).unwrap(),
                distance_bound_unbounded(1, 1, g)
            );
        }
    }

    #[test]
    fn lrc_bound_values() {
        assert_eq!(lrc_bound(8, 2, 16), 23);
        for h in 0..6 {
            assert_eq!(lrc_bound(7, h, 0), h + 1);
        }
        for n in 2..10 {
            for h in 0..n {
                for g in 0..20 {
                    let b = distance_bound(&params(1000, n, 0, h, g)).unwrap();
                    assert_eq!(b, lrc_bound(n, h, g), "n={n} h={h} g={g}");
                }
            }
        }
    }

    #[test]
    fn empty_range() {
        // ⌈(g+1)/(m-v)⌉ = 3 > n - h = 2
        assert_eq!(distance_bound(&params(2, 4, 1, 2, 2)), Err(Error::EmptyRange));
    }

    #[test]
    fn theorem30_profiles() {
        let p = theorem30_profile(5, 8, 1, 3, 2).unwrap();
        assert_eq!(p.entries(), &[3, 3, 3, 5, 8]);
        assert_eq!(p.min_distance(), 12);
        assert_eq!(theorem30_distance(1, 3, 2), 12);
        assert!(theorem30_profile(5, 8, 1, 1, 2).is_err());
        let lrc = theorem30_profile(4, 8, 0, 2, 3).unwrap();
        assert_eq!(lrc.min_distance(), 2 + 3 + 1);
    }

    #[test]
    fn hg_degrees() {
        assert_eq!(hg_required_degree(3, 3, 2), 23);
        assert_eq!(hg_required_degree(4, 9, 3), 206);
        assert_eq!(hg_required_degree(3, 3, 0), 0);
    }

    #[test]
    fn determinant_degrees() {
        assert_eq!(lemma32_degree(&[22, 23, 32], 3), 164);
        assert_eq!(lemma32_degree(&[0], 1), 0);
    }

    #[test]
    fn colex_combinations() {
        let c = combinations(4, 2);
        assert_eq!(
            c,
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(20, 5).len(), 15504);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
