//! Monte Carlo reliability estimates on erasure masks.
//!
//! Erasure correctability of a linear code depends only on where the
//! erasures are, so every predicate here works on a bit mask and never
//! touches field arithmetic. Trial i draws from its own ChaCha stream
//! `(seed, i)`, which keeps results bit-identical however the trials are
//! scheduled.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eii::Profile;
use crate::grid::Cell;

/// Largest supported grid side, one `u64` bitmask per row.
pub const MAX_SIDE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecoderModel {
    /// Row decoding of the code.
    RowsOnly(Profile),
    /// Column decoding with the transposed code.
    ColsOnly(Profile),
    /// Alternating row and column passes, rows first.
    Iterative(Profile),
    /// Groups of `n_group` cells (grid rows) with `h_local` local parities;
    /// groups with at most `h_local` erasures are repaired, then the pattern
    /// is correctable iff at most `max_residual` erasures remain.
    IdealLrc {
        groups: usize,
        n_group: usize,
        h_local: usize,
        max_residual: usize,
    },
}

impl DecoderModel {
    /// The idealized LRC with global distance `d`. The residual threshold is
    /// d: see the project notes for why not d - 1.
    pub fn ideal_lrc(groups: usize, n_group: usize, h_local: usize, d_global: usize) -> Self {
        DecoderModel::IdealLrc {
            groups,
            n_group,
            h_local,
            max_residual: d_global,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            DecoderModel::RowsOnly(p) | DecoderModel::ColsOnly(p) | DecoderModel::Iterative(p) => (p.m(), p.n()),
            DecoderModel::IdealLrc { groups, n_group, .. } => (*groups, *n_group),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DecoderModel::RowsOnly(_) => "rows",
            DecoderModel::ColsOnly(_) => "cols",
            DecoderModel::Iterative(_) => "iterative",
            DecoderModel::IdealLrc { .. } => "ideal-lrc",
        }
    }

    pub fn profile(&self) -> Option<&Profile> {
        match self {
            DecoderModel::RowsOnly(p) | DecoderModel::ColsOnly(p) | DecoderModel::Iterative(p) => Some(p),
            DecoderModel::IdealLrc { .. } => None,
        }
    }

    fn predicate(&self) -> Predicate {
        let transposed = self.profile().map(Profile::transpose);
        Predicate {
            model: self.clone(),
            transposed,
        }
    }
}

struct Predicate {
    model: DecoderModel,
    transposed: Option<Profile>,
}

/// Rows as bitmasks of erased columns.
#[derive(Clone)]
struct Mask {
    rows: [u64; MAX_SIDE],
    m: usize,
    n: usize,
}

impl Mask {
    fn new(m: usize, n: usize) -> Self {
        assert!(m <= MAX_SIDE && n <= MAX_SIDE, "grid side above {MAX_SIDE}");
        Self {
            rows: [0; MAX_SIDE],
            m,
            n,
        }
    }

    fn set(&mut self, (i, j): Cell) {
        self.rows[i] |= 1 << j;
    }

    fn is_empty(&self) -> bool {
        self.rows[..self.m].iter().all(|&r| r == 0)
    }

    fn transpose(&self) -> Mask {
        let mut t = Mask::new(self.n, self.m);
        for i in 0..self.m {
            let mut bits = self.rows[i];
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                t.rows[j] |= 1 << i;
                bits &= bits - 1;
            }
        }
        t
    }
}

// Clears the rows of the dominated prefix; returns whether all rows passed.
fn row_pass(profile: &Profile, mask: &mut Mask) -> bool {
    let m = mask.m;
    let mut order = [(0u32, 0u8); MAX_SIDE];
    for (i, slot) in order.iter_mut().enumerate().take(m) {
        *slot = (mask.rows[i].count_ones(), i as u8);
    }
    let order = &mut order[..m];
    order.sort_unstable();
    let entries = profile.entries();
    let mut all = true;
    for (k, &(count, i)) in order.iter().enumerate() {
        if count as usize > entries[k] {
            all = false;
            break;
        }
        mask.rows[i as usize] = 0;
    }
    all
}

impl Predicate {
    fn correctable(&self, mask: &Mask) -> bool {
        match &self.model {
            DecoderModel::RowsOnly(p) => row_pass(p, &mut mask.clone()),
            DecoderModel::ColsOnly(_) => row_pass(self.transposed.as_ref().unwrap(), &mut mask.transpose()),
            DecoderModel::Iterative(p) => {
                let cols = self.transposed.as_ref().unwrap();
                let mut g = mask.clone();
                let mut idle = 0;
                let mut pass = 0;
                while !g.is_empty() && idle < 2 {
                    let before: u32 = g.rows[..g.m].iter().map(|r| r.count_ones()).sum();
                    if pass % 2 == 0 {
                        row_pass(p, &mut g);
                    } else {
                        let mut t = g.transpose();
                        row_pass(cols, &mut t);
                        g = t.transpose();
                    }
                    let after: u32 = g.rows[..g.m].iter().map(|r| r.count_ones()).sum();
                    idle = if after < before { 0 } else { idle + 1 };
                    pass += 1;
                }
                g.is_empty()
            }
            DecoderModel::IdealLrc {
                h_local,
                max_residual,
                ..
            } => {
                let residual: usize = mask.rows[..mask.m]
                    .iter()
                    .map(|r| r.count_ones() as usize)
                    .filter(|&c| c > *h_local)
                    .sum();
                residual <= *max_residual
            }
        }
    }
}

/// Whether the model corrects the given erasure pattern.
pub fn correctable(model: &DecoderModel, pattern: &[Cell]) -> bool {
    let (m, n) = model.shape();
    let mut mask = Mask::new(m, n);
    for &c in pattern {
        mask.set(c);
    }
    model.predicate().correctable(&mask)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub model: String,
    pub profile: Option<String>,
    pub metric: String,
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    pub std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<BTreeMap<usize, u64>>,
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn summarize(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn result(model: &DecoderModel, metric: String, trials: u64, seed: u64, samples: &[f64]) -> SimResult {
    let (mean, std_error) = summarize(samples);
    SimResult {
        model: model.name().to_string(),
        profile: model.profile().map(|p| p.to_string()),
        metric,
        trials,
        seed,
        mean,
        std_error,
        histogram: None,
    }
}

/// Mean size of the first uncorrectable prefix of a uniformly random
/// erasure order.
pub fn mean_erasures_to_failure(model: &DecoderModel, trials: u64, seed: u64) -> SimResult {
    assert!(trials >= 1);
    let (m, n) = model.shape();
    let pred = model.predicate();
    let cells: Vec<Cell> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let ns: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut order = cells.clone();
            order.shuffle(&mut rng);
            let mut mask = Mask::new(m, n);
            for (k, &c) in order.iter().enumerate() {
                mask.set(c);
                if !pred.correctable(&mask) {
                    return k + 1;
                }
            }
            m * n + 1
        })
        .collect();
    let samples: Vec<f64> = ns.iter().map(|&x| x as f64).collect();
    let mut r = result(model, "mean_erasures_to_failure".into(), trials, seed, &samples);
    let mut hist = BTreeMap::new();
    for x in ns {
        *hist.entry(x).or_insert(0) += 1;
    }
    r.histogram = Some(hist);
    r
}

/// Fraction of uniformly random `num_erasures`-subsets the model corrects.
pub fn correction_probability(model: &DecoderModel, num_erasures: usize, trials: u64, seed: u64) -> SimResult {
    assert!(trials >= 1);
    let (m, n) = model.shape();
    assert!(num_erasures <= m * n);
    let pred = model.predicate();
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut mask = Mask::new(m, n);
            for k in sample(&mut rng, m * n, num_erasures) {
                mask.set((k / n, k % n));
            }
            if pred.correctable(&mask) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    result(model, format!("correction_probability@{num_erasures}"), trials, seed, &samples)
}

/// Expected arrivals into m equally likely bins until one repeats:
/// `Σ_{k=0}^{m} m(m-1)...(m-k+1) / m^k`.
pub fn birthday_expected(m: usize) -> f64 {
    assert!(m >= 1);
    let mf = m as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=m {
        term *= (mf - (k as f64 - 1.0)) / mf;
        sum += term;
    }
    sum
}

/// Direct simulation of the arrival process behind [`birthday_expected`].
pub fn birthday_monte_carlo(m: usize, trials: u64, seed: u64) -> SimResult {
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut seen = vec![false; m];
            let mut k = 0;
            loop {
                k += 1;
                let b = rng.gen_range(0..m);
                if std::mem::replace(&mut seen[b], true) {
                    return k as f64;
                }
            }
        })
        .collect();
    let (mean, std_error) = summarize(&samples);
    SimResult {
        model: "birthday".into(),
        profile: None,
        metric: format!("arrivals_to_repeat@{m}"),
        trials,
        seed,
        mean,
        std_error,
        histogram: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(e: &[usize], n: usize) -> Profile {
        Profile::new(e.to_vec(), n).unwrap()
    }

    #[test]
    fn empty_pattern_is_always_correctable() {
        let p = prof(&[1, 2, 3, 6, 6], 7);
        for model in [
            DecoderModel::RowsOnly(p.clone()),
            DecoderModel::ColsOnly(p.clone()),
            DecoderModel::Iterative(p),
            DecoderModel::ideal_lrc(8, 8, 2, 23),
        ] {
            assert!(correctable(&model, &[]));
        }
    }

    #[test]
    fn exact_profile_match_is_correctable_by_rows() {
        let p = prof(&[1, 2, 3, 6, 6], 7);
        // counts (6, 1, 3, 6, 2) over rows 0..5
        let counts = [6, 1, 3, 6, 2];
        let pattern: Vec<Cell> = counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| (0..c).map(move |j| (i, j)))
            .collect();
        assert!(correctable(&DecoderModel::RowsOnly(p), &pattern));
    }

    #[test]
    fn stuck_rows_freed_by_columns() {
        let p = prof(&[1, 2, 3, 5], 7);
        let rows: [&[usize]; 4] = [&[0, 3, 5, 6], &[1, 3], &[2], &[0, 1, 5, 6]];
        let pattern: Vec<Cell> = rows
            .iter()
            .enumerate()
            .flat_map(|(i, cs)| cs.iter().map(move |&j| (i, j)))
            .collect();
        assert!(!correctable(&DecoderModel::RowsOnly(p.clone()), &pattern));
        assert!(correctable(&DecoderModel::Iterative(p), &pattern));
    }

    #[test]
    fn birthday_small_cases() {
        assert_eq!(birthday_expected(1), 2.0);
        assert!((birthday_expected(2) - 2.5).abs() < 1e-12);
        assert!((birthday_expected(365) - 24.6).abs() < 0.05);
    }

    #[test]
    fn results_are_deterministic() {
        let model = DecoderModel::Iterative(prof(&[1, 2, 3, 6, 6], 7));
        let a = mean_erasures_to_failure(&model, 500, 42);
        let b = mean_erasures_to_failure(&model, 500, 42);
        assert_eq!(a, b);
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        let c = mean_erasures_to_failure(&model, 500, 43);
        assert_ne!(a.mean, c.mean);
    }
}
