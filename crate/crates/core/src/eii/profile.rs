use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The non-decreasing vector of per-row parity budgets, with its derived level
/// structure.
///
/// Levels are `u_0 < ... < u_t = n`; `s_i` counts rows at level i (`s_t` may
/// be zero) and `ŝ_i = s_i + ... + s_t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ProfileRepr", into = "ProfileRepr")]
pub struct Profile {
    n: usize,
    entries: Vec<usize>,
    levels: Vec<usize>,
    mult: Vec<usize>,
    suffix: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ProfileRepr {
    n: usize,
    entries: Vec<usize>,
}

impl TryFrom<ProfileRepr> for Profile {
    type Error = Error;
    fn try_from(r: ProfileRepr) -> Result<Self> {
        Profile::new(r.entries, r.n)
    }
}

impl From<Profile> for ProfileRepr {
    fn from(p: Profile) -> Self {
        ProfileRepr {
            n: p.n,
            entries: p.entries,
        }
    }
}

impl Profile {
    pub fn new(entries: Vec<usize>, n: usize) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyProfile);
        }
        for (position, w) in entries.windows(2).enumerate() {
            if w[1] < w[0] {
                return Err(Error::NotSorted {
                    position: position + 1,
                });
            }
        }
        if let Some((position, &entry)) = entries.iter().enumerate().find(|(_, &e)| e > n) {
            return Err(Error::EntryExceedsN { position, entry, n });
        }
        if entries[0] == n {
            return Err(Error::NoDataRows);
        }

        let mut levels = Vec::new();
        let mut mult = Vec::new();
        for &e in &entries {
            if levels.last() == Some(&e) {
                *mult.last_mut().unwrap() += 1;
            } else {
                levels.push(e);
                mult.push(1);
            }
        }
        if *levels.last().unwrap() != n {
            levels.push(n);
            mult.push(0);
        }
        let mut suffix = vec![0; mult.len()];
        let mut acc = 0;
        for i in (0..mult.len()).rev() {
            acc += mult[i];
            suffix[i] = acc;
        }
        Ok(Self {
            n,
            entries,
            levels,
            mult,
            suffix,
        })
    }

    /// Row length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows.
    pub fn m(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Number of levels below n.
    pub fn t(&self) -> usize {
        self.levels.len() - 1
    }

    /// `u_0, ..., u_t` with `u_t = n`.
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> usize {
        self.levels[i]
    }

    /// `s_0, ..., s_t`.
    pub fn multiplicities(&self) -> &[usize] {
        &self.mult
    }

    /// `ŝ_0, ..., ŝ_t`, with `ŝ_0 = m`.
    pub fn suffix_sums(&self) -> &[usize] {
        &self.suffix
    }

    /// `ŝ_i`, zero past the last level.
    pub fn s_hat(&self, i: usize) -> usize {
        self.suffix.get(i).copied().unwrap_or(0)
    }

    /// The level whose code holds the r-th row combination: the largest L
    /// with `r < ŝ_L`.
    pub fn combination_level(&self, r: usize) -> usize {
        (0..self.levels.len())
            .rev()
            .find(|&l| r < self.suffix[l])
            .expect("r < m")
    }

    pub fn parity_count(&self) -> usize {
        self.entries.iter().sum()
    }

    pub fn dimension(&self) -> usize {
        self.m() * self.n - self.parity_count()
    }

    /// Minimum distance `min_i (ŝ_{i+1} + 1)(u_i + 1)` over i < t.
    pub fn min_distance(&self) -> usize {
        (0..self.t())
            .map(|i| (self.s_hat(i + 1) + 1) * (self.levels[i] + 1))
            .min()
            .expect("t ≥ 1")
    }

    /// Profile of the column code: `u'_{t-i} = ŝ_i`, `s'_i = u_{t-i} - u_{t-i-1}`
    /// with `u_{-1} = 0`; the result has length n and row length m.
    pub fn transpose(&self) -> Profile {
        let t = self.t();
        let mut entries = Vec::with_capacity(self.n);
        for i in 0..=t {
            let level = self.suffix[t - i];
            let below = if t - i == 0 { 0 } else { self.levels[t - i - 1] };
            let count = self.levels[t - i] - below;
            entries.extend(std::iter::repeat_n(level, count));
        }
        Profile::new(entries, self.m()).expect("transpose of a valid profile is valid")
    }

    /// Decision on per-row erasure counts.
    ///
    /// Counts are sorted ascending and compared entrywise against the profile.
    /// Returns the decision and the rows of the longest dominated prefix, in
    /// sorted order.
    pub fn row_correctable(&self, counts: &[usize]) -> (bool, Vec<usize>) {
        assert_eq!(counts.len(), self.m());
        let mut order: Vec<usize> = (0..counts.len()).collect();
        order.sort_by_key(|&i| (counts[i], i));
        let prefix = order
            .iter()
            .zip(&self.entries)
            .take_while(|(&i, &u)| counts[i] <= u)
            .count();
        (prefix == self.m(), order[..prefix].to_vec())
    }

    /// Only the decision of [`row_correctable`](Self::row_correctable), without
    /// allocating.
    pub fn counts_correctable(&self, counts: &mut [usize]) -> bool {
        counts.sort_unstable();
        counts.iter().zip(&self.entries).all(|(c, u)| c <= u)
    }

    /// Parity columns of row i in the tail layout: the last `entries[i]` columns.
    pub fn tail_parity(&self, row: usize) -> std::ops::Range<usize> {
        self.n - self.entries[row]..self.n
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "C({},[{}])", self.n, e.join(","))
    }
}

/// Parses `C(n,[u0,u1,...])`; round brackets are accepted for the list too.
impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { s, pos: 0 };
        p.ws();
        p.expect('C')?;
        p.ws();
        p.expect('(')?;
        let n = p.number()?;
        p.expect(',')?;
        p.ws();
        let close = match p.peek() {
            Some('[') => ']',
            Some('(') => ')',
            _ => return Err(p.err("expected '[' or '('")),
        };
        p.pos += 1;
        let mut entries = vec![p.number()?];
        loop {
            p.ws();
            match p.peek() {
                Some(',') => {
                    p.pos += 1;
                    entries.push(p.number()?);
                }
                Some(c) if c == close => {
                    p.pos += 1;
                    break;
                }
                _ => return Err(p.err(&format!("expected ',' or '{close}'"))),
            }
        }
        p.ws();
        p.expect(')')?;
        p.ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Profile::new(entries, n)
    }
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn err(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.s[start..self.pos]
            .parse()
            .map_err(|_| Error::Parse {
                position: start,
                message: "expected a number".into(),
            })
    }
}
