//! Polynomials over GF(2), stored as little-endian bit vectors.
//!
//! Bit `i` of the representation is the coefficient of `x^i`. The same type
//! doubles as the element representation of [`PolyField`](super::PolyField).

use std::fmt;

use smallvec::SmallVec;

type Words = SmallVec<[u64; 4]>;

/// A polynomial over GF(2). Always normalized: no trailing zero words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Words,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    /// The monomial `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut p = Self::zero();
        p.set_bit(k, true);
        p
    }

    pub fn from_u64(v: u64) -> Self {
        let mut words = Words::new();
        if v != 0 {
            words.push(v);
        }
        Self { words }
    }

    pub fn from_u128(v: u128) -> Self {
        let mut p = Self {
            words: Words::from_slice(&[v as u64, (v >> 64) as u64]),
        };
        p.normalize();
        p
    }

    pub fn from_words(words: &[u64]) -> Self {
        let mut p = Self {
            words: Words::from_slice(words),
        };
        p.normalize();
        p
    }

    /// Builds the polynomial whose nonzero coefficients sit at `exponents`.
    pub fn from_exponents(exponents: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exponents {
            p.flip_bit(e);
        }
        p
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Low 64 coefficients; `None` if the polynomial has degree ≥ 64.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn set_bit(&mut self, i: usize, value: bool) {
        if self.bit(i) != value {
            self.flip_bit(i);
        }
    }

    pub fn flip_bit(&mut self, i: usize) {
        let w = i / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << (i % 64);
        self.normalize();
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Exponents of the nonzero coefficients, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(short.words.iter()) {
            *w ^= s;
        }
        let mut p = Self { words };
        p.normalize();
        p
    }

    pub fn add_assign(&mut self, other: &Self) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (w, s) in self.words.iter_mut().zip(other.words.iter()) {
            *w ^= s;
        }
        self.normalize();
    }

    pub fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = (k / 64, k % 64);
        let mut words: Words = SmallVec::from_elem(0, self.words.len() + ws + 1);
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] ^= w << bs;
            if bs != 0 {
                words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        let mut p = Self { words };
        p.normalize();
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut words: Words = SmallVec::from_elem(0, self.words.len() + other.words.len());
        for (i, &a) in self.words.iter().enumerate() {
            for (j, &b) in other.words.iter().enumerate() {
                let prod = clmul64(a, b);
                words[i + j] ^= prod as u64;
                words[i + j + 1] ^= (prod >> 64) as u64;
            }
        }
        let mut p = Self { words };
        p.normalize();
        p
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Quotient and remainder of division by a nonzero `divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quo = Self::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quo.flip_bit(shift);
            rem.add_assign(&divisor.shl(shift));
        }
        (quo, rem)
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus)
    }

    /// Inverse modulo `modulus`, if `self` and `modulus` are coprime.
    pub fn inv_mod(&self, modulus: &Self) -> Option<Self> {
        // Extended Euclid tracking only the coefficient of `self`.
        let (mut r0, mut r1) = (modulus.clone(), self.rem(modulus));
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let t = t0.add(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        r0.is_one().then(|| t0.rem(modulus))
    }

    /// `x^(2^k) mod modulus`.
    fn frobenius_x(k: usize, modulus: &Self) -> Self {
        let mut acc = Self::monomial(1).rem(modulus);
        for _ in 0..k {
            acc = acc.square().rem(modulus);
        }
        acc
    }

    /// Rabin's irreducibility test over GF(2).
    pub fn is_irreducible(&self) -> bool {
        let Some(b) = self.degree() else {
            return false;
        };
        if b == 0 {
            return false;
        }
        if b == 1 {
            return true;
        }
        if !self.bit(0) {
            return false;
        }
        let x = Self::monomial(1);
        if Self::frobenius_x(b, self) != x.rem(self) {
            return false;
        }
        prime_factors(b as u64).into_iter().all(|q| {
            let h = Self::frobenius_x(b / q as usize, self).add(&x);
            self.gcd(&h).is_one()
        })
    }

    /// A nontrivial factor of smallest degree, or `None` when irreducible.
    ///
    /// Candidates of the smallest factor degree are tried in increasing value
    /// order when that degree is small; otherwise the product of all factors of
    /// that degree is returned.
    pub fn smallest_factor(&self) -> Option<Self> {
        let b = self.degree()?;
        if b <= 1 {
            return None;
        }
        if !self.bit(0) {
            return Some(Self::monomial(1));
        }
        let x = Self::monomial(1);
        let mut frob = x.rem(self);
        for d in 1..=b / 2 {
            frob = frob.square().rem(self);
            let g = self.gcd(&frob.add(&x));
            if g.is_one() {
                continue;
            }
            if g.degree() == Some(d) {
                return Some(g);
            }
            if d <= 24 {
                let lo = 1u64 << d;
                for v in (lo | 1..lo << 1).step_by(2) {
                    let cand = Self::from_u64(v);
                    if g.rem(&cand).is_zero() {
                        return Some(cand);
                    }
                }
            }
            return Some(g);
        }
        None
    }

    /// Smallest-valued irreducible polynomial of the given degree.
    pub fn smallest_irreducible(degree: usize) -> Self {
        assert!(degree >= 1);
        let mut cand = Self::monomial(degree);
        cand.flip_bit(0);
        if degree == 1 {
            return Self::monomial(1);
        }
        loop {
            if cand.is_irreducible() {
                return cand;
            }
            // advance to the next odd polynomial of the same degree
            let mut i = 1;
            loop {
                let was = cand.bit(i);
                cand.set_bit(i, !was);
                if !was {
                    break;
                }
                i += 1;
            }
            assert!(cand.degree() == Some(degree), "no irreducible of degree {degree}");
        }
    }

    /// The all-ones polynomial `1 + x + ... + x^(p-1)`.
    pub fn all_ones(p: usize) -> Self {
        let mut out = Self::zero();
        for i in 0..p {
            out.flip_bit(i);
        }
        out
    }

    /// Lowercase hex of the coefficient vector, `x^0` in the least significant bit.
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = format!("{:x}", self.words.last().unwrap());
        for w in self.words.iter().rev().skip(1) {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    pub fn from_hex(s: &str) -> Result<Self, HexError> {
        let s = s.trim();
        let s = s.strip_prefix("0x").unwrap_or(s);
        if s.is_empty() {
            return Err(HexError(s.to_string()));
        }
        let mut words = Words::new();
        let bytes = s.as_bytes();
        let mut end = bytes.len();
        while end > 0 {
            let start = end.saturating_sub(16);
            let chunk = std::str::from_utf8(&bytes[start..end]).map_err(|_| HexError(s.into()))?;
            let w = u64::from_str_radix(chunk, 16).map_err(|_| HexError(s.to_string()))?;
            words.push(w);
            end = start;
        }
        let mut p = Self { words };
        p.normalize();
        Ok(p)
    }

    /// Evaluates at `x = 1`, i.e. the coefficient parity.
    pub fn parity(&self) -> bool {
        self.weight() % 2 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid hex polynomial {0:?}")]
pub struct HexError(pub String);

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly(0x{})", self.to_hex())
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                e => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Carry-less 64×64 → 128 bit multiplication.
#[inline]
pub(crate) fn clmul64(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut bits = b;
    let a = a as u128;
    while bits != 0 {
        let i = bits.trailing_zeros();
        acc ^= a << i;
        bits &= bits - 1;
    }
    acc
}

/// Distinct prime factors by trial division (small inputs only).
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
