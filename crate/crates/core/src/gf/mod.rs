//! Arithmetic in GF(2^b).
//!
//! Everything above this module is generic over [`Field`]. Two backends exist:
//! [`TableField`] with log/antilog tables for b ≤ 16, and [`PolyField`] doing
//! bit-vector polynomial arithmetic for any b. [`FieldContext`] wraps either
//! behind one runtime type.

mod context;
mod poly;
mod polyfield;
mod table;

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use context::{build_field, build_mp_field, default_field, FieldContext};
pub use poly::{Gf2Poly, HexError};
pub use polyfield::PolyField;
pub use table::TableField;

use crate::error::{Error, Result};

/// Largest degree served by [`TableField`].
pub const TABLE_MAX_DEGREE: usize = 16;

pub trait Field: Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn degree(&self) -> usize;
    fn modulus(&self) -> &Gf2Poly;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// The generator used by every matrix construction.
    fn alpha(&self) -> Self::Elem;
    /// `α^k`; negative `k` goes through the cached inverse of α.
    fn alpha_pow(&self, k: i64) -> Self::Elem;
    /// Multiplicative order of α, when it is known or cheap to compute.
    fn alpha_order(&self) -> Option<u64>;

    fn to_poly(&self, a: &Self::Elem) -> Gf2Poly;
    /// Reduces `p` modulo the field modulus.
    #[allow(clippy::wrong_self_convention)]
    fn from_poly(&self, p: &Gf2Poly) -> Self::Elem;

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, b)
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^e`, with negative exponents meaning powers of the inverse.
    fn pow(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Number of elements, `2^b`, if it fits.
    fn size(&self) -> Option<u64> {
        (self.degree() < 64).then(|| 1u64 << self.degree())
    }

    /// True when `α^i ≠ 1` for every `0 < i < k`.
    fn alpha_order_at_least(&self, k: u64) -> bool {
        if let Some(o) = self.alpha_order() {
            return o >= k;
        }
        let a = self.alpha();
        let one = self.one();
        let mut x = a.clone();
        for _ in 1..k {
            if x == one {
                return false;
            }
            x = self.mul(&x, &a);
        }
        true
    }

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            degree: self.degree(),
            modulus: self.modulus().to_hex(),
        }
    }

    fn to_hex(&self, a: &Self::Elem) -> String {
        self.to_poly(a).to_hex()
    }

    /// Parses a hex symbol, rejecting values that do not fit in `b` bits.
    #[allow(clippy::wrong_self_convention)]
    fn from_hex(&self, s: &str) -> Result<Self::Elem> {
        let p = Gf2Poly::from_hex(s).map_err(|e| Error::Parse {
            position: 0,
            message: e.to_string(),
        })?;
        if p.degree().is_some_and(|d| d >= self.degree()) {
            return Err(Error::ContextMismatch);
        }
        Ok(self.from_poly(&p))
    }
}

/// Order of a nonzero element by repeated multiplication. Only sensible for
/// small fields; used by tests and the table builder.
pub fn element_order<F: Field>(f: &F, a: &F::Elem) -> Option<u64> {
    if f.is_zero(a) {
        return None;
    }
    let one = f.one();
    let mut x = a.clone();
    let mut k = 1u64;
    while x != one {
        x = f.mul(&x, a);
        k += 1;
    }
    Some(k)
}

/// Degree and modulus, enough to rebuild a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub degree: usize,
    pub modulus: String,
}

impl FieldDescriptor {
    pub fn build(&self) -> Result<FieldContext> {
        let modulus = Gf2Poly::from_hex(&self.modulus).map_err(|e| Error::Parse {
            position: 0,
            message: e.to_string(),
        })?;
        build_field(self.degree, &modulus)
    }
}
