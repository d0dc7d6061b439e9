use rand::Rng;

use super::poly::prime_factors;
use super::{Field, Gf2Poly};
use crate::error::{Error, Result};

/// GF(2^b) for any b, elements kept as reduced polynomials and α = x.
///
/// No tables, so this is what very large fields use.
#[derive(Debug, Clone)]
pub struct PolyField {
    degree: usize,
    modulus: Gf2Poly,
    alpha: Gf2Poly,
    alpha_inv: Gf2Poly,
    alpha_order: Option<u64>,
}

impl PolyField {
    /// Polynomial-arithmetic field of any degree over an irreducible modulus.
    pub fn new(modulus: &Gf2Poly) -> Result<Self> {
        super::context::check_modulus(modulus.degree().unwrap_or(0), modulus)?;
        Ok(Self::new_unchecked(modulus))
    }

    /// The caller must have checked irreducibility.
    pub(crate) fn new_unchecked(modulus: &Gf2Poly) -> Self {
        let degree = modulus.degree().expect("nonzero modulus");
        let alpha = Gf2Poly::monomial(1).rem(modulus);
        let alpha_inv = alpha.inv_mod(modulus).expect("x is invertible modulo an irreducible");
        let mut f = Self {
            degree,
            modulus: modulus.clone(),
            alpha,
            alpha_inv,
            alpha_order: None,
        };
        f.alpha_order = f.compute_alpha_order();
        f
    }

    // Exact order of x: the all-ones modulus gives p directly; otherwise factor
    // 2^b - 1 by trial division when that is cheap.
    fn compute_alpha_order(&self) -> Option<u64> {
        let b = self.degree;
        if self.modulus.weight() as usize == b + 1 && b >= 2 {
            return Some(b as u64 + 1);
        }
        if b > 40 {
            return None;
        }
        let group = (1u64 << b) - 1;
        let mut order = group;
        for q in prime_factors(group) {
            while order.is_multiple_of(q) && self.alpha_pow_u(order / q).is_one() {
                order /= q;
            }
        }
        Some(order)
    }

    fn alpha_pow_u(&self, mut e: u64) -> Gf2Poly {
        let mut acc = Gf2Poly::one();
        let mut sq = self.alpha.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&sq, &self.modulus);
            }
            sq = sq.square().rem(&self.modulus);
            e >>= 1;
        }
        acc
    }

    pub fn alpha_inverse(&self) -> &Gf2Poly {
        &self.alpha_inv
    }
}

impl Field for PolyField {
    type Elem = Gf2Poly;

    fn degree(&self) -> usize {
        self.degree
    }

    fn modulus(&self) -> &Gf2Poly {
        &self.modulus
    }

    fn zero(&self) -> Gf2Poly {
        Gf2Poly::zero()
    }

    fn one(&self) -> Gf2Poly {
        Gf2Poly::one()
    }

    fn is_zero(&self, a: &Gf2Poly) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &Gf2Poly, b: &Gf2Poly) -> Gf2Poly {
        a.add(b)
    }

    fn mul(&self, a: &Gf2Poly, b: &Gf2Poly) -> Gf2Poly {
        a.mul_mod(b, &self.modulus)
    }

    fn inv(&self, a: &Gf2Poly) -> Result<Gf2Poly> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.inv_mod(&self.modulus).expect("nonzero elements are invertible"))
    }

    fn alpha(&self) -> Gf2Poly {
        self.alpha.clone()
    }

    fn alpha_pow(&self, k: i64) -> Gf2Poly {
        let k = match self.alpha_order {
            Some(o) => k.rem_euclid(o as i64),
            None => k,
        };
        if k >= 0 {
            return self.alpha_pow_u(k as u64);
        }
        let mut e = k.unsigned_abs();
        let mut acc = Gf2Poly::one();
        let mut sq = self.alpha_inv.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&sq, &self.modulus);
            }
            sq = sq.square().rem(&self.modulus);
            e >>= 1;
        }
        acc
    }

    fn alpha_order(&self) -> Option<u64> {
        self.alpha_order
    }

    fn to_poly(&self, a: &Gf2Poly) -> Gf2Poly {
        a.clone()
    }

    fn from_poly(&self, p: &Gf2Poly) -> Gf2Poly {
        p.rem(&self.modulus)
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Gf2Poly {
        let words = self.degree.div_ceil(64);
        let mut w: Vec<u64> = (0..words).map(|_| rng.gen()).collect();
        let spare = words * 64 - self.degree;
        if spare > 0 {
            *w.last_mut().unwrap() >>= spare;
        }
        Gf2Poly::from_words(&w)
    }
}
