use std::sync::Arc;

use rand::Rng;

use super::{Field, Gf2Poly, PolyField, TableField, TABLE_MAX_DEGREE};
use crate::error::{Error, Result};

/// A field with its representation chosen at runtime.
///
/// Elements are plain reduced polynomials. The checked `try_*` methods reject
/// operands with `degree ≥ b`, which can only have come from a different
/// context; the [`Field`] impl panics on them instead.
#[derive(Debug, Clone)]
pub enum FieldContext {
    Table(Arc<TableField>),
    Poly(Arc<PolyField>),
}

/// Builds GF(2^degree) over `modulus`, after verifying it is irreducible.
pub fn build_field(degree: usize, modulus: &Gf2Poly) -> Result<FieldContext> {
    check_modulus(degree, modulus)?;
    Ok(if degree <= TABLE_MAX_DEGREE {
        FieldContext::Table(Arc::new(TableField::new_unchecked(modulus)))
    } else {
        FieldContext::Poly(Arc::new(PolyField::new_unchecked(modulus)))
    })
}

pub(crate) fn check_modulus(degree: usize, modulus: &Gf2Poly) -> Result<()> {
    if degree == 0 || modulus.degree() != Some(degree) || !modulus.bit(0) && degree > 1 {
        return Err(Error::BadModulus { degree });
    }
    if let Some(factor) = modulus.smallest_factor() {
        return Err(Error::ReducibleModulus { factor });
    }
    Ok(())
}

/// GF(2^(p-1)) defined by `M_p(x) = 1 + x + ... + x^(p-1)`, with α = x of order p.
pub fn build_mp_field(p: usize) -> Result<FieldContext> {
    if p < 3 || super::poly::prime_factors(p as u64) != [p as u64] {
        return Err(Error::NotPrime(p));
    }
    let mp = Gf2Poly::all_ones(p);
    if let Some(factor) = mp.smallest_factor() {
        return Err(Error::MpReducible { p, factor });
    }
    Ok(FieldContext::Poly(Arc::new(PolyField::new_unchecked(&mp))))
}

/// The field over the smallest primitive polynomial of the given degree
/// (smallest irreducible above degree 40, where primitivity is not checked).
pub fn default_field(degree: usize) -> FieldContext {
    build_field(degree, &smallest_primitive(degree)).expect("irreducible by construction")
}

fn smallest_primitive(degree: usize) -> Gf2Poly {
    if degree > 40 {
        return Gf2Poly::smallest_irreducible(degree);
    }
    let full = (1u64 << degree) - 1;
    let lo = 1u64 << degree;
    (lo | 1..lo << 1)
        .step_by(2)
        .map(Gf2Poly::from_u64)
        .chain(std::iter::once(Gf2Poly::from_u64(0b11)))
        .find(|p| {
            p.degree() == Some(degree)
                && p.is_irreducible()
                && PolyField::new_unchecked(p).alpha_order() == Some(full)
        })
        .expect("primitive polynomials exist in every degree")
}

impl FieldContext {
    pub fn is_table(&self) -> bool {
        matches!(self, FieldContext::Table(_))
    }

    pub fn as_table(&self) -> Option<&Arc<TableField>> {
        match self {
            FieldContext::Table(t) => Some(t),
            FieldContext::Poly(_) => None,
        }
    }

    pub fn as_poly(&self) -> Option<&Arc<PolyField>> {
        match self {
            FieldContext::Poly(p) => Some(p),
            FieldContext::Table(_) => None,
        }
    }

    fn check(&self, a: &Gf2Poly) -> Result<()> {
        match a.degree() {
            Some(d) if d >= self.degree() => Err(Error::ContextMismatch),
            _ => Ok(()),
        }
    }

    pub fn try_add(&self, a: &Gf2Poly, b: &Gf2Poly) -> Result<Gf2Poly> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.add(b))
    }

    pub fn try_mul(&self, a: &Gf2Poly, b: &Gf2Poly) -> Result<Gf2Poly> {
        self.check(a)?;
        self.check(b)?;
        Ok(match self {
            FieldContext::Table(t) => lift(t.mul(&lower(a), &lower(b))),
            FieldContext::Poly(p) => p.mul(a, b),
        })
    }

    pub fn try_inv(&self, a: &Gf2Poly) -> Result<Gf2Poly> {
        self.check(a)?;
        match self {
            FieldContext::Table(t) => t.inv(&lower(a)).map(lift),
            FieldContext::Poly(p) => p.inv(a),
        }
    }

    pub fn try_pow(&self, a: &Gf2Poly, e: i64) -> Result<Gf2Poly> {
        self.check(a)?;
        match self {
            FieldContext::Table(t) => t.pow(&lower(a), e).map(lift),
            FieldContext::Poly(p) => p.pow(a, e),
        }
    }
}

fn lower(a: &Gf2Poly) -> u16 {
    a.to_u64().unwrap_or(0) as u16
}

fn lift(a: u16) -> Gf2Poly {
    Gf2Poly::from_u64(a as u64)
}

impl Field for FieldContext {
    type Elem = Gf2Poly;

    fn degree(&self) -> usize {
        match self {
            FieldContext::Table(t) => t.degree(),
            FieldContext::Poly(p) => p.degree(),
        }
    }

    fn modulus(&self) -> &Gf2Poly {
        match self {
            FieldContext::Table(t) => t.modulus(),
            FieldContext::Poly(p) => p.modulus(),
        }
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
        self.try_add(a, b).expect("operands from this context")
    }

    fn mul(&self, a: &Gf2Poly, b: &Gf2Poly) -> Gf2Poly {
        self.try_mul(a, b).expect("operands from this context")
    }

    fn inv(&self, a: &Gf2Poly) -> Result<Gf2Poly> {
        self.try_inv(a)
    }

    fn pow(&self, a: &Gf2Poly, e: i64) -> Result<Gf2Poly> {
        self.try_pow(a, e)
    }

    fn alpha(&self) -> Gf2Poly {
        match self {
            FieldContext::Table(t) => lift(t.alpha()),
            FieldContext::Poly(p) => p.alpha(),
        }
    }

    fn alpha_pow(&self, k: i64) -> Gf2Poly {
        match self {
            FieldContext::Table(t) => lift(t.alpha_pow(k)),
            FieldContext::Poly(p) => p.alpha_pow(k),
        }
    }

    fn alpha_order(&self) -> Option<u64> {
        match self {
            FieldContext::Table(t) => t.alpha_order(),
            FieldContext::Poly(p) => p.alpha_order(),
        }
    }

    fn to_poly(&self, a: &Gf2Poly) -> Gf2Poly {
        a.clone()
    }

    fn from_poly(&self, p: &Gf2Poly) -> Gf2Poly {
        p.rem(self.modulus())
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Gf2Poly {
        match self {
            FieldContext::Table(t) => lift(t.random(rng)),
            FieldContext::Poly(p) => p.random(rng),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::element_order;

    #[test]
    fn gf8_and_gf16_from_quoted_relations() {
        let f8 = build_field(3, &Gf2Poly::from_exponents(&[0, 1, 3])).unwrap();
        assert!(f8.is_table());
        assert_eq!(f8.alpha(), Gf2Poly::monomial(1));
        assert_eq!(element_order(&f8, &f8.alpha()), Some(7));
        // α·α² = α³ = 1 + α
        let a = f8.alpha();
        let a2 = f8.alpha_pow(2);
        assert_eq!(f8.mul(&a, &a2), Gf2Poly::from_u64(0b11));

        let f16 = build_field(4, &Gf2Poly::from_exponents(&[0, 1, 4])).unwrap();
        assert_eq!(element_order(&f16, &f16.alpha()), Some(15));
        assert_eq!(f16.alpha_order(), Some(15));
    }

    #[test]
    fn reducible_modulus_reports_factor() {
        match build_field(3, &Gf2Poly::from_u64(0b1111)) {
            Err(Error::ReducibleModulus { factor }) => {
                assert!(Gf2Poly::from_u64(0b1111).rem(&factor).is_zero());
                assert_eq!(factor, Gf2Poly::from_u64(0b11));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            build_field(4, &Gf2Poly::from_u64(0b111)),
            Err(Error::BadModulus { .. })
        ));
    }

    #[test]
    fn mp_fields() {
        let f5 = build_mp_field(5).unwrap();
        assert_eq!(f5.degree(), 4);
        assert!(!f5.is_table());
        assert!(f5.alpha_pow(5) == f5.one());
        assert_eq!(f5.alpha_order(), Some(5));

        match build_mp_field(7) {
            Err(Error::MpReducible { p: 7, factor }) => {
                assert_eq!(factor, Gf2Poly::from_exponents(&[0, 1, 3]))
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(build_mp_field(9).unwrap_err(), Error::NotPrime(9));

        let f29 = build_mp_field(29).unwrap();
        assert_eq!(f29.degree(), 28);
        assert_eq!(f29.alpha_pow(29), f29.one());
        let powers: std::collections::HashSet<_> = (0..29).map(|k| f29.alpha_pow(k)).collect();
        assert_eq!(powers.len(), 29);
    }

    #[test]
    fn negative_powers_use_the_inverse() {
        let f = build_mp_field(13).unwrap();
        for k in 1..30 {
            let prod = f.mul(&f.alpha_pow(k), &f.alpha_pow(-k));
            assert!(prod.is_one(), "k = {k}");
        }
        let t = default_field(4);
        assert_eq!(t.mul(&t.alpha_pow(-3), &t.alpha_pow(3)), t.one());
    }

    #[test]
    fn context_mismatch_and_division_by_zero() {
        let f8 = default_field(3);
        let wide = Gf2Poly::from_u64(0b1000);
        assert_eq!(f8.try_add(&wide, &f8.one()), Err(Error::ContextMismatch));
        assert_eq!(f8.try_inv(&Gf2Poly::zero()), Err(Error::DivisionByZero));
        let big = build_mp_field(29).unwrap();
        assert_eq!(big.try_mul(&Gf2Poly::monomial(40), &big.one()), Err(Error::ContextMismatch));
        assert_eq!(big.inv(&big.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn default_fields_are_primitive() {
        assert_eq!(default_field(3).modulus().to_hex(), "b");
        assert_eq!(default_field(4).modulus().to_hex(), "13");
        assert_eq!(default_field(8).modulus().to_hex(), "11d");
        let f23 = default_field(23);
        assert_eq!(f23.degree(), 23);
        assert!(f23.alpha_order_at_least(9));
    }
}
