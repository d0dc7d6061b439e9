use rand::Rng;

use super::{Field, Gf2Poly, TABLE_MAX_DEGREE};
use crate::error::{Error, Result};

/// Full product table is kept up to this degree (256 × 256 entries).
const MUL_TABLE_MAX_DEGREE: usize = 8;

/// GF(2^b) for b ≤ 16 with log/antilog tables over a primitive α.
#[derive(Clone)]
pub struct TableField {
    degree: usize,
    modulus: Gf2Poly,
    alpha: u16,
    // exp has length 2(q-1) so log a + log b never needs a reduction
    exp: Vec<u16>,
    log: Vec<u32>,
    mul: Option<Vec<u16>>,
}

impl std::fmt::Debug for TableField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TableField")
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .field("alpha", &self.alpha)
            .finish()
    }
}

fn mul_raw(a: u32, b: u32, modulus: u32, degree: usize) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> degree & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

impl TableField {
    pub fn new(modulus: &Gf2Poly) -> Result<Self> {
        let degree = modulus.degree().unwrap_or(0);
        if degree > TABLE_MAX_DEGREE {
            return Err(Error::BadModulus { degree });
        }
        super::context::check_modulus(degree, modulus)?;
        Ok(Self::new_unchecked(modulus))
    }

    /// Builds the tables; the caller must have checked irreducibility.
    pub(crate) fn new_unchecked(modulus: &Gf2Poly) -> Self {
        let degree = modulus.degree().expect("nonzero modulus");
        assert!((1..=TABLE_MAX_DEGREE).contains(&degree));
        let m = modulus.to_u64().unwrap() as u32;
        let q = 1usize << degree;
        let group = (q - 1) as u32;

        // α = x when it is primitive, else the smallest primitive element
        let order = |g: u32| {
            let mut x = g;
            let mut k = 1u32;
            while x != 1 {
                x = mul_raw(x, g, m, degree);
                k += 1;
            }
            k
        };
        let alpha = if degree == 1 {
            1
        } else if order(2) == group {
            2
        } else {
            (3..q as u32).find(|&g| order(g) == group).unwrap()
        };

        let mut exp = vec![0u16; 2 * (q - 1)];
        let mut log = vec![0u32; q];
        let mut x = 1u32;
        for i in 0..q - 1 {
            exp[i] = x as u16;
            exp[i + q - 1] = x as u16;
            log[x as usize] = i as u32;
            x = mul_raw(x, alpha, m, degree);
        }

        let mut field = Self {
            degree,
            modulus: modulus.clone(),
            alpha: alpha as u16,
            exp,
            log,
            mul: None,
        };
        if degree <= MUL_TABLE_MAX_DEGREE {
            let mut t = vec![0u16; q * q];
            for a in 1..q {
                for b in 1..q {
                    t[a * q + b] = field.mul_log(a as u16, b as u16);
                }
            }
            field.mul = Some(t);
        }
        field
    }

    fn group_order(&self) -> u32 {
        (1u32 << self.degree) - 1
    }

    #[inline]
    fn mul_log(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Discrete log to base α of a nonzero element.
    pub fn log(&self, a: u16) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn exp(&self, k: i64) -> u16 {
        self.exp[k.rem_euclid(self.group_order() as i64) as usize]
    }
}

impl Field for TableField {
    type Elem = u16;

    fn degree(&self) -> usize {
        self.degree
    }

    fn modulus(&self) -> &Gf2Poly {
        &self.modulus
    }

    fn zero(&self) -> u16 {
        0
    }

    fn one(&self) -> u16 {
        1
    }

    fn is_zero(&self, a: &u16) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u16, b: &u16) -> u16 {
        a ^ b
    }

    #[inline]
    fn mul(&self, a: &u16, b: &u16) -> u16 {
        match &self.mul {
            Some(t) => t[((*a as usize) << self.degree) | *b as usize],
            None => self.mul_log(*a, *b),
        }
    }

    fn inv(&self, a: &u16) -> Result<u16> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        let g = self.group_order();
        Ok(self.exp[((g - self.log[*a as usize]) % g) as usize])
    }

    fn alpha(&self) -> u16 {
        self.alpha
    }

    fn alpha_pow(&self, k: i64) -> u16 {
        self.exp(k)
    }

    fn alpha_order(&self) -> Option<u64> {
        Some(self.group_order() as u64)
    }

    fn to_poly(&self, a: &u16) -> Gf2Poly {
        Gf2Poly::from_u64(*a as u64)
    }

    fn from_poly(&self, p: &Gf2Poly) -> u16 {
        p.rem(&self.modulus).to_u64().unwrap() as u16
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u16 {
        rng.gen_range(0..(1u32 << self.degree)) as u16
    }

    fn pow(&self, a: &u16, e: i64) -> Result<u16> {
        if *a == 0 {
            return match e {
                0 => Ok(1),
                e if e > 0 => Ok(0),
                _ => Err(Error::DivisionByZero),
            };
        }
        let g = self.group_order() as i64;
        let l = self.log[*a as usize] as i64;
        Ok(self.exp[((l * e.rem_euclid(g)) % g) as usize])
    }
}
