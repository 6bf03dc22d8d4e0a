use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A residue modulo the prime of some [`PrimeField`].
///
/// Values are only produced by a field (or are the constants `ZERO`/`ONE`, which
/// are valid in every field), so `0 <= value < p` holds for the field that made it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
#[repr(transparent)]
pub struct Fe(u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The prime field `F_p` for a prime `2^30 <= p < 2^32`.
///
/// The window keeps every product of two residues inside a `u64`, and keeps the
/// seeded coefficient range `[0, 2^30)` inside the field for every admissible prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// 2^31 - 1.
    pub const DEFAULT_PRIME: u64 = 2_147_483_647;
    /// 2^31 - 19, used to cross-check deficient ranks.
    pub const CROSS_CHECK_PRIME: u64 = 2_147_483_629;

    const MIN_MODULUS: u64 = 1 << 30;
    const MAX_MODULUS: u64 = 1 << 32;

    pub fn new(p: u64) -> Result<Self> {
        if !(Self::MIN_MODULUS..Self::MAX_MODULUS).contains(&p) || !is_prime(p) {
            return Err(Error::UnsupportedModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn default_field() -> Self {
        PrimeField { p: Self::DEFAULT_PRIME }
    }

    pub fn cross_check_field() -> Self {
        PrimeField { p: Self::CROSS_CHECK_PRIME }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn elem(&self, v: u64) -> Fe {
        Fe(v % self.p)
    }

    pub fn from_i64(&self, v: i64) -> Fe {
        let r = v.rem_euclid(self.p as i64);
        Fe(r as u64)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let s = a.0 + b.0;
        Fe(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        Fe(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(a.0 * b.0 % self.p)
    }

    /// `a - b * c`, the elimination kernel.
    #[inline]
    pub fn sub_mul(&self, a: Fe, b: Fe, c: Fe) -> Fe {
        self.sub(a, self.mul(b, c))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// Interprets a residue as the symmetric representative in `(-p/2, p/2]`.
    pub fn to_signed(&self, a: Fe) -> i64 {
        if a.0 > self.p / 2 {
            a.0 as i64 - self.p as i64
        } else {
            a.0 as i64
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self::default_field()
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut f = 3u64;
    while f * f <= p {
        if p % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}
