//! Binary extension fields GF(2^e), 1 <= e <= 16.
//!
//! Elements are bit vectors of polynomials over F2 reduced modulo the
//! lexicographically least irreducible polynomial of degree `e` (see
//! [`IRREDUCIBLES`]). Addition is XOR; multiplication is carry-less
//! multiplication followed by reduction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lexicographically least irreducible polynomial over F2 of each degree
/// 1..=16, bit `i` holding the coefficient of `x^i`.
pub const IRREDUCIBLES: [u32; 16] = [
    0x2, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b,
];

/// An element of GF(2^e); bit `i` is the coefficient of `x^i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// The field GF(q), q = 2^degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Gf2m {
    degree: u32,
    modulus: u32,
}

impl Gf2m {
    pub fn new(degree: u32) -> Result<Self> {
        if !(1..=16).contains(&degree) {
            return Err(Error::UnsupportedField(degree));
        }
        Ok(Gf2m {
            degree,
            modulus: IRREDUCIBLES[degree as usize - 1],
        })
    }

    /// Field of order `q`; `q` must be a power of two between 2 and 2^16.
    pub fn with_order(q: u32) -> Result<Self> {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::UnsupportedField(q));
        }
        Self::new(q.trailing_zeros())
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        1 << self.degree
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of hex digits used by the serialized form of an element.
    pub fn hex_width(&self) -> usize {
        self.degree.div_ceil(4) as usize
    }

    pub fn elem(&self, bits: u32) -> FieldElem {
        FieldElem(bits & (self.order() - 1))
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(a.0 ^ b.0)
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.degree == 1 {
            return FieldElem(a.0 & b.0);
        }
        let mut acc: u64 = 0;
        let x = a.0 as u64;
        let mut y = b.0;
        let mut shift = 0;
        while y != 0 {
            if y & 1 == 1 {
                acc ^= x << shift;
            }
            y >>= 1;
            shift += 1;
        }
        FieldElem(self.reduce(acc))
    }

    fn reduce(&self, mut v: u64) -> u32 {
        let d = self.degree;
        let m = self.modulus as u64;
        while v >> d != 0 {
            let top = 63 - v.leading_zeros();
            v ^= m << (top - d);
        }
        v as u32
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::NotUnit);
        }
        Ok(self.pow(a, self.order() as u64 - 2))
    }

    /// All field elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order()).map(FieldElem)
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        let n = self.order() as u64 - 1;
        let primes = prime_factors(n);
        self.elements()
            .skip(1)
            .find(|&g| primes.iter().all(|&p| self.pow(g, n / p) != FieldElem::ONE))
            .unwrap_or(FieldElem::ONE)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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
