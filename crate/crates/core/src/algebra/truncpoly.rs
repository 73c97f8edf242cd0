//! The truncated polynomial ring R_n = GF(q)[t]/(t^n).

use std::fmt;
use std::str::FromStr;

use super::gf2m::{FieldElem, Gf2m};
use crate::error::{Error, Result};

/// An element of GF(q)[t]/(t^n); `coeffs[i]` is the coefficient of `t^i`
/// and `coeffs.len() == n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    field: Gf2m,
    coeffs: Vec<FieldElem>,
}

impl TruncPoly {
    pub fn zero(field: Gf2m, n: usize) -> Self {
        TruncPoly {
            field,
            coeffs: vec![FieldElem::ZERO; n],
        }
    }

    pub fn one(field: Gf2m, n: usize) -> Self {
        Self::constant(field, n, FieldElem::ONE)
    }

    pub fn constant(field: Gf2m, n: usize, c: FieldElem) -> Self {
        let mut p = Self::zero(field, n);
        if n > 0 {
            p.coeffs[0] = field.elem(c.0);
        }
        p
    }

    /// `c * t^k`, zero if `k >= n`.
    pub fn monomial(field: Gf2m, n: usize, k: usize, c: FieldElem) -> Self {
        let mut p = Self::zero(field, n);
        if k < n {
            p.coeffs[k] = field.elem(c.0);
        }
        p
    }

    /// Builds from low-degree-first coefficients, truncating or padding to `n`.
    pub fn from_coeffs(field: Gf2m, n: usize, coeffs: &[u32]) -> Self {
        let mut p = Self::zero(field, n);
        for (slot, &c) in p.coeffs.iter_mut().zip(coeffs) {
            *slot = field.elem(c);
        }
        p
    }

    pub fn field(&self) -> Gf2m {
        self.field
    }

    pub fn modulus_degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| if i == 0 { c.0 == 1 } else { c.is_zero() })
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.first().is_some_and(|c| !c.is_zero())
    }

    /// Index of the lowest nonzero coefficient; `n` for zero.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.degree(),
                right: other.field.degree(),
            });
        }
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::ModulusMismatch {
                left: self.coeffs.len(),
                right: other.coeffs.len(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| FieldElem(a.0 ^ b.0))
            .collect();
        TruncPoly {
            field: self.field,
            coeffs,
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let f = self.field;
        let mut out = vec![FieldElem::ZERO; n];
        let lo = self.valuation();
        let lo_other = other.valuation();
        for i in lo..n {
            let a = self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in lo_other..n - i {
                let b = other.coeffs[j];
                if !b.is_zero() {
                    out[i + j].0 ^= f.mul(a, b).0;
                }
            }
        }
        TruncPoly {
            field: f,
            coeffs: out,
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn try_inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let f = self.field;
        let n = self.coeffs.len();
        let c0 = f.inv(self.coeffs[0])?;
        let mut out = vec![FieldElem::ZERO; n];
        out[0] = c0;
        // x * y = 1: y_k = c0 * sum_{j=1..k} x_j y_{k-j}  (characteristic 2)
        for k in 1..n {
            let mut acc = 0u32;
            for j in 1..=k {
                acc ^= f.mul(self.coeffs[j], out[k - j]).0;
            }
            out[k] = f.mul(FieldElem(acc), c0);
        }
        Ok(TruncPoly {
            field: f,
            coeffs: out,
        })
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![FieldElem::ZERO; n];
        if k < n {
            out[k..].copy_from_slice(&self.coeffs[..n - k]);
        }
        TruncPoly {
            field: self.field,
            coeffs: out,
        }
    }

    /// Keeps only the terms of degree < `k` (the modulus degree is unchanged).
    pub fn low_part(&self, k: usize) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut().skip(k) {
            *c = FieldElem::ZERO;
        }
        out
    }

    /// Divides by `t^k`, dropping the low `k` terms (inverse of `shift` on
    /// multiples of `t^k`, with the top `k` coefficients left zero).
    pub fn unshift(&self, k: usize) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![FieldElem::ZERO; n];
        if k < n {
            out[..n - k].copy_from_slice(&self.coeffs[k..]);
        }
        TruncPoly {
            field: self.field,
            coeffs: out,
        }
    }

    /// Image in R_m for `m <= n` (reduction), or the zero-padded lift for `m > n`.
    pub fn resize(&self, m: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(m, FieldElem::ZERO);
        TruncPoly {
            field: self.field,
            coeffs,
        }
    }

    /// Canonical text form: `n:c0,c1,...` with lowercase hex coefficients.
    pub fn serialize(&self) -> String {
        let body: Vec<String> = self.coeffs.iter().map(|c| format!("{:x}", c.0)).collect();
        format!("{}:{}", self.coeffs.len(), body.join(","))
    }

    pub fn parse(field: Gf2m, s: &str) -> Result<Self> {
        let (n, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing ':' in {s:?}")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus degree in {s:?}")))?;
        let parts: Vec<&str> = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',').collect()
        };
        if parts.len() != n {
            return Err(Error::Parse(format!(
                "expected {n} coefficients, found {}",
                parts.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(n);
        for p in parts {
            let v = u32::from_str_radix(p.trim(), 16)
                .map_err(|_| Error::Parse(format!("bad hex coefficient {p:?}")))?;
            if v >= field.order() {
                return Err(Error::Parse(format!("coefficient {p} outside GF({})", field.order())));
            }
            coeffs.push(FieldElem(v));
        }
        Ok(TruncPoly { field, coeffs })
    }

    /// Packs the coefficients into 64-bit words, `degree` bits per coefficient.
    pub(crate) fn pack_into(&self, out: &mut Vec<u64>, upto: usize) {
        let w = self.field.degree() as usize;
        let mut word = 0u64;
        let mut used = 0;
        for c in self.coeffs.iter().take(upto) {
            if used + w > 64 {
                out.push(word);
                word = 0;
                used = 0;
            }
            word |= (c.0 as u64) << used;
            used += w;
        }
        out.push(word);
    }
}

impl fmt::Debug for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match (i, c.0) {
                (0, v) => format!("{v:x}"),
                (1, 1) => "t".to_string(),
                (i, 1) => format!("t^{i}"),
                (1, v) => format!("{v:x}t"),
                (i, v) => format!("{v:x}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }?;
        write!(f, " (mod t^{})", self.coeffs.len())
    }
}

impl FromStr for TruncPoly {
    type Err = Error;

    /// Parses over GF(2).
    fn from_str(s: &str) -> Result<Self> {
        TruncPoly::parse(Gf2m::new(1)?, s)
    }
}
