//! 2x2 matrices over R_n = GF(q)[t]/(t^n), with SL2 group operations and
//! the congruence level `val`.

use std::fmt;

use super::gf2m::{FieldElem, Gf2m};
use super::truncpoly::TruncPoly;
use crate::error::{Error, Result};

/// `[[a, b], [c, d]]` with all entries over the same R_n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: TruncPoly,
    pub b: TruncPoly,
    pub c: TruncPoly,
    pub d: TruncPoly,
}

impl Mat2 {
    /// Builds a matrix, checking that the entries agree and that `det = 1`.
    pub fn new(a: TruncPoly, b: TruncPoly, c: TruncPoly, d: TruncPoly) -> Result<Self> {
        let m = Mat2 { a, b, c, d };
        m.check_shape()?;
        if !m.det().is_one() {
            return Err(Error::NotSpecialLinear);
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(a: TruncPoly, b: TruncPoly, c: TruncPoly, d: TruncPoly) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity(field: Gf2m, n: usize) -> Self {
        Mat2 {
            a: TruncPoly::one(field, n),
            b: TruncPoly::zero(field, n),
            c: TruncPoly::zero(field, n),
            d: TruncPoly::one(field, n),
        }
    }

    /// Elementary matrix `[[1, x], [0, 1]]`.
    pub fn upper(x: TruncPoly) -> Self {
        let (f, n) = (x.field(), x.modulus_degree());
        Mat2 {
            a: TruncPoly::one(f, n),
            b: x,
            c: TruncPoly::zero(f, n),
            d: TruncPoly::one(f, n),
        }
    }

    /// Elementary matrix `[[1, 0], [x, 1]]`.
    pub fn lower(x: TruncPoly) -> Self {
        let (f, n) = (x.field(), x.modulus_degree());
        Mat2 {
            a: TruncPoly::one(f, n),
            b: TruncPoly::zero(f, n),
            c: x,
            d: TruncPoly::one(f, n),
        }
    }

    /// `diag(u, u^{-1})` for a unit `u`.
    pub fn diag(u: TruncPoly) -> Result<Self> {
        let ui = u.try_inv()?;
        let (f, n) = (u.field(), u.modulus_degree());
        Ok(Mat2 {
            a: u,
            b: TruncPoly::zero(f, n),
            c: TruncPoly::zero(f, n),
            d: ui,
        })
    }

    fn check_shape(&self) -> Result<()> {
        self.a.try_add(&self.b)?;
        self.a.try_add(&self.c)?;
        self.a.try_add(&self.d)?;
        Ok(())
    }

    pub fn field(&self) -> Gf2m {
        self.a.field()
    }

    pub fn modulus_degree(&self) -> usize {
        self.a.modulus_degree()
    }

    /// `ad + bc` (= `ad - bc` in characteristic 2).
    pub fn det(&self) -> TruncPoly {
        self.a
            .mul_unchecked(&self.d)
            .add_unchecked(&self.b.mul_unchecked(&self.c))
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch {
                left: self.field().degree(),
                right: other.field().degree(),
            });
        }
        if self.modulus_degree() != other.modulus_degree() {
            return Err(Error::ModulusMismatch {
                left: self.modulus_degree(),
                right: other.modulus_degree(),
            });
        }
        Ok(self.mul(other))
    }

    /// Product; entries must share a ring (checked in debug builds).
    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.modulus_degree(), o.modulus_degree());
        Mat2 {
            a: self.a.mul_unchecked(&o.a).add_unchecked(&self.b.mul_unchecked(&o.c)),
            b: self.a.mul_unchecked(&o.b).add_unchecked(&self.b.mul_unchecked(&o.d)),
            c: self.c.mul_unchecked(&o.a).add_unchecked(&self.d.mul_unchecked(&o.c)),
            d: self.c.mul_unchecked(&o.b).add_unchecked(&self.d.mul_unchecked(&o.d)),
        }
    }

    /// Inverse via the adjugate `[[d, b], [c, a]]` (signs vanish in
    /// characteristic 2). Fails unless `det = 1`.
    pub fn try_inv(&self) -> Result<Self> {
        if !self.det().is_one() {
            return Err(Error::NotSpecialLinear);
        }
        Ok(self.inv())
    }

    /// Adjugate inverse, assuming `det = 1`.
    pub fn inv(&self) -> Self {
        Mat2 {
            a: self.d.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            d: self.a.clone(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Mat2::identity(self.field(), self.modulus_degree());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `[g, h] = g^{-1} h^{-1} g h`.
    pub fn commutator(&self, h: &Self) -> Self {
        self.inv().mul(&h.inv()).mul(self).mul(h)
    }

    /// Largest `m <= n` with `self = I mod t^m`; the identity maps to `n`.
    pub fn val(&self) -> usize {
        let n = self.modulus_degree();
        let one = TruncPoly::one(self.field(), n);
        let va = self.a.add_unchecked(&one).valuation();
        let vd = self.d.add_unchecked(&one).valuation();
        va.min(vd).min(self.b.valuation()).min(self.c.valuation())
    }

    /// Image in SL2(R_m) (reduction for `m <= n`).
    pub fn reduce(&self, m: usize) -> Self {
        assert!(m <= self.modulus_degree(), "reduce must not lift");
        Mat2 {
            a: self.a.resize(m),
            b: self.b.resize(m),
            c: self.c.resize(m),
            d: self.d.resize(m),
        }
    }

    /// Coefficients of all four entries below `t^level`, packed into words.
    pub fn packed_key(&self, level: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(4);
        for e in [&self.a, &self.b, &self.c, &self.d] {
            e.pack_into(&mut out, level);
        }
        out
    }

    /// `I + t^k X` decomposition: returns the entries of `X = (g - I)/t^k`
    /// (valid when `val(g) >= k`).
    pub fn deviation(&self, k: usize) -> [TruncPoly; 4] {
        let one = TruncPoly::one(self.field(), self.modulus_degree());
        [
            self.a.add_unchecked(&one).unshift(k),
            self.b.unshift(k),
            self.c.unshift(k),
            self.d.add_unchecked(&one).unshift(k),
        ]
    }

    /// `a;b;c;d`, each entry in [`TruncPoly::serialize`] form.
    pub fn serialize(&self) -> String {
        format!(
            "{};{};{};{}",
            self.a.serialize(),
            self.b.serialize(),
            self.c.serialize(),
            self.d.serialize()
        )
    }

    pub fn parse(field: Gf2m, s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("expected 4 entries, found {}", parts.len())));
        }
        let e: Vec<TruncPoly> = parts
            .iter()
            .map(|p| TruncPoly::parse(field, p.trim()))
            .collect::<Result<_>>()?;
        let mut it = e.into_iter();
        let (a, b, c, d) = (
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        );
        Mat2::new(a, b, c, d)
    }

    /// Entry-wise constant-coefficient matrix (image in SL2(GF(q))).
    pub fn constant_part(&self) -> [FieldElem; 4] {
        [self.a.coeff(0), self.b.coeff(0), self.c.coeff(0), self.d.coeff(0)]
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{:?}, {:?}], [{:?}, {:?}]]", self.a, self.b, self.c, self.d)
    }
}
