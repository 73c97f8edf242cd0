//! Automorphisms of the ternary rooted tree, truncated at depth `m`.
//!
//! A [`Portrait`] stores one label in Z/3 per internal vertex (words of
//! length `< m` over {0,1,2}), breadth-first, lexicographic within a level.
//! The label `l` at `v` means `g(v x w) = g(v) (x + l) g_{vx}(w)`.
//!
//! Products act on the right: `v^{gh} = (v^g)^h`, so
//! `lab_{gh}(v) = lab_g(v) + lab_h(v^g)` and `(gh)_x = g_x h_{x^g}`.
//! With `[x, y] = x⁻¹y⁻¹xy` and `x^g = g⁻¹xg` this reproduces
//! `[a, b] = (b⁻¹a, a⁻¹, b)` and `[a, [a, b]] = (ba, a⁻¹ba⁻¹, ab)`.

use std::borrow::Borrow;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::Quotient;

/// `3^k`.
pub const fn pow3(k: usize) -> usize {
    3usize.pow(k as u32)
}

/// Index of the first vertex of level `l`.
pub const fn level_start(l: usize) -> usize {
    (pow3(l) - 1) / 2
}

/// Number of internal vertices of a depth-`m` portrait.
pub const fn n_vertices(m: usize) -> usize {
    level_start(m)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Portrait {
    depth: usize,
    labels: Vec<u8>,
}

impl Portrait {
    pub fn identity(m: usize) -> Self {
        Portrait {
            depth: m,
            labels: vec![0; n_vertices(m)],
        }
    }

    pub fn from_labels(m: usize, labels: Vec<u8>) -> Result<Self> {
        if labels.len() != n_vertices(m) {
            return Err(Error::Parse(format!(
                "depth {m} needs {} labels, got {}",
                n_vertices(m),
                labels.len()
            )));
        }
        if labels.iter().any(|&l| l > 2) {
            return Err(Error::Parse("labels must lie in {0,1,2}".into()));
        }
        Ok(Portrait { depth: m, labels })
    }

    /// The rooted 3-cycle `a`: root label 1, all sections trivial.
    pub fn gen_a(m: usize) -> Self {
        let mut p = Self::identity(m);
        if m > 0 {
            p.labels[0] = 1;
        }
        p
    }

    /// `b = (a, 1, b)`: label 1 at the vertices `2…20`.
    pub fn gen_b(m: usize) -> Self {
        let mut p = Self::identity(m);
        // vertex 2^k followed by 0, for k + 1 < m
        let mut v = 0usize;
        for _ in 1..m {
            p.labels[3 * v + 1] = 1;
            v = 3 * v + 3;
        }
        p
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn label(&self, level: usize, offset: usize) -> u8 {
        self.labels[level_start(level) + offset]
    }

    /// Labels of one level, left to right.
    pub fn level_labels(&self, level: usize) -> &[u8] {
        &self.labels[level_start(level)..level_start(level + 1)]
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().all(|&l| l == 0)
    }

    fn check_depth(&self, other: &Self) -> Result<()> {
        if self.depth != other.depth {
            return Err(Error::DepthMismatch {
                left: self.depth,
                right: other.depth,
            });
        }
        Ok(())
    }

    /// `img[v]` = index of `v^self`, for every internal vertex.
    pub fn images(&self) -> Vec<u32> {
        let n = self.labels.len();
        let mut img = vec![0u32; n];
        let inner = level_start(self.depth.saturating_sub(1));
        for v in 0..inner {
            let (iv, l) = (img[v] as usize, self.labels[v]);
            for x in 0..3u8 {
                img[3 * v + 1 + x as usize] = (3 * iv + 1 + ((x + l) % 3) as usize) as u32;
            }
        }
        img
    }

    pub fn try_mul(&self, h: &Self) -> Result<Self> {
        self.check_depth(h)?;
        Ok(self.mul(h))
    }

    /// `self · h` (first `self`, then `h`).
    pub fn mul(&self, h: &Self) -> Self {
        debug_assert_eq!(self.depth, h.depth);
        let img = self.images();
        let labels = self
            .labels
            .iter()
            .zip(&img)
            .map(|(&l, &i)| {
                let s = l + h.labels[i as usize];
                if s >= 3 {
                    s - 3
                } else {
                    s
                }
            })
            .collect();
        Portrait {
            depth: self.depth,
            labels,
        }
    }

    pub fn inv(&self) -> Self {
        let img = self.images();
        let mut labels = vec![0u8; self.labels.len()];
        for (v, &l) in self.labels.iter().enumerate() {
            labels[img[v] as usize] = (3 - l) % 3;
        }
        Portrait {
            depth: self.depth,
            labels,
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Portrait::identity(self.depth);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// `g⁻¹ self g`.
    pub fn conj(&self, g: &Self) -> Self {
        g.inv().mul(self).mul(g)
    }

    /// `[self, h] = self⁻¹ h⁻¹ self h`.
    pub fn comm(&self, h: &Self) -> Self {
        self.inv().mul(&h.inv()).mul(self).mul(h)
    }

    /// Largest `n ≤ depth` such that `self` fixes every vertex of level `n`.
    pub fn stab_level(&self) -> usize {
        match self.labels.iter().position(|&l| l != 0) {
            None => self.depth,
            Some(i) => (0..self.depth).find(|&l| level_start(l + 1) > i).unwrap(),
        }
    }

    /// Section at the vertex with index `offset` on `level` (depth `m - level`).
    pub fn section(&self, level: usize, offset: usize) -> Portrait {
        assert!(level <= self.depth && offset < pow3(level));
        let d = self.depth - level;
        let mut labels = Vec::with_capacity(n_vertices(d));
        for k in 0..d {
            let s = level_start(level + k) + offset * pow3(k);
            labels.extend_from_slice(&self.labels[s..s + pow3(k)]);
        }
        Portrait { depth: d, labels }
    }

    /// `(g_0, g_1, g_2)` for `g ∈ Stab(1)`.
    pub fn sections(&self) -> Result<[Portrait; 3]> {
        if self.depth == 0 {
            return Err(Error::DepthMismatch { left: 0, right: 1 });
        }
        if self.labels[0] != 0 {
            return Err(Error::NotInStabiliser(self.labels[0]));
        }
        Ok([self.section(1, 0), self.section(1, 1), self.section(1, 2)])
    }

    /// The element with root label `root` and the given sections.
    pub fn assemble(t: &[Portrait; 3], root: u8) -> Result<Portrait> {
        let d = t[0].depth;
        if t.iter().any(|p| p.depth != d) {
            return Err(Error::DepthMismatch {
                left: d,
                right: t.iter().map(|p| p.depth).find(|&x| x != d).unwrap(),
            });
        }
        let mut p = Self::place_all(1, t, d + 1);
        p.labels[0] = root % 3;
        Ok(p)
    }

    /// Element of `Stab(level)` whose sections at that level are `subs`
    /// (left to right, `3^level` portraits of depth `m - level`).
    pub fn place_all<P: Borrow<Portrait>>(level: usize, subs: &[P], m: usize) -> Portrait {
        assert_eq!(subs.len(), pow3(level));
        let d = m - level;
        let mut labels = vec![0u8; n_vertices(m)];
        for (p, s) in subs.iter().enumerate() {
            let s = s.borrow();
            assert_eq!(s.depth, d);
            for k in 0..d {
                let dst = level_start(level + k) + p * pow3(k);
                let src = level_start(k);
                labels[dst..dst + pow3(k)].copy_from_slice(&s.labels[src..src + pow3(k)]);
            }
        }
        Portrait { depth: m, labels }
    }

    /// Element of `Stab(level)` with section `s` at `offset` and trivial elsewhere.
    pub fn place(level: usize, offset: usize, s: &Portrait) -> Portrait {
        let m = s.depth + level;
        let mut labels = vec![0u8; n_vertices(m)];
        for k in 0..s.depth {
            let dst = level_start(level + k) + offset * pow3(k);
            let src = level_start(k);
            labels[dst..dst + pow3(k)].copy_from_slice(&s.labels[src..src + pow3(k)]);
        }
        Portrait { depth: m, labels }
    }

    /// Image in the depth-`m` quotient (`m ≤ depth`).
    pub fn truncate(&self, m: usize) -> Portrait {
        assert!(m <= self.depth);
        Portrait {
            depth: m,
            labels: self.labels[..n_vertices(m)].to_vec(),
        }
    }

    /// `m:` followed by the labels as digits.
    pub fn serialize(&self) -> String {
        let mut s = format!("{}:", self.depth);
        s.extend(self.labels.iter().map(|&l| (b'0' + l) as char));
        s
    }

    pub fn parse(s: &str) -> Result<Portrait> {
        let (m, digits) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse("expected m:digits".into()))?;
        let m: usize = m.trim().parse().map_err(|_| Error::Parse(format!("bad depth {m:?}")))?;
        if m > 16 {
            return Err(Error::Parse(format!("depth {m} too large")));
        }
        let labels = digits
            .trim()
            .bytes()
            .map(|c| match c {
                b'0'..=b'2' => Ok(c - b'0'),
                _ => Err(Error::Parse(format!("bad digit {:?}", c as char))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Portrait::from_labels(m, labels)
    }

    /// Evaluates a word over `a, b` (and `A = a⁻¹`, `B = b⁻¹`).
    pub fn from_word(m: usize, w: &str) -> Result<Portrait> {
        let (a, b) = (Self::gen_a(m), Self::gen_b(m));
        let (ai, bi) = (a.inv(), b.inv());
        let mut acc = Self::identity(m);
        for c in w.chars() {
            let g = match c {
                'a' => &a,
                'b' => &b,
                'A' => &ai,
                'B' => &bi,
                ' ' | '.' | '*' => continue,
                _ => return Err(Error::Parse(format!("bad letter {c:?} in word"))),
            };
            acc = acc.mul(g);
        }
        Ok(acc)
    }
}

impl fmt::Debug for Portrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.labels.len() <= 121 {
            write!(f, "Portrait({})", self.serialize())
        } else {
            write!(f, "Portrait(depth {}, stab {})", self.depth, self.stab_level())
        }
    }
}

/// The quotient Γ/Stab(m) of the Fabrykowski–Gupta group, as depth-`m`
/// portraits. Its order is `3^{3^{m-1}+1}` for `m ≥ 2` (and 3 for `m = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabQuotient {
    pub depth: usize,
}

/// `|Γ : Stab_Γ(m)|` as a power of 3: the exponent.
pub fn stab_index_exponent(m: usize) -> usize {
    match m {
        0 => 0,
        1 => 1,
        _ => pow3(m - 1) + 1,
    }
}

impl Quotient for StabQuotient {
    type Elem = Portrait;
    type Key = Vec<u8>;

    fn identity(&self) -> Portrait {
        Portrait::identity(self.depth)
    }
    fn mul(&self, a: &Portrait, b: &Portrait) -> Portrait {
        a.mul(b)
    }
    fn inv(&self, a: &Portrait) -> Portrait {
        a.inv()
    }
    fn key(&self, a: &Portrait) -> Vec<u8> {
        a.labels.clone()
    }
    fn order(&self) -> Option<u128> {
        let e = stab_index_exponent(self.depth);
        (e < 80).then(|| 3u128.pow(e as u32))
    }
    fn describe(&self) -> String {
        format!("FG/Stab({})", self.depth)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(m: usize) -> Portrait {
        Portrait::gen_a(m)
    }
    fn b(m: usize) -> Portrait {
        Portrait::gen_b(m)
    }

    #[test]
    fn generators_have_order_three() {
        for m in 1..7 {
            assert!(a(m).pow(3).is_identity());
            assert!(b(m).pow(3).is_identity());
            assert!(!a(m).is_identity());
        }
        assert!(b(1).is_identity());
        assert_eq!(a(2).labels(), &[1, 0, 0, 0]);
    }

    #[test]
    fn b_recursion() {
        let s = b(3).sections().unwrap();
        assert_eq!(s[0], a(2));
        assert!(s[1].is_identity());
        assert_eq!(s[2], b(2));
        let bb = b(4).mul(&b(4)).sections().unwrap();
        assert_eq!(bb, [a(3).pow(2), Portrait::identity(3), b(3).pow(2)]);
    }

    #[test]
    fn commutator_sections() {
        let m = 6;
        let x1 = a(m).comm(&b(m));
        let (a5, b5) = (a(m - 1), b(m - 1));
        assert_eq!(x1.sections().unwrap(), [b5.inv().mul(&a5), a5.inv(), b5.clone()]);
        let x2 = a(m).comm(&x1);
        assert_eq!(
            x2.sections().unwrap(),
            [b5.mul(&a5), a5.inv().mul(&b5).mul(&a5.inv()), a5.mul(&b5)]
        );
        assert_eq!(x1.stab_level(), 1);
        assert_eq!(a(m).stab_level(), 0);
        assert_eq!(Portrait::identity(m).stab_level(), m);
    }

    #[test]
    fn conjugation_by_a_shifts_sections() {
        let m = 5;
        let g = b(m).mul(&a(m).comm(&b(m)));
        let s = g.sections().unwrap();
        let t = g.conj(&a(m)).sections().unwrap();
        assert_eq!(t, [s[2].clone(), s[0].clone(), s[1].clone()]);
    }

    #[test]
    fn assemble_inverts_sections() {
        let m = 5;
        let x = a(m - 1).comm(&b(m - 1));
        let one = Portrait::identity(m - 1);
        let t = [x.clone(), x.inv(), one];
        let p = Portrait::assemble(&t, 0).unwrap();
        assert_eq!(p.sections().unwrap(), t);
        assert!(matches!(a(m).sections(), Err(Error::NotInStabiliser(1))));
        assert_eq!(Portrait::identity(m).sections().unwrap()[1], Portrait::identity(m - 1));
    }

    #[test]
    fn serialization() {
        let g = Portrait::from_word(3, "abAb").unwrap();
        let s = g.serialize();
        assert_eq!(s.len(), 2 + 13);
        assert_eq!(Portrait::parse(&s).unwrap(), g);
        assert!(Portrait::parse("2:1234").is_err());
        assert!(Portrait::parse("2:10").is_err());
        assert_eq!(Portrait::parse("2:1000").unwrap(), a(2));
    }

    #[test]
    fn placement() {
        let x = a(3);
        let p = Portrait::place(2, 4, &x);
        assert_eq!(p.depth(), 5);
        assert_eq!(p.stab_level(), 2);
        assert_eq!(p.section(2, 4), x);
        assert!(p.section(2, 3).is_identity());
    }
}
