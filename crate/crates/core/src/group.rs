//! Finite groups presented by multiplication plus a canonical key.
//!
//! Every table in the crate (ball tables, memo tables, closure tables) is
//! keyed by [`Quotient::key`], never by structural comparison of elements.

use std::fmt::Debug;
use std::hash::Hash;

/// A finite group (typically a quotient Γ/N) with a canonical key per element.
pub trait Quotient {
    type Elem: Clone + Debug;
    type Key: Clone + Eq + Hash + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn key(&self, a: &Self::Elem) -> Self::Key;

    /// Group order when known in closed form.
    fn order(&self) -> Option<u128> {
        None
    }

    fn describe(&self) -> String;

    fn pow(&self, a: &Self::Elem, k: u32) -> Self::Elem {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.key(a) == self.key(b)
    }

    /// Evaluates a positive word over `gens`.
    fn eval_word(&self, gens: &[Self::Elem], word: &[u32]) -> Self::Elem {
        word.iter()
            .fold(self.identity(), |acc, &i| self.mul(&acc, &gens[i as usize]))
    }
}

/// The cyclic group Z/n written multiplicatively.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cyclic {
    pub n: u64,
}

impl Cyclic {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1);
        Cyclic { n }
    }
}

impl Quotient for Cyclic {
    type Elem = u64;
    type Key = u64;

    fn identity(&self) -> u64 {
        0
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.n
    }

    fn inv(&self, a: &u64) -> u64 {
        (self.n - a % self.n) % self.n
    }

    fn key(&self, a: &u64) -> u64 {
        *a % self.n
    }

    fn order(&self) -> Option<u128> {
        Some(self.n as u128)
    }

    fn describe(&self) -> String {
        format!("C{}", self.n)
    }
}
