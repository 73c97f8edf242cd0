//! Base cases: words for Γ/N_1.

use std::path::Path;

use crate::error::{Error, Result};
use crate::group::Quotient;
use crate::oracle::ball::DirectedBallTable;

use super::Instance;

/// Supplies positive words modulo `N_1`.
pub trait BaseStrategy<I: Instance> {
    fn word_for(&self, inst: &I, g: &I::Elem) -> Result<Vec<u32>>;
    /// Every word returned has at most this many letters.
    fn length_bound(&self) -> u128;
    fn describe(&self) -> String;
}

/// Full BFS table of Γ/N_1: shortest words, length ≤ diam⁺(Γ/N_1, S).
pub struct BfsBase<Q: Quotient> {
    table: DirectedBallTable<Q>,
}

impl<Q: Quotient> BfsBase<Q> {
    pub fn new<I>(inst: &I, gens: &[I::Elem], threshold: usize) -> Result<Self>
    where
        I: Instance<Base = Q>,
    {
        let pg: Vec<Q::Elem> = gens.iter().map(|g| inst.project(g)).collect();
        let table = DirectedBallTable::build(inst.base(), pg, None, threshold)?;
        table.require_full()?;
        Ok(BfsBase { table })
    }

    /// As [`new`](Self::new), reusing a ball table cached at `path` when one
    /// exists for the same group and generators (`gens_ser` is the key).
    pub fn with_cache<I>(inst: &I, gens: &[I::Elem], gens_ser: &[String], threshold: usize, path: &Path) -> Result<Self>
    where
        I: Instance<Base = Q>,
        Q: Clone,
    {
        let pg: Vec<Q::Elem> = gens.iter().map(|g| inst.project(g)).collect();
        let table = DirectedBallTable::build_cached(inst.base(), pg, gens_ser, threshold, path)?;
        table.require_full()?;
        Ok(BfsBase { table })
    }

    pub fn table(&self) -> &DirectedBallTable<Q> {
        &self.table
    }

    /// `diam⁺(Γ/N_1, S)`.
    pub fn diameter(&self) -> usize {
        self.table.radius()
    }
}

impl<I: Instance> BaseStrategy<I> for BfsBase<I::Base> {
    fn word_for(&self, inst: &I, g: &I::Elem) -> Result<Vec<u32>> {
        self.table
            .word(&inst.project(g))
            .ok_or_else(|| Error::BaseFailure("element missing from the base table".into()))
    }

    fn length_bound(&self) -> u128 {
        self.table.radius() as u128
    }

    fn describe(&self) -> String {
        format!("bfs(diam+={})", self.table.radius())
    }
}

/// Meet in the middle over the ball `B⁺_S(L)` of Γ/N_1: words `u·v` with
/// `|u|, |v| ≤ L`. Works without enumerating the whole quotient.
pub struct MitmBase<Q: Quotient> {
    table: DirectedBallTable<Q>,
    radius: usize,
}

impl<Q: Quotient> MitmBase<Q> {
    pub fn new<I>(inst: &I, gens: &[I::Elem], radius: usize, threshold: usize) -> Result<Self>
    where
        I: Instance<Base = Q>,
    {
        let pg: Vec<Q::Elem> = gens.iter().map(|g| inst.project(g)).collect();
        let table = DirectedBallTable::build(inst.base(), pg, Some(radius), threshold)?;
        Ok(MitmBase { table, radius })
    }

    pub fn ball_size(&self) -> usize {
        self.table.len()
    }

    /// Finds `u, v` in the ball with `u v = g`, preferring short `u`.
    pub fn find(&self, g: &Q::Elem) -> Result<Vec<u32>> {
        let q = self.table.quotient();
        for (i, u) in self.table.elements().iter().enumerate() {
            let v = q.mul(&q.inv(u), g);
            if let Some(j) = self.table.index_of(&v) {
                let mut w = self.table.word_at(i);
                w.extend(self.table.word_at(j));
                return Ok(w);
            }
        }
        Err(Error::NoMatch { radius: self.radius })
    }
}

impl<I: Instance> BaseStrategy<I> for MitmBase<I::Base> {
    fn word_for(&self, inst: &I, g: &I::Elem) -> Result<Vec<u32>> {
        self.find(&inst.project(g))
    }

    fn length_bound(&self) -> u128 {
        2 * self.radius as u128
    }

    fn describe(&self) -> String {
        format!("mitm(L={}, ball={})", self.radius, self.table.len())
    }
}

/// Accepts only elements already in `N_1` (empty words).
pub struct TrivialBase;

impl<I: Instance> BaseStrategy<I> for TrivialBase {
    fn word_for(&self, inst: &I, g: &I::Elem) -> Result<Vec<u32>> {
        if inst.in_n(1, g) {
            Ok(Vec::new())
        } else {
            Err(Error::BaseFailure(format!(
                "nontrivial residue modulo N_1: {}",
                inst.serialize(g)
            )))
        }
    }

    fn length_bound(&self) -> u128 {
        0
    }

    fn describe(&self) -> String {
        "trivial".into()
    }
}
