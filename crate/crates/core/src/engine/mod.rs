//! The potent Solovay–Kitaev procedure.
//!
//! An [`Instance`] supplies a filtration `N_1 ≥ N_2 ≥ …` with companion
//! subgroups `M_i ≥ N_i`, exponents `k_i`, and an oracle writing any
//! `z ∈ N_i` as a product of `A_i` many `k_i`-th powers of elements of `M_i`
//! modulo `N_{i+1}`. [`Navigator::navigate`] turns that into positive words:
//!
//! ```text
//! approx(i+1, g) = approx(i, g) · approx(i, y_1)^k · … · approx(i, y_A)^k
//! ```
//!
//! where `y_1..y_A` come from the oracle applied to `approx(i, g)⁻¹ g`.

pub mod base;
pub mod bounds;
pub mod word;

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::time::Instant;

use num_bigint::BigUint;
use rand::RngCore;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Quotient;

pub use base::{BaseStrategy, BfsBase, MitmBase, TrivialBase};
pub use word::Word;

/// A filtration satisfying the potent SKP hypotheses.
///
/// Levels are numbered `1..=target_level()`; `N_0` is the whole group.
/// `power_approx(i, ·)` is only called for `i < target_level()`.
pub trait Instance {
    type Elem: Clone + Debug;
    type Key: Clone + Eq + Hash + Debug;
    /// The finite quotient Γ/N_1 used by the base case.
    type Base: Quotient;

    fn describe(&self) -> String;
    fn target_level(&self) -> usize;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn serialize(&self, a: &Self::Elem) -> String;

    fn in_n(&self, level: usize, g: &Self::Elem) -> bool;
    fn in_m(&self, level: usize, g: &Self::Elem) -> bool;
    /// Canonical key of the coset `g N_level`.
    fn coset_key(&self, level: usize, g: &Self::Elem) -> Self::Key;

    fn a_n(&self, level: usize) -> usize;
    fn k_n(&self, level: usize) -> u32;

    /// For `z ∈ N_level`: `A` elements of `M_level` whose `k`-th powers
    /// multiply to `z` modulo `N_{level+1}`.
    fn power_approx(&self, level: usize, z: &Self::Elem) -> Result<Vec<Self::Elem>>;

    /// Exponents of `z ∈ N_level` on the residue generators of
    /// `N_level / N_{level+1}` (empty if the instance has no such notion).
    fn residue_exponents(&self, _level: usize, _z: &Self::Elem) -> Vec<i8> {
        Vec::new()
    }

    /// Per-level parameters for traces.
    fn level_info(&self, level: usize) -> serde_json::Value {
        serde_json::json!({ "A": self.a_n(level), "k": self.k_n(level) })
    }

    fn base(&self) -> Self::Base;
    fn project(&self, g: &Self::Elem) -> <Self::Base as Quotient>::Elem;

    fn sample_n(&self, level: usize, rng: &mut dyn RngCore) -> Self::Elem;
    fn sample_m(&self, level: usize, rng: &mut dyn RngCore) -> Self::Elem;
    /// A random element of the whole group (or of the deepest region the
    /// instance can sample from).
    fn sample_group(&self, rng: &mut dyn RngCore) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, k: u32) -> Self::Elem {
        word::pow_sq(&AsQuotient::new(self, 0), a, k)
    }

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ai = self.inv(a);
        let bi = self.inv(b);
        self.mul(&self.mul(&ai, &bi), &self.mul(a, b))
    }

    /// `|Γ : N_1|`, if known.
    fn index_n1(&self) -> Option<u128> {
        self.base().order()
    }
}

/// Views an instance as the quotient Γ/N_level.
pub struct AsQuotient<'a, I: ?Sized> {
    pub inst: &'a I,
    pub level: usize,
}

impl<'a, I: Instance + ?Sized> AsQuotient<'a, I> {
    pub fn new(inst: &'a I, level: usize) -> Self {
        AsQuotient { inst, level }
    }
}

impl<I: Instance + ?Sized> Quotient for AsQuotient<'_, I> {
    type Elem = I::Elem;
    type Key = I::Key;

    fn identity(&self) -> I::Elem {
        self.inst.identity()
    }
    fn mul(&self, a: &I::Elem, b: &I::Elem) -> I::Elem {
        self.inst.mul(a, b)
    }
    fn inv(&self, a: &I::Elem) -> I::Elem {
        self.inst.inv(a)
    }
    fn key(&self, a: &I::Elem) -> I::Key {
        self.inst.coset_key(self.level, a)
    }
    fn describe(&self) -> String {
        format!("{}/N_{}", self.inst.describe(), self.level)
    }
}

/// What happened at one level of a navigation run.
#[derive(Clone, Debug, Serialize)]
pub struct LevelTrace {
    pub level: usize,
    pub params: serde_json::Value,
    /// Residue exponents of the target along the main recursion path.
    pub residue_exponents: Vec<i8>,
    /// Calls of `approx` at this level (including memo hits).
    pub calls: u64,
    pub memo_hits: u64,
    /// Calls that found a nontrivial residue and invoked the oracle.
    pub oracle_calls: u64,
    pub congruence_ok: bool,
}

#[derive(Clone, Debug)]
pub struct NavigationResult {
    pub word: Word,
    pub level: usize,
    /// Length bound for the chosen base: `base_bound · ∏(1 + A_i k_i)`.
    pub bound: BigUint,
    /// `|Γ:N_1| · ∏(1 + A_i k_i)`, when the index is known.
    pub index_bound: Option<BigUint>,
    /// Independent evaluation of the word agrees with the target mod `N_level`.
    pub evaluation_ok: bool,
    pub certified: bool,
    pub trace: Vec<LevelTrace>,
    pub elapsed_ms: f64,
}

impl NavigationResult {
    pub fn length(&self) -> &BigUint {
        self.word.len()
    }

    /// JSON record; the word is included as a base-36 string when it has at
    /// most `word_cap` letters, otherwise as `null`. Timing is omitted unless
    /// requested so that records are reproducible byte for byte.
    pub fn to_json(&self, group: &str, generators: &[String], word_cap: usize, timing: bool) -> serde_json::Value {
        let mut v = serde_json::json!({
            "group": group,
            "level": self.level,
            "generators": generators,
            "word": self.word.render(word_cap),
            "length": self.word.len().to_string(),
            "bound": self.bound.to_string(),
            "index_bound": self.index_bound.as_ref().map(|b| b.to_string()),
            "evaluation_ok": self.evaluation_ok,
            "certified": self.certified,
            "trace": self.trace,
        });
        if timing {
            v["elapsed_ms"] = serde_json::json!(self.elapsed_ms);
        }
        v
    }
}

/// Run-time switches of the recursion.
#[derive(Clone, Copy, Debug)]
pub struct NavOptions {
    /// Check each oracle answer as soon as it is produced.
    pub check_oracle: bool,
    /// Check `y^k ≡ ỹ^k mod N_{i+1}` for every approximated `y`.
    pub check_hp: bool,
}

impl Default for NavOptions {
    fn default() -> Self {
        NavOptions {
            check_oracle: true,
            check_hp: false,
        }
    }
}

#[derive(Default, Clone, Copy)]
struct Counters {
    calls: u64,
    memo_hits: u64,
    oracle_calls: u64,
}

/// One navigation run: an instance, a generating set and a base strategy,
/// plus a memo table shared by every element navigated through it.
pub struct Navigator<'a, I: Instance, B: BaseStrategy<I>> {
    inst: &'a I,
    gens: Vec<I::Elem>,
    base: B,
    opts: NavOptions,
    memo: HashMap<(usize, I::Key), (Word, I::Elem)>,
    counters: Vec<Counters>,
}

impl<'a, I: Instance, B: BaseStrategy<I>> Navigator<'a, I, B> {
    pub fn new(inst: &'a I, gens: Vec<I::Elem>, base: B) -> Self {
        Self::with_options(inst, gens, base, NavOptions::default())
    }

    pub fn with_options(inst: &'a I, gens: Vec<I::Elem>, base: B, opts: NavOptions) -> Self {
        Navigator {
            inst,
            gens,
            base,
            opts,
            memo: HashMap::new(),
            counters: Vec::new(),
        }
    }

    pub fn gens(&self) -> &[I::Elem] {
        &self.gens
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    /// `∏_{i<level} (1 + A_i k_i)`.
    pub fn growth(&self, level: usize) -> BigUint {
        (1..level)
            .map(|i| BigUint::from(1 + self.inst.a_n(i) as u64 * self.inst.k_n(i) as u64))
            .product()
    }

    /// Positive word for `g` modulo `N_level`, with certificate and trace.
    pub fn navigate(&mut self, level: usize, g: &I::Elem) -> Result<NavigationResult> {
        if level == 0 || level > self.inst.target_level() {
            return Err(Error::LevelTooDeep {
                level,
                modulus: self.inst.target_level(),
            });
        }
        let start = Instant::now();
        self.counters = vec![Counters::default(); level + 1];
        let (word, _) = self.approx(level, g)?;

        // Independent check: re-evaluate the word from scratch.
        let q = AsQuotient::new(self.inst, level);
        let value = word.eval(&q, &self.gens);
        let evaluation_ok =
            word.letters_below(self.gens.len()) && self.inst.in_n(level, &self.inst.mul(&self.inst.inv(&value), g));

        let mut trace = Vec::with_capacity(level);
        for i in 1..=level {
            let (exps, ok) = if i < level {
                let (_, e) = self.approx(i, g)?;
                let z = self.inst.mul(&self.inst.inv(&e), g);
                (self.inst.residue_exponents(i, &z), self.inst.in_n(i, &z))
            } else {
                (Vec::new(), evaluation_ok)
            };
            let c = self.counters[i];
            trace.push(LevelTrace {
                level: i,
                params: self.inst.level_info(i),
                residue_exponents: exps,
                calls: c.calls,
                memo_hits: c.memo_hits,
                oracle_calls: c.oracle_calls,
                congruence_ok: ok,
            });
        }

        let growth = self.growth(level);
        let bound = BigUint::from(self.base.length_bound()) * &growth;
        let index_bound = self.inst.index_n1().map(|idx| BigUint::from(idx) * &growth);
        let certified = evaluation_ok && word.len() <= &bound;
        Ok(NavigationResult {
            word,
            level,
            bound,
            index_bound,
            evaluation_ok,
            certified,
            trace,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    }

    /// The recursion proper: a word and its value, agreeing with `g` mod `N_level`.
    pub fn approx(&mut self, level: usize, g: &I::Elem) -> Result<(Word, I::Elem)> {
        if let Some(c) = self.counters.get_mut(level) {
            c.calls += 1;
        }
        let inst = self.inst;
        if inst.in_n(level, g) {
            return Ok((Word::empty(), inst.identity()));
        }
        let key = (level, inst.coset_key(level, g));
        if let Some(hit) = self.memo.get(&key) {
            if let Some(c) = self.counters.get_mut(level) {
                c.memo_hits += 1;
            }
            return Ok(hit.clone());
        }

        let out = if level == 1 {
            let letters = self.base.word_for(inst, g)?;
            let q = AsQuotient::new(inst, 1);
            let value = q.eval_word(&self.gens, &letters);
            (Word::from_letters(letters), value)
        } else {
            let i = level - 1;
            let (w, e) = self.approx(i, g)?;
            let z = inst.mul(&inst.inv(&e), g);
            if !inst.in_n(i, &z) {
                return Err(Error::CongruenceViolation { level: i });
            }
            let k = inst.k_n(i);
            let ys = inst.power_approx(i, &z)?;
            if let Some(c) = self.counters.get_mut(level) {
                c.oracle_calls += 1;
            }
            if self.opts.check_oracle {
                self.check_oracle(i, &z, &ys)?;
            }
            let mut parts = vec![w];
            let mut value = e;
            for y in &ys {
                let (wy, ey) = self.approx(i, y)?;
                let eyk = inst.pow(&ey, k);
                if self.opts.check_hp {
                    let yk = inst.pow(y, k);
                    if !inst.in_n(level, &inst.mul(&yk, &inst.inv(&eyk))) {
                        return Err(Error::CongruenceViolation { level });
                    }
                }
                parts.push(wy.pow(k));
                value = inst.mul(&value, &eyk);
            }
            if !inst.in_n(level, &inst.mul(&inst.inv(&value), g)) {
                return Err(Error::CongruenceViolation { level });
            }
            (Word::concat(parts), value)
        };
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn check_oracle(&self, i: usize, z: &I::Elem, ys: &[I::Elem]) -> Result<()> {
        let inst = self.inst;
        if ys.len() != inst.a_n(i) || !ys.iter().all(|y| inst.in_m(i, y)) {
            return Err(Error::OracleViolation { level: i });
        }
        let k = inst.k_n(i);
        let prod = ys
            .iter()
            .fold(inst.identity(), |acc, y| inst.mul(&acc, &inst.pow(y, k)));
        if !inst.in_n(i + 1, &inst.mul(&prod, &inst.inv(z))) {
            return Err(Error::OracleViolation { level: i });
        }
        Ok(())
    }
}

/// How a [`Corrupted`] instance damages oracle answers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corruption {
    /// Invert every `y` (flips the sign of each residue exponent).
    FlipSign,
    /// Replace the first non-identity `y` by the identity.
    DropFirst,
}

/// Wraps an instance with a deliberately wrong oracle, for fault injection.
pub struct Corrupted<I> {
    pub inner: I,
    pub mode: Corruption,
}

impl<I: Instance> Instance for Corrupted<I> {
    type Elem = I::Elem;
    type Key = I::Key;
    type Base = I::Base;

    fn describe(&self) -> String {
        format!("{} [corrupted: {:?}]", self.inner.describe(), self.mode)
    }
    fn target_level(&self) -> usize {
        self.inner.target_level()
    }
    fn identity(&self) -> I::Elem {
        self.inner.identity()
    }
    fn mul(&self, a: &I::Elem, b: &I::Elem) -> I::Elem {
        self.inner.mul(a, b)
    }
    fn inv(&self, a: &I::Elem) -> I::Elem {
        self.inner.inv(a)
    }
    fn serialize(&self, a: &I::Elem) -> String {
        self.inner.serialize(a)
    }
    fn in_n(&self, level: usize, g: &I::Elem) -> bool {
        self.inner.in_n(level, g)
    }
    fn in_m(&self, level: usize, g: &I::Elem) -> bool {
        self.inner.in_m(level, g)
    }
    fn coset_key(&self, level: usize, g: &I::Elem) -> I::Key {
        self.inner.coset_key(level, g)
    }
    fn a_n(&self, level: usize) -> usize {
        self.inner.a_n(level)
    }
    fn k_n(&self, level: usize) -> u32 {
        self.inner.k_n(level)
    }
    fn power_approx(&self, level: usize, z: &I::Elem) -> Result<Vec<I::Elem>> {
        let mut ys = self.inner.power_approx(level, z)?;
        match self.mode {
            Corruption::FlipSign => {
                for y in ys.iter_mut() {
                    *y = self.inner.inv(y);
                }
            }
            Corruption::DropFirst => {
                let id = self.inner.serialize(&self.inner.identity());
                if let Some(y) = ys.iter_mut().find(|y| self.inner.serialize(y) != id) {
                    *y = self.inner.identity();
                }
            }
        }
        Ok(ys)
    }
    fn residue_exponents(&self, level: usize, z: &I::Elem) -> Vec<i8> {
        self.inner.residue_exponents(level, z)
    }
    fn level_info(&self, level: usize) -> serde_json::Value {
        self.inner.level_info(level)
    }
    fn base(&self) -> I::Base {
        self.inner.base()
    }
    fn project(&self, g: &I::Elem) -> <I::Base as Quotient>::Elem {
        self.inner.project(g)
    }
    fn sample_n(&self, level: usize, rng: &mut dyn RngCore) -> I::Elem {
        self.inner.sample_n(level, rng)
    }
    fn sample_m(&self, level: usize, rng: &mut dyn RngCore) -> I::Elem {
        self.inner.sample_m(level, rng)
    }
    fn sample_group(&self, rng: &mut dyn RngCore) -> I::Elem {
        self.inner.sample_group(rng)
    }
    fn index_n1(&self) -> Option<u128> {
        self.inner.index_n1()
    }
}
