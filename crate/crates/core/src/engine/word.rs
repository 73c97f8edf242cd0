//! Positive words as straight-line programs.
//!
//! Navigation words in deep quotients are far too long to store letter by
//! letter (the Fabrykowski–Gupta bound grows like 7·10⁷ per period), so a
//! [`Word`] is a shared DAG of literal runs, concatenations and powers. Only
//! generator indices ever appear; there is no inverse letter.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::group::Quotient;

/// Literal runs up to this length are flattened eagerly.
const FLATTEN_LIMIT: usize = 64;

#[derive(Debug)]
enum Node {
    Letters(Vec<u32>),
    Concat(Vec<Word>),
    Power(Word, u32),
}

/// A positive word over generator indices, shared and immutable.
#[derive(Clone)]
pub struct Word {
    node: Arc<Node>,
    len: BigUint,
}

impl Word {
    pub fn empty() -> Self {
        Word::from_letters(Vec::new())
    }

    pub fn from_letters(letters: Vec<u32>) -> Self {
        let len = BigUint::from(letters.len());
        Word {
            node: Arc::new(Node::Letters(letters)),
            len,
        }
    }

    pub fn len(&self) -> &BigUint {
        &self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len.is_zero()
    }

    /// Length as `u64`, if it fits.
    pub fn len_u64(&self) -> Option<u64> {
        self.len.to_u64()
    }

    fn small_letters(&self) -> Option<Vec<u32>> {
        match self.len.to_usize() {
            Some(n) if n <= FLATTEN_LIMIT => self.to_letters(FLATTEN_LIMIT),
            _ => None,
        }
    }

    pub fn concat(parts: Vec<Word>) -> Self {
        let parts: Vec<Word> = parts.into_iter().filter(|w| !w.is_empty()).collect();
        match parts.len() {
            0 => return Word::empty(),
            1 => return parts.into_iter().next().unwrap(),
            _ => {}
        }
        let len: BigUint = parts.iter().map(|w| &w.len).sum();
        if len <= BigUint::from(FLATTEN_LIMIT) {
            let mut letters = Vec::new();
            for p in &parts {
                letters.extend(p.small_letters().expect("short part"));
            }
            return Word::from_letters(letters);
        }
        Word {
            node: Arc::new(Node::Concat(parts)),
            len,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        match k {
            0 => return Word::empty(),
            1 => return self.clone(),
            _ => {}
        }
        if self.is_empty() {
            return Word::empty();
        }
        let len = &self.len * k;
        if len <= BigUint::from(FLATTEN_LIMIT) {
            let base = self.small_letters().expect("short word");
            return Word::from_letters(base.repeat(k as usize));
        }
        Word {
            node: Arc::new(Node::Power(self.clone(), k)),
            len,
        }
    }

    /// Expands to a letter vector, or `None` if longer than `cap`.
    pub fn to_letters(&self, cap: usize) -> Option<Vec<u32>> {
        if self.len > BigUint::from(cap) {
            return None;
        }
        let mut out = Vec::with_capacity(self.len.to_usize().unwrap_or(0));
        self.push_letters(&mut out);
        Some(out)
    }

    fn push_letters(&self, out: &mut Vec<u32>) {
        match &*self.node {
            Node::Letters(v) => out.extend_from_slice(v),
            Node::Concat(ps) => ps.iter().for_each(|p| p.push_letters(out)),
            Node::Power(w, k) => {
                for _ in 0..*k {
                    w.push_letters(out);
                }
            }
        }
    }

    /// Base-36 rendering of the letters (digits then lowercase letters), or
    /// `None` past `cap` letters. Indices ≥ 36 are written as `(i)`.
    pub fn render(&self, cap: usize) -> Option<String> {
        let letters = self.to_letters(cap)?;
        let mut s = String::with_capacity(letters.len());
        for i in letters {
            match std::char::from_digit(i, 36) {
                Some(c) => s.push(c),
                None => s.push_str(&format!("({i})")),
            }
        }
        Some(s)
    }

    /// True if every letter is below `n_gens`.
    pub fn letters_below(&self, n_gens: usize) -> bool {
        let mut seen = HashMap::new();
        self.check_letters(n_gens, &mut seen)
    }

    fn check_letters(&self, n: usize, seen: &mut HashMap<*const Node, bool>) -> bool {
        let key = Arc::as_ptr(&self.node);
        if let Some(&r) = seen.get(&key) {
            return r;
        }
        let r = match &*self.node {
            Node::Letters(v) => v.iter().all(|&i| (i as usize) < n),
            Node::Concat(ps) => ps.iter().all(|p| p.check_letters(n, seen)),
            Node::Power(w, _) => w.check_letters(n, seen),
        };
        seen.insert(key, r);
        r
    }

    /// Evaluates the word in `q`, sharing work across repeated subwords.
    pub fn eval<Q: Quotient>(&self, q: &Q, gens: &[Q::Elem]) -> Q::Elem {
        let mut memo = HashMap::new();
        self.eval_memo(q, gens, &mut memo)
    }

    fn eval_memo<Q: Quotient>(
        &self,
        q: &Q,
        gens: &[Q::Elem],
        memo: &mut HashMap<*const Node, Q::Elem>,
    ) -> Q::Elem {
        let key = Arc::as_ptr(&self.node);
        if let Some(e) = memo.get(&key) {
            return e.clone();
        }
        let e = match &*self.node {
            Node::Letters(v) => q.eval_word(gens, v),
            Node::Concat(ps) => {
                let mut acc = q.identity();
                for p in ps {
                    let pe = p.eval_memo(q, gens, memo);
                    acc = q.mul(&acc, &pe);
                }
                acc
            }
            Node::Power(w, k) => {
                let we = w.eval_memo(q, gens, memo);
                pow_sq(q, &we, *k)
            }
        };
        memo.insert(key, e.clone());
        e
    }

    /// Number of distinct DAG nodes (a proxy for memory use).
    pub fn dag_size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(w) = stack.pop() {
            if !seen.insert(Arc::as_ptr(&w.node)) {
                continue;
            }
            match &*w.node {
                Node::Letters(_) => {}
                Node::Concat(ps) => stack.extend(ps.iter().cloned()),
                Node::Power(b, _) => stack.push(b.clone()),
            }
        }
        seen.len()
    }
}

/// Square-and-multiply power in a quotient.
pub fn pow_sq<Q: Quotient>(q: &Q, a: &Q::Elem, mut k: u32) -> Q::Elem {
    let mut base = a.clone();
    let mut acc = q.identity();
    while k > 0 {
        if k & 1 == 1 {
            acc = q.mul(&acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = q.mul(&base, &base);
        }
    }
    acc
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.render(200) {
            Some(s) => write!(f, "Word({s:?})"),
            None => write!(f, "Word(len={})", self.len),
        }
    }
}
