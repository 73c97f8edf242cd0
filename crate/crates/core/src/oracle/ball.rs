//! Directed balls `B⁺_S(r)` by breadth-first search.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::group::Quotient;

/// Default element cap for full BFS.
pub const DEFAULT_BFS_THRESHOLD: usize = 10_000_000;

const ROOT: u32 = u32::MAX;

/// Shortest positive words for every element reached, by BFS from the
/// identity. Frontier elements are expanded in discovery order and letters
/// in index order, so the table (and every word in it) is deterministic.
pub struct DirectedBallTable<Q: Quotient> {
    quotient: Q,
    gens: Vec<Q::Elem>,
    elems: Vec<Q::Elem>,
    index: HashMap<Q::Key, u32>,
    parent: Vec<u32>,
    letter: Vec<u32>,
    dist: Vec<u32>,
    radius: usize,
    complete: bool,
}

impl<Q: Quotient> DirectedBallTable<Q> {
    /// BFS up to `max_radius` (or until the group is exhausted). Fails if
    /// more than `threshold` elements would be stored.
    pub fn build(quotient: Q, gens: Vec<Q::Elem>, max_radius: Option<usize>, threshold: usize) -> Result<Self> {
        if max_radius.is_none() {
            if let Some(order) = quotient.order() {
                if order > threshold as u128 {
                    return Err(Error::Threshold {
                        size: order,
                        threshold: threshold as u128,
                    });
                }
            }
        }
        let id = quotient.identity();
        let mut t = DirectedBallTable {
            index: HashMap::from([(quotient.key(&id), 0)]),
            elems: vec![id],
            parent: vec![ROOT],
            letter: vec![ROOT],
            dist: vec![0],
            radius: 0,
            complete: false,
            quotient,
            gens,
        };
        let mut lo = 0;
        loop {
            let hi = t.elems.len();
            if lo == hi {
                t.complete = true;
                break;
            }
            if max_radius.is_some_and(|r| t.radius >= r) {
                break;
            }
            let d = t.radius as u32 + 1;
            let mut grew = false;
            for p in lo..hi {
                for (li, s) in t.gens.iter().enumerate() {
                    let x = t.quotient.mul(&t.elems[p], s);
                    let k = t.quotient.key(&x);
                    if t.index.contains_key(&k) {
                        continue;
                    }
                    if t.elems.len() >= threshold {
                        return Err(Error::Threshold {
                            size: t.elems.len() as u128 + 1,
                            threshold: threshold as u128,
                        });
                    }
                    t.index.insert(k, t.elems.len() as u32);
                    t.elems.push(x);
                    t.parent.push(p as u32);
                    t.letter.push(li as u32);
                    t.dist.push(d);
                    grew = true;
                }
            }
            lo = hi;
            if grew {
                t.radius += 1;
            }
        }
        Ok(t)
    }

    pub fn quotient(&self) -> &Q {
        &self.quotient
    }

    pub fn gens(&self) -> &[Q::Elem] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Largest distance present in the table.
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// True if BFS ran until no new elements appeared.
    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn elements(&self) -> &[Q::Elem] {
        &self.elems
    }

    pub fn index_of(&self, g: &Q::Elem) -> Option<usize> {
        self.index.get(&self.quotient.key(g)).map(|&i| i as usize)
    }

    pub fn distance(&self, g: &Q::Elem) -> Option<usize> {
        self.index_of(g).map(|i| self.dist[i] as usize)
    }

    pub fn distance_at(&self, i: usize) -> usize {
        self.dist[i] as usize
    }

    /// Shortest positive word for the element stored at `i`.
    pub fn word_at(&self, mut i: usize) -> Vec<u32> {
        let mut w = Vec::with_capacity(self.dist[i] as usize);
        while self.parent[i] != ROOT {
            w.push(self.letter[i]);
            i = self.parent[i] as usize;
        }
        w.reverse();
        w
    }

    pub fn word(&self, g: &Q::Elem) -> Option<Vec<u32>> {
        self.index_of(g).map(|i| self.word_at(i))
    }

    /// Checks the table against the closed-form order, if any.
    pub fn require_full(&self) -> Result<()> {
        if let Some(order) = self.quotient.order() {
            if self.elems.len() as u128 != order {
                return Err(Error::NotGenerating {
                    reached: self.elems.len(),
                    expected: order as usize,
                });
            }
        } else if !self.complete {
            return Err(Error::BaseFailure("ball table incomplete".into()));
        }
        Ok(())
    }
}

const CACHE_MAGIC: &[u8; 8] = b"SKPBALL1";

impl<Q: Quotient> DirectedBallTable<Q> {
    /// Writes the BFS tree (parent and letter per vertex) to `path`, keyed by
    /// the group descriptor and the serialized generators.
    pub fn save(&self, path: &Path, gens_ser: &[String]) -> Result<()> {
        let mut out = Vec::with_capacity(16 + 8 * self.elems.len());
        out.extend_from_slice(CACHE_MAGIC);
        put_str(&mut out, &self.quotient.describe());
        out.extend_from_slice(&(gens_ser.len() as u32).to_le_bytes());
        for g in gens_ser {
            put_str(&mut out, g);
        }
        out.push(self.complete as u8);
        out.extend_from_slice(&(self.elems.len() as u64).to_le_bytes());
        for (p, l) in self.parent.iter().zip(&self.letter) {
            out.extend_from_slice(&p.to_le_bytes());
            out.extend_from_slice(&l.to_le_bytes());
        }
        std::fs::write(path, out).map_err(|e| Error::Io(e.to_string()))
    }

    /// Rebuilds a table saved by [`save`](Self::save). Elements are replayed
    /// from the tree, so the cache stays independent of element encodings.
    /// Fails if the file was written for another group or generating set.
    pub fn load(quotient: Q, gens: Vec<Q::Elem>, gens_ser: &[String], path: &Path) -> Result<Self> {
        let data = std::fs::read(path).map_err(|e| Error::Io(e.to_string()))?;
        let mut r = Reader { data: &data, at: 0 };
        if r.take(8)? != CACHE_MAGIC {
            return Err(Error::Parse("not a ball table cache".into()));
        }
        let desc = r.string()?;
        let ng = r.u32()? as usize;
        let stored: Vec<String> = (0..ng).map(|_| r.string()).collect::<Result<_>>()?;
        if desc != quotient.describe() || stored != gens_ser || ng != gens.len() {
            return Err(Error::Parse("cache key mismatch".into()));
        }
        let complete = r.take(1)?[0] != 0;
        let n = u64::from_le_bytes(r.take(8)?.try_into().unwrap()) as usize;
        let id = quotient.identity();
        let mut t = DirectedBallTable {
            index: HashMap::from([(quotient.key(&id), 0)]),
            elems: vec![id],
            parent: vec![ROOT],
            letter: vec![ROOT],
            dist: vec![0],
            radius: 0,
            complete,
            quotient,
            gens,
        };
        for i in 0..n {
            let (p, l) = (r.u32()?, r.u32()?);
            if i == 0 {
                continue;
            }
            if p as usize >= i || l as usize >= ng {
                return Err(Error::Parse("corrupt ball table cache".into()));
            }
            let x = t.quotient.mul(&t.elems[p as usize], &t.gens[l as usize]);
            t.index.insert(t.quotient.key(&x), i as u32);
            t.elems.push(x);
            t.parent.push(p);
            t.letter.push(l);
            let d = t.dist[p as usize] + 1;
            t.dist.push(d);
            t.radius = t.radius.max(d as usize);
        }
        if t.index.len() != n {
            return Err(Error::Parse("ball table cache has repeated elements".into()));
        }
        Ok(t)
    }

    /// Loads from `path` when a matching cache exists, otherwise builds the
    /// full table and writes it there.
    pub fn build_cached(quotient: Q, gens: Vec<Q::Elem>, gens_ser: &[String], threshold: usize, path: &Path) -> Result<Self>
    where
        Q: Clone,
    {
        if path.exists() {
            if let Ok(t) = Self::load(quotient.clone(), gens.clone(), gens_ser, path) {
                return Ok(t);
            }
        }
        let t = Self::build(quotient, gens, None, threshold)?;
        t.save(path, gens_ser)?;
        Ok(t)
    }
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    out.extend_from_slice(&(s.len() as u32).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
}

struct Reader<'a> {
    data: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.at + n;
        let s = self
            .data
            .get(self.at..end)
            .ok_or_else(|| Error::Parse("truncated ball table cache".into()))?;
        self.at = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|_| Error::Parse("bad string in cache".into()))
    }
}

/// Exact `diam⁺(G, S)`.
pub fn directed_diameter<Q: Quotient>(quotient: Q, gens: Vec<Q::Elem>, threshold: usize) -> Result<usize> {
    let t = DirectedBallTable::build(quotient, gens, None, threshold)?;
    t.require_full()?;
    Ok(t.radius())
}

/// `S ∪ S⁻¹` without duplicates (first occurrence kept).
pub fn symmetrize<Q: Quotient>(q: &Q, gens: &[Q::Elem]) -> Vec<Q::Elem> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for g in gens.iter().cloned().chain(gens.iter().map(|g| q.inv(g))) {
        if seen.insert(q.key(&g)) {
            out.push(g);
        }
    }
    out
}

/// Undirected diameter `diam(G, S) = diam⁺(G, S ∪ S⁻¹)`.
pub fn undirected_diameter<Q: Quotient>(quotient: Q, gens: Vec<Q::Elem>, threshold: usize) -> Result<usize> {
    let sym = symmetrize(&quotient, &gens);
    directed_diameter(quotient, sym, threshold)
}

/// Every element of the group generated by `gens`, by closure.
pub fn closure<Q: Quotient>(quotient: Q, gens: Vec<Q::Elem>, threshold: usize) -> Result<Vec<Q::Elem>> {
    let t = DirectedBallTable::build(quotient, gens, None, threshold)?;
    Ok(t.elems)
}
