//! The Fabrykowski–Gupta group `Γ = ⟨a, b⟩`, its chain of branch
//! subgroups, and the cube approximations that drive the engine.
//!
//! Notation. `x1 = [a, b]`, `x2 = [a, x1]`, `K = ⟨x1⟩^Γ`. For `H ≤ Γ`,
//! `H^(×3^j)` is the subgroup of `Stab(j)` whose level-`j` sections all lie
//! in `H`. `0(x) = (x,1,1)`, `1(x) = (x,x⁻¹,1)`, `2(x) = (x,x⁻²,x)`, and
//! `rs(x) = r(s(x))` (the first letter is the outer placement).
//!
//! Every chain subgroup sits between `K^(×3^c)` and `K^(×3^{c+1})` for some
//! coordinate level `c`, so membership and residues are linear algebra over
//! F3 on the level-`c` section coordinates. Those subspaces are computed
//! from generators, never typed in.

use std::sync::{Arc, OnceLock};

use rand::{Rng, RngCore};
use serde::Serialize;

use crate::engine::Instance;
use crate::error::{Error, Result};
use crate::f3::{self, Span};
use crate::group::Quotient;
use crate::tree::{level_start, pow3, stab_index_exponent, Portrait};

/// Deepest portraits the chain machinery will build.
pub const MAX_DEPTH: usize = 12;

/// `A_n` for `n ≡ 1, …, 6 (mod 6)`.
pub const FG_A: [usize; 6] = [9, 18, 4, 6, 6, 3];

/// Offset of the block level (where the cube identities are applied) from `q`.
const BLOCK_OFFSET: [usize; 6] = [0, 0, 1, 1, 1, 2];

pub fn x1(m: usize) -> Portrait {
    Portrait::gen_a(m).comm(&Portrait::gen_b(m))
}

pub fn x2(m: usize) -> Portrait {
    Portrait::gen_a(m).comm(&x1(m))
}

/// `0(x)`, `1(x)` or `2(x)`; the result is one level deeper than `x`.
pub fn bold(r: u8, x: &Portrait) -> Portrait {
    let one = Portrait::identity(x.depth());
    let t = match r % 3 {
        0 => [x.clone(), one.clone(), one],
        1 => [x.clone(), x.inv(), one],
        _ => [x.clone(), x.pow(-2), x.clone()],
    };
    Portrait::assemble(&t, 0).expect("sections share a depth")
}

/// `rs…(x)`, first letter outermost.
pub fn bold_word(rs: &[u8], x: &Portrait) -> Portrait {
    rs.iter().rev().fold(x.clone(), |acc, &r| bold(r, &acc))
}

struct Stab2Table {
    ab: Vec<Option<(u8, u8)>>,
    k: Vec<Option<(u8, u8)>>,
}

fn idx2(l: &[u8]) -> usize {
    (l[0] as usize) * 27 + (l[1] as usize) * 9 + (l[2] as usize) * 3 + l[3] as usize
}

/// Walks the Cayley graph of `⟨gens⟩` in depth-2 portraits, carrying the
/// exponent vector along (valid because the target is abelian).
fn coordinate_table(gens: [Portrait; 2]) -> Vec<Option<(u8, u8)>> {
    let mut table = vec![None; 81];
    let start = Portrait::identity(2);
    table[idx2(start.labels())] = Some((0, 0));
    let mut queue = std::collections::VecDeque::from([(start, (0u8, 0u8))]);
    while let Some((g, (i, j))) = queue.pop_front() {
        for (s, step) in gens.iter().zip([(1u8, 0u8), (0, 1)]) {
            let h = g.mul(s);
            let c = ((i + step.0) % 3, (j + step.1) % 3);
            match table[idx2(h.labels())] {
                None => {
                    table[idx2(h.labels())] = Some(c);
                    queue.push_back((h, c));
                }
                Some(old) => assert_eq!(old, c, "coordinates are not a homomorphism"),
            }
        }
    }
    table
}

fn stab2() -> &'static Stab2Table {
    static T: OnceLock<Stab2Table> = OnceLock::new();
    T.get_or_init(|| Stab2Table {
        ab: coordinate_table([Portrait::gen_a(2), Portrait::gen_b(2)]),
        k: coordinate_table([x1(2), x2(2)]),
    })
}

/// Number of elements of `Γ/Stab(2)` reached by the coordinate table.
pub fn stab2_size() -> usize {
    stab2().ab.iter().filter(|c| c.is_some()).count()
}

/// `(ε_a, ε_b)`: the image in `Γ/K = C3 × C3` with basis `Ka, Kb`.
pub fn ab_coords(g: &Portrait) -> Result<(u8, u8)> {
    if g.depth() < 2 {
        return Err(Error::DepthMismatch { left: g.depth(), right: 2 });
    }
    stab2().ab[idx2(&g.labels()[..4])].ok_or(Error::NotInClosure)
}

/// `(λ, μ)`: the image of `g ∈ K` in `K/K^(×3) = C3 × C3` with basis `x1, x2`.
pub fn k_coords(g: &Portrait) -> Result<(u8, u8)> {
    if g.depth() < 2 {
        return Err(Error::DepthMismatch { left: g.depth(), right: 2 });
    }
    stab2().k[idx2(&g.labels()[..4])].ok_or_else(|| Error::NotInSubgroup("K".into()))
}

/// Concatenated `k_coords` of the level-`i` sections of `z`.
pub fn section_coords(z: &Portrait, i: usize) -> Result<Vec<u8>> {
    if z.depth() < i + 2 {
        return Err(Error::DepthMismatch { left: z.depth(), right: i + 2 });
    }
    if z.stab_level() < i {
        return Err(Error::NotInSubgroup(format!("Stab({i})")));
    }
    let table = &stab2().k;
    let (root, below) = (z.level_labels(i), z.level_labels(i + 1));
    let mut out = Vec::with_capacity(2 * root.len());
    for (p, &r) in root.iter().enumerate() {
        let t = &below[3 * p..3 * p + 3];
        let (l, m) = table[idx2(&[r, t[0], t[1], t[2]])]
            .ok_or_else(|| Error::NotInSubgroup(format!("K (section {p} of level {i})")))?;
        out.push(l);
        out.push(m);
    }
    Ok(out)
}

/// The six kinds of chain subgroup between `K^(×3^c)` and `K^(×3^{c+1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Piece {
    K,
    K10,
    K20,
    K1,
    K2,
    L,
}

impl Piece {
    pub const ALL: [Piece; 6] = [Piece::K, Piece::K10, Piece::K20, Piece::K1, Piece::K2, Piece::L];

    pub fn name(self) -> &'static str {
        match self {
            Piece::K => "K",
            Piece::K10 => "K_10",
            Piece::K20 => "K_20",
            Piece::K1 => "K_1",
            Piece::K2 => "K_2",
            Piece::L => "L",
        }
    }

    /// Natural level of the defining subgroup: `K_10` is defined inside
    /// `K^(×9)`, `K_1` inside `K^(×3)`, `K` and `L` directly.
    pub fn natural_level(self) -> usize {
        match self {
            Piece::K | Piece::L => 0,
            Piece::K1 | Piece::K2 => 1,
            Piece::K10 | Piece::K20 => 2,
        }
    }

    /// Generators of the piece at its natural level `e`, as portraits of
    /// depth `e + 2` (enough to read level-`e` coordinates).
    fn generators(self) -> Vec<Portrait> {
        let e = self.natural_level();
        let m = e + 2;
        let mut out: Vec<Portrait> = (0..pow3(e)).map(|j| Portrait::place(e, j, &x2(2))).collect();
        match self {
            Piece::K => out.push(x1(2)),
            Piece::L => {}
            Piece::K1 => {
                out.push(bold(1, &x1(m - 1)));
                out.push(bold(2, &x1(m - 1)));
            }
            Piece::K2 => out.push(bold(2, &x1(m - 1))),
            Piece::K10 | Piece::K20 => {
                let floor = if self == Piece::K10 { 1 } else { 2 };
                for t in 0..3u8 {
                    for u in 0..3u8 {
                        if t as usize + 3 * u as usize >= floor {
                            out.push(bold_word(&[t, u], &x1(m - 2)));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Position `n = 6q + r` in the chain. `q = -1` (with `r ≥ 3`) extends the
/// chain above `K^(×27)` by `K_20^(×9) ≥ K_1^(×9) ≥ K_2^(×9) ≥ L^(×9)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChainPos {
    pub n: i64,
    pub q: i64,
    pub r: usize,
    pub a: usize,
}

impl ChainPos {
    pub fn new(n: i64) -> Result<Self> {
        let q = (n - 1).div_euclid(6);
        let r = (n - 1).rem_euclid(6) as usize + 1;
        if q < -1 || (q == -1 && r < 3) {
            return Err(Error::InvalidLevel(n));
        }
        Ok(ChainPos { n, q, r, a: FG_A[r - 1] })
    }

    pub fn piece(&self) -> Piece {
        Piece::ALL[self.r - 1]
    }

    /// `c` with `K^(×3^{c+1}) ≤ N_n ≤ K^(×3^c)`.
    pub fn coord_level(&self) -> usize {
        (self.q + 3) as usize
    }

    /// Level of the blocks on which the cube identities act; also the
    /// exponent in `M_n = K^(×3^s)`.
    pub fn block_level(&self) -> usize {
        (self.q + BLOCK_OFFSET[self.r - 1] as i64) as usize
    }

    /// Portrait depth needed to decide membership in `N_n`.
    pub fn min_depth(&self) -> usize {
        self.coord_level() + if self.r == 1 { 1 } else { 2 }
    }

    pub fn next(&self) -> ChainPos {
        ChainPos::new(self.n + 1).expect("chain continues")
    }

    pub fn n_name(&self) -> String {
        format!("{}^(x3^{})", self.piece().name(), self.coord_level())
    }

    pub fn m_name(&self) -> String {
        format!("K^(x3^{})", self.block_level())
    }
}

/// The table row for `n ≥ 1`.
pub fn chain_params(n: usize) -> ChainPos {
    assert!(n >= 1);
    ChainPos::new(n as i64).expect("n >= 1")
}

struct Space {
    e: usize,
    coords: Span,
    labels: Span,
}

impl Space {
    fn new(p: Piece) -> Self {
        let e = p.natural_level();
        let gens = p.generators();
        let coords = Span::from_vectors(
            2 * pow3(e),
            &gens.iter().map(|g| section_coords(g, e).expect("generator lies in K^(x3^e)")).collect::<Vec<_>>(),
        );
        let labels = Span::from_vectors(
            pow3(e + 1),
            &gens.iter().map(|g| g.level_labels(e + 1).to_vec()).collect::<Vec<_>>(),
        );
        assert_eq!(coords.rank(), labels.rank());
        Space { e, coords, labels }
    }

    /// Coordinates of the piece replicated over a level `d ≥ e` block.
    fn replicated_basis(&self, d: usize) -> Vec<Vec<u8>> {
        let width = 2 * pow3(self.e);
        let copies = pow3(d - self.e);
        let mut out = Vec::new();
        for c in 0..copies {
            for v in self.coords.basis() {
                let mut w = vec![0u8; width * copies];
                w[c * width..(c + 1) * width].copy_from_slice(v);
                out.push(w);
            }
        }
        out
    }
}

/// Residue generators of one step at block level and the cube expressions
/// for each (`gen_j ≡ ∏ pieces[j][t]^3` modulo the next subgroup).
pub struct LocalStep {
    pub depth: usize,
    pub gens: Vec<Portrait>,
    pub pieces: Vec<Vec<Portrait>>,
    inverse_pieces: Vec<Vec<Portrait>>,
    identities: Vec<Portrait>,
}

impl LocalStep {
    fn build(r: usize, m: usize) -> LocalStep {
        let (a, b) = (Portrait::gen_a(m), Portrait::gen_b(m));
        let x = x1(m);
        let o = bold(0, &x1(m - 1));
        let ba = b.mul(&a);
        let b_a = b.conj(&a);
        let u = x.conj(&ba).mul(&o.conj(&b_a));
        let v = x.conj(&ba).inv();
        let w = o.conj(&b_a).inv();
        let (gen0, pieces0, conjugates) = match r {
            1 => (bold_word(&[0, 0, 0], &x1(m - 3)), vec![u, v, w], true),
            2 => {
                let p = o.conj(&b_a.mul(&b));
                let qq = x.conj(&ba.mul(&b));
                let rr = qq.mul(&p);
                (bold_word(&[0, 1, 0], &x1(m - 3)), vec![p, qq, rr.inv(), u, v, w], true)
            }
            3 => {
                let ai = a.inv();
                let ys = vec![
                    x2(m).inv(),
                    x.conj(&b.mul(&ai)).inv(),
                    x.conj(&a).inv(),
                    x.conj(&b.inv()).inv(),
                ];
                (bold_word(&[2, 0], &x1(m - 2)), ys, false)
            }
            4 => (bold_word(&[0, 1], &x1(m - 2)), vec![x.clone(), x.conj(&b).inv()], true),
            5 => {
                let xa = x.conj(&a.inv());
                (bold_word(&[0, 2], &x1(m - 2)), vec![o.mul(&xa), xa.inv()], true)
            }
            6 => (bold(0, &x2(m - 1)), vec![x.inv()], true),
            _ => unreachable!("r in 1..=6"),
        };
        let mut gens = vec![gen0];
        let mut pieces = vec![pieces0];
        if conjugates {
            let a2 = a.mul(&a);
            for c in [&a, &a2] {
                gens.push(gens[0].conj(c));
                pieces.push(pieces[0].iter().map(|y| y.conj(c)).collect());
            }
        }
        let inverse_pieces = pieces.iter().map(|ps| ps.iter().rev().map(Portrait::inv).collect()).collect();
        let identities = vec![Portrait::identity(m); pieces[0].len()];
        LocalStep {
            depth: m,
            gens,
            pieces,
            inverse_pieces,
            identities,
        }
    }

    /// Cube bases for exponent `e` (0, 1 or 2 ≡ -1) of generator `j`.
    pub fn pieces_for(&self, j: usize, e: u8) -> &[Portrait] {
        match e % 3 {
            0 => &self.identities,
            1 => &self.pieces[j],
            _ => &self.inverse_pieces[j],
        }
    }
}

struct Solver {
    span: Span,
    n_gens: usize,
    next_rank: usize,
}

/// The chain data, built once and shared.
pub struct FgChain {
    spaces: Vec<Space>,
    solvers: Vec<Solver>,
    local: Vec<Vec<OnceLock<LocalStep>>>,
    kcombos: Vec<OnceLock<Vec<Portrait>>>,
}

impl Default for FgChain {
    fn default() -> Self {
        Self::new()
    }
}

impl FgChain {
    pub fn new() -> Self {
        let spaces: Vec<Space> = Piece::ALL.iter().map(|&p| Space::new(p)).collect();
        let solvers = (1..=6)
            .map(|r| {
                let d = 3 - BLOCK_OFFSET[r - 1];
                let local = LocalStep::build(r, d + 2);
                let mut inputs: Vec<Vec<u8>> =
                    local.gens.iter().map(|g| section_coords(g, d).expect("residue generator")).collect();
                let n_gens = inputs.len();
                let next = if r < 6 { spaces[r].replicated_basis(d) } else { Vec::new() };
                let next_rank = next.len();
                inputs.extend(next);
                Solver {
                    span: Span::from_vectors(2 * pow3(d), &inputs),
                    n_gens,
                    next_rank,
                }
            })
            .collect();
        FgChain {
            spaces,
            solvers,
            local: (0..6).map(|_| (0..=MAX_DEPTH).map(|_| OnceLock::new()).collect()).collect(),
            kcombos: (0..=MAX_DEPTH).map(|_| OnceLock::new()).collect(),
        }
    }

    /// Dimension of the piece's coordinate space at its natural level.
    pub fn piece_rank(&self, p: Piece) -> usize {
        self.spaces[p as usize].coords.rank()
    }

    /// `(number of residue generators, rank of generators + next subgroup,
    /// rank of the current subgroup)` on one block of step `r`.
    pub fn residue_ranks(&self, r: usize) -> (usize, usize, usize, usize) {
        let s = &self.solvers[r - 1];
        let d = 3 - BLOCK_OFFSET[r - 1];
        let current = Span::from_vectors(2 * pow3(d), &self.spaces[r - 1].replicated_basis(d)).rank();
        (s.n_gens, s.next_rank, s.span.rank(), current)
    }

    pub fn local(&self, r: usize, m: usize) -> Result<&LocalStep> {
        let need = 5 - BLOCK_OFFSET[r - 1];
        if m < need || m > MAX_DEPTH {
            return Err(Error::DepthMismatch { left: m, right: need });
        }
        Ok(self.local[r - 1][m].get_or_init(|| LocalStep::build(r, m)))
    }

    fn kcombos(&self, m: usize) -> &[Portrait] {
        self.kcombos[m].get_or_init(|| {
            let (u, v) = (x1(m), x2(m));
            let mut out = Vec::with_capacity(9);
            for i in 0..3 {
                for j in 0..3 {
                    out.push(u.pow(i).mul(&v.pow(j)));
                }
            }
            out
        })
    }

    /// Membership in `N_pos`; `g` must be at least `pos.min_depth()` deep.
    pub fn contains(&self, pos: &ChainPos, g: &Portrait) -> bool {
        assert!(g.depth() >= pos.min_depth(), "portrait too shallow for {}", pos.n_name());
        let c = pos.coord_level();
        if g.stab_level() < c + 1 {
            return false;
        }
        if pos.r == 1 {
            return true;
        }
        let sp = &self.spaces[pos.r - 1];
        g.level_labels(c + 1)
            .chunks(pow3(sp.e + 1))
            .all(|ch| sp.labels.contains(ch))
    }

    /// Canonical label of `g N_pos`.
    pub fn coset_key(&self, pos: &ChainPos, g: &Portrait) -> Vec<u8> {
        let c = pos.coord_level();
        let mut key = g.labels()[..level_start(c + 1)].to_vec();
        if pos.r != 1 {
            let sp = &self.spaces[pos.r - 1];
            for ch in g.level_labels(c + 1).chunks(pow3(sp.e + 1)) {
                key.extend(sp.labels.residue(ch));
            }
        }
        key
    }

    /// `log_3 |Γ : N_pos|`.
    pub fn index_exponent(&self, pos: &ChainPos) -> usize {
        let c = pos.coord_level();
        let base = stab_index_exponent(c + 1);
        if pos.r == 1 {
            return base;
        }
        let sp = &self.spaces[pos.r - 1];
        base + 2 * pow3(c) - sp.coords.rank() * pow3(c - sp.e)
    }

    /// Exponents (in F3, block by block, generator by generator) expressing
    /// `z ∈ N_pos` modulo `N_{pos+1}` in the step's residue generators.
    pub fn residue_exps(&self, pos: &ChainPos, z: &Portrait) -> Result<Vec<u8>> {
        if !self.contains(pos, z) {
            return Err(Error::NotInSubgroup(pos.n_name()));
        }
        let c = pos.coord_level();
        let d = c - pos.block_level();
        let coords = section_coords(z, c)?;
        let s = &self.solvers[pos.r - 1];
        let mut out = Vec::with_capacity(pow3(pos.block_level()) * s.n_gens);
        for chunk in coords.chunks(2 * pow3(d)) {
            let cf = s
                .span
                .express(chunk)
                .ok_or_else(|| Error::NotInSubgroup(pos.n_name()))?;
            out.extend_from_slice(&cf[..s.n_gens]);
        }
        Ok(out)
    }

    /// `A` elements of `M_pos` whose cubes multiply to `z` modulo `N_{pos+1}`.
    pub fn cube_approx(&self, pos: &ChainPos, z: &Portrait) -> Result<Vec<Portrait>> {
        let m = z.depth();
        if self.contains(&pos.next(), z) {
            return Ok(vec![Portrait::identity(m); pos.a]);
        }
        let exps = self.residue_exps(pos, z)?;
        let bl = pos.block_level();
        let local = self.local(pos.r, m - bl)?;
        let ng = local.gens.len();
        let mut cols: Vec<Vec<&Portrait>> = vec![Vec::with_capacity(pow3(bl)); pos.a];
        for blk in exps.chunks(ng) {
            let mut t = 0;
            for (j, &e) in blk.iter().enumerate() {
                for p in local.pieces_for(j, e) {
                    cols[t].push(p);
                    t += 1;
                }
            }
            debug_assert_eq!(t, pos.a);
        }
        Ok(cols.iter().map(|subs| Portrait::place_all(bl, subs, m)).collect())
    }

    /// One representative per class of `N_pos / N_{pos+1}` supported on the
    /// first `blocks` blocks (products of residue generators).
    pub fn class_reps(&self, pos: &ChainPos, m: usize, blocks: usize, limit: usize) -> Result<Vec<Portrait>> {
        let bl = pos.block_level();
        let local = self.local(pos.r, m - bl)?;
        let ng = local.gens.len();
        let blocks = blocks.min(pow3(bl));
        let count = 3u128.checked_pow((ng * blocks) as u32).unwrap_or(u128::MAX);
        if count > limit as u128 {
            return Err(Error::Threshold {
                size: count,
                threshold: limit as u128,
            });
        }
        let one = Portrait::identity(m - bl);
        let mut out = Vec::with_capacity(count as usize);
        for code in 0..count as usize {
            let mut c = code;
            let mut subs = vec![one.clone(); pow3(bl)];
            for sub in subs.iter_mut().take(blocks) {
                for g in &local.gens {
                    *sub = sub.mul(&g.pow((c % 3) as i64));
                    c /= 3;
                }
            }
            out.push(Portrait::place_all(bl, &subs, m));
        }
        Ok(out)
    }

    /// Uniform element of `K^(×3^s)` modulo `Stab(m)`.
    pub fn sample_k_power(&self, s: usize, m: usize, rng: &mut dyn RngCore) -> Portrait {
        let mut acc = Portrait::identity(m);
        for l in s..m.saturating_sub(1) {
            let combos = self.kcombos(m - l);
            let subs: Vec<&Portrait> = (0..pow3(l)).map(|_| &combos[rng.gen_range(0..9)]).collect();
            acc = acc.mul(&Portrait::place_all(l, &subs, m));
        }
        acc
    }

    /// Uniform element of `N_pos` modulo `Stab(m)`: one random residue layer
    /// per remaining step of the period, then a deeper `K`-power.
    pub fn sample_n(&self, pos: &ChainPos, m: usize, rng: &mut dyn RngCore) -> Portrait {
        let c = pos.coord_level();
        if m < pos.min_depth() || m <= c + 1 {
            return Portrait::identity(m);
        }
        let mut acc = Portrait::identity(m);
        for r in pos.r..=6 {
            let p = ChainPos::new(pos.n + (r - pos.r) as i64).expect("same period");
            let bl = p.block_level();
            let local = self.local(r, m - bl).expect("depth checked");
            let subs: Vec<Portrait> = (0..pow3(bl))
                .map(|_| {
                    local.gens.iter().fold(Portrait::identity(m - bl), |s, g| {
                        s.mul(&g.pow(rng.gen_range(0..3)))
                    })
                })
                .collect();
            acc = acc.mul(&Portrait::place_all(bl, &subs, m));
        }
        acc.mul(&self.sample_k_power(c + 1, m, rng))
    }
}

/// `Γ / N_pos` as depth-`pos.min_depth()` portraits keyed by coset.
#[derive(Clone)]
pub struct FgQuotient {
    chain: Arc<FgChain>,
    pub pos: ChainPos,
}

impl FgQuotient {
    pub fn depth(&self) -> usize {
        self.pos.min_depth()
    }
}

impl std::fmt::Debug for FgQuotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FgQuotient({})", self.pos.n_name())
    }
}

impl Quotient for FgQuotient {
    type Elem = Portrait;
    type Key = Vec<u8>;

    fn identity(&self) -> Portrait {
        Portrait::identity(self.depth())
    }
    fn mul(&self, a: &Portrait, b: &Portrait) -> Portrait {
        a.mul(b)
    }
    fn inv(&self, a: &Portrait) -> Portrait {
        a.inv()
    }
    fn key(&self, a: &Portrait) -> Vec<u8> {
        self.chain.coset_key(&self.pos, a)
    }
    fn order(&self) -> Option<u128> {
        let e = self.chain.index_exponent(&self.pos);
        (e < 80).then(|| 3u128.pow(e as u32))
    }
    fn describe(&self) -> String {
        format!("FG/{}", self.pos.n_name())
    }
}

/// The engine instance for `Γ/Stab(depth)`. The standard chain starts at
/// `N_1 = K^(×27) = Stab(4)`; the extended one prepends the four `q = -1`
/// steps so that `N_1 = K_20^(×9)` and the base quotient has `3^12` elements.
#[derive(Clone)]
pub struct FgInstance {
    depth: usize,
    extended: bool,
    chain: Arc<FgChain>,
}

impl FgInstance {
    pub fn new(depth: usize) -> Result<Self> {
        Self::build(depth, false)
    }

    pub fn extended(depth: usize) -> Result<Self> {
        Self::build(depth, true)
    }

    fn build(depth: usize, extended: bool) -> Result<Self> {
        if !(4..=MAX_DEPTH).contains(&depth) {
            return Err(Error::DepthMismatch {
                left: depth,
                right: if depth < 4 { 4 } else { MAX_DEPTH },
            });
        }
        Ok(FgInstance {
            depth,
            extended,
            chain: Arc::new(FgChain::new()),
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    pub fn chain(&self) -> &FgChain {
        &self.chain
    }

    fn shift(&self) -> i64 {
        if self.extended {
            4
        } else {
            0
        }
    }

    /// Chain position of engine level `level ≥ 1`.
    pub fn pos(&self, level: usize) -> ChainPos {
        ChainPos::new(level as i64 - self.shift()).expect("level >= 1")
    }

    /// Engine level whose `N` is `Stab(m)` (`m ≥ 4`).
    pub fn stab_level_index(&self, m: usize) -> usize {
        assert!(m >= 4);
        (6 * (m as i64 - 4) + 1 + self.shift()) as usize
    }

    pub fn canonical_gens(&self) -> Vec<Portrait> {
        vec![Portrait::gen_a(self.depth), Portrait::gen_b(self.depth)]
    }

    /// A portrait string `m:digits` of this depth, or a word over `a, b, A, B`.
    pub fn parse_element(&self, s: &str) -> Result<Portrait> {
        if s.contains(':') {
            let p = Portrait::parse(s)?;
            if p.depth() != self.depth {
                return Err(Error::DepthMismatch {
                    left: p.depth(),
                    right: self.depth,
                });
            }
            Ok(p)
        } else {
            Portrait::from_word(self.depth, s)
        }
    }

    /// Uniform element of `Stab(m)` (`m ≥ 2`).
    pub fn sample_stab(&self, m: usize, rng: &mut dyn RngCore) -> Portrait {
        self.chain.sample_k_power(m - 1, self.depth, rng)
    }

    /// Class representatives of `N_level / N_{level+1}` on the first `blocks`
    /// blocks (`usize::MAX` for all of them).
    pub fn class_reps(&self, level: usize, blocks: usize, limit: usize) -> Result<Vec<Portrait>> {
        self.chain.class_reps(&self.pos(level), self.depth, blocks, limit)
    }
}

impl Instance for FgInstance {
    type Elem = Portrait;
    type Key = Vec<u8>;
    type Base = FgQuotient;

    fn describe(&self) -> String {
        format!(
            "FG/Stab({}){}",
            self.depth,
            if self.extended { " extended chain" } else { "" }
        )
    }
    fn target_level(&self) -> usize {
        self.stab_level_index(self.depth)
    }
    fn identity(&self) -> Portrait {
        Portrait::identity(self.depth)
    }
    fn mul(&self, a: &Portrait, b: &Portrait) -> Portrait {
        a.mul(b)
    }
    fn inv(&self, a: &Portrait) -> Portrait {
        a.inv()
    }
    fn serialize(&self, a: &Portrait) -> String {
        a.serialize()
    }
    fn in_n(&self, level: usize, g: &Portrait) -> bool {
        level == 0 || self.chain.contains(&self.pos(level), g)
    }
    fn in_m(&self, level: usize, g: &Portrait) -> bool {
        let s = self.pos(level).block_level();
        g.stab_level() > s && g.level_labels(s + 1).chunks(3).all(|t| (t[0] + t[1] + t[2]) % 3 == 0)
    }
    fn coset_key(&self, level: usize, g: &Portrait) -> Vec<u8> {
        if level == 0 {
            return Vec::new();
        }
        self.chain.coset_key(&self.pos(level), g)
    }
    fn a_n(&self, level: usize) -> usize {
        self.pos(level).a
    }
    fn k_n(&self, _level: usize) -> u32 {
        3
    }
    fn power_approx(&self, level: usize, z: &Portrait) -> Result<Vec<Portrait>> {
        self.chain.cube_approx(&self.pos(level), z)
    }
    fn residue_exponents(&self, level: usize, z: &Portrait) -> Vec<i8> {
        self.chain
            .residue_exps(&self.pos(level), z)
            .map(|v| v.into_iter().map(f3::signed).collect())
            .unwrap_or_default()
    }
    fn level_info(&self, level: usize) -> serde_json::Value {
        let p = self.pos(level);
        serde_json::json!({
            "n": p.n,
            "q": p.q,
            "r": p.r,
            "A": p.a,
            "k": 3,
            "M": p.m_name(),
            "N": p.n_name(),
        })
    }
    fn base(&self) -> FgQuotient {
        FgQuotient {
            chain: self.chain.clone(),
            pos: self.pos(1),
        }
    }
    fn project(&self, g: &Portrait) -> Portrait {
        g.truncate(self.pos(1).min_depth())
    }
    fn sample_n(&self, level: usize, rng: &mut dyn RngCore) -> Portrait {
        self.chain.sample_n(&self.pos(level), self.depth, rng)
    }
    fn sample_m(&self, level: usize, rng: &mut dyn RngCore) -> Portrait {
        self.chain
            .sample_k_power(self.pos(level).block_level(), self.depth, rng)
    }
    fn sample_group(&self, rng: &mut dyn RngCore) -> Portrait {
        let (a, b) = (Portrait::gen_a(self.depth), Portrait::gen_b(self.depth));
        a.pow(rng.gen_range(0..3))
            .mul(&b.pow(rng.gen_range(0..3)))
            .mul(&self.chain.sample_k_power(0, self.depth, rng))
    }
}
