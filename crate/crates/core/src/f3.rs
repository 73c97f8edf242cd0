//! Small dense linear algebra over F3.

/// `a + b` in F3.
#[inline]
pub fn add(a: u8, b: u8) -> u8 {
    (a + b) % 3
}

#[inline]
pub fn neg(a: u8) -> u8 {
    (3 - a) % 3
}

/// Representative in `{0, 1, -1}`.
pub fn signed(a: u8) -> i8 {
    match a % 3 {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// `y += c x`.
fn axpy(y: &mut [u8], c: u8, x: &[u8]) {
    if c == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = (*yi + c * xi) % 3;
    }
}

/// Span of a list of input vectors, kept in reduced row echelon form with
/// each row's expression in terms of the inputs.
#[derive(Clone, Debug)]
pub struct Span {
    dim: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<u8>>,
    inputs: usize,
}

impl Span {
    pub fn new(dim: usize) -> Self {
        Span {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            inputs: 0,
        }
    }

    pub fn from_vectors(dim: usize, vs: &[Vec<u8>]) -> Self {
        let mut s = Span::new(dim);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// Reduces `v` against the rows: returns the canonical residue (zero at
    /// every pivot column) and the combination of inputs subtracted.
    pub fn reduce(&self, v: &[u8]) -> (Vec<u8>, Vec<u8>) {
        assert_eq!(v.len(), self.dim);
        let mut r = v.iter().map(|&x| x % 3).collect::<Vec<u8>>();
        let mut c = vec![0u8; self.inputs];
        for ((row, &p), combo) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            let f = r[p];
            if f != 0 {
                axpy(&mut r, neg(f), row);
                axpy(&mut c, f, combo);
            }
        }
        (r, c)
    }

    /// Canonical representative of `v` modulo the span.
    pub fn residue(&self, v: &[u8]) -> Vec<u8> {
        self.reduce(v).0
    }

    /// Adds a vector; returns whether it was independent of the previous ones.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        let idx = self.inputs;
        self.inputs += 1;
        for c in &mut self.combos {
            c.push(0);
        }
        let (mut r, c) = self.reduce(v);
        let mut combo: Vec<u8> = c.iter().map(|&x| neg(x)).collect();
        combo[idx] = 1;
        let Some(p) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        // scale the pivot to 1 (2 is its own inverse)
        if r[p] == 2 {
            r.iter_mut().for_each(|x| *x = (2 * *x) % 3);
            combo.iter_mut().for_each(|x| *x = (2 * *x) % 3);
        }
        for (row, rc) in self.rows.iter_mut().zip(self.combos.iter_mut()) {
            let f = row[p];
            if f != 0 {
                axpy(row, neg(f), &r);
                axpy(rc, neg(f), &combo);
            }
        }
        // keep rows ordered by pivot
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, r);
        self.pivots.insert(at, p);
        self.combos.insert(at, combo);
        true
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.residue(v).iter().all(|&x| x == 0)
    }

    /// Coefficients `c` with `v = Σ c_j input_j`, if `v` lies in the span.
    /// Unique when the inputs are independent.
    pub fn express(&self, v: &[u8]) -> Option<Vec<u8>> {
        let (r, c) = self.reduce(v);
        r.iter().all(|&x| x == 0).then_some(c)
    }

    /// A basis of the span (the reduced rows).
    pub fn basis(&self) -> &[Vec<u8>] {
        &self.rows
    }
}

/// `Σ c_j v_j`.
pub fn combine(vs: &[Vec<u8>], c: &[u8], dim: usize) -> Vec<u8> {
    let mut out = vec![0u8; dim];
    for (v, &k) in vs.iter().zip(c) {
        axpy(&mut out, k % 3, v);
    }
    out
}
