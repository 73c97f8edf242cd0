//! The SL2 instance: `Γ = SL2(F_q[[t]])`, `N_i = K_{β_i}`, `M_i = K_{α_i}`,
//! `A = 3`, `k = 2`.
//!
//! Any `z ∈ K_{3n}` is a product of three squares of elements of `K_n`
//! modulo `K_{4n}`; see [`square_approx`].

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::algebra::{random_congruence, random_sl2, FieldElem, Gf2m, Mat2, TruncPoly};
use crate::engine::Instance;
use crate::error::{Error, Result};
use crate::group::Quotient;

/// Level schedule `(α_i, β_i)`; all matrices live in `SL2(R_depth)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2Schedule {
    pub q: u32,
    pub depth: usize,
    pub alphas: Vec<usize>,
    pub betas: Vec<usize>,
}

impl Sl2Schedule {
    /// Checks every schedule condition; see [`make_schedule`].
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSchedule(m));
        Gf2m::with_order(self.q)?;
        if self.betas.is_empty() || self.alphas.len() != self.betas.len() {
            return bad("alphas and betas must be nonempty and of equal length".into());
        }
        if self.betas[0] == 0 || self.alphas.contains(&0) {
            return bad("levels must be positive".into());
        }
        if *self.betas.last().unwrap() > self.depth {
            return bad(format!("depth {} below last beta", self.depth));
        }
        for (i, (&a, &b)) in self.alphas.iter().zip(&self.betas).enumerate() {
            if b < 3 * a {
                return bad(format!("step {}: beta {b} < 3 alpha {a}", i + 1));
            }
        }
        for (i, w) in self.betas.windows(2).enumerate() {
            let (b, b2, a) = (w[0], w[1], self.alphas[i]);
            if b2 <= b {
                return bad(format!("betas not strictly increasing at step {}", i + 2));
            }
            if b2 > a + b || b2 > 2 * b || b2 > 4 * (b / 3) {
                return bad(format!("step {}: beta {b2} too large after {b}", i + 2));
            }
        }
        if self.alphas.windows(2).any(|w| w[1] < w[0]) {
            return bad("alphas must be ascending".into());
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        self.betas.len()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let sch: Sl2Schedule = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        sch.validate()?;
        Ok(sch)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("schedule serializes")
    }
}

/// `β' = min(4⌊β/3⌋, β + ⌊β/3⌋)`, `α = ⌊β/3⌋`, for `steps` levels.
/// Fails if β stops growing before `steps` values are produced.
pub fn make_schedule(q: u32, beta1: usize, steps: usize) -> Result<Sl2Schedule> {
    Gf2m::with_order(q)?;
    if beta1 < 3 || steps == 0 {
        return Err(Error::InvalidSchedule(format!("beta1 = {beta1}, steps = {steps}")));
    }
    let mut betas = vec![beta1];
    while betas.len() < steps {
        let b = *betas.last().unwrap();
        let next = (4 * (b / 3)).min(b + b / 3);
        if next <= b {
            return Err(Error::ScheduleStall {
                beta: b,
                step: betas.len(),
            });
        }
        betas.push(next);
    }
    let sch = Sl2Schedule {
        q,
        depth: *betas.last().unwrap(),
        alphas: betas.iter().map(|b| b / 3).collect(),
        betas,
    };
    sch.validate()?;
    Ok(sch)
}

/// Parses `auto:β₁[:steps]` or a JSON schedule (the file contents).
pub fn parse_schedule(spec: &str, q: u32, default_steps: usize) -> Result<Sl2Schedule> {
    if let Some(rest) = spec.strip_prefix("auto:") {
        let mut it = rest.split(':');
        let b1 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad schedule spec {spec:?}")))?;
        let steps = match it.next() {
            Some(s) => s.parse().map_err(|_| Error::Parse(format!("bad step count in {spec:?}")))?,
            None => default_steps,
        };
        return make_schedule(q, b1, steps);
    }
    Sl2Schedule::from_json(spec)
}

fn check_level(n: usize, need: usize, modulus: usize) -> Result<()> {
    if n == 0 || need >= modulus {
        return Err(Error::LevelTooDeep { level: n, modulus });
    }
    Ok(())
}

fn unit_1_plus_tn(f: Gf2m, m: usize, n: usize) -> (TruncPoly, TruncPoly) {
    let u = TruncPoly::one(f, m).add_unchecked(&TruncPoly::monomial(f, m, n, FieldElem::ONE));
    let ui = u.try_inv().expect("1 + t^n is a unit");
    (u, ui)
}

fn d_raw(n: usize, alpha: &TruncPoly) -> Mat2 {
    let (f, m) = (alpha.field(), alpha.modulus_degree());
    Mat2::new_unchecked(
        TruncPoly::one(f, m).add_unchecked(&alpha.shift(2 * n)),
        TruncPoly::monomial(f, m, n, FieldElem::ONE),
        alpha.shift(n),
        TruncPoly::one(f, m),
    )
}

fn e_raw(n: usize, alpha: &TruncPoly) -> Mat2 {
    let (f, m) = (alpha.field(), alpha.modulus_degree());
    let (u, ui) = unit_1_plus_tn(f, m, n);
    Mat2::new_unchecked(u, alpha.shift(n), TruncPoly::zero(f, m), ui)
}

fn f_raw(n: usize, alpha: &TruncPoly) -> Mat2 {
    let (f, m) = (alpha.field(), alpha.modulus_degree());
    let (u, ui) = unit_1_plus_tn(f, m, n);
    Mat2::new_unchecked(ui, TruncPoly::zero(f, m), alpha.shift(n), u)
}

/// `D_n(α) = [[1 + t^{2n}α, t^n], [t^n α, 1]]`.
pub fn gen_d(n: usize, alpha: &TruncPoly) -> Result<Mat2> {
    check_level(n, 2 * n, alpha.modulus_degree())?;
    Ok(d_raw(n, alpha))
}

/// `E_n(α) = [[1 + t^n, t^n α], [0, (1 + t^n)^{-1}]]`.
pub fn gen_e(n: usize, alpha: &TruncPoly) -> Result<Mat2> {
    check_level(n, n, alpha.modulus_degree())?;
    Ok(e_raw(n, alpha))
}

/// `F_n(α) = [[(1 + t^n)^{-1}, 0], [t^n α, 1 + t^n]]`.
pub fn gen_f(n: usize, alpha: &TruncPoly) -> Result<Mat2> {
    check_level(n, n, alpha.modulus_degree())?;
    Ok(f_raw(n, alpha))
}

/// For `z = I + t^{3n}[[a, b], [c, d]]`: `y_1 = D_n(t^n ā)`, `y_2 = E_n(b̄)`,
/// `y_3 = F_n(c̄)` with `ā, b̄, c̄` the truncations below `t^n`. Then
/// `y_1² y_2² y_3² ≡ z mod t^{4n}` (or mod the working modulus, if smaller).
pub fn square_approx(z: &Mat2, n: usize) -> Result<[Mat2; 3]> {
    let v = z.val();
    if n == 0 || v < 3 * n {
        return Err(Error::InsufficientLevel {
            found: v,
            needed: 3 * n,
        });
    }
    let [a, b, c, _] = z.deviation(3 * n);
    let (a, b, c) = (a.low_part(n), b.low_part(n), c.low_part(n));
    Ok([d_raw(n, &a.shift(n)), e_raw(n, &b), f_raw(n, &c)])
}

/// `I + t^l [[a, b], [c, *]]` in `SL2(R_m)` with the bottom-right entry
/// solved from the determinant; `a, b, c` given as coefficient lists.
pub fn congruence_element(f: Gf2m, m: usize, l: usize, a: &[u32], b: &[u32], c: &[u32]) -> Mat2 {
    let one = TruncPoly::one(f, m);
    let ea = one.add_unchecked(&TruncPoly::from_coeffs(f, m, a).shift(l));
    let eb = TruncPoly::from_coeffs(f, m, b).shift(l);
    let ec = TruncPoly::from_coeffs(f, m, c).shift(l);
    let d = one
        .add_unchecked(&eb.mul_unchecked(&ec))
        .mul_unchecked(&ea.try_inv().expect("unit"));
    Mat2::new_unchecked(ea, eb, ec, d)
}

/// One representative of each class of `K_{3n}/K_{4n}` in `SL2(R_{4n})`:
/// `q^{3n}` matrices `I + t^{3n}[[a, b], [c, *]]`, `a, b, c` of degree `< n`.
pub fn residue_reps(f: Gf2m, n: usize) -> Vec<Mat2> {
    let q = f.order() as u64;
    let total = q.pow(3 * n as u32);
    (0..total)
        .map(|mut x| {
            let mut digits = [vec![0u32; n], vec![0u32; n], vec![0u32; n]];
            for d in digits.iter_mut() {
                for e in d.iter_mut() {
                    *e = (x % q) as u32;
                    x /= q;
                }
            }
            congruence_element(f, 4 * n, 3 * n, &digits[0], &digits[1], &digits[2])
        })
        .collect()
}

/// `(q² − 1) q^{3m − 2}`.
pub fn sl2_order(q: u32, m: usize) -> u128 {
    let q = q as u128;
    (q * q - 1) * q.pow(3 * m as u32 - 2)
}

/// Canonical generators of `SL2(F_q[t]/(t^m))`: `e12(1)`, `e21(1)`,
/// `e12(t)`, `diag(1+t, (1+t)^{-1})`, and `e12(ω)` for a primitive `ω` when
/// `q > 2`. The first three alone only reach a quarter of the group at
/// `m = 3`; the diagonal element is needed from level 3 on.
pub fn canonical_gens(f: Gf2m, m: usize) -> Vec<Mat2> {
    let t = TruncPoly::monomial(f, m, 1, FieldElem::ONE);
    let u = TruncPoly::one(f, m).add_unchecked(&t);
    let mut gens = vec![
        Mat2::upper(TruncPoly::one(f, m)),
        Mat2::lower(TruncPoly::one(f, m)),
        Mat2::upper(t),
        Mat2::diag(u).expect("1 + t is a unit"),
    ];
    if f.order() > 2 {
        gens.push(Mat2::upper(TruncPoly::constant(f, m, f.primitive_element())));
    }
    gens
}

/// `SL2(F_q[t]/(t^m))` as a finite group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sl2Quotient {
    pub field: Gf2m,
    pub m: usize,
}

impl Quotient for Sl2Quotient {
    type Elem = Mat2;
    type Key = Vec<u64>;

    fn identity(&self) -> Mat2 {
        Mat2::identity(self.field, self.m)
    }
    fn mul(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        a.mul(b)
    }
    fn inv(&self, a: &Mat2) -> Mat2 {
        a.inv()
    }
    fn key(&self, a: &Mat2) -> Vec<u64> {
        a.packed_key(self.m)
    }
    fn order(&self) -> Option<u128> {
        Some(sl2_order(self.field.order(), self.m))
    }
    fn describe(&self) -> String {
        format!("SL2(F{}[t]/t^{})", self.field.order(), self.m)
    }
}

/// The engine instance for a schedule.
#[derive(Clone, Debug)]
pub struct Sl2Instance {
    pub field: Gf2m,
    pub schedule: Sl2Schedule,
}

impl Sl2Instance {
    pub fn new(schedule: Sl2Schedule) -> Result<Self> {
        schedule.validate()?;
        Ok(Sl2Instance {
            field: Gf2m::with_order(schedule.q)?,
            schedule,
        })
    }

    pub fn depth(&self) -> usize {
        self.schedule.depth
    }

    fn beta(&self, level: usize) -> usize {
        self.schedule.betas[level - 1]
    }

    fn alpha(&self, level: usize) -> usize {
        self.schedule.alphas[level - 1]
    }

    pub fn canonical_gens(&self) -> Vec<Mat2> {
        canonical_gens(self.field, self.depth())
    }
}

impl Instance for Sl2Instance {
    type Elem = Mat2;
    type Key = Vec<u64>;
    type Base = Sl2Quotient;

    fn describe(&self) -> String {
        format!(
            "SL2(F{}[t]/t^{}) betas={:?}",
            self.schedule.q, self.schedule.depth, self.schedule.betas
        )
    }
    fn target_level(&self) -> usize {
        self.schedule.steps()
    }
    fn identity(&self) -> Mat2 {
        Mat2::identity(self.field, self.depth())
    }
    fn mul(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        a.mul(b)
    }
    fn inv(&self, a: &Mat2) -> Mat2 {
        a.inv()
    }
    fn serialize(&self, a: &Mat2) -> String {
        a.serialize()
    }
    fn in_n(&self, level: usize, g: &Mat2) -> bool {
        level == 0 || g.val() >= self.beta(level)
    }
    fn in_m(&self, level: usize, g: &Mat2) -> bool {
        g.val() >= self.alpha(level)
    }
    fn coset_key(&self, level: usize, g: &Mat2) -> Vec<u64> {
        let m = if level == 0 { 0 } else { self.beta(level) };
        g.packed_key(m)
    }
    fn a_n(&self, _level: usize) -> usize {
        3
    }
    fn k_n(&self, _level: usize) -> u32 {
        2
    }
    fn power_approx(&self, level: usize, z: &Mat2) -> Result<Vec<Mat2>> {
        if !self.in_n(level, z) {
            return Err(Error::NotInSubgroup(format!("K_{}", self.beta(level))));
        }
        if level < self.target_level() && self.in_n(level + 1, z) {
            return Ok(vec![self.identity(); 3]);
        }
        Ok(square_approx(z, self.alpha(level))?.to_vec())
    }
    fn level_info(&self, level: usize) -> serde_json::Value {
        serde_json::json!({
            "alpha": self.alpha(level),
            "beta": self.beta(level),
            "A": 3,
            "k": 2,
        })
    }
    fn base(&self) -> Sl2Quotient {
        Sl2Quotient {
            field: self.field,
            m: self.beta(1),
        }
    }
    fn project(&self, g: &Mat2) -> Mat2 {
        g.reduce(self.beta(1))
    }
    fn sample_n(&self, level: usize, rng: &mut dyn RngCore) -> Mat2 {
        let l = if level > self.target_level() { self.depth() } else { self.beta(level) };
        random_congruence(self.field, self.depth(), l, rng)
    }
    fn sample_m(&self, level: usize, rng: &mut dyn RngCore) -> Mat2 {
        random_congruence(self.field, self.depth(), self.alpha(level), rng)
    }
    fn sample_group(&self, rng: &mut dyn RngCore) -> Mat2 {
        random_sl2(self.field, self.depth(), rng)
    }
    fn pow(&self, a: &Mat2, k: u32) -> Mat2 {
        a.pow(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::closure;

    fn f2() -> Gf2m {
        Gf2m::new(1).unwrap()
    }

    #[test]
    fn schedule_from_nine() {
        let s = make_schedule(2, 9, 9).unwrap();
        assert_eq!(s.betas, vec![9, 12, 16, 20, 24, 32, 40, 52, 68]);
        assert_eq!(s.alphas, vec![3, 4, 5, 6, 8, 10, 13, 17, 22]);
        assert_eq!(s.depth, 68);
        let back = Sl2Schedule::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn short_and_stalling_schedules() {
        assert_eq!(make_schedule(2, 3, 2).unwrap().betas, vec![3, 4]);
        assert!(matches!(make_schedule(2, 4, 2), Err(Error::ScheduleStall { beta: 4, .. })));
        assert!(matches!(make_schedule(2, 3, 3), Err(Error::ScheduleStall { beta: 4, .. })));
        // 5 -> min(4, 6) = 4 decreases; 6 -> 8 -> 8 stalls
        assert!(make_schedule(2, 5, 2).is_err());
        assert_eq!(make_schedule(2, 6, 2).unwrap().betas, vec![6, 8]);
        assert!(make_schedule(2, 6, 3).is_err());
        for b1 in 9..40 {
            make_schedule(4, b1, 12).unwrap();
        }
    }

    #[test]
    fn schedule_validation_rejects_bad_input() {
        let mut s = make_schedule(2, 9, 3).unwrap();
        s.betas[2] = 17;
        assert!(s.validate().is_err());
        let bad = r#"{"q":2,"depth":12,"alphas":[4,4],"betas":[9,12]}"#;
        assert!(Sl2Schedule::from_json(bad).is_err());
        assert_eq!(parse_schedule("auto:9:3", 2, 1).unwrap().betas, vec![9, 12, 16]);
        assert!(parse_schedule("auto:x", 2, 1).is_err());
    }

    #[test]
    fn deep_generators() {
        let zero = TruncPoly::zero(f2(), 4);
        assert_eq!(gen_d(1, &zero).unwrap(), Mat2::upper(TruncPoly::monomial(f2(), 4, 1, FieldElem::ONE)));
        let g = gen_f(2, &TruncPoly::from_coeffs(f2(), 6, &[1, 1])).unwrap();
        assert_eq!(g.val(), 2);
        assert!(gen_d(2, &zero).is_err());
        assert!(gen_e(4, &zero).is_err());
        let f = Gf2m::with_order(8).unwrap();
        for x in 0..8 {
            let a = TruncPoly::from_coeffs(f, 7, &[x, 3, 5]);
            assert!(gen_e(2, &a).unwrap().det().is_one());
            assert!(gen_f(3, &a).unwrap().det().is_one());
            assert!(gen_d(3, &a).unwrap().det().is_one());
        }
    }

    #[test]
    fn square_approx_worked_example() {
        let z = congruence_element(f2(), 4, 3, &[0], &[1], &[1]);
        let [y1, y2, y3] = square_approx(&z, 1).unwrap();
        let zero = TruncPoly::zero(f2(), 4);
        let one = TruncPoly::one(f2(), 4);
        assert_eq!(y1, gen_d(1, &zero).unwrap());
        assert_eq!(y2, gen_e(1, &one).unwrap());
        assert_eq!(y3, gen_f(1, &one).unwrap());
        let prod = y1.pow(2).mul(&y2.pow(2)).mul(&y3.pow(2));
        assert!(prod.mul(&z.inv()).val() >= 4);
    }

    #[test]
    fn square_approx_identity() {
        let i = Mat2::identity(f2(), 4);
        let ys = square_approx(&i, 1).unwrap();
        let zero = TruncPoly::zero(f2(), 4);
        assert_eq!(ys[0], gen_d(1, &zero).unwrap());
        assert_eq!(ys[1], gen_e(1, &zero).unwrap());
        assert_eq!(ys[2], gen_f(1, &zero).unwrap());
        assert!(ys[0].pow(2).mul(&ys[1].pow(2)).mul(&ys[2].pow(2)).is_identity());
        let shallow = congruence_element(f2(), 4, 2, &[1], &[], &[]);
        assert!(matches!(square_approx(&shallow, 1), Err(Error::InsufficientLevel { .. })));
    }

    #[test]
    fn group_orders_by_closure() {
        for (q, mmax) in [(2, 4), (4, 2)] {
            let f = Gf2m::with_order(q).unwrap();
            for m in 1..=mmax {
                let all = closure(Sl2Quotient { field: f, m }, canonical_gens(f, m), 1 << 20).unwrap();
                assert_eq!(all.len() as u128, sl2_order(q, m), "q={q} m={m}");
            }
        }
        assert_eq!(sl2_order(2, 3), 384);
        assert_eq!(sl2_order(2, 4), 3072);
    }
}
