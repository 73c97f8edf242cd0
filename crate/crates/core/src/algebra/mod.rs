//! Exact arithmetic in GF(2^e), in R_n = GF(q)[t]/(t^n) and in SL2(R_n).

pub mod gf2m;
pub mod mat2;
pub mod truncpoly;

pub use gf2m::{FieldElem, Gf2m};
pub use mat2::Mat2;
pub use truncpoly::TruncPoly;

use rand::Rng;

/// Uniformly random element of R_n.
pub fn random_poly<R: Rng + ?Sized>(field: Gf2m, n: usize, rng: &mut R) -> TruncPoly {
    let coeffs: Vec<u32> = (0..n).map(|_| rng.gen_range(0..field.order())).collect();
    TruncPoly::from_coeffs(field, n, &coeffs)
}

/// Random element of the congruence subgroup K_level of SL2(R_n):
/// `[[1 + t^l a, t^l b], [t^l c, d]]` with `d` solved from `det = 1`.
/// Every element of K_level (level >= 1) has this form for a unique (a, b, c)
/// modulo t^(n-l), so the distribution is uniform.
pub fn random_congruence<R: Rng + ?Sized>(field: Gf2m, n: usize, level: usize, rng: &mut R) -> Mat2 {
    if level == 0 {
        return random_sl2(field, n, rng);
    }
    let a = TruncPoly::one(field, n).add_unchecked(&random_poly(field, n, rng).shift(level));
    let b = random_poly(field, n, rng).shift(level);
    let c = random_poly(field, n, rng).shift(level);
    // (1 + t^l a) d + bc = 1
    let rhs = TruncPoly::one(field, n).add_unchecked(&b.mul_unchecked(&c));
    let d = rhs.mul_unchecked(&a.try_inv().expect("1 + t^l a is a unit"));
    Mat2::new_unchecked(a, b, c, d)
}

/// Random element of SL2(R_n), biased towards matrices whose top-left or
/// bottom-right entry is a unit (together these cover the whole group).
pub fn random_sl2<R: Rng + ?Sized>(field: Gf2m, n: usize, rng: &mut R) -> Mat2 {
    loop {
        let a = random_poly(field, n, rng);
        let b = random_poly(field, n, rng);
        let c = random_poly(field, n, rng);
        if let Ok(ai) = a.try_inv() {
            let d = TruncPoly::one(field, n)
                .add_unchecked(&b.mul_unchecked(&c))
                .mul_unchecked(&ai);
            let m = Mat2::new_unchecked(a, b, c, d);
            return if rng.gen_bool(0.5) {
                m
            } else {
                // swap rows/columns to reach the d-unit cells as well
                let w = Mat2::new_unchecked(
                    TruncPoly::zero(field, n),
                    TruncPoly::one(field, n),
                    TruncPoly::one(field, n),
                    TruncPoly::zero(field, n),
                );
                w.mul(&m).mul(&w)
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_elements_are_sl2() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for q in [2, 4, 8] {
            let f = Gf2m::with_order(q).unwrap();
            for lvl in 0..4 {
                let g = random_congruence(f, 7, lvl, &mut rng);
                assert!(g.det().is_one());
                assert!(g.val() >= lvl);
            }
        }
    }

    #[test]
    fn inverse_property_ten_thousand_trials() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..10_000 {
            let f = Gf2m::with_order(1 << (1 + i % 3)).unwrap();
            let n = 1 + i % 9;
            let g = random_sl2(f, n, &mut rng);
            assert!(g.mul(&g.try_inv().unwrap()).is_identity());
            assert!(g.try_inv().unwrap().mul(&g).is_identity());
        }
    }

    #[test]
    fn commutator_levels_add() {
        let f = Gf2m::new(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let n = 12;
            let (i, j) = (rng.gen_range(1..6), rng.gen_range(1..6));
            let g = random_congruence(f, n, i, &mut rng);
            let h = random_congruence(f, n, j, &mut rng);
            assert!(g.commutator(&h).val() >= (g.val() + h.val()).min(n));
        }
    }

    #[test]
    fn squares_double_the_level() {
        let f = Gf2m::with_order(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let n = 10;
            let k = rng.gen_range(1..5);
            let g = random_congruence(f, n, k, &mut rng);
            let sq = g.mul(&g);
            assert!(sq.val() >= (2 * k).min(n));
            // g = I + t^k X  =>  g^2 = I + t^{2k} X^2
            let [xa, xb, xc, xd] = g.deviation(k);
            let x = Mat2::new_unchecked(xa, xb, xc, xd);
            let x2 = x.mul(&x);
            let one = TruncPoly::one(f, n);
            assert_eq!(sq.a, one.add_unchecked(&x2.a.shift(2 * k)));
            assert_eq!(sq.b, x2.b.shift(2 * k));
            assert_eq!(sq.c, x2.c.shift(2 * k));
            assert_eq!(sq.d, one.add_unchecked(&x2.d.shift(2 * k)));
        }
    }

    #[test]
    fn power_commutator_law() {
        let f = Gf2m::new(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let dn = 14;
            let (n, m) = (rng.gen_range(1..5), rng.gen_range(1..7));
            let g = random_congruence(f, dn, n, &mut rng);
            let h = random_congruence(f, dn, m, &mut rng);
            let gh = g.mul(&h);
            let lhs = gh.mul(&gh).mul(&g.inv().mul(&g.inv()));
            assert!(lhs.val() >= (n + m).min(2 * m).min(dn));
        }
    }
}
