use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skp_core::fabgup::{bold, bold_word, x1, x2, ab_coords, ChainPos, FgChain, FgInstance};
use skp_core::oracle::closure;
use skp_core::tree::{Portrait, StabQuotient};
use skp_core::Instance;

const M: usize = 7;

fn pos(n: i64) -> ChainPos {
    ChainPos::new(n).unwrap()
}

fn cubes(ys: &[Portrait]) -> Portrait {
    ys.iter()
        .fold(Portrait::identity(ys[0].depth()), |acc, y| acc.mul(&y.pow(3)))
}

#[test]
fn quotient_orders_by_closure() {
    for (m, size) in [(1, 3), (2, 81), (3, 59049)] {
        let gens = vec![Portrait::gen_a(m), Portrait::gen_b(m)];
        let all = closure(StabQuotient { depth: m }, gens, 1 << 20).unwrap();
        assert_eq!(all.len(), size, "Γ/Stab({m})");
    }
}

#[test]
fn cube_identities() {
    let ch = FgChain::new();
    // steps 1, 2, 4 are equalities in Γ.
    for r in [1, 2, 4] {
        let l = ch.local(r, M).unwrap();
        assert_eq!(cubes(&l.pieces[0]), l.gens[0], "identity for r = {r}");
    }
    // step 3 mod K_1^(×9), step 5 mod L^(×9), step 6 mod K^(×9) = Stab(3).
    for (r, modulus) in [(3, pos(-2)), (5, pos(0))] {
        let l = ch.local(r, M).unwrap();
        let diff = l.gens[0].inv().mul(&cubes(&l.pieces[0]));
        assert!(ch.contains(&modulus, &diff), "congruence for r = {r}");
        assert!(!diff.is_identity() || r == 3);
    }
    let l = ch.local(6, M).unwrap();
    let diff = l.gens[0].inv().mul(&cubes(&l.pieces[0]));
    assert!(diff.stab_level() >= 3);
    // conjugated generators carry conjugated identities
    for r in [1, 2, 4, 5, 6] {
        let l = ch.local(r, M).unwrap();
        assert_eq!(l.gens.len(), 3);
        let a = Portrait::gen_a(M);
        assert_eq!(l.gens[1], l.gens[0].conj(&a));
    }
}

#[test]
fn bold_composition_order() {
    // 01(x1) = x1^3 (x1^b)^-3 singles out rs(x) = r(s(x)).
    let (x, b) = (x1(M), Portrait::gen_b(M));
    let rhs = x.pow(3).mul(&x.conj(&b).pow(-3));
    assert_eq!(bold_word(&[0, 1], &x1(M - 2)), rhs);
    assert_eq!(bold(0, &bold(1, &x1(M - 2))), rhs);
    assert_ne!(bold(1, &bold(0, &x1(M - 2))), rhs);
}

#[test]
fn commutator_lemma_values() {
    let (a, b) = (Portrait::gen_a(M), Portrait::gen_b(M));
    let y = x1(M - 2);
    let z00 = bold_word(&[0, 0], &y);
    assert_eq!(a.comm(&z00), bold_word(&[1, 0], &y));
    assert_eq!(b.comm(&z00), bold_word(&[0, 1], &y));
    let y1 = x1(M - 1);
    assert_eq!(a.comm(&bold(0, &y1)), bold(1, &y1));
    assert_eq!(b.comm(&bold(0, &y1)), bold(0, &x2(M - 1)));
    assert_eq!(a.comm(&bold(1, &y1)), bold(2, &y1));
    assert_eq!(b.comm(&bold(1, &y1)), bold(0, &x2(M - 1)));
    let one = Portrait::identity(M - 1);
    let t = [one, y1.pow(-3), y1.pow(3)];
    assert_eq!(a.comm(&bold(2, &y1)), Portrait::assemble(&t, 0).unwrap());
}

#[test]
fn commutator_inclusions() {
    // [K^(×3^s), N_n] ≤ N_{n+1} for the six steps of one period.
    let ch = FgChain::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, s) in [(1, 0), (2, 0), (3, 1), (4, 1), (5, 1), (6, 2)] {
        for _ in 0..100 {
            let g = ch.sample_k_power(s, M, &mut rng);
            let h = ch.sample_n(&pos(n), M, &mut rng);
            assert!(ch.contains(&pos(n), &h));
            assert!(ch.contains(&pos(n + 1), &g.comm(&h)), "inclusion {n}");
        }
    }
}

#[test]
fn chain_subgroups_are_normal() {
    let ch = FgChain::new();
    let (a, b) = (Portrait::gen_a(M), Portrait::gen_b(M));
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in -3..=8 {
        let p = pos(n);
        let mut gens = ch.class_reps(&p, M, usize::MAX, 27).unwrap_or_default();
        gens.extend((0..20).map(|_| ch.sample_n(&p, M, &mut rng)));
        for g in gens {
            assert!(ch.contains(&p, &g));
            assert!(ch.contains(&p, &g.conj(&a)), "a-conjugate leaves {}", p.n_name());
            assert!(ch.contains(&p, &g.conj(&b)), "b-conjugate leaves {}", p.n_name());
        }
    }
}

#[test]
fn branch_stabilisers() {
    // K^(×3^m) = Stab(m+1) for m = 1, 2, on samples from Γ and from Stab(m).
    let inst = FgInstance::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut positives = 0;
    for m in 1..=2usize {
        for t in 0..400 {
            let g = match t % 3 {
                0 => inst.sample_stab(m + 1, &mut rng),
                1 => inst.sample_stab(m.max(2), &mut rng).mul(&Portrait::gen_b(6).pow(t as i64 % 2)),
                _ => inst.sample_group(&mut rng),
            };
            let by_stab = g.stab_level() > m;
            let by_sections = g.stab_level() >= m
                && (0..3usize.pow(m as u32)).all(|p| ab_coords(&g.section(m, p)).unwrap() == (0, 0));
            assert_eq!(by_stab, by_sections);
            positives += by_stab as usize;
        }
    }
    assert!(positives > 50);
}

#[test]
fn residue_exponents_round_trip() {
    let ch = FgChain::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in -3..=6 {
        let p = pos(n);
        let reps = ch.class_reps(&p, M, usize::MAX, 1 << 12);
        let reps = match reps {
            Ok(r) => r,
            Err(_) => ch.class_reps(&p, M, 1, 27).unwrap(),
        };
        for (code, z) in reps.iter().enumerate().filter(|(i, _)| i % 7 == 0 || *i < 30) {
            let e = ch.residue_exps(&p, z).unwrap();
            let mut c = code;
            for &x in &e {
                if c == 0 {
                    assert_eq!(x, 0);
                    continue;
                }
                assert_eq!(x as usize, c % 3, "n = {n}");
                c /= 3;
            }
        }
        // deeper elements have zero residue
        let deeper = ch.sample_n(&p.next(), M, &mut rng);
        assert!(ch.residue_exps(&p, &deeper).unwrap().iter().all(|&x| x == 0));
        assert!(ch.cube_approx(&p, &deeper).unwrap().iter().all(Portrait::is_identity));
        let _ = rng.gen::<u8>();
    }
}

#[test]
fn cube_approx_congruence() {
    let ch = FgChain::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in -3..=12 {
        let p = pos(n);
        for _ in 0..100 {
            let z = ch.sample_n(&p, M.max(p.next().min_depth()), &mut rng);
            let ys = ch.cube_approx(&p, &z).unwrap();
            assert_eq!(ys.len(), p.a);
            let s = p.block_level();
            assert!(ys.iter().all(|y| y.stab_level() > s || s == 0));
            assert!(ch.contains(&p.next(), &z.inv().mul(&cubes(&ys))), "n = {n}");
        }
    }
}

fn word() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!['a', 'b', 'A', 'B']), 0..40)
        .prop_map(|v| v.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn group_axioms(u in word(), v in word(), w in word(), m in 1usize..=7) {
        let (f, g, h) = (
            Portrait::from_word(m, &u).unwrap(),
            Portrait::from_word(m, &v).unwrap(),
            Portrait::from_word(m, &w).unwrap(),
        );
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert!(f.mul(&f.inv()).is_identity());
        prop_assert!(f.inv().mul(&f).is_identity());
        prop_assert_eq!(f.conj(&g), g.inv().mul(&f).mul(&g));
        prop_assert_eq!(Portrait::parse(&f.serialize()).unwrap(), f.clone());
        if m >= 2 && f.stab_level() >= 1 && g.stab_level() >= 1 {
            let (sf, sg) = (f.sections().unwrap(), g.sections().unwrap());
            let prod = [sf[0].mul(&sg[0]), sf[1].mul(&sg[1]), sf[2].mul(&sg[2])];
            prop_assert_eq!(f.mul(&g), Portrait::assemble(&prod, 0).unwrap());
        }
    }
}
