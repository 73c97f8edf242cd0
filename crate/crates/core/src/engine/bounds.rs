//! Closed-form diameter and runtime bounds.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// `l_n = |Γ:N_1| · ∏ (1 + A_i k_i)` over the given steps (`n - 1` of them).
pub fn bound_l(index_n1: &BigUint, a: &[u64], k: &[u64]) -> BigUint {
    assert_eq!(a.len(), k.len());
    a.iter()
        .zip(k)
        .fold(index_n1.clone(), |acc, (&ai, &ki)| acc * (1 + ai * ki))
}

/// The refined bound `L_0 + … + L_{n-1}` with `L_0 = |Γ:N_1|` and
/// `L_i = A_i k_i (L_{i-n0} + … + L_{i-1})`; `a[i-1]`, `k[i-1]` hold
/// `A_i`, `k_i`. Requires `n0 ≥ 1`.
pub fn bound_refined(index_n1: &BigUint, a: &[u64], k: &[u64], n0: usize) -> BigUint {
    assert!(n0 >= 1);
    assert_eq!(a.len(), k.len());
    let mut ls = vec![index_n1.clone()];
    for i in 1..=a.len() {
        let window: BigUint = ls[i.saturating_sub(n0)..i].iter().sum();
        ls.push(window * (a[i - 1] * k[i - 1]));
    }
    ls.iter().sum()
}

/// `t_n` from `t_1` and `t_{i+1} = (A_i + 1) t_i + (A_i k_i + 3)`.
pub fn runtime_steps(t1: &BigUint, a: &[u64], k: &[u64]) -> BigUint {
    a.iter()
        .zip(k)
        .fold(t1.clone(), |t, (&ai, &ki)| t * (ai + 1) + (ai * ki + 3))
}

#[derive(Clone, Debug, Serialize)]
pub struct RuntimeBound {
    /// `log2` of the bound (always available).
    pub log2: f64,
    /// The bound itself, when it has at most `EXACT_BITS` bits.
    pub exact: Option<String>,
}

const EXACT_BITS: f64 = 65536.0;

/// Runtime bound `f · t_n` with `t_1 = C |S|^{|Γ:N_1|+1}` (and `C = c`),
/// using the recurrence above.
pub fn bound_runtime(f: u64, a: &[u64], k: &[u64], s: u64, index_n1: u128, c: u64) -> RuntimeBound {
    let log2_t1 = (c as f64).log2() + (index_n1 as f64 + 1.0) * (s as f64).log2();
    if log2_t1 <= EXACT_BITS {
        let t1 = BigUint::from(c) * BigUint::from(s).pow((index_n1 + 1) as u32);
        let t = runtime_steps(&t1, a, k) * f;
        return RuntimeBound {
            log2: big_log2(&t),
            exact: Some(t.to_string()),
        };
    }
    // t_1 dominates: the additive terms vanish at this scale.
    let growth: f64 = a.iter().map(|&ai| ((ai + 1) as f64).log2()).sum();
    RuntimeBound {
        log2: (f as f64).log2() + log2_t1 + growth,
        exact: None,
    }
}

/// `|Γ:H_2| · (p^{n-1} - 1)/(p - 1)`.
pub fn padic_bound(p: u64, index_h2: u64, n: u32) -> BigUint {
    assert!(p >= 2 && n >= 1);
    let geom = (BigUint::from(p).pow(n - 1) - BigUint::one()) / (p - 1);
    geom * index_h2
}

/// `∏ (3A_i + 1)` (FG with k = 3) over one period.
pub fn period_product(a: &[u64], k: u64) -> BigUint {
    a.iter().map(|&ai| BigUint::from(1 + ai * k)).product()
}

/// `∏ (A_i + 1)`.
pub fn period_calls(a: &[u64]) -> BigUint {
    a.iter().map(|&ai| BigUint::from(ai + 1)).product()
}

pub fn big_log2(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let top = (x >> (bits - 64)).to_u64().unwrap() as f64;
    top.log2() + (bits - 64) as f64
}

/// Exponents in the headline asymptotics, as ratios of logarithms.
#[derive(Clone, Debug, Serialize)]
pub struct HeadlineConstants {
    /// `log 7 / log(4/3)`: diameter exponent for SL2.
    pub sl2_diameter: f64,
    /// `2 + log 4 / log(4/3)`: runtime exponent for SL2.
    pub sl2_runtime: f64,
    /// `log C̃ / log 3`: diameter exponent for FG.
    pub fg_diameter: f64,
    /// `1 + log C̃' / log 3`: runtime exponent for FG.
    pub fg_runtime: f64,
    /// `2 log 7 / log(4/3)`: spectral gap exponent for SL2.
    pub sl2_gap: f64,
    /// `2 log C̃ / log 3`: spectral gap exponent for FG.
    pub fg_gap: f64,
    /// `log 9 / log(4/3)`: diameter exponent for SL_d, d ≥ 3 (four squares).
    pub sld_diameter: f64,
    pub c_tilde: u64,
    pub c_tilde_prime: u64,
}

/// The FG period table `A_1..A_6`.
pub const FG_PERIOD_A: [u64; 6] = [9, 18, 4, 6, 6, 3];

pub fn headline_constants() -> HeadlineConstants {
    let ct = period_product(&FG_PERIOD_A, 3).to_u64().unwrap();
    let ctp = period_calls(&FG_PERIOD_A).to_u64().unwrap();
    let l43 = (4.0f64 / 3.0).ln();
    HeadlineConstants {
        sl2_diameter: 7f64.ln() / l43,
        sl2_runtime: 2.0 + 4f64.ln() / l43,
        fg_diameter: (ct as f64).ln() / 3f64.ln(),
        fg_runtime: 1.0 + (ctp as f64).ln() / 3f64.ln(),
        sl2_gap: 2.0 * 7f64.ln() / l43,
        fg_gap: 2.0 * (ct as f64).ln() / 3f64.ln(),
        sld_diameter: 9f64.ln() / l43,
        c_tilde: ct,
        c_tilde_prime: ctp,
    }
}
