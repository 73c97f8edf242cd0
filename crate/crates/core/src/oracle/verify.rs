//! Randomised and exhaustive checks of the potent SKP hypotheses.

use rand::RngCore;
use serde::Serialize;

use crate::engine::Instance;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, Serialize, PartialEq, Eq)]
pub struct CheckCount {
    pub pass: u64,
    pub fail: u64,
}

impl CheckCount {
    fn record(&mut self, ok: bool) {
        if ok {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
    }

    pub fn ok(&self) -> bool {
        self.fail == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub params: serde_json::Value,
    /// Samplers land where they claim (`N_i`, `M_i`).
    pub samplers: CheckCount,
    /// (i) `N_i ≤ M_i`, plus `N_{i+1} ≤ N_i`.
    pub nesting: CheckCount,
    /// (ii) `[M_i, N_i] ≤ N_{i+1}`.
    pub commutator: CheckCount,
    /// (iii) `z^{k_i} ∈ N_{i+1}` for `z ∈ N_i`.
    pub power: CheckCount,
    /// (iv) oracle output lies in `M_i` and has the right product.
    pub oracle: CheckCount,
}

impl LevelReport {
    pub fn ok(&self) -> bool {
        [self.samplers, self.nesting, self.commutator, self.power, self.oracle]
            .iter()
            .all(CheckCount::ok)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub instance: String,
    pub samples: usize,
    pub levels: Vec<LevelReport>,
    pub all_pass: bool,
}

/// Checks the oracle on one `z ∈ N_level`.
pub fn oracle_ok<I: Instance>(inst: &I, level: usize, z: &I::Elem) -> bool {
    let Ok(ys) = inst.power_approx(level, z) else {
        return false;
    };
    if ys.len() != inst.a_n(level) || !ys.iter().all(|y| inst.in_m(level, y)) {
        return false;
    }
    let k = inst.k_n(level);
    let prod = ys
        .iter()
        .fold(inst.identity(), |acc, y| inst.mul(&acc, &inst.pow(y, k)));
    inst.in_n(level + 1, &inst.mul(&prod, &inst.inv(z)))
}

/// Runs hypotheses (i)–(iv) with `samples` random draws per check at each
/// level in `levels` (levels must be `< target_level`).
pub fn verify_hypotheses<I: Instance>(
    inst: &I,
    levels: impl IntoIterator<Item = usize>,
    samples: usize,
    rng: &mut dyn RngCore,
) -> HypothesisReport {
    let mut out = Vec::new();
    for i in levels {
        assert!(i >= 1 && i < inst.target_level(), "level {i} out of range");
        let mut r = LevelReport {
            level: i,
            params: inst.level_info(i),
            samplers: CheckCount::default(),
            nesting: CheckCount::default(),
            commutator: CheckCount::default(),
            power: CheckCount::default(),
            oracle: CheckCount::default(),
        };
        let k = inst.k_n(i);
        for _ in 0..samples {
            let z = inst.sample_n(i, rng);
            let m = inst.sample_m(i, rng);
            let deeper = inst.sample_n(i + 1, rng);
            r.samplers.record(inst.in_n(i, &z) && inst.in_m(i, &m) && inst.in_n(i + 1, &deeper));
            r.nesting.record(inst.in_m(i, &z) && inst.in_n(i, &deeper));
            r.commutator.record(inst.in_n(i + 1, &inst.commutator(&m, &z)));
            r.power.record(inst.in_n(i + 1, &inst.pow(&z, k)));
            r.oracle.record(oracle_ok(inst, i, &z));
        }
        out.push(r);
    }
    let all_pass = out.iter().all(LevelReport::ok);
    HypothesisReport {
        instance: inst.describe(),
        samples,
        levels: out,
        all_pass,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueReport {
    pub level: usize,
    pub classes: usize,
    pub passed: usize,
    /// Serialized representatives that failed.
    pub failures: Vec<String>,
}

impl ResidueReport {
    pub fn ok(&self) -> bool {
        self.passed == self.classes
    }
}

/// Runs the oracle on every class of `N_level / N_{level+1}`, given one
/// representative per class (at most `limit` of them).
pub fn exhaustive_residue_check<I: Instance>(
    inst: &I,
    level: usize,
    reps: &[I::Elem],
    limit: usize,
) -> Result<ResidueReport> {
    if reps.len() > limit {
        return Err(Error::Threshold {
            size: reps.len() as u128,
            threshold: limit as u128,
        });
    }
    let mut failures = Vec::new();
    for z in reps {
        if !inst.in_n(level, z) || !oracle_ok(inst, level, z) {
            failures.push(inst.serialize(z));
        }
    }
    Ok(ResidueReport {
        level,
        classes: reps.len(),
        passed: reps.len() - failures.len(),
        failures,
    })
}
