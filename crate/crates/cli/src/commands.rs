use std::hash::{DefaultHasher, Hash, Hasher};
use std::path::PathBuf;

use clap::Args;
use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use skp_core::engine::bounds::{bound_l, bound_refined, bound_runtime, headline_constants, padic_bound, FG_PERIOD_A};
use skp_core::engine::{BaseStrategy, BfsBase, MitmBase, NavOptions, Navigator, TrivialBase};
use skp_core::fabgup::FgInstance;
use skp_core::group::Cyclic;
use skp_core::oracle::{directed_diameter, exhaustive_residue_check, undirected_diameter, verify_hypotheses};
use skp_core::spectral::spectral_report;
use skp_core::tree::Portrait;
use skp_core::{Error, Instance, Quotient, Result};

use crate::config::{GroupKind, RunConfig};
use crate::group::*;

pub const CODE_CERTIFICATE: i32 = 2;
pub const CODE_THRESHOLD: i32 = 3;
pub const CODE_BAD_INPUT: i32 = 4;

/// Exit code for an error raised anywhere in a run.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Threshold { .. } => CODE_THRESHOLD,
        Error::BaseFailure(_)
        | Error::OracleViolation { .. }
        | Error::CongruenceViolation { .. }
        | Error::NoMatch { .. }
        | Error::NotInClosure => CODE_CERTIFICATE,
        _ => CODE_BAD_INPUT,
    }
}

fn error_record(e: &Error) -> Value {
    json!({ "error": e.to_string(), "exit_code": error_code(e) })
}

/// Records to print and the exit code they imply.
#[derive(Default)]
pub struct Outcome {
    pub records: Vec<Value>,
    pub code: i32,
}

impl Outcome {
    fn push(&mut self, record: Value, code: i32) {
        self.records.push(record);
        self.code = self.code.max(code);
    }
}

#[derive(Args, Clone, Debug)]
pub struct NavArgs {
    /// `identity`, `random:N`, `stab:M:N` (fabgup), `file:PATH`, an SL2
    /// matrix `a;b;c;d`, or an FG portrait `m:digits` or word over a, b, A, B
    #[arg(required = true)]
    pub elements: Vec<String>,
    /// `bfs`, `mitm:L` or `trivial`
    #[arg(long, default_value = "bfs")]
    pub base: String,
    /// Navigate modulo N_level (default: the deepest level)
    #[arg(long)]
    pub level: Option<usize>,
    /// Print words up to this many letters (longer words print as null)
    #[arg(long, default_value_t = 4096)]
    pub word_cap: usize,
    /// Include wall-clock time (records are then not reproducible)
    #[arg(long)]
    pub timing: bool,
    /// Directory for cached BFS ball tables
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Also check y^k against its approximation at every step
    #[arg(long)]
    pub check_hp: bool,
}

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Level range `a..b` (default: every level below the target)
    #[arg(long)]
    pub levels: Option<String>,
    /// Also run the exhaustive block residue check (fabgup)
    #[arg(long)]
    pub residues: bool,
}

#[derive(Args, Clone, Debug)]
pub struct BoundsArgs {
    /// Window n0 of the refined bound
    #[arg(long)]
    pub n0: Option<usize>,
    /// Runtime constants f and C
    #[arg(long, default_value_t = 1)]
    pub f: u64,
    #[arg(long, default_value_t = 1)]
    pub c: u64,
    /// p-adic bound `p:index_H2:n`
    #[arg(long)]
    pub padic: Option<String>,
}

fn rng_for(cfg: &RunConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed)
}

fn with_config(mut v: Value, cfg: &RunConfig) -> Value {
    v["seed"] = json!(cfg.seed);
    v["config"] = serde_json::to_value(cfg).expect("config serializes");
    v
}

pub fn navigate(cfg: &RunConfig, a: &NavArgs) -> Result<Outcome> {
    let mut rng = rng_for(cfg);
    match cfg.group.kind {
        GroupKind::Sl2 => {
            let inst = sl2_instance(cfg)?;
            let (f, m) = (inst.field, inst.depth());
            let gens = sl2_gens(cfg, f, m, &mut rng)?;
            let no_stab = |_: usize, _: &mut dyn RngCore| Err(Error::Parse("stab:M:N needs a fabgup group".into()));
            let elems = expand_inputs(&inst, &a.elements, |s| parse_mat(f, m, s), no_stab, &mut rng)?;
            with_base(cfg, a, &inst, gens, elems)
        }
        GroupKind::Fabgup | GroupKind::FabgupExt => {
            let inst = fg_instance(cfg)?;
            let d = inst.depth();
            let gens = fg_gens(cfg, d, &mut rng)?;
            let stab = |m: usize, r: &mut dyn RngCore| {
                if (2..=d).contains(&m) {
                    Ok(inst.sample_stab(m, r))
                } else {
                    Err(Error::Parse(format!("stab:M:N needs 2 <= M <= {d}")))
                }
            };
            let elems = expand_inputs(&inst, &a.elements, |s| parse_portrait(d, s), stab, &mut rng)?;
            with_base(cfg, a, &inst, gens, elems)
        }
        GroupKind::Cyclic => Err(Error::Parse("navigate needs --group sl2, fabgup or fabgup-ext".into())),
    }
}

fn with_base<I>(cfg: &RunConfig, a: &NavArgs, inst: &I, gens: Vec<I::Elem>, elems: Vec<(String, I::Elem)>) -> Result<Outcome>
where
    I: Instance,
    I::Base: Clone,
{
    let ser: Vec<String> = gens.iter().map(|g| inst.serialize(g)).collect();
    if a.base == "bfs" {
        let base = match &a.cache {
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
                let mut h = DefaultHasher::new();
                (inst.base().describe(), &ser).hash(&mut h);
                let path = dir.join(format!("{:016x}.ball", h.finish()));
                BfsBase::with_cache(inst, &gens, &ser, cfg.threshold, &path)?
            }
            None => BfsBase::new(inst, &gens, cfg.threshold)?,
        };
        run_nav(cfg, a, inst, gens, ser, base, elems)
    } else if a.base == "trivial" {
        run_nav(cfg, a, inst, gens, ser, TrivialBase, elems)
    } else if let Some(l) = a.base.strip_prefix("mitm:") {
        let l: usize = l.parse().map_err(|_| Error::Parse(format!("bad radius in {:?}", a.base)))?;
        let base = MitmBase::new(inst, &gens, l, cfg.threshold)?;
        run_nav(cfg, a, inst, gens, ser, base, elems)
    } else {
        Err(Error::Parse(format!("unknown base {:?} (bfs, mitm:L, trivial)", a.base)))
    }
}

fn run_nav<I: Instance, B: BaseStrategy<I>>(
    cfg: &RunConfig,
    a: &NavArgs,
    inst: &I,
    gens: Vec<I::Elem>,
    ser: Vec<String>,
    base: B,
    elems: Vec<(String, I::Elem)>,
) -> Result<Outcome> {
    let level = a.level.unwrap_or(inst.target_level());
    let base_name = base.describe();
    let opts = NavOptions {
        check_oracle: true,
        check_hp: a.check_hp,
    };
    let mut nav = Navigator::with_options(inst, gens, base, opts);
    let mut out = Outcome::default();
    for (input, g) in elems {
        let (mut rec, code) = match nav.navigate(level, &g) {
            Ok(r) => {
                let code = if r.certified { 0 } else { CODE_CERTIFICATE };
                (r.to_json(&inst.describe(), &ser, a.word_cap, a.timing), code)
            }
            Err(e) => {
                let mut v = error_record(&e);
                v["group"] = json!(inst.describe());
                (v, error_code(&e))
            }
        };
        rec["input"] = json!(input);
        rec["base"] = json!(base_name);
        out.push(with_config(rec, cfg), code);
    }
    Ok(out)
}

fn parse_levels(s: Option<&str>, target: usize) -> Result<Vec<usize>> {
    let Some(s) = s else {
        return Ok((1..target).collect());
    };
    let bad = || Error::Parse(format!("bad level range {s:?}"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let (lo, hi): (usize, usize) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
    if lo == 0 || hi > target || lo >= hi {
        return Err(Error::Parse(format!("level range must lie in 1..{target}")));
    }
    Ok((lo..hi).collect())
}

pub fn verify(cfg: &RunConfig, a: &VerifyArgs) -> Result<Outcome> {
    let mut rng = rng_for(cfg);
    let mut out = Outcome::default();
    match cfg.group.kind {
        GroupKind::Sl2 => {
            let inst = sl2_instance(cfg)?;
            let levels = parse_levels(a.levels.as_deref(), inst.target_level())?;
            let rep = verify_hypotheses(&inst, levels, a.samples, &mut rng);
            let code = if rep.all_pass { 0 } else { CODE_CERTIFICATE };
            out.push(with_config(serde_json::to_value(&rep).unwrap(), cfg), code);
        }
        GroupKind::Fabgup | GroupKind::FabgupExt => {
            let inst = fg_instance(cfg)?;
            let levels = parse_levels(a.levels.as_deref(), inst.target_level())?;
            let rep = verify_hypotheses(&inst, levels.clone(), a.samples, &mut rng);
            let code = if rep.all_pass { 0 } else { CODE_CERTIFICATE };
            out.push(with_config(serde_json::to_value(&rep).unwrap(), cfg), code);
            if a.residues {
                residue_records(cfg, &inst, &levels, &mut out)?;
            }
        }
        GroupKind::Cyclic => return Err(Error::Parse("verify needs --group sl2, fabgup or fabgup-ext".into())),
    }
    Ok(out)
}

fn residue_records(cfg: &RunConfig, inst: &FgInstance, levels: &[usize], out: &mut Outcome) -> Result<()> {
    const LIMIT: usize = 729;
    for &l in levels {
        // one block: every class of the block quotient
        let reps = inst.class_reps(l, 1, LIMIT)?;
        let rep = exhaustive_residue_check(inst, l, &reps, LIMIT)?;
        let code = if rep.ok() { 0 } else { CODE_CERTIFICATE };
        let mut v = serde_json::to_value(&rep).unwrap();
        v["scope"] = json!("block");
        out.push(with_config(v, cfg), code);
    }
    Ok(())
}

fn diameter_record<Q: Quotient + Clone>(q: Q, gens: Vec<Q::Elem>, ser: Vec<String>, threshold: usize) -> Result<Value> {
    let directed = directed_diameter(q.clone(), gens.clone(), threshold)?;
    let undirected = undirected_diameter(q.clone(), gens, threshold)?;
    Ok(json!({
        "group": q.describe(),
        "size": q.order().map(|o| o.to_string()),
        "generators": ser,
        "directed_diameter": directed,
        "undirected_diameter": undirected,
    }))
}

pub fn diameter(cfg: &RunConfig) -> Result<Outcome> {
    let mut rng = rng_for(cfg);
    let rec = match cfg.group.kind {
        GroupKind::Sl2 => {
            let q = sl2_quotient(cfg)?;
            let gens = sl2_gens(cfg, q.field, q.m, &mut rng)?;
            let ser = gens.iter().map(|g| g.serialize()).collect();
            diameter_record(q, gens, ser, cfg.threshold)?
        }
        GroupKind::Fabgup | GroupKind::FabgupExt => {
            let q = fg_quotient(cfg)?;
            let gens = fg_gens(cfg, q.depth, &mut rng)?;
            let ser = gens.iter().map(Portrait::serialize).collect();
            diameter_record(q, gens, ser, cfg.threshold)?
        }
        GroupKind::Cyclic => {
            let gens = cyclic_gens(cfg, &mut rng)?;
            let ser = gens.iter().map(u64::to_string).collect();
            diameter_record(Cyclic::new(cfg.group.order), gens, ser, cfg.threshold)?
        }
    };
    let mut out = Outcome::default();
    out.push(with_config(rec, cfg), 0);
    Ok(out)
}

pub fn spectrum(cfg: &RunConfig) -> Result<Outcome> {
    let mut rng = rng_for(cfg);
    let (rep, ser): (_, Vec<String>) = match cfg.group.kind {
        GroupKind::Sl2 => {
            let q = sl2_quotient(cfg)?;
            let gens = sl2_gens(cfg, q.field, q.m, &mut rng)?;
            let ser = gens.iter().map(|g| g.serialize()).collect();
            (spectral_report(q, &gens, cfg.threshold)?, ser)
        }
        GroupKind::Fabgup | GroupKind::FabgupExt => {
            let q = fg_quotient(cfg)?;
            let gens = fg_gens(cfg, q.depth, &mut rng)?;
            let ser = gens.iter().map(Portrait::serialize).collect();
            (spectral_report(q, &gens, cfg.threshold)?, ser)
        }
        GroupKind::Cyclic => {
            let gens = cyclic_gens(cfg, &mut rng)?;
            let ser = gens.iter().map(u64::to_string).collect();
            (spectral_report(Cyclic::new(cfg.group.order), &gens, cfg.threshold)?, ser)
        }
    };
    let mut v = serde_json::to_value(&rep).unwrap();
    v["generators"] = json!(ser);
    let mut out = Outcome::default();
    out.push(with_config(v, cfg), 0);
    Ok(out)
}

fn instance_bounds<I: Instance>(inst: &I, n_gens: usize, a: &BoundsArgs) -> Result<Value> {
    let target = inst.target_level();
    let idx = inst
        .index_n1()
        .ok_or_else(|| Error::Parse("index of N_1 unknown".into()))?;
    let big_idx = BigUint::from(idx);
    let aa: Vec<u64> = (1..target).map(|i| inst.a_n(i) as u64).collect();
    let kk: Vec<u64> = (1..target).map(|i| inst.k_n(i) as u64).collect();
    let per_level: Vec<Value> = (1..=target)
        .map(|n| {
            let (an, kn) = (&aa[..n - 1], &kk[..n - 1]);
            let mut v = json!({
                "n": n,
                "l_n": bound_l(&big_idx, an, kn).to_string(),
            });
            if let Some(n0) = a.n0 {
                v["L_n"] = json!(bound_refined(&big_idx, an, kn, n0).to_string());
            }
            v
        })
        .collect();
    if a.n0 == Some(0) {
        return Err(Error::Parse("n0 must be at least 1".into()));
    }
    Ok(json!({
        "group": inst.describe(),
        "index_n1": idx.to_string(),
        "A": aa,
        "k": kk,
        "levels": per_level,
        "runtime": bound_runtime(a.f, &aa, &kk, n_gens as u64, idx, a.c),
    }))
}

pub fn bounds(cfg: &RunConfig, a: &BoundsArgs) -> Result<Outcome> {
    let mut rng = rng_for(cfg);
    let h = headline_constants();
    let inst = match cfg.group.kind {
        GroupKind::Sl2 => {
            let inst = sl2_instance(cfg)?;
            let n = sl2_gens(cfg, inst.field, inst.depth(), &mut rng)?.len();
            Some(instance_bounds(&inst, n, a)?)
        }
        GroupKind::Fabgup | GroupKind::FabgupExt => {
            let inst = fg_instance(cfg)?;
            let n = fg_gens(cfg, inst.depth(), &mut rng)?.len();
            Some(instance_bounds(&inst, n, a)?)
        }
        GroupKind::Cyclic => None,
    };
    let padic = match &a.padic {
        None => None,
        Some(s) => {
            let bad = || Error::Parse(format!("expected p:index_H2:n, found {s:?}"));
            let p: Vec<u64> = s.split(':').map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?;
            if p.len() != 3 || p[0] < 2 || p[2] < 1 {
                return Err(bad());
            }
            Some(json!({ "p": p[0], "index_h2": p[1], "n": p[2], "bound": padic_bound(p[0], p[1], p[2] as u32).to_string() }))
        }
    };
    let rec = json!({
        "constants": h,
        "fg_period": {
            "A": FG_PERIOD_A,
            "prod_1_plus_3A": h.c_tilde,
            "prod_1_plus_A": h.c_tilde_prime,
        },
        "instance": inst,
        "padic": padic,
    });
    let mut out = Outcome::default();
    out.push(with_config(rec, cfg), 0);
    Ok(out)
}
