//! Element and generator handling per group family.

use rand::{Rng, RngCore};

use skp_core::algebra::{random_sl2, Gf2m, Mat2};
use skp_core::fabgup::FgInstance;
use skp_core::sl2::{canonical_gens, parse_schedule, Sl2Instance, Sl2Quotient};
use skp_core::tree::{Portrait, StabQuotient};
use skp_core::{Error, Instance, Result};

use crate::config::{GenSpec, GroupKind, RunConfig};

pub const DEFAULT_SCHEDULE: &str = "auto:3:2";
pub const DEFAULT_FG_DEPTH: usize = 5;
pub const DEFAULT_SL2_QUOTIENT_DEPTH: usize = 3;
pub const DEFAULT_FG_QUOTIENT_DEPTH: usize = 2;

/// SL2 entries are `n:c0,c1,…` with hex coefficients; a bare coefficient
/// list is padded with zeros to the modulus degree `m`.
pub fn parse_mat(field: Gf2m, m: usize, s: &str) -> Result<Mat2> {
    let parts: Vec<&str> = s.split(';').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::Parse(format!("expected four ';'-separated entries, found {}", parts.len())));
    }
    let full: Vec<String> = parts
        .iter()
        .map(|p| {
            if p.contains(':') {
                return Ok(p.to_string());
            }
            let mut cs: Vec<&str> = p.split(',').map(str::trim).filter(|c| !c.is_empty()).collect();
            if cs.len() > m {
                return Err(Error::Parse(format!("entry {p:?} has more than {m} coefficients")));
            }
            cs.resize(m, "0");
            Ok(format!("{m}:{}", cs.join(",")))
        })
        .collect::<Result<_>>()?;
    let g = Mat2::parse(field, &full.join(";"))?;
    if g.modulus_degree() != m {
        return Err(Error::DepthMismatch {
            left: g.modulus_degree(),
            right: m,
        });
    }
    Ok(g)
}

pub fn parse_portrait(depth: usize, s: &str) -> Result<Portrait> {
    let s = s.trim();
    if s.contains(':') {
        let p = Portrait::parse(s)?;
        if p.depth() != depth {
            return Err(Error::DepthMismatch {
                left: p.depth(),
                right: depth,
            });
        }
        Ok(p)
    } else {
        Portrait::from_word(depth, s)
    }
}

pub fn random_portrait(depth: usize, rng: &mut dyn RngCore) -> Portrait {
    let w: String = (0..8 * depth + 8).map(|_| ['a', 'b'][rng.gen_range(0..2)]).collect();
    Portrait::from_word(depth, &w).expect("letters a, b")
}

fn read_lines(path: &str) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

/// Applies a generator spec given the canonical set, a sampler and a parser.
pub fn build_gens<E>(
    spec: &GenSpec,
    canonical: Vec<E>,
    mut sample: impl FnMut(&mut dyn RngCore) -> E,
    parse: impl Fn(&str) -> Result<E>,
    rng: &mut dyn RngCore,
) -> Result<Vec<E>> {
    Ok(match spec {
        GenSpec::Canonical => canonical,
        GenSpec::CanonicalRandom { k } => {
            let mut g = canonical;
            g.extend((0..*k).map(|_| sample(rng)));
            g
        }
        GenSpec::Random { k } => (0..*k).map(|_| sample(rng)).collect(),
        GenSpec::File { path } => {
            let g: Vec<E> = read_lines(path)?.iter().map(|l| parse(l)).collect::<Result<_>>()?;
            if g.is_empty() {
                return Err(Error::Parse(format!("{path}: no generators")));
            }
            g
        }
    })
}

pub fn sl2_instance(cfg: &RunConfig) -> Result<Sl2Instance> {
    let spec = cfg.group.schedule.as_deref().unwrap_or(DEFAULT_SCHEDULE);
    let text = if spec.starts_with("auto:") {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| Error::Io(format!("{spec}: {e}")))?
    };
    let inst = Sl2Instance::new(parse_schedule(&text, cfg.group.q, 2)?)?;
    if let Some(d) = cfg.group.depth {
        if d != inst.depth() {
            return Err(Error::DepthMismatch {
                left: d,
                right: inst.depth(),
            });
        }
    }
    Ok(inst)
}

pub fn fg_instance(cfg: &RunConfig) -> Result<FgInstance> {
    let d = cfg.group.depth.unwrap_or(DEFAULT_FG_DEPTH);
    match cfg.group.kind {
        GroupKind::FabgupExt => FgInstance::extended(d),
        _ => FgInstance::new(d),
    }
}

pub fn sl2_quotient(cfg: &RunConfig) -> Result<Sl2Quotient> {
    let m = cfg.group.depth.unwrap_or(DEFAULT_SL2_QUOTIENT_DEPTH);
    if m == 0 {
        return Err(Error::Parse("depth must be positive".into()));
    }
    Ok(Sl2Quotient {
        field: Gf2m::with_order(cfg.group.q)?,
        m,
    })
}

pub fn fg_quotient(cfg: &RunConfig) -> Result<StabQuotient> {
    let depth = cfg.group.depth.unwrap_or(DEFAULT_FG_QUOTIENT_DEPTH);
    if !(1..=16).contains(&depth) {
        return Err(Error::Parse(format!("portrait depth {depth} out of range 1..=16")));
    }
    Ok(StabQuotient { depth })
}

pub fn sl2_gens(cfg: &RunConfig, field: Gf2m, m: usize, rng: &mut dyn RngCore) -> Result<Vec<Mat2>> {
    build_gens(
        &cfg.gens,
        canonical_gens(field, m),
        |r| random_sl2(field, m, r),
        |s| parse_mat(field, m, s),
        rng,
    )
}

pub fn fg_gens(cfg: &RunConfig, depth: usize, rng: &mut dyn RngCore) -> Result<Vec<Portrait>> {
    build_gens(
        &cfg.gens,
        vec![Portrait::gen_a(depth), Portrait::gen_b(depth)],
        |r| random_portrait(depth, r),
        |s| parse_portrait(depth, s),
        rng,
    )
}

pub fn cyclic_gens(cfg: &RunConfig, rng: &mut dyn RngCore) -> Result<Vec<u64>> {
    let n = cfg.group.order;
    build_gens(
        &cfg.gens,
        vec![1 % n],
        |r| r.gen_range(0..n),
        |s| {
            s.parse::<u64>()
                .map(|x| x % n)
                .map_err(|_| Error::Parse(format!("bad residue {s:?}")))
        },
        rng,
    )
}

/// Navigation inputs: `identity`, `random:N`, `stab:M:N` (fabgup),
/// `file:PATH`, or a literal element.
pub fn expand_inputs<I: Instance>(
    inst: &I,
    specs: &[String],
    parse: impl Fn(&str) -> Result<I::Elem>,
    stab: impl Fn(usize, &mut dyn RngCore) -> Result<I::Elem>,
    rng: &mut dyn RngCore,
) -> Result<Vec<(String, I::Elem)>> {
    let mut out = Vec::new();
    for s in specs {
        if s == "identity" {
            out.push((s.clone(), inst.identity()));
        } else if let Some(n) = s.strip_prefix("random:") {
            let n: usize = n.parse().map_err(|_| Error::Parse(format!("bad count in {s:?}")))?;
            for _ in 0..n {
                let g = inst.sample_group(rng);
                out.push((inst.serialize(&g), g));
            }
        } else if let Some(rest) = s.strip_prefix("stab:") {
            let bad = || Error::Parse(format!("expected stab:M:N, found {s:?}"));
            let (m, n) = rest.split_once(':').ok_or_else(bad)?;
            let (m, n): (usize, usize) = (m.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?);
            for _ in 0..n {
                let g = stab(m, rng)?;
                out.push((inst.serialize(&g), g));
            }
        } else if let Some(path) = s.strip_prefix("file:") {
            for l in read_lines(path)? {
                let g = parse(&l)?;
                out.push((l, g));
            }
        } else {
            out.push((s.clone(), parse(s)?));
        }
    }
    Ok(out)
}
