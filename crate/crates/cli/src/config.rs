use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use skp_core::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    /// SL2(F_q[[t]]) with a β schedule
    Sl2,
    /// Fabrykowski-Gupta group, standard chain (base Γ/Stab(4))
    Fabgup,
    /// Fabrykowski-Gupta group, chain extended upward (base of order 3^12)
    FabgupExt,
    /// Z/order, for quotient-only commands
    Cyclic,
}

/// Options shared by every command.
#[derive(Args, Clone, Debug)]
pub struct Opts {
    #[arg(long, global = true, value_enum, default_value = "sl2")]
    pub group: GroupKind,
    /// Field order for sl2 (a power of two)
    #[arg(long, global = true, default_value_t = 2)]
    pub q: u32,
    /// Portrait depth (fabgup) or quotient depth m of SL2(F_q[t]/t^m) for
    /// diameter and spectrum
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// `auto:β1[:steps]`, or a path to a JSON schedule
    #[arg(long, global = true)]
    pub schedule: Option<String>,
    /// Order of the cyclic group
    #[arg(long, global = true, default_value_t = 3)]
    pub order: u64,
    /// `canonical`, `canonical+random:k`, `random:k` or `file:PATH`
    #[arg(long, global = true, default_value = "canonical")]
    pub gens: String,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Element cap for tables (default 10^7, 10^6 for spectrum)
    #[arg(long, global = true)]
    pub threshold: Option<usize>,
    /// Write records here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenSpec {
    Canonical,
    CanonicalRandom { k: usize },
    Random { k: usize },
    File { path: String },
}

impl GenSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad generator spec {s:?}"));
        if s == "canonical" {
            return Ok(GenSpec::Canonical);
        }
        if let Some(k) = s.strip_prefix("canonical+random:") {
            return Ok(GenSpec::CanonicalRandom { k: k.parse().map_err(|_| bad())? });
        }
        if let Some(k) = s.strip_prefix("random:") {
            let k: usize = k.parse().map_err(|_| bad())?;
            return if k == 0 { Err(bad()) } else { Ok(GenSpec::Random { k }) };
        }
        if let Some(p) = s.strip_prefix("file:") {
            return Ok(GenSpec::File { path: p.to_string() });
        }
        Err(bad())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSel {
    pub kind: GroupKind,
    pub q: u32,
    pub depth: Option<usize>,
    pub schedule: Option<String>,
    pub order: u64,
}

/// Everything that determines a run's output, echoed into each record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub group: GroupSel,
    pub gens: GenSpec,
    pub seed: u64,
    pub threshold: usize,
    pub out: Option<String>,
}

impl RunConfig {
    pub fn new(command: &str, o: &Opts, default_threshold: usize) -> Result<Self> {
        Ok(RunConfig {
            command: command.to_string(),
            group: GroupSel {
                kind: o.group,
                q: o.q,
                depth: o.depth,
                schedule: o.schedule.clone(),
                order: o.order,
            },
            gens: GenSpec::parse(&o.gens)?,
            seed: o.seed,
            threshold: o.threshold.unwrap_or(default_threshold),
            out: o.out.as_ref().map(|p| p.display().to_string()),
        })
    }
}
