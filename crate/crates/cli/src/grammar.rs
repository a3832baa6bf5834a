//! The `--walker` mini-grammar.
//!
//! ```text
//! walker  := name ":" pair ("," pair)* ["," "sampler=" sampler]
//! name    := "random" | "wl" | "halk"
//! pair    := "depth=" n | "max=" n | "reverse=" bool | "seed=" n
//!          | "iterations=" n | "threshold=" x
//! sampler := sname [":" spair ("," spair)*]
//! spair   := "alpha=" x | "inverse=" bool
//! ```
//!
//! `sampler=` must come last since its own parameters are comma-separated.

use std::fmt;
use std::str::FromStr;

use kgstroll::{SamplerModel, SamplerStrategy, WalkStrategy, WalkerConfig, WalkerSpec};

pub const DEFAULT_HALK_THRESHOLD: f64 = 0.001;
pub const DEFAULT_WL_ITERATIONS: usize = 4;

/// A parsed `--walker` value. `seed` is `None` when the global seed applies.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerArg {
    pub walker: WalkerConfig,
    pub seed: Option<u64>,
    pub sampler: Option<SamplerModel>,
}

impl WalkerArg {
    pub fn into_spec(self, global_seed: u64) -> WalkerSpec {
        WalkerSpec::new(self.walker.with_seed(self.seed.unwrap_or(global_seed)), self.sampler)
    }
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("invalid value {value:?} for {key}"))
}

fn boolean(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("{key} expects true or false, got {value:?}")),
    }
}

fn split_pair(pair: &str) -> Result<(&str, &str), String> {
    pair.split_once('=').ok_or_else(|| format!("expected key=value, got {pair:?}"))
}

fn parse_sampler(text: &str) -> Result<SamplerModel, String> {
    let (name, params) = text.split_once(':').unwrap_or((text, ""));
    let strategy = SamplerStrategy::from_name(name).ok_or_else(|| format!("unknown sampler {name:?}"))?;
    let mut model = SamplerModel::new(strategy);
    for pair in params.split(',').filter(|p| !p.is_empty()) {
        match split_pair(pair)? {
            ("alpha", v) if strategy == SamplerStrategy::PageRank => model.alpha = number("alpha", v)?,
            ("inverse", v) => model.inverse = boolean("inverse", v)?,
            (k, _) => return Err(format!("unknown key {k:?} for sampler {name}")),
        }
    }
    Ok(model)
}

impl FromStr for WalkerArg {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let (name, rest) = text.split_once(':').ok_or("expected name:key=value,...")?;
        let (params, sampler) = match rest.find("sampler=") {
            Some(0) => ("", Some(&rest["sampler=".len()..])),
            Some(i) if rest.as_bytes()[i - 1] == b',' => (&rest[..i - 1], Some(&rest[i + "sampler=".len()..])),
            _ => (rest, None),
        };
        let mut depth = None;
        let mut max_walks = None;
        let mut reverse = false;
        let mut seed = None;
        let mut iterations = None;
        let mut threshold = None;
        for pair in params.split(',').filter(|p| !p.is_empty()) {
            match split_pair(pair)? {
                ("depth", v) => depth = Some(number("depth", v)?),
                ("max", v) => max_walks = Some(number("max", v)?),
                ("reverse", v) => reverse = boolean("reverse", v)?,
                ("seed", v) => seed = Some(number("seed", v)?),
                ("iterations", v) if name == "wl" => iterations = Some(number("iterations", v)?),
                ("threshold", v) if name == "halk" => threshold = Some(number("threshold", v)?),
                (k, _) => return Err(format!("unknown key {k:?} for walker {name}")),
            }
        }
        let depth = depth.ok_or_else(|| format!("walker {name} needs depth="))?;
        let walker = match name {
            "random" => WalkerConfig::random(depth, max_walks),
            "wl" => WalkerConfig::wl(depth, max_walks, iterations.unwrap_or(DEFAULT_WL_ITERATIONS)),
            "halk" => WalkerConfig::halk(depth, max_walks, threshold.unwrap_or(DEFAULT_HALK_THRESHOLD)),
            _ => return Err(format!("unknown walker {name:?}")),
        }
        .with_reverse(reverse);
        walker.validate().map_err(|e| e.to_string())?;
        let sampler = sampler.map(parse_sampler).transpose()?;
        Ok(WalkerArg { walker, seed, sampler })
    }
}

impl fmt::Display for WalkerArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.walker)?;
        if let Some(seed) = self.seed {
            write!(f, ",seed={seed}")?;
        }
        if let Some(s) = &self.sampler {
            write!(f, ",sampler={s}")?;
        }
        Ok(())
    }
}

/// Walk strategy name as used in logs and the walk dump.
pub fn strategy_name(w: &WalkerConfig) -> &'static str {
    match w.strategy {
        WalkStrategy::Random => "random",
        WalkStrategy::Wl { .. } => "wl",
        WalkStrategy::Halk { .. } => "halk",
    }
}
