//! Run configuration: defaults, then a TOML file, then command-line flags.
//!
//! ```toml
//! seed = "2-2-2"
//! rng_seed = 7
//! steps = 400000
//! snapshot_every = 50000
//! out = "runs/triangles"
//! index = "grid"
//!
//! [free]
//! 2 = 54
//!
//! [physics]
//! container_width = 40.0
//!
//! [rules]
//! fold_limit = 4000
//! ```
//!
//! Every key must be one the defaults know about. The fully resolved
//! configuration is written next to a run's output so it can be replayed.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::{Table, Value};

use crate::engine::FreeCounts;
use crate::geometry::{MachineBody, MachineType};
use crate::params::{SimParamError, SimParams};
use crate::physics::{IndexMode, PhysicsParams};
use crate::rulebook::RuleParams;
use crate::seedlab::{parse_seed, SeedParseError, SeedSpec};

/// Environment variable naming a config file when `--config` is absent.
pub const CONFIG_ENV: &str = "JV2_CONFIG";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: SeedSpec,
    pub free: FreeCounts,
    pub rng_seed: u64,
    pub steps: u64,
    /// Write a checkpoint and a frame every this many steps; 0 for never.
    pub snapshot_every: u64,
    pub out: PathBuf,
    pub index: IndexMode,
    pub sim: SimParams,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("no seed given (set `seed` in the config file or pass --seed)")]
    MissingSeed,
    #[error("bad seed: {0}")]
    Seed(#[from] SeedParseError),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: {message}")]
    Value { key: String, message: String },
    #[error("free machine count for type `{key}` is invalid: {message}")]
    FreeCount { key: String, message: String },
    #[error("cannot read config file {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("config file {path} is not valid TOML: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error(transparent)]
    Params(#[from] SimParamError),
}

/// Values given on the command line. `None` and empty lists leave the
/// lower layers alone.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub seed: Option<String>,
    /// `TYPE=COUNT`.
    pub free: Vec<String>,
    pub steps: Option<u64>,
    pub rng_seed: Option<u64>,
    /// Width and height.
    pub container: Option<(f64, f64)>,
    pub snapshot_every: Option<u64>,
    pub out: Option<PathBuf>,
    /// `KEY=VALUE`; KEY is `section.name` or a bare name unique across sections.
    pub params: Vec<String>,
}

#[derive(Serialize)]
struct Defaults {
    rng_seed: u64,
    steps: u64,
    snapshot_every: u64,
    out: String,
    index: IndexMode,
    physics: PhysicsParams,
    rules: RuleParams,
    body: MachineBody,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Resolved {
    rng_seed: u64,
    steps: u64,
    snapshot_every: u64,
    out: PathBuf,
    index: IndexMode,
    physics: PhysicsParams,
    rules: RuleParams,
    body: MachineBody,
}

const SECTIONS: [&str; 3] = ["physics", "rules", "body"];

fn default_table() -> Table {
    let d = Defaults {
        rng_seed: 1,
        steps: 100_000,
        snapshot_every: 0,
        out: "foldmesh-out".to_string(),
        index: IndexMode::Grid,
        physics: PhysicsParams::default(),
        rules: RuleParams::default(),
        body: MachineBody::default(),
    };
    match Value::try_from(d).expect("defaults serialise") {
        Value::Table(t) => t,
        _ => unreachable!("defaults serialise to a table"),
    }
}

/// `--config` if given, else the file named by the environment variable.
pub fn config_path(flag: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf).or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from))
}

/// Coerce `v` to the type of `like`, allowing integers where floats are expected.
fn coerce(key: &str, like: &Value, v: Value) -> Result<Value, ConfigError> {
    let bad = |v: &Value| ConfigError::Value { key: key.to_string(), message: format!("expected {}, got {}", like.type_str(), v.type_str()) };
    match (like, v) {
        (Value::Float(_), Value::Integer(i)) => Ok(Value::Float(i as f64)),
        (Value::Table(_), v) => Err(bad(&v)),
        (l, v) if l.same_type(&v) => Ok(v),
        (_, v) => Err(bad(&v)),
    }
}

fn merge(base: &mut Table, layer: Table, prefix: &str) -> Result<(), ConfigError> {
    for (k, v) in layer {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        if prefix.is_empty() && (k == "seed" || k == "free") {
            base.insert(k, v);
            continue;
        }
        let Some(existing) = base.get_mut(&k) else {
            return Err(ConfigError::UnknownKey(key));
        };
        match (existing, v) {
            (Value::Table(b), Value::Table(l)) => merge(b, l, &key)?,
            (existing, v) => *existing = coerce(&key, existing, v)?,
        }
    }
    Ok(())
}

/// Finds the dotted path for a `--param` key.
fn param_path(base: &Table, key: &str) -> Result<Vec<String>, ConfigError> {
    let key = key.trim();
    if let Some((section, name)) = key.split_once('.') {
        let section = section.to_ascii_lowercase();
        let name = name.to_ascii_lowercase();
        return match base.get(&section) {
            Some(Value::Table(t)) if t.contains_key(&name) => Ok(vec![section, name]),
            _ => Err(ConfigError::UnknownKey(key.to_string())),
        };
    }
    let name = key.to_ascii_lowercase();
    if base.contains_key(&name) && !SECTIONS.contains(&name.as_str()) {
        return Ok(vec![name]);
    }
    let hits: Vec<&str> = SECTIONS.iter().copied().filter(|s| matches!(base.get(*s), Some(Value::Table(t)) if t.contains_key(&name))).collect();
    match hits.as_slice() {
        [one] => Ok(vec![one.to_string(), name]),
        [] => Err(ConfigError::UnknownKey(key.to_string())),
        _ => Err(ConfigError::Value { key: key.to_string(), message: format!("ambiguous; write one of {}", hits.iter().map(|s| format!("{s}.{name}")).collect::<Vec<_>>().join(", ")) }),
    }
}

fn parse_scalar(text: &str) -> Value {
    let text = text.trim();
    if let Ok(i) = text.parse::<i64>() {
        Value::Integer(i)
    } else if let Ok(f) = text.parse::<f64>() {
        Value::Float(f)
    } else if let Ok(b) = text.parse::<bool>() {
        Value::Boolean(b)
    } else {
        Value::String(text.trim_matches('"').to_string())
    }
}

fn set_path(base: &mut Table, path: &[String], v: Value) -> Result<(), ConfigError> {
    let mut layer = Table::new();
    let mut cur = &mut layer;
    for p in &path[..path.len() - 1] {
        cur = cur.entry(p.clone()).or_insert_with(|| Value::Table(Table::new())).as_table_mut().expect("fresh table");
    }
    cur.insert(path[path.len() - 1].clone(), v);
    merge(base, layer, "")
}

fn free_counts(v: Option<Value>) -> Result<FreeCounts, ConfigError> {
    let mut free = FreeCounts::new();
    let Some(v) = v else { return Ok(free) };
    let Value::Table(t) = v else {
        return Err(ConfigError::Value { key: "free".into(), message: "expected a table of TYPE = COUNT".into() });
    };
    for (k, v) in t {
        let bad = |message: &str| ConfigError::FreeCount { key: k.clone(), message: message.to_string() };
        let t: MachineType = k
            .trim()
            .parse::<u8>()
            .ok()
            .and_then(|n| MachineType::try_from(n).ok())
            .ok_or_else(|| bad("type must be 1, 2, 3 or 4"))?;
        let n = v.as_integer().ok_or_else(|| bad("count must be an integer"))?;
        let n = u32::try_from(n).map_err(|_| bad("count must be non-negative"))?;
        free.insert(t, n);
    }
    Ok(free)
}

fn read_file(path: &Path) -> Result<Table, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
    text.parse::<Table>().map_err(|source| ConfigError::Parse { path: path.to_path_buf(), source })
}

/// Defaults, overlaid by `file` (if any), overlaid by `flags`.
pub fn load_config(file: Option<&Path>, flags: &ConfigOverrides) -> Result<RunConfig, ConfigError> {
    let layer = file.map(read_file).transpose()?;
    resolve(layer, flags)
}

/// Same as [`load_config`] with the file already parsed.
pub fn load_config_str(toml_text: &str, flags: &ConfigOverrides) -> Result<RunConfig, ConfigError> {
    let t = toml_text.parse::<Table>().map_err(|source| ConfigError::Parse { path: PathBuf::from("<string>"), source })?;
    resolve(Some(t), flags)
}

fn resolve(file: Option<Table>, flags: &ConfigOverrides) -> Result<RunConfig, ConfigError> {
    let mut t = default_table();
    if let Some(file) = file {
        merge(&mut t, file, "")?;
    }

    if let Some(seed) = &flags.seed {
        t.insert("seed".into(), Value::String(seed.clone()));
    }
    if !flags.free.is_empty() {
        let free = t.entry("free").or_insert_with(|| Value::Table(Table::new()));
        let Value::Table(free) = free else {
            return Err(ConfigError::Value { key: "free".into(), message: "expected a table".into() });
        };
        for item in &flags.free {
            let (k, v) = item.split_once('=').ok_or_else(|| ConfigError::FreeCount { key: item.clone(), message: "expected TYPE=COUNT".into() })?;
            let n: i64 = v.trim().parse().map_err(|_| ConfigError::FreeCount { key: k.trim().into(), message: format!("`{}` is not an integer", v.trim()) })?;
            free.insert(k.trim().to_string(), Value::Integer(n));
        }
    }
    let simple: [(&str, Option<Value>); 4] = [
        ("steps", flags.steps.map(|v| Value::Integer(v as i64))),
        ("rng_seed", flags.rng_seed.map(|v| Value::Integer(v as i64))),
        ("snapshot_every", flags.snapshot_every.map(|v| Value::Integer(v as i64))),
        ("out", flags.out.as_ref().map(|p| Value::String(p.display().to_string()))),
    ];
    for (k, v) in simple {
        if let Some(v) = v {
            set_path(&mut t, &[k.to_string()], v)?;
        }
    }
    if let Some((w, h)) = flags.container {
        set_path(&mut t, &["physics".into(), "container_width".into()], Value::Float(w))?;
        set_path(&mut t, &["physics".into(), "container_height".into()], Value::Float(h))?;
    }
    for p in &flags.params {
        let (k, v) = p.split_once('=').ok_or_else(|| ConfigError::Value { key: p.clone(), message: "expected KEY=VALUE".into() })?;
        let path = param_path(&t, k)?;
        set_path(&mut t, &path, parse_scalar(v))?;
    }

    let seed = match t.remove("seed") {
        Some(Value::String(s)) => parse_seed(&s)?,
        Some(other) => return Err(ConfigError::Value { key: "seed".into(), message: format!("expected a string, got {}", other.type_str()) }),
        None => return Err(ConfigError::MissingSeed),
    };
    let free = free_counts(t.remove("free"))?;
    let r: Resolved = Value::Table(t).try_into().map_err(|e: toml::de::Error| ConfigError::Value { key: "config".into(), message: e.message().to_string() })?;
    let sim = SimParams { physics: r.physics, rules: r.rules, body: r.body };
    sim.validate()?;
    Ok(RunConfig { seed, free, rng_seed: r.rng_seed, steps: r.steps, snapshot_every: r.snapshot_every, out: r.out, index: r.index, sim })
}

impl RunConfig {
    /// A config with defaults everywhere except the seed and soup.
    pub fn new(seed: SeedSpec, free: FreeCounts) -> Self {
        let flags = ConfigOverrides { seed: Some(seed.to_string()), ..Default::default() };
        let mut cfg = resolve(None, &flags).expect("defaults are valid");
        cfg.free = free;
        cfg
    }

    /// Every value spelled out, in the file format [`load_config`] reads.
    pub fn to_toml(&self) -> String {
        let d = Defaults {
            rng_seed: self.rng_seed,
            steps: self.steps,
            snapshot_every: self.snapshot_every,
            out: self.out.display().to_string(),
            index: self.index,
            physics: self.sim.physics,
            rules: self.sim.rules,
            body: self.sim.body,
        };
        let mut t = match Value::try_from(d).expect("config serialises") {
            Value::Table(t) => t,
            _ => unreachable!(),
        };
        let mut top = Table::new();
        top.insert("seed".into(), Value::String(self.seed.to_string()));
        for k in ["rng_seed", "steps", "snapshot_every", "out", "index"] {
            top.insert(k.into(), t.remove(k).expect("scalar key"));
        }
        top.insert(
            "free".into(),
            Value::Table(self.free.iter().map(|(ty, n)| (ty.to_string(), Value::Integer(i64::from(*n)))).collect()),
        );
        top.extend(t);
        toml::to_string(&top).expect("table serialises")
    }
}
