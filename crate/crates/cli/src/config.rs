//! Run configuration: defaults, overridden by a key=value config file,
//! overridden by command-line flags. Flags win.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use oeuvre_core::expander::Method;
use oeuvre_core::recmatch::MatchPolicy;
use oeuvre_core::seeder::{CommonNameThresholds, Strategy};
use oeuvre_core::synthgen::SynthConfig;

use crate::RunArgs;

/// A configuration problem: bad key, bad value, missing required input.
/// Mapped to its own exit code, distinct from I/O and data validation.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(ConfigError(msg.into()))
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub registry: Option<PathBuf>,
    pub corpus_a: Option<PathBuf>,
    pub corpus_b: Option<PathBuf>,
    pub aliases: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub strategies: Vec<Strategy>,
    pub expansions: Vec<Method>,
    pub window: Option<(i32, i32)>,
    pub xid_cap: usize,
    pub thresholds: CommonNameThresholds,
    pub policy: MatchPolicy,
    /// Cluster expansion anchored to seed clusters (the default) or free.
    pub anchored: bool,
    pub out: PathBuf,
    pub synth: SynthConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            registry: None,
            corpus_a: None,
            corpus_b: None,
            aliases: None,
            gold: None,
            strategies: Strategy::ALL.to_vec(),
            expansions: vec![Method::Meso, Method::Micro, Method::Xid],
            window: None,
            xid_cap: 10,
            thresholds: CommonNameThresholds::default(),
            policy: MatchPolicy::default(),
            anchored: true,
            out: PathBuf::from("out"),
            synth: SynthConfig::default(),
        }
    }
}

const KNOWN_KEYS: &[&str] = &[
    "registry",
    "corpus_a",
    "corpus_b",
    "aliases",
    "gold",
    "strategies",
    "expansions",
    "window",
    "xid_cap",
    "common_top_rp",
    "common_top_dl",
    "common_top_al",
    "match_require_journal",
    "match_require_year",
    "match_require_first_page",
    "match_title_ratio",
    "anchored",
    "out",
    "rng_seed",
    "n_persons",
    "n_pubs",
    "homonym_rate",
    "email_coverage",
    "linkage_coverage",
    "alias_coverage",
    "b_coverage",
    "xid_split_rate",
    "cluster_count_meso",
    "clusters_per_meso",
    "year_start",
    "year_end",
];

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .parse::<T>()
        .map_err(|e| config_error(format!("key `{key}`: cannot parse `{value}`: {e}")))
}

pub fn parse_strategies(list: &str) -> Result<Vec<Strategy>> {
    let mut out = Vec::new();
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let strategy = Strategy::from_str(token)
            .map_err(|_| config_error(format!("unknown seed strategy `{token}`")))?;
        if !out.contains(&strategy) {
            out.push(strategy);
        }
    }
    if out.is_empty() {
        return Err(config_error("at least one seed strategy must be enabled"));
    }
    Ok(out)
}

pub fn parse_expansions(list: &str) -> Result<Vec<Method>> {
    let mut out = Vec::new();
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let method = Method::from_str(token)
            .map_err(|_| config_error(format!("unknown expansion method `{token}`")))?;
        if method == Method::Seed {
            return Err(config_error(
                "SEED is the expansion baseline, not a requestable method",
            ));
        }
        if !out.contains(&method) {
            out.push(method);
        }
    }
    Ok(out)
}

pub fn parse_window(raw: &str) -> Result<(i32, i32)> {
    let (a, b) = raw
        .split_once(':')
        .ok_or_else(|| config_error(format!("window `{raw}` must be Y1:Y2")))?;
    let start: i32 = parse_value("window", a.trim())?;
    let end: i32 = parse_value("window", b.trim())?;
    if start > end {
        return Err(config_error(format!(
            "window start {start} is after end {end}"
        )));
    }
    Ok((start, end))
}

fn apply_pair(config: &mut RunConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "registry" => config.registry = Some(PathBuf::from(value)),
        "corpus_a" => config.corpus_a = Some(PathBuf::from(value)),
        "corpus_b" => config.corpus_b = Some(PathBuf::from(value)),
        "aliases" => config.aliases = Some(PathBuf::from(value)),
        "gold" => config.gold = Some(PathBuf::from(value)),
        "strategies" => config.strategies = parse_strategies(value)?,
        "expansions" => config.expansions = parse_expansions(value)?,
        "window" => config.window = Some(parse_window(value)?),
        "xid_cap" => config.xid_cap = parse_value(key, value)?,
        "common_top_rp" => config.thresholds.rp = parse_value(key, value)?,
        "common_top_dl" => config.thresholds.dl = parse_value(key, value)?,
        "common_top_al" => config.thresholds.al = parse_value(key, value)?,
        "match_require_journal" => config.policy.require_journal = parse_value(key, value)?,
        "match_require_year" => config.policy.require_year = parse_value(key, value)?,
        "match_require_first_page" => config.policy.require_first_page = parse_value(key, value)?,
        "match_title_ratio" => config.policy.title_max_edit_ratio = parse_value(key, value)?,
        "anchored" => config.anchored = parse_value(key, value)?,
        "out" => config.out = PathBuf::from(value),
        "rng_seed" => config.synth.rng_seed = parse_value(key, value)?,
        "n_persons" => config.synth.n_persons = parse_value(key, value)?,
        "n_pubs" => config.synth.n_pubs = parse_value(key, value)?,
        "homonym_rate" => config.synth.homonym_rate = parse_value(key, value)?,
        "email_coverage" => config.synth.email_coverage = parse_value(key, value)?,
        "linkage_coverage" => config.synth.linkage_coverage = parse_value(key, value)?,
        "alias_coverage" => config.synth.alias_coverage = parse_value(key, value)?,
        "b_coverage" => config.synth.b_coverage = parse_value(key, value)?,
        "xid_split_rate" => config.synth.xid_split_rate = parse_value(key, value)?,
        "cluster_count_meso" => config.synth.cluster_count_meso = parse_value(key, value)?,
        "clusters_per_meso" => config.synth.clusters_per_meso = parse_value(key, value)?,
        "year_start" => config.synth.year_range.0 = parse_value(key, value)?,
        "year_end" => config.synth.year_range.1 = parse_value(key, value)?,
        other => {
            return Err(config_error(format!(
                "unknown configuration key `{other}`"
            )))
        }
    }
    Ok(())
}

/// Parses `key = value` lines; `#` starts a comment, blank lines are
/// ignored, unknown keys are errors.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    let mut pairs = BTreeMap::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            config_error(format!(
                "{}:{}: expected `key = value`, got `{line}`",
                path.display(),
                number + 1
            ))
        })?;
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(config_error(format!(
                "{}:{}: unknown configuration key `{key}`",
                path.display(),
                number + 1
            )));
        }
        if pairs.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(config_error(format!(
                "{}:{}: duplicate configuration key `{key}`",
                path.display(),
                number + 1
            )));
        }
    }
    Ok(pairs)
}

/// Defaults, then the config file, then flags.
pub fn resolve(args: &RunArgs) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    if let Some(path) = &args.config {
        for (key, value) in parse_config_file(path)? {
            apply_pair(&mut config, &key, &value)?;
        }
    }
    if let Some(v) = &args.registry {
        config.registry = Some(v.clone());
    }
    if let Some(v) = &args.corpus_a {
        config.corpus_a = Some(v.clone());
    }
    if let Some(v) = &args.corpus_b {
        config.corpus_b = Some(v.clone());
    }
    if let Some(v) = &args.aliases {
        config.aliases = Some(v.clone());
    }
    if let Some(v) = &args.gold {
        config.gold = Some(v.clone());
    }
    if let Some(v) = &args.strategies {
        config.strategies = parse_strategies(v)?;
    }
    if let Some(v) = &args.expansions {
        config.expansions = parse_expansions(v)?;
    }
    if let Some(v) = &args.window {
        config.window = Some(parse_window(v)?);
    }
    if let Some(v) = args.xid_cap {
        config.xid_cap = v;
    }
    if let Some(v) = args.common_top_rp {
        config.thresholds.rp = v;
    }
    if let Some(v) = args.common_top_dl {
        config.thresholds.dl = v;
    }
    if let Some(v) = args.common_top_al {
        config.thresholds.al = v;
    }
    if let Some(v) = args.match_require_journal {
        config.policy.require_journal = v;
    }
    if let Some(v) = args.match_require_year {
        config.policy.require_year = v;
    }
    if let Some(v) = args.match_require_first_page {
        config.policy.require_first_page = v;
    }
    if let Some(v) = args.match_title_ratio {
        config.policy.title_max_edit_ratio = v;
    }
    if args.no_anchor {
        config.anchored = false;
    }
    if let Some(v) = &args.out {
        config.out = v.clone();
    }
    if let Some(v) = args.rng_seed {
        config.synth.rng_seed = v;
    }
    validate(&config)?;
    Ok(config)
}

fn validate(config: &RunConfig) -> Result<()> {
    if config.strategies.is_empty() {
        return Err(config_error("at least one seed strategy must be enabled"));
    }
    for (name, fraction) in [
        ("common_top_rp", config.thresholds.rp),
        ("common_top_dl", config.thresholds.dl),
        ("common_top_al", config.thresholds.al),
    ] {
        if !(0.0..=1.0).contains(&fraction) || !fraction.is_finite() {
            return Err(config_error(format!(
                "{name} = {fraction} is outside [0, 1]"
            )));
        }
    }
    if !(0.0..=1.0).contains(&config.policy.title_max_edit_ratio) {
        return Err(config_error(format!(
            "match_title_ratio = {} is outside [0, 1]",
            config.policy.title_max_edit_ratio
        )));
    }
    Ok(())
}

impl RunConfig {
    /// Requires a path-valued setting to be present and existing.
    pub fn require(&self, field: &str) -> Result<&Path> {
        let path = match field {
            "registry" => &self.registry,
            "corpus_a" => &self.corpus_a,
            "corpus_b" => &self.corpus_b,
            "aliases" => &self.aliases,
            "gold" => &self.gold,
            other => bail!("internal: unknown required field {other}"),
        };
        let path = path
            .as_deref()
            .ok_or_else(|| config_error(format!("`{field}` is required for this command")))?;
        if !path.exists() {
            return Err(config_error(format!(
                "`{field}` path {} does not exist",
                path.display()
            )));
        }
        Ok(path)
    }

    /// Canonical `key = value` rendering of every effective setting except
    /// the output directory; the manifest hashes this.
    pub fn canonical_lines(&self) -> Vec<String> {
        let path_or_dash =
            |p: &Option<PathBuf>| p.as_deref().map_or("-".to_string(), |p| p.display().to_string());
        let strategies = self
            .strategies
            .iter()
            .map(|s| s.token())
            .collect::<Vec<_>>()
            .join(",");
        let expansions = self
            .expansions
            .iter()
            .map(|m| m.token())
            .collect::<Vec<_>>()
            .join(",");
        let mut lines = vec![
            format!("alias_coverage = {}", self.synth.alias_coverage),
            format!("aliases = {}", path_or_dash(&self.aliases)),
            format!("anchored = {}", self.anchored),
            format!("b_coverage = {}", self.synth.b_coverage),
            format!("cluster_count_meso = {}", self.synth.cluster_count_meso),
            format!("clusters_per_meso = {}", self.synth.clusters_per_meso),
            format!("common_top_al = {}", self.thresholds.al),
            format!("common_top_dl = {}", self.thresholds.dl),
            format!("common_top_rp = {}", self.thresholds.rp),
            format!("corpus_a = {}", path_or_dash(&self.corpus_a)),
            format!("corpus_b = {}", path_or_dash(&self.corpus_b)),
            format!("email_coverage = {}", self.synth.email_coverage),
            format!("expansions = {expansions}"),
            format!("gold = {}", path_or_dash(&self.gold)),
            format!("homonym_rate = {}", self.synth.homonym_rate),
            format!("linkage_coverage = {}", self.synth.linkage_coverage),
            format!("match_require_first_page = {}", self.policy.require_first_page),
            format!("match_require_journal = {}", self.policy.require_journal),
            format!("match_require_year = {}", self.policy.require_year),
            format!("match_title_ratio = {}", self.policy.title_max_edit_ratio),
            format!("n_persons = {}", self.synth.n_persons),
            format!("n_pubs = {}", self.synth.n_pubs),
            format!("registry = {}", path_or_dash(&self.registry)),
            format!("rng_seed = {}", self.synth.rng_seed),
            format!("strategies = {strategies}"),
            format!(
                "window = {}",
                self.window
                    .map_or("-".to_string(), |(a, b)| format!("{a}:{b}"))
            ),
            format!("xid_cap = {}", self.xid_cap),
            format!("xid_split_rate = {}", self.synth.xid_split_rate),
            format!(
                "year_range = {}:{}",
                self.synth.year_range.0, self.synth.year_range.1
            ),
        ];
        lines.sort();
        lines
    }
}
