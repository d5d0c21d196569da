//! Subcommand implementations. Each stage reads its inputs from disk,
//! writes sorted newline-terminated artifacts into the output directory,
//! and records a manifest (config hash, input digests, tool version) so
//! reruns can be compared byte for byte.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use oeuvre_core::corpus::{
    load_corpus, load_registry, ClusterLevel, OrgAliasMap, Person,
};
use oeuvre_core::evaluator::{
    evaluate, restrict_persons, restrict_window, EvalReport, GoldStandard,
};
use oeuvre_core::expander::{
    combine_oeuvres, expand_clusters, expand_external_ids, harvest_external_ids, read_oeuvre,
    write_oeuvre, Method, OeuvreSet,
};
use oeuvre_core::namekit::{build_frequency_table, person_key};
use oeuvre_core::recmatch::RecordMatcher;
use oeuvre_core::seeder::{
    combine_seeds, prune_common_names, prune_multiple_assignments, read_seed, seed_approx_linkage,
    seed_direct_linkage, seed_email, seed_external_records, seed_reprint, write_seed, SeedSet,
    Strategy,
};
use oeuvre_core::synthgen::generate;
use oeuvre_core::{Corpus, CorpusTag, Error, PersonId, PubId};

use crate::config::{config_error, RunConfig};

/// Fixed emission order for oeuvre variants; also the report row order.
const VARIANT_ORDER: &[&str] = &["seed", "meso", "micro", "xid", "xid_meso", "xid_micro"];

fn oeuvre_path(out: &Path, variant: &str) -> PathBuf {
    out.join(format!("oeuvre_{variant}.tsv"))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_jsonl<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut text = String::new();
    for row in rows {
        text.push_str(&serde_json::to_string(&row)?);
        text.push('\n');
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize)]
struct ManifestInput {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest {
    tool_version: &'static str,
    config_sha256: String,
    inputs: BTreeMap<&'static str, ManifestInput>,
}

/// Hash of the effective configuration (excluding the output directory)
/// plus a digest per input file.
fn write_manifest(config: &RunConfig, inputs: &[(&'static str, &Path)]) -> Result<()> {
    let canonical = config.canonical_lines().join("\n");
    let mut manifest = Manifest {
        tool_version: env!("CARGO_PKG_VERSION"),
        config_sha256: sha256_hex(canonical.as_bytes()),
        inputs: BTreeMap::new(),
    };
    for (name, path) in inputs {
        let bytes =
            std::fs::read(path).with_context(|| format!("digesting {}", path.display()))?;
        manifest.inputs.insert(
            name,
            ManifestInput {
                path: path.display().to_string(),
                sha256: sha256_hex(&bytes),
            },
        );
    }
    write_json(&config.out.join("manifest.json"), &manifest)
}

fn ensure_out(config: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&config.out)
        .with_context(|| format!("creating output directory {}", config.out.display()))
}

/// Loads the alias map when organization-based strategies need it;
/// otherwise an absent path degrades to an empty map.
fn load_aliases(config: &RunConfig, registry: &[Person]) -> Result<OrgAliasMap> {
    let needs_orgs = config
        .strategies
        .iter()
        .any(|s| matches!(s, Strategy::Rp | Strategy::Dl | Strategy::Al));
    match (&config.aliases, needs_orgs) {
        (Some(_), _) => {
            let aliases = OrgAliasMap::load(config.require("aliases")?)?;
            aliases.validate_covers(registry)?;
            Ok(aliases)
        }
        (None, false) => Ok(OrgAliasMap::new()),
        (None, true) => Err(config_error(
            "`aliases` is required when RP, DL, or AL strategies are enabled",
        )),
    }
}

// ---------------------------------------------------------------------------
// seed

#[derive(Serialize)]
struct StrategySummary {
    strategy: &'static str,
    publications: usize,
    persons: usize,
    /// Persons lost when this strategy's triples are removed from the seed:
    /// the leave-one-out unique contribution.
    persons_unique: usize,
}

#[derive(Serialize)]
struct PruningSummary {
    combined_triples: usize,
    after_multiple_assignment_prune: usize,
    after_common_name_prune: usize,
    unique_assignments: usize,
    persons: usize,
    publications: usize,
}

#[derive(Serialize)]
struct SeedSummary {
    strategies: Vec<StrategySummary>,
    pruning: PruningSummary,
}

fn summarize_seed(
    seed: &SeedSet,
    enabled: &[Strategy],
    combined: usize,
    after_multi: usize,
) -> SeedSummary {
    let all_persons = seed.persons();
    let strategies = Strategy::ALL
        .iter()
        .filter(|s| enabled.contains(s))
        .map(|&strategy| {
            let without: SeedSet = seed
                .iter()
                .filter(|t| t.strategy != strategy)
                .cloned()
                .collect();
            StrategySummary {
                strategy: strategy.token(),
                publications: seed.publications_with_strategy(strategy).len(),
                persons: seed.persons_with_strategy(strategy).len(),
                persons_unique: all_persons.len() - without.persons().len(),
            }
        })
        .collect();
    SeedSummary {
        strategies,
        pruning: PruningSummary {
            combined_triples: combined,
            after_multiple_assignment_prune: after_multi,
            after_common_name_prune: seed.len(),
            unique_assignments: seed.unique_len(),
            persons: all_persons.len(),
            publications: seed.publications().len(),
        },
    }
}

pub fn run_seed(config: &RunConfig) -> Result<SeedSet> {
    let started = Instant::now();
    let registry = load_registry(config.require("registry")?)?;
    let corpus_a = load_corpus(config.require("corpus_a")?, CorpusTag::A)?;
    let aliases = load_aliases(config, &registry)?;
    ensure_out(config)?;

    let mut channel_seeds = Vec::new();
    for strategy in Strategy::ALL {
        if !config.strategies.contains(&strategy) {
            continue;
        }
        let channel = match strategy {
            Strategy::Em => seed_email(&registry, &corpus_a),
            Strategy::Rp => seed_reprint(&registry, &corpus_a, &aliases),
            Strategy::Dl => seed_direct_linkage(&registry, &corpus_a, &aliases),
            Strategy::Al => seed_approx_linkage(&registry, &corpus_a, &aliases),
            Strategy::Dai => {
                let matcher = RecordMatcher::new(&corpus_a, config.policy.clone());
                seed_external_records(&registry, &corpus_a, &matcher)
            }
        };
        log::info!(
            "strategy {}: {} triples, {} persons, {} publications",
            strategy.token(),
            channel.len(),
            channel.persons().len(),
            channel.publications().len()
        );
        channel_seeds.push(channel);
    }

    let combined = combine_seeds(channel_seeds);
    let combined_len = combined.len();
    let after_multi = prune_multiple_assignments(&combined);
    let after_multi_len = after_multi.len();
    let table = build_frequency_table(&corpus_a);
    let seed = prune_common_names(&after_multi, &corpus_a, &table, &config.thresholds);
    log::info!(
        "seed: {combined_len} combined triples, {after_multi_len} after conflict pruning, {} after common-name pruning ({} unique assignments)",
        seed.len(),
        seed.unique_len()
    );

    write_seed(&config.out.join("seed.tsv"), &seed)?;
    write_json(
        &config.out.join("seed_summary.json"),
        &summarize_seed(&seed, &config.strategies, combined_len, after_multi_len),
    )?;

    let mut inputs = vec![
        ("registry", config.require("registry")?),
        ("corpus_a", config.require("corpus_a")?),
    ];
    if config.aliases.is_some() {
        inputs.push(("aliases", config.require("aliases")?));
    }
    write_manifest(config, &inputs)?;
    log::info!("seed stage finished in {:.2?}", started.elapsed());
    Ok(seed)
}

// ---------------------------------------------------------------------------
// expand

pub fn run_expand(config: &RunConfig) -> Result<Vec<(String, OeuvreSet)>> {
    let started = Instant::now();
    let corpus_a = load_corpus(config.require("corpus_a")?, CorpusTag::A)?;
    let seed_path = config.out.join("seed.tsv");
    let seed = read_seed(&seed_path, &corpus_a)?;
    ensure_out(config)?;

    let mut variants: Vec<(String, OeuvreSet)> = Vec::new();
    variants.push(("seed".to_string(), OeuvreSet::from_seed(&seed)));

    let mut meso = None;
    let mut micro = None;
    let mut xid = None;
    for method in [Method::Meso, Method::Micro, Method::Xid] {
        if !config.expansions.contains(&method) {
            continue;
        }
        match method {
            Method::Meso => {
                if !corpus_a.has_cluster_labels(ClusterLevel::Meso) {
                    return Err(Error::MissingCorpusField {
                        method: "MESO",
                        field: "meso_cluster",
                    }
                    .into());
                }
                meso = Some(expand_clusters(
                    &seed,
                    &corpus_a,
                    ClusterLevel::Meso,
                    config.anchored,
                ));
            }
            Method::Micro => {
                if !corpus_a.has_cluster_labels(ClusterLevel::Micro) {
                    return Err(Error::MissingCorpusField {
                        method: "MICRO",
                        field: "micro_cluster",
                    }
                    .into());
                }
                micro = Some(expand_clusters(
                    &seed,
                    &corpus_a,
                    ClusterLevel::Micro,
                    config.anchored,
                ));
            }
            Method::Xid => {
                let corpus_b = load_corpus(config.require("corpus_b")?, CorpusTag::B)?;
                if !corpus_b.has_external_ids() {
                    return Err(Error::MissingCorpusField {
                        method: "XID",
                        field: "external_author_id",
                    }
                    .into());
                }
                let matcher_b = RecordMatcher::new(&corpus_b, config.policy.clone());
                let profiles =
                    harvest_external_ids(&seed, &corpus_a, &corpus_b, &matcher_b, config.xid_cap);
                write_jsonl(&config.out.join("xid_profiles.jsonl"), profiles.iter())?;
                let discarded = profiles.iter().filter(|p| p.discarded).count();
                log::info!(
                    "harvested external ids for {} persons ({} discarded over the cap of {})",
                    profiles.len(),
                    discarded,
                    config.xid_cap
                );
                let matcher_a = RecordMatcher::new(&corpus_a, config.policy.clone());
                xid = Some(expand_external_ids(
                    &profiles, &seed, &corpus_a, &corpus_b, &matcher_a,
                ));
            }
            Method::Seed => unreachable!("parse_expansions rejects SEED"),
        }
    }

    if let Some(oeuvre) = &meso {
        variants.push(("meso".to_string(), oeuvre.clone()));
    }
    if let Some(oeuvre) = &micro {
        variants.push(("micro".to_string(), oeuvre.clone()));
    }
    if let Some(oeuvre) = &xid {
        variants.push(("xid".to_string(), oeuvre.clone()));
    }
    if let (Some(xid), Some(meso)) = (&xid, &meso) {
        variants.push((
            "xid_meso".to_string(),
            combine_oeuvres([xid.clone(), meso.clone()]),
        ));
    }
    if let (Some(xid), Some(micro)) = (&xid, &micro) {
        variants.push((
            "xid_micro".to_string(),
            combine_oeuvres([xid.clone(), micro.clone()]),
        ));
    }

    for (name, oeuvre) in &variants {
        write_oeuvre(&oeuvre_path(&config.out, name), oeuvre)?;
        log::info!(
            "oeuvre variant {name}: {} assignments, {} unique (person, publication) pairs",
            oeuvre.len(),
            oeuvre.unique_pairs().len()
        );
    }

    let mut inputs = vec![("corpus_a", config.require("corpus_a")?)];
    if config.expansions.contains(&Method::Xid) {
        inputs.push(("corpus_b", config.require("corpus_b")?));
    }
    write_manifest(config, &inputs)?;
    log::info!("expand stage finished in {:.2?}", started.elapsed());
    Ok(variants)
}

// ---------------------------------------------------------------------------
// evaluate

const REPORT_NOTE: &str = "Gold oeuvres are treated as complete within the evaluation window: \
assignments outside the window are ignored, persons without a gold entry are excluded from \
scoring, and retrieved publications absent from a person's gold list count as false positives \
even when the gold list itself has gaps.";

#[derive(Serialize)]
struct VariantRow {
    oeuvre: String,
    true_pos: u64,
    false_pos: u64,
    false_neg: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    precision: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    recall: Option<f64>,
}

#[derive(Serialize)]
struct Report {
    note: &'static str,
    window: (i32, i32),
    variants: Vec<VariantRow>,
}

#[derive(Serialize)]
struct PerPersonRow<'a> {
    oeuvre: &'a str,
    person_id: &'a PersonId,
    true_pos: u64,
    false_pos: u64,
    false_neg: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    precision: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    recall: Option<f64>,
}

#[derive(Serialize)]
struct AuditRow<'a> {
    oeuvre: &'a str,
    person_id: &'a PersonId,
    pub_id: &'a PubId,
    /// True when another registry person carries the same name key.
    shares_name_key: bool,
    /// True when the pair entered the seed through AL alone.
    al_only_seed: bool,
    assessment: &'static str,
}

/// False positives explained: shared name keys (homonyms) and
/// approximate-linkage seeding are the two known precision sinks.
fn write_audit(
    config: &RunConfig,
    corpus_a: &Corpus,
    gold: &GoldStandard,
    scored: &[(String, OeuvreSet, EvalReport)],
) -> Result<()> {
    let registry = load_registry(config.require("registry")?)?;
    let seed = read_seed(&config.out.join("seed.tsv"), corpus_a)?;

    let mut key_owners: BTreeMap<_, Vec<&PersonId>> = BTreeMap::new();
    for person in &registry {
        if let Some(key) = person_key(person) {
            key_owners.entry(key).or_default().push(&person.person_id);
        }
    }
    let shared_keys: BTreeSet<&PersonId> = key_owners
        .values()
        .filter(|owners| owners.len() > 1)
        .flatten()
        .copied()
        .collect();

    let mut seed_strategies: BTreeMap<(&PersonId, &PubId), BTreeSet<Strategy>> = BTreeMap::new();
    for triple in seed.iter() {
        seed_strategies
            .entry((&triple.person_id, &triple.pub_id))
            .or_default()
            .insert(triple.strategy);
    }

    let mut rows = Vec::new();
    for (name, oeuvre, _) in scored {
        let pairs: BTreeSet<(&PersonId, &PubId)> =
            oeuvre.iter().map(|a| (&a.person_id, &a.pub_id)).collect();
        for (person_ref, pub_ref) in pairs {
            let in_gold = gold
                .entries()
                .get(person_ref)
                .is_some_and(|pubs| pubs.contains(pub_ref));
            if in_gold {
                continue;
            }
            let shares_name_key = shared_keys.contains(person_ref);
            let al_only_seed = seed_strategies
                .get(&(person_ref, pub_ref))
                .is_some_and(|s| s.iter().all(|s| *s == Strategy::Al));
            let assessment = if shares_name_key {
                "homonym"
            } else if al_only_seed {
                "approximate_linkage"
            } else {
                "other"
            };
            rows.push(AuditRow {
                oeuvre: name,
                person_id: person_ref,
                pub_id: pub_ref,
                shares_name_key,
                al_only_seed,
                assessment,
            });
        }
    }
    write_jsonl(&config.out.join("audit.jsonl"), rows)
}

pub fn run_evaluate(config: &RunConfig) -> Result<Vec<(String, EvalReport)>> {
    let started = Instant::now();
    let corpus_a = load_corpus(config.require("corpus_a")?, CorpusTag::A)?;
    let window = config.window.unwrap_or((1900, 2100));
    let gold = GoldStandard::load(config.require("gold")?, &corpus_a, window)?;
    ensure_out(config)?;

    let mut scored: Vec<(String, OeuvreSet, EvalReport)> = Vec::new();
    for name in VARIANT_ORDER {
        let path = oeuvre_path(&config.out, name);
        if !path.exists() {
            continue;
        }
        let oeuvre = read_oeuvre(&path, &corpus_a)?;
        let windowed = restrict_window(&oeuvre, &corpus_a, gold.window());
        let restricted = restrict_persons(&windowed, &gold);
        let report = evaluate(&restricted, &gold)?;
        log::info!(
            "variant {name}: TP {} FP {} FN {} precision {} recall {}",
            report.aggregate.true_pos,
            report.aggregate.false_pos,
            report.aggregate.false_neg,
            report
                .aggregate
                .precision
                .map_or("-".to_string(), |p| format!("{p:.1}")),
            report
                .aggregate
                .recall
                .map_or("-".to_string(), |r| format!("{r:.1}")),
        );
        scored.push((name.to_string(), restricted, report));
    }
    if scored.is_empty() {
        return Err(anyhow!(
            "no oeuvre files found under {}; run `oeuvre expand` first",
            config.out.display()
        ));
    }

    let report = Report {
        note: REPORT_NOTE,
        window: gold.window(),
        variants: scored
            .iter()
            .map(|(name, _, report)| VariantRow {
                oeuvre: name.clone(),
                true_pos: report.aggregate.true_pos,
                false_pos: report.aggregate.false_pos,
                false_neg: report.aggregate.false_neg,
                precision: report.aggregate.precision,
                recall: report.aggregate.recall,
            })
            .collect(),
    };
    write_json(&config.out.join("report.json"), &report)?;

    let per_person: Vec<PerPersonRow> = scored
        .iter()
        .flat_map(|(name, _, report)| {
            report.per_person.iter().map(move |row| PerPersonRow {
                oeuvre: name,
                person_id: &row.person_id,
                true_pos: row.tally.true_pos,
                false_pos: row.tally.false_pos,
                false_neg: row.tally.false_neg,
                precision: row.tally.precision,
                recall: row.tally.recall,
            })
        })
        .collect();
    write_jsonl(&config.out.join("report_per_person.jsonl"), per_person)?;

    // The audit needs the registry (for name keys) and the seed file (for
    // strategy provenance); both are present on pipeline runs.
    if config.registry.is_some() && config.out.join("seed.tsv").exists() {
        write_audit(config, &corpus_a, &gold, &scored)?;
    }

    let mut inputs = vec![
        ("corpus_a", config.require("corpus_a")?),
        ("gold", config.require("gold")?),
    ];
    if config.registry.is_some() {
        inputs.push(("registry", config.require("registry")?));
    }
    write_manifest(config, &inputs)?;
    log::info!("evaluate stage finished in {:.2?}", started.elapsed());
    Ok(scored
        .into_iter()
        .map(|(name, _, report)| (name, report))
        .collect())
}

// ---------------------------------------------------------------------------
// pipeline and synth

pub fn run_pipeline(config: &RunConfig) -> Result<()> {
    run_seed(config)?;
    run_expand(config)?;
    run_evaluate(config)?;
    Ok(())
}

pub fn run_synth(config: &RunConfig) -> Result<()> {
    let started = Instant::now();
    let output = generate(&config.synth)?;
    output.write_all(&config.out)?;
    log::info!(
        "synthesized {} persons, {} corpus-A and {} corpus-B publications into {}",
        output.registry.len(),
        output.corpus_a.len(),
        output.corpus_b.len(),
        config.out.display()
    );
    write_manifest(config, &[])?;
    log::info!("synth finished in {:.2?}", started.elapsed());
    Ok(())
}
