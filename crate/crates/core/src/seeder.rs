//! High-precision seed construction: five independent evidence channels,
//! union combination, and two pruning passes.
//!
//! A seed triple asserts "this registry person wrote this corpus-A
//! publication and appears at this byline position", tagged with the
//! strategy that produced it. The five strategies trade coverage for
//! precision differently:
//!
//! - `EM` — a registry email equals an author-mention email.
//! - `RP` — the corresponding ("reprint") author's name is compatible with
//!   the person and the reprint address resolves to one of the person's
//!   organizations.
//! - `DL` — the record carries explicit author-to-affiliation links, and a
//!   linked affiliation of a name-compatible mention resolves to one of the
//!   person's organizations.
//! - `AL` — for records *without* linkage data only: a name-compatible
//!   mention co-occurs anywhere on the paper with one of the person's
//!   organizations. The weakest channel; it is the reason common-name
//!   pruning exists.
//! - `DAI` — externally attributed records (CV-style publication lists)
//!   matched into corpus A on (journal, year, title, first page).
//!
//! Pruning runs in a fixed order: first every (publication, position) slot
//! claimed by two or more persons is dropped entirely, then triples from
//! the name-based channels (RP, DL, AL) whose mention bears a very common
//! name are dropped. EM and DAI are exempt from the frequency filter.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::corpus::{read_lines, write_lines, Corpus, OrgAliasMap, Person, PersonId, PubId};
use crate::error::{Error, Result};
use crate::namekit::{is_common, names_compatible, normalize_name, NameFrequencyTable};
use crate::par;
use crate::recmatch::RecordMatcher;

/// The five seeding strategies, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Strategy {
    Em,
    Rp,
    Dl,
    Al,
    Dai,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Em,
        Strategy::Rp,
        Strategy::Dl,
        Strategy::Al,
        Strategy::Dai,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Strategy::Em => "EM",
            Strategy::Rp => "RP",
            Strategy::Dl => "DL",
            Strategy::Al => "AL",
            Strategy::Dai => "DAI",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_uppercase().as_str() {
            "EM" => Ok(Strategy::Em),
            "RP" => Ok(Strategy::Rp),
            "DL" => Ok(Strategy::Dl),
            "AL" => Ok(Strategy::Al),
            "DAI" => Ok(Strategy::Dai),
            other => Err(Error::UnknownStrategy(other.to_string())),
        }
    }
}

/// One seed assertion. Field order doubles as the sort order of seed files:
/// (person_id, pub_id, position, strategy).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SeedTriple {
    pub person_id: PersonId,
    pub pub_id: PubId,
    pub position: u32,
    pub strategy: Strategy,
}

/// A deduplicated set of seed triples. Strategy provenance is kept per
/// triple; "unique" counts collapse the strategy tag.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SeedSet {
    triples: BTreeSet<SeedTriple>,
}

impl FromIterator<SeedTriple> for SeedSet {
    fn from_iter<I: IntoIterator<Item = SeedTriple>>(iter: I) -> Self {
        SeedSet {
            triples: iter.into_iter().collect(),
        }
    }
}

impl SeedSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, triple: SeedTriple) -> bool {
        self.triples.insert(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, triple: &SeedTriple) -> bool {
        self.triples.contains(triple)
    }

    /// Triples in (person_id, pub_id, position, strategy) order.
    pub fn iter(&self) -> impl Iterator<Item = &SeedTriple> {
        self.triples.iter()
    }

    pub fn strategy_counts(&self) -> BTreeMap<Strategy, usize> {
        let mut counts = BTreeMap::new();
        for triple in &self.triples {
            *counts.entry(triple.strategy).or_insert(0) += 1;
        }
        counts
    }

    /// Distinct (person, pub, position) assignments, strategy collapsed.
    pub fn unique_assignments(&self) -> BTreeSet<(PersonId, PubId, u32)> {
        self.triples
            .iter()
            .map(|t| (t.person_id.clone(), t.pub_id.clone(), t.position))
            .collect()
    }

    pub fn unique_len(&self) -> usize {
        self.unique_assignments().len()
    }

    pub fn persons(&self) -> BTreeSet<PersonId> {
        self.triples.iter().map(|t| t.person_id.clone()).collect()
    }

    pub fn publications(&self) -> BTreeSet<PubId> {
        self.triples.iter().map(|t| t.pub_id.clone()).collect()
    }

    pub fn persons_with_strategy(&self, strategy: Strategy) -> BTreeSet<PersonId> {
        self.triples
            .iter()
            .filter(|t| t.strategy == strategy)
            .map(|t| t.person_id.clone())
            .collect()
    }

    pub fn publications_with_strategy(&self, strategy: Strategy) -> BTreeSet<PubId> {
        self.triples
            .iter()
            .filter(|t| t.strategy == strategy)
            .map(|t| t.pub_id.clone())
            .collect()
    }
}

impl<'a> IntoIterator for &'a SeedSet {
    type Item = &'a SeedTriple;
    type IntoIter = std::collections::btree_set::Iter<'a, SeedTriple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

fn triple(person: &Person, pub_id: &PubId, position: u32, strategy: Strategy) -> SeedTriple {
    SeedTriple {
        person_id: person.person_id.clone(),
        pub_id: pub_id.clone(),
        position,
        strategy,
    }
}

/// EM: a registry email equals a mention email (both stored lowercased).
pub fn seed_email(persons: &[Person], corpus: &Corpus) -> SeedSet {
    par::flat_map_vec(persons, |person| {
        let mut out = Vec::new();
        for email in &person.emails {
            for (pub_id, position) in corpus.mentions_with_email(email) {
                out.push(triple(person, pub_id, *position, Strategy::Em));
            }
        }
        out
    })
    .into_iter()
    .collect()
}

/// Candidate publications listing any of the person's organizations.
fn pubs_with_org<'c>(corpus: &'c Corpus, alias_keys: &BTreeSet<&str>) -> BTreeSet<&'c PubId> {
    alias_keys
        .iter()
        .filter_map(|key| corpus.indexes().affiliation.get(*key))
        .flatten()
        .collect()
}

/// RP: the reprint author's name is compatible and the reprint affiliation
/// resolves to one of the person's organizations.
pub fn seed_reprint(persons: &[Person], corpus: &Corpus, aliases: &OrgAliasMap) -> SeedSet {
    par::flat_map_vec(persons, |person| {
        let alias_keys = aliases.person_alias_keys(person);
        if alias_keys.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for pub_id in pubs_with_org(corpus, &alias_keys) {
            let publication = corpus.get(pub_id).expect("affiliation index is in-corpus");
            let Some((position, affil_id)) = &publication.reprint else {
                continue;
            };
            let Some(key) = publication.affiliation_key(affil_id) else {
                continue;
            };
            if !alias_keys.contains(key.as_str()) {
                continue;
            }
            let Some(mention) = publication.mention(*position) else {
                continue;
            };
            if names_compatible(&mention.raw_name, person) {
                out.push(triple(person, pub_id, *position, Strategy::Rp));
            }
        }
        out
    })
    .into_iter()
    .collect()
}

/// DL: only for records carrying per-author affiliation links; a mention is
/// seeded when its name is compatible and one of *its own* linked
/// affiliations resolves to the person's organizations.
pub fn seed_direct_linkage(persons: &[Person], corpus: &Corpus, aliases: &OrgAliasMap) -> SeedSet {
    par::flat_map_vec(persons, |person| {
        let alias_keys = aliases.person_alias_keys(person);
        if alias_keys.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for pub_id in pubs_with_org(corpus, &alias_keys) {
            let publication = corpus.get(pub_id).expect("affiliation index is in-corpus");
            let Some(links) = &publication.author_affil_links else {
                continue;
            };
            for (position, affil_id) in links {
                let Some(key) = publication.affiliation_key(affil_id) else {
                    continue;
                };
                if !alias_keys.contains(key.as_str()) {
                    continue;
                }
                let Some(mention) = publication.mention(*position) else {
                    continue;
                };
                if names_compatible(&mention.raw_name, person) {
                    out.push(triple(person, pub_id, *position, Strategy::Dl));
                }
            }
        }
        out
    })
    .into_iter()
    .collect()
}

/// AL: only for records *without* linkage data; every name-compatible
/// mention is seeded when any affiliation on the paper resolves to the
/// person's organizations. Deliberately the least precise channel.
pub fn seed_approx_linkage(persons: &[Person], corpus: &Corpus, aliases: &OrgAliasMap) -> SeedSet {
    par::flat_map_vec(persons, |person| {
        let alias_keys = aliases.person_alias_keys(person);
        if alias_keys.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for pub_id in pubs_with_org(corpus, &alias_keys) {
            let publication = corpus.get(pub_id).expect("affiliation index is in-corpus");
            if publication.author_affil_links.is_some() {
                continue;
            }
            for mention in &publication.authors {
                if names_compatible(&mention.raw_name, person) {
                    out.push(triple(person, pub_id, mention.position, Strategy::Al));
                }
            }
        }
        out
    })
    .into_iter()
    .collect()
}

/// DAI: attributed records matched into corpus A. Records matching zero or
/// several publications are skipped; within a uniquely matched publication
/// the lowest-position name-compatible mention carries the triple.
pub fn seed_external_records(
    persons: &[Person],
    corpus: &Corpus,
    matcher: &RecordMatcher,
) -> SeedSet {
    par::flat_map_vec(persons, |person| {
        let mut out = Vec::new();
        for record in &person.attributed_records {
            let hits = matcher.match_record(record);
            match hits.as_slice() {
                [] => {}
                [pub_id] => {
                    let publication = corpus.get(pub_id).expect("matcher returns in-corpus ids");
                    let compatible = publication
                        .authors
                        .iter()
                        .filter(|m| names_compatible(&m.raw_name, person))
                        .min_by_key(|m| m.position);
                    match compatible {
                        Some(mention) => {
                            out.push(triple(person, pub_id, mention.position, Strategy::Dai));
                        }
                        None => log::debug!(
                            "attributed record {:?} of {} matched {} but no author mention is name-compatible; skipped",
                            record.title,
                            person.person_id,
                            pub_id
                        ),
                    }
                }
                many => log::debug!(
                    "attributed record {:?} of {} matches {} publications; ambiguous, skipped",
                    record.title,
                    person.person_id,
                    many.len()
                ),
            }
        }
        out
    })
    .into_iter()
    .collect()
}

/// Union with exact-duplicate removal; strategy provenance is preserved.
pub fn combine_seeds(sets: impl IntoIterator<Item = SeedSet>) -> SeedSet {
    sets.into_iter().flat_map(|s| s.triples).collect()
}

/// Drops every triple of every (publication, position) slot claimed by two
/// or more distinct persons. Nothing is arbitrated or recovered.
pub fn prune_multiple_assignments(seed: &SeedSet) -> SeedSet {
    let mut claimants: BTreeMap<(&PubId, u32), BTreeSet<&PersonId>> = BTreeMap::new();
    for t in seed {
        claimants
            .entry((&t.pub_id, t.position))
            .or_default()
            .insert(&t.person_id);
    }
    seed.iter()
        .filter(|t| claimants[&(&t.pub_id, t.position)].len() == 1)
        .cloned()
        .collect()
}

/// Per-strategy commonness cutoffs (fraction of distinct name keys).
#[derive(Debug, Clone, PartialEq)]
pub struct CommonNameThresholds {
    pub rp: f64,
    pub dl: f64,
    pub al: f64,
}

impl Default for CommonNameThresholds {
    fn default() -> Self {
        CommonNameThresholds {
            rp: 0.05,
            dl: 0.05,
            al: 0.10,
        }
    }
}

/// Drops RP/DL/AL triples whose mention bears a top-fraction common name;
/// EM and DAI triples always survive. An assignment kept under any strategy
/// stays in the unique totals.
pub fn prune_common_names(
    seed: &SeedSet,
    corpus: &Corpus,
    table: &NameFrequencyTable,
    thresholds: &CommonNameThresholds,
) -> SeedSet {
    seed.iter()
        .filter(|t| {
            let fraction = match t.strategy {
                Strategy::Em | Strategy::Dai => None,
                Strategy::Rp => Some(thresholds.rp),
                Strategy::Dl => Some(thresholds.dl),
                Strategy::Al => Some(thresholds.al),
            };
            let Some(fraction) = fraction else {
                return true;
            };
            let Some(mention) = corpus.get(&t.pub_id).and_then(|p| p.mention(t.position)) else {
                return true;
            };
            match normalize_name(&mention.raw_name) {
                Ok(key) => !is_common(&key, table, fraction),
                Err(_) => true,
            }
        })
        .cloned()
        .collect()
}

/// Writes one `pub_id TAB person_id TAB position TAB strategy` line per
/// triple, sorted by (person_id, pub_id, position, strategy).
pub fn write_seed(path: &Path, seed: &SeedSet) -> Result<()> {
    write_lines(
        path,
        seed.iter().map(|t| {
            format!("{}\t{}\t{}\t{}", t.pub_id, t.person_id, t.position, t.strategy)
        }),
    )
}

/// Reads a seed file back, validating every triple against the corpus:
/// the publication must exist and carry the stated position.
pub fn read_seed(path: &Path, corpus: &Corpus) -> Result<SeedSet> {
    let mut seed = SeedSet::new();
    for (line_no, line) in read_lines(path)? {
        let fields: Vec<&str> = line.split('\t').collect();
        let [pub_id, person_id, position, strategy] = fields.as_slice() else {
            return Err(Error::malformed(
                path,
                line_no,
                format!("expected 4 tab-separated fields, got {}", fields.len()),
            ));
        };
        let position: u32 = position
            .parse()
            .map_err(|_| Error::malformed(path, line_no, format!("bad position `{position}`")))?;
        let strategy: Strategy = strategy.parse()?;
        let pub_id = PubId(pub_id.to_string());
        match corpus.get(&pub_id) {
            None => {
                return Err(Error::malformed(
                    path,
                    line_no,
                    format!("publication `{pub_id}` not in corpus {}", corpus.tag()),
                ));
            }
            Some(publication) if publication.mention(position).is_none() => {
                return Err(Error::malformed(
                    path,
                    line_no,
                    format!("publication `{pub_id}` has no author position {position}"),
                ));
            }
            Some(_) => {}
        }
        seed.insert(SeedTriple {
            person_id: PersonId(person_id.to_string()),
            pub_id,
            position,
            strategy,
        });
    }
    Ok(seed)
}
