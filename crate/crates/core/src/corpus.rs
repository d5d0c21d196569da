//! Data model, ingestion, validation, and read-only indexing of person
//! registries and publication corpora.
//!
//! All interchange files are line-delimited: one JSON record per line,
//! UTF-8, newline-terminated. Missing optional fields are absent, never
//! empty strings; absence drives downstream strategy applicability.
//! A corpus is immutable after load and safe for concurrent reads.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::namekit::{normalize_name, org_key, NameKey};

/// Opaque person identifier, unique within a registry.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PersonId(pub String);

/// Opaque publication identifier, unique within one corpus. The same id may
/// appear in corpora A and B without implying identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PubId(pub String);

impl fmt::Display for PersonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for PubId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PersonId {
    fn from(s: &str) -> Self {
        PersonId(s.to_string())
    }
}

impl From<&str> for PubId {
    fn from(s: &str) -> Self {
        PubId(s.to_string())
    }
}

/// Which corpus a publication came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub enum CorpusTag {
    #[default]
    A,
    B,
}

impl fmt::Display for CorpusTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusTag::A => f.write_str("A"),
            CorpusTag::B => f.write_str("B"),
        }
    }
}

/// A registry person: name parts, contact data, and externally attributed
/// bibliographic records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Person {
    pub person_id: PersonId,
    pub family_name: String,
    #[serde(default)]
    pub given_names: Vec<String>,
    #[serde(default)]
    pub emails: Vec<String>,
    #[serde(default)]
    pub affiliation_ids: Vec<String>,
    #[serde(default)]
    pub attributed_records: Vec<BiblioRecord>,
}

/// Core bibliographic fields used for cross-database record matching.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BiblioRecord {
    pub journal: String,
    pub year: i32,
    pub title: String,
    pub first_page: String,
}

/// One author slot of a publication, as printed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorMention {
    /// 1-based byline position.
    pub position: u32,
    pub raw_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub email: Option<String>,
    /// External author identifier; populated only in corpus B.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub external_author_id: Option<String>,
}

/// An affiliation entry as listed on a publication.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affiliation {
    pub affil_id: String,
    pub org_name: String,
}

/// A citation-index publication record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub pub_id: PubId,
    #[serde(skip)]
    pub source: CorpusTag,
    #[serde(flatten)]
    pub biblio: BiblioRecord,
    pub authors: Vec<AuthorMention>,
    #[serde(default)]
    pub affiliations: Vec<Affiliation>,
    /// (author position, affil_id) pairs; absent when the record carries no
    /// author-organization linkage at all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author_affil_links: Option<Vec<(u32, String)>>,
    /// Corresponding author: (position, affil_id).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reprint: Option<(u32, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meso_cluster: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub micro_cluster: Option<String>,
}

/// Discipline-cluster granularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClusterLevel {
    Meso,
    Micro,
}

impl fmt::Display for ClusterLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClusterLevel::Meso => f.write_str("meso"),
            ClusterLevel::Micro => f.write_str("micro"),
        }
    }
}

impl Publication {
    pub fn cluster(&self, level: ClusterLevel) -> Option<&str> {
        match level {
            ClusterLevel::Meso => self.meso_cluster.as_deref(),
            ClusterLevel::Micro => self.micro_cluster.as_deref(),
        }
    }

    pub fn mention(&self, position: u32) -> Option<&AuthorMention> {
        self.authors.iter().find(|m| m.position == position)
    }

    fn affiliation_by_id(&self, affil_id: &str) -> Option<&Affiliation> {
        self.affiliations.iter().find(|a| a.affil_id == affil_id)
    }

    /// Normalized organization key of an affiliation on this record.
    pub fn affiliation_key(&self, affil_id: &str) -> Option<String> {
        self.affiliation_by_id(affil_id).map(|a| org_key(&a.org_name))
    }
}

/// Registry organization id -> set of normalized corpus-affiliation name
/// keys. Built externally; organizations without a resolved counterpart
/// carry an empty set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrgAliasMap {
    entries: BTreeMap<String, BTreeSet<String>>,
}

#[derive(Serialize, Deserialize)]
struct AliasRow {
    org_id: String,
    alias_keys: Vec<String>,
}

impl OrgAliasMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, org_id: impl Into<String>, keys: impl IntoIterator<Item = String>) {
        self.entries
            .entry(org_id.into())
            .or_default()
            .extend(keys.into_iter().map(|k| org_key(&k)));
    }

    pub fn alias_keys(&self, org_id: &str) -> Option<&BTreeSet<String>> {
        self.entries.get(org_id)
    }

    /// Union of alias keys over all of the person's organizations.
    pub fn person_alias_keys(&self, person: &Person) -> BTreeSet<&str> {
        person
            .affiliation_ids
            .iter()
            .filter_map(|org| self.entries.get(org))
            .flat_map(|keys| keys.iter().map(String::as_str))
            .collect()
    }

    /// Every organization referenced by the registry must appear, possibly
    /// with an empty alias set.
    pub fn validate_covers(&self, registry: &[Person]) -> Result<()> {
        for person in registry {
            for org_id in &person.affiliation_ids {
                if !self.entries.contains_key(org_id) {
                    return Err(Error::MissingOrgAlias {
                        org_id: org_id.clone(),
                        person_id: person.person_id.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut map = OrgAliasMap::new();
        for (line_no, row) in read_jsonl_rows::<AliasRow>(path)? {
            if map.entries.contains_key(&row.org_id) {
                return Err(Error::malformed(
                    path,
                    line_no,
                    format!("duplicate org id `{}`", row.org_id),
                ));
            }
            map.entries.insert(
                row.org_id,
                row.alias_keys.iter().map(|k| org_key(k)).collect(),
            );
        }
        Ok(map)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_jsonl(
            path,
            self.entries.iter().map(|(org_id, keys)| AliasRow {
                org_id: org_id.clone(),
                alias_keys: keys.iter().cloned().collect(),
            }),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &BTreeSet<String>)> {
        self.entries.iter()
    }
}

/// All indexes derivable from a corpus's publications. Rebuilding from the
/// publications must reproduce these exactly.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusIndexes {
    pub email: BTreeMap<String, BTreeSet<(PubId, u32)>>,
    pub name: BTreeMap<NameKey, BTreeSet<(PubId, u32)>>,
    pub meso: BTreeMap<String, BTreeSet<PubId>>,
    pub micro: BTreeMap<String, BTreeSet<PubId>>,
    pub affiliation: BTreeMap<String, BTreeSet<PubId>>,
    pub external_id: BTreeMap<String, BTreeSet<(PubId, u32)>>,
}

impl CorpusIndexes {
    pub fn build(publications: &BTreeMap<PubId, Publication>) -> Self {
        let mut idx = CorpusIndexes::default();
        for (pub_id, publication) in publications {
            for mention in &publication.authors {
                let slot = (pub_id.clone(), mention.position);
                if let Some(email) = &mention.email {
                    idx.email.entry(email.clone()).or_default().insert(slot.clone());
                }
                if let Ok(key) = normalize_name(&mention.raw_name) {
                    idx.name.entry(key).or_default().insert(slot.clone());
                }
                if let Some(xid) = &mention.external_author_id {
                    idx.external_id.entry(xid.clone()).or_default().insert(slot);
                }
            }
            if let Some(meso) = &publication.meso_cluster {
                idx.meso.entry(meso.clone()).or_default().insert(pub_id.clone());
            }
            if let Some(micro) = &publication.micro_cluster {
                idx.micro.entry(micro.clone()).or_default().insert(pub_id.clone());
            }
            for affiliation in &publication.affiliations {
                idx.affiliation
                    .entry(org_key(&affiliation.org_name))
                    .or_default()
                    .insert(pub_id.clone());
            }
        }
        idx
    }
}

/// An immutable, validated, indexed publication corpus.
#[derive(Debug, Clone)]
pub struct Corpus {
    tag: CorpusTag,
    publications: BTreeMap<PubId, Publication>,
    indexes: CorpusIndexes,
    micro_to_meso: BTreeMap<String, String>,
}

impl Corpus {
    /// Validates publications, stamps the source tag, and builds all indexes.
    pub fn build(publications: Vec<Publication>, tag: CorpusTag) -> Result<Self> {
        let mut map = BTreeMap::new();
        for mut publication in publications {
            publication.source = tag;
            normalize_mention_emails(&mut publication);
            validate_publication(&publication).map_err(|msg| Error::Malformed {
                path: format!("corpus {tag}"),
                line: 0,
                msg: format!("publication `{}`: {msg}", publication.pub_id),
            })?;
            let id = publication.pub_id.clone();
            if map.insert(id.clone(), publication).is_some() {
                return Err(Error::Malformed {
                    path: format!("corpus {tag}"),
                    line: 0,
                    msg: format!("duplicate publication id `{id}`"),
                });
            }
        }
        let micro_to_meso = check_refinement(map.values())?;
        let indexes = CorpusIndexes::build(&map);
        Ok(Corpus {
            tag,
            publications: map,
            indexes,
            micro_to_meso,
        })
    }

    pub fn tag(&self) -> CorpusTag {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.publications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.publications.is_empty()
    }

    /// Publications in ascending `pub_id` order.
    pub fn publications(&self) -> impl Iterator<Item = &Publication> {
        self.publications.values()
    }

    pub fn get(&self, pub_id: &PubId) -> Option<&Publication> {
        self.publications.get(pub_id)
    }

    pub fn indexes(&self) -> &CorpusIndexes {
        &self.indexes
    }

    pub fn mentions_with_email(&self, email: &str) -> impl Iterator<Item = &(PubId, u32)> {
        self.indexes.email.get(email).into_iter().flatten()
    }

    pub fn mentions_with_key(&self, key: &NameKey) -> impl Iterator<Item = &(PubId, u32)> {
        self.indexes.name.get(key).into_iter().flatten()
    }

    pub fn mentions_with_external_id(&self, xid: &str) -> impl Iterator<Item = &(PubId, u32)> {
        self.indexes.external_id.get(xid).into_iter().flatten()
    }

    pub fn pubs_in_cluster(&self, level: ClusterLevel, cluster: &str) -> impl Iterator<Item = &PubId> {
        let index = match level {
            ClusterLevel::Meso => &self.indexes.meso,
            ClusterLevel::Micro => &self.indexes.micro,
        };
        index.get(cluster).into_iter().flatten()
    }

    pub fn cluster_index(&self, level: ClusterLevel) -> &BTreeMap<String, BTreeSet<PubId>> {
        match level {
            ClusterLevel::Meso => &self.indexes.meso,
            ClusterLevel::Micro => &self.indexes.micro,
        }
    }

    pub fn has_cluster_labels(&self, level: ClusterLevel) -> bool {
        !self.cluster_index(level).is_empty()
    }

    pub fn has_external_ids(&self) -> bool {
        !self.indexes.external_id.is_empty()
    }

    /// The corpus-wide micro-to-meso map (validated to be a function).
    pub fn micro_to_meso(&self) -> &BTreeMap<String, String> {
        &self.micro_to_meso
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_jsonl(path, self.publications.values())
    }
}

fn normalize_mention_emails(publication: &mut Publication) {
    for mention in &mut publication.authors {
        if let Some(email) = &mention.email {
            mention.email = Some(email.trim().to_lowercase());
        }
    }
}

fn validate_biblio(biblio: &BiblioRecord) -> std::result::Result<(), String> {
    if biblio.title.trim().is_empty() {
        return Err("empty title".to_string());
    }
    if !(1900..=2100).contains(&biblio.year) {
        return Err(format!("year {} outside [1900, 2100]", biblio.year));
    }
    Ok(())
}

fn validate_email(email: &str) -> std::result::Result<(), String> {
    if email.chars().filter(|&c| c == '@').count() != 1 {
        return Err(format!("email `{email}` must contain exactly one @"));
    }
    Ok(())
}

fn validate_publication(publication: &Publication) -> std::result::Result<(), String> {
    validate_biblio(&publication.biblio)?;

    let mut positions: Vec<u32> = publication.authors.iter().map(|m| m.position).collect();
    positions.sort_unstable();
    let contiguous = positions
        .iter()
        .enumerate()
        .all(|(i, &p)| p == (i + 1) as u32);
    if !contiguous {
        return Err(format!(
            "author positions {positions:?} are not contiguous 1..{}",
            positions.len()
        ));
    }

    for mention in &publication.authors {
        if normalize_name(&mention.raw_name).is_err() {
            return Err(format!(
                "author at position {} has no letters in name {:?}",
                mention.position, mention.raw_name
            ));
        }
        if let Some(email) = &mention.email {
            validate_email(email)?;
        }
    }

    let n = publication.authors.len() as u32;
    let check_ref = |position: u32, affil_id: &str, what: &str| {
        if position == 0 || position > n {
            return Err(format!("{what} references author position {position} of {n}"));
        }
        if publication.affiliation_by_id(affil_id).is_none() {
            return Err(format!("{what} references unknown affiliation `{affil_id}`"));
        }
        Ok(())
    };
    if let Some(links) = &publication.author_affil_links {
        for (position, affil_id) in links {
            check_ref(*position, affil_id, "author-affiliation link")?;
        }
    }
    if let Some((position, affil_id)) = &publication.reprint {
        check_ref(*position, affil_id, "reprint entry")?;
    }
    Ok(())
}

fn check_refinement<'a>(
    publications: impl Iterator<Item = &'a Publication>,
) -> Result<BTreeMap<String, String>> {
    let mut micro_to_meso: BTreeMap<String, String> = BTreeMap::new();
    for publication in publications {
        if let (Some(micro), Some(meso)) = (&publication.micro_cluster, &publication.meso_cluster) {
            match micro_to_meso.entry(micro.clone()) {
                Entry::Vacant(e) => {
                    e.insert(meso.clone());
                }
                Entry::Occupied(e) if e.get() != meso => {
                    return Err(Error::ClusterRefinement {
                        micro: micro.clone(),
                        meso_a: e.get().clone(),
                        meso_b: meso.clone(),
                    });
                }
                Entry::Occupied(_) => {}
            }
        }
    }
    Ok(micro_to_meso)
}

/// Reads a person registry: one JSON record per line, returned in file order.
pub fn load_registry(path: &Path) -> Result<Vec<Person>> {
    let rows = read_jsonl_rows::<Person>(path)?;
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut persons = Vec::with_capacity(rows.len());
    for (line_no, mut person) in rows {
        if person.person_id.0.is_empty() {
            return Err(Error::malformed(path, line_no, "empty person_id"));
        }
        if person.family_name.trim().is_empty() {
            return Err(Error::malformed(
                path,
                line_no,
                format!("person `{}` has empty family_name", person.person_id),
            ));
        }
        for email in &mut person.emails {
            *email = email.trim().to_lowercase();
            validate_email(email).map_err(|msg| Error::malformed(path, line_no, msg))?;
        }
        for record in &person.attributed_records {
            validate_biblio(record).map_err(|msg| {
                Error::malformed(
                    path,
                    line_no,
                    format!("attributed record of `{}`: {msg}", person.person_id),
                )
            })?;
        }
        if let Some(&first_line) = seen.get(&person.person_id.0) {
            return Err(Error::DuplicatePersonId {
                id: person.person_id.0,
                first_line,
                second_line: line_no,
            });
        }
        seen.insert(person.person_id.0.clone(), line_no);
        persons.push(person);
    }
    Ok(persons)
}

pub fn write_registry(path: &Path, persons: &[Person]) -> Result<()> {
    write_jsonl(path, persons.iter())
}

/// Reads and validates a publications file into an indexed corpus.
pub fn load_corpus(path: &Path, tag: CorpusTag) -> Result<Corpus> {
    let rows = read_jsonl_rows::<Publication>(path)?;
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut publications = Vec::with_capacity(rows.len());
    for (line_no, mut publication) in rows {
        publication.source = tag;
        normalize_mention_emails(&mut publication);
        validate_publication(&publication)
            .map_err(|msg| Error::malformed(path, line_no, msg))?;
        if let Some(&first_line) = seen.get(&publication.pub_id.0) {
            return Err(Error::DuplicatePubId {
                id: publication.pub_id.0,
                first_line,
                second_line: line_no,
            });
        }
        seen.insert(publication.pub_id.0.clone(), line_no);
        publications.push(publication);
    }
    Corpus::build(publications, tag)
}

pub(crate) fn read_jsonl_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: T = serde_json::from_str(&line)
            .map_err(|e| Error::malformed(path, line_no, e.to_string()))?;
        rows.push((line_no, value));
    }
    Ok(rows)
}

pub(crate) fn write_jsonl<T: Serialize>(
    path: &Path,
    items: impl Iterator<Item = T>,
) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(path, e))?;
        }
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    for item in items {
        let line = serde_json::to_string(&item)
            .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
        writer.write_all(line.as_bytes()).map_err(|e| Error::io(path, e))?;
        writer.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Plain-text line writer for the tab-separated pipeline outputs.
pub(crate) fn write_lines(path: &Path, lines: impl Iterator<Item = String>) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(path, e))?;
        }
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    for line in lines {
        writer.write_all(line.as_bytes()).map_err(|e| Error::io(path, e))?;
        writer.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        rows.push((idx + 1, line));
    }
    Ok(rows)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    pub(crate) fn person(id: &str, family: &str, givens: &[&str]) -> Person {
        Person {
            person_id: id.into(),
            family_name: family.to_string(),
            given_names: givens.iter().map(|g| g.to_string()).collect(),
            emails: vec![],
            affiliation_ids: vec![],
            attributed_records: vec![],
        }
    }

    pub(crate) fn mention(position: u32, raw_name: &str) -> AuthorMention {
        AuthorMention {
            position,
            raw_name: raw_name.to_string(),
            email: None,
            external_author_id: None,
        }
    }

    pub(crate) fn publication(id: &str, authors: &[AuthorMention]) -> Publication {
        Publication {
            pub_id: id.into(),
            source: CorpusTag::A,
            biblio: BiblioRecord {
                journal: "journal of tests".to_string(),
                year: 2005,
                title: format!("a sufficiently descriptive test title for {id}"),
                first_page: "1".to_string(),
            },
            authors: authors.to_vec(),
            affiliations: vec![],
            author_affil_links: None,
            reprint: None,
            meso_cluster: None,
            micro_cluster: None,
        }
    }

    /// Fluent builder for publications in unit fixtures.
    pub(crate) struct PubBuilder {
        p: Publication,
    }

    impl PubBuilder {
        pub(crate) fn new(id: &str) -> Self {
            PubBuilder {
                p: publication(id, &[]),
            }
        }

        pub(crate) fn biblio(mut self, journal: &str, year: i32, title: &str, page: &str) -> Self {
            self.p.biblio = BiblioRecord {
                journal: journal.to_string(),
                year,
                title: title.to_string(),
                first_page: page.to_string(),
            };
            self
        }

        pub(crate) fn author(mut self, m: AuthorMention) -> Self {
            self.p.authors.push(m);
            self
        }

        pub(crate) fn affiliation(mut self, affil_id: &str, org_name: &str) -> Self {
            self.p.affiliations.push(Affiliation {
                affil_id: affil_id.to_string(),
                org_name: org_name.to_string(),
            });
            self
        }

        pub(crate) fn link(mut self, position: u32, affil_id: &str) -> Self {
            self.p
                .author_affil_links
                .get_or_insert_with(Vec::new)
                .push((position, affil_id.to_string()));
            self
        }

        /// Marks the record as carrying linkage data without any entries.
        pub(crate) fn empty_links(mut self) -> Self {
            self.p.author_affil_links.get_or_insert_with(Vec::new);
            self
        }

        pub(crate) fn reprint(mut self, position: u32, affil_id: &str) -> Self {
            self.p.reprint = Some((position, affil_id.to_string()));
            self
        }

        pub(crate) fn meso(mut self, id: &str) -> Self {
            self.p.meso_cluster = Some(id.to_string());
            self
        }

        pub(crate) fn micro(mut self, id: &str) -> Self {
            self.p.micro_cluster = Some(id.to_string());
            self
        }

        pub(crate) fn build(self) -> Publication {
            self.p
        }
    }

    pub(crate) fn mention_with_email(position: u32, raw_name: &str, email: &str) -> AuthorMention {
        AuthorMention {
            position,
            raw_name: raw_name.to_string(),
            email: Some(email.to_string()),
            external_author_id: None,
        }
    }

    pub(crate) fn mention_with_xid(position: u32, raw_name: &str, xid: &str) -> AuthorMention {
        AuthorMention {
            position,
            raw_name: raw_name.to_string(),
            email: None,
            external_author_id: Some(xid.to_string()),
        }
    }
}
