//! Oeuvre expansion: grow each person's pruned seed into their full
//! publication set, either through discipline clusters (same name key
//! inside a cluster the person already publishes in) or through external
//! author identifiers harvested from a second corpus.
//!
//! Expansion never invents persons: someone absent from the seed stays
//! absent from every expansion. Expansion also never removes anything —
//! the pruned seed is re-emitted verbatim under the `SEED` method.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{read_lines, write_lines, ClusterLevel, Corpus, PersonId, PubId};
use crate::error::{Error, Result};
use crate::namekit::{keys_compatible, normalize_name, NameKey};
use crate::par;
use crate::recmatch::RecordMatcher;
use crate::seeder::SeedSet;

/// How an assignment entered the oeuvre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Seed,
    Meso,
    Micro,
    Xid,
}

impl Method {
    pub fn token(self) -> &'static str {
        match self {
            Method::Seed => "SEED",
            Method::Meso => "MESO",
            Method::Micro => "MICRO",
            Method::Xid => "XID",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_uppercase().as_str() {
            "SEED" => Ok(Method::Seed),
            "MESO" => Ok(Method::Meso),
            "MICRO" => Ok(Method::Micro),
            "XID" => Ok(Method::Xid),
            other => Err(Error::UnknownExpansion(other.to_string())),
        }
    }
}

/// One oeuvre row: person, corpus-A publication, byline position, method.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OeuvreAssignment {
    pub person_id: PersonId,
    pub pub_id: PubId,
    pub position: u32,
    pub method: Method,
}

/// A deduplicated set of oeuvre assignments with per-method provenance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OeuvreSet {
    assignments: BTreeSet<OeuvreAssignment>,
}

impl FromIterator<OeuvreAssignment> for OeuvreSet {
    fn from_iter<I: IntoIterator<Item = OeuvreAssignment>>(iter: I) -> Self {
        OeuvreSet {
            assignments: iter.into_iter().collect(),
        }
    }
}

impl OeuvreSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The pruned seed as an oeuvre: every unique (person, pub, position)
    /// assignment re-tagged `SEED`, strategy provenance collapsed.
    pub fn from_seed(seed: &SeedSet) -> Self {
        seed.unique_assignments()
            .into_iter()
            .map(|(person_id, pub_id, position)| OeuvreAssignment {
                person_id,
                pub_id,
                position,
                method: Method::Seed,
            })
            .collect()
    }

    pub fn insert(&mut self, assignment: OeuvreAssignment) -> bool {
        self.assignments.insert(assignment)
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn contains(&self, assignment: &OeuvreAssignment) -> bool {
        self.assignments.contains(assignment)
    }

    /// Rows in (person_id, pub_id, position, method) order.
    pub fn iter(&self) -> impl Iterator<Item = &OeuvreAssignment> {
        self.assignments.iter()
    }

    pub fn method_counts(&self) -> BTreeMap<Method, usize> {
        let mut counts = BTreeMap::new();
        for a in &self.assignments {
            *counts.entry(a.method).or_insert(0) += 1;
        }
        counts
    }

    /// Distinct (person, pub) pairs — the evaluation unit.
    pub fn unique_pairs(&self) -> BTreeSet<(PersonId, PubId)> {
        self.assignments
            .iter()
            .map(|a| (a.person_id.clone(), a.pub_id.clone()))
            .collect()
    }

    /// Distinct (person, pub, position) assignments, method collapsed.
    pub fn unique_assignments(&self) -> BTreeSet<(PersonId, PubId, u32)> {
        self.assignments
            .iter()
            .map(|a| (a.person_id.clone(), a.pub_id.clone(), a.position))
            .collect()
    }

    pub fn persons(&self) -> BTreeSet<PersonId> {
        self.assignments
            .iter()
            .map(|a| a.person_id.clone())
            .collect()
    }

    pub fn retain(&mut self, keep: impl Fn(&OeuvreAssignment) -> bool) {
        self.assignments.retain(|a| keep(a));
    }
}

impl<'a> IntoIterator for &'a OeuvreSet {
    type Item = &'a OeuvreAssignment;
    type IntoIter = std::collections::btree_set::Iter<'a, OeuvreAssignment>;

    fn into_iter(self) -> Self::IntoIter {
        self.assignments.iter()
    }
}

/// The seed triples of one person, grouped for expansion.
struct PersonSeed {
    person_id: PersonId,
    /// Distinct seed publications.
    pubs: BTreeSet<PubId>,
    /// Name keys of the person's seed mentions.
    keys: BTreeSet<NameKey>,
}

fn group_seed_by_person(seed: &SeedSet, corpus: &Corpus) -> Vec<PersonSeed> {
    let mut grouped: BTreeMap<PersonId, PersonSeed> = BTreeMap::new();
    for t in seed {
        let entry = grouped
            .entry(t.person_id.clone())
            .or_insert_with(|| PersonSeed {
                person_id: t.person_id.clone(),
                pubs: BTreeSet::new(),
                keys: BTreeSet::new(),
            });
        entry.pubs.insert(t.pub_id.clone());
        if let Some(mention) = corpus.get(&t.pub_id).and_then(|p| p.mention(t.position)) {
            if let Ok(key) = normalize_name(&mention.raw_name) {
                entry.keys.insert(key);
            }
        }
    }
    grouped.into_values().collect()
}

/// Cluster expansion at the requested level. For each person, every
/// publication sharing a cluster with one of their seed publications and
/// carrying a mention with one of the person's seed name keys is assigned
/// to them. With `anchored` false the cluster co-membership requirement is
/// dropped and any labeled publication with a matching key qualifies.
/// Publications without a label at this level are unreachable either way.
/// The pruned seed is re-emitted under `SEED`.
pub fn expand_clusters(
    seed: &SeedSet,
    corpus: &Corpus,
    level: ClusterLevel,
    anchored: bool,
) -> OeuvreSet {
    let method = match level {
        ClusterLevel::Meso => Method::Meso,
        ClusterLevel::Micro => Method::Micro,
    };
    let persons = group_seed_by_person(seed, corpus);
    let expanded = par::flat_map_vec(&persons, |person| {
        let candidate_pubs: BTreeSet<&PubId> = if anchored {
            person
                .pubs
                .iter()
                .filter_map(|pub_id| corpus.get(pub_id))
                .filter_map(|publication| publication.cluster(level))
                .collect::<BTreeSet<&str>>()
                .into_iter()
                .flat_map(|cluster| corpus.pubs_in_cluster(level, cluster))
                .collect()
        } else {
            corpus
                .cluster_index(level)
                .values()
                .flatten()
                .collect()
        };
        let mut out = Vec::new();
        for pub_id in candidate_pubs {
            let publication = corpus.get(pub_id).expect("cluster index is in-corpus");
            for mention in &publication.authors {
                let Ok(key) = normalize_name(&mention.raw_name) else {
                    continue;
                };
                if person.keys.contains(&key) {
                    out.push(OeuvreAssignment {
                        person_id: person.person_id.clone(),
                        pub_id: pub_id.clone(),
                        position: mention.position,
                        method,
                    });
                }
            }
        }
        out
    });
    let mut oeuvre = OeuvreSet::from_seed(seed);
    for assignment in expanded {
        oeuvre.insert(assignment);
    }
    oeuvre
}

/// External identifiers collected for one person from corpus B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XidProfile {
    pub person_id: PersonId,
    pub external_author_ids: BTreeSet<String>,
    /// True iff the id count exceeded the cap; such profiles emit nothing.
    pub discarded: bool,
}

/// Maps every seed publication into corpus B and collects the external
/// author id of the name-compatible mention there. A person accumulating
/// more than `cap` distinct ids is marked discarded: so many identifiers
/// signal an unreliable name match rather than a prolific author. Persons
/// whose seed pubs have no corpus-B counterpart simply end up with an
/// empty id set.
pub fn harvest_external_ids(
    seed: &SeedSet,
    corpus_a: &Corpus,
    corpus_b: &Corpus,
    matcher_b: &RecordMatcher,
    cap: usize,
) -> Vec<XidProfile> {
    let mut triples_by_person: BTreeMap<PersonId, Vec<(&PubId, u32)>> = BTreeMap::new();
    for t in seed {
        triples_by_person
            .entry(t.person_id.clone())
            .or_default()
            .push((&t.pub_id, t.position));
    }
    let grouped: Vec<(PersonId, Vec<(&PubId, u32)>)> = triples_by_person.into_iter().collect();
    par::map_vec(&grouped, |(person_id, triples)| {
        let mut ids = BTreeSet::new();
        for (pub_id, position) in triples {
            let Some(a_pub) = corpus_a.get(pub_id) else {
                continue;
            };
            let Some(a_mention) = a_pub.mention(*position) else {
                continue;
            };
            let Ok(a_key) = normalize_name(&a_mention.raw_name) else {
                continue;
            };
            let hits = matcher_b.match_record(&a_pub.biblio);
            let [b_pub_id] = hits.as_slice() else {
                continue; // absent or ambiguous in corpus B
            };
            let b_pub = corpus_b.get(b_pub_id).expect("matcher returns in-corpus ids");
            let compatible = b_pub
                .authors
                .iter()
                .filter(|m| {
                    normalize_name(&m.raw_name)
                        .map(|k| keys_compatible(&a_key, &k))
                        .unwrap_or(false)
                })
                .min_by_key(|m| m.position);
            if let Some(id) = compatible.and_then(|m| m.external_author_id.clone()) {
                ids.insert(id);
            }
        }
        let discarded = ids.len() > cap;
        if discarded {
            log::debug!(
                "person {person_id} harvested {} external ids (cap {cap}); discarded",
                ids.len()
            );
        }
        XidProfile {
            person_id: person_id.clone(),
            external_author_ids: ids,
            discarded,
        }
    })
}

/// For each non-discarded profile, finds every corpus-B publication whose
/// byline carries one of the profile's ids, maps it back to corpus A
/// (unique matches only), and assigns the A publication at the position of
/// the mention name-compatible with the id-bearing B mention. The pruned
/// seed is re-emitted under `SEED`.
pub fn expand_external_ids(
    profiles: &[XidProfile],
    seed: &SeedSet,
    corpus_a: &Corpus,
    corpus_b: &Corpus,
    matcher_a: &RecordMatcher,
) -> OeuvreSet {
    let expanded = par::flat_map_vec(profiles, |profile| {
        if profile.discarded {
            return Vec::new();
        }
        let mut out = Vec::new();
        for id in &profile.external_author_ids {
            for (b_pub_id, b_position) in corpus_b.mentions_with_external_id(id) {
                let b_pub = corpus_b.get(b_pub_id).expect("xid index is in-corpus");
                let Some(b_mention) = b_pub.mention(*b_position) else {
                    continue;
                };
                let Ok(b_key) = normalize_name(&b_mention.raw_name) else {
                    continue;
                };
                let hits = matcher_a.match_record(&b_pub.biblio);
                let [a_pub_id] = hits.as_slice() else {
                    continue; // no unique corpus-A counterpart
                };
                let a_pub = corpus_a.get(a_pub_id).expect("matcher returns in-corpus ids");
                let compatible = a_pub
                    .authors
                    .iter()
                    .filter(|m| {
                        normalize_name(&m.raw_name)
                            .map(|k| keys_compatible(&b_key, &k))
                            .unwrap_or(false)
                    })
                    .min_by_key(|m| m.position);
                if let Some(a_mention) = compatible {
                    out.push(OeuvreAssignment {
                        person_id: profile.person_id.clone(),
                        pub_id: a_pub_id.clone(),
                        position: a_mention.position,
                        method: Method::Xid,
                    });
                }
            }
        }
        out
    });
    let mut oeuvre = OeuvreSet::from_seed(seed);
    for assignment in expanded {
        oeuvre.insert(assignment);
    }
    oeuvre
}

/// Union on full rows; method provenance is preserved per row. Idempotent.
pub fn combine_oeuvres(sets: impl IntoIterator<Item = OeuvreSet>) -> OeuvreSet {
    sets.into_iter().flat_map(|s| s.assignments).collect()
}

/// Writes one `person_id TAB pub_id TAB position TAB methods` line per
/// distinct (person, pub, position), methods comma-joined in canonical
/// order, rows sorted by (person_id, pub_id, position).
pub fn write_oeuvre(path: &Path, oeuvre: &OeuvreSet) -> Result<()> {
    let mut grouped: BTreeMap<(PersonId, PubId, u32), BTreeSet<Method>> = BTreeMap::new();
    for a in oeuvre {
        grouped
            .entry((a.person_id.clone(), a.pub_id.clone(), a.position))
            .or_default()
            .insert(a.method);
    }
    write_lines(
        path,
        grouped.into_iter().map(|((person, pub_id, position), methods)| {
            let tokens: Vec<&str> = methods.into_iter().map(Method::token).collect();
            format!("{person}\t{pub_id}\t{position}\t{}", tokens.join(","))
        }),
    )
}

/// Reads an oeuvre file back, validating rows against corpus A.
pub fn read_oeuvre(path: &Path, corpus_a: &Corpus) -> Result<OeuvreSet> {
    let mut oeuvre = OeuvreSet::new();
    for (line_no, line) in read_lines(path)? {
        let fields: Vec<&str> = line.split('\t').collect();
        let [person_id, pub_id, position, methods] = fields.as_slice() else {
            return Err(Error::malformed(
                path,
                line_no,
                format!("expected 4 tab-separated fields, got {}", fields.len()),
            ));
        };
        let position: u32 = position
            .parse()
            .map_err(|_| Error::malformed(path, line_no, format!("bad position `{position}`")))?;
        let pub_id = PubId(pub_id.to_string());
        match corpus_a.get(&pub_id) {
            None => {
                return Err(Error::malformed(
                    path,
                    line_no,
                    format!("publication `{pub_id}` not in corpus {}", corpus_a.tag()),
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
        for token in methods.split(',') {
            oeuvre.insert(OeuvreAssignment {
                person_id: PersonId(person_id.to_string()),
                pub_id: pub_id.clone(),
                position,
                method: token.parse()?,
            });
        }
    }
    Ok(oeuvre)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::test_support::*;
    use crate::corpus::CorpusTag;
    use crate::recmatch::MatchPolicy;
    use crate::seeder::{SeedTriple, Strategy};

    fn seed_of(triples: &[(&str, &str, u32)]) -> SeedSet {
        triples
            .iter()
            .map(|(pub_id, person, position)| SeedTriple {
                person_id: (*person).into(),
                pub_id: (*pub_id).into(),
                position: *position,
                strategy: Strategy::Em,
            })
            .collect()
    }

    fn clustered_corpus() -> Corpus {
        let pubs = vec![
            PubBuilder::new("P1")
                .author(mention(1, "A. de Jong"))
                .meso("M1")
                .micro("m1")
                .build(),
            // Same key, same meso, same micro: reachable at both levels.
            PubBuilder::new("P2")
                .author(mention(1, "A. de Jong"))
                .meso("M1")
                .micro("m1")
                .build(),
            // Same key, same meso, different micro: meso-only.
            PubBuilder::new("P3")
                .author(mention(2, "A. de Jong"))
                .author(mention(1, "B. Visser"))
                .meso("M1")
                .micro("m2")
                .build(),
            // Same key, different meso: unreachable when anchored.
            PubBuilder::new("P4")
                .author(mention(1, "A. de Jong"))
                .meso("M2")
                .micro("m3")
                .build(),
            // Same meso, different key: never assigned.
            PubBuilder::new("P5")
                .author(mention(1, "C. Claes"))
                .meso("M1")
                .micro("m1")
                .build(),
        ];
        Corpus::build(pubs, CorpusTag::A).unwrap()
    }

    fn pubs_of(oeuvre: &OeuvreSet, person: &str) -> BTreeSet<PubId> {
        oeuvre
            .iter()
            .filter(|a| a.person_id == person.into())
            .map(|a| a.pub_id.clone())
            .collect()
    }

    #[test]
    fn anchored_cluster_expansion_stays_in_seeded_clusters() {
        let corpus = clustered_corpus();
        let seed = seed_of(&[("P1", "p1", 1)]);
        let meso = expand_clusters(&seed, &corpus, ClusterLevel::Meso, true);
        assert_eq!(
            pubs_of(&meso, "p1"),
            ["P1", "P2", "P3"].map(PubId::from).into_iter().collect()
        );
        // The P3 assignment lands at the matching mention's position.
        assert!(meso.contains(&OeuvreAssignment {
            person_id: "p1".into(),
            pub_id: "P3".into(),
            position: 2,
            method: Method::Meso,
        }));

        let micro = expand_clusters(&seed, &corpus, ClusterLevel::Micro, true);
        assert_eq!(
            pubs_of(&micro, "p1"),
            ["P1", "P2"].map(PubId::from).into_iter().collect()
        );
    }

    #[test]
    fn unanchored_expansion_reaches_foreign_clusters() {
        let corpus = clustered_corpus();
        let seed = seed_of(&[("P1", "p1", 1)]);
        let meso = expand_clusters(&seed, &corpus, ClusterLevel::Meso, false);
        assert_eq!(
            pubs_of(&meso, "p1"),
            ["P1", "P2", "P3", "P4"].map(PubId::from).into_iter().collect()
        );
    }

    #[test]
    fn micro_expansion_is_subset_of_meso() {
        let corpus = clustered_corpus();
        let seed = seed_of(&[("P1", "p1", 1), ("P5", "p2", 1)]);
        let meso = expand_clusters(&seed, &corpus, ClusterLevel::Meso, true);
        let micro = expand_clusters(&seed, &corpus, ClusterLevel::Micro, true);
        let meso_pairs = meso.unique_pairs();
        for pair in micro.unique_pairs() {
            assert!(meso_pairs.contains(&pair));
        }
    }

    #[test]
    fn expansion_preserves_seed_and_invents_no_persons() {
        let corpus = clustered_corpus();
        let seed = seed_of(&[("P1", "p1", 1)]);
        for level in [ClusterLevel::Meso, ClusterLevel::Micro] {
            for anchored in [true, false] {
                let oeuvre = expand_clusters(&seed, &corpus, level, anchored);
                for row in &OeuvreSet::from_seed(&seed) {
                    assert!(oeuvre.contains(row));
                }
                assert_eq!(oeuvre.persons(), seed.persons());
            }
        }
    }

    #[test]
    fn unlabeled_corpus_expands_to_seed_only() {
        let corpus = Corpus::build(
            vec![publication("P1", &[mention(1, "A. de Jong")])],
            CorpusTag::A,
        )
        .unwrap();
        let seed = seed_of(&[("P1", "p1", 1)]);
        let oeuvre = expand_clusters(&seed, &corpus, ClusterLevel::Meso, true);
        assert_eq!(oeuvre, OeuvreSet::from_seed(&seed));
    }

    /// Corpus pair where A-pub "Pn" and B-pub "Qn" share a biblio record.
    fn paired_corpora(n: usize, ids: &[&str]) -> (Corpus, Corpus) {
        let mut a_pubs = Vec::new();
        let mut b_pubs = Vec::new();
        for i in 0..n {
            let title = format!("contribution number {i} to the study of things");
            let a = PubBuilder::new(&format!("P{i}"))
                .biblio("J. Things", 2005, &title, &format!("{}", 100 + i))
                .author(mention(1, "A. de Jong"))
                .build();
            a_pubs.push(a);
            let b = PubBuilder::new(&format!("Q{i}"))
                .biblio("J. Things", 2005, &title, &format!("{}", 100 + i))
                .author(mention_with_xid(1, "Jong, A. de", ids[i % ids.len()]))
                .build();
            b_pubs.push(b);
        }
        (
            Corpus::build(a_pubs, CorpusTag::A).unwrap(),
            Corpus::build(b_pubs, CorpusTag::B).unwrap(),
        )
    }

    #[test]
    fn harvest_collects_ids_from_matched_counterparts() {
        let (corpus_a, corpus_b) = paired_corpora(4, &["s1", "s2"]);
        let matcher_b = RecordMatcher::new(&corpus_b, MatchPolicy::default());
        let seed = seed_of(&[("P0", "p1", 1), ("P1", "p1", 1)]);
        let profiles = harvest_external_ids(&seed, &corpus_a, &corpus_b, &matcher_b, 10);
        assert_eq!(profiles.len(), 1);
        assert_eq!(
            profiles[0].external_author_ids,
            ["s1", "s2"].map(String::from).into_iter().collect()
        );
        assert!(!profiles[0].discarded);
    }

    #[test]
    fn seed_pub_without_b_counterpart_yields_empty_profile() {
        let (corpus_a, _) = paired_corpora(2, &["s1"]);
        let empty_b = Corpus::build(vec![], CorpusTag::B).unwrap();
        let matcher_b = RecordMatcher::new(&empty_b, MatchPolicy::default());
        let seed = seed_of(&[("P0", "p1", 1)]);
        let profiles = harvest_external_ids(&seed, &corpus_a, &empty_b, &matcher_b, 10);
        assert_eq!(profiles.len(), 1);
        assert!(profiles[0].external_author_ids.is_empty());
        assert!(!profiles[0].discarded);
    }

    #[test]
    fn cap_discards_eleven_ids_but_not_ten() {
        let ids: Vec<String> = (0..11).map(|i| format!("s{i:02}")).collect();
        let id_refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let (corpus_a, corpus_b) = paired_corpora(11, &id_refs);
        let matcher_b = RecordMatcher::new(&corpus_b, MatchPolicy::default());
        let all_pubs: Vec<(String, &str, u32)> =
            (0..11).map(|i| (format!("P{i}"), "p1", 1)).collect();
        let seed: SeedSet = all_pubs
            .iter()
            .map(|(pub_id, person, position)| SeedTriple {
                person_id: (*person).into(),
                pub_id: PubId(pub_id.clone()),
                position: *position,
                strategy: Strategy::Em,
            })
            .collect();

        let profiles = harvest_external_ids(&seed, &corpus_a, &corpus_b, &matcher_b, 10);
        assert_eq!(profiles[0].external_author_ids.len(), 11);
        assert!(profiles[0].discarded);
        let matcher_a = RecordMatcher::new(&corpus_a, MatchPolicy::default());
        let oeuvre = expand_external_ids(&profiles, &seed, &corpus_a, &corpus_b, &matcher_a);
        assert_eq!(oeuvre.method_counts().get(&Method::Xid), None);
        // Seed rows are still present.
        assert_eq!(oeuvre.len(), seed.unique_len());

        // With the cap raised to 11 the same profiles would expand.
        let profiles = harvest_external_ids(&seed, &corpus_a, &corpus_b, &matcher_b, 11);
        assert!(!profiles[0].discarded);
        let oeuvre = expand_external_ids(&profiles, &seed, &corpus_a, &corpus_b, &matcher_a);
        assert!(oeuvre.method_counts()[&Method::Xid] > 0);
    }

    #[test]
    fn xid_expansion_finds_publications_beyond_the_seed() {
        // Seed covers P0 only; the shared id s1 sits on all B records, so
        // expansion pulls in P1 as well.
        let (corpus_a, corpus_b) = paired_corpora(2, &["s1"]);
        let matcher_a = RecordMatcher::new(&corpus_a, MatchPolicy::default());
        let matcher_b = RecordMatcher::new(&corpus_b, MatchPolicy::default());
        let seed = seed_of(&[("P0", "p1", 1)]);
        let profiles = harvest_external_ids(&seed, &corpus_a, &corpus_b, &matcher_b, 10);
        let oeuvre = expand_external_ids(&profiles, &seed, &corpus_a, &corpus_b, &matcher_a);
        assert_eq!(
            pubs_of(&oeuvre, "p1"),
            ["P0", "P1"].map(PubId::from).into_iter().collect()
        );
        assert!(oeuvre.contains(&OeuvreAssignment {
            person_id: "p1".into(),
            pub_id: "P1".into(),
            position: 1,
            method: Method::Xid,
        }));
    }

    #[test]
    fn ambiguous_back_mapping_is_dropped() {
        // Two A-pubs share identical biblio fields; the B record maps to
        // both, so XID expansion must not assign either.
        let title = "an ambiguous publication title of adequate length";
        let a_pubs = vec![
            PubBuilder::new("P1")
                .biblio("J. Things", 2005, title, "7")
                .author(mention(1, "A. de Jong"))
                .build(),
            PubBuilder::new("P2")
                .biblio("J. Things", 2005, title, "7")
                .author(mention(1, "A. de Jong"))
                .build(),
            PubBuilder::new("P3")
                .biblio("J. Other", 2006, "a unique seed publication", "1")
                .author(mention(1, "A. de Jong"))
                .build(),
        ];
        let b_pubs = vec![
            PubBuilder::new("Q1")
                .biblio("J. Things", 2005, title, "7")
                .author(mention_with_xid(1, "A. de Jong", "s1"))
                .build(),
            PubBuilder::new("Q3")
                .biblio("J. Other", 2006, "a unique seed publication", "1")
                .author(mention_with_xid(1, "A. de Jong", "s1"))
                .build(),
        ];
        let corpus_a = Corpus::build(a_pubs, CorpusTag::A).unwrap();
        let corpus_b = Corpus::build(b_pubs, CorpusTag::B).unwrap();
        let matcher_a = RecordMatcher::new(&corpus_a, MatchPolicy::default());
        let matcher_b = RecordMatcher::new(&corpus_b, MatchPolicy::default());
        let seed = seed_of(&[("P3", "p1", 1)]);
        let profiles = harvest_external_ids(&seed, &corpus_a, &corpus_b, &matcher_b, 10);
        assert_eq!(
            profiles[0].external_author_ids,
            BTreeSet::from(["s1".to_string()])
        );
        let oeuvre = expand_external_ids(&profiles, &seed, &corpus_a, &corpus_b, &matcher_a);
        assert_eq!(pubs_of(&oeuvre, "p1"), BTreeSet::from([PubId::from("P3")]));
    }

    #[test]
    fn combine_unions_rows_and_keeps_methods() {
        let xid: OeuvreSet = [
            OeuvreAssignment {
                person_id: "p1".into(),
                pub_id: "P1".into(),
                position: 1,
                method: Method::Xid,
            },
            OeuvreAssignment {
                person_id: "p1".into(),
                pub_id: "P2".into(),
                position: 1,
                method: Method::Xid,
            },
        ]
        .into_iter()
        .collect();
        let meso: OeuvreSet = [OeuvreAssignment {
            person_id: "p1".into(),
            pub_id: "P1".into(),
            position: 1,
            method: Method::Meso,
        }]
        .into_iter()
        .collect();
        let combined = combine_oeuvres([xid.clone(), meso.clone()]);
        assert_eq!(combined.len(), 3);
        assert_eq!(combined.unique_assignments().len(), 2);
        assert!(combined.len() >= xid.len().max(meso.len()));
        // Idempotence.
        assert_eq!(combine_oeuvres([combined.clone(), combined.clone()]), combined);
    }

    #[test]
    fn oeuvre_file_round_trips_and_groups_methods() {
        let corpus = clustered_corpus();
        let oeuvre: OeuvreSet = [
            OeuvreAssignment {
                person_id: "p1".into(),
                pub_id: "P1".into(),
                position: 1,
                method: Method::Seed,
            },
            OeuvreAssignment {
                person_id: "p1".into(),
                pub_id: "P1".into(),
                position: 1,
                method: Method::Meso,
            },
            OeuvreAssignment {
                person_id: "p1".into(),
                pub_id: "P2".into(),
                position: 1,
                method: Method::Micro,
            },
        ]
        .into_iter()
        .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("oeuvre.tsv");
        write_oeuvre(&path, &oeuvre).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "p1\tP1\t1\tSEED,MESO\np1\tP2\t1\tMICRO\n");
        assert_eq!(read_oeuvre(&path, &corpus).unwrap(), oeuvre);
    }
}
