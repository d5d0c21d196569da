//! Cross-database record matching: decide whether a bibliographic record
//! (from a registry CV or from corpus A) and a corpus publication describe
//! the same document.
//!
//! Matching is deliberately conservative. Candidates are blocked on the
//! exact-match fields demanded by the [`MatchPolicy`] (normalized journal,
//! year, first page), and only the title comparison is fuzzy, tolerating a
//! bounded edit fraction to absorb subtitle truncation and punctuation
//! differences between databases.

use std::collections::BTreeMap;

use crate::corpus::{BiblioRecord, Corpus, PubId};
use crate::namekit::{fold_text, levenshtein};

/// Which fields must agree exactly, and how much the titles may differ.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchPolicy {
    pub require_journal: bool,
    pub require_year: bool,
    pub require_first_page: bool,
    /// Maximum Levenshtein distance between normalized titles, as a fraction
    /// of the longer title's character length.
    pub title_max_edit_ratio: f64,
}

impl Default for MatchPolicy {
    fn default() -> Self {
        MatchPolicy {
            require_journal: true,
            require_year: true,
            require_first_page: true,
            title_max_edit_ratio: 0.1,
        }
    }
}

impl MatchPolicy {
    /// True when `other` accepts every pair this policy accepts: it requires
    /// a subset of the exact fields and tolerates at least as much title
    /// divergence.
    pub fn relaxes_to(&self, other: &MatchPolicy) -> bool {
        (!other.require_journal || self.require_journal)
            && (!other.require_year || self.require_year)
            && (!other.require_first_page || self.require_first_page)
            && other.title_max_edit_ratio >= self.title_max_edit_ratio
    }
}

/// Folds journal and title to lowercase alphanumeric words and strips
/// leading zeros from the first page. Idempotent: normalizing an already
/// normalized record changes nothing.
pub fn normalize_biblio(record: &BiblioRecord) -> BiblioRecord {
    BiblioRecord {
        journal: fold_text(&record.journal),
        year: record.year,
        title: fold_text(&record.title),
        first_page: normalize_page(&record.first_page),
    }
}

fn normalize_page(raw: &str) -> String {
    let trimmed = raw.trim().to_lowercase();
    let stripped = trimmed.trim_start_matches('0');
    if stripped.is_empty() && !trimmed.is_empty() {
        "0".to_string()
    } else {
        stripped.to_string()
    }
}

type BlockKey = (Option<String>, Option<i32>, Option<String>);

fn block_key(normalized: &BiblioRecord, policy: &MatchPolicy) -> BlockKey {
    (
        policy.require_journal.then(|| normalized.journal.clone()),
        policy.require_year.then_some(normalized.year),
        policy
            .require_first_page
            .then(|| normalized.first_page.clone()),
    )
}

fn titles_compatible(a: &str, b: &str, max_ratio: f64) -> bool {
    let longest = a.chars().count().max(b.chars().count());
    levenshtein(a, b) as f64 <= max_ratio * longest as f64
}

/// Blocked matcher over one corpus under a fixed policy.
pub struct RecordMatcher {
    policy: MatchPolicy,
    blocks: BTreeMap<BlockKey, Vec<(PubId, BiblioRecord)>>,
}

impl RecordMatcher {
    pub fn new(corpus: &Corpus, policy: MatchPolicy) -> Self {
        let mut blocks: BTreeMap<BlockKey, Vec<(PubId, BiblioRecord)>> = BTreeMap::new();
        for publication in corpus.publications() {
            let normalized = normalize_biblio(&publication.biblio);
            let key = block_key(&normalized, &policy);
            blocks
                .entry(key)
                .or_default()
                .push((publication.pub_id.clone(), normalized));
        }
        RecordMatcher { policy, blocks }
    }

    pub fn policy(&self) -> &MatchPolicy {
        &self.policy
    }

    /// Publications matching `record`, in ascending `pub_id` order.
    pub fn match_record(&self, record: &BiblioRecord) -> Vec<PubId> {
        let normalized = normalize_biblio(record);
        let key = block_key(&normalized, &self.policy);
        let Some(candidates) = self.blocks.get(&key) else {
            return Vec::new();
        };
        candidates
            .iter()
            .filter(|(_, candidate)| {
                titles_compatible(
                    &normalized.title,
                    &candidate.title,
                    self.policy.title_max_edit_ratio,
                )
            })
            .map(|(pub_id, _)| pub_id.clone())
            .collect()
    }
}
