//! Name normalization, string similarity, and corpus-wide name-frequency
//! statistics.
//!
//! The canonical form of an author name is a [`NameKey`]: the first initial
//! of the given name plus the lowercased, diacritic-folded last name with
//! surname particles ("de", "van der", ...) retained. Comma-inverted
//! ("Jong, A. de") and natural ("A. de Jong") renderings of the same name
//! normalize to the same key.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::corpus::{Corpus, Person};
use crate::error::{Error, Result};

/// Surname particles kept inside the last name. Dropping them would merge
/// "de Jong" with "Jong" and inflate homonymy.
const PARTICLES: &[&str] = &[
    "aan", "af", "al", "auf", "av", "bij", "da", "das", "de", "del", "della", "den", "der", "des",
    "di", "dos", "du", "el", "het", "la", "le", "lo", "op", "te", "ten", "ter", "tot", "van",
    "von", "y", "zu", "zum", "zur",
];

fn is_particle(token: &str) -> bool {
    PARTICLES.contains(&token)
}

/// Canonical (first initial, last name) key for an author name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NameKey {
    pub first_initial: char,
    pub last_name: String,
}

impl fmt::Display for NameKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}. {}", self.first_initial, self.last_name)
    }
}

/// Lowercases, folds diacritics, replaces punctuation with spaces, and
/// collapses whitespace. Shared by name, organization, and key folding.
pub fn fold_text(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for ch in raw.nfkd() {
        if is_combining_mark(ch) {
            continue;
        }
        match ch {
            'ß' => out.push_str("ss"),
            'ø' | 'Ø' => out.push('o'),
            'æ' | 'Æ' => out.push_str("ae"),
            'œ' | 'Œ' => out.push_str("oe"),
            'ð' | 'Ð' => out.push('d'),
            'þ' | 'Þ' => out.push_str("th"),
            'ł' | 'Ł' => out.push('l'),
            'đ' | 'Đ' => out.push('d'),
            'ħ' | 'Ħ' => out.push('h'),
            'ı' => out.push('i'),
            'ŋ' | 'Ŋ' => out.push('n'),
            c if c.is_alphanumeric() => out.extend(c.to_lowercase()),
            _ => out.push(' '),
        }
    }
    collapse_ws(&out)
}

fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Normalization key for an organization name as printed in a corpus
/// affiliation field.
pub fn org_key(raw_org_name: &str) -> String {
    fold_text(raw_org_name)
}

/// Normalizes a person's family name on its own (no initial extraction).
pub fn normalize_last_name(family: &str) -> String {
    fold_text(family)
}

/// Normalizes a raw author name to its [`NameKey`].
///
/// Handles both natural order ("A. de Jong", "Ad de Jong") and comma-inverted
/// order ("Jong, A. de"); trailing particles in the inverted given-name part
/// are moved back in front of the last name. Errors only when the input
/// contains no letters at all.
pub fn normalize_name(raw: &str) -> Result<NameKey> {
    let comma_split = raw.split_once(',');
    let (family_part, given_part) = match comma_split {
        Some((family, given)) => (Some(fold_text(family)), fold_text(given)),
        None => (None, fold_text(raw)),
    };

    let given_tokens: Vec<&str> = given_part
        .split_whitespace()
        .filter(|t| t.chars().any(|c| c.is_alphabetic()))
        .collect();

    match family_part {
        Some(family) => {
            let family_tokens: Vec<&str> = family
                .split_whitespace()
                .filter(|t| t.chars().any(|c| c.is_alphabetic()))
                .collect();
            if family_tokens.is_empty() && given_tokens.is_empty() {
                return Err(Error::NoLetters(raw.to_string()));
            }
            // "Jong, A. de": a particle suffix after the initials belongs
            // in front of the family name. A given part that is nothing
            // but particle-shaped tokens ("Y.") is kept as the given name:
            // there is no initial left over to anchor the key otherwise.
            let split_at = given_tokens
                .iter()
                .rposition(|t| !is_particle(t))
                .map_or(given_tokens.len(), |i| i + 1);
            let (initial_tokens, particles) = given_tokens.split_at(split_at);
            let mut last_name = particles.join(" ");
            if !last_name.is_empty() && !family_tokens.is_empty() {
                last_name.push(' ');
            }
            last_name.push_str(&family_tokens.join(" "));

            let initial = initial_tokens
                .iter()
                .find(|t| !is_particle(t))
                .or(initial_tokens.first())
                .and_then(|t| first_letter(t))
                .or_else(|| last_name.chars().find(|c| c.is_alphabetic()));
            let first_initial = initial.ok_or_else(|| Error::NoLetters(raw.to_string()))?;
            if last_name.is_empty() {
                // Family side was empty ("  , A. Jong" style noise): fall
                // back to natural-order parsing of the given part.
                return natural_order_key(raw, &given_tokens);
            }
            Ok(NameKey {
                first_initial,
                last_name,
            })
        }
        None => natural_order_key(raw, &given_tokens),
    }
}

fn natural_order_key(raw: &str, tokens: &[&str]) -> Result<NameKey> {
    match tokens {
        [] => Err(Error::NoLetters(raw.to_string())),
        [only] => Ok(NameKey {
            first_initial: first_letter(only).ok_or_else(|| Error::NoLetters(raw.to_string()))?,
            last_name: (*only).to_string(),
        }),
        [first, rest @ ..] => {
            let first_initial =
                first_letter(first).ok_or_else(|| Error::NoLetters(raw.to_string()))?;
            // Last name starts at the first particle after the given name,
            // or defaults to the final token.
            let start = rest.iter().position(|t| is_particle(t));
            let last_name = match start {
                Some(idx) => rest[idx..].join(" "),
                None => (*rest.last().expect("rest non-empty")).to_string(),
            };
            Ok(NameKey {
                first_initial,
                last_name,
            })
        }
    }
}

fn first_letter(token: &str) -> Option<char> {
    token.chars().find(|c| c.is_alphabetic())
}

/// Unit-cost edit distance between two strings, over Unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

///// Whether an author mention as printed could refer to this registry person:
/// last names within edit distance 1 and an exact first-initial match.
pub fn names_compatible(mention_raw: &str, person: &Person) -> bool {
    let Ok(key) = normalize_name(mention_raw) else {
        return false;
    };
    let Some(person_key) = person_key(person) else {
        return false;
    };
    keys_compatible(&key, &person_key)
}

/// The same tolerance applied between two already-normalized keys: exact
/// first initial, last names within edit distance 1.
pub fn keys_compatible(a: &NameKey, b: &NameKey) -> bool {
    a.first_initial == b.first_initial && levenshtein(&a.last_name, &b.last_name) <= 1
}

/// First initial of the person's first given name, folded.
pub fn person_initial(person: &Person) -> Option<char> {
    person
        .given_names
        .first()
        .map(|g| fold_text(g))
        .and_then(|g| g.chars().find(|c| c.is_alphabetic()))
}

/// Canonical key of a registry person's own name.
pub fn person_key(person: &Person) -> Option<NameKey> {
    Some(NameKey {
        first_initial: person_initial(person)?,
        last_name: normalize_last_name(&person.family_name),
    })
}

/// Mention counts per [`NameKey`] over one corpus. Every distinct
/// (publication, position) author mention contributes exactly one count.
#[derive(Debug, Clone, Default)]
pub struct NameFrequencyTable {
    counts: BTreeMap<NameKey, usize>,
    /// Counts sorted descending; rank r (1-based) lives at index r-1.
    sorted_counts: Vec<usize>,
}

impl NameFrequencyTable {
    pub fn count(&self, key: &NameKey) -> usize {
        self.counts.get(key).copied().unwrap_or(0)
    }

    /// Number of distinct keys in the table.
    pub fn distinct_keys(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NameKey, usize)> {
        self.counts.iter().map(|(k, &c)| (k, c))
    }

    /// Diagnostic dump: one `key TAB count` line, sorted by descending count
    /// then ascending key.
    pub fn write_to(&self, path: &Path) -> Result<()> {
        let mut rows: Vec<(&NameKey, usize)> = self.iter().collect();
        rows.sort_by(|(ka, ca), (kb, cb)| cb.cmp(ca).then_with(|| ka.cmp(kb)));
        let mut out = String::new();
        for (key, count) in rows {
            out.push_str(&format!("{key}\t{count}\n"));
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}

/// Tallies every author mention of the corpus into a frequency table.
pub fn build_frequency_table(corpus: &Corpus) -> NameFrequencyTable {
    let mut counts: BTreeMap<NameKey, usize> = BTreeMap::new();
    for publication in corpus.publications() {
        for mention in &publication.authors {
            // Loading validated that every mention normalizes.
            if let Ok(key) = normalize_name(&mention.raw_name) {
                *counts.entry(key).or_insert(0) += 1;
            }
        }
    }
    let mut sorted_counts: Vec<usize> = counts.values().copied().collect();
    sorted_counts.sort_unstable_by(|a, b| b.cmp(a));
    NameFrequencyTable {
        counts,
        sorted_counts,
    }
}

/// Whether `key` ranks within the `top_fraction` most common keys.
///
/// Keys are ranked by descending count (ties broken by ascending key); the
/// cutoff rank is `ceil(top_fraction * distinct_keys)` and a key is common
/// iff its count is at least the count found at that rank. Keys absent from
/// the table were never seen and are never common.
pub fn is_common(key: &NameKey, table: &NameFrequencyTable, top_fraction: f64) -> bool {
    let count = table.count(key);
    if count == 0 {
        return false;
    }
    let n = table.distinct_keys();
    let cutoff_rank = (top_fraction * n as f64).ceil() as usize;
    if cutoff_rank == 0 {
        return false;
    }
    let cutoff_rank = cutoff_rank.min(n);
    let threshold = table.sorted_counts[cutoff_rank - 1];
    count >= threshold
}
