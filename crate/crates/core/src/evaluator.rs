//! Scoring retrieved oeuvres against a verified gold standard.
//!
//! The evaluation unit is the (person, publication) pair: positions and
//! methods are collapsed before counting. With A the gold pairs and B the
//! retrieved pairs, true positives are A∩B, false positives B\A, and
//! false negatives A\B. Precision and recall are percentages reported to
//! one decimal, rounded half-up in integer arithmetic so results are
//! platform-stable.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{write_jsonl, Corpus, PersonId, PubId};
use crate::error::{Error, Result};
use crate::expander::OeuvreSet;
use crate::par;

/// Verified person → publications mapping, restricted to an evaluation
/// window of publication years (inclusive on both ends).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldStandard {
    entries: BTreeMap<PersonId, BTreeSet<PubId>>,
    window: (i32, i32),
}

#[derive(Serialize, Deserialize)]
struct GoldRow {
    person_id: PersonId,
    pub_ids: Vec<PubId>,
}

impl GoldStandard {
    pub fn new(entries: BTreeMap<PersonId, BTreeSet<PubId>>, window: (i32, i32)) -> Result<Self> {
        if window.0 > window.1 {
            return Err(Error::InfeasibleConfig(format!(
                "evaluation window {}:{} is not well-ordered",
                window.0, window.1
            )));
        }
        Ok(GoldStandard { entries, window })
    }

    /// Loads gold entries, validates every publication id against corpus A,
    /// and keeps only publications inside the window. Persons whose entire
    /// verified list falls outside the window are kept with an empty set —
    /// they still gate `restrict_persons`.
    pub fn load(path: &Path, corpus_a: &Corpus, window: (i32, i32)) -> Result<Self> {
        let mut gold = GoldStandard::new(BTreeMap::new(), window)?;
        for (line_no, row) in crate::corpus::read_jsonl_rows::<GoldRow>(path)? {
            if gold.entries.contains_key(&row.person_id) {
                return Err(Error::malformed(
                    path,
                    line_no,
                    format!("duplicate gold entry for person `{}`", row.person_id),
                ));
            }
            let mut pubs = BTreeSet::new();
            for pub_id in row.pub_ids {
                let Some(publication) = corpus_a.get(&pub_id) else {
                    return Err(Error::malformed(
                        path,
                        line_no,
                        format!("gold publication `{pub_id}` not in corpus A"),
                    ));
                };
                if (window.0..=window.1).contains(&publication.biblio.year) {
                    pubs.insert(pub_id);
                }
            }
            gold.entries.insert(row.person_id, pubs);
        }
        Ok(gold)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_jsonl(
            path,
            self.entries.iter().map(|(person_id, pubs)| GoldRow {
                person_id: person_id.clone(),
                pub_ids: pubs.iter().cloned().collect(),
            }),
        )
    }

    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    pub fn entries(&self) -> &BTreeMap<PersonId, BTreeSet<PubId>> {
        &self.entries
    }

    pub fn contains_person(&self, person_id: &PersonId) -> bool {
        self.entries.contains_key(person_id)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

/// Keeps assignments whose publication year lies inside the window.
pub fn restrict_window(oeuvre: &OeuvreSet, corpus: &Corpus, window: (i32, i32)) -> OeuvreSet {
    oeuvre
        .iter()
        .filter(|a| {
            corpus
                .get(&a.pub_id)
                .map(|p| (window.0..=window.1).contains(&p.biblio.year))
                .unwrap_or(false)
        })
        .cloned()
        .collect()
}

/// Keeps assignments of persons covered by the gold standard.
pub fn restrict_persons(oeuvre: &OeuvreSet, gold: &GoldStandard) -> OeuvreSet {
    oeuvre
        .iter()
        .filter(|a| gold.contains_person(&a.person_id))
        .cloned()
        .collect()
}

/// Percentage with one decimal, **round half up**, computed entirely in
/// integer arithmetic: the tenths value of 100·num/den is
/// (2000·num + den) / (2·den). Returns `None` for an empty denominator.
pub fn percent_1dp(num: u64, den: u64) -> Option<f64> {
    if den == 0 {
        return None;
    }
    let tenths = (2000 * num + den) / (2 * den);
    Some(tenths as f64 / 10.0)
}

/// Confusion counts and derived metrics for one scope (aggregate or one
/// person). Metrics are `None` when their denominator is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub true_pos: u64,
    pub false_pos: u64,
    pub false_neg: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recall: Option<f64>,
}

impl Tally {
    fn from_counts(true_pos: u64, false_pos: u64, false_neg: u64) -> Self {
        Tally {
            true_pos,
            false_pos,
            false_neg,
            precision: percent_1dp(true_pos, true_pos + false_pos),
            recall: percent_1dp(true_pos, true_pos + false_neg),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonEval {
    pub person_id: PersonId,
    #[serde(flatten)]
    pub tally: Tally,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    #[serde(flatten)]
    pub aggregate: Tally,
    pub per_person: Vec<PersonEval>,
}

/// Scores retrieved (person, pub) pairs against the gold standard. The
/// oeuvre is expected to be window- and person-restricted already. Persons
/// appear in `per_person` when they occur in the gold standard or retrieved
/// anything; gold persons with zero retrieved pubs contribute only false
/// negatives.
pub fn evaluate(oeuvre: &OeuvreSet, gold: &GoldStandard) -> Result<EvalReport> {
    if gold.is_empty() {
        return Err(Error::EmptyGold);
    }
    let mut retrieved: BTreeMap<&PersonId, BTreeSet<&PubId>> = BTreeMap::new();
    for a in oeuvre {
        retrieved.entry(&a.person_id).or_default().insert(&a.pub_id);
    }
    let empty_pubs = BTreeSet::new();
    let empty_refs = BTreeSet::new();
    let persons: Vec<&PersonId> = gold
        .entries()
        .keys()
        .chain(retrieved.keys().copied())
        .collect::<BTreeSet<&PersonId>>()
        .into_iter()
        .collect();
    let per_person: Vec<PersonEval> = par::map_vec(&persons, |person_id| {
        let verified = gold.entries().get(*person_id).unwrap_or(&empty_pubs);
        let found = retrieved.get(*person_id).unwrap_or(&empty_refs);
        let true_pos = found.iter().filter(|p| verified.contains(**p)).count() as u64;
        let false_pos = found.len() as u64 - true_pos;
        let false_neg = verified.len() as u64 - true_pos;
        PersonEval {
            person_id: (*person_id).clone(),
            tally: Tally::from_counts(true_pos, false_pos, false_neg),
        }
    });
    let aggregate = Tally::from_counts(
        per_person.iter().map(|p| p.tally.true_pos).sum(),
        per_person.iter().map(|p| p.tally.false_pos).sum(),
        per_person.iter().map(|p| p.tally.false_neg).sum(),
    );
    Ok(EvalReport {
        aggregate,
        per_person,
    })
}
