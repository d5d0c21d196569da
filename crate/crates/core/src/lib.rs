//! Reconstruction of individual researchers' publication oeuvres across
//! heterogeneous bibliographic corpora.
//!
//! The pipeline has three stages, each backed by a module here:
//!
//! 1. **Seeding** ([`seeder`]): build a high-precision set of
//!    (publication, person, author-position) triples from five independent
//!    evidence channels, then prune conflicting and common-name matches.
//! 2. **Expansion** ([`expander`]): grow each person's seed into their full
//!    oeuvre via discipline clusters and via external author identifiers
//!    harvested from a second corpus.
//! 3. **Evaluation** ([`evaluator`]): score oeuvres against a verified gold
//!    standard with per-person and aggregate precision/recall.
//!
//! [`corpus`] holds the data model and line-delimited file formats,
//! [`namekit`] the name normalization and similarity primitives,
//! [`recmatch`] cross-corpus bibliographic record matching, and
//! [`synthgen`] a deterministic generator of synthetic corpora with exact
//! ground truth used as the test oracle.
//!
//! All stages operate on immutable corpora. With the default `parallel`
//! feature the per-person and per-publication loops run on rayon; disabling
//! it yields a sequential build with identical outputs.

pub mod corpus;
pub mod error;
pub mod evaluator;
pub mod expander;
pub mod namekit;
pub(crate) mod par;
pub mod recmatch;
pub mod seeder;
pub mod synthgen;

pub use corpus::{Corpus, CorpusTag, Person, PersonId, PubId, Publication};
pub use error::{Error, Result};
