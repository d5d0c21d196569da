//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// I/O failure, annotated with the path involved.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A line of a line-delimited input file failed to parse or validate.
    #[error("{path}:{line}: {msg}")]
    Malformed {
        path: String,
        line: usize,
        msg: String,
    },

    /// The same person id appeared twice in a registry file.
    #[error("duplicate person id `{id}` on lines {first_line} and {second_line}")]
    DuplicatePersonId {
        id: String,
        first_line: usize,
        second_line: usize,
    },

    /// The same publication id appeared twice in a corpus file.
    #[error("duplicate publication id `{id}` on lines {first_line} and {second_line}")]
    DuplicatePubId {
        id: String,
        first_line: usize,
        second_line: usize,
    },

    /// A micro cluster was mapped to two different meso clusters.
    #[error(
        "micro cluster `{micro}` lies under meso clusters `{meso_a}` and `{meso_b}`; \
         the micro-to-meso map must be a function"
    )]
    ClusterRefinement {
        micro: String,
        meso_a: String,
        meso_b: String,
    },

    /// A name contained no letters and cannot be keyed.
    #[error("name contains no letters: {0:?}")]
    NoLetters(String),

    /// An organization referenced by the registry is missing from the alias map.
    #[error("organization `{org_id}` (person `{person_id}`) has no alias map entry")]
    MissingOrgAlias { org_id: String, person_id: String },

    /// An expansion method was requested on a corpus lacking the data it needs.
    #[error("expansion {method} requires `{field}`, which no publication in the corpus carries")]
    MissingCorpusField {
        method: &'static str,
        field: &'static str,
    },

    /// The gold standard has no entries; there is nothing to score.
    #[error("gold standard is empty")]
    EmptyGold,

    /// An unrecognized seed-strategy token.
    #[error("unknown strategy `{0}` (expected EM, RP, DL, AL, or DAI)")]
    UnknownStrategy(String),

    /// An unrecognized expansion-method token.
    #[error("unknown expansion `{0}` (expected MESO, MICRO, or XID)")]
    UnknownExpansion(String),

    /// A synthetic-corpus configuration that cannot be satisfied.
    #[error("infeasible generator config: {0}")]
    InfeasibleConfig(String),
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub(crate) fn malformed(path: &std::path::Path, line: usize, msg: impl Into<String>) -> Self {
        Error::Malformed {
            path: path.display().to_string(),
            line,
            msg: msg.into(),
        }
    }
}
