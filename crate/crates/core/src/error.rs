use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("unknown generator label `{label}` in word `{word}`")]
    UnknownGenerator { label: String, word: String },

    #[error("malformed input: {0}")]
    Malformed(String),

    /// A computation would exceed a configured size bound.
    #[error("resource limit exceeded: {what} (limit {limit})")]
    Resource { what: String, limit: usize },

    #[error("density of an empty support is undefined")]
    EmptySupport,

    #[error("event {id} has weight {weight} outside the open interval (0,1)")]
    InvalidWeight { id: usize, weight: String },

    #[error("resampling did not terminate after {cap} resamples")]
    NonTerminating { cap: usize, log: Vec<usize> },

    #[error("no constant up to {0} satisfies the inequality")]
    NotFound(u32),

    #[error("witness search inconclusive: {0}")]
    Inconclusive(String),

    #[error("window mismatch: {0}")]
    WindowMismatch(String),

    #[error("forest construction exhausted at level {0}")]
    LevelExhausted(usize),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn resource(what: impl Into<String>, limit: usize) -> Self {
        Error::Resource {
            what: what.into(),
            limit,
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::Resource { .. } | Error::NonTerminating { .. } | Error::LevelExhausted(_)
        )
    }
}
