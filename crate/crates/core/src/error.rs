use std::path::PathBuf;

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("bad Coxeter label `{0}`")]
    BadLabel(String),
    #[error("tuple of length {len} does not fit rank {rank}")]
    TupleLength { rank: usize, len: usize },
    #[error("inexact label {0}: angles of π/7 and divergent pairs are unknowns of the Gram solver")]
    InexactLabel(String),
    #[error("divergent pair present; INF entries are handled combinatorially")]
    DivergentPair,
    #[error("not simple: chunk `{0}` does not have exactly 4 facets")]
    NotSimple(String),
    #[error("bad index {0}: facets are numbered 1..8")]
    BadIndex(String),
    #[error("inconsistent edge figure: triple {triple:?} lies in {count} chunks")]
    InconsistentEdgeFigure { triple: [u8; 3], count: usize },
    #[error("facet {0} lies in no chunk")]
    MissingFacet(u8),
    #[error("degenerate 2-face between facets {0} and {1}")]
    Degenerate2Face(u8, u8),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dataset incomplete: type {0} missing")]
    DatasetIncomplete(u32),
    #[error("transcription error: type {label} has {found} disjoint pairs, expected {expected}")]
    Transcription {
        label: u32,
        found: usize,
        expected: usize,
    },
    #[error(
        "type {0} is out of scope: with no disjoint facet pair a compact Coxeter 4-polytope is a \
         simplex or an Esselmann polytope, with one pair it has at most d + 3 = 7 facets, and with \
         two pairs it has at most 7 facets (Felikson–Tumarkin)"
    )]
    ExcludedType(u32),
    #[error("unknown polytope type {0}")]
    UnknownType(u32),
    #[error("no basis: type {0} has an empty l4 basis")]
    NoBasis(u32),
    #[error("not signature (4,1): {0}")]
    NotLorentzian(String),
    #[error("incompatible gluing: {0}")]
    IncompatibleGluing(String),
    #[error("catalog cache: {0}")]
    Cache(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
