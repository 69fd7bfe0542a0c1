use thiserror::Error;

use crate::model::dimacs::DimacsError;
use crate::model::ModelError;
use crate::model::uvl::UvlError;
use crate::sampler::file::SampleFileError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Uvl(#[from] UvlError),

    #[error(transparent)]
    Dimacs(#[from] DimacsError),

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error(transparent)]
    SampleFile(#[from] SampleFileError),

    #[error("invalid group specification: {0}")]
    GroupSpec(String),

    #[error("the feature model is void (it has no valid configuration)")]
    VoidModel,

    #[error("the partial configuration has no valid completion")]
    UnsatisfiablePartial,

    #[error("unknown feature `{0}`")]
    UnknownFeature(String),

    #[error("more than {cap} valid configurations; model too large for exhaustive enumeration")]
    CapExceeded { cap: usize },

    #[error("t = {t} exceeds the configured maximum of {max}")]
    StrengthTooLarge { t: usize, max: usize },

    #[error("unrecognized model format for `{0}` (expected .uvl, .dimacs or .cnf)")]
    UnknownFormat(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("sample is inconsistent with the model: {0}")]
    InconsistentSample(String),

    #[error("nothing to summarize: no run records")]
    NoRecords,

    #[error("{context}: {source}")]
    Run {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
