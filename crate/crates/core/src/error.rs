use crate::parser::ParseError;
use crate::syntax::SignatureError;

/// Errors shared by every analysis in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    /// Ill-formed input that parsed fine (bad partition, unknown name, ...).
    #[error("{0}")]
    Semantic(String),
    /// A search exceeded its node cap or a domain is too large to ground.
    #[error("resource limit: {0}")]
    Resource(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
