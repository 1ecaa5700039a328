//! Error type shared by all core modules.

use alloc::string::String;

/// Errors surfaced by the streaming runtime.
///
/// Every variant carries a human-readable detail string; the harness maps
/// variants to stable machine-readable codes on stderr.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoreError {
    /// Invalid model or session configuration (odd head dim, zero window, ...).
    #[error("config error: {0}")]
    Config(String),
    /// A precomputed table or buffer was asked for more than it holds.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// Matrix or frame-count shape mismatch.
    #[error("shape error: {0}")]
    Shape(String),
    /// An attention mask left a query row with no allowed key.
    #[error("mask error: {0}")]
    Mask(String),
    /// A session operation was called in the wrong read/write mode.
    #[error("protocol error: {0}")]
    Protocol(String),
    /// Chunk ordinals arrived with a gap; the stream is not contiguous.
    #[error("stream discontinuity: {0}")]
    StreamDiscontinuity(String),
    /// An alignment index points outside the transcript.
    #[error("alignment error: {0}")]
    Alignment(String),
    /// An utterance cannot be placed into robust segments.
    #[error("segmentation error: {0}")]
    Segmentation(String),
    /// A runtime invariant check failed mid-session (cache bound, delay ledger).
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl CoreError {
    /// Stable machine-readable code for this error class.
    pub fn code(&self) -> &'static str {
        match self {
            CoreError::Config(_) => "config",
            CoreError::Capacity(_) => "capacity",
            CoreError::Shape(_) => "shape",
            CoreError::Mask(_) => "mask",
            CoreError::Protocol(_) => "protocol",
            CoreError::StreamDiscontinuity(_) => "stream_discontinuity",
            CoreError::Alignment(_) => "alignment",
            CoreError::Segmentation(_) => "segmentation",
            CoreError::Invariant(_) => "invariant",
        }
    }
}

pub type Result<T> = core::result::Result<T, CoreError>;
