use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::containers::DEFAULT_BUCKETS;

pub const DEFAULT_MAX_FRAMES: usize = 10_000;
pub const DEFAULT_MAX_DEPTH: usize = 500;

/// Settings for one interpreter run. They are echoed into the trace document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InterpreterOptions {
    /// Upper bound on the number of frames, including the final one.
    pub max_frames: usize,
    /// Emit one extra frame per container access.
    pub substeps: bool,
    /// Bucket count of every `unordered_map`.
    pub hash_buckets: usize,
    /// Text consumed by `cin`.
    pub stdin_text: String,
    /// Frames per streamed chunk; `None` means batch output.
    pub stream_chunk: Option<usize>,
    /// Deepest allowed call nesting, counting `main`.
    pub max_depth: usize,
}

impl Default for InterpreterOptions {
    fn default() -> Self {
        Self {
            max_frames: DEFAULT_MAX_FRAMES,
            substeps: true,
            hash_buckets: DEFAULT_BUCKETS,
            stdin_text: String::new(),
            stream_chunk: None,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OptionsError {
    #[error("max_frames must be at least 2, got {0}")]
    MaxFrames(usize),
    #[error("hash_buckets must be positive")]
    HashBuckets,
    #[error("stream_chunk must be positive")]
    StreamChunk,
    #[error("max_depth must be positive")]
    MaxDepth,
}

impl InterpreterOptions {
    pub fn check(&self) -> Result<(), OptionsError> {
        if self.max_frames < 2 {
            return Err(OptionsError::MaxFrames(self.max_frames));
        }
        if self.hash_buckets == 0 {
            return Err(OptionsError::HashBuckets);
        }
        if self.stream_chunk == Some(0) {
            return Err(OptionsError::StreamChunk);
        }
        if self.max_depth == 0 {
            return Err(OptionsError::MaxDepth);
        }
        Ok(())
    }
}
