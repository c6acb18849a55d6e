//! JSON encoding of trace documents.
//!
//! The encoding is compact, with fields in declaration order, so equal
//! documents always produce equal bytes.

use std::io::{self, Write};

use semver::Version;
use serde_path_to_error::Segment;
use thiserror::Error;

use super::model::{TraceDocument, TraceFrame, FORMAT_VERSION};
use crate::interp::InterpreterOptions;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CgrError {
    #[error("unsupported format version {found} (this build reads {supported})")]
    VersionMismatch { found: String, supported: String },
    /// `path` is a JSON pointer into the document.
    #[error("schema violation at {path}: {reason}")]
    SchemaViolation { path: String, reason: String },
    #[error("range error: {0}")]
    RangeError(String),
}

fn violation(path: &str, reason: impl Into<String>) -> CgrError {
    CgrError::SchemaViolation {
        path: path.to_string(),
        reason: reason.into(),
    }
}

/// Whether documents of version `found` can be read: same major version and
/// a minor version no newer than ours.
pub fn version_supported(found: &Version) -> bool {
    let ours = Version::parse(FORMAT_VERSION).expect("valid format version");
    found.major == ours.major && found.minor <= ours.minor
}

pub fn serialize(doc: &TraceDocument) -> Vec<u8> {
    serde_json::to_vec(doc).expect("trace documents always serialize")
}

pub fn deserialize(bytes: &[u8]) -> Result<TraceDocument, CgrError> {
    let value: serde_json::Value =
        serde_json::from_slice(bytes).map_err(|e| violation("", format!("malformed JSON: {e}")))?;
    let Some(object) = value.as_object() else {
        return Err(violation("", "document must be a JSON object"));
    };
    let found = match object.get("formatVersion") {
        Some(serde_json::Value::String(v)) => v.clone(),
        Some(_) => return Err(violation("/formatVersion", "must be a string")),
        None => return Err(violation("/formatVersion", "missing field")),
    };
    let version = Version::parse(&found)
        .map_err(|e| violation("/formatVersion", format!("not a semantic version: {e}")))?;
    if !version_supported(&version) {
        return Err(CgrError::VersionMismatch {
            found,
            supported: FORMAT_VERSION.to_string(),
        });
    }
    let doc: TraceDocument = serde_path_to_error::deserialize(value).map_err(|err| {
        let path = pointer(err.path());
        violation(&path, err.into_inner().to_string())
    })?;
    if doc.frames.is_empty() {
        return Err(violation("/frames", "a document needs at least one frame"));
    }
    Ok(doc)
}

/// Converts a deserializer path to a JSON pointer.
fn pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for segment in path.iter() {
        match segment {
            Segment::Seq { index } => {
                out.push('/');
                out.push_str(&index.to_string());
            }
            Segment::Map { key } => {
                out.push('/');
                out.push_str(&key.replace('~', "~0").replace('/', "~1"));
            }
            Segment::Enum { .. } | Segment::Unknown => {}
        }
    }
    out
}

/// Writes a document incrementally: the header, then frames as they
/// arrive, then the closing brackets. The bytes equal [`serialize`] of the
/// complete document.
pub struct StreamWriter<W: Write> {
    out: W,
    frames_written: usize,
}

impl<W: Write> StreamWriter<W> {
    pub fn new(mut out: W, source: &str, options: &InterpreterOptions) -> io::Result<Self> {
        out.write_all(b"{\"formatVersion\":")?;
        serde_json::to_writer(&mut out, FORMAT_VERSION)?;
        out.write_all(b",\"source\":")?;
        serde_json::to_writer(&mut out, source)?;
        out.write_all(b",\"options\":")?;
        serde_json::to_writer(&mut out, options)?;
        out.write_all(b",\"frames\":[")?;
        Ok(Self { out, frames_written: 0 })
    }

    pub fn write_frames(&mut self, frames: &[TraceFrame]) -> io::Result<()> {
        for frame in frames {
            if self.frames_written > 0 {
                self.out.write_all(b",")?;
            }
            serde_json::to_writer(&mut self.out, frame)?;
            self.frames_written += 1;
        }
        self.out.flush()
    }

    pub fn frames_written(&self) -> usize {
        self.frames_written
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.write_all(b"]}")?;
        self.out.flush()?;
        Ok(self.out)
    }
}
