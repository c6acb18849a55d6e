//! Read-only transforms over a trace document.

use super::codec::CgrError;
use super::model::{Termination, TraceDocument, FORMAT_VERSION};
use crate::containers::ContainerId;

/// Frames `from..=to` as a document of their own, re-indexed from 0 and
/// stamped with the current format version. A window that stops before the
/// last frame ends with a [`Termination::Partial`] frame.
pub fn window(doc: &TraceDocument, from: usize, to: usize) -> Result<TraceDocument, CgrError> {
    let len = doc.frames.len();
    if from > to || to >= len {
        return Err(CgrError::RangeError(format!(
            "window {from}..={to} is not inside 0..{len}"
        )));
    }
    let mut frames = doc.frames[from..=to].to_vec();
    for (i, frame) in frames.iter_mut().enumerate() {
        frame.index = i;
    }
    if to + 1 < len {
        frames.last_mut().expect("window is nonempty").termination = Some(Termination::Partial);
    }
    Ok(TraceDocument {
        format_version: FORMAT_VERSION.to_string(),
        source: doc.source.clone(),
        options: doc.options.clone(),
        frames,
    })
}

/// Whether any event in frames `from..from + horizon` touches `container`.
/// The range is clipped to the end of the document.
pub fn peek_usage(
    doc: &TraceDocument,
    container: ContainerId,
    from: usize,
    horizon: usize,
) -> Result<bool, CgrError> {
    let len = doc.frames.len();
    if from >= len {
        return Err(CgrError::RangeError(format!("frame {from} is not inside 0..{len}")));
    }
    let end = from.saturating_add(horizon).min(len);
    Ok(doc.frames[from..end]
        .iter()
        .any(|f| f.events.iter().any(|e| e.container == container)))
}
