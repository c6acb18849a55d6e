//! Executes a validated program and records its trace.
//!
//! One frame is recorded before each statement takes effect, after its
//! operands have been evaluated. Function calls record an entry frame once
//! the callee's parameters are bound. With substeps enabled, every container
//! access gets a frame of its own carrying that single event and the
//! container as it was at that moment. The first frame shows the state
//! before `main` starts and the last frame carries the termination status.

pub mod explain;
mod input;
mod machine;
mod ops;
mod options;

use std::sync::mpsc::{sync_channel, Receiver, SyncSender};
use std::thread::{self, JoinHandle};

use crate::ccr::CcrProgram;
use crate::cgr::{TraceDocument, TraceFrame};

use machine::{FrameSink, Machine};

pub use input::InputError;
pub use options::{InterpreterOptions, OptionsError, DEFAULT_MAX_DEPTH, DEFAULT_MAX_FRAMES};

/// Stack size of the interpreter thread; deep recursion in the subject
/// program recurses in the interpreter too.
const STACK_BYTES: usize = 256 * 1024 * 1024;

/// Runs `program` to completion, or until the frame limit, and returns the
/// whole trace. Runtime failures end the trace with an error frame.
pub fn run(program: &CcrProgram, options: &InterpreterOptions) -> Result<TraceDocument, OptionsError> {
    options.check()?;
    let frames = thread::scope(|scope| {
        thread::Builder::new()
            .name("vistrace-run".into())
            .stack_size(STACK_BYTES)
            .spawn_scoped(scope, || {
                let mut machine = Machine::new(program, options, Vec::new());
                machine.run();
                machine.into_sink()
            })
            .expect("spawn interpreter thread")
            .join()
            .unwrap_or_else(|panic| std::panic::resume_unwind(panic))
    });
    Ok(TraceDocument::new(program.source_text.clone(), options.clone(), frames))
}

/// Runs `program` on a background thread and yields frames in chunks of
/// `options.stream_chunk` (one chunk holding everything when unset). The
/// chunks concatenate to the frames [`run`] returns. Dropping the stream
/// stops the interpreter.
pub fn stream_run(program: &CcrProgram, options: &InterpreterOptions) -> Result<FrameStream, OptionsError> {
    options.check()?;
    let chunk = options.stream_chunk.unwrap_or(options.max_frames);
    let (tx, rx) = sync_channel(1);
    let program = program.clone();
    let options = options.clone();
    let handle = thread::Builder::new()
        .name("vistrace-stream".into())
        .stack_size(STACK_BYTES)
        .spawn(move || {
            let sink = ChunkSink {
                buffer: Vec::with_capacity(chunk),
                chunk,
                tx,
            };
            let mut machine = Machine::new(&program, &options, sink);
            machine.run();
            machine.into_sink().flush();
        })
        .expect("spawn interpreter thread");
    Ok(FrameStream {
        rx: Some(rx),
        handle: Some(handle),
    })
}

struct ChunkSink {
    buffer: Vec<TraceFrame>,
    chunk: usize,
    tx: SyncSender<Vec<TraceFrame>>,
}

impl ChunkSink {
    fn flush(&mut self) -> bool {
        if self.buffer.is_empty() {
            return true;
        }
        let full = std::mem::replace(&mut self.buffer, Vec::with_capacity(self.chunk));
        self.tx.send(full).is_ok()
    }
}

impl FrameSink for ChunkSink {
    fn push(&mut self, frame: TraceFrame) -> bool {
        self.buffer.push(frame);
        if self.buffer.len() >= self.chunk {
            self.flush()
        } else {
            true
        }
    }
}

/// Chunks of frames produced by [`stream_run`].
pub struct FrameStream {
    rx: Option<Receiver<Vec<TraceFrame>>>,
    handle: Option<JoinHandle<()>>,
}

impl Iterator for FrameStream {
    type Item = Vec<TraceFrame>;

    fn next(&mut self) -> Option<Self::Item> {
        let chunk = self.rx.as_ref()?.recv().ok();
        if chunk.is_none() {
            self.finish();
        }
        chunk
    }
}

impl FrameStream {
    fn finish(&mut self) {
        self.rx = None;
        if let Some(handle) = self.handle.take() {
            if let Err(panic) = handle.join() {
                std::panic::resume_unwind(panic);
            }
        }
    }
}

impl Drop for FrameStream {
    fn drop(&mut self) {
        self.rx = None;
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}
