//! `vistrace`: compile, trace, check and serve C++ teaching programs.

mod serve;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;
use vistrace::cgr::{deserialize, validate_document, StreamWriter, Termination};
use vistrace::frontend::compile;
use vistrace::interp::{stream_run, InterpreterOptions, DEFAULT_MAX_FRAMES};

/// Exit codes of `trace`, by termination status.
const EXIT_FINISHED: u8 = 0;
const EXIT_FAILURE: u8 = 1;
const EXIT_COMPILE: u8 = 2;
const EXIT_RUNTIME: u8 = 3;
const EXIT_TRUNCATED: u8 = 4;

#[derive(Parser)]
#[command(name = "vistrace", version, about = "Step-through execution traces for C++ teaching programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program and write its trace document.
    Trace(TraceArgs),
    /// Compile a program and report diagnostics without running it.
    Check {
        source: PathBuf,
    },
    /// Check a trace document against the format and its invariants.
    Validate {
        trace: PathBuf,
    },
    /// Serve a trace document with a minimal viewer.
    Serve {
        trace: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

#[derive(Args)]
struct TraceArgs {
    source: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_FRAMES)]
    max_frames: usize,
    /// Bucket count of every unordered_map.
    #[arg(long)]
    hash_buckets: Option<usize>,
    /// Record one frame per statement, without per-access frames.
    #[arg(long)]
    no_substeps: bool,
    /// Frames per write when streaming the trace.
    #[arg(long)]
    stream_chunk: Option<usize>,
    /// File whose contents the program reads through `cin`.
    #[arg(long)]
    stdin_file: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn io_error(path: &str) -> impl Fn(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_string(),
        source,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Trace(args) => trace(&args),
        Command::Check { source } => check(&source),
        Command::Validate { trace } => validate(&trace),
        Command::Serve { trace, port } => serve::run(&trace, port),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("vistrace: {err}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn compile_or_report(path: &Path) -> Result<Option<vistrace::ccr::CcrProgram>, CliError> {
    let source = read_file(path)?;
    match compile(&source) {
        Ok(program) => Ok(Some(program)),
        Err(diags) => {
            for d in diags {
                eprintln!("{}:{d}", path.display());
            }
            Ok(None)
        }
    }
}

fn trace(args: &TraceArgs) -> Result<u8, CliError> {
    let Some(program) = compile_or_report(&args.source)? else {
        return Ok(EXIT_COMPILE);
    };
    let mut options = InterpreterOptions {
        max_frames: args.max_frames,
        substeps: !args.no_substeps,
        stream_chunk: args.stream_chunk,
        ..InterpreterOptions::default()
    };
    if let Some(b) = args.hash_buckets {
        options.hash_buckets = b;
    }
    if let Some(path) = &args.stdin_file {
        options.stdin_text = read_file(path)?;
    }
    let stream = stream_run(&program, &options).map_err(|e| CliError::Usage(e.to_string()))?;
    let (out, label): (Box<dyn Write>, String) = match &args.out {
        Some(path) => (
            Box::new(File::create(path).map_err(io_error(&path.display().to_string()))?),
            path.display().to_string(),
        ),
        None => (Box::new(io::stdout().lock()), "<stdout>".to_string()),
    };
    let mut writer =
        StreamWriter::new(BufWriter::new(out), &program.source_text, &options).map_err(io_error(&label))?;
    let mut termination = None;
    for chunk in stream {
        if let Some(t) = chunk.last().and_then(|f| f.termination.clone()) {
            termination = Some(t);
        }
        writer.write_frames(&chunk).map_err(io_error(&label))?;
    }
    writer.finish().map_err(io_error(&label))?;
    Ok(match termination {
        Some(Termination::Finished { .. }) => EXIT_FINISHED,
        Some(Termination::RuntimeError { kind, message, span }) => {
            eprintln!(
                "{}:{}:{}: runtime error[{kind}]: {message}",
                args.source.display(),
                span.start_line,
                span.start_col
            );
            EXIT_RUNTIME
        }
        Some(Termination::Truncated { max_frames }) => {
            eprintln!("{}: stopped after {max_frames} frames", args.source.display());
            EXIT_TRUNCATED
        }
        Some(Termination::Partial) | None => EXIT_FAILURE,
    })
}

fn check(path: &Path) -> Result<u8, CliError> {
    Ok(match compile_or_report(path)? {
        Some(_) => EXIT_FINISHED,
        None => EXIT_COMPILE,
    })
}

/// Reads and fully checks a trace document, printing every problem found.
fn load_valid(path: &Path) -> Result<Option<Vec<u8>>, CliError> {
    let bytes = fs::read(path).map_err(io_error(&path.display().to_string()))?;
    let doc = match deserialize(&bytes) {
        Ok(doc) => doc,
        Err(err) => {
            eprintln!("{}: {err}", path.display());
            return Ok(None);
        }
    };
    let diags = validate_document(&doc);
    for d in &diags {
        eprintln!("{}: {d}", path.display());
    }
    Ok(diags.is_empty().then_some(bytes))
}

fn validate(path: &Path) -> Result<u8, CliError> {
    Ok(match load_valid(path)? {
        Some(_) => {
            println!("{}: valid", path.display());
            EXIT_FINISHED
        }
        None => EXIT_FAILURE,
    })
}
