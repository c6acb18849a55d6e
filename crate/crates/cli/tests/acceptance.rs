//! Acceptance suite: one PASS or FAIL line per criterion, exit status 1 if
//! any fails. Programs are traced through the `vistrace` binary.

#[path = "../../core/tests/support"]
mod support {
    pub mod corpus;
    pub mod native;
    pub mod oracles;
}

use std::ffi::OsStr;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use support::{corpus, native, oracles};
use vistrace::cgr::{deserialize, serialize, validate_document, Termination, TraceDocument, TraceFrame};
use vistrace::containers::{AccessKind, ContainerState, EventTarget};
use vistrace::frontend::compile;
use vistrace::interp::run;
use vistrace::value::{Scalar, Value};

const BIN: &str = env!("CARGO_BIN_EXE_vistrace");
const DIFFERENTIAL_BUDGET: Duration = Duration::from_secs(60);
const ORACLE_BUDGET: Duration = Duration::from_secs(30);
const ORACLE_OPS: usize = 10_000;
const MIN_CORPUS: usize = 20;
const TRUNCATE_AT: usize = 100;
const EXIT_TRUNCATED: i32 = 4;

fn core_tests() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests")
}

struct Work {
    dir: PathBuf,
}

impl Work {
    fn new() -> Self {
        let dir = std::env::temp_dir().join(format!("vistrace-acceptance-{}", std::process::id()));
        fs::create_dir_all(&dir).expect("scratch directory");
        Work { dir }
    }

    /// Traces `source` with the binary and returns (exit code, document bytes).
    fn trace<S: AsRef<OsStr>>(&self, name: &str, source: &Path, extra: &[S]) -> Result<(i32, Vec<u8>), String> {
        let out = self.dir.join(format!("{name}.json"));
        let status = Command::new(BIN)
            .arg("trace")
            .arg(source)
            .arg("--out")
            .arg(&out)
            .args(extra)
            .status()
            .map_err(|e| format!("{name}: {e}"))?;
        let code = status.code().ok_or_else(|| format!("{name}: killed by a signal"))?;
        let bytes = fs::read(&out).map_err(|e| format!("{name}: {e}"))?;
        Ok((code, bytes))
    }

    fn write(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.join(name);
        fs::write(&path, contents).expect("scratch file");
        path
    }
}

impl Drop for Work {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.dir);
    }
}

const NO_ARGS: [&str; 0] = [];

fn stdin_args(case: &corpus::Case) -> Vec<String> {
    match &case.stdin {
        Some(_) => vec!["--stdin-file".into(), case.path.with_extension("in").display().to_string()],
        None => Vec::new(),
    }
}

fn check(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn load(bytes: &[u8], name: &str) -> Result<TraceDocument, String> {
    deserialize(bytes).map_err(|e| format!("{name}: {e}"))
}

fn differential(work: &Work) -> Result<String, String> {
    let start = Instant::now();
    let cases = corpus::cases_in(&core_tests().join("corpus"));
    check(cases.len() >= MIN_CORPUS, || format!("corpus has {} programs, need {MIN_CORPUS}", cases.len()))?;
    let (native_runs, reference) = match native::compiler() {
        Some(cxx) => (Some(native::run_all(&cxx, &cases, &work.dir)), cxx.display().to_string()),
        None => (None, "committed expectations (no C++ compiler found)".to_string()),
    };
    let mut docs = Vec::new();
    for (i, case) in cases.iter().enumerate() {
        let (code, bytes) = work.trace(&case.name, &case.path, &stdin_args(case))?;
        let doc = load(&bytes, &case.name)?;
        let (want_out, want_exit) = match &native_runs {
            Some(runs) => {
                let run = runs[i].as_ref().map_err(Clone::clone)?;
                (run.stdout.clone(), run.exit)
            }
            None => (case.expected_stdout.clone(), case.expected_exit),
        };
        check(code == 0, || format!("{}: trace exited with {code}", case.name))?;
        check(doc.stdout() == want_out, || format!("{}: stdout differs", case.name))?;
        check(
            doc.termination() == Some(&Termination::Finished { exit_code: want_exit }),
            || format!("{}: termination {:?}, native exit {want_exit}", case.name, doc.termination()),
        )?;
        docs.push(doc);
    }
    corpus::coverage(&cases, &docs)?;
    let elapsed = start.elapsed();
    check(elapsed < DIFFERENTIAL_BUDGET, || format!("took {elapsed:.1?}, budget {DIFFERENTIAL_BUDGET:?}"))?;
    Ok(format!(
        "{} programs, byte-exact stdout and equal exit codes against {reference}, {elapsed:.1?} < {DIFFERENTIAL_BUDGET:?}",
        cases.len()
    ))
}

fn container_oracles() -> Result<String, String> {
    let start = Instant::now();
    for (i, (kind, run)) in oracles::KINDS.iter().enumerate() {
        run(ORACLE_OPS, 0x5eed + i as u64).map_err(|e| format!("{kind}: {e}"))?;
    }
    let elapsed = start.elapsed();
    check(elapsed < ORACLE_BUDGET, || format!("took {elapsed:.1?}, budget {ORACLE_BUDGET:?}"))?;
    Ok(format!(
        "{ORACLE_OPS} operations on each of {} kinds, {elapsed:.1?} < {ORACLE_BUDGET:?}",
        oracles::KINDS.len()
    ))
}

fn bst_event_keys(frames: &[TraceFrame]) -> Result<Vec<(AccessKind, i64)>, String> {
    let mut out = Vec::new();
    for f in frames {
        for e in &f.events {
            let Some(ContainerState::Map(m)) = f.container(e.container).map(|c| &c.state) else {
                return Err("event on a container that is not a map".into());
            };
            let key = match e.target {
                EventTarget::Node(id) => m.node(id).map(|n| n.key.clone()),
                _ => None,
            };
            let Some(Scalar::Int(k)) = key else {
                return Err(format!("event target {:?} is not an int-keyed node", e.target));
            };
            out.push((e.kind, k));
        }
    }
    Ok(out)
}

fn bst_golden(work: &Work) -> Result<String, String> {
    let golden_dir = core_tests().join("golden");
    let (code, bytes) = work.trace("bst", &golden_dir.join("bst_insert_erase.cpp"), &NO_ARGS)?;
    check(code == 0, || format!("trace exited with {code}"))?;
    let doc = load(&bytes, "bst")?;
    let on_line = |line: u32| -> Vec<TraceFrame> {
        doc.frames.iter().filter(|f| f.span.start_line == line).cloned().collect()
    };
    let (insert, erase) = (on_line(7), on_line(8));
    use AccessKind::*;
    let inserted = bst_event_keys(&insert)?;
    check(inserted == [(Read, 5), (Read, 8), (Write, 6)], || format!("insert events {inserted:?}"))?;
    let erased = bst_event_keys(&erase)?;
    check(erased.ends_with(&[(Delete, 6), (Write, 8)]), || format!("erase events {erased:?}"))?;
    let fragment: Vec<TraceFrame> = insert.into_iter().chain(erase).collect();
    let got = serde_json::to_vec(&fragment).map_err(|e| e.to_string())?;
    let golden = fs::read(golden_dir.join("bst_insert_erase.json")).map_err(|e| e.to_string())?;
    check(got == golden, || "fragment is not byte-identical to the golden file".into())?;
    Ok(format!(
        "insert {inserted:?}, erase ends {:?}, {} golden bytes identical",
        &erased[erased.len() - 2..],
        golden.len()
    ))
}

fn hash_buckets(work: &Work) -> Result<String, String> {
    let src = work.write(
        "hash.cpp",
        "#include <unordered_map>\nusing namespace std;\nint main() {\n    unordered_map<int, int> h;\n    h.insert({8, 1});\n    h.insert({14, 2});\n    h.insert({-1, 3});\n    return h.size();\n}\n",
    );
    let (code, bytes) = work.trace("hash", &src, &["--hash-buckets", "6"])?;
    check(code == 0, || format!("trace exited with {code}"))?;
    let doc = load(&bytes, "hash")?;
    let frame = &doc.frames[doc.frames.len() - 2];
    let Some(ContainerState::UnorderedMap(h)) = frame.containers.first().map(|c| &c.state) else {
        return Err("no hash map in the frame before the end".into());
    };
    let chain = |b: usize| h.buckets[b].iter().map(|e| e.key).collect::<Vec<_>>();
    check(h.bucket_count() == 6, || format!("{} buckets", h.bucket_count()))?;
    check(chain(2) == [8, 14], || format!("bucket 2 holds {:?}", chain(2)))?;
    check(chain(5) == [-1], || format!("bucket 5 holds {:?}", chain(5)))?;
    Ok("B = 6: bucket 2 = [8, 14], bucket 5 = [-1]".into())
}

fn closure(work: &Work) -> Result<String, String> {
    let cases = corpus::cases_in(&core_tests().join("corpus"));
    let chunk = "7";
    for case in &cases {
        let args = stdin_args(case);
        let (_, bytes) = work.trace(&case.name, &case.path, &args)?;
        let doc = load(&bytes, &case.name)?;
        let diags = validate_document(&doc);
        check(diags.is_empty(), || format!("{}: {}", case.name, diags[0]))?;
        check(serialize(&doc) == bytes, || format!("{}: serialize(deserialize(b)) != b", case.name))?;
        check(load(&serialize(&doc), &case.name)? == doc, || format!("{}: round trip changed the document", case.name))?;

        let mut streamed_args = args.clone();
        streamed_args.extend(["--stream-chunk".to_string(), chunk.to_string()]);
        let (_, streamed) = work.trace(&format!("{}-streamed", case.name), &case.path, &streamed_args)?;
        let streamed_doc = load(&streamed, &case.name)?;
        let program = compile(&case.source).map_err(|d| format!("{}: {d:?}", case.name))?;
        let batch = run(&program, &streamed_doc.options).map_err(|e| e.to_string())?;
        check(streamed == serialize(&batch), || format!("{}: streamed bytes differ from batch", case.name))?;

        let (_, again) = work.trace(&format!("{}-again", case.name), &case.path, &args)?;
        check(again == bytes, || format!("{}: repeated run differs", case.name))?;
    }
    Ok(format!(
        "{} corpus traces valid, round-trip identical, chunk {chunk} stream equals batch, reruns identical",
        cases.len()
    ))
}

fn truncation(work: &Work) -> Result<String, String> {
    let src = work.write("spin.cpp", "int main() {\n    int i = 0;\n    while (true) {\n        i++;\n    }\n    return 0;\n}\n");
    let limit = TRUNCATE_AT.to_string();
    let (code, bytes) = work.trace("spin", &src, &["--max-frames", &limit])?;
    let doc = load(&bytes, "spin")?;
    check(doc.frames.len() == TRUNCATE_AT, || format!("{} frames", doc.frames.len()))?;
    check(
        doc.termination() == Some(&Termination::Truncated { max_frames: TRUNCATE_AT }),
        || format!("termination {:?}", doc.termination()),
    )?;
    check(code == EXIT_TRUNCATED, || format!("exit code {code}"))?;
    Ok(format!("{TRUNCATE_AT} frames, Truncated, exit code {EXIT_TRUNCATED}"))
}

fn scopes(work: &Work) -> Result<String, String> {
    let src = work.write(
        "scopes.cpp",
        "int main() {\n    int x = 1;\n    {\n        int x = 2;\n        x = x + 1;\n    }\n    {\n    }\n    return x;\n}\n",
    );
    let (_, bytes) = work.trace("scopes", &src, &NO_ARGS)?;
    let doc = load(&bytes, "scopes")?;
    let at = |line: u32| {
        doc.frames
            .iter()
            .find(|f| f.span.start_line == line)
            .and_then(|f| f.active_frame())
            .ok_or_else(|| format!("no frame on line {line}"))
    };
    let shadow = at(5)?;
    check(shadow.scopes.len() == 2, || format!("{} scopes while shadowing", shadow.scopes.len()))?;
    check(
        shadow.scopes.iter().all(|s| s.variables.len() == 1 && s.variables[0].name == "x"),
        || "each scope should bind exactly x".into(),
    )?;
    check(shadow.lookup("x") == Some(&Value::Int(2)), || format!("x resolves to {:?}", shadow.lookup("x")))?;
    let empty = at(7)?;
    check(
        empty.scopes.len() == 2 && empty.scopes[1].variables.is_empty(),
        || format!("empty block shows {:?}", empty.scopes),
    )?;
    Ok("two ScopeBlocks bind x, lookup finds the inner 2; empty block is an empty ScopeBlock".into())
}

type Criterion<'a> = (&'a str, &'a dyn Fn() -> Result<String, String>);

fn main() -> ExitCode {
    let work = Work::new();
    let criteria: [Criterion; 7] = [
        ("differential execution", &|| differential(&work)),
        ("container oracles", &container_oracles),
        ("bst insert/erase golden fragment", &|| bst_golden(&work)),
        ("hash bucket placement", &|| hash_buckets(&work)),
        ("trace closure", &|| closure(&work)),
        ("truncation", &|| truncation(&work)),
        ("scope semantics", &|| scopes(&work)),
    ];
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        match criterion() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
