//! Builds and runs corpus programs with the system C++ compiler.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;

use super::corpus::Case;

pub struct NativeRun {
    pub stdout: String,
    pub exit: i64,
}

pub fn compiler() -> Option<PathBuf> {
    let cxx = std::env::var_os("CXX").map_or_else(|| PathBuf::from("g++"), PathBuf::from);
    Command::new(&cxx)
        .arg("--version")
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .status()
        .ok()
        .filter(|s| s.success())
        .map(|_| cxx)
}

fn build_and_run(cxx: &Path, case: &Case, out_dir: &Path) -> Result<NativeRun, String> {
    let exe = out_dir.join(&case.name);
    let build = Command::new(cxx)
        .args(["-std=c++17", "-O0", "-w", "-o"])
        .arg(&exe)
        .arg(&case.path)
        .output()
        .map_err(|e| format!("{}: {e}", case.name))?;
    if !build.status.success() {
        return Err(format!("{}: {}", case.name, String::from_utf8_lossy(&build.stderr)));
    }
    let mut child = Command::new(&exe)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .map_err(|e| format!("{}: {e}", case.name))?;
    child
        .stdin
        .take()
        .expect("piped stdin")
        .write_all(case.stdin.as_deref().unwrap_or("").as_bytes())
        .map_err(|e| format!("{}: {e}", case.name))?;
    let out = child.wait_with_output().map_err(|e| format!("{}: {e}", case.name))?;
    Ok(NativeRun {
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        exit: i64::from(out.status.code().unwrap_or(-1)),
    })
}

/// Builds and runs every case in parallel, returning results in case order.
pub fn run_all(cxx: &Path, cases: &[Case], out_dir: &Path) -> Vec<Result<NativeRun, String>> {
    thread::scope(|s| {
        let handles: Vec<_> = cases
            .iter()
            .map(|case| s.spawn(move || build_and_run(cxx, case, out_dir)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("native runner")).collect()
    })
}
