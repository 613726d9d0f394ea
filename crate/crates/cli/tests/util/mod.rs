//! Helpers shared by the CLI integration tests.
//!
//! Each test target compiles its own copy, so not every helper is used
//! from every target.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

/// Path to the compiled `curbatch` binary under test.
pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_curbatch")
}

/// Directory holding the committed fixture corpus and golden outputs.
pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// What one invocation produced.
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the binary with `args`, isolated from any ambient configuration.
pub fn run(args: &[&str]) -> Run {
    run_with(args, &[])
}

/// Runs the binary with `args` plus extra environment variables.
pub fn run_with(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(bin());
    cmd.args(args).env_remove("CURBATCH_CONFIG");
    for (key, value) in env {
        cmd.env(key, value);
    }
    let output = cmd.output().expect("binary runs");
    Run {
        code: output.status.code().expect("binary exits normally"),
        stdout: String::from_utf8(output.stdout).expect("stdout is UTF-8"),
        stderr: String::from_utf8(output.stderr).expect("stderr is UTF-8"),
    }
}

/// Reads a file the test expects to exist.
pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

/// Writes a test input file.
pub fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap_or_else(|e| panic!("writing {}: {e}", path.display()));
}

/// Converts a path to the `&str` form `run` wants.
pub fn s(path: &Path) -> &str {
    path.to_str().expect("test paths are UTF-8")
}
