//! Subprocess adapter for external hypergraph partitioners.
//!
//! Each call gets a fresh temporary directory holding `input.hgr` (hMETIS
//! format) and the solver's `output.part`. The command template is split on
//! whitespace (no shell quoting) and the tokens `{input}`, `{output}`, `{k}`,
//! `{epsilon}` and `{seed}` are substituted inside every argument. The solver
//! must write exactly |V| block ids to `{output}`; the cut is always
//! recomputed locally. stdout/stderr go to files in the same directory so a
//! chatty solver cannot block on a full pipe. The directory is removed on
//! every exit path, including timeouts.

use std::fs;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use serde::Deserialize;

use super::{PartitionError, PartitionOutcome, PartitionRequest};
use crate::hypergraph::{read_partition, write_hmetis};

pub const DEFAULT_TIMEOUT_MS: u64 = 60_000;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalSolverConfig {
    pub name: String,
    pub command: String,
    #[serde(default = "default_timeout")]
    pub timeout_ms: u64,
}

fn default_timeout() -> u64 {
    DEFAULT_TIMEOUT_MS
}

impl ExternalSolverConfig {
    pub fn new(name: impl Into<String>, command: impl Into<String>) -> Self {
        ExternalSolverConfig {
            name: name.into(),
            command: command.into(),
            timeout_ms: DEFAULT_TIMEOUT_MS,
        }
    }

    pub fn validate(&self) -> Result<(), PartitionError> {
        if self.name.trim().is_empty() {
            return Err(PartitionError::Config("external solver needs a name".into()));
        }
        if self.command.split_whitespace().next().is_none() {
            return Err(PartitionError::Config(format!("external solver `{}` has an empty command", self.name)));
        }
        if !self.command.contains("{input}") {
            return Err(PartitionError::Config(format!(
                "external solver `{}`: command must reference {{input}}",
                self.name
            )));
        }
        Ok(())
    }

    /// Program and arguments with tokens substituted.
    pub fn render(&self, input: &str, output: &str, k: usize, epsilon: f64, seed: u64) -> Vec<String> {
        self.command
            .split_whitespace()
            .map(|arg| {
                arg.replace("{input}", input)
                    .replace("{output}", output)
                    .replace("{k}", &k.to_string())
                    .replace("{epsilon}", &epsilon.to_string())
                    .replace("{seed}", &seed.to_string())
            })
            .collect()
    }
}

pub fn partition_external(req: &PartitionRequest<'_>, solver: &ExternalSolverConfig) -> Result<PartitionOutcome, PartitionError> {
    req.check()?;
    solver.validate()?;
    let started = Instant::now();
    let failed = |msg: String| PartitionError::SolverFailed {
        name: solver.name.clone(),
        msg,
    };

    let dir = tempfile::Builder::new().prefix("qpart-ext-").tempdir()?;
    let input = dir.path().join("input.hgr");
    let output = dir.path().join("output.part");
    fs::write(&input, write_hmetis(req.hypergraph))?;

    let argv = solver.render(
        &input.to_string_lossy(),
        &output.to_string_lossy(),
        req.spec.k,
        req.spec.epsilon,
        req.seed,
    );
    let mut child = Command::new(&argv[0])
        .args(&argv[1..])
        .current_dir(dir.path())
        .stdin(Stdio::null())
        .stdout(fs::File::create(dir.path().join("stdout.log"))?)
        .stderr(fs::File::create(dir.path().join("stderr.log"))?)
        .spawn()
        .map_err(|e| failed(format!("cannot start `{}`: {e}", argv[0])))?;

    let timeout_ms = req.budget_ms.unwrap_or(solver.timeout_ms);
    let deadline = started + Duration::from_millis(timeout_ms);
    let status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if Instant::now() >= deadline {
            let _ = child.kill();
            let _ = child.wait();
            return Err(PartitionError::Timeout {
                name: solver.name.clone(),
                timeout_ms,
            });
        }
        thread::sleep(Duration::from_millis(2));
    };
    if !status.success() {
        let stderr = fs::read_to_string(dir.path().join("stderr.log")).unwrap_or_default();
        let tail: String = stderr.lines().rev().take(3).collect::<Vec<_>>().join(" | ");
        return Err(failed(format!("exited with {status}: {tail}")));
    }
    let text = fs::read_to_string(&output).map_err(|e| failed(format!("no output file: {e}")))?;
    let assignment = read_partition(&text, req.spec.n, req.spec.k).map_err(|source| PartitionError::BadOutput {
        name: solver.name.clone(),
        source,
    })?;
    let outcome = PartitionOutcome::finish(req, &solver.name, assignment, started);
    drop(dir);
    outcome
}
