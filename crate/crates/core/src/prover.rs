//! Running an external TPTP prover on the forward and backward proof passes.
//!
//! Each pass starts from a set of presupposed formulas and proves its goals
//! one at a time; every proven goal is added to the presupposed formulas of
//! the following steps.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::Serialize;
use wait_timeout::ChildExt;

use crate::{
    completion::ProofObligations,
    error::ProverError,
    logic::Formula,
    spec::Direction,
    tptp::{emit_task, standard_axioms, ProofTask, Signature},
};

/// Environment variable naming the default prover executable.
pub const PROVER_ENV: &str = "TIGHTVERIFY_PROVER";
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(300);

#[derive(Clone, Debug)]
pub struct ProverConfig {
    pub executable: PathBuf,
    /// Arguments placed before the task file path.
    pub arguments: Vec<String>,
    pub time_limit: Duration,
    /// With two or more slots, the forward and backward passes run concurrently.
    pub parallel: usize,
}

impl ProverConfig {
    pub fn new(executable: impl Into<PathBuf>, time_limit: Duration) -> Result<Self, ProverError> {
        if time_limit.is_zero() {
            return Err(ProverError::NonPositiveTimeLimit);
        }
        Ok(Self {
            executable: executable.into(),
            arguments: Vec::new(),
            time_limit,
            parallel: 1,
        })
    }

    /// The executable named by `TIGHTVERIFY_PROVER`, or `vampire`.
    pub fn default_executable() -> PathBuf {
        std::env::var_os(PROVER_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("vampire"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Proven,
    Timeout,
    Disproven,
    Error,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Proven => "proven",
            Verdict::Timeout => "timeout",
            Verdict::Disproven => "disproven",
            Verdict::Error => "error",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StepResult {
    pub name: String,
    pub direction: Direction,
    pub formula: String,
    pub verdict: Verdict,
    /// Wall time in seconds.
    pub wall_time: f64,
    pub transcript: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overall {
    Verified,
    RefutedStep,
    Incomplete,
}

impl std::fmt::Display for Overall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Overall::Verified => "verified",
            Overall::RefutedStep => "refuted-step",
            Overall::Incomplete => "incomplete",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub tight: bool,
    pub private_recursion: bool,
    pub steps: Vec<StepResult>,
    pub overall: Overall,
}

/// Classifies prover output by its SZS status line.
pub fn classify(output: &str) -> Verdict {
    let status = output.lines().find_map(|line| {
        let rest = &line[line.find("SZS status")? + "SZS status".len()..];
        rest.split_whitespace().next()
    });
    match status {
        Some("Theorem" | "Unsatisfiable") => Verdict::Proven,
        Some("CounterSatisfiable" | "Satisfiable") => Verdict::Disproven,
        Some("Timeout" | "ResourceOut") => Verdict::Timeout,
        _ => Verdict::Error,
    }
}

/// Writes the task to `directory` and runs the prover on it.
pub fn run_step(
    task: &ProofTask,
    direction: Direction,
    config: &ProverConfig,
    directory: &Path,
) -> StepResult {
    let start = Instant::now();
    let result = |verdict, transcript: String| StepResult {
        name: task.name.clone(),
        direction,
        formula: task.conjecture.1.to_string(),
        verdict,
        wall_time: start.elapsed().as_secs_f64(),
        transcript,
    };
    let path = match write_task(task, directory) {
        Ok(path) => path,
        Err(e) => return result(Verdict::Error, e.to_string()),
    };
    let mut command = Command::new(&config.executable);
    command
        .args(&config.arguments)
        .arg(&path)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    #[cfg(unix)]
    {
        use std::os::unix::process::CommandExt;
        // a group of its own, so that helper processes are killed on timeout
        command.process_group(0);
    }
    let child = command.spawn();
    let mut child = match child {
        Ok(child) => child,
        Err(e) => {
            return result(
                Verdict::Error,
                format!("could not start {}: {e}", config.executable.display()),
            )
        }
    };
    let mut stdout = child.stdout.take().expect("stdout is piped");
    let mut stderr = child.stderr.take().expect("stderr is piped");
    let out_reader = std::thread::spawn(move || {
        let mut text = String::new();
        let _ = stdout.read_to_string(&mut text);
        text
    });
    let err_reader = std::thread::spawn(move || {
        let mut text = String::new();
        let _ = stderr.read_to_string(&mut text);
        text
    });
    let finished = match child.wait_timeout(config.time_limit) {
        Ok(status) => status.is_some(),
        Err(e) => {
            return result(
                Verdict::Error,
                format!("waiting for the prover failed: {e}"),
            )
        }
    };
    // also removes helpers that outlive a finished prover and hold its pipes
    kill(&mut child);
    let mut transcript = out_reader.join().unwrap_or_default();
    let errors = err_reader.join().unwrap_or_default();
    if !errors.is_empty() {
        transcript.push_str(&errors);
    }
    let verdict = if finished {
        classify(&transcript)
    } else {
        Verdict::Timeout
    };
    result(verdict, transcript)
}

fn kill(child: &mut std::process::Child) {
    #[cfg(unix)]
    if let Ok(group) = libc::pid_t::try_from(child.id()) {
        // SAFETY: signals the process group created for this child; the group
        // cannot be reused before the child is reaped below
        unsafe {
            libc::kill(-group, libc::SIGKILL);
        }
    }
    let _ = child.kill();
    let _ = child.wait();
}

fn write_task(task: &ProofTask, directory: &Path) -> Result<PathBuf, ProverError> {
    let text = emit_task(task)?;
    let path = directory.join(format!("{}.p", task.name));
    std::fs::write(&path, text).map_err(|source| ProverError::WriteTask {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Which passes to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Directions {
    pub forward: bool,
    pub backward: bool,
}

impl Directions {
    pub const BOTH: Directions = Directions {
        forward: true,
        backward: true,
    };

    pub fn selected(self) -> Vec<Direction> {
        let mut out = Vec::new();
        if self.forward {
            out.push(Direction::Forward);
        }
        if self.backward {
            out.push(Direction::Backward);
        }
        out
    }
}

/// The presupposed formulas and goals of one pass, each with its label.
pub struct Pass {
    pub direction: Direction,
    pub premises: Vec<(String, Formula)>,
    pub goals: Vec<(String, Formula)>,
}

fn labelled(kind: &str, formulas: &[Formula]) -> Vec<(String, Formula)> {
    formulas
        .iter()
        .enumerate()
        .map(|(i, f)| (format!("axiom_{kind}_{}", i + 1), f.clone()))
        .collect()
}

/// Premises and goals of a pass.
///
/// Forward: axioms, assumptions, the completed definitions of the private
/// symbols and `F′` are presupposed; forward lemmas and specs are goals.
/// Backward: `F′` is replaced by the specs; backward lemmas and the
/// conjunctive terms of `F′` are goals.
pub fn pass(obligations: &ProofObligations, direction: Direction) -> Pass {
    let mut all: Vec<&Formula> = Vec::new();
    for group in [
        &obligations.axioms,
        &obligations.assumptions,
        &obligations.completion_hypotheses,
        &obligations.public_completion,
        &obligations.specs,
        &obligations.lemmas_forward,
        &obligations.lemmas_backward,
    ] {
        all.extend(group);
    }
    let signature = Signature::of(all);
    let mut premises = labelled("standard", &standard_axioms(&signature));
    premises.extend(labelled("user", &obligations.axioms));
    premises.extend(labelled("assumption", &obligations.assumptions));
    premises.extend(labelled("completion", &obligations.completion_hypotheses));
    let (given, lemmas, targets, target_kind) = match direction {
        Direction::Forward => (
            labelled("public", &obligations.public_completion),
            &obligations.lemmas_forward,
            &obligations.specs,
            "spec",
        ),
        Direction::Backward => (
            labelled("spec", &obligations.specs),
            &obligations.lemmas_backward,
            &obligations.public_completion,
            "public",
        ),
    };
    premises.extend(given);
    let goals = lemmas
        .iter()
        .enumerate()
        .map(|(i, f)| (format!("{direction}_lemma_{}", i + 1), f.clone()))
        .chain(
            targets
                .iter()
                .enumerate()
                .map(|(i, f)| (format!("{direction}_{target_kind}_{}", i + 1), f.clone())),
        )
        .collect();
    Pass {
        direction,
        premises,
        goals,
    }
}

/// The tasks of a pass assuming every step succeeds.
pub fn pass_tasks(pass: &Pass) -> Vec<ProofTask> {
    let mut premises = pass.premises.clone();
    pass.goals
        .iter()
        .map(|(name, goal)| {
            let task = ProofTask {
                name: name.clone(),
                axioms: premises.clone(),
                conjecture: (format!("conjecture_{name}"), goal.clone()),
            };
            premises.push((format!("axiom_proven_{name}"), goal.clone()));
            task
        })
        .collect()
}

/// Writes every task of the selected passes to `directory`.
pub fn emit_tasks(
    obligations: &ProofObligations,
    directions: Directions,
    directory: &Path,
) -> Result<Vec<PathBuf>, ProverError> {
    let mut paths = Vec::new();
    for direction in directions.selected() {
        for task in pass_tasks(&pass(obligations, direction)) {
            paths.push(write_task(&task, directory)?);
        }
    }
    Ok(paths)
}

fn run_pass(
    pass: &Pass,
    config: &ProverConfig,
    keep_going: bool,
    directory: &Path,
) -> (Vec<StepResult>, bool) {
    let mut premises = pass.premises.clone();
    let mut steps = Vec::new();
    for (name, goal) in &pass.goals {
        let task = ProofTask {
            name: name.clone(),
            axioms: premises.clone(),
            conjecture: (format!("conjecture_{name}"), goal.clone()),
        };
        let step = run_step(&task, pass.direction, config, directory);
        let proven = step.verdict == Verdict::Proven;
        steps.push(step);
        if proven {
            premises.push((format!("axiom_proven_{name}"), goal.clone()));
        } else if !keep_going {
            return (steps, false);
        }
    }
    (steps, true)
}

/// Runs the selected passes and summarizes the outcome.
///
/// A pass stops at its first step that is not proven unless `keep_going` is
/// set. Without parallel slots, a failed forward pass also skips the
/// backward pass.
pub fn run_sequence(
    obligations: &ProofObligations,
    config: &ProverConfig,
    directions: Directions,
    keep_going: bool,
    directory: &Path,
) -> VerificationReport {
    let passes: Vec<Pass> = directions
        .selected()
        .into_iter()
        .map(|d| pass(obligations, d))
        .collect();
    let mut steps = Vec::new();
    let mut complete = true;
    if config.parallel >= 2 && passes.len() == 2 {
        let results: Vec<(Vec<StepResult>, bool)> = std::thread::scope(|scope| {
            let handles: Vec<_> = passes
                .iter()
                .map(|p| scope.spawn(|| run_pass(p, config, keep_going, directory)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("a proof pass panicked"))
                .collect()
        });
        for (pass_steps, finished) in results {
            steps.extend(pass_steps);
            complete &= finished;
        }
    } else {
        for p in &passes {
            let (pass_steps, finished) = run_pass(p, config, keep_going, directory);
            steps.extend(pass_steps);
            if !finished {
                complete = false;
                break;
            }
        }
    }
    let overall = if steps.iter().any(|s| s.verdict == Verdict::Disproven) {
        Overall::RefutedStep
    } else if complete && steps.iter().all(|s| s.verdict == Verdict::Proven) {
        Overall::Verified
    } else {
        Overall::Incomplete
    };
    VerificationReport {
        tight: true,
        private_recursion: false,
        steps,
        overall,
    }
}
