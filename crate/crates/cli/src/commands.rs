use std::collections::BTreeSet;
use std::time::Duration;

use serde::Serialize;
use tightverify_core::{
    analysis::{analyze as analyze_program, dependency_graph, AnalysisReport},
    completion::{build_obligations, complete_with, CompletionOptions, IoProgram},
    error::CompletionError,
    oracle::{
        completion_models, eval_second_order, instantiate, io_models_with, stable_models_with,
        AtomSet, BoundedInterpretation, BoundedUniverse, Input, OracleOptions,
    },
    prover::{emit_tasks, run_sequence, Directions, Overall, ProverConfig, VerificationReport},
    simplify::normalize_bound_names,
    translate::DivisionGuard,
    Formula,
};

use crate::{load, AnalyzeArgs, CompleteArgs, DirectionArg, Failure, OracleArgs, VerifyArgs};

fn print_json(value: &impl Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize to JSON")
    );
}

#[derive(Serialize)]
struct CompletionOutput {
    definitions: Vec<String>,
    constraints: Vec<String>,
}

fn completion_output(io: &IoProgram, guard: DivisionGuard, simplify: bool) -> CompletionOutput {
    let mut completion = complete_with(
        io,
        CompletionOptions {
            division_guard: guard,
            keep_private_symbols: true,
        },
    );
    if simplify {
        completion = completion.simplified();
    }
    // bound names follow the sort convention, so printed formulas read back unchanged
    let print = |f: &Formula| normalize_bound_names(f).to_string();
    CompletionOutput {
        definitions: completion
            .definitions
            .iter()
            .map(|d| print(&d.formula))
            .collect(),
        constraints: completion.constraints.iter().map(print).collect(),
    }
}

pub fn complete(args: CompleteArgs) -> Result<(), Failure> {
    let (io, _) = load::io_program(&args.sources)?;
    let output = completion_output(&io, args.division_guard.into(), !args.no_simplify);
    if args.json {
        print_json(&output);
    } else {
        for line in output.definitions.iter().chain(&output.constraints) {
            println!("{line}");
        }
    }
    Ok(())
}

pub fn analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let (io, _) = load::io_program(&args.sources)?;
    let report = analyze_program(&io);
    if args.json {
        print_json(&report);
        return Ok(());
    }
    print!("{}", dependency_graph(&io).to_dot(&|p| io.is_private(p)));
    print_verdicts(&report);
    Ok(())
}

fn print_verdicts(report: &AnalysisReport) {
    match &report.positive_cycle {
        None => println!("tight: yes"),
        Some(cycle) => {
            let mut names: Vec<String> = cycle.iter().map(ToString::to_string).collect();
            names.extend(names.first().cloned());
            println!("tight: no (positive cycle {})", names.join(" -> "))
        }
    }
    match &report.private_recursion {
        None => println!("private recursion: no"),
        Some(reason) => println!("private recursion: yes ({reason})"),
    }
}

#[derive(Serialize)]
struct VerifyOutput {
    completion: CompletionOutput,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    emitted: Vec<String>,
}

pub fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let (io, spec) = load::io_program(&args.sources)?;
    if !(args.time_limit > 0.0 && args.time_limit.is_finite()) {
        return Err(Failure::Usage("the time limit must be positive".into()));
    }
    let guard: DivisionGuard = args.division_guard.into();
    let analysis = analyze_program(&io);
    let obligations =
        build_obligations(&io, &spec, guard, !args.no_simplify).map_err(|e| match e {
            CompletionError::NotTight(_) | CompletionError::PrivateRecursion(_) => {
                Failure::Rejected(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        })?;
    let completion = completion_output(&io, guard, !args.no_simplify);
    if !args.json {
        print_verdicts(&analysis);
        println!("completion:");
        for line in completion.definitions.iter().chain(&completion.constraints) {
            println!("  {line}");
        }
    }

    let directions = match args.direction {
        DirectionArg::Forward => Directions {
            forward: true,
            backward: false,
        },
        DirectionArg::Backward => Directions {
            forward: false,
            backward: true,
        },
        DirectionArg::Both => Directions::BOTH,
    };
    let executable = args
        .prover_path
        .clone()
        .unwrap_or_else(ProverConfig::default_executable);
    let emit_only =
        args.emit_only || (args.emit_tptp.is_some() && !load::executable_exists(&executable));
    if let Some(directory) = &args.emit_tptp {
        std::fs::create_dir_all(directory)
            .map_err(|e| Failure::Usage(format!("{}: {e}", directory.display())))?;
    }
    if emit_only {
        let directory = args
            .emit_tptp
            .as_ref()
            .expect("emit-only mode needs a directory");
        let paths = emit_tasks(&obligations, directions, directory)
            .map_err(|e| Failure::Usage(e.to_string()))?;
        let emitted: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
        if args.json {
            print_json(&VerifyOutput {
                completion,
                report: None,
                emitted,
            });
        } else {
            for path in &emitted {
                println!("wrote {path}");
            }
        }
        return Ok(());
    }

    let mut config = ProverConfig::new(executable, Duration::from_secs_f64(args.time_limit))
        .map_err(|e| Failure::Usage(e.to_string()))?;
    config.arguments = args.prover_args.clone();
    config.parallel = if args.parallel { 2 } else { 1 };
    let scratch;
    let directory = match &args.emit_tptp {
        Some(directory) => directory.as_path(),
        None => {
            scratch = tempfile::tempdir().map_err(|e| Failure::Usage(e.to_string()))?;
            scratch.path()
        }
    };
    let mut report = run_sequence(
        &obligations,
        &config,
        directions,
        args.keep_going,
        directory,
    );
    report.tight = analysis.tight;
    report.private_recursion = analysis.private_recursion.is_some();
    let overall = report.overall;
    if args.json {
        print_json(&VerifyOutput {
            completion,
            report: Some(report),
            emitted: Vec::new(),
        });
    } else {
        for step in &report.steps {
            println!(
                "{:<8} {:<20} {:<9} [{:>8.3} s] {}",
                step.direction.to_string(),
                step.name,
                step.verdict.to_string(),
                step.wall_time,
                step.formula
            );
            if step.verdict == tightverify_core::prover::Verdict::Error {
                for line in step.transcript.lines().take(5) {
                    println!("         | {line}");
                }
            }
        }
        println!("overall: {overall}");
    }
    match overall {
        Overall::Verified => Ok(()),
        _ => Err(Failure::Unsuccessful),
    }
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    /// `None` when the check does not apply to the program.
    holds: Option<bool>,
}

#[derive(Serialize)]
struct OracleOutput {
    universe: String,
    stable_models: BTreeSet<AtomSet>,
    io_models: BTreeSet<AtomSet>,
    checks: Vec<Check>,
}

fn format_atoms(atoms: &AtomSet) -> String {
    let parts: Vec<String> = atoms.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn oracle(args: OracleArgs) -> Result<(), Failure> {
    let (io, _) = load::io_program(&args.sources)?;
    let input = Input {
        valuation: load::valuation(&args.valuation)?,
        atoms: load::input_atoms(&args.inputs)?,
    };
    let (lo, hi) = load::int_range(&args.int_range)?;
    let instance = instantiate(&io, &input);
    let constants = instance
        .symbolic_constants()
        .into_iter()
        .chain(args.constants.iter().cloned())
        .filter(|c| !io.placeholders.contains_key(c));
    let universe = BoundedUniverse::new(constants, lo, hi)
        .map_err(|e| Failure::Usage(e.to_string()))?
        .with_extremes(args.extremes, args.extremes);
    let options = OracleOptions {
        division_guard: args.division_guard.into(),
        max_atoms: args.max_atoms,
    };
    let oracle_error = |e: tightverify_core::error::OracleError| Failure::Usage(e.to_string());
    let io_models = io_models_with(&io, &input, &universe, &options).map_err(oracle_error)?;
    let stable_models = stable_models_with(&instance, &universe, &options).map_err(oracle_error)?;

    let completion = complete_with(
        &io,
        CompletionOptions {
            division_guard: options.division_guard,
            keep_private_symbols: false,
        },
    );
    let existential = completion.sentence();
    let at = |atoms: &AtomSet| BoundedInterpretation {
        universe: universe.clone(),
        valuation: input.valuation.clone(),
        atoms: atoms.clone(),
    };
    let mut satisfies_completion = true;
    for model in &io_models {
        satisfies_completion &=
            eval_second_order(&existential, &at(model)).map_err(oracle_error)?;
    }
    let analysis = analyze_program(&io);
    let completion_equal = if analysis.tight {
        Some(
            completion_models(&io, &input, &universe, options.division_guard)
                .map_err(oracle_error)?
                == io_models,
        )
    } else {
        None
    };
    let forms_agree = match completion.universal_sentence() {
        Ok(universal) if analysis.private_recursion.is_none() => {
            let mut agree = true;
            for model in &io_models {
                let m = at(model);
                agree &= eval_second_order(&existential, &m).map_err(oracle_error)?
                    == eval_second_order(&universal, &m).map_err(oracle_error)?;
            }
            Some(agree)
        }
        _ => None,
    };
    let checks = vec![
        Check {
            name: "io-models satisfy the completion",
            holds: Some(satisfies_completion),
        },
        Check {
            name: "io-models equal the completion models",
            holds: completion_equal,
        },
        Check {
            name: "existential and universal completion agree",
            holds: forms_agree,
        },
    ];
    let failed = checks.iter().any(|c| c.holds == Some(false));
    let output = OracleOutput {
        universe: universe.to_string(),
        stable_models,
        io_models,
        checks,
    };
    if args.json {
        print_json(&output);
    } else {
        println!("universe: {}", output.universe);
        println!("stable models: {}", output.stable_models.len());
        for model in &output.stable_models {
            println!("  {}", format_atoms(model));
        }
        println!("io-models: {}", output.io_models.len());
        for model in &output.io_models {
            println!("  {}", format_atoms(model));
        }
        for check in &output.checks {
            let verdict = match check.holds {
                Some(true) => "holds",
                Some(false) => "FAILS",
                None => "not applicable",
            };
            println!("{}: {verdict}", check.name);
        }
    }
    if failed {
        Err(Failure::Unsuccessful)
    } else {
        Ok(())
    }
}
