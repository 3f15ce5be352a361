//! Reading programs, specifications, valuations and input facts.

use std::path::{Path, PathBuf};

use tightverify_core::{
    completion::IoProgram,
    oracle::{facts, AtomSet, Valuation},
    parse_program,
    spec::{parse_spec_sources, Specification},
    Precomputed, Program,
};

use crate::{Failure, Sources};

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

pub fn program(path: &Path) -> Result<Program, Failure> {
    parse_program(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

pub fn specification(paths: &[PathBuf]) -> Result<Specification, Failure> {
    let texts = paths
        .iter()
        .map(|p| Ok((p.display().to_string(), read(p)?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let sources: Vec<(&str, &str)> = texts
        .iter()
        .map(|(n, t)| (n.as_str(), t.as_str()))
        .collect();
    parse_spec_sources(&sources).map_err(|(name, e)| Failure::Usage(format!("{name}: {e}")))
}

/// The io-program of the sources; without specification files every
/// predicate is an output.
pub fn io_program(sources: &Sources) -> Result<(IoProgram, Specification), Failure> {
    let program = program(&sources.program)?;
    if sources.specs.is_empty() {
        return Ok((IoProgram::from_program(program), Specification::default()));
    }
    let spec = specification(&sources.specs)?;
    let io =
        IoProgram::with_specification(program, &spec).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok((io, spec))
}

pub fn precomputed(text: &str) -> Precomputed {
    match text {
        "#inf" => Precomputed::Infimum,
        "#sup" => Precomputed::Supremum,
        _ => match text.parse() {
            Ok(n) => Precomputed::Numeral(n),
            Err(_) => Precomputed::Symbol(text.to_string()),
        },
    }
}

pub fn valuation(assignments: &[String]) -> Result<Valuation, Failure> {
    assignments
        .iter()
        .map(|a| {
            let (name, value) = a
                .split_once('=')
                .ok_or_else(|| Failure::Usage(format!("`{a}` is not of the form NAME=VALUE")))?;
            Ok((name.trim().to_string(), precomputed(value.trim())))
        })
        .collect()
}

pub fn input_atoms(paths: &[PathBuf]) -> Result<AtomSet, Failure> {
    let mut atoms = AtomSet::new();
    for path in paths {
        let facts = facts(&program(path)?)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        atoms.extend(facts);
    }
    Ok(atoms)
}

pub fn int_range(text: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Usage(format!("`{text}` is not an integer range lo..hi"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

/// Whether the prover can be started: an existing path, or a name found on `PATH`.
pub fn executable_exists(executable: &Path) -> bool {
    if executable.components().count() > 1 {
        return executable.is_file();
    }
    std::env::var_os("PATH")
        .map(|paths| std::env::split_paths(&paths).any(|dir| dir.join(executable).is_file()))
        .unwrap_or(false)
}
