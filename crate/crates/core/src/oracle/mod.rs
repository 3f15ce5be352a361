//! Bounded-domain semantics: the grounding `τ`, stable models, io-models and
//! evaluation of formulas and completions on finite universes.
//!
//! A bounded universe consists of finitely many symbolic constants, the
//! numerals of an integer range and optionally `#inf` and `#sup`. Object
//! variables range over all of these, integer variables over the range.
//! Term values leaving the range are dropped, both in `τ` and in the
//! evaluation of formulas, so the two sides of each theorem are compared on
//! the same finite structure.

mod eval;
pub mod ground;
mod tau;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::{IndexMap, IndexSet};
use serde::Serialize;
use varisat::{ExtendFormula, Lit};

use crate::{
    completion::{complete_with, CompletionOptions, IoProgram},
    error::OracleError,
    logic::{
        free_variables, Formula, Predicate, Quantifier, SecondOrderSentence, Sort, Term, Variable,
    },
    syntax::{Atom, Head, Precomputed, Program, ProgramTerm, Rule},
    translate::{tau_star_with, DivisionGuard, TranslationContext},
};
use eval::{AtomValue, Grounder};
pub use ground::{
    satisfiable, stable_models_brute_force, stable_models_of, AtomSet, AtomTable, GroundAtom,
    GroundFormula, GroundTheory, MAX_STABLE_MODEL_ATOMS,
};
pub use tau::{tau_ground, tau_ground_with, values};

/// Default bound on relation candidates per predicate variable in
/// [`eval_second_order_enumerate`].
pub const MAX_RELATION_CANDIDATES: u128 = 1 << 16;

/// A finite part of the set of precomputed terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedUniverse {
    pub constants: BTreeSet<String>,
    pub lo: i64,
    pub hi: i64,
    pub infimum: bool,
    pub supremum: bool,
}

impl BoundedUniverse {
    pub fn new(
        constants: impl IntoIterator<Item = impl Into<String>>,
        lo: i64,
        hi: i64,
    ) -> Result<Self, OracleError> {
        if lo > hi {
            return Err(OracleError::BadRange { lo, hi });
        }
        Ok(Self {
            constants: constants.into_iter().map(Into::into).collect(),
            lo,
            hi,
            infimum: false,
            supremum: false,
        })
    }

    pub fn with_extremes(mut self, infimum: bool, supremum: bool) -> Self {
        self.infimum = infimum;
        self.supremum = supremum;
        self
    }

    pub fn integers(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn contains_integer(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn contains(&self, term: &Precomputed) -> bool {
        match term {
            Precomputed::Infimum => self.infimum,
            Precomputed::Numeral(n) => self.contains_integer(*n),
            Precomputed::Symbol(s) => self.constants.contains(s),
            Precomputed::Supremum => self.supremum,
        }
    }

    /// All elements in the order on precomputed terms.
    pub fn objects(&self) -> Vec<Precomputed> {
        let mut out = Vec::new();
        if self.infimum {
            out.push(Precomputed::Infimum);
        }
        out.extend(self.integers().map(Precomputed::Numeral));
        out.extend(self.constants.iter().cloned().map(Precomputed::Symbol));
        if self.supremum {
            out.push(Precomputed::Supremum);
        }
        out
    }

    pub fn domain(&self, sort: Sort) -> Vec<Precomputed> {
        match sort {
            Sort::Object => self.objects(),
            Sort::Integer => self.integers().map(Precomputed::Numeral).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.constants.len()
            + (self.hi - self.lo + 1) as usize
            + usize::from(self.infimum)
            + usize::from(self.supremum)
    }

    /// The smallest universe containing this one and the given precomputed terms.
    pub fn extended_with<'a>(&self, terms: impl IntoIterator<Item = &'a Precomputed>) -> Self {
        let mut out = self.clone();
        for term in terms {
            match term {
                Precomputed::Infimum => out.infimum = true,
                Precomputed::Supremum => out.supremum = true,
                Precomputed::Numeral(n) => {
                    out.lo = out.lo.min(*n);
                    out.hi = out.hi.max(*n);
                }
                Precomputed::Symbol(s) => {
                    out.constants.insert(s.clone());
                }
            }
        }
        out
    }
}

impl fmt::Display for BoundedUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.constants.iter().cloned().collect();
        parts.push(format!("{}..{}", self.lo, self.hi));
        if self.infimum {
            parts.push("#inf".into());
        }
        if self.supremum {
            parts.push("#sup".into());
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Values of placeholders.
pub type Valuation = BTreeMap<String, Precomputed>;

/// An input `(v, i)` for an io-program.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Input {
    pub valuation: Valuation,
    pub atoms: AtomSet,
}

/// The interpretation `I^v` restricted to a bounded universe.
#[derive(Clone, Debug)]
pub struct BoundedInterpretation {
    pub universe: BoundedUniverse,
    pub valuation: Valuation,
    pub atoms: AtomSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub division_guard: DivisionGuard,
    pub max_atoms: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            division_guard: DivisionGuard::default(),
            max_atoms: MAX_STABLE_MODEL_ATOMS,
        }
    }
}

/// The atoms of a program consisting of facts without variables or operations.
pub fn facts(program: &Program) -> Result<AtomSet, OracleError> {
    program
        .rules
        .iter()
        .map(|rule| {
            let not_a_fact = || OracleError::NotAnInputAtom(rule.to_string());
            let Head::Basic(atom) = &rule.head else {
                return Err(not_a_fact());
            };
            if !rule.body.is_empty() {
                return Err(not_a_fact());
            }
            let arguments = atom
                .arguments
                .iter()
                .map(ProgramTerm::as_precomputed)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(not_a_fact)?;
            Ok(GroundAtom::new(atom.predicate.clone(), arguments))
        })
        .collect()
}

pub fn stable_models(
    program: &Program,
    universe: &BoundedUniverse,
) -> Result<BTreeSet<AtomSet>, OracleError> {
    stable_models_with(program, universe, &OracleOptions::default())
}

pub fn stable_models_with(
    program: &Program,
    universe: &BoundedUniverse,
    options: &OracleOptions,
) -> Result<BTreeSet<AtomSet>, OracleError> {
    let theory = tau_ground_with(program, universe, options.division_guard);
    stable_models_of(&theory, options.max_atoms)
}

fn check_valuation(
    placeholders: &IndexMap<String, Sort>,
    valuation: &Valuation,
    universe: &BoundedUniverse,
) -> Result<(), OracleError> {
    for (name, sort) in placeholders {
        let value = valuation
            .get(name)
            .ok_or_else(|| OracleError::MissingValuation(name.clone()))?;
        if matches!(value, Precomputed::Symbol(s) if placeholders.contains_key(s)) {
            return Err(OracleError::PlaceholderValue(name.clone()));
        }
        if *sort == Sort::Integer && value.as_integer().is_none() {
            return Err(OracleError::NotANumeral {
                name: name.clone(),
                value: value.to_string(),
            });
        }
        if !universe.contains(value) {
            return Err(OracleError::OutsideUniverse(format!(
                "value {value} of placeholder `{name}`"
            )));
        }
    }
    Ok(())
}

fn check_input(
    io: &IoProgram,
    input: &Input,
    universe: &BoundedUniverse,
) -> Result<(), OracleError> {
    check_valuation(&io.placeholders, &input.valuation, universe)?;
    for atom in &input.atoms {
        if !io.inputs.contains(&atom.symbol()) {
            return Err(OracleError::NotAnInputAtom(atom.to_string()));
        }
        for argument in &atom.arguments {
            if matches!(argument, Precomputed::Symbol(s) if io.placeholders.contains_key(s)) {
                return Err(OracleError::PlaceholderValue(atom.to_string()));
            }
            if !universe.contains(argument) {
                return Err(OracleError::OutsideUniverse(format!("atom {atom}")));
            }
        }
    }
    Ok(())
}

/// `Ω(v, i)`: the rules with placeholders replaced by their values, and the facts `i`.
pub fn instantiate(io: &IoProgram, input: &Input) -> Program {
    let lookup = |name: &str| -> Option<ProgramTerm> {
        io.placeholders
            .contains_key(name)
            .then(|| input.valuation.get(name).map(Precomputed::to_term))
            .flatten()
    };
    let mut rules: Vec<Rule> = io
        .program
        .rules
        .iter()
        .map(|rule| rule.map_terms(&|t| t.replace_constants(&lookup)))
        .collect();
    rules.extend(input.atoms.iter().map(|atom| Rule {
        head: Head::Basic(Atom::new(
            atom.predicate.clone(),
            atom.arguments.iter().map(Precomputed::to_term).collect(),
        )),
        body: Vec::new(),
    }));
    Program::new(rules)
}

/// The io-models of `Ω` for `(v, i)`: public parts of the stable models of `Ω(v, i)`.
pub fn io_models(
    io: &IoProgram,
    input: &Input,
    universe: &BoundedUniverse,
) -> Result<BTreeSet<AtomSet>, OracleError> {
    io_models_with(io, input, universe, &OracleOptions::default())
}

pub fn io_models_with(
    io: &IoProgram,
    input: &Input,
    universe: &BoundedUniverse,
    options: &OracleOptions,
) -> Result<BTreeSet<AtomSet>, OracleError> {
    check_input(io, input, universe)?;
    let models = stable_models_with(&instantiate(io, input), universe, options)?;
    Ok(models
        .into_iter()
        .map(|model| {
            model
                .into_iter()
                .filter(|atom| io.is_public(&atom.symbol()))
                .collect()
        })
        .collect())
}

/// The ground instances of `τ*Π` over the universe, with every atom kept
/// propositional and comparisons evaluated.
pub fn tau_star_ground(
    program: &Program,
    universe: &BoundedUniverse,
    guard: DivisionGuard,
) -> GroundTheory {
    let context = TranslationContext::new(Default::default(), guard);
    let sentences = tau_star_with(&context, program);
    let valuation = Valuation::new();
    let symbolic = |_: &Predicate, _: &[Precomputed]| AtomValue::Symbolic;
    let mut grounder = Grounder::new(universe, &valuation, &symbolic);
    let formulas = sentences
        .iter()
        .map(|s| grounder.ground(s, &mut Vec::new()))
        .filter(|f| !f.is_top())
        .collect();
    GroundTheory {
        atoms: grounder.atoms,
        formulas,
    }
}

fn placeholders_of(formula: &Formula) -> IndexSet<String> {
    formula
        .constants()
        .into_iter()
        .filter_map(|t| match t {
            Term::Placeholder { name, .. } => Some(name),
            _ => None,
        })
        .collect()
}

fn check_closed(formula: &Formula, valuation: &Valuation) -> Result<(), OracleError> {
    if let Some(v) = free_variables(formula).first() {
        return Err(OracleError::FreeVariable(v.name.clone()));
    }
    if let Some(name) = placeholders_of(formula)
        .into_iter()
        .find(|name| !valuation.contains_key(name))
    {
        return Err(OracleError::MissingValuation(name));
    }
    Ok(())
}

fn interpretation_atom_value<'a>(
    interpretation: &'a BoundedInterpretation,
    symbolic: &'a dyn Fn(&Predicate) -> bool,
) -> impl Fn(&Predicate, &[Precomputed]) -> AtomValue + 'a {
    move |predicate, arguments| {
        if symbolic(predicate) {
            return AtomValue::Symbolic;
        }
        let atom = GroundAtom::new(predicate.name().to_string(), arguments.to_vec());
        AtomValue::Fixed(interpretation.atoms.contains(&atom))
    }
}

/// Whether the interpretation satisfies a sentence without predicate variables.
pub fn eval_formula(
    formula: &Formula,
    interpretation: &BoundedInterpretation,
) -> Result<bool, OracleError> {
    check_closed(formula, &interpretation.valuation)?;
    if let Some(p) = formula.predicate_variables().first() {
        return Err(OracleError::FreeVariable(p.name.clone()));
    }
    let never = |_: &Predicate| false;
    let atom_value = interpretation_atom_value(interpretation, &never);
    let mut grounder = Grounder::new(
        &interpretation.universe,
        &interpretation.valuation,
        &atom_value,
    );
    Ok(grounder.ground(formula, &mut Vec::new()).is_top())
}

/// Grounds the matrix with the quantified predicate variables propositional.
fn ground_matrix(
    sentence: &SecondOrderSentence,
    interpretation: &BoundedInterpretation,
) -> Result<(GroundFormula, AtomTable), OracleError> {
    check_closed(&sentence.matrix, &interpretation.valuation)?;
    if let Some(p) = sentence
        .matrix
        .predicate_variables()
        .into_iter()
        .find(|p| !sentence.predicate_variables.contains(p))
    {
        return Err(OracleError::FreeVariable(p.name));
    }
    let is_variable = |p: &Predicate| matches!(p, Predicate::Variable(_));
    let atom_value = interpretation_atom_value(interpretation, &is_variable);
    let mut grounder = Grounder::new(
        &interpretation.universe,
        &interpretation.valuation,
        &atom_value,
    );
    let formula = grounder.ground(&sentence.matrix, &mut Vec::new());
    Ok((formula, grounder.atoms))
}

/// Whether the interpretation satisfies `∃P F` or `∀P F`, with the predicate
/// variables ranging over all relations on the universe.
///
/// The matrix is grounded with atoms of the predicate variables left
/// propositional, so the second-order quantifier becomes a satisfiability
/// (or validity) question decided by a SAT solver.
pub fn eval_second_order(
    sentence: &SecondOrderSentence,
    interpretation: &BoundedInterpretation,
) -> Result<bool, OracleError> {
    let (formula, atoms) = ground_matrix(sentence, interpretation)?;
    Ok(match sentence.quantifier {
        Quantifier::Exists => satisfiable(&formula, atoms.len()),
        Quantifier::ForAll => !satisfiable(&GroundFormula::not(formula), atoms.len()),
    })
}

/// [`eval_second_order`] by enumerating every relation for every predicate
/// variable, at most `cap` candidates per variable.
pub fn eval_second_order_enumerate(
    sentence: &SecondOrderSentence,
    interpretation: &BoundedInterpretation,
    cap: u128,
) -> Result<bool, OracleError> {
    let (formula, atoms) = ground_matrix(sentence, interpretation)?;
    let objects = interpretation.universe.objects();
    let mut tuples_per_variable = Vec::new();
    let mut total: u128 = 1;
    for p in &sentence.predicate_variables {
        let tuples = tau::cartesian(&vec![objects.clone(); p.arity]);
        let candidates = 1u128.checked_shl(tuples.len() as u32).unwrap_or(u128::MAX);
        if candidates > cap {
            return Err(OracleError::CapExceeded {
                what: format!("relations for {p}/{}", p.arity),
                required: candidates,
                cap,
            });
        }
        total = total.saturating_mul(candidates);
        tuples_per_variable.push(tuples);
    }
    if total > cap {
        return Err(OracleError::CapExceeded {
            what: "combined relation candidates".into(),
            required: total,
            cap,
        });
    }
    // position of each table atom in the combined candidate bit vector
    let mut offsets = Vec::new();
    let mut offset = 0;
    for tuples in &tuples_per_variable {
        offsets.push(offset);
        offset += tuples.len();
    }
    let bit_of: Vec<Option<usize>> = atoms
        .iter()
        .map(|atom| {
            let index = sentence
                .predicate_variables
                .iter()
                .position(|p| p.name == atom.predicate && p.arity == atom.arguments.len())?;
            let tuple = tuples_per_variable[index]
                .iter()
                .position(|t| *t == atom.arguments)?;
            Some(offsets[index] + tuple)
        })
        .collect();
    let exists = sentence.quantifier == Quantifier::Exists;
    for candidate in 0..total {
        let holds = |a: usize| bit_of[a].is_some_and(|bit| candidate >> bit & 1 == 1);
        if formula.eval(&holds) == exists {
            return Ok(exists);
        }
    }
    Ok(!exists)
}

/// Public atoms `I` with `I^in = i` such that `I^v` satisfies `COMP(Ω)`.
///
/// Output atoms over the universe become propositional variables next to the
/// predicate variables; the models of the grounded completion are enumerated
/// and projected onto the output atoms.
pub fn completion_models(
    io: &IoProgram,
    input: &Input,
    universe: &BoundedUniverse,
    guard: DivisionGuard,
) -> Result<BTreeSet<AtomSet>, OracleError> {
    check_input(io, input, universe)?;
    let completion = complete_with(
        io,
        CompletionOptions {
            division_guard: guard,
            keep_private_symbols: false,
        },
    );
    let sentence = completion.sentence();
    let atom_value = |predicate: &Predicate, arguments: &[Precomputed]| match predicate {
        Predicate::Symbol(symbol) if io.inputs.contains(symbol) => {
            let atom = GroundAtom::new(symbol.name.clone(), arguments.to_vec());
            AtomValue::Fixed(input.atoms.contains(&atom))
        }
        _ => AtomValue::Symbolic,
    };
    let mut grounder = Grounder::new(universe, &input.valuation, &atom_value);
    let objects = universe.objects();
    let mut outputs = Vec::new();
    for symbol in &io.outputs {
        for arguments in tau::cartesian(&vec![objects.clone(); symbol.arity]) {
            outputs.push(
                grounder
                    .atoms
                    .intern(GroundAtom::new(symbol.name.clone(), arguments)),
            );
        }
    }
    let formula = grounder.ground(&sentence.matrix, &mut Vec::new());
    let atoms = grounder.atoms;
    let mut encoder = ground::Encoder::new(atoms.len());
    encoder.assert(&formula);
    let mut models = BTreeSet::new();
    while encoder.solve() {
        let model = encoder.model();
        let mut public: AtomSet = input.atoms.clone();
        public.extend(
            outputs
                .iter()
                .filter(|a| model[**a])
                .map(|a| atoms.get(*a).clone()),
        );
        models.insert(public);
        let blocking: Vec<Lit> = outputs
            .iter()
            .map(|&a| {
                if model[a] {
                    !encoder.atom(a)
                } else {
                    encoder.atom(a)
                }
            })
            .collect();
        if blocking.is_empty() {
            break;
        }
        encoder.solver.add_clause(&blocking);
    }
    Ok(models)
}

/// Placeholders of the formulas with their sorts.
fn formula_placeholders(formulas: &[&Formula]) -> IndexMap<String, Sort> {
    let mut out = IndexMap::new();
    for formula in formulas {
        for term in formula.constants() {
            if let Term::Placeholder { name, sort } = term {
                out.insert(name, sort);
            }
        }
    }
    out
}

/// Every assignment of values from the universe to the placeholders and
/// free variables of the formulas.
fn assignments(
    formulas: &[&Formula],
    universe: &BoundedUniverse,
) -> Vec<(Valuation, Vec<(Variable, Precomputed)>)> {
    let placeholders: Vec<(String, Sort)> = formula_placeholders(formulas).into_iter().collect();
    let mut free: IndexSet<Variable> = IndexSet::new();
    for formula in formulas {
        free.extend(free_variables(formula));
    }
    let mut domains: Vec<Vec<Precomputed>> = placeholders
        .iter()
        .map(|(_, sort)| universe.domain(*sort))
        .collect();
    domains.extend(free.iter().map(|v| universe.domain(v.sort)));
    tau::cartesian(&domains)
        .into_iter()
        .map(|tuple| {
            let (values, env) = tuple.split_at(placeholders.len());
            let valuation = placeholders
                .iter()
                .map(|(name, _)| name.clone())
                .zip(values.iter().cloned())
                .collect();
            let env = free.iter().cloned().zip(env.iter().cloned()).collect();
            (valuation, env)
        })
        .collect()
}

fn universe_for(f: &Formula, g: &Formula, universe: &BoundedUniverse) -> BoundedUniverse {
    let constants: Vec<Precomputed> = f
        .constants()
        .into_iter()
        .chain(g.constants())
        .filter_map(|t| match t {
            Term::Constant(c) => Some(c),
            _ => None,
        })
        .collect();
    universe.extended_with(&constants)
}

/// Grounds both formulas with one atom table for every assignment.
fn ground_pairs(
    f: &Formula,
    g: &Formula,
    universe: &BoundedUniverse,
) -> Vec<(GroundFormula, GroundFormula, AtomTable)> {
    let universe = universe_for(f, g, universe);
    let symbolic = |_: &Predicate, _: &[Precomputed]| AtomValue::Symbolic;
    assignments(&[f, g], &universe)
        .into_iter()
        .map(|(valuation, env)| {
            let mut grounder = Grounder::new(&universe, &valuation, &symbolic);
            let mut env = env;
            let a = grounder.ground(f, &mut env);
            let b = grounder.ground(g, &mut env);
            (a, b, grounder.atoms)
        })
        .collect()
}

/// Whether `f` and `g` have the same truth value in every interpretation on
/// the universe (extended by the constants of both formulas), for all values
/// of placeholders and free variables.
pub fn equivalent_bounded(
    f: &Formula,
    g: &Formula,
    universe: &BoundedUniverse,
) -> Result<bool, OracleError> {
    for (a, b, atoms) in ground_pairs(f, g, universe) {
        let differ = GroundFormula::disjunction([
            GroundFormula::conjunction([a.clone(), GroundFormula::not(b.clone())]),
            GroundFormula::conjunction([b, GroundFormula::not(a)]),
        ]);
        if satisfiable(&differ, atoms.len()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`equivalent_bounded`] by evaluating both formulas under every set of atoms.
pub fn equivalent_bounded_brute_force(
    f: &Formula,
    g: &Formula,
    universe: &BoundedUniverse,
    max_atoms: usize,
) -> Result<bool, OracleError> {
    for (a, b, atoms) in ground_pairs(f, g, universe) {
        if atoms.len() > max_atoms {
            return Err(OracleError::CapExceeded {
                what: "brute-force equivalence check".into(),
                required: atoms.len() as u128,
                cap: max_atoms as u128,
            });
        }
        for mask in 0..1u64 << atoms.len() {
            let holds = |i: usize| mask >> i & 1 == 1;
            if a.eval(&holds) != b.eval(&holds) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
