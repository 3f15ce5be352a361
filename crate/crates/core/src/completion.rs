//! Io-programs, completed definitions, constraint representations and the
//! completion with predicate variables for private symbols.

use std::collections::HashMap;

use indexmap::{IndexMap, IndexSet};

use crate::{
    analysis,
    error::CompletionError,
    logic::{
        free_variables, substitute_predicates, Formula, Predicate, PredicateVariable, Quantifier,
        SecondOrderSentence, Sort, Term, Variable,
    },
    simplify::simplify,
    spec::{Direction, Specification},
    syntax::{Head, PredicateSymbol, Program, Rule},
    translate::{DivisionGuard, FreshNames, RuleTranslator, TranslationContext},
};

/// A program together with placeholders, input symbols and output symbols.
#[derive(Clone, Debug)]
pub struct IoProgram {
    pub program: Program,
    pub placeholders: IndexMap<String, Sort>,
    pub inputs: IndexSet<PredicateSymbol>,
    pub outputs: IndexSet<PredicateSymbol>,
}

impl IoProgram {
    pub fn new(
        program: Program,
        placeholders: IndexMap<String, Sort>,
        inputs: IndexSet<PredicateSymbol>,
        outputs: IndexSet<PredicateSymbol>,
    ) -> Result<Self, CompletionError> {
        if let Some(symbol) = inputs.iter().find(|p| outputs.contains(*p)) {
            return Err(CompletionError::InputAndOutput(symbol.clone()));
        }
        let heads = program.head_predicates();
        if let Some(symbol) = inputs.iter().find(|p| heads.contains(*p)) {
            return Err(CompletionError::InputInHead(symbol.clone()));
        }
        Ok(Self {
            program,
            placeholders,
            inputs,
            outputs,
        })
    }

    /// A plain program: no placeholders or inputs, every predicate is an output.
    pub fn from_program(program: Program) -> Self {
        let outputs = program.predicates();
        Self {
            program,
            placeholders: IndexMap::new(),
            inputs: IndexSet::new(),
            outputs,
        }
    }

    pub fn with_specification(
        program: Program,
        spec: &Specification,
    ) -> Result<Self, CompletionError> {
        Self::new(
            program,
            spec.placeholders.clone(),
            spec.inputs.clone(),
            spec.outputs.clone(),
        )
    }

    pub fn is_public(&self, symbol: &PredicateSymbol) -> bool {
        self.inputs.contains(symbol) || self.outputs.contains(symbol)
    }

    pub fn is_private(&self, symbol: &PredicateSymbol) -> bool {
        !self.is_public(symbol)
    }

    /// Private symbols in order of first occurrence.
    pub fn private_symbols(&self) -> IndexSet<PredicateSymbol> {
        self.program
            .predicates()
            .into_iter()
            .filter(|p| self.is_private(p))
            .collect()
    }

    /// Symbols that receive a completed definition: every non-input symbol
    /// occurring in the rules, followed by declared outputs that do not occur.
    pub fn defined_symbols(&self) -> IndexSet<PredicateSymbol> {
        let mut symbols: IndexSet<PredicateSymbol> = self
            .program
            .predicates()
            .into_iter()
            .filter(|p| !self.inputs.contains(p))
            .collect();
        symbols.extend(self.outputs.iter().cloned());
        symbols
    }

    pub fn translation_context(&self, division_guard: DivisionGuard) -> TranslationContext {
        TranslationContext::new(
            self.placeholders
                .iter()
                .map(|(name, sort)| (name.clone(), *sort))
                .collect(),
            division_guard,
        )
    }

    /// Predicate variables for the private symbols, named by capitalizing the
    /// symbol name (with the arity appended when two private symbols share a name).
    pub fn predicate_variables(&self) -> IndexMap<PredicateSymbol, PredicateVariable> {
        let private = self.private_symbols();
        private
            .iter()
            .map(|symbol| {
                let mut name = capitalize(&symbol.name);
                if private
                    .iter()
                    .any(|other| other != symbol && other.name == symbol.name)
                {
                    name = format!("{name}_{}", symbol.arity);
                }
                (symbol.clone(), PredicateVariable::new(name, symbol.arity))
            })
            .collect()
    }
}

fn capitalize(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// The rules of the forms `p(t) ← Body` and `{p(t)} ← Body` for `p/n`, in program order.
pub fn definition_of<'a>(symbol: &PredicateSymbol, program: &'a Program) -> Vec<&'a Rule> {
    program
        .rules
        .iter()
        .filter(|rule| {
            rule.head
                .atom()
                .is_some_and(|atom| atom.symbol() == *symbol)
        })
        .collect()
}

/// Formula representation of a basic or choice rule for head variables `V1…Vn`.
pub fn formula_representation(
    context: &TranslationContext,
    rule: &Rule,
    head_variables: &[Variable],
) -> Result<Formula, CompletionError> {
    let mut fresh = FreshNames::for_rule(rule);
    for v in head_variables {
        fresh.reserve(&v.name);
    }
    let mut translator = RuleTranslator::with_names(context, fresh);
    translator
        .formula_representation(rule, head_variables)
        .ok_or_else(|| CompletionError::UnexpectedConstraint(rule.to_string()))
}

/// A completed definition, before or after predicate-variable substitution.
#[derive(Clone, Debug)]
pub struct CompletedDefinition {
    pub symbol: PredicateSymbol,
    pub private: bool,
    pub formula: Formula,
}

/// The completion split into its conjunctive terms.
#[derive(Clone, Debug)]
pub struct Completion {
    /// Private symbols and their predicate variables, in order of first occurrence.
    pub predicate_variables: IndexMap<PredicateSymbol, PredicateVariable>,
    /// Private symbols ordered so that each definition only mentions earlier ones,
    /// if the program does not use private recursion.
    pub private_order: Option<Vec<PredicateSymbol>>,
    pub definitions: Vec<CompletedDefinition>,
    pub constraints: Vec<Formula>,
}

/// The completion `F1(P) ∧ ⋯ ∧ Fl(P) ∧ F′(P)` grouped for the universal form.
#[derive(Clone, Debug)]
pub struct CompletionParts {
    pub private_definitions: Vec<(PredicateVariable, Formula)>,
    /// Conjunctive terms of `F′`.
    pub public_part: Vec<Formula>,
}

impl Completion {
    /// All conjunctive terms in completion order.
    pub fn conjuncts(&self) -> Vec<Formula> {
        self.definitions
            .iter()
            .map(|d| d.formula.clone())
            .chain(self.constraints.iter().cloned())
            .collect()
    }

    /// `COMP(Ω) = ∃P1…Pl F`.
    pub fn sentence(&self) -> SecondOrderSentence {
        SecondOrderSentence {
            quantifier: Quantifier::Exists,
            predicate_variables: self.predicate_variables.values().cloned().collect(),
            matrix: Formula::conjunction(self.conjuncts()),
        }
    }

    pub fn parts(&self) -> Result<CompletionParts, CompletionError> {
        let order = self.private_order.as_ref().ok_or_else(|| {
            CompletionError::PrivateRecursion("no order of the private symbols exists".into())
        })?;
        let private_definitions = order
            .iter()
            .map(|symbol| {
                let definition = self
                    .definitions
                    .iter()
                    .find(|d| &d.symbol == symbol)
                    .expect("every private symbol has a completed definition");
                (
                    self.predicate_variables[symbol].clone(),
                    definition.formula.clone(),
                )
            })
            .collect();
        let public_part = self
            .definitions
            .iter()
            .filter(|d| !d.private)
            .map(|d| d.formula.clone())
            .chain(self.constraints.iter().cloned())
            .collect();
        Ok(CompletionParts {
            private_definitions,
            public_part,
        })
    }

    /// `∀P1…Pl (F1(P) ∧ ⋯ ∧ Fl(P) → F′(P))`.
    pub fn universal_sentence(&self) -> Result<SecondOrderSentence, CompletionError> {
        Ok(universalize(
            self.predicate_variables.values().cloned().collect(),
            &self.parts()?,
        ))
    }

    /// Applies the simplifier to every conjunctive term.
    pub fn simplified(&self) -> Completion {
        Completion {
            predicate_variables: self.predicate_variables.clone(),
            private_order: self.private_order.clone(),
            definitions: self
                .definitions
                .iter()
                .map(|d| CompletedDefinition {
                    symbol: d.symbol.clone(),
                    private: d.private,
                    formula: simplify(&d.formula),
                })
                .collect(),
            constraints: self.constraints.iter().map(simplify).collect(),
        }
    }
}

pub fn universalize(
    predicate_variables: Vec<PredicateVariable>,
    parts: &CompletionParts,
) -> SecondOrderSentence {
    let public = Formula::conjunction(parts.public_part.iter().cloned());
    let matrix = if parts.private_definitions.is_empty() {
        public
    } else {
        Formula::implies(
            Formula::conjunction(parts.private_definitions.iter().map(|(_, f)| f.clone())),
            public,
        )
    };
    SecondOrderSentence {
        quantifier: Quantifier::ForAll,
        predicate_variables,
        matrix,
    }
}

/// Options for building completions.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompletionOptions {
    pub division_guard: DivisionGuard,
    /// Keep private predicate symbols instead of replacing them by predicate variables.
    pub keep_private_symbols: bool,
}

struct Builder<'a> {
    io: &'a IoProgram,
    context: TranslationContext,
    substitution: HashMap<PredicateSymbol, Predicate>,
}

impl Builder<'_> {
    fn replace_private(&self, formula: Formula) -> Formula {
        substitute_predicates(&formula, &self.substitution)
            .expect("predicate variables have the arity of their symbols")
    }

    fn completed_definition(&self, symbol: &PredicateSymbol) -> Formula {
        let rules = definition_of(symbol, &self.io.program);
        let mut fresh = FreshNames::new(rules.iter().flat_map(|r| r.variables()));
        let head_variables: Vec<Variable> = if symbol.arity == 1 {
            vec![fresh.object("V")]
        } else {
            (1..=symbol.arity)
                .map(|i| fresh.object(&format!("V{i}")))
                .collect()
        };
        let mut disjuncts = Vec::new();
        for rule in rules {
            let mut translator = RuleTranslator::with_names(&self.context, fresh);
            let representation = translator
                .formula_representation(rule, &head_variables)
                .expect("definitions contain no constraints");
            fresh = translator.fresh;
            let bound: Vec<Variable> = free_variables(&representation)
                .into_iter()
                .filter(|v| !head_variables.contains(v))
                .collect();
            disjuncts.push(Formula::quantify(
                Quantifier::Exists,
                &bound,
                representation,
            ));
        }
        let head = Formula::atom(
            symbol.clone(),
            head_variables.iter().map(Term::var).collect(),
        );
        let definition = Formula::quantify(
            Quantifier::ForAll,
            &head_variables,
            Formula::iff(head, Formula::disjunction(disjuncts)),
        );
        self.replace_private(definition)
    }

    fn constraint(&self, rule: &Rule) -> Formula {
        let mut translator = RuleTranslator::new(&self.context, rule);
        let body = translator.tau_b_body(&rule.body);
        self.replace_private(Formula::not(body).universal_closure())
    }
}

/// Completed definition of a non-input symbol, with predicate variables for
/// private symbols.
pub fn completed_definition(
    symbol: &PredicateSymbol,
    io: &IoProgram,
) -> Result<Formula, CompletionError> {
    if io.inputs.contains(symbol) {
        return Err(CompletionError::InputSymbol(symbol.clone()));
    }
    Ok(builder(io, CompletionOptions::default()).completed_definition(symbol))
}

/// Universal closure of `¬τB(Body)` for a constraint, with predicate variables
/// for private symbols.
pub fn constraint_representation(rule: &Rule, io: &IoProgram) -> Result<Formula, CompletionError> {
    if rule.head != Head::Empty {
        return Err(CompletionError::NotAConstraint(rule.to_string()));
    }
    Ok(builder(io, CompletionOptions::default()).constraint(rule))
}

fn builder(io: &IoProgram, options: CompletionOptions) -> Builder<'_> {
    let substitution = if options.keep_private_symbols {
        HashMap::new()
    } else {
        io.predicate_variables()
            .into_iter()
            .map(|(symbol, variable)| (symbol, Predicate::Variable(variable)))
            .collect()
    };
    Builder {
        io,
        context: io.translation_context(options.division_guard),
        substitution,
    }
}

pub fn complete_with(io: &IoProgram, options: CompletionOptions) -> Completion {
    let builder = builder(io, options);
    let definitions = io
        .defined_symbols()
        .into_iter()
        .map(|symbol| CompletedDefinition {
            formula: builder.completed_definition(&symbol),
            private: io.is_private(&symbol),
            symbol,
        })
        .collect();
    let constraints = io
        .program
        .rules
        .iter()
        .filter(|r| r.is_constraint())
        .map(|r| builder.constraint(r))
        .collect();
    Completion {
        predicate_variables: io.predicate_variables(),
        private_order: analysis::topological_private_order(io).ok(),
        definitions,
        constraints,
    }
}

pub fn complete(io: &IoProgram) -> Completion {
    complete_with(io, CompletionOptions::default())
}

/// `COMP(Ω)`.
pub fn comp(io: &IoProgram) -> SecondOrderSentence {
    complete(io).sentence()
}

/// The formulas entering the forward and backward proof passes.
#[derive(Clone, Debug, Default)]
pub struct ProofObligations {
    pub axioms: Vec<Formula>,
    pub assumptions: Vec<Formula>,
    /// `F1(p), …, Fl(p)` with the private predicate symbols restored.
    pub completion_hypotheses: Vec<Formula>,
    /// Conjunctive terms of `F′(p)`.
    pub public_completion: Vec<Formula>,
    pub specs: Vec<Formula>,
    pub lemmas_forward: Vec<Formula>,
    pub lemmas_backward: Vec<Formula>,
}

/// Checks applicability and instantiates `A ∧ F1(p) ∧ ⋯ ∧ Fl(p) → (F′(p) ↔ S)`.
pub fn build_obligations(
    io: &IoProgram,
    spec: &Specification,
    division_guard: DivisionGuard,
    simplify_formulas: bool,
) -> Result<ProofObligations, CompletionError> {
    if let Some(cycle) = analysis::positive_cycle(io) {
        return Err(CompletionError::NotTight(cycle));
    }
    if let Some(reason) = analysis::private_recursion(io) {
        return Err(CompletionError::PrivateRecursion(reason.to_string()));
    }
    let mut completion = complete_with(
        io,
        CompletionOptions {
            division_guard,
            keep_private_symbols: true,
        },
    );
    if simplify_formulas {
        completion = completion.simplified();
    }
    let parts = completion.parts()?;
    let lemmas = |direction: Direction| -> Vec<Formula> {
        spec.lemmas
            .iter()
            .filter(|lemma| lemma.direction.applies_to(direction))
            .map(|lemma| lemma.formula.clone())
            .collect()
    };
    Ok(ProofObligations {
        axioms: spec.axioms.clone(),
        assumptions: spec.assumptions.clone(),
        completion_hypotheses: parts
            .private_definitions
            .into_iter()
            .map(|(_, f)| f)
            .collect(),
        public_completion: parts.public_part,
        specs: spec.specs.clone(),
        lemmas_forward: lemmas(Direction::Forward),
        lemmas_backward: lemmas(Direction::Backward),
    })
}
