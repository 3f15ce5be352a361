//! Two-sorted first-order formulas with predicate variables.
//!
//! Object-sorted variables range over precomputed terms and integer-sorted
//! variables over numerals; the integer sort is a subsort of the object sort.
//! `⊤`, `¬F` and `F ↔ G` are stored in primitive form (`⊥ → ⊥`, `F → ⊥`,
//! `(F → G) ∧ (G → F)`) and only recognized by the printer.

use std::{
    collections::{HashMap, HashSet},
    fmt,
};

use indexmap::IndexSet;

use crate::{
    error::LogicError,
    syntax::{Precomputed, PredicateSymbol, Relation},
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Object,
    Integer,
}

impl Sort {
    /// Whether a term of sort `self` may appear where `expected` is required.
    pub fn fits(self, expected: Sort) -> bool {
        self == expected || expected == Sort::Object
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Object => "object",
            Sort::Integer => "integer",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub name: String,
    pub sort: Sort,
}

impl Variable {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Self {
            name: name.into(),
            sort,
        }
    }

    pub fn object(name: impl Into<String>) -> Self {
        Self::new(name, Sort::Object)
    }

    pub fn integer(name: impl Into<String>) -> Self {
        Self::new(name, Sort::Integer)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithmeticOperator {
    Add,
    Subtract,
    Multiply,
}

impl ArithmeticOperator {
    pub fn apply(self, a: i64, b: i64) -> Option<i64> {
        match self {
            ArithmeticOperator::Add => a.checked_add(b),
            ArithmeticOperator::Subtract => a.checked_sub(b),
            ArithmeticOperator::Multiply => a.checked_mul(b),
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            ArithmeticOperator::Add => "+",
            ArithmeticOperator::Subtract => "-",
            ArithmeticOperator::Multiply => "*",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            ArithmeticOperator::Add | ArithmeticOperator::Subtract => 1,
            ArithmeticOperator::Multiply => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Constant(Precomputed),
    /// A placeholder of an io-program; interpreted by a valuation.
    Placeholder {
        name: String,
        sort: Sort,
    },
    Variable(Variable),
    Arithmetic {
        op: ArithmeticOperator,
        left: Box<Term>,
        right: Box<Term>,
    },
}

impl Term {
    pub fn numeral(n: i64) -> Self {
        Term::Constant(Precomputed::Numeral(n))
    }

    pub fn symbol(name: impl Into<String>) -> Self {
        Term::Constant(Precomputed::Symbol(name.into()))
    }

    pub fn var(variable: &Variable) -> Self {
        Term::Variable(variable.clone())
    }

    /// Builds an arithmetic term, rejecting object-sorted arguments.
    pub fn arithmetic(op: ArithmeticOperator, left: Term, right: Term) -> Result<Self, LogicError> {
        for side in [&left, &right] {
            if side.sort() != Sort::Integer {
                return Err(LogicError::SortViolation {
                    term: side.to_string(),
                });
            }
        }
        Ok(Self::arithmetic_unchecked(op, left, right))
    }

    pub(crate) fn arithmetic_unchecked(op: ArithmeticOperator, left: Term, right: Term) -> Self {
        Term::Arithmetic {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn sort(&self) -> Sort {
        match self {
            Term::Constant(Precomputed::Numeral(_)) => Sort::Integer,
            Term::Constant(_) => Sort::Object,
            Term::Placeholder { sort, .. } => *sort,
            Term::Variable(variable) => variable.sort,
            Term::Arithmetic { .. } => Sort::Integer,
        }
    }

    pub fn variables(&self, into: &mut IndexSet<Variable>) {
        match self {
            Term::Variable(variable) => {
                into.insert(variable.clone());
            }
            Term::Arithmetic { left, right, .. } => {
                left.variables(into);
                right.variables(into);
            }
            _ => {}
        }
    }

    pub fn contains_variable(&self, variable: &Variable) -> bool {
        match self {
            Term::Variable(v) => v == variable,
            Term::Arithmetic { left, right, .. } => {
                left.contains_variable(variable) || right.contains_variable(variable)
            }
            _ => false,
        }
    }

    pub fn has_arithmetic(&self) -> bool {
        matches!(self, Term::Arithmetic { .. })
    }

    fn substitute(&self, map: &HashMap<Variable, Term>) -> Term {
        match self {
            Term::Variable(variable) => map.get(variable).cloned().unwrap_or_else(|| self.clone()),
            Term::Arithmetic { op, left, right } => {
                Term::arithmetic_unchecked(*op, left.substitute(map), right.substitute(map))
            }
            _ => self.clone(),
        }
    }

    fn rename(&self, from: &Variable, to: &Variable) -> Term {
        match self {
            Term::Variable(v) if v == from => Term::Variable(to.clone()),
            Term::Arithmetic { op, left, right } => {
                Term::arithmetic_unchecked(*op, left.rename(from, to), right.rename(from, to))
            }
            _ => self.clone(),
        }
    }

    fn is_well_sorted(&self) -> bool {
        match self {
            Term::Arithmetic { left, right, .. } => {
                left.sort() == Sort::Integer
                    && right.sort() == Sort::Integer
                    && left.is_well_sorted()
                    && right.is_well_sorted()
            }
            _ => true,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, parent: u8, right_side: bool) -> fmt::Result {
        match self {
            Term::Constant(c) => write!(f, "{c}"),
            Term::Placeholder { name, .. } => f.write_str(name),
            Term::Variable(v) => write!(f, "{v}"),
            Term::Arithmetic { op, left, right } => {
                let precedence = op.precedence();
                let parens = precedence < parent || (right_side && precedence == parent);
                if parens {
                    f.write_str("(")?;
                }
                left.fmt_at(f, precedence, false)?;
                write!(f, " {} ", op.symbol())?;
                right.fmt_at(f, precedence, true)?;
                if parens {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0, false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredicateVariable {
    pub name: String,
    pub arity: usize,
}

impl PredicateVariable {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for PredicateVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Predicate {
    Symbol(PredicateSymbol),
    Variable(PredicateVariable),
}

impl Predicate {
    pub fn arity(&self) -> usize {
        match self {
            Predicate::Symbol(symbol) => symbol.arity,
            Predicate::Variable(variable) => variable.arity,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Predicate::Symbol(symbol) => &symbol.name,
            Predicate::Variable(variable) => &variable.name,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    ForAll,
    Exists,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Bottom,
    Atom {
        predicate: Predicate,
        arguments: Vec<Term>,
    },
    Compare {
        relation: Relation,
        left: Term,
        right: Term,
    },
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(Variable, Box<Formula>),
    Exists(Variable, Box<Formula>),
}

impl Formula {
    pub fn top() -> Self {
        Formula::implies(Formula::Bottom, Formula::Bottom)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Implies(a, b) if **a == Formula::Bottom && **b == Formula::Bottom)
    }

    pub fn atom(symbol: PredicateSymbol, arguments: Vec<Term>) -> Self {
        debug_assert_eq!(symbol.arity, arguments.len());
        Formula::Atom {
            predicate: Predicate::Symbol(symbol),
            arguments,
        }
    }

    pub fn compare(relation: Relation, left: Term, right: Term) -> Self {
        Formula::Compare {
            relation,
            left,
            right,
        }
    }

    pub fn equal(left: Term, right: Term) -> Self {
        Formula::compare(Relation::Equal, left, right)
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Self {
        Formula::implies(a, Formula::Bottom)
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn quantified(quantifier: Quantifier, variable: Variable, body: Formula) -> Self {
        match quantifier {
            Quantifier::ForAll => Formula::ForAll(variable, Box::new(body)),
            Quantifier::Exists => Formula::Exists(variable, Box::new(body)),
        }
    }

    /// Left-associated conjunction; the empty conjunction is `⊤`.
    pub fn conjunction(formulas: impl IntoIterator<Item = Formula>) -> Self {
        formulas
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::top)
    }

    /// Left-associated disjunction; the empty disjunction is `⊥`.
    pub fn disjunction(formulas: impl IntoIterator<Item = Formula>) -> Self {
        formulas
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bottom)
    }

    /// Prefixes `body` with one quantifier per variable; the first variable is outermost.
    pub fn quantify<'a>(
        quantifier: Quantifier,
        variables: impl IntoIterator<Item = &'a Variable>,
        body: Formula,
    ) -> Self {
        let variables: Vec<&Variable> = variables.into_iter().collect();
        variables.into_iter().rev().fold(body, |body, v| {
            Formula::quantified(quantifier, v.clone(), body)
        })
    }

    pub fn universal_closure(self) -> Self {
        let free = free_variables(&self);
        Formula::quantify(Quantifier::ForAll, free.iter(), self)
    }

    /// Splits a left- or right-nested conjunction into its conjunctive terms.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(a, b) if !is_iff_pair(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                _ => out.push(f),
            }
        }
        walk(self, &mut out);
        out
    }

    /// If the formula is `F ↔ G`, returns `(F, G)`.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(a, b) if is_iff_pair(a, b) => match &**a {
                Formula::Implies(l, r) => Some((l, r)),
                _ => None,
            },
            _ => None,
        }
    }

    /// If the formula is `¬F` (and not `⊤`), returns `F`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if **b == Formula::Bottom && **a != Formula::Bottom => Some(a),
            _ => None,
        }
    }

    pub fn predicate_symbols(&self) -> IndexSet<PredicateSymbol> {
        let mut out = IndexSet::new();
        self.visit_atoms(&mut |predicate, _| {
            if let Predicate::Symbol(symbol) = predicate {
                out.insert(symbol.clone());
            }
        });
        out
    }

    pub fn predicate_variables(&self) -> IndexSet<PredicateVariable> {
        let mut out = IndexSet::new();
        self.visit_atoms(&mut |predicate, _| {
            if let Predicate::Variable(variable) = predicate {
                out.insert(variable.clone());
            }
        });
        out
    }

    /// Constants and placeholders occurring in the formula.
    pub fn constants(&self) -> IndexSet<Term> {
        fn from_term(term: &Term, out: &mut IndexSet<Term>) {
            match term {
                Term::Constant(_) | Term::Placeholder { .. } => {
                    out.insert(term.clone());
                }
                Term::Arithmetic { left, right, .. } => {
                    from_term(left, out);
                    from_term(right, out);
                }
                Term::Variable(_) => {}
            }
        }
        let mut out = IndexSet::new();
        self.visit_terms(&mut |term| from_term(term, &mut out));
        out
    }

    pub fn visit_atoms(&self, visit: &mut dyn FnMut(&Predicate, &[Term])) {
        match self {
            Formula::Atom {
                predicate,
                arguments,
            } => visit(predicate, arguments),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit_atoms(visit);
                b.visit_atoms(visit);
            }
            Formula::ForAll(_, body) | Formula::Exists(_, body) => body.visit_atoms(visit),
            Formula::Bottom | Formula::Compare { .. } => {}
        }
    }

    pub fn visit_terms(&self, visit: &mut dyn FnMut(&Term)) {
        match self {
            Formula::Atom { arguments, .. } => arguments.iter().for_each(|t| visit(t)),
            Formula::Compare { left, right, .. } => {
                visit(left);
                visit(right);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit_terms(visit);
                b.visit_terms(visit);
            }
            Formula::ForAll(_, body) | Formula::Exists(_, body) => body.visit_terms(visit),
            Formula::Bottom => {}
        }
    }

    /// All variable names occurring in the formula, bound or free.
    pub fn variable_names(&self) -> HashSet<String> {
        let mut names = HashSet::new();
        self.collect_variable_names(&mut names);
        names
    }

    fn collect_variable_names(&self, names: &mut HashSet<String>) {
        match self {
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                names.insert(v.name.clone());
                body.collect_variable_names(names);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_variable_names(names);
                b.collect_variable_names(names);
            }
            _ => {
                let mut vars = IndexSet::new();
                self.visit_terms(&mut |t| t.variables(&mut vars));
                names.extend(vars.into_iter().map(|v| v.name));
            }
        }
    }

    /// Checks the sort discipline: arithmetic arguments are integer-sorted.
    pub fn is_well_sorted(&self) -> bool {
        let mut ok = true;
        self.visit_terms(&mut |t| ok &= t.is_well_sorted());
        ok
    }

    pub fn map_atoms(&self, f: &mut dyn FnMut(&Predicate, &[Term]) -> Formula) -> Formula {
        match self {
            Formula::Atom {
                predicate,
                arguments,
            } => f(predicate, arguments),
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::ForAll(v, body) => Formula::ForAll(v.clone(), Box::new(body.map_atoms(f))),
            Formula::Exists(v, body) => Formula::Exists(v.clone(), Box::new(body.map_atoms(f))),
            Formula::Bottom | Formula::Compare { .. } => self.clone(),
        }
    }

    /// Renames every occurrence of placeholder-free symbolic constants to placeholders.
    pub fn with_placeholders(&self, placeholders: &HashMap<String, Sort>) -> Formula {
        fn term(t: &Term, placeholders: &HashMap<String, Sort>) -> Term {
            match t {
                Term::Constant(Precomputed::Symbol(name)) => match placeholders.get(name) {
                    Some(sort) => Term::Placeholder {
                        name: name.clone(),
                        sort: *sort,
                    },
                    None => t.clone(),
                },
                Term::Arithmetic { op, left, right } => Term::arithmetic_unchecked(
                    *op,
                    term(left, placeholders),
                    term(right, placeholders),
                ),
                _ => t.clone(),
            }
        }
        self.map_terms(&|t| term(t, placeholders))
    }

    pub fn map_terms(&self, f: &dyn Fn(&Term) -> Term) -> Formula {
        match self {
            Formula::Atom {
                predicate,
                arguments,
            } => Formula::Atom {
                predicate: predicate.clone(),
                arguments: arguments.iter().map(f).collect(),
            },
            Formula::Compare {
                relation,
                left,
                right,
            } => Formula::compare(*relation, f(left), f(right)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_terms(f), b.map_terms(f)),
            Formula::ForAll(v, body) => Formula::ForAll(v.clone(), Box::new(body.map_terms(f))),
            Formula::Exists(v, body) => Formula::Exists(v.clone(), Box::new(body.map_terms(f))),
            Formula::Bottom => Formula::Bottom,
        }
    }
}

fn is_iff_pair(a: &Formula, b: &Formula) -> bool {
    match (a, b) {
        (Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => a1 == b2 && a2 == b1,
        _ => false,
    }
}

/// A second-order sentence `∃P1…Pl F` or `∀P1…Pl F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondOrderSentence {
    pub quantifier: Quantifier,
    pub predicate_variables: Vec<PredicateVariable>,
    pub matrix: Formula,
}

impl fmt::Display for SecondOrderSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.predicate_variables.is_empty() {
            return write!(f, "{}", self.matrix);
        }
        let keyword = match self.quantifier {
            Quantifier::ForAll => "forall",
            Quantifier::Exists => "exists",
        };
        let names: Vec<&str> = self
            .predicate_variables
            .iter()
            .map(|p| p.name.as_str())
            .collect();
        write!(f, "{keyword} {} ({})", names.join(", "), self.matrix)
    }
}

/// Free variables in order of first occurrence.
pub fn free_variables(formula: &Formula) -> IndexSet<Variable> {
    let mut out = IndexSet::new();
    collect_free(formula, &mut Vec::new(), &mut out);
    out
}

fn collect_free(formula: &Formula, bound: &mut Vec<Variable>, out: &mut IndexSet<Variable>) {
    match formula {
        Formula::Bottom => {}
        Formula::Atom { arguments, .. } => {
            for argument in arguments {
                add_free_in_term(argument, bound, out);
            }
        }
        Formula::Compare { left, right, .. } => {
            add_free_in_term(left, bound, out);
            add_free_in_term(right, bound, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            bound.push(v.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
    }
}

fn add_free_in_term(term: &Term, bound: &[Variable], out: &mut IndexSet<Variable>) {
    let mut vars = IndexSet::new();
    term.variables(&mut vars);
    for v in vars {
        if !bound.contains(&v) {
            out.insert(v);
        }
    }
}

pub fn occurs_free(variable: &Variable, formula: &Formula) -> bool {
    match formula {
        Formula::Bottom => false,
        Formula::Atom { arguments, .. } => arguments.iter().any(|t| t.contains_variable(variable)),
        Formula::Compare { left, right, .. } => {
            left.contains_variable(variable) || right.contains_variable(variable)
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            occurs_free(variable, a) || occurs_free(variable, b)
        }
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            v != variable && occurs_free(variable, body)
        }
    }
}

/// Returns a name starting with `prefix` that is not in `used`, and records it.
pub(crate) fn fresh_name(prefix: &str, used: &mut HashSet<String>) -> String {
    if used.insert(prefix.to_string()) {
        return prefix.to_string();
    }
    let mut index = 1;
    loop {
        let candidate = format!("{prefix}{index}");
        if used.insert(candidate.clone()) {
            return candidate;
        }
        index += 1;
    }
}

fn name_prefix(name: &str) -> &str {
    name.trim_end_matches(|c: char| c.is_ascii_digit())
}

/// Capture-avoiding substitution of terms for free variables.
///
/// Integer-sorted variables only accept integer-sorted terms.
pub fn substitute(formula: &Formula, map: &HashMap<Variable, Term>) -> Result<Formula, LogicError> {
    for (variable, term) in map {
        if !term.sort().fits(variable.sort) {
            return Err(LogicError::SortViolation {
                term: term.to_string(),
            });
        }
    }
    let mut used = formula.variable_names();
    for term in map.values() {
        let mut vars = IndexSet::new();
        term.variables(&mut vars);
        used.extend(vars.into_iter().map(|v| v.name));
    }
    Ok(substitute_unchecked(formula, map, &mut used))
}

fn substitute_unchecked(
    formula: &Formula,
    map: &HashMap<Variable, Term>,
    used: &mut HashSet<String>,
) -> Formula {
    if map.is_empty() {
        return formula.clone();
    }
    match formula {
        Formula::Bottom => Formula::Bottom,
        Formula::Atom {
            predicate,
            arguments,
        } => Formula::Atom {
            predicate: predicate.clone(),
            arguments: arguments.iter().map(|t| t.substitute(map)).collect(),
        },
        Formula::Compare {
            relation,
            left,
            right,
        } => Formula::compare(*relation, left.substitute(map), right.substitute(map)),
        Formula::And(a, b) => Formula::and(
            substitute_unchecked(a, map, used),
            substitute_unchecked(b, map, used),
        ),
        Formula::Or(a, b) => Formula::or(
            substitute_unchecked(a, map, used),
            substitute_unchecked(b, map, used),
        ),
        Formula::Implies(a, b) => Formula::implies(
            substitute_unchecked(a, map, used),
            substitute_unchecked(b, map, used),
        ),
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            let quantifier = match formula {
                Formula::ForAll(..) => Quantifier::ForAll,
                _ => Quantifier::Exists,
            };
            let mut inner: HashMap<Variable, Term> = map
                .iter()
                .filter(|(k, _)| *k != v && occurs_free(k, body))
                .map(|(k, t)| (k.clone(), t.clone()))
                .collect();
            let captures = inner.values().any(|t| t.contains_variable(v));
            if captures {
                let renamed = Variable::new(fresh_name(name_prefix(&v.name), used), v.sort);
                inner.insert(v.clone(), Term::Variable(renamed.clone()));
                let body = substitute_unchecked(body, &inner, used);
                Formula::quantified(quantifier, renamed, body)
            } else {
                let body = substitute_unchecked(body, &inner, used);
                Formula::quantified(quantifier, v.clone(), body)
            }
        }
    }
}

/// Renames a bound variable throughout `formula` (which must not bind `to`).
pub(crate) fn rename_free(formula: &Formula, from: &Variable, to: &Variable) -> Formula {
    match formula {
        Formula::Bottom => Formula::Bottom,
        Formula::Atom {
            predicate,
            arguments,
        } => Formula::Atom {
            predicate: predicate.clone(),
            arguments: arguments.iter().map(|t| t.rename(from, to)).collect(),
        },
        Formula::Compare {
            relation,
            left,
            right,
        } => Formula::compare(*relation, left.rename(from, to), right.rename(from, to)),
        Formula::And(a, b) => Formula::and(rename_free(a, from, to), rename_free(b, from, to)),
        Formula::Or(a, b) => Formula::or(rename_free(a, from, to), rename_free(b, from, to)),
        Formula::Implies(a, b) => {
            Formula::implies(rename_free(a, from, to), rename_free(b, from, to))
        }
        Formula::ForAll(v, _) | Formula::Exists(v, _) if v == from => formula.clone(),
        Formula::ForAll(v, body) => {
            Formula::ForAll(v.clone(), Box::new(rename_free(body, from, to)))
        }
        Formula::Exists(v, body) => {
            Formula::Exists(v.clone(), Box::new(rename_free(body, from, to)))
        }
    }
}

/// Replaces predicate symbols by predicates of the same arity.
pub fn substitute_predicates(
    formula: &Formula,
    map: &HashMap<PredicateSymbol, Predicate>,
) -> Result<Formula, LogicError> {
    for (symbol, target) in map {
        if symbol.arity != target.arity() {
            return Err(LogicError::ArityMismatch {
                symbol: symbol.clone(),
                target: target.name().to_string(),
                arity: target.arity(),
            });
        }
    }
    Ok(formula.map_atoms(&mut |predicate, arguments| {
        let predicate = match predicate {
            Predicate::Symbol(symbol) => map
                .get(symbol)
                .cloned()
                .unwrap_or_else(|| predicate.clone()),
            Predicate::Variable(_) => predicate.clone(),
        };
        Formula::Atom {
            predicate,
            arguments: arguments.to_vec(),
        }
    }))
}

/// Equality up to renaming of bound variables.
pub fn alpha_equivalent(f: &Formula, g: &Formula) -> bool {
    AlphaComparison {
        ignore_sorts: false,
    }
    .formulas(f, g, &mut Vec::new())
}

/// Like [`alpha_equivalent`], but bound variables may be renamed across sorts.
///
/// Useful for comparing against listings that choose variable names (and
/// hence, by the naming convention, sorts) for display purposes.
pub fn alpha_equivalent_ignoring_sorts(f: &Formula, g: &Formula) -> bool {
    AlphaComparison { ignore_sorts: true }.formulas(f, g, &mut Vec::new())
}

/// Alpha-equivalence of second-order sentences; predicate variables are
/// matched positionally.
pub fn alpha_equivalent_sentences(a: &SecondOrderSentence, b: &SecondOrderSentence) -> bool {
    if a.quantifier != b.quantifier
        || a.predicate_variables.len() != b.predicate_variables.len()
        || a.predicate_variables
            .iter()
            .zip(&b.predicate_variables)
            .any(|(x, y)| x.arity != y.arity)
    {
        return false;
    }
    let renaming: HashMap<PredicateSymbol, Predicate> = HashMap::new();
    let _ = renaming;
    let rename = |matrix: &Formula, variables: &[PredicateVariable]| {
        matrix.map_atoms(&mut |predicate, arguments| {
            let predicate = match predicate {
                Predicate::Variable(v) => match variables.iter().position(|x| x == v) {
                    Some(i) => {
                        Predicate::Variable(PredicateVariable::new(format!("#{i}"), v.arity))
                    }
                    None => predicate.clone(),
                },
                _ => predicate.clone(),
            };
            Formula::Atom {
                predicate,
                arguments: arguments.to_vec(),
            }
        })
    };
    alpha_equivalent(
        &rename(&a.matrix, &a.predicate_variables),
        &rename(&b.matrix, &b.predicate_variables),
    )
}

struct AlphaComparison {
    ignore_sorts: bool,
}

impl AlphaComparison {
    fn variables(&self, a: &Variable, b: &Variable, bound: &[(Variable, Variable)]) -> bool {
        for (x, y) in bound.iter().rev() {
            let left = x == a;
            let right = y == b;
            if left || right {
                return left && right;
            }
        }
        if self.ignore_sorts {
            a.name == b.name
        } else {
            a == b
        }
    }

    fn terms(&self, a: &Term, b: &Term, bound: &[(Variable, Variable)]) -> bool {
        match (a, b) {
            (Term::Variable(x), Term::Variable(y)) => self.variables(x, y, bound),
            (
                Term::Arithmetic {
                    op: o1,
                    left: l1,
                    right: r1,
                },
                Term::Arithmetic {
                    op: o2,
                    left: l2,
                    right: r2,
                },
            ) => o1 == o2 && self.terms(l1, l2, bound) && self.terms(r1, r2, bound),
            (
                Term::Placeholder { name: n1, sort: s1 },
                Term::Placeholder { name: n2, sort: s2 },
            ) => n1 == n2 && (self.ignore_sorts || s1 == s2),
            _ => a == b,
        }
    }

    fn formulas(&self, f: &Formula, g: &Formula, bound: &mut Vec<(Variable, Variable)>) -> bool {
        match (f, g) {
            (Formula::Bottom, Formula::Bottom) => true,
            (
                Formula::Atom {
                    predicate: p1,
                    arguments: a1,
                },
                Formula::Atom {
                    predicate: p2,
                    arguments: a2,
                },
            ) => {
                p1 == p2
                    && a1.len() == a2.len()
                    && a1.iter().zip(a2).all(|(x, y)| self.terms(x, y, bound))
            }
            (
                Formula::Compare {
                    relation: r1,
                    left: l1,
                    right: x1,
                },
                Formula::Compare {
                    relation: r2,
                    left: l2,
                    right: x2,
                },
            ) => r1 == r2 && self.terms(l1, l2, bound) && self.terms(x1, x2, bound),
            (Formula::And(a1, b1), Formula::And(a2, b2))
            | (Formula::Or(a1, b1), Formula::Or(a2, b2))
            | (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
                self.formulas(a1, a2, bound) && self.formulas(b1, b2, bound)
            }
            (Formula::ForAll(v1, b1), Formula::ForAll(v2, b2))
            | (Formula::Exists(v1, b1), Formula::Exists(v2, b2)) => {
                if !self.ignore_sorts && v1.sort != v2.sort {
                    return false;
                }
                bound.push((v1.clone(), v2.clone()));
                let result = self.formulas(b1, b2, bound);
                bound.pop();
                result
            }
            _ => false,
        }
    }
}

// Printing with the surface syntax `not`, `and`, `or`, `->`, `<->`, `exists`, `forall`.

const LEVEL_IFF: u8 = 0;
const LEVEL_IMPLIES: u8 = 1;
const LEVEL_OR: u8 = 2;
const LEVEL_AND: u8 = 3;
const LEVEL_UNARY: u8 = 4;

fn level(formula: &Formula) -> u8 {
    if formula.as_iff().is_some() {
        return LEVEL_IFF;
    }
    match formula {
        Formula::Implies(..) if formula.is_top() || formula.as_negation().is_some() => LEVEL_UNARY,
        Formula::Implies(..) => LEVEL_IMPLIES,
        Formula::Or(..) => LEVEL_OR,
        Formula::And(..) => LEVEL_AND,
        _ => LEVEL_UNARY,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, formula: &Formula, minimum: u8) -> fmt::Result {
    if level(formula) < minimum {
        f.write_str("(")?;
        write_formula(f, formula)?;
        f.write_str(")")
    } else {
        write_formula(f, formula)
    }
}

fn write_formula(f: &mut fmt::Formatter<'_>, formula: &Formula) -> fmt::Result {
    if formula.is_top() {
        return f.write_str("#true");
    }
    if let Some((a, b)) = formula.as_iff() {
        write_at(f, a, LEVEL_IMPLIES)?;
        f.write_str(" <-> ")?;
        return write_at(f, b, LEVEL_IMPLIES);
    }
    if let Some(a) = formula.as_negation() {
        f.write_str("not ")?;
        return write_at(f, a, LEVEL_UNARY);
    }
    match formula {
        Formula::Bottom => f.write_str("#false"),
        Formula::Atom {
            predicate,
            arguments,
        } => {
            f.write_str(predicate.name())?;
            if !arguments.is_empty() {
                f.write_str("(")?;
                for (i, a) in arguments.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")?;
            }
            Ok(())
        }
        Formula::Compare {
            relation,
            left,
            right,
        } => write!(f, "{left} {relation} {right}"),
        Formula::And(a, b) => {
            write_at(f, a, LEVEL_AND)?;
            f.write_str(" and ")?;
            write_at(f, b, LEVEL_UNARY)
        }
        Formula::Or(a, b) => {
            write_at(f, a, LEVEL_OR)?;
            f.write_str(" or ")?;
            write_at(f, b, LEVEL_AND)
        }
        Formula::Implies(a, b) => {
            write_at(f, a, LEVEL_OR)?;
            f.write_str(" -> ")?;
            write_at(f, b, LEVEL_IMPLIES)
        }
        Formula::ForAll(..) | Formula::Exists(..) => {
            let (keyword, is_same): (&str, fn(&Formula) -> bool) = match formula {
                Formula::ForAll(..) => ("forall", |f| matches!(f, Formula::ForAll(..))),
                _ => ("exists", |f| matches!(f, Formula::Exists(..))),
            };
            f.write_str(keyword)?;
            let mut current = formula;
            let mut first = true;
            while is_same(current) {
                let (Formula::ForAll(v, body) | Formula::Exists(v, body)) = current else {
                    unreachable!()
                };
                f.write_str(if first { " " } else { ", " })?;
                write!(f, "{v}")?;
                first = false;
                current = body;
            }
            f.write_str(" ")?;
            let atomic = matches!(current, Formula::Atom { .. } | Formula::Bottom)
                || current.is_top()
                || current.as_negation().is_some();
            if atomic {
                write_formula(f, current)
            } else {
                f.write_str("(")?;
                write_formula(f, current)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Variable {
        Variable::object("X")
    }

    fn z() -> Variable {
        Variable::object("Z")
    }

    fn p(t: Term) -> Formula {
        Formula::atom(PredicateSymbol::new("p", 1), vec![t])
    }

    fn q(t: Term) -> Formula {
        Formula::atom(PredicateSymbol::new("q", 1), vec![t])
    }

    #[test]
    fn free_variables_respect_binding() {
        let closed = Formula::ForAll(z(), Box::new(p(Term::var(&z()))));
        assert!(free_variables(&closed).is_empty());

        let y = Variable::object("Y");
        let f = Formula::and(
            p(Term::var(&x())),
            Formula::Exists(y.clone(), Box::new(q(Term::var(&y)))),
        );
        assert_eq!(
            free_variables(&f).into_iter().collect::<Vec<_>>(),
            vec![x()]
        );

        let i = Variable::integer("I");
        let c = Formula::compare(Relation::Less, Term::var(&i), Term::symbol("n"));
        assert_eq!(free_variables(&c).into_iter().collect::<Vec<_>>(), vec![i]);
    }

    #[test]
    fn substitution_replaces_free_occurrences() {
        let f = Formula::equal(Term::var(&z()), Term::var(&x()));
        let map = HashMap::from([(x(), Term::numeral(1))]);
        assert_eq!(
            substitute(&f, &map).unwrap(),
            Formula::equal(Term::var(&z()), Term::numeral(1))
        );
    }

    #[test]
    fn substitution_avoids_capture() {
        let f = Formula::Exists(
            z(),
            Box::new(Formula::equal(Term::var(&z()), Term::var(&x()))),
        );
        let map = HashMap::from([(x(), Term::var(&z()))]);
        let result = substitute(&f, &map).unwrap();
        let Formula::Exists(bound, body) = &result else {
            panic!("expected an existential, got {result}")
        };
        assert_ne!(bound, &z());
        assert_eq!(**body, Formula::equal(Term::var(bound), Term::var(&z())));
    }

    #[test]
    fn substitution_checks_sorts() {
        let i = Variable::integer("I");
        let f = p(Term::var(&i));
        let map = HashMap::from([(i, Term::symbol("a"))]);
        assert!(matches!(
            substitute(&f, &map),
            Err(LogicError::SortViolation { .. })
        ));
    }

    #[test]
    fn empty_substitution_is_identity() {
        let f = Formula::ForAll(
            x(),
            Box::new(Formula::implies(p(Term::var(&x())), q(Term::var(&x())))),
        );
        assert_eq!(substitute(&f, &HashMap::new()).unwrap(), f);
    }

    #[test]
    fn predicate_substitution() {
        let covered = PredicateSymbol::new("covered", 1);
        let f = Formula::atom(covered.clone(), vec![Term::var(&x())]);
        let target = Predicate::Variable(PredicateVariable::new("Covered", 1));
        let map = HashMap::from([(covered.clone(), target.clone())]);
        assert_eq!(
            substitute_predicates(&f, &map).unwrap(),
            Formula::Atom {
                predicate: target,
                arguments: vec![Term::var(&x())]
            }
        );
        assert_eq!(substitute_predicates(&f, &HashMap::new()).unwrap(), f);

        let wrong = HashMap::from([(
            PredicateSymbol::new("p", 2),
            Predicate::Variable(PredicateVariable::new("P", 1)),
        )]);
        assert!(matches!(
            substitute_predicates(&f, &wrong),
            Err(LogicError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn alpha_equivalence() {
        let y = Variable::object("Y");
        let a = Formula::ForAll(z(), Box::new(p(Term::var(&z()))));
        let b = Formula::ForAll(y.clone(), Box::new(p(Term::var(&y))));
        let c = Formula::Exists(z(), Box::new(p(Term::var(&z()))));
        assert!(alpha_equivalent(&a, &b));
        assert!(!alpha_equivalent(&a, &c));
        // a free variable does not match a bound one
        let free = Formula::ForAll(y.clone(), Box::new(p(Term::var(&x()))));
        assert!(!alpha_equivalent(&free, &b));
        // sorts matter unless ignored
        let n = Variable::integer("N");
        let d = Formula::ForAll(n.clone(), Box::new(p(Term::var(&n))));
        assert!(!alpha_equivalent(&a, &d));
        assert!(alpha_equivalent_ignoring_sorts(&a, &d));
    }

    #[test]
    fn printer_recognizes_abbreviations() {
        let f = Formula::ForAll(
            x(),
            Box::new(Formula::iff(
                p(Term::var(&x())),
                Formula::and(Formula::top(), Formula::not(q(Term::var(&x())))),
            )),
        );
        assert_eq!(f.to_string(), "forall X (p(X) <-> #true and not q(X))");
        let nested = Formula::implies(
            Formula::implies(p(Term::numeral(1)), Formula::Bottom),
            q(Term::numeral(2)),
        );
        assert_eq!(nested.to_string(), "not p(1) -> q(2)");
        let right = Formula::implies(
            p(Term::numeral(1)),
            Formula::implies(q(Term::numeral(2)), Formula::Bottom),
        );
        assert_eq!(right.to_string(), "p(1) -> not q(2)");
        let left = Formula::implies(
            Formula::implies(p(Term::numeral(1)), q(Term::numeral(1))),
            q(Term::numeral(2)),
        );
        assert_eq!(left.to_string(), "(p(1) -> q(1)) -> q(2)");
    }

    #[test]
    fn printer_merges_quantifier_blocks() {
        let n1 = Variable::integer("N1");
        let n2 = Variable::integer("N2");
        let f = Formula::quantify(
            Quantifier::ForAll,
            [&n1, &n2, &x()],
            Formula::not(Formula::compare(
                Relation::NotEqual,
                Term::var(&n1),
                Term::var(&n2),
            )),
        );
        assert_eq!(f.to_string(), "forall N1, N2, X not N1 != N2");
    }

    #[test]
    fn arithmetic_requires_integer_arguments() {
        assert!(
            Term::arithmetic(ArithmeticOperator::Add, Term::var(&x()), Term::numeral(1)).is_err()
        );
        let i = Variable::integer("I");
        let t = Term::arithmetic(
            ArithmeticOperator::Multiply,
            Term::arithmetic(ArithmeticOperator::Add, Term::var(&i), Term::numeral(1)).unwrap(),
            Term::var(&i),
        )
        .unwrap();
        assert_eq!(t.to_string(), "(I + 1) * I");
        assert_eq!(t.sort(), Sort::Integer);
    }
}
