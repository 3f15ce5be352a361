//! Proof tasks in the typed first-order (TFF) segment of the TPTP language.
//!
//! Objects form the sort `object`; integers use the built-in sort `$int` and
//! are embedded into `object` by the injective, order-preserving function
//! `f__integer__`. The order on objects is the predicate `p__less__`.

use std::collections::HashMap;
use std::fmt::Write as _;

use indexmap::{IndexMap, IndexSet};

use crate::{
    error::TptpError,
    logic::{
        free_variables, ArithmeticOperator, Formula, Predicate, Quantifier, Sort, Term, Variable,
    },
    syntax::{Precomputed, PredicateSymbol, Relation},
};

pub const OBJECT_SORT: &str = "object";
pub const EMBEDDING: &str = "f__integer__";
pub const OBJECT_LESS: &str = "p__less__";
const INFIMUM: &str = "c__infimum__";
const SUPREMUM: &str = "c__supremum__";

/// Axioms and exactly one conjecture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTask {
    pub name: String,
    pub axioms: Vec<(String, Formula)>,
    pub conjecture: (String, Formula),
}

/// Symbols occurring in a set of formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub predicates: IndexSet<PredicateSymbol>,
    /// Symbolic constants that are not placeholders, together with `#inf` and `#sup`.
    pub constants: IndexSet<Precomputed>,
    pub placeholders: IndexMap<String, Sort>,
}

impl Signature {
    pub fn of<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut signature = Signature::default();
        for formula in formulas {
            signature.predicates.extend(formula.predicate_symbols());
            for term in formula.constants() {
                match term {
                    Term::Constant(Precomputed::Numeral(_)) => {}
                    Term::Constant(c) => {
                        signature.constants.insert(c);
                    }
                    Term::Placeholder { name, sort } => {
                        signature.placeholders.insert(name, sort);
                    }
                    _ => {}
                }
            }
        }
        signature
    }
}

fn var(name: &str, sort: Sort) -> Variable {
    Variable::new(name, sort)
}

fn v(variable: &Variable) -> Term {
    Term::var(variable)
}

fn less(a: Term, b: Term) -> Formula {
    Formula::compare(Relation::Less, a, b)
}

fn forall(variables: &[&Variable], body: Formula) -> Formula {
    Formula::quantify(Quantifier::ForAll, variables.iter().copied(), body)
}

/// Axioms true in every standard interpretation that fix the behavior of the
/// integer embedding and the order on objects for the symbols in `signature`.
///
/// Integer variables compared with object variables denote the embedded
/// integers, so these axioms are ordinary two-sorted formulas.
pub fn standard_axioms(signature: &Signature) -> Vec<Formula> {
    let (n1, n2) = (var("N1", Sort::Integer), var("N2", Sort::Integer));
    let (x, y, z) = (
        var("X", Sort::Object),
        var("Y", Sort::Object),
        var("Z", Sort::Object),
    );
    let mut axioms = vec![
        // the embedding is injective
        forall(
            &[&n1, &n2, &x],
            Formula::implies(
                Formula::and(Formula::equal(v(&x), v(&n1)), Formula::equal(v(&x), v(&n2))),
                Formula::equal(v(&n1), v(&n2)),
            ),
        ),
        // and strictly monotone
        forall(
            &[&n1, &n2, &x, &y],
            Formula::implies(
                Formula::and(Formula::equal(v(&x), v(&n1)), Formula::equal(v(&y), v(&n2))),
                Formula::iff(less(v(&n1), v(&n2)), less(v(&x), v(&y))),
            ),
        ),
        // the order on objects is a strict total order
        forall(&[&x], Formula::not(less(v(&x), v(&x)))),
        forall(
            &[&x, &y, &z],
            Formula::implies(
                Formula::and(less(v(&x), v(&y)), less(v(&y), v(&z))),
                less(v(&x), v(&z)),
            ),
        ),
        forall(
            &[&x, &y],
            Formula::disjunction([
                less(v(&x), v(&y)),
                Formula::equal(v(&x), v(&y)),
                less(v(&y), v(&x)),
            ]),
        ),
    ];
    let mut symbols: Vec<&String> = signature
        .constants
        .iter()
        .filter_map(|c| match c {
            Precomputed::Symbol(s) if !signature.placeholders.contains_key(s) => Some(s),
            _ => None,
        })
        .collect();
    symbols.sort();
    for symbol in &symbols {
        // numerals precede symbolic constants
        axioms.push(forall(
            &[&n1, &x],
            Formula::implies(
                Formula::equal(v(&x), v(&n1)),
                less(v(&x), Term::symbol(symbol.as_str())),
            ),
        ));
    }
    for pair in symbols.windows(2) {
        axioms.push(less(
            Term::symbol(pair[0].as_str()),
            Term::symbol(pair[1].as_str()),
        ));
    }
    for (i, a) in symbols.iter().enumerate() {
        for b in &symbols[i + 1..] {
            axioms.push(Formula::not(Formula::equal(
                Term::symbol(a.as_str()),
                Term::symbol(b.as_str()),
            )));
        }
    }
    if signature.constants.contains(&Precomputed::Infimum) {
        let inf = Term::Constant(Precomputed::Infimum);
        axioms.push(forall(
            &[&x],
            Formula::or(Formula::equal(v(&x), inf.clone()), less(inf, v(&x))),
        ));
    }
    if signature.constants.contains(&Precomputed::Supremum) {
        let sup = Term::Constant(Precomputed::Supremum);
        axioms.push(forall(
            &[&x],
            Formula::or(Formula::equal(v(&x), sup.clone()), less(v(&x), sup)),
        ));
    }
    axioms
}

/// Names of predicates and constants in the emitted text.
struct Names {
    predicates: HashMap<PredicateSymbol, String>,
}

impl Names {
    fn new(signature: &Signature) -> Self {
        let mut by_name: HashMap<&str, usize> = HashMap::new();
        for p in &signature.predicates {
            *by_name.entry(p.name.as_str()).or_default() += 1;
        }
        let constant_names: IndexSet<&str> = signature
            .constants
            .iter()
            .filter_map(|c| match c {
                Precomputed::Symbol(s) => Some(s.as_str()),
                _ => None,
            })
            .chain(signature.placeholders.keys().map(String::as_str))
            .collect();
        let predicates = signature
            .predicates
            .iter()
            .map(|p| {
                let clash = by_name[p.name.as_str()] > 1
                    || constant_names.contains(p.name.as_str())
                    || [EMBEDDING, OBJECT_LESS].contains(&p.name.as_str());
                let name = if clash {
                    format!("{}__{}", p.name, p.arity)
                } else {
                    p.name.clone()
                };
                (p.clone(), name)
            })
            .collect();
        Self { predicates }
    }
}

struct Emitter<'a> {
    names: &'a Names,
}

impl Emitter<'_> {
    fn integer_term(&self, term: &Term, out: &mut String) {
        match term {
            Term::Constant(Precomputed::Numeral(n)) => {
                let _ = write!(out, "{n}");
            }
            Term::Placeholder { name, .. } => out.push_str(name),
            Term::Variable(variable) => out.push_str(&variable.name),
            Term::Arithmetic { op, left, right } => {
                out.push_str(match op {
                    ArithmeticOperator::Add => "$sum(",
                    ArithmeticOperator::Subtract => "$difference(",
                    ArithmeticOperator::Multiply => "$product(",
                });
                self.integer_term(left, out);
                out.push(',');
                self.integer_term(right, out);
                out.push(')');
            }
            Term::Constant(_) => unreachable!("object constants are not integer terms"),
        }
    }

    fn object_term(&self, term: &Term, out: &mut String) {
        if term.sort() == Sort::Integer {
            out.push_str(EMBEDDING);
            out.push('(');
            self.integer_term(term, out);
            out.push(')');
            return;
        }
        match term {
            Term::Constant(Precomputed::Symbol(s)) => out.push_str(s),
            Term::Constant(Precomputed::Infimum) => out.push_str(INFIMUM),
            Term::Constant(Precomputed::Supremum) => out.push_str(SUPREMUM),
            Term::Placeholder { name, .. } => out.push_str(name),
            Term::Variable(variable) => out.push_str(&variable.name),
            _ => unreachable!("integer terms are embedded above"),
        }
    }

    fn comparison(&self, relation: Relation, left: &Term, right: &Term, out: &mut String) {
        if left.sort() == Sort::Integer && right.sort() == Sort::Integer {
            let binary = |out: &mut String, name: &str, a: &Term, b: &Term| {
                out.push_str(name);
                out.push('(');
                self.integer_term(a, out);
                out.push(',');
                self.integer_term(b, out);
                out.push(')');
            };
            match relation {
                Relation::Equal | Relation::NotEqual => {
                    out.push('(');
                    self.integer_term(left, out);
                    out.push_str(if relation == Relation::Equal {
                        " = "
                    } else {
                        " != "
                    });
                    self.integer_term(right, out);
                    out.push(')');
                }
                Relation::Less => binary(out, "$less", left, right),
                Relation::LessEqual => binary(out, "$lesseq", left, right),
                Relation::Greater => binary(out, "$greater", left, right),
                Relation::GreaterEqual => binary(out, "$greatereq", left, right),
            }
            return;
        }
        let object_less = |out: &mut String, a: &Term, b: &Term| {
            out.push_str(OBJECT_LESS);
            out.push('(');
            self.object_term(a, out);
            out.push(',');
            self.object_term(b, out);
            out.push(')');
        };
        let equal = |out: &mut String, op: &str| {
            out.push('(');
            self.object_term(left, out);
            out.push_str(op);
            self.object_term(right, out);
            out.push(')');
        };
        match relation {
            Relation::Equal => equal(out, " = "),
            Relation::NotEqual => equal(out, " != "),
            Relation::Less => object_less(out, left, right),
            Relation::Greater => object_less(out, right, left),
            Relation::LessEqual | Relation::GreaterEqual => {
                let (a, b) = if relation == Relation::LessEqual {
                    (left, right)
                } else {
                    (right, left)
                };
                out.push('(');
                object_less(out, a, b);
                out.push_str(" | ");
                equal(out, " = ");
                out.push(')');
            }
        }
    }

    fn formula(&self, formula: &Formula, out: &mut String) {
        if formula.is_top() {
            out.push_str("$true");
            return;
        }
        if let Some(inner) = formula.as_negation() {
            out.push('~');
            self.parenthesized(inner, out);
            return;
        }
        match formula {
            Formula::Bottom => out.push_str("$false"),
            Formula::Atom {
                predicate,
                arguments,
            } => {
                let Predicate::Symbol(symbol) = predicate else {
                    unreachable!("predicate variables are rejected before emission");
                };
                out.push_str(&self.names.predicates[symbol]);
                if !arguments.is_empty() {
                    out.push('(');
                    for (i, argument) in arguments.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        self.object_term(argument, out);
                    }
                    out.push(')');
                }
            }
            Formula::Compare {
                relation,
                left,
                right,
            } => self.comparison(*relation, left, right, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let op = match formula {
                    Formula::And(..) => " & ",
                    Formula::Or(..) => " | ",
                    _ => " => ",
                };
                out.push('(');
                self.formula(a, out);
                out.push_str(op);
                self.formula(b, out);
                out.push(')');
            }
            Formula::ForAll(..) | Formula::Exists(..) => {
                let (quantifier, symbol) = match formula {
                    Formula::ForAll(..) => (Quantifier::ForAll, "!"),
                    _ => (Quantifier::Exists, "?"),
                };
                let mut variables = Vec::new();
                let mut body = formula;
                loop {
                    match (quantifier, body) {
                        (Quantifier::ForAll, Formula::ForAll(v, inner))
                        | (Quantifier::Exists, Formula::Exists(v, inner)) => {
                            variables.push(v);
                            body = inner;
                        }
                        _ => break,
                    }
                }
                let declared: Vec<String> = variables
                    .iter()
                    .map(|v| {
                        let sort = match v.sort {
                            Sort::Object => OBJECT_SORT,
                            Sort::Integer => "$int",
                        };
                        format!("{}: {sort}", v.name)
                    })
                    .collect();
                let _ = write!(out, "{symbol}[{}]: ", declared.join(", "));
                self.parenthesized(body, out);
            }
        }
    }

    fn parenthesized(&self, formula: &Formula, out: &mut String) {
        let wrap = matches!(formula, Formula::ForAll(..) | Formula::Exists(..))
            || (!formula.is_top() && formula.as_negation().is_some());
        if wrap {
            out.push('(');
            self.formula(formula, out);
            out.push(')');
        } else {
            self.formula(formula, out);
        }
    }
}

fn check(formula: &Formula) -> Result<(), TptpError> {
    if let Some(variable) = free_variables(formula).first() {
        return Err(TptpError::NotClosed {
            formula: formula.to_string(),
            variable: variable.name.clone(),
        });
    }
    if let Some(p) = formula.predicate_variables().first() {
        return Err(TptpError::PredicateVariable {
            formula: formula.to_string(),
            variable: p.name.clone(),
        });
    }
    if !formula.is_well_sorted() {
        return Err(TptpError::Sort(crate::error::LogicError::SortViolation {
            term: formula.to_string(),
        }));
    }
    Ok(())
}

/// TFF text for one formula, with the names of `signature`.
pub fn emit_formula(formula: &Formula, signature: &Signature) -> Result<String, TptpError> {
    check(formula)?;
    let names = Names::new(signature);
    let mut out = String::new();
    Emitter { names: &names }.formula(formula, &mut out);
    Ok(out)
}

/// The complete TFF problem: type declarations, axioms and the conjecture.
pub fn emit_task(task: &ProofTask) -> Result<String, TptpError> {
    let formulas: Vec<&Formula> = task
        .axioms
        .iter()
        .map(|(_, f)| f)
        .chain([&task.conjecture.1])
        .collect();
    for formula in &formulas {
        check(formula)?;
    }
    let signature = Signature::of(formulas.iter().copied());
    let names = Names::new(&signature);
    let emitter = Emitter { names: &names };
    let mut out = String::new();
    let _ = writeln!(out, "% proof task {}", task.name);
    let _ = writeln!(out, "tff(type_{OBJECT_SORT}, type, {OBJECT_SORT}: $tType).");
    let _ = writeln!(
        out,
        "tff(type_{EMBEDDING}, type, {EMBEDDING}: $int > {OBJECT_SORT})."
    );
    let _ = writeln!(
        out,
        "tff(type_{OBJECT_LESS}, type, {OBJECT_LESS}: ({OBJECT_SORT} * {OBJECT_SORT}) > $o)."
    );
    for constant in &signature.constants {
        let name = match constant {
            Precomputed::Symbol(s) => s.as_str(),
            Precomputed::Infimum => INFIMUM,
            Precomputed::Supremum => SUPREMUM,
            Precomputed::Numeral(_) => continue,
        };
        let _ = writeln!(out, "tff(type_{name}, type, {name}: {OBJECT_SORT}).");
    }
    for (name, sort) in &signature.placeholders {
        let sort = match sort {
            Sort::Object => OBJECT_SORT,
            Sort::Integer => "$int",
        };
        let _ = writeln!(out, "tff(type_{name}, type, {name}: {sort}).");
    }
    for predicate in &signature.predicates {
        let name = &names.predicates[predicate];
        let arguments = vec![OBJECT_SORT; predicate.arity];
        let ty = match predicate.arity {
            0 => "$o".to_string(),
            1 => format!("{OBJECT_SORT} > $o"),
            _ => format!("({}) > $o", arguments.join(" * ")),
        };
        let _ = writeln!(out, "tff(type_{name}, type, {name}: {ty}).");
    }
    for (label, formula) in &task.axioms {
        let mut text = String::new();
        emitter.formula(formula, &mut text);
        let _ = writeln!(out, "tff({label}, axiom, {text}).");
    }
    let mut text = String::new();
    emitter.formula(&task.conjecture.1, &mut text);
    let _ = writeln!(out, "tff({}, conjecture, {text}).", task.conjecture.0);
    Ok(out)
}
