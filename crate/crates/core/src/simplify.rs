//! Equivalence-preserving simplification of formulas.
//!
//! Every rewrite is valid in intuitionistic logic:
//!
//! * `∃Z (… ∧ Z = t ∧ …)` becomes the conjunction with `t` substituted for `Z`,
//!   and `∀Z (… ∧ Z = t ∧ … → F)` likewise, where `t` is a variable or a
//!   constant whose sort fits `Z` and that does not contain `Z`;
//! * `⊤` and `⊥` are eliminated from conjunctions, disjunctions and implications;
//! * repeated conjuncts and disjuncts are dropped;
//! * quantifiers binding no free occurrence are dropped.
//!
//! Equations with arithmetic right-hand sides are never eliminated, so the
//! result is also equivalent on every bounded universe containing the
//! constants of the input.

use std::collections::HashMap;

use crate::{
    logic::{occurs_free, substitute, Formula, Quantifier, Sort, Term, Variable},
    oracle::{self, BoundedUniverse},
    syntax::Relation,
};

/// Applies the rewrites until nothing changes.
pub fn simplify(formula: &Formula) -> Formula {
    let mut current = formula.clone();
    loop {
        let next = step(&current);
        if next == current {
            return current;
        }
        current = next;
    }
}

fn step(formula: &Formula) -> Formula {
    match formula {
        Formula::Bottom | Formula::Atom { .. } | Formula::Compare { .. } => formula.clone(),
        Formula::And(a, b) => simplify_conjunction(step(a), step(b)),
        Formula::Or(a, b) => simplify_disjunction(step(a), step(b)),
        Formula::Implies(a, b) => simplify_implication(step(a), step(b)),
        Formula::Exists(v, body) => simplify_exists(v, step(body)),
        Formula::ForAll(v, body) => simplify_forall(v, step(body)),
    }
}

fn simplify_conjunction(a: Formula, b: Formula) -> Formula {
    if a.is_top() {
        return b;
    }
    if b.is_top() {
        return a;
    }
    if a == Formula::Bottom || b == Formula::Bottom {
        return Formula::Bottom;
    }
    let candidate = Formula::and(a, b);
    if candidate.as_iff().is_some() {
        return candidate;
    }
    let mut seen: Vec<Formula> = Vec::new();
    for conjunct in candidate.conjuncts() {
        if !seen.contains(conjunct) {
            seen.push(conjunct.clone());
        }
    }
    Formula::conjunction(seen)
}

fn simplify_disjunction(a: Formula, b: Formula) -> Formula {
    if a == Formula::Bottom {
        return b;
    }
    if b == Formula::Bottom {
        return a;
    }
    if a.is_top() || b.is_top() {
        return Formula::top();
    }
    let mut disjuncts: Vec<Formula> = Vec::new();
    for d in disjuncts_of(&a).into_iter().chain(disjuncts_of(&b)) {
        if !disjuncts.contains(d) {
            disjuncts.push(d.clone());
        }
    }
    Formula::disjunction(disjuncts)
}

fn disjuncts_of(formula: &Formula) -> Vec<&Formula> {
    match formula {
        Formula::Or(a, b) => {
            let mut out = disjuncts_of(a);
            out.extend(disjuncts_of(b));
            out
        }
        _ => vec![formula],
    }
}

fn simplify_implication(a: Formula, b: Formula) -> Formula {
    if a.is_top() {
        return b;
    }
    if b.is_top() || a == Formula::Bottom {
        return Formula::top();
    }
    Formula::implies(a, b)
}

/// Splits `Q V1 … Q Vk F` into the variables and `F`.
fn strip_prefix(quantifier: Quantifier, formula: &Formula) -> (Vec<Variable>, &Formula) {
    let mut variables = Vec::new();
    let mut current = formula;
    loop {
        match (quantifier, current) {
            (Quantifier::Exists, Formula::Exists(v, body))
            | (Quantifier::ForAll, Formula::ForAll(v, body)) => {
                variables.push(v.clone());
                current = body;
            }
            _ => return (variables, current),
        }
    }
}

/// Whether `variable = term` may be eliminated by substituting `term`.
fn eliminable(variable: &Variable, term: &Term, inner: &[Variable]) -> bool {
    match term {
        Term::Variable(w) => w != variable && w.sort.fits(variable.sort) && !inner.contains(w),
        Term::Constant(_) | Term::Placeholder { .. } => term.sort().fits(variable.sort),
        Term::Arithmetic { .. } => false,
    }
}

/// Finds a conjunct `v = t` or `t = v` that allows eliminating `v`.
fn find_equation(
    variable: &Variable,
    conjuncts: &[&Formula],
    inner: &[Variable],
) -> Option<(usize, Term)> {
    conjuncts.iter().enumerate().find_map(|(index, conjunct)| {
        let Formula::Compare {
            relation: Relation::Equal,
            left,
            right,
        } = conjunct
        else {
            return None;
        };
        let is_variable = |t: &Term| matches!(t, Term::Variable(v) if v == variable);
        if is_variable(left) && eliminable(variable, right, inner) {
            Some((index, right.clone()))
        } else if is_variable(right) && eliminable(variable, left, inner) {
            Some((index, left.clone()))
        } else {
            None
        }
    })
}

fn replace(formula: &Formula, variable: &Variable, term: &Term) -> Formula {
    substitute(formula, &HashMap::from([(variable.clone(), term.clone())]))
        .expect("eliminable equations are well-sorted")
}

fn simplify_exists(variable: &Variable, body: Formula) -> Formula {
    if !occurs_free(variable, &body) {
        return body;
    }
    let (inner, matrix) = strip_prefix(Quantifier::Exists, &body);
    let conjuncts = matrix.conjuncts();
    if let Some((index, term)) = find_equation(variable, &conjuncts, &inner) {
        let rest = Formula::conjunction(
            conjuncts
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != index)
                .map(|(_, c)| (*c).clone()),
        );
        let rest = replace(&rest, variable, &term);
        return Formula::quantify(Quantifier::Exists, &inner, rest);
    }
    Formula::Exists(variable.clone(), Box::new(body))
}

fn simplify_forall(variable: &Variable, body: Formula) -> Formula {
    if !occurs_free(variable, &body) {
        return body;
    }
    let (inner, matrix) = strip_prefix(Quantifier::ForAll, &body);
    if let Formula::Implies(antecedent, consequent) = matrix {
        let conjuncts = antecedent.conjuncts();
        if let Some((index, term)) = find_equation(variable, &conjuncts, &inner) {
            let rest: Vec<Formula> = conjuncts
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != index)
                .map(|(_, c)| (*c).clone())
                .collect();
            let implication = if rest.is_empty() {
                (**consequent).clone()
            } else {
                Formula::implies(Formula::conjunction(rest), (**consequent).clone())
            };
            let result = replace(&implication, variable, &term);
            return Formula::quantify(Quantifier::ForAll, &inner, result);
        }
    }
    Formula::ForAll(variable.clone(), Box::new(body))
}

/// Renames bound variables for display: integer variables become `N`, `N1`,
/// `N2`, …, object variables `X`, `X1`, `X2`, …, choosing the first name not
/// in scope. Equal subformulas in the same scope get equal names.
pub fn normalize_bound_names(formula: &Formula) -> Formula {
    let mut counter = 0;
    let unique = make_bound_unique(formula, &mut counter);
    let mut scope: Vec<String> = crate::logic::free_variables(formula)
        .into_iter()
        .map(|v| v.name)
        .collect();
    rename_bound(&unique, &mut scope)
}

/// Gives every binder a distinct name that cannot occur in parsed input.
fn make_bound_unique(formula: &Formula, counter: &mut usize) -> Formula {
    match formula {
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            *counter += 1;
            let renamed = Variable::new(format!("#{counter}"), v.sort);
            let body = crate::logic::rename_free(body, v, &renamed);
            let body = make_bound_unique(&body, counter);
            Formula::quantified(quantifier_of(formula), renamed, body)
        }
        Formula::And(a, b) => {
            Formula::and(make_bound_unique(a, counter), make_bound_unique(b, counter))
        }
        Formula::Or(a, b) => {
            Formula::or(make_bound_unique(a, counter), make_bound_unique(b, counter))
        }
        Formula::Implies(a, b) => {
            Formula::implies(make_bound_unique(a, counter), make_bound_unique(b, counter))
        }
        _ => formula.clone(),
    }
}

fn quantifier_of(formula: &Formula) -> Quantifier {
    match formula {
        Formula::ForAll(..) => Quantifier::ForAll,
        _ => Quantifier::Exists,
    }
}

fn rename_bound(formula: &Formula, scope: &mut Vec<String>) -> Formula {
    match formula {
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            let letter = match v.sort {
                Sort::Integer => "N",
                Sort::Object => "X",
            };
            let name = std::iter::once(letter.to_string())
                .chain((1..).map(|i| format!("{letter}{i}")))
                .find(|candidate| !scope.contains(candidate))
                .expect("names are unbounded");
            let renamed = Variable::new(name.clone(), v.sort);
            // binders inside `body` have unique names, so renaming cannot capture
            let body = crate::logic::rename_free(body, v, &renamed);
            scope.push(name);
            let body = rename_bound(&body, scope);
            scope.pop();
            Formula::quantified(quantifier_of(formula), renamed, body)
        }
        Formula::And(a, b) => Formula::and(rename_bound(a, scope), rename_bound(b, scope)),
        Formula::Or(a, b) => Formula::or(rename_bound(a, scope), rename_bound(b, scope)),
        Formula::Implies(a, b) => Formula::implies(rename_bound(a, scope), rename_bound(b, scope)),
        _ => formula.clone(),
    }
}

/// Decides whether two formulas agree on every interpretation over `universe`.
pub fn check_equivalence_bounded(
    f: &Formula,
    g: &Formula,
    universe: &BoundedUniverse,
) -> Result<bool, crate::error::OracleError> {
    oracle::equivalent_bounded(f, g, universe)
}
