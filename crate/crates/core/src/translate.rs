//! The `val`, `τB` and `τ*` translations from rules to two-sorted formulas.

use std::collections::{HashMap, HashSet};

use crate::{
    logic::{fresh_name, ArithmeticOperator, Formula, Quantifier, Sort, Term, Variable},
    syntax::{
        Atom, BinaryOperator, BodyItem, Head, Literal, Negation, Precomputed, PredicateSymbol,
        Program, ProgramTerm, Relation, Rule,
    },
};

/// How the remainder of `/` and `\` is bounded in `val`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DivisionGuard {
    /// `R ≥ 0 ∧ R < Q`, comparing the remainder with the quotient.
    #[default]
    Quotient,
    /// `R ≥ 0 ∧ (R < J ∨ R < 0 − J)`, comparing the remainder with the divisor.
    Divisor,
}

/// Settings shared by every translation of one io-program.
#[derive(Clone, Debug, Default)]
pub struct TranslationContext {
    /// Symbolic constants that are placeholders, with their declared sorts.
    pub placeholders: HashMap<String, Sort>,
    pub division_guard: DivisionGuard,
}

impl TranslationContext {
    pub fn new(placeholders: HashMap<String, Sort>, division_guard: DivisionGuard) -> Self {
        Self {
            placeholders,
            division_guard,
        }
    }

    /// Converts a variable-free or variable-containing program term without operations.
    pub fn simple_term(&self, term: &ProgramTerm) -> Option<Term> {
        Some(match term {
            ProgramTerm::Numeral(n) => Term::numeral(*n),
            ProgramTerm::SymbolicConstant(name) => match self.placeholders.get(name) {
                Some(sort) => Term::Placeholder {
                    name: name.clone(),
                    sort: *sort,
                },
                None => Term::symbol(name.clone()),
            },
            ProgramTerm::Variable(name) => Term::Variable(Variable::object(name.clone())),
            ProgramTerm::Infimum => Term::Constant(Precomputed::Infimum),
            ProgramTerm::Supremum => Term::Constant(Precomputed::Supremum),
            ProgramTerm::BinaryOperation { .. } => return None,
        })
    }
}

/// Produces fresh variables for the construction of one formula.
pub struct FreshNames {
    used: HashSet<String>,
}

impl FreshNames {
    pub fn new(used: impl IntoIterator<Item = String>) -> Self {
        Self {
            used: used.into_iter().collect(),
        }
    }

    pub fn for_rule(rule: &Rule) -> Self {
        Self::new(rule.variables())
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn integer(&mut self, prefix: &str) -> Variable {
        Variable::integer(fresh_name(prefix, &mut self.used))
    }

    pub fn object(&mut self, prefix: &str) -> Variable {
        Variable::object(fresh_name(prefix, &mut self.used))
    }
}

/// Translator state for one rule.
pub struct RuleTranslator<'a> {
    context: &'a TranslationContext,
    pub fresh: FreshNames,
}

impl<'a> RuleTranslator<'a> {
    pub fn new(context: &'a TranslationContext, rule: &Rule) -> Self {
        Self {
            context,
            fresh: FreshNames::for_rule(rule),
        }
    }

    pub fn with_names(context: &'a TranslationContext, fresh: FreshNames) -> Self {
        Self { context, fresh }
    }

    /// `val(t, Z)`: `Z` is one of the values of `t`.
    pub fn val(&mut self, term: &ProgramTerm, z: &Variable) -> Formula {
        let zt = Term::var(z);
        let ProgramTerm::BinaryOperation { op, left, right } = term else {
            let simple = self
                .context
                .simple_term(term)
                .expect("terms without operations are simple");
            return Formula::equal(zt, simple);
        };
        match op {
            BinaryOperator::Add | BinaryOperator::Subtract | BinaryOperator::Multiply => {
                let i = self.fresh.integer("I");
                let j = self.fresh.integer("J");
                let arithmetic = match op {
                    BinaryOperator::Add => ArithmeticOperator::Add,
                    BinaryOperator::Subtract => ArithmeticOperator::Subtract,
                    _ => ArithmeticOperator::Multiply,
                };
                let body = Formula::conjunction([
                    Formula::equal(
                        zt,
                        Term::arithmetic_unchecked(arithmetic, Term::var(&i), Term::var(&j)),
                    ),
                    self.val(left, &i),
                    self.val(right, &j),
                ]);
                Formula::quantify(Quantifier::Exists, [&i, &j], body)
            }
            BinaryOperator::Divide | BinaryOperator::Modulo => {
                let i = self.fresh.integer("I");
                let j = self.fresh.integer("J");
                let q = self.fresh.integer("Q");
                let r = self.fresh.integer("R");
                let (it, jt, qt, rt) = (Term::var(&i), Term::var(&j), Term::var(&q), Term::var(&r));
                let product = Term::arithmetic_unchecked(
                    ArithmeticOperator::Add,
                    Term::arithmetic_unchecked(
                        ArithmeticOperator::Multiply,
                        jt.clone(),
                        qt.clone(),
                    ),
                    rt.clone(),
                );
                let bound = match self.context.division_guard {
                    DivisionGuard::Quotient => {
                        Formula::compare(Relation::Less, rt.clone(), qt.clone())
                    }
                    DivisionGuard::Divisor => Formula::or(
                        Formula::compare(Relation::Less, rt.clone(), jt.clone()),
                        Formula::compare(
                            Relation::Less,
                            rt.clone(),
                            Term::arithmetic_unchecked(
                                ArithmeticOperator::Subtract,
                                Term::numeral(0),
                                jt.clone(),
                            ),
                        ),
                    ),
                };
                let result = if *op == BinaryOperator::Divide {
                    qt
                } else {
                    rt.clone()
                };
                let body = Formula::conjunction([
                    Formula::equal(it, product),
                    self.val(left, &i),
                    self.val(right, &j),
                    Formula::compare(Relation::NotEqual, jt, Term::numeral(0)),
                    Formula::compare(Relation::GreaterEqual, rt, Term::numeral(0)),
                    bound,
                    Formula::equal(zt, result),
                ]);
                Formula::quantify(Quantifier::Exists, [&i, &j, &q, &r], body)
            }
            BinaryOperator::Interval => {
                let i = self.fresh.integer("I");
                let j = self.fresh.integer("J");
                let k = self.fresh.integer("K");
                let body = Formula::conjunction([
                    self.val(left, &i),
                    self.val(right, &j),
                    Formula::compare(Relation::LessEqual, Term::var(&i), Term::var(&k)),
                    Formula::compare(Relation::LessEqual, Term::var(&k), Term::var(&j)),
                    Formula::equal(zt, Term::var(&k)),
                ]);
                Formula::quantify(Quantifier::Exists, [&i, &j, &k], body)
            }
        }
    }

    /// Fresh object variables `Z…` together with `val(ti, Zi)` for each argument.
    fn argument_values(&mut self, arguments: &[ProgramTerm]) -> (Vec<Variable>, Vec<Formula>) {
        let variables: Vec<Variable> = arguments.iter().map(|_| self.fresh.object("Z")).collect();
        let values = arguments
            .iter()
            .zip(&variables)
            .map(|(t, z)| self.val(t, z))
            .collect();
        (variables, values)
    }

    pub fn atom_over(atom: &Atom, variables: &[Variable]) -> Formula {
        Formula::atom(atom.symbol(), variables.iter().map(Term::var).collect())
    }

    /// `τB` of a single body literal or comparison.
    pub fn tau_b(&mut self, item: &BodyItem) -> Formula {
        match item {
            BodyItem::Literal(Literal { negation, atom }) => {
                let (variables, mut parts) = self.argument_values(&atom.arguments);
                let mut core = Self::atom_over(atom, &variables);
                for _ in 0..match negation {
                    Negation::None => 0,
                    Negation::Single => 1,
                    Negation::Double => 2,
                } {
                    core = Formula::not(core);
                }
                parts.push(core);
                Formula::quantify(Quantifier::Exists, &variables, Formula::conjunction(parts))
            }
            BodyItem::Comparison(comparison) => {
                let z1 = self.fresh.object("Z");
                let z2 = self.fresh.object("Z");
                let body = Formula::conjunction([
                    self.val(&comparison.left, &z1),
                    self.val(&comparison.right, &z2),
                    Formula::compare(comparison.relation, Term::var(&z1), Term::var(&z2)),
                ]);
                Formula::quantify(Quantifier::Exists, [&z1, &z2], body)
            }
        }
    }

    /// `τB(B1) ∧ ⋯ ∧ τB(Bn)`, or `⊤` for an empty body.
    pub fn tau_b_body(&mut self, body: &[BodyItem]) -> Formula {
        let items: Vec<Formula> = body.iter().map(|item| self.tau_b(item)).collect();
        Formula::conjunction(items)
    }

    fn head(&mut self, head: &Head) -> Formula {
        match head {
            Head::Empty => Formula::Bottom,
            Head::Basic(atom) | Head::Choice(atom) => {
                let (variables, values) = self.argument_values(&atom.arguments);
                let atom_formula = Self::atom_over(atom, &variables);
                let consequent = if matches!(head, Head::Choice(_)) {
                    Formula::or(atom_formula.clone(), Formula::not(atom_formula))
                } else {
                    atom_formula
                };
                if values.is_empty() {
                    return consequent;
                }
                Formula::quantify(
                    Quantifier::ForAll,
                    &variables,
                    Formula::implies(Formula::conjunction(values), consequent),
                )
            }
        }
    }

    /// `τ*` of a rule: the universal closure of `τB(Body) → H`.
    pub fn tau_star(&mut self, rule: &Rule) -> Formula {
        let body = self.tau_b_body(&rule.body);
        let head = self.head(&rule.head);
        Formula::implies(body, head).universal_closure()
    }

    /// The formula representation of a basic or choice rule with head variables `V1…Vn`.
    pub fn formula_representation(
        &mut self,
        rule: &Rule,
        head_variables: &[Variable],
    ) -> Option<Formula> {
        let (atom, choice) = match &rule.head {
            Head::Basic(atom) => (atom, false),
            Head::Choice(atom) => (atom, true),
            Head::Empty => return None,
        };
        let mut parts = vec![self.tau_b_body(&rule.body)];
        if choice {
            parts.push(Self::atom_over(atom, head_variables));
        }
        for (t, v) in atom.arguments.iter().zip(head_variables) {
            parts.push(self.val(t, v));
        }
        Some(Formula::conjunction(parts))
    }
}

/// `val(t, Z)` without placeholders.
pub fn val(term: &ProgramTerm, z: &Variable) -> Formula {
    let context = TranslationContext::default();
    let mut used: Vec<String> = Vec::new();
    let mut variables = indexmap::IndexSet::new();
    term.variables(&mut variables);
    used.extend(variables);
    used.push(z.name.clone());
    let mut translator = RuleTranslator {
        context: &context,
        fresh: FreshNames::new(used),
    };
    translator.val(term, z)
}

/// `τB` of a body item without placeholders.
pub fn tau_b(item: &BodyItem) -> Formula {
    let context = TranslationContext::default();
    let rule = Rule {
        head: Head::Empty,
        body: vec![item.clone()],
    };
    RuleTranslator::new(&context, &rule).tau_b(item)
}

pub fn tau_star_rule(rule: &Rule) -> Formula {
    tau_star_rule_with(&TranslationContext::default(), rule)
}

pub fn tau_star_rule_with(context: &TranslationContext, rule: &Rule) -> Formula {
    RuleTranslator::new(context, rule).tau_star(rule)
}

/// One sentence per rule, in program order.
pub fn tau_star(program: &Program) -> Vec<Formula> {
    tau_star_with(&TranslationContext::default(), program)
}

pub fn tau_star_with(context: &TranslationContext, program: &Program) -> Vec<Formula> {
    program
        .rules
        .iter()
        .map(|rule| tau_star_rule_with(context, rule))
        .collect()
}

/// The predicate symbol defined by a basic or choice rule.
pub fn head_symbol(rule: &Rule) -> Option<PredicateSymbol> {
    rule.head.atom().map(Atom::symbol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{
        logic::{alpha_equivalent, free_variables},
        syntax::parse_program,
    };

    fn term(text: &str) -> ProgramTerm {
        let program = parse_program(&format!("p({text}).")).unwrap();
        program.rules[0].head.atom().unwrap().arguments[0].clone()
    }

    #[test]
    fn val_of_interval() {
        let z = Variable::object("Z");
        let f = val(&term("1..3"), &z);
        assert_eq!(
            f.to_string(),
            "exists I, J, K (I = 1 and J = 3 and I <= K and K <= J and Z = K)"
        );
    }

    #[test]
    fn val_of_sum() {
        let z = Variable::object("Z");
        assert_eq!(
            val(&term("X+1"), &z).to_string(),
            "exists I, J (Z = I + J and I = X and J = 1)"
        );
        assert_eq!(val(&term("c"), &z).to_string(), "Z = c");
    }

    #[test]
    fn val_of_division_follows_quotient_guard() {
        let z = Variable::object("Z");
        assert_eq!(
            val(&term("7/2"), &z).to_string(),
            "exists I, J, Q, R (I = J * Q + R and I = 7 and J = 2 and J != 0 and R >= 0 and R < Q and Z = Q)"
        );
    }

    #[test]
    fn nested_values_use_distinct_variables() {
        let z = Variable::object("Z");
        let f = val(&term("(X+1)*2"), &z);
        assert_eq!(
            f.to_string(),
            "exists I, J (Z = I * J and exists I1, J1 (I = I1 + J1 and I1 = X and J1 = 1) and J = 2)"
        );
    }

    #[test]
    fn tau_b_items() {
        let program = parse_program(":- p(X), not covered(X), 1 < 2, not not q.").unwrap();
        let body = &program.rules[0].body;
        assert_eq!(tau_b(&body[0]).to_string(), "exists Z (Z = X and p(Z))");
        assert_eq!(
            tau_b(&body[1]).to_string(),
            "exists Z (Z = X and not covered(Z))"
        );
        assert_eq!(
            tau_b(&body[2]).to_string(),
            "exists Z, Z1 (Z = 1 and Z1 = 2 and Z < Z1)"
        );
        assert_eq!(tau_b(&body[3]).to_string(), "not not q");
    }

    #[test]
    fn tau_star_of_example_program() {
        let program = parse_program("{p(1..3)}.\nq(X+1) :- p(X).").unwrap();
        let sentences = tau_star(&program);
        assert_eq!(
            sentences[0].to_string(),
            "#true -> forall Z (exists I, J, K (I = 1 and J = 3 and I <= K and K <= J and Z = K) -> p(Z) or not p(Z))"
        );
        assert_eq!(
            sentences[1].to_string(),
            "forall X (exists Z (Z = X and p(Z)) -> forall Z1 (exists I, J (Z1 = I + J and I = X and J = 1) -> q(Z1)))"
        );
        for s in &sentences {
            assert!(free_variables(s).is_empty());
        }
    }

    #[test]
    fn constraint_head_is_bottom() {
        let program = parse_program(":- p(X).").unwrap();
        let expected = Formula::ForAll(
            Variable::object("X"),
            Box::new(Formula::not(Formula::Exists(
                Variable::object("Y"),
                Box::new(Formula::and(
                    Formula::equal(
                        Term::var(&Variable::object("Y")),
                        Term::var(&Variable::object("X")),
                    ),
                    Formula::atom(
                        PredicateSymbol::new("p", 1),
                        vec![Term::var(&Variable::object("Y"))],
                    ),
                )),
            ))),
        );
        assert!(alpha_equivalent(&tau_star(&program)[0], &expected));
    }

    #[test]
    fn fresh_names_avoid_program_variables() {
        let program = parse_program("q(I) :- p(I+1), Z = 2.").unwrap();
        let sentence = tau_star_rule(&program.rules[0]);
        assert!(free_variables(&sentence).is_empty());
        let names = sentence.variable_names();
        assert!(names.contains("I") && names.contains("I1") && names.contains("Z1"));
    }

    #[test]
    fn placeholders_become_placeholder_terms() {
        let context = TranslationContext::new(
            HashMap::from([("n".to_string(), Sort::Integer)]),
            DivisionGuard::Quotient,
        );
        let program = parse_program("{in_cover(1..n)}.").unwrap();
        let sentence = tau_star_rule_with(&context, &program.rules[0]);
        let mut found = false;
        sentence.visit_terms(&mut |t| {
            found |= matches!(t, Term::Placeholder { name, sort: Sort::Integer } if name == "n")
        });
        assert!(found);
    }
}
