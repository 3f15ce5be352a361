//! The grounding `τ` of a program over a bounded universe.

use std::collections::HashMap;

use super::{
    ground::{AtomTable, GroundAtom, GroundFormula, GroundTheory},
    BoundedUniverse,
};
use crate::{
    syntax::{
        Atom, BinaryOperator, BodyItem, Head, Negation, Precomputed, Program, ProgramTerm, Rule,
    },
    translate::DivisionGuard,
};

type Binding = HashMap<String, Precomputed>;

/// The values of a ground term inside the universe, sorted and without repetitions.
///
/// Intermediate integer values range over the integer range of the universe,
/// as the integer variables of `val` do. For `/` and `\`, the quotient `Q` and
/// remainder `R` satisfy `I = J × Q + R`, `J ≠ 0`, `R ≥ 0` and the selected
/// bound on `R`.
pub fn values(
    term: &ProgramTerm,
    universe: &BoundedUniverse,
    binding: &Binding,
    guard: DivisionGuard,
) -> Vec<Precomputed> {
    let mut out: Vec<Precomputed> = match term {
        ProgramTerm::Variable(name) => binding.get(name).cloned().into_iter().collect(),
        ProgramTerm::BinaryOperation { op, left, right } => {
            let integers = |t: &ProgramTerm| -> Vec<i64> {
                values(t, universe, binding, guard)
                    .iter()
                    .filter_map(Precomputed::as_integer)
                    .collect()
            };
            let (lefts, rights) = (integers(left), integers(right));
            let mut results = Vec::new();
            for &i in &lefts {
                for &j in &rights {
                    operation_values(*op, i, j, universe, guard, &mut results);
                }
            }
            results.into_iter().map(Precomputed::Numeral).collect()
        }
        precomputed => precomputed
            .as_precomputed()
            .filter(|p| universe.contains(p))
            .into_iter()
            .collect(),
    };
    out.sort();
    out.dedup();
    out
}

fn operation_values(
    op: BinaryOperator,
    i: i64,
    j: i64,
    universe: &BoundedUniverse,
    guard: DivisionGuard,
    into: &mut Vec<i64>,
) {
    let in_range = |n: i64| universe.contains_integer(n);
    match op {
        BinaryOperator::Add | BinaryOperator::Subtract | BinaryOperator::Multiply => {
            let result = match op {
                BinaryOperator::Add => i.checked_add(j),
                BinaryOperator::Subtract => i.checked_sub(j),
                _ => i.checked_mul(j),
            };
            into.extend(result.filter(|n| in_range(*n)));
        }
        BinaryOperator::Divide | BinaryOperator::Modulo => {
            if j == 0 {
                return;
            }
            for q in universe.integers() {
                let Some(r) = j.checked_mul(q).and_then(|p| i.checked_sub(p)) else {
                    continue;
                };
                let bounded = match guard {
                    DivisionGuard::Quotient => r < q,
                    DivisionGuard::Divisor => r < j || j.checked_neg().is_some_and(|m| r < m),
                };
                if in_range(r) && r >= 0 && bounded {
                    into.push(if op == BinaryOperator::Divide { q } else { r });
                }
            }
        }
        BinaryOperator::Interval => {
            into.extend(universe.integers().filter(|k| i <= *k && *k <= j));
        }
    }
}

struct TauGrounder<'a> {
    universe: &'a BoundedUniverse,
    guard: DivisionGuard,
    atoms: AtomTable,
}

impl TauGrounder<'_> {
    /// Atoms `p(r)` for every tuple `r` of values of the arguments.
    fn instances(&mut self, atom: &Atom, binding: &Binding) -> Vec<usize> {
        let argument_values: Vec<Vec<Precomputed>> = atom
            .arguments
            .iter()
            .map(|t| values(t, self.universe, binding, self.guard))
            .collect();
        cartesian(&argument_values)
            .into_iter()
            .map(|arguments| {
                self.atoms
                    .intern(GroundAtom::new(atom.predicate.clone(), arguments))
            })
            .collect()
    }

    fn body_item(&mut self, item: &BodyItem, binding: &Binding) -> GroundFormula {
        match item {
            BodyItem::Literal(literal) => {
                let instances = self.instances(&literal.atom, binding);
                GroundFormula::disjunction(instances.into_iter().map(|a| {
                    let atom = GroundFormula::Atom(a);
                    match literal.negation {
                        Negation::None => atom,
                        Negation::Single => GroundFormula::not(atom),
                        Negation::Double => GroundFormula::not(GroundFormula::not(atom)),
                    }
                }))
            }
            BodyItem::Comparison(comparison) => {
                let lefts = values(&comparison.left, self.universe, binding, self.guard);
                let rights = values(&comparison.right, self.universe, binding, self.guard);
                let holds = lefts
                    .iter()
                    .any(|l| rights.iter().any(|r| comparison.relation.holds(l.cmp(r))));
                GroundFormula::constant(holds)
            }
        }
    }

    fn head(&mut self, head: &Head, binding: &Binding) -> GroundFormula {
        match head {
            Head::Empty => GroundFormula::Bottom,
            Head::Basic(atom) => GroundFormula::conjunction(
                self.instances(atom, binding)
                    .into_iter()
                    .map(GroundFormula::Atom),
            ),
            Head::Choice(atom) => {
                GroundFormula::conjunction(self.instances(atom, binding).into_iter().map(|a| {
                    GroundFormula::disjunction([
                        GroundFormula::Atom(a),
                        GroundFormula::not(GroundFormula::Atom(a)),
                    ])
                }))
            }
        }
    }

    fn rule(&mut self, rule: &Rule, formulas: &mut Vec<GroundFormula>) {
        let variables: Vec<String> = rule.variables().into_iter().collect();
        let objects = self.universe.objects();
        let domains: Vec<Vec<Precomputed>> = variables.iter().map(|_| objects.clone()).collect();
        for tuple in cartesian(&domains) {
            let binding: Binding = variables.iter().cloned().zip(tuple).collect();
            let body = GroundFormula::conjunction(
                rule.body.iter().map(|item| self.body_item(item, &binding)),
            );
            let formula = if body == GroundFormula::Bottom {
                GroundFormula::top()
            } else {
                GroundFormula::implies(body, self.head(&rule.head, &binding))
            };
            if !formula.is_top() {
                formulas.push(formula);
            }
        }
    }
}

/// All tuples with the `i`-th component drawn from `domains[i]`.
pub(crate) fn cartesian<T: Clone>(domains: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut tuples = vec![Vec::new()];
    for domain in domains {
        tuples = tuples
            .into_iter()
            .flat_map(|prefix| {
                domain.iter().map(move |value| {
                    let mut tuple = prefix.clone();
                    tuple.push(value.clone());
                    tuple
                })
            })
            .collect();
    }
    tuples
}

/// `τΠ` restricted to the universe: every rule instantiated with all tuples of
/// precomputed terms, instances equivalent to `⊤` omitted.
pub fn tau_ground_with(
    program: &Program,
    universe: &BoundedUniverse,
    guard: DivisionGuard,
) -> GroundTheory {
    let mut grounder = TauGrounder {
        universe,
        guard,
        atoms: AtomTable::default(),
    };
    let mut formulas = Vec::new();
    for rule in &program.rules {
        grounder.rule(rule, &mut formulas);
    }
    GroundTheory {
        atoms: grounder.atoms,
        formulas,
    }
}

pub fn tau_ground(program: &Program, universe: &BoundedUniverse) -> GroundTheory {
    tau_ground_with(program, universe, DivisionGuard::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn universe(constants: &[&str], lo: i64, hi: i64) -> BoundedUniverse {
        BoundedUniverse::new(constants.iter().copied(), lo, hi).unwrap()
    }

    fn term(text: &str) -> ProgramTerm {
        let program = parse_program(&format!("t({text}).")).unwrap();
        program.rules[0].head.atom().unwrap().arguments[0].clone()
    }

    fn ints(values: Vec<Precomputed>) -> Vec<i64> {
        values.iter().map(|v| v.as_integer().unwrap()).collect()
    }

    #[test]
    fn term_values() {
        let u = universe(&["a"], -3, 6);
        let none = Binding::new();
        let v = |t: &str| values(&term(t), &u, &none, DivisionGuard::Quotient);
        assert_eq!(ints(v("1..3")), vec![1, 2, 3]);
        assert_eq!(ints(v("2+3")), vec![5]);
        assert!(v("4+3").is_empty());
        assert!(v("a+1").is_empty());
        assert_eq!(v("a"), vec![Precomputed::Symbol("a".into())]);
        assert!(v("b").is_empty());
        assert!(v("1/0").is_empty());
        assert_eq!(ints(v("(0..1)*2")), vec![0, 2]);
    }

    #[test]
    fn division_follows_the_selected_guard() {
        let u = universe(&[], -8, 8);
        let none = Binding::new();
        let v = |t: &str, g| ints(values(&term(t), &u, &none, g));
        // 7 = 2 * 3 + 1 with 1 < 3
        assert_eq!(v("7/2", DivisionGuard::Quotient), vec![3]);
        assert_eq!(v("6/2", DivisionGuard::Quotient), vec![3]);
        // 1 = 2 * 0 + 1 but the remainder is not below the quotient
        assert_eq!(v("1/2", DivisionGuard::Quotient), Vec::<i64>::new());
        assert_eq!(v("1/2", DivisionGuard::Divisor), vec![0]);
        assert_eq!(v("5\\2", DivisionGuard::Divisor), vec![1]);
        assert_eq!(v("5/2", DivisionGuard::Divisor), vec![2]);
    }

    #[test]
    fn example_program_grounding() {
        let program = parse_program("{p(1..3)}.\nq(X+1) :- p(X).").unwrap();
        let u = universe(&["a"], 0, 3);
        let theory = tau_ground(&program, &u);
        let printed: Vec<String> = theory
            .formulas
            .iter()
            .map(|f| f.display(&theory.atoms).to_string())
            .collect();
        assert_eq!(
            printed[0],
            "((p(1) or not p(1)) and (p(2) or not p(2)) and (p(3) or not p(3)))"
        );
        assert!(printed.contains(&"(p(0) -> q(1))".to_string()));
        assert!(printed.contains(&"(p(2) -> q(3))".to_string()));
        // p(3) -> q(4) and p(a) -> ⊤ are trivial in this universe
        assert!(!printed
            .iter()
            .any(|p| p.contains("p(a)") || p.starts_with("(p(3)")));
    }

    #[test]
    fn constraint_instance() {
        let program = parse_program(":- p(X).").unwrap();
        let theory = tau_ground(&program, &universe(&["a"], 0, 0));
        let printed: Vec<String> = theory
            .formulas
            .iter()
            .map(|f| f.display(&theory.atoms).to_string())
            .collect();
        assert_eq!(printed, vec!["not p(0)", "not p(a)"]);
    }
}
