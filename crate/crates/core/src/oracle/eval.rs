//! Grounding of two-sorted formulas over a bounded universe.

use super::{
    ground::{AtomTable, GroundAtom, GroundFormula},
    BoundedUniverse, Valuation,
};
use crate::{
    logic::{Formula, Predicate, Sort, Term, Variable},
    syntax::Precomputed,
};

/// How an atom whose arguments lie in the universe is treated during grounding.
pub(crate) enum AtomValue {
    Fixed(bool),
    /// Kept as a propositional atom.
    Symbolic,
}

pub(crate) struct Grounder<'a> {
    pub universe: &'a BoundedUniverse,
    pub valuation: &'a Valuation,
    pub atom_value: &'a dyn Fn(&Predicate, &[Precomputed]) -> AtomValue,
    pub atoms: AtomTable,
    objects: Vec<Precomputed>,
    integers: Vec<Precomputed>,
}

impl<'a> Grounder<'a> {
    pub fn new(
        universe: &'a BoundedUniverse,
        valuation: &'a Valuation,
        atom_value: &'a dyn Fn(&Predicate, &[Precomputed]) -> AtomValue,
    ) -> Self {
        Self {
            universe,
            valuation,
            atom_value,
            atoms: AtomTable::default(),
            objects: universe.objects(),
            integers: universe.integers().map(Precomputed::Numeral).collect(),
        }
    }

    /// The value of a term under the environment, computed with standard
    /// arithmetic; `None` on overflow or for unbound names.
    pub fn term(&self, term: &Term, env: &[(Variable, Precomputed)]) -> Option<Precomputed> {
        match term {
            Term::Constant(c) => Some(c.clone()),
            Term::Placeholder { name, .. } => self.valuation.get(name).cloned(),
            Term::Variable(v) => env
                .iter()
                .rev()
                .find(|(w, _)| w == v)
                .map(|(_, value)| value.clone()),
            Term::Arithmetic { op, left, right } => {
                let l = self.term(left, env)?.as_integer()?;
                let r = self.term(right, env)?.as_integer()?;
                op.apply(l, r).map(Precomputed::Numeral)
            }
        }
    }

    pub fn ground(
        &mut self,
        formula: &Formula,
        env: &mut Vec<(Variable, Precomputed)>,
    ) -> GroundFormula {
        match formula {
            Formula::Bottom => GroundFormula::Bottom,
            Formula::Atom {
                predicate,
                arguments,
            } => {
                let values: Option<Vec<Precomputed>> = arguments
                    .iter()
                    .map(|t| self.term(t, env).filter(|v| self.universe.contains(v)))
                    .collect();
                // atoms with arguments outside the universe are false
                let Some(values) = values else {
                    return GroundFormula::Bottom;
                };
                match (self.atom_value)(predicate, &values) {
                    AtomValue::Fixed(value) => GroundFormula::constant(value),
                    AtomValue::Symbolic => GroundFormula::Atom(
                        self.atoms
                            .intern(GroundAtom::new(predicate.name().to_string(), values)),
                    ),
                }
            }
            Formula::Compare {
                relation,
                left,
                right,
            } => {
                let holds = match (self.term(left, env), self.term(right, env)) {
                    (Some(l), Some(r)) => relation.holds(l.cmp(&r)),
                    _ => false,
                };
                GroundFormula::constant(holds)
            }
            Formula::And(a, b) => {
                let a = self.ground(a, env);
                if a == GroundFormula::Bottom {
                    return a;
                }
                GroundFormula::conjunction([a, self.ground(b, env)])
            }
            Formula::Or(a, b) => {
                let a = self.ground(a, env);
                if a.is_top() {
                    return a;
                }
                GroundFormula::disjunction([a, self.ground(b, env)])
            }
            Formula::Implies(a, b) => {
                let a = self.ground(a, env);
                if a == GroundFormula::Bottom {
                    return GroundFormula::top();
                }
                GroundFormula::implies(a, self.ground(b, env))
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                let universal = matches!(formula, Formula::ForAll(..));
                let size = match v.sort {
                    Sort::Object => self.objects.len(),
                    Sort::Integer => self.integers.len(),
                };
                let mut parts = Vec::new();
                for index in 0..size {
                    let value = match v.sort {
                        Sort::Object => self.objects[index].clone(),
                        Sort::Integer => self.integers[index].clone(),
                    };
                    env.push((v.clone(), value));
                    let part = self.ground(body, env);
                    env.pop();
                    if universal && part == GroundFormula::Bottom {
                        return part;
                    }
                    if !universal && part.is_top() {
                        return part;
                    }
                    parts.push(part);
                }
                if universal {
                    GroundFormula::conjunction(parts)
                } else {
                    GroundFormula::disjunction(parts)
                }
            }
        }
    }
}
