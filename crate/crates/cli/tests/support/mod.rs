//! Fixtures and random generators shared by the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use rand::{rngs::StdRng, seq::IndexedRandom, RngExt};
use tightverify_core::{
    completion::IoProgram,
    logic::{ArithmeticOperator, Quantifier},
    oracle::{AtomSet, BoundedUniverse, GroundAtom, Input, Valuation},
    parse_program,
    spec::{parse_spec_sources, Specification},
    syntax::Relation,
    Formula, Precomputed, PredicateSymbol, Sort, Term, Variable,
};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

pub fn tightverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tightverify"))
        .args(args)
        .env_remove("TIGHTVERIFY_PROVER")
        .output()
        .unwrap()
}

pub fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

pub fn specification(names: &[&str]) -> Specification {
    let texts: Vec<(String, String)> = names
        .iter()
        .map(|n| (n.to_string(), read_fixture(n)))
        .collect();
    let sources: Vec<(&str, &str)> = texts
        .iter()
        .map(|(n, t)| (n.as_str(), t.as_str()))
        .collect();
    parse_spec_sources(&sources).unwrap()
}

pub fn io_program(program: &str, specs: &[&str]) -> IoProgram {
    let program = parse_program(&read_fixture(program)).unwrap();
    IoProgram::with_specification(program, &specification(specs)).unwrap()
}

pub fn exact_cover() -> IoProgram {
    io_program("exact_cover.lp", &["exact_cover.spec"])
}

pub fn num(n: i64) -> Precomputed {
    Precomputed::Numeral(n)
}

pub fn sym(s: &str) -> Precomputed {
    Precomputed::Symbol(s.into())
}

/// `n = 3` and the `s` facts of the exact cover instance.
pub fn exact_cover_input() -> Input {
    let atoms = [("a", 1), ("b", 1), ("b", 2), ("c", 2), ("c", 3)]
        .into_iter()
        .map(|(x, i)| GroundAtom::new("s", vec![sym(x), num(i)]))
        .collect();
    Input {
        valuation: Valuation::from([("n".to_string(), num(3))]),
        atoms,
    }
}

pub fn exact_cover_io_model() -> AtomSet {
    let mut model = exact_cover_input().atoms;
    model.insert(GroundAtom::new("in_cover", vec![num(1)]));
    model.insert(GroundAtom::new("in_cover", vec![num(3)]));
    model
}

/// A randomly generated io-program together with an input for it.
pub struct Instance {
    pub text: String,
    pub io: IoProgram,
    pub input: Input,
    pub universe: BoundedUniverse,
}

const TERMS: &[&str] = &["X", "Y", "0", "1", "2", "a", "X+1", "1..2", "n"];

fn random_term(rng: &mut StdRng) -> String {
    TERMS.choose(rng).unwrap().to_string()
}

fn random_atom(rng: &mut StdRng, predicate: &str, arity: usize) -> String {
    if arity == 0 {
        predicate.to_string()
    } else {
        format!("{predicate}({})", random_term(rng))
    }
}

/// Programs over output `p/1`, private `q/0` or `q/1` and input `e/1`, with
/// at most three rules and an integer placeholder `n`.
pub fn random_program(rng: &mut StdRng) -> String {
    let q_arity = rng.random_range(0..=1);
    let rules = rng.random_range(1..=3);
    let mut text = String::new();
    for _ in 0..rules {
        let head = match rng.random_range(0..5) {
            0 | 1 => random_atom(rng, "p", 1),
            2 => format!("{{{}}}", random_atom(rng, "p", 1)),
            3 => random_atom(rng, "q", q_arity),
            _ => String::new(),
        };
        let mut body = Vec::new();
        for _ in 0..rng.random_range(usize::from(head.is_empty())..=2) {
            let item = match rng.random_range(0..4) {
                0 => random_atom(rng, "p", 1),
                1 => random_atom(rng, "q", q_arity),
                2 => random_atom(rng, "e", 1),
                _ => {
                    let relation = ["<", "!=", "=", "<="].choose(rng).unwrap();
                    format!("{} {relation} {}", random_term(rng), random_term(rng))
                }
            };
            let sign = if item.contains(['<', '=']) {
                ""
            } else {
                ["", "", "not ", "not not "].choose(rng).unwrap()
            };
            body.push(format!("{sign}{item}"));
        }
        if body.is_empty() {
            text.push_str(&format!("{head}.\n"));
        } else {
            text.push_str(&format!("{head} :- {}.\n", body.join(", ")));
        }
    }
    text
}

pub fn random_io_program(text: &str) -> Option<IoProgram> {
    let program = parse_program(text).ok()?;
    IoProgram::new(
        program,
        [("n".to_string(), Sort::Integer)].into_iter().collect(),
        [PredicateSymbol::new("e", 1)].into_iter().collect(),
        [PredicateSymbol::new("p", 1)].into_iter().collect(),
    )
    .ok()
}

pub fn small_universe() -> BoundedUniverse {
    BoundedUniverse::new(["a"], 0, 3).unwrap()
}

pub fn random_input(rng: &mut StdRng, universe: &BoundedUniverse) -> Input {
    let atoms = universe
        .objects()
        .into_iter()
        .filter(|_| rng.random_bool(0.4))
        .map(|x| GroundAtom::new("e", vec![x]))
        .collect();
    Input {
        valuation: Valuation::from([("n".to_string(), num(rng.random_range(0..=3)))]),
        atoms,
    }
}

/// Random tight io-programs without private recursion, with inputs.
pub fn tight_corpus(rng: &mut StdRng, count: usize) -> Vec<Instance> {
    let universe = small_universe();
    let mut corpus = Vec::new();
    while corpus.len() < count {
        let text = random_program(rng);
        let Some(io) = random_io_program(&text) else {
            continue;
        };
        if !tightverify_core::analysis::is_tight(&io)
            || tightverify_core::analysis::uses_private_recursion(&io)
        {
            continue;
        }
        let input = random_input(rng, &universe);
        corpus.push(Instance {
            text,
            io,
            input,
            universe: universe.clone(),
        });
    }
    corpus
}

/// Every subset of the given atoms.
pub fn subsets(atoms: &[GroundAtom]) -> Vec<AtomSet> {
    assert!(atoms.len() <= 16, "too many atoms to enumerate subsets");
    (0u32..1 << atoms.len())
        .map(|mask| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect()
}

/// Random formulas over `p/1`, `r/0` and `s/2` with the placeholder `n`.
pub struct FormulaGenerator<'a> {
    pub rng: &'a mut StdRng,
    scope: Vec<Variable>,
}

impl<'a> FormulaGenerator<'a> {
    pub fn new(rng: &'a mut StdRng) -> Self {
        Self {
            rng,
            scope: Vec::new(),
        }
    }

    fn variable(&mut self, sort: Sort) -> Variable {
        let names: &[&str] = match sort {
            Sort::Object => &["X", "Y"],
            Sort::Integer => &["N", "M"],
        };
        Variable::new(*names.choose(self.rng).unwrap(), sort)
    }

    fn integer_term(&mut self) -> Term {
        match self.rng.random_range(0..5) {
            0 => Term::numeral(self.rng.random_range(-1..=2)),
            1 => Term::Placeholder {
                name: "n".into(),
                sort: Sort::Integer,
            },
            2 => {
                let op = *[
                    ArithmeticOperator::Add,
                    ArithmeticOperator::Subtract,
                    ArithmeticOperator::Multiply,
                ]
                .choose(self.rng)
                .unwrap();
                let left = Term::var(&self.variable(Sort::Integer));
                Term::arithmetic(op, left, Term::numeral(1)).unwrap()
            }
            _ => Term::var(&self.variable(Sort::Integer)),
        }
    }

    fn object_term(&mut self) -> Term {
        match self.rng.random_range(0..4) {
            0 => Term::symbol(*["a", "b"].choose(self.rng).unwrap()),
            1 => self.integer_term(),
            _ => Term::var(&self.variable(Sort::Object)),
        }
    }

    pub fn formula(&mut self, depth: usize) -> Formula {
        let leaf = depth == 0 || self.rng.random_bool(0.25);
        if leaf {
            return match self.rng.random_range(0..7) {
                0 => Formula::Bottom,
                1 => Formula::top(),
                2 => Formula::atom(PredicateSymbol::new("r", 0), vec![]),
                3 => Formula::atom(PredicateSymbol::new("p", 1), vec![self.object_term()]),
                4 => Formula::atom(
                    PredicateSymbol::new("s", 2),
                    vec![self.object_term(), self.object_term()],
                ),
                5 => Formula::equal(self.object_term(), self.object_term()),
                _ => {
                    let relation = *[
                        Relation::Less,
                        Relation::LessEqual,
                        Relation::NotEqual,
                        Relation::Equal,
                    ]
                    .choose(self.rng)
                    .unwrap();
                    Formula::compare(relation, self.integer_term(), self.integer_term())
                }
            };
        }
        match self.rng.random_range(0..7) {
            0 => Formula::and(self.formula(depth - 1), self.formula(depth - 1)),
            1 => Formula::or(self.formula(depth - 1), self.formula(depth - 1)),
            2 => Formula::implies(self.formula(depth - 1), self.formula(depth - 1)),
            3 => Formula::not(self.formula(depth - 1)),
            4 => Formula::iff(self.formula(depth - 1), self.formula(depth - 1)),
            _ => {
                let sort = if self.rng.random_bool(0.5) {
                    Sort::Object
                } else {
                    Sort::Integer
                };
                let variable = self.variable(sort);
                let quantifier = if self.rng.random_bool(0.5) {
                    Quantifier::Exists
                } else {
                    Quantifier::ForAll
                };
                self.scope.push(variable.clone());
                let body = if self.rng.random_bool(0.5) {
                    // a defining equation, as produced by the translation
                    Formula::and(
                        Formula::equal(Term::var(&variable), self.object_term()),
                        self.formula(depth - 1),
                    )
                } else {
                    self.formula(depth - 1)
                };
                self.scope.pop();
                Formula::quantified(quantifier, variable, body)
            }
        }
    }
}

pub fn random_universe(rng: &mut StdRng) -> BoundedUniverse {
    let constants: Vec<&str> = ["a", "b"]
        .into_iter()
        .filter(|_| rng.random_bool(0.5))
        .collect();
    let lo = rng.random_range(-1..=0);
    let hi = rng.random_range(1..=2);
    BoundedUniverse::new(constants, lo, hi).unwrap()
}
