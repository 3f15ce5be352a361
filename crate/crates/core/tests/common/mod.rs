//! Proptest strategies for programs and formulas.

#![allow(dead_code)]

use indexmap::IndexMap;
use proptest::prelude::*;
use tightverify_core::{
    logic::{ArithmeticOperator, Quantifier},
    syntax::Relation,
    Formula, PredicateSymbol, PredicateVariable, Sort, Term, Variable,
};

pub fn placeholders() -> IndexMap<String, Sort> {
    IndexMap::from([("n".to_string(), Sort::Integer)])
}

fn program_term() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec![
        "X", "Y", "0", "1", "2", "a", "X+1", "1..2", "X*2", "-X", "X/2", "X\\2", "X-Y", "#inf",
        "#sup",
    ])
}

fn program_atom() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("r".to_string()),
        program_term().prop_map(|t| format!("p({t})")),
        program_term().prop_map(|t| format!("q({t})")),
    ]
}

fn body_item() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => (prop::sample::select(vec!["", "not ", "not not "]), program_atom())
            .prop_map(|(sign, atom)| format!("{sign}{atom}")),
        1 => (program_term(), prop::sample::select(vec!["=", "!=", "<", "<=", ">", ">="]), program_term())
            .prop_map(|(l, r, t)| format!("{l} {r} {t}")),
    ]
}

fn rule() -> impl Strategy<Value = String> {
    let head = prop_oneof![
        2 => program_atom(),
        1 => program_atom().prop_map(|a| format!("{{{a}}}")),
        1 => Just(String::new()),
    ];
    (head, prop::collection::vec(body_item(), 0..3)).prop_map(|(head, body)| {
        if body.is_empty() && head.is_empty() {
            ":- r.".to_string()
        } else if body.is_empty() {
            format!("{head}.")
        } else {
            format!("{head} :- {}.", body.join(", "))
        }
    })
}

/// Program texts with up to `max_rules` rules over `p/1`, `q/1` and `r/0`.
pub fn program_text(max_rules: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(rule(), 1..=max_rules).prop_map(|rules| rules.join("\n"))
}

fn variable(sort: Sort) -> impl Strategy<Value = Variable> {
    let names = match sort {
        Sort::Object => vec!["X", "Y"],
        Sort::Integer => vec!["N", "M"],
    };
    prop::sample::select(names).prop_map(move |name| Variable::new(name, sort))
}

fn integer_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (-1i64..=2).prop_map(Term::numeral),
        Just(Term::Placeholder {
            name: "n".into(),
            sort: Sort::Integer,
        }),
        variable(Sort::Integer).prop_map(|v| Term::var(&v)),
    ];
    leaf.prop_recursive(2, 4, 2, |inner| {
        (
            prop::sample::select(vec![
                ArithmeticOperator::Add,
                ArithmeticOperator::Subtract,
                ArithmeticOperator::Multiply,
            ]),
            inner.clone(),
            inner,
        )
            .prop_map(|(op, l, r)| Term::arithmetic(op, l, r).unwrap())
    })
}

fn object_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        prop::sample::select(vec!["a", "b"]).prop_map(Term::symbol),
        variable(Sort::Object).prop_map(|v| Term::var(&v)),
        integer_term(),
    ]
}

fn leaf_formula(predicate_variable: bool) -> BoxedStrategy<Formula> {
    let mut leaves = vec![
        Just(Formula::Bottom).boxed(),
        Just(Formula::top()).boxed(),
        Just(Formula::atom(PredicateSymbol::new("r", 0), vec![])).boxed(),
        object_term()
            .prop_map(|t| Formula::atom(PredicateSymbol::new("p", 1), vec![t]))
            .boxed(),
        (object_term(), object_term())
            .prop_map(|(a, b)| Formula::atom(PredicateSymbol::new("s", 2), vec![a, b]))
            .boxed(),
        (object_term(), object_term())
            .prop_map(|(a, b)| Formula::equal(a, b))
            .boxed(),
        (
            prop::sample::select(vec![
                Relation::Less,
                Relation::LessEqual,
                Relation::NotEqual,
                Relation::Greater,
            ]),
            integer_term(),
            integer_term(),
        )
            .prop_map(|(r, a, b)| Formula::compare(r, a, b))
            .boxed(),
    ];
    if predicate_variable {
        leaves.push(
            object_term()
                .prop_map(|t| Formula::Atom {
                    predicate: tightverify_core::Predicate::Variable(PredicateVariable::new(
                        "P", 1,
                    )),
                    arguments: vec![t],
                })
                .boxed(),
        );
    }
    prop::strategy::Union::new(leaves).boxed()
}

fn formula_with(predicate_variable: bool) -> impl Strategy<Value = Formula> {
    leaf_formula(predicate_variable).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (
                prop::bool::ANY,
                prop_oneof![variable(Sort::Object), variable(Sort::Integer)],
                object_term(),
                inner.clone(),
                prop::bool::ANY,
            )
                .prop_map(|(universal, v, t, body, defining)| {
                    let quantifier = if universal {
                        Quantifier::ForAll
                    } else {
                        Quantifier::Exists
                    };
                    let body = if defining {
                        Formula::and(Formula::equal(Term::var(&v), t), body)
                    } else {
                        body
                    };
                    Formula::quantified(quantifier, v, body)
                }),
        ]
    })
}

/// Two-sorted formulas over `p/1`, `r/0`, `s/2` and the placeholder `n`.
pub fn formula() -> impl Strategy<Value = Formula> {
    formula_with(false)
}

/// As [`formula`], additionally mentioning the predicate variable `P/1`.
pub fn formula_with_predicate_variable() -> impl Strategy<Value = Formula> {
    formula_with(true)
}
