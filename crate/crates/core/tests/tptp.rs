mod common;

use common::*;
use proptest::prelude::*;
use tightverify_core::{
    oracle::{eval_formula, BoundedInterpretation, BoundedUniverse, Valuation},
    tptp::{emit_formula, emit_task, standard_axioms, ProofTask, Signature},
    Formula, Precomputed,
};

fn balanced(text: &str) -> bool {
    let mut depth = 0i64;
    for c in text.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

proptest! {
    #[test]
    fn closed_formulas_are_emitted(f in formula().prop_map(|f| f.universal_closure())) {
        let signature = Signature::of([&f]);
        let text = emit_formula(&f, &signature).unwrap();
        prop_assert!(balanced(&text), "{}", text);
        let task = ProofTask {
            name: "t".into(),
            axioms: vec![("axiom_1".into(), f.clone())],
            conjecture: ("conjecture_t".into(), f),
        };
        let emitted = emit_task(&task).unwrap();
        prop_assert_eq!(emit_task(&task).unwrap(), emitted.clone());
        prop_assert!(emitted.lines().all(|l| l.starts_with('%') || l.starts_with("tff(")));
    }

    #[test]
    fn standard_axioms_hold_in_bounded_universes(
        f in formula().prop_map(|f| f.universal_closure()),
        lo in -2i64..=0,
        hi in 0i64..=2,
    ) {
        let signature = Signature::of([&f]);
        let universe = BoundedUniverse::new(["a", "b"], lo, hi).unwrap().with_extremes(true, true);
        let m = BoundedInterpretation {
            universe,
            valuation: Valuation::from([("n".to_string(), Precomputed::Numeral(0))]),
            atoms: Default::default(),
        };
        for axiom in standard_axioms(&signature) {
            prop_assert!(eval_formula(&axiom, &m).unwrap(), "{}", axiom);
        }
    }
}

#[test]
fn open_formulas_are_rejected() {
    let x = tightverify_core::Variable::object("X");
    let open = Formula::equal(
        tightverify_core::Term::var(&x),
        tightverify_core::Term::symbol("a"),
    );
    assert!(emit_formula(&open, &Signature::of([&open])).is_err());
}
