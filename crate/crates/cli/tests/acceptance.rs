//! One pass/fail line per acceptance criterion.
//!
//! The two criteria that need an external TPTP prover only run when
//! `TIGHTVERIFY_PROVER` names an existing executable.

mod support;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use indexmap::IndexMap;
use rand::{rngs::StdRng, SeedableRng};
use support::*;
use tightverify_core::{
    analysis::{is_tight, uses_private_recursion},
    completion::{comp, complete, complete_with, CompletionOptions, IoProgram},
    logic::{alpha_equivalent, alpha_equivalent_ignoring_sorts},
    oracle::{
        completion_models, equivalent_bounded, eval_second_order, instantiate, io_models,
        stable_models, AtomSet, BoundedInterpretation, BoundedUniverse, GroundAtom, Input,
        Valuation,
    },
    parse_program,
    simplify::simplify,
    spec::parse_formula,
    translate::{tau_star, DivisionGuard},
    Formula, PredicateSymbol, Sort,
};

type Check = fn() -> Result<String, String>;

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn placeholders() -> IndexMap<String, Sort> {
    IndexMap::from([("n".to_string(), Sort::Integer)])
}

fn formula(text: &str) -> Formula {
    parse_formula(text, &placeholders()).unwrap_or_else(|e| panic!("{text}: {e}"))
}

const EXACT_COVER_COMPLETION: [&str; 4] = [
    "forall X (covered(X) <-> exists N (in_cover(N) and s(X, N)))",
    "forall X (in_cover(X) <-> in_cover(X) and exists N (1 <= N and N <= n and X = N))",
    "forall N1, N2, X not (N1 != N2 and in_cover(N1) and in_cover(N2) and s(X, N1) and s(X, N2))",
    "forall X, N not (s(X, N) and not covered(X))",
];

fn completion_of_exact_cover() -> Result<String, String> {
    let output = tightverify(&[
        "complete",
        fixture("exact_cover.lp").to_str().unwrap(),
        fixture("exact_cover.spec").to_str().unwrap(),
    ]);
    ensure(output.status.success(), || {
        format!("exit status {}", output.status)
    })?;
    let printed: Vec<Formula> = stdout(&output).lines().map(formula).collect();
    ensure(printed.len() == 4, || {
        format!("{} formulas printed", printed.len())
    })?;
    for expected in EXACT_COVER_COMPLETION {
        let expected_formula = formula(expected);
        ensure(
            printed
                .iter()
                .any(|f| alpha_equivalent_ignoring_sorts(f, &expected_formula)),
            || format!("no printed formula matches `{expected}`"),
        )?;
    }
    let unsimplified = complete_with(
        &exact_cover(),
        CompletionOptions {
            division_guard: DivisionGuard::Quotient,
            keep_private_symbols: true,
        },
    )
    .conjuncts();
    let universe = BoundedUniverse::new(["a", "b", "c"], -1, 5).unwrap();
    for (printed, original) in printed.iter().zip(&unsimplified) {
        let equivalent =
            equivalent_bounded(printed, original, &universe).map_err(|e| e.to_string())?;
        ensure(equivalent, || {
            format!("`{printed}` differs from `{original}`")
        })?;
    }
    Ok("4/4 formulas match; all equivalent to the unsimplified completion".into())
}

fn tau_star_of_interval_program() -> Result<String, String> {
    let program = parse_program("{p(1..3)}.\nq(X+1) :- p(X).").unwrap();
    let expected = [
        "#true -> forall Z (exists I, J, K (I = 1 and J = 3 and I <= K and K <= J and Z = K) -> p(Z) or not p(Z))",
        "forall X (exists Z (Z = X and p(Z)) -> forall Z (exists I, J (Z = I + J and I = X and J = 1) -> q(Z)))",
    ];
    let sentences = tau_star(&program);
    ensure(sentences.len() == 2, || {
        format!("{} sentences", sentences.len())
    })?;
    for (sentence, expected) in sentences.iter().zip(expected) {
        ensure(alpha_equivalent(sentence, &formula(expected)), || {
            format!("`{sentence}` is not `{expected}`")
        })?;
    }
    Ok("both sentences match".into())
}

fn exact_cover_universe() -> BoundedUniverse {
    BoundedUniverse::new(["a", "b", "c"], 0, 4).unwrap()
}

fn exact_cover_io_models() -> Result<String, String> {
    let io = exact_cover();
    let input = exact_cover_input();
    let universe = exact_cover_universe();
    let models = io_models(&io, &input, &universe).map_err(|e| e.to_string())?;
    ensure(models == BTreeSet::from([exact_cover_io_model()]), || {
        format!("io-models {models:?}")
    })?;
    let mut expected = exact_cover_io_model();
    for x in ["a", "b", "c"] {
        expected.insert(GroundAtom::new("covered", vec![sym(x)]));
    }
    let stable = stable_models(&instantiate(&io, &input), &universe).map_err(|e| e.to_string())?;
    ensure(stable == BTreeSet::from([expected]), || {
        format!("stable models {stable:?}")
    })?;
    Ok("one io-model, one stable model".into())
}

fn interpretation(
    universe: &BoundedUniverse,
    valuation: &Valuation,
    atoms: AtomSet,
) -> BoundedInterpretation {
    BoundedInterpretation {
        universe: universe.clone(),
        valuation: valuation.clone(),
        atoms,
    }
}

/// Public atoms `I` with `I^in = i` at which `COMP(Ω)` holds, by enumerating
/// the output atoms of the universe.
fn completion_models_by_enumeration(
    io: &IoProgram,
    input: &Input,
    universe: &BoundedUniverse,
) -> Result<BTreeSet<AtomSet>, String> {
    let sentence = comp(io);
    let mut output_atoms = Vec::new();
    for symbol in &io.outputs {
        let tuples = (0..symbol.arity).fold(vec![Vec::new()], |tuples, _| {
            tuples
                .iter()
                .flat_map(|t| {
                    universe.objects().into_iter().map(move |x| {
                        let mut t = t.clone();
                        t.push(x);
                        t
                    })
                })
                .collect()
        });
        output_atoms.extend(
            tuples
                .into_iter()
                .map(|t| GroundAtom::new(symbol.name.clone(), t)),
        );
    }
    let mut models = BTreeSet::new();
    for outputs in subsets(&output_atoms) {
        let mut atoms = input.atoms.clone();
        atoms.extend(outputs);
        let m = interpretation(universe, &input.valuation, atoms.clone());
        if eval_second_order(&sentence, &m).map_err(|e| e.to_string())? {
            models.insert(atoms);
        }
    }
    Ok(models)
}

const CORPUS_SEED: u64 = 0x5eed;
const CORPUS_SIZE: usize = 60;

fn io_models_equal_completion_models() -> Result<String, String> {
    let mut instances = vec![Instance {
        text: read_fixture("exact_cover.lp"),
        io: exact_cover(),
        input: exact_cover_input(),
        universe: exact_cover_universe(),
    }];
    instances.extend(tight_corpus(
        &mut StdRng::seed_from_u64(CORPUS_SEED),
        CORPUS_SIZE,
    ));
    for instance in &instances {
        let expected = io_models(&instance.io, &instance.input, &instance.universe)
            .map_err(|e| e.to_string())?;
        let enumerated =
            completion_models_by_enumeration(&instance.io, &instance.input, &instance.universe)?;
        ensure(enumerated == expected, || {
            format!(
                "program\n{}io-models {expected:?}\ncompletion models {enumerated:?}",
                instance.text
            )
        })?;
        let solved = completion_models(
            &instance.io,
            &instance.input,
            &instance.universe,
            DivisionGuard::Quotient,
        )
        .map_err(|e| e.to_string())?;
        ensure(solved == expected, || {
            format!(
                "program\n{}solver completion models {solved:?}",
                instance.text
            )
        })?;
    }
    Ok(format!("{} programs, no discrepancies", instances.len()))
}

fn existential_and_universal_completion_agree() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(CORPUS_SEED);
    let corpus = tight_corpus(&mut rng, CORPUS_SIZE);
    let mut evaluations = 0;
    for instance in &corpus {
        let completion = complete(&instance.io);
        let existential = completion.sentence();
        let universal = completion.universal_sentence().map_err(|e| e.to_string())?;
        let public: Vec<GroundAtom> = instance
            .universe
            .objects()
            .into_iter()
            .flat_map(|x| {
                [
                    GroundAtom::new("e", vec![x.clone()]),
                    GroundAtom::new("p", vec![x]),
                ]
            })
            .collect();
        for _ in 0..20 {
            let sample = random_input(&mut rng, &instance.universe);
            let atoms = public
                .iter()
                .filter(|_| rand::RngExt::random_bool(&mut rng, 0.4))
                .cloned()
                .collect();
            let m = interpretation(&instance.universe, &sample.valuation, atoms);
            let e = eval_second_order(&existential, &m).map_err(|e| e.to_string())?;
            let u = eval_second_order(&universal, &m).map_err(|e| e.to_string())?;
            ensure(e == u, || {
                format!(
                    "program\n{}disagree at {:?}: existential {e}, universal {u}",
                    instance.text, m.atoms
                )
            })?;
            evaluations += 1;
        }
    }
    Ok(format!(
        "{} programs, {evaluations} interpretations",
        corpus.len()
    ))
}

struct AnalysisCase {
    name: &'static str,
    program: &'static str,
    inputs: &'static [(&'static str, usize)],
    outputs: &'static [(&'static str, usize)],
    tight: bool,
    private_recursion: bool,
}

const ANALYSIS_CASES: [AnalysisCase; 12] = [
    AnalysisCase {
        name: "positive self-loop",
        program: "p(X) :- p(X).",
        inputs: &[],
        outputs: &[("p", 1)],
        tight: false,
        private_recursion: false,
    },
    AnalysisCase {
        name: "negative-only cycle",
        program: "p :- not q. q :- not p.",
        inputs: &[],
        outputs: &[("p", 0), ("q", 0)],
        tight: true,
        private_recursion: false,
    },
    AnalysisCase {
        name: "private choice",
        program: "{q(X)} :- e(X). p(X) :- q(X).",
        inputs: &[("e", 1)],
        outputs: &[("p", 1)],
        tight: true,
        private_recursion: true,
    },
    AnalysisCase {
        name: "private cycle",
        program: "q :- not r. r :- not q. p :- q.",
        inputs: &[],
        outputs: &[("p", 0)],
        tight: true,
        private_recursion: true,
    },
    AnalysisCase {
        name: "exact cover",
        program: "{in_cover(1..n)}.
:- I != J, in_cover(I), in_cover(J), s(X,I), s(X,J).
covered(X) :- in_cover(I), s(X,I).
:- s(X,I), not covered(X).",
        inputs: &[("s", 2)],
        outputs: &[("in_cover", 1)],
        tight: true,
        private_recursion: false,
    },
    AnalysisCase {
        name: "floor square root",
        program: "p(X) :- X = 0..n, X * X <= n. q(X) :- p(X), not p(X + 1).",
        inputs: &[],
        outputs: &[("q", 1)],
        tight: true,
        private_recursion: false,
    },
    AnalysisCase {
        name: "public positive cycle",
        program: "p(X) :- q(X). q(X) :- p(X).",
        inputs: &[],
        outputs: &[("p", 1), ("q", 1)],
        tight: false,
        private_recursion: false,
    },
    AnalysisCase {
        name: "double negation is not a positive edge",
        program: "p :- not not p.",
        inputs: &[],
        outputs: &[("p", 0)],
        tight: true,
        private_recursion: false,
    },
    AnalysisCase {
        name: "private negative self-loop",
        program: "q :- not q. p :- q.",
        inputs: &[],
        outputs: &[("p", 0)],
        tight: true,
        private_recursion: true,
    },
    AnalysisCase {
        name: "positive cycle through a public symbol",
        program: "p :- q. q :- p.",
        inputs: &[],
        outputs: &[("p", 0)],
        tight: false,
        private_recursion: false,
    },
    AnalysisCase {
        name: "private chain",
        program: "r(X) :- e(X). q(X) :- r(X), not e(X+1). p(X) :- q(X).",
        inputs: &[("e", 1)],
        outputs: &[("p", 1)],
        tight: true,
        private_recursion: false,
    },
    AnalysisCase {
        name: "exact cover with private choice",
        program: "{in_cover(1..n)}.
covered(X) :- in_cover(I), s(X,I).
:- s(X,I), not covered(X).",
        inputs: &[("s", 2)],
        outputs: &[("covered", 1)],
        tight: true,
        private_recursion: true,
    },
];

fn symbols(list: &[(&str, usize)]) -> indexmap::IndexSet<PredicateSymbol> {
    list.iter()
        .map(|(n, a)| PredicateSymbol::new(*n, *a))
        .collect()
}

fn analysis_verdicts() -> Result<String, String> {
    let mut correct = 0;
    let mut wrong = Vec::new();
    for case in &ANALYSIS_CASES {
        let io = IoProgram::new(
            parse_program(case.program).unwrap(),
            placeholders(),
            symbols(case.inputs),
            symbols(case.outputs),
        )
        .unwrap();
        if is_tight(&io) == case.tight && uses_private_recursion(&io) == case.private_recursion {
            correct += 1;
        } else {
            wrong.push(case.name);
        }
    }
    ensure(wrong.is_empty(), || {
        format!("wrong verdicts: {}", wrong.join(", "))
    })?;
    Ok(format!("{correct}/{} verdicts", ANALYSIS_CASES.len()))
}

fn simplifier_soundness() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(7);
    let mut checks = 0;
    for _ in 0..500 {
        let f = FormulaGenerator::new(&mut rng).formula(4);
        let simplified = simplify(&f);
        ensure(simplify(&simplified) == simplified, || {
            format!("not idempotent on `{f}`: `{simplified}`")
        })?;
        for _ in 0..3 {
            let universe = random_universe(&mut rng);
            let equivalent =
                equivalent_bounded(&f, &simplified, &universe).map_err(|e| e.to_string())?;
            ensure(equivalent, || {
                format!("`{f}` and `{simplified}` differ on {universe}")
            })?;
            checks += 1;
        }
    }
    Ok(format!("500 formulas, {checks} equivalence checks"))
}

fn io_models_satisfy_the_completion() -> Result<String, String> {
    let mut instances = vec![Instance {
        text: read_fixture("exact_cover.lp"),
        io: exact_cover(),
        input: exact_cover_input(),
        universe: exact_cover_universe(),
    }];
    instances.extend(tight_corpus(
        &mut StdRng::seed_from_u64(CORPUS_SEED),
        CORPUS_SIZE,
    ));
    let universe = BoundedUniverse::new(["a"], 0, 3).unwrap();
    let non_tight = [
        ("p :- p.", &[("p", 0)][..]),
        ("p(X) :- q(X). q(X) :- p(X). {p(1)}.", &[("p", 1), ("q", 1)]),
        ("{p}. q :- r. r :- q. r :- p.", &[("p", 0)]),
        ("p(1). q(X) :- p(X), q(X+1). q(2) :- not p(2).", &[("q", 1)]),
    ];
    for (text, outputs) in non_tight {
        let io = IoProgram::new(
            parse_program(text).unwrap(),
            placeholders(),
            Default::default(),
            symbols(outputs),
        )
        .unwrap();
        instances.push(Instance {
            text: text.into(),
            io,
            input: Input {
                valuation: Valuation::from([("n".to_string(), num(1))]),
                atoms: AtomSet::new(),
            },
            universe: universe.clone(),
        });
    }
    let mut models = 0;
    for instance in &instances {
        let sentence = comp(&instance.io);
        for model in io_models(&instance.io, &instance.input, &instance.universe)
            .map_err(|e| e.to_string())?
        {
            let m = interpretation(&instance.universe, &instance.input.valuation, model);
            ensure(
                eval_second_order(&sentence, &m).map_err(|e| e.to_string())?,
                || {
                    format!(
                        "program\n{}io-model {:?} violates the completion",
                        instance.text, m.atoms
                    )
                },
            )?;
            models += 1;
        }
    }
    Ok(format!(
        "{models} io-models of {} programs",
        instances.len()
    ))
}

fn configured_prover() -> Option<std::path::PathBuf> {
    let path = std::path::PathBuf::from(std::env::var_os("TIGHTVERIFY_PROVER")?);
    path.is_file().then_some(path)
}

fn verify(files: &[&str], extra: &[&str]) -> std::process::Output {
    let prover = configured_prover().expect("prover configured");
    let mut args = vec!["verify".to_string()];
    args.extend(
        files
            .iter()
            .map(|f| fixture(f).to_str().unwrap().to_string()),
    );
    args.extend(["--prover-path".into(), prover.to_str().unwrap().into()]);
    args.extend(extra.iter().map(|s| s.to_string()));
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    tightverify(&args)
}

fn exact_cover_verification() -> Result<String, String> {
    let output = verify(&["exact_cover.lp", "exact_cover.spec"], &[]);
    ensure(output.status.code() == Some(0), || stdout(&output))?;
    Ok("verified".into())
}

fn floor_sqrt_verification() -> Result<String, String> {
    let output = verify(
        &[
            "floor_sqrt.lp",
            "floor_sqrt.spec",
            "floor_sqrt_axiom.spec",
            "floor_sqrt_lemmas.spec",
        ],
        &[],
    );
    ensure(output.status.code() == Some(0), || stdout(&output))?;
    let without_axiom = verify(
        &["floor_sqrt.lp", "floor_sqrt.spec", "floor_sqrt_lemmas.spec"],
        &["--direction", "forward"],
    );
    ensure(without_axiom.status.code() != Some(0), || {
        "forward direction verified without the induction axiom".into()
    })?;
    Ok("verified; forward direction incomplete without the axiom".into())
}

struct Criterion {
    number: u32,
    title: &'static str,
    limit: Duration,
    needs_prover: bool,
    check: Check,
}

fn main() {
    let criteria = [
        Criterion {
            number: 1,
            title: "completion of the exact cover program",
            limit: Duration::from_secs(5),
            needs_prover: false,
            check: completion_of_exact_cover,
        },
        Criterion {
            number: 2,
            title: "tau* of the interval example",
            limit: Duration::from_secs(1),
            needs_prover: false,
            check: tau_star_of_interval_program,
        },
        Criterion {
            number: 3,
            title: "io-model of the exact cover instance",
            limit: Duration::from_secs(30),
            needs_prover: false,
            check: exact_cover_io_models,
        },
        Criterion {
            number: 4,
            title: "io-models equal completion models on tight programs",
            limit: Duration::from_secs(600),
            needs_prover: false,
            check: io_models_equal_completion_models,
        },
        Criterion {
            number: 5,
            title: "existential and universal completion agree",
            limit: Duration::from_secs(600),
            needs_prover: false,
            check: existential_and_universal_completion_agree,
        },
        Criterion {
            number: 6,
            title: "tightness and private recursion verdicts",
            limit: Duration::from_secs(60),
            needs_prover: false,
            check: analysis_verdicts,
        },
        Criterion {
            number: 7,
            title: "simplifier soundness and idempotence",
            limit: Duration::from_secs(300),
            needs_prover: false,
            check: simplifier_soundness,
        },
        Criterion {
            number: 8,
            title: "exact cover verification",
            limit: Duration::from_secs(600),
            needs_prover: true,
            check: exact_cover_verification,
        },
        Criterion {
            number: 9,
            title: "floor square root verification",
            limit: Duration::from_secs(3600),
            needs_prover: true,
            check: floor_sqrt_verification,
        },
        Criterion {
            number: 10,
            title: "io-models satisfy the completion",
            limit: Duration::from_secs(600),
            needs_prover: false,
            check: io_models_satisfy_the_completion,
        },
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failures = 0;
    for criterion in &criteria {
        let label = format!("criterion {:>2}: {}", criterion.number, criterion.title);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        if criterion.needs_prover && configured_prover().is_none() {
            println!("{label} ... SKIP (requires an external TPTP prover; set TIGHTVERIFY_PROVER)");
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(criterion.check))
            .unwrap_or_else(|panic| {
                let message = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {message}"))
            })
            .and_then(|detail| {
                let elapsed = start.elapsed();
                if elapsed > criterion.limit {
                    Err(format!("took {elapsed:.1?}, limit {:?}", criterion.limit))
                } else {
                    Ok(detail)
                }
            });
        let elapsed = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("{label} ... PASS ({detail}) [{elapsed:.2} s]"),
            Err(reason) => {
                failures += 1;
                println!(
                    "{label} ... FAIL [{elapsed:.2} s]\n    {}",
                    reason.replace('\n', "\n    ")
                );
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
