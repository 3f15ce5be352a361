//! End-to-end verification with a real TPTP prover named by `TIGHTVERIFY_PROVER`.

mod support;

use support::*;

fn verify(files: &[&str], extra: &[&str]) -> std::process::Output {
    let prover = std::env::var("TIGHTVERIFY_PROVER").expect("TIGHTVERIFY_PROVER names a prover");
    let mut args = vec!["verify".to_string()];
    args.extend(
        files
            .iter()
            .map(|f| fixture(f).to_str().unwrap().to_string()),
    );
    args.extend(["--prover-path".to_string(), prover]);
    args.extend(extra.iter().map(|s| s.to_string()));
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    tightverify(&args)
}

#[test]
#[ignore = "requires an external TPTP prover named by TIGHTVERIFY_PROVER"]
fn exact_cover_is_verified() {
    let output = verify(&["exact_cover.lp", "exact_cover.spec"], &[]);
    assert_eq!(output.status.code(), Some(0), "{}", stdout(&output));
}

#[test]
#[ignore = "requires an external TPTP prover named by TIGHTVERIFY_PROVER"]
fn floor_sqrt_is_verified_with_axiom_and_lemmas() {
    let output = verify(
        &[
            "floor_sqrt.lp",
            "floor_sqrt.spec",
            "floor_sqrt_axiom.spec",
            "floor_sqrt_lemmas.spec",
        ],
        &[],
    );
    assert_eq!(output.status.code(), Some(0), "{}", stdout(&output));
}

#[test]
#[ignore = "requires an external TPTP prover named by TIGHTVERIFY_PROVER"]
fn floor_sqrt_forward_direction_needs_the_axiom() {
    let output = verify(
        &["floor_sqrt.lp", "floor_sqrt.spec", "floor_sqrt_lemmas.spec"],
        &["--direction", "forward"],
    );
    assert_ne!(output.status.code(), Some(0), "{}", stdout(&output));
}
