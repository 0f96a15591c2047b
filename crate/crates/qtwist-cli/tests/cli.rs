use qtwist_cli::{parse_word, run, EXIT_FUEL, EXIT_INPUT, EXIT_OK, EXIT_RESIDUAL};
use serde_json::Value;

fn qt(args: &[&str]) -> (i32, String) {
    let out = run(std::iter::once("qtwist").chain(args.iter().copied()));
    (out.code, out.stdout)
}

#[test]
fn run_examples() {
    assert_eq!(qt(&["verify", "--n", "2", "--suite", "ybe"]).0, EXIT_OK);
    assert_eq!(qt(&["normalize", "--n", "2", "s[4,3]"]), (EXIT_OK, "s[2,1]\n".to_string()));
    let (code, out) = qt(&["basis", "--n", "2", "--degree", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 10);
}

#[test]
fn input_errors() {
    assert_eq!(qt(&["normalize", "--n", "2", "s[1,2]"]).0, EXIT_INPUT);
    assert_eq!(qt(&["normalize", "--n", "2", "s[2,1"]).0, EXIT_INPUT);
    assert_eq!(qt(&["normalize", "--n", "2", "s[2,1] + a[2,1]"]).0, EXIT_INPUT);
    assert_eq!(qt(&["normalize", "--n", "0", "s[2,1]"]).0, EXIT_INPUT);
    assert_eq!(qt(&["verify", "--suite", "nonsense"]).0, EXIT_INPUT);
    assert_eq!(qt(&["braid", "--n", "2", "--word", "3", "s[2,1]"]).0, EXIT_INPUT);
    assert_eq!(qt(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(qt(&["--help"]).0, EXIT_OK);
}

#[test]
fn fuel_exhaustion_reports_the_partial_element() {
    let (code, out) = qt(&["normalize", "--n", "2", "--fuel", "1", "s[3,1]*s[2,1]*s[3,2]"]);
    assert_eq!(code, EXIT_FUEL);
    assert!(out.starts_with("fuel exhausted"));
    let (code, out) = qt(&["--format", "json", "normalize", "--n", "2", "--fuel", "1", "s[3,1]*s[2,1]*s[3,2]"]);
    assert_eq!(code, EXIT_FUEL);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "fuel-exhausted");
    assert!(!v["result"].as_array().unwrap().is_empty());
}

#[test]
fn json_schema() {
    let (code, out) = qt(&["--format", "json", "commutator", "--n", "2", "s[3,1]", "s[2,1]"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["rank", "residuals", "result", "status"]);
    assert_eq!(v["rank"], 2);
    for term in v["result"].as_array().unwrap() {
        assert!(term["coeff"]["num"].is_string() && term["coeff"]["den"].is_string());
        for pair in term["word"].as_array().unwrap() {
            assert_eq!(pair.as_array().unwrap().len(), 2);
        }
    }
}

#[test]
fn verification_residuals_give_exit_one() {
    let (code, out) = qt(&["verify", "--n", "2", "--suite", "serre"]);
    assert_eq!(code, EXIT_RESIDUAL);
    assert!(out.contains("serre-3"));
    assert_eq!(qt(&["verify", "--n", "2", "--suite", "serre", "--variant", "corrected"]).0, EXIT_OK);
    let (_, out) = qt(&["--format", "json", "verify", "--n", "2", "--suite", "psi"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "residual");
    assert!(v["residuals"].as_array().unwrap().iter().any(|r| r["label"] == "psi: e12 e21"));
}

#[test]
fn verify_all_runs_every_suite_in_order() {
    let (code, out) = qt(&["verify", "--n", "2", "--variant", "corrected"]);
    let names: Vec<&str> = out.lines().filter(|l| !l.starts_with(' ')).map(|l| l.split(':').next().unwrap()).collect();
    assert_eq!(names, qtwist_cli::suites::SUITES);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn braid_and_poisson_verbs() {
    assert_eq!(qt(&["braid", "--n", "2", "--word", "1 -1", "s[3,2]"]), (EXIT_OK, "s[3,2]\n".to_string()));
    assert_eq!(
        qt(&["braid", "--n", "2", "--word", "-1,1", "s[2,1]*s[3,2]"]).1,
        qt(&["normalize", "--n", "2", "s[2,1]*s[3,2]"]).1
    );
    assert_eq!(qt(&["braid", "--n", "1", "--word", "1", "s[2,1]"]).0, EXIT_OK);
    assert_eq!(
        qt(&["poisson", "--n", "2", "a[3,1]", "a[2,1]"]),
        (EXIT_OK, "-2*a[2,1]*a[3,1] + 2*a[3,2] - 2*a[4,1]\n".to_string())
    );
    assert_eq!(qt(&["poisson", "--n", "2", "a[4,3]"]), (EXIT_OK, "a[2,1]\n".to_string()));
    assert_eq!(qt(&["normalize", "--n", "2", "B[1]*(q - q^-1) - s[2,1]"]), (EXIT_OK, "0\n".to_string()));
}

#[test]
fn identical_invocations_are_identical() {
    let args = ["--format", "json", "verify", "--n", "2", "--suite", "braid"];
    assert_eq!(qt(&args), qt(&args));
}

#[test]
fn braid_words() {
    assert_eq!(parse_word("1 -2, 3", 3), Ok(vec![1, -2, 3]));
    assert_eq!(parse_word("", 3), Ok(vec![]));
    assert!(parse_word("0", 3).is_err());
    assert!(parse_word("-4", 3).is_err());
    assert!(parse_word("x", 3).is_err());
}
