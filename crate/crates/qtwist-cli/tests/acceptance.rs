//! Acceptance criteria 1 to 12, one line each.
//!
//! Every criterion prints `criterion N: PASS` or `criterion N: FAIL`
//! followed by what was measured. Some criteria fail as stated because a
//! published formula is wrong; for those the line reads FAIL and the
//! harness checks that the failure is exactly the known one (and that the
//! corrected form passes). The process exits nonzero only when an outcome
//! differs from the recorded one.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use qtwist_cli::expr::evaluate;
use qtwist_cli::print::{fmt_element, fmt_poisson};
use qtwist_cli::suites::sample_words;
use qtwist_core::audit::{AuditReport, Residual};
use qtwist_core::braidact::{self, Convention, Variant};
use qtwist_core::classical;
use qtwist_core::crosscheck;
use qtwist_core::freealg::{all_generators, s};
use qtwist_core::pbwengine::{pbw_generators, pbw_monomials, DEFAULT_FUEL};
use qtwist_core::poisson::{self, PoissonAlgebra, PoissonPoly};
use qtwist_core::tensorlab;
use qtwist_core::{Element, Engine, GaussRat, LaurentPoly, RatFunc, Word};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Result of one criterion.
struct Line {
    pass: bool,
    detail: String,
}

/// Labels of the entries of `rep` that do not vanish.
fn failing<T: Residual>(rep: &AuditReport<T>) -> Vec<String> {
    rep.failures().map(|(l, _)| l.clone()).collect()
}

fn within(t: Instant, limit: Duration) -> bool {
    t.elapsed() < limit
}

fn criterion_1() -> Line {
    let t = Instant::now();
    let ok: Vec<bool> = (1..=3).map(tensorlab::check_ybe).collect();
    let fast = within(t, Duration::from_secs(60));
    Line { pass: ok.iter().all(|&b| b) && fast, detail: format!("YBE n=1..3 {ok:?} in {:.2?}", t.elapsed()) }
}

fn random_c(n: usize, rng: &mut StdRng) -> (Vec<GaussRat>, GaussRat) {
    let first = (0..n)
        .map(|_| {
            let re = GaussRat::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            let im = GaussRat::from_ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
            let c = &re + &(&GaussRat::i() * &im);
            if c.is_zero() {
                GaussRat::one()
            } else {
                c
            }
        })
        .collect();
    let lambda = GaussRat::from_ratio(rng.gen_range(1..=12), rng.gen_range(1..=4));
    (first, lambda)
}

fn criterion_2() -> Line {
    let t = Instant::now();
    let mut rng = StdRng::seed_from_u64(2);
    let mut bad = Vec::new();
    for n in 1..=3 {
        if !tensorlab::check_const_reflection(&tensorlab::j_matrix(n), n) {
            bad.push(format!("J n={n}"));
        }
        for sample in 0..5 {
            let (first, lambda) = random_c(n, &mut rng);
            let c = tensorlab::c_matrix(n, &first, &lambda).expect("admissible");
            if !tensorlab::check_const_reflection(&c, n) {
                bad.push(format!("C#{sample} n={n}"));
            }
        }
    }
    Line {
        pass: bad.is_empty() && within(t, Duration::from_secs(60)),
        detail: format!("J and 5 random C per rank, n=1..3, failures {bad:?}, {:.2?}", t.elapsed()),
    }
}

fn criterion_3() -> Line {
    let t = Instant::now();
    let mut counts = Vec::new();
    let mut bad = Vec::new();
    for n in 1..=3 {
        let e = Engine::new(n).expect("engine");
        let rels: Vec<_> = tensorlab::expand_reflection(n).into_iter().chain(tensorlab::expand_central(n)).collect();
        counts.push(rels.len());
        for r in rels {
            if !e.normalize(&r.element).expect("normalize").is_zero() {
                bad.push(format!("n={n} {}", r.index));
            }
        }
    }
    Line {
        pass: bad.is_empty() && within(t, Duration::from_secs(600)),
        detail: format!("{counts:?} relations at n=1..3 normalize to 0, failures {bad:?}, {:.2?}", t.elapsed()),
    }
}

fn criterion_4() -> Line {
    let fwd = crosscheck::quadratic_into_machine(2, true).expect("crosscheck");
    let back = crosscheck::machine_into_quadratic(2, false, true).expect("crosscheck");
    let e = Engine::new(2).expect("engine");
    let printed = crosscheck::central_into_machine(&e, true).expect("crosscheck");
    let corrected = crosscheck::central_into_machine(&e, false).expect("crosscheck");
    let line = Line {
        pass: fwd.is_clean() && back.is_clean() && printed.is_clean(),
        detail: format!(
            "quadratic instances in span {}/{}, quadratic machine relations in instance span {}/{}; \
             closed central relation as printed outside span at {:?}, corrected form {}/{} inside",
            fwd.checked - fwd.discrepancies.len(),
            fwd.checked,
            back.checked - back.discrepancies.len(),
            back.checked,
            printed.discrepancies,
            corrected.checked - corrected.discrepancies.len(),
            corrected.checked,
        ),
    };
    let known = fwd.is_clean()
        && back.is_clean()
        && corrected.is_clean()
        && printed.discrepancies == ["(i,j)=(3,2)", "(i,j)=(4,1)"];
    assert!(known, "criterion 4 changed: {}", line.detail);
    line
}

fn criterion_5() -> Line {
    let mut reports = Vec::new();
    for n in 1..=2 {
        reports.push((n, Engine::new(n).expect("engine").confluence_audit(3, DEFAULT_FUEL)));
    }
    let words = sample_words(3, 600, 3, 5);
    reports.push((3, Engine::new(3).expect("engine").confluence_audit_words(words, DEFAULT_FUEL)));
    let pass = reports.iter().all(|(_, r)| r.is_clean()) && reports[2].1.checked >= 500;
    let detail = reports
        .iter()
        .map(|(n, r)| {
            format!(
                "n={n}: {} words, {} discrepancies, {} out of fuel",
                r.checked,
                r.discrepancies.len(),
                r.fuel_exhausted.len()
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    Line { pass, detail }
}

fn binomial(a: usize, b: usize) -> usize {
    (0..b).fold(1, |acc, k| acc * (a - k) / (k + 1))
}

fn criterion_6() -> Line {
    let mut bad = Vec::new();
    let mut raised = 0;
    for n in 1..=3 {
        for d in 0..=4 {
            let got = pbw_monomials(n, d).len();
            if got != binomial(n * n + d - 1, d) {
                bad.push(format!("count n={n} d={d}: {got}"));
            }
        }
        let span: BTreeSet<Word> = (0..=2).flat_map(|d| pbw_monomials(n, d)).collect();
        let e = Engine::new(n).expect("engine");
        let gens = all_generators(n);
        let mut words = vec![Word::unit()];
        words.extend(gens.iter().map(|&g| Word::from(vec![g])));
        words.extend(gens.iter().flat_map(|&g| gens.iter().map(move |&h| Word::from(vec![g, h]))));
        for w in words {
            let x = e.normalize(&Element::term(w.clone(), RatFunc::one())).expect("normalize");
            if x.terms().all(|(v, _)| span.contains(v)) {
                continue;
            }
            if w.letters().iter().all(|g| g.is_omega1(n)) {
                bad.push(format!("n={n} {}", fmt_element(&Element::term(w, RatFunc::one()))));
            } else {
                raised += 1;
            }
        }
    }
    let line = Line {
        pass: bad.is_empty(),
        detail: format!(
            "counts C(n^2+d-1,d) for n<=3, d<=4; normal forms of basis-generator words of length <=2 in degree <=2, failures {bad:?}; \
             {raised} words with an eliminable letter reach higher degree"
        ),
    };
    // The cubic terms come from eliminating s[6,3] and s[5,3] at n = 3.
    let known = ["n=3 s[5,2]*s[3,1]", "n=3 s[5,2]*s[5,1]", "n=3 s[6,1]*s[3,1]", "n=3 s[6,1]*s[5,1]"];
    assert!(bad == known, "criterion 6 changed: {}", line.detail);
    line
}

fn criterion_7() -> Line {
    let mut limit_bad = Vec::new();
    let mut pairs = 0;
    for n in 2..=3 {
        let e = Engine::new(n).expect("engine");
        let alg = PoissonAlgebra::new(n).expect("poisson");
        for p in pbw_generators(n) {
            for r in pbw_generators(n) {
                pairs += 1;
                let q = classical::classical_structure_from_quantum(&e, p, r).expect("degenerate");
                let f = poisson::bracket_gen(n, p.row as usize, p.col as usize, r.row as usize, r.col as usize)
                    .expect("bracket");
                if q != alg.reduce(&f).expect("reduce") {
                    limit_bad.push(format!("n={n} {p} {r}"));
                }
            }
        }
    }
    let printed: Vec<usize> = (1..=4).filter(|&n| !classical::psi_check(n)).collect();
    let flipped: Vec<usize> = (1..=4).filter(|&n| !classical::psi_check_sign_flipped(n)).collect();
    let line = Line {
        pass: limit_bad.is_empty() && printed.is_empty(),
        detail: format!(
            "classical limit {}/{pairs} pairs at n=2,3; psi as printed fails at n={printed:?}; \
             psi with the e_ji image negated fails at n={flipped:?}",
            pairs - limit_bad.len()
        ),
    };
    assert!(limit_bad.is_empty() && printed == [2, 3, 4] && flipped.is_empty(), "criterion 7 changed: {}", line.detail);
    line
}

fn criterion_8() -> Line {
    let e = Engine::new(3).expect("engine");
    let iota: Vec<_> = braidact::iota_relations(3)
        .into_iter()
        .filter(|(_, x)| !e.normalize(x).expect("normalize").is_zero())
        .map(|(l, _)| l)
        .collect();
    let mut serre = Vec::new();
    let mut residuals = Vec::new();
    for (label, x) in braidact::serre_relations(3, Variant::AsPrinted) {
        let r = e.normalize(&x).expect("normalize");
        if !r.is_zero() {
            residuals.push(format!("{label}: {} terms", r.len()));
            serre.push(label);
        }
    }
    let corrected_clean = braidact::serre_relations(3, Variant::Corrected)
        .into_iter()
        .all(|(_, x)| e.normalize(&x).expect("normalize").is_zero());
    let pass = iota.is_empty() && serre.iter().all(|l| l != "serre-1" && l != "serre-2") && corrected_clean;
    Line {
        pass,
        detail: format!(
            "transported relations at n=3 failing {iota:?}; Serre lines 1-2 vanish; residual report {residuals:?}; corrected lines vanish: {corrected_clean}"
        ),
    }
}

fn criterion_9() -> Line {
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in 2..=3 {
        let e = Engine::new(n).expect("engine");
        for i in 2..=2 * n {
            for j in 1..i {
                checked += 1;
                let x = e.express_sij(i, j).expect("express");
                if e.normalize(&x).expect("normalize") != e.normalize(&s(i, j)).expect("normalize") {
                    bad.push(format!("n={n} ({i},{j})"));
                }
            }
        }
    }
    Line { pass: bad.is_empty(), detail: format!("{checked} generators at n=2,3, failures {bad:?}") }
}

fn criterion_10() -> Line {
    let e3 = Engine::new(3).expect("engine");
    let auto: Vec<String> = (1..=3)
        .flat_map(|k| failing(&braidact::verify_automorphism(&e3, k, Convention::AsPrinted).expect("audit")))
        .collect();
    let inverse = failing(&braidact::verify_inverse(&e3, Convention::AsPrinted).expect("audit"));
    let rel_printed = failing(&braidact::verify_braid_relations(&e3, Convention::AsPrinted).expect("audit"));
    let rel_adjusted = failing(&braidact::verify_braid_relations(&e3, Convention::SignAdjusted).expect("audit"));
    let e4 = Engine::new(4).expect("engine");
    let far: Vec<String> = failing(&braidact::verify_braid_relations(&e4, Convention::AsPrinted).expect("audit"))
        .into_iter()
        .filter(|l| l.split('=').next().is_some_and(|lhs| lhs.matches('b').count() == 2))
        .collect();
    let mut table_printed = Vec::new();
    let mut table_corrected = Vec::new();
    for (n, e) in [(2, Engine::new(2).expect("engine")), (3, e3.clone())] {
        for k in 1..=n {
            for l in failing(&braidact::table_consistency(&e, k, Variant::AsPrinted).expect("table")) {
                table_printed.push(format!("n={n} k={k} {l}"));
            }
            for l in failing(&braidact::table_consistency(&e, k, Variant::Corrected).expect("table")) {
                table_corrected.push(format!("n={n} k={k} {l}"));
            }
        }
    }
    let n = 3;
    let b = |k: i64, x: &Element| braidact::apply_word_with(&e3, &[k], Convention::AsPrinted, x).expect("braid");
    let nf = |x: &Element| e3.normalize(x).expect("normalize");
    let v1 = b(n - 1, &s(5, 3)) == nf(&-s(4, 2));
    let v2 = b(n, &s(5, 2)) == nf(&-s(5, 2));

    let line = Line {
        pass: auto.is_empty() && inverse.is_empty() && rel_printed.is_empty() && far.is_empty() && table_printed.is_empty() && v1 && v2,
        detail: format!(
            "automorphism failures {auto:?}; inverse failures {inverse:?}; braid relations at n=3 fail on {rel_printed:?} \
             (with the sign-adjusted beta_(n-1), beta_n: {rel_adjusted:?}); far commutation at n=4 failures {far:?}; \
             table as printed fails {} rows, corrected table failures {table_corrected:?}; specific values {v1} {v2}",
            table_printed.len()
        ),
    };
    let known_table = [
        "n=2 k=1 s[n+1,n-1] s[3,1]",
        "n=2 k=2 s[n,l] s[2,1]",
        "n=3 k=1 s[k'-1,k] s[5,1]",
        "n=3 k=2 s[n+1,l] s[4,1]",
        "n=3 k=2 s[n+1,n-1] s[4,2]",
        "n=3 k=3 s[n,l] s[3,1]",
        "n=3 k=3 s[n,l] s[3,2]",
        "n=3 k=3 otherwise s[5,1]",
        "n=3 k=3 otherwise s[6,1]",
    ];
    let known = auto.is_empty()
        && inverse.is_empty()
        && rel_printed == ["b1b2b1=b2b1b2 on s_3", "b3b2b3b2=b2b3b2b3 on s_1"]
        && rel_adjusted.is_empty()
        && far.is_empty()
        && table_printed == known_table
        && table_corrected.is_empty()
        && v1
        && v2;
    assert!(known, "criterion 10 changed: {}", line.detail);
    line
}

fn random_basis_poly(n: usize, rng: &mut StdRng) -> PoissonPoly {
    let gens = pbw_generators(n);
    let mut p = PoissonPoly::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut t = PoissonPoly::constant(GaussRat::from_int(rng.gen_range(-3..=3)));
        for _ in 0..rng.gen_range(1..=2) {
            t = &t * &PoissonPoly::var(gens[rng.gen_range(0..gens.len())]);
        }
        p = &p + &t;
    }
    p
}

fn criterion_11() -> Line {
    let alg2 = PoissonAlgebra::new(2).expect("poisson");
    let jac2 = alg2.jacobi_all().expect("jacobi");
    let alg3 = PoissonAlgebra::new(3).expect("poisson");
    let mut rng = StdRng::seed_from_u64(11);
    let mut jac3_bad = 0;
    for _ in 0..200 {
        let (x, y, z) =
            (random_basis_poly(3, &mut rng), random_basis_poly(3, &mut rng), random_basis_poly(3, &mut rng));
        if !alg3.jacobi(&x, &y, &z).expect("jacobi").is_zero() {
            jac3_bad += 1;
        }
    }
    let matrix: Vec<bool> = (1..=3)
        .map(|n| poisson::matrix_form_check(&PoissonAlgebra::new(n).expect("poisson")).expect("matrix form"))
        .collect();
    let mut braid_printed = Vec::new();
    let mut braid_corrected = Vec::new();
    for k in 1..=2 {
        for (variant, out) in [(Variant::AsPrinted, &mut braid_printed), (Variant::Corrected, &mut braid_corrected)] {
            let table = poisson::poisson_braid_table(k, 2, variant).expect("table");
            let rep = poisson::braid_preserves_bracket_check(&alg2, &table).expect("check");
            out.push(failing(&rep).len());
        }
    }
    let e2 = Engine::new(2).expect("engine");
    let rows: Vec<Vec<String>> = (1..=2)
        .map(|k| failing(&poisson::poisson_table_consistency(&alg2, &e2, k, Variant::AsPrinted).expect("table")))
        .collect();
    let line = Line {
        pass: jac2.is_clean() && jac3_bad == 0 && matrix.iter().all(|&b| b) && braid_printed.iter().all(|&c| c == 0),
        detail: format!(
            "Jacobi: {} triples at n=2 clean={}, 200 random triples at n=3 with {jac3_bad} failures; matrix form n=1..3 {matrix:?}; \
             bracket-preservation failures per k at n=2, table as printed {braid_printed:?} (rows off the quantum action {rows:?}), \
             corrected {braid_corrected:?}",
            jac2.len(),
            jac2.is_clean()
        ),
    };
    let known = jac2.is_clean()
        && jac3_bad == 0
        && matrix == [true, true, true]
        && braid_printed[0] > 0
        && braid_printed[1] == 0
        && braid_corrected == [0, 0]
        && rows == [vec!["s[3,1]".to_string()], vec![]];
    assert!(known, "criterion 11 changed: {}", line.detail);
    line
}

fn run_bin(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qtwist")).args(args).output().expect("run qtwist");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn random_gauss(rng: &mut StdRng) -> GaussRat {
    let re = GaussRat::from_ratio(rng.gen_range(-20..=20), rng.gen_range(1..=7));
    let im = if rng.gen_bool(0.3) {
        GaussRat::from_ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3))
    } else {
        GaussRat::zero()
    };
    &re + &(&GaussRat::i() * &im)
}

fn random_laurent(rng: &mut StdRng) -> LaurentPoly {
    LaurentPoly::from_terms(
        (0..rng.gen_range(1..=3)).map(|_| (rng.gen_range(-4..=4), random_gauss(rng))).collect::<Vec<_>>(),
    )
}

fn random_ratfunc(rng: &mut StdRng) -> RatFunc {
    let num = random_laurent(rng);
    let den = if rng.gen_bool(0.3) { random_laurent(rng) } else { LaurentPoly::one() };
    RatFunc::new(num, if den.is_zero() { LaurentPoly::one() } else { den }).expect("nonzero denominator")
}

fn random_element(n: usize, rng: &mut StdRng) -> Element {
    let gens = all_generators(n);
    let mut x = Element::zero();
    for _ in 0..rng.gen_range(0..=4) {
        let w: Vec<_> = (0..rng.gen_range(0..=3)).map(|_| gens[rng.gen_range(0..gens.len())]).collect();
        x.add_term(Word::from(w), random_ratfunc(rng));
    }
    x
}

fn criterion_12() -> Line {
    let ybe = run_bin(&["verify", "--n", "2", "--suite", "ybe"]);
    let norm = run_bin(&["normalize", "--n", "2", "s[4,3]"]);
    let basis = run_bin(&["basis", "--n", "2", "--degree", "2"]);
    let examples = ybe.0 == 0 && norm == (0, "s[2,1]\n".to_string()) && basis.0 == 0 && basis.1.lines().count() == 10;

    let mut rng = StdRng::seed_from_u64(12);
    let mut bad = Vec::new();
    for t in 0..1000 {
        let n = 1 + t % 3;
        let x = random_element(n, &mut rng);
        let text = fmt_element(&x);
        let back = evaluate(&text, n).and_then(|v| v.into_element());
        if back.as_ref() != Ok(&x) {
            bad.push(text);
        }
    }
    let mut poisson_bad = Vec::new();
    for _ in 0..100 {
        let p = random_basis_poly(3, &mut rng);
        let text = fmt_poisson(&p);
        if evaluate(&text, 3).and_then(|v| v.into_poisson()).as_ref() != Ok(&p) {
            poisson_bad.push(text);
        }
    }
    Line {
        pass: examples && bad.is_empty() && poisson_bad.is_empty(),
        detail: format!(
            "ybe exit {}; normalize exit {} output {:?}; basis exit {} with {} monomials; round trip failures {}/1000 elements, {}/100 Poisson polynomials",
            ybe.0,
            norm.0,
            norm.1.trim_end(),
            basis.0,
            basis.1.lines().count(),
            bad.len(),
            poisson_bad.len()
        ),
    }
}

fn main() {
    // Recorded outcomes: criteria 4, 6, 7, 10 and 11 fail as stated.
    let expected = [true, true, true, false, true, false, false, true, true, false, false, true];
    let criteria: [fn() -> Line; 12] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
        criterion_12,
    ];
    let mut unexpected = Vec::new();
    for (k, f) in criteria.iter().enumerate() {
        let t = Instant::now();
        let line = f();
        println!(
            "criterion {}: {} ({:.2?}) {}",
            k + 1,
            if line.pass { "PASS" } else { "FAIL" },
            t.elapsed(),
            line.detail
        );
        if line.pass != expected[k] {
            unexpected.push(k + 1);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("outcome differs from the recorded one for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
