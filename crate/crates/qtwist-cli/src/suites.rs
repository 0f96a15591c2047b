//! Verification suites behind `verify --suite`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use qtwist_core::audit::{AuditReport, Residual};
use qtwist_core::braidact::{self, Convention, Variant};
use qtwist_core::classical::{self, PsiVariant};
use qtwist_core::freealg::{all_generators, s};
use qtwist_core::pbwengine::pbw_generators;
use qtwist_core::poisson::{self, PoissonAlgebra};
use qtwist_core::tensorlab;
use qtwist_core::{Element, Engine, Error, GaussRat, Word};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::print::{fmt_element, fmt_poisson, fmt_word};

/// Suite names in the order `verify --suite all` runs them.
pub const SUITES: [&str; 13] = [
    "ybe",
    "reflection",
    "relations",
    "central",
    "confluence",
    "serre",
    "iserre",
    "braid",
    "jacobi",
    "matrix-form",
    "poisson-braid",
    "classical-limit",
    "psi",
];

/// Number of random words checked by the confluence suite from rank 3 on.
pub const CONFLUENCE_SAMPLE: usize = 500;

/// Outcome of one suite: how many checks ran and which ones left a residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: String,
    pub checked: usize,
    pub residuals: Vec<(String, String)>,
}

impl SuiteResult {
    pub fn is_clean(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Shared state for a run: the rank, the variant and lazily built engines.
pub struct Context {
    pub n: usize,
    pub fuel: u64,
    pub variant: Variant,
    engine: Option<Engine>,
    poisson: Option<PoissonAlgebra>,
}

impl Context {
    pub fn new(n: usize, fuel: u64, variant: Variant) -> Self {
        Context { n, fuel, variant, engine: None, poisson: None }
    }

    pub fn engine(&mut self) -> Result<&Engine, Error> {
        if self.engine.is_none() {
            self.engine = Some(Engine::new(self.n)?);
        }
        Ok(self.engine.as_ref().expect("just built"))
    }

    pub fn poisson(&mut self) -> Result<&PoissonAlgebra, Error> {
        if self.poisson.is_none() {
            self.poisson = Some(PoissonAlgebra::new(self.n)?);
        }
        Ok(self.poisson.as_ref().expect("just built"))
    }

    fn convention(&self) -> Convention {
        match self.variant {
            Variant::AsPrinted => Convention::AsPrinted,
            Variant::Corrected => Convention::SignAdjusted,
        }
    }
}

struct Collector {
    result: SuiteResult,
}

impl Collector {
    fn new(name: &str) -> Self {
        Collector { result: SuiteResult { name: name.to_string(), checked: 0, residuals: Vec::new() } }
    }

    fn check(&mut self, label: impl Into<String>, ok: bool, residual: impl FnOnce() -> String) {
        self.result.checked += 1;
        if !ok {
            self.result.residuals.push((label.into(), residual()));
        }
    }

    fn elements(&mut self, prefix: &str, rep: AuditReport<Element>) {
        for (label, x) in rep.entries {
            self.check(format!("{prefix}{label}"), x.vanishes(), || fmt_element(&x));
        }
    }

    fn polys(&mut self, prefix: &str, rep: AuditReport<poisson::PoissonPoly>) {
        for (label, x) in rep.entries {
            self.check(format!("{prefix}{label}"), x.vanishes(), || fmt_poisson(&x));
        }
    }

    fn flags(&mut self, prefix: &str, rep: AuditReport<bool>) {
        for (label, ok) in rep.entries {
            self.check(format!("{prefix}{label}"), ok, || "false".to_string());
        }
    }
}

/// Runs one named suite. Errors are infrastructure failures; residuals are
/// reported in the result.
pub fn run_suite(ctx: &mut Context, name: &str) -> Result<SuiteResult, Error> {
    let n = ctx.n;
    let mut c = Collector::new(name);
    match name {
        "ybe" => c.check("R12 R13 R23 = R23 R13 R12", tensorlab::check_ybe(n), || "false".into()),
        "reflection" => {
            c.check("K = J", tensorlab::check_const_reflection(&tensorlab::j_matrix(n), n), || "false".into());
            c.check("R (J x J) Ru = Ru (J x J) R", tensorlab::check_rjru_symmetry(n), || "false".into());
            for (label, first, lambda) in reflection_samples(n) {
                let k = tensorlab::c_matrix(n, &first, &lambda).ok_or_else(|| Error::BadArgs("C matrix".into()))?;
                c.check(label, tensorlab::check_const_reflection(&k, n), || "false".into());
            }
        }
        "relations" => {
            let rels = tensorlab::expand_reflection(n);
            let e = ctx.engine()?;
            for r in rels {
                let x = e.normalize(&r.element)?;
                c.check(r.index, x.is_zero(), || fmt_element(&x));
            }
        }
        "central" => {
            let variant = ctx.variant;
            let rels = tensorlab::expand_central(n);
            let e = ctx.engine()?;
            for r in rels {
                let x = e.normalize(&r.element)?;
                c.check(format!("entry {}", r.index), x.is_zero(), || fmt_element(&x));
            }
            let d = 2 * n;
            for i in 1..=d {
                for j in 1..i {
                    let rel = match variant {
                        Variant::AsPrinted => e.central_relation_as_printed(i, j)?,
                        Variant::Corrected => e.central_relation(i, j)?,
                    };
                    let x = e.normalize(&rel)?;
                    c.check(format!("closed form ({i},{j})"), x.is_zero(), || fmt_element(&x));
                }
            }
        }
        "confluence" => {
            let fuel = ctx.fuel;
            let e = ctx.engine()?;
            let rep = if n <= 2 {
                e.confluence_audit(3, fuel)
            } else {
                e.confluence_audit_words(sample_words(n, CONFLUENCE_SAMPLE, 3, 0), fuel)
            };
            c.result.checked = rep.checked;
            for w in rep.discrepancies {
                c.result.residuals.push((fmt_word(w.letters()), "strategies disagree".into()));
            }
            for w in rep.fuel_exhausted {
                c.result.residuals.push((fmt_word(w.letters()), "fuel exhausted".into()));
            }
        }
        "serre" => {
            let variant = ctx.variant;
            let e = ctx.engine()?;
            for (label, x) in braidact::serre_relations(n, variant) {
                let r = e.normalize(&x)?;
                c.check(label, r.is_zero(), || fmt_element(&r));
            }
        }
        "iserre" => {
            let variant = ctx.variant;
            let mut rep = braidact::iota_relations_audit(ctx.engine()?)?;
            if variant == Variant::Corrected {
                rep.entries.retain(|(l, _)| !l.contains("multiplied"));
            }
            c.elements("", rep);
        }
        "braid" => {
            let (variant, conv) = (ctx.variant, ctx.convention());
            let e = ctx.engine()?;
            for k in 1..=n {
                c.elements(&format!("automorphism beta_{k}: "), braidact::verify_automorphism(e, k, conv)?);
            }
            c.elements("inverse: ", braidact::verify_inverse(e, conv)?);
            c.elements("braid relation: ", braidact::verify_braid_relations(e, conv)?);
            for k in 1..=n {
                c.elements(&format!("table beta_{k}: "), braidact::table_consistency(e, k, variant)?);
            }
            if n >= 2 {
                for (label, k, x, want) in special_values(n) {
                    let got = braidact::apply_word_with(e, &[k as i64], Convention::AsPrinted, &x)?;
                    let want = e.normalize(&want)?;
                    let diff = &got - &want;
                    c.check(label, diff.is_zero(), || fmt_element(&got));
                }
            }
        }
        "jacobi" => c.polys("", ctx.poisson()?.jacobi_all()?),
        "matrix-form" => {
            c.polys("", poisson::matrix_form_report(ctx.poisson()?, true)?);
            c.result.checked = (2 * n).pow(4);
        }
        "poisson-braid" => {
            let variant = ctx.variant;
            let alg = ctx.poisson()?;
            for k in 1..=n {
                let table = poisson::poisson_braid_table(k, n, variant)?;
                c.polys(&format!("beta_{k}: "), poisson::braid_preserves_bracket_check(alg, &table)?);
            }
        }
        "classical-limit" => {
            ctx.engine()?;
            ctx.poisson()?;
            let (e, alg) = (ctx.engine.as_ref().expect("built"), ctx.poisson.as_ref().expect("built"));
            for p in pbw_generators(n) {
                for r in pbw_generators(n) {
                    let q = classical::classical_structure_from_quantum(e, p, r)?;
                    let f = alg.reduce(&poisson::bracket_gen(
                        n,
                        p.row as usize,
                        p.col as usize,
                        r.row as usize,
                        r.col as usize,
                    )?)?;
                    let diff = &q - &f;
                    c.check(format!("{p} {r}"), diff.is_zero(), || fmt_poisson(&diff));
                }
            }
            c.flags("linear part ", classical::linear_part_report(e)?);
        }
        "psi" => {
            let pv = match ctx.variant {
                Variant::AsPrinted => PsiVariant::AsPrinted,
                Variant::Corrected => PsiVariant::SignFlipped,
            };
            c.flags("", classical::psi_report(n, pv));
            c.flags("", classical::structure_report(n));
        }
        other => return Err(Error::BadArgs(format!("unknown suite {other}"))),
    }
    Ok(c.result)
}

/// Deterministic admissible matrices `C = diag(c)` with `c_k c_{k'} = λ`.
fn reflection_samples(n: usize) -> Vec<(String, Vec<GaussRat>, GaussRat)> {
    let mut rng = StdRng::seed_from_u64(7);
    (0..5)
        .map(|t| {
            let first: Vec<GaussRat> = (0..n)
                .map(|_| {
                    let re = GaussRat::from_ratio(rng.gen_range(1..=9), rng.gen_range(1..=4));
                    &re + &(&GaussRat::i() * &GaussRat::from_int(rng.gen_range(-3..=3)))
                })
                .collect();
            let lambda = GaussRat::from_int(rng.gen_range(1..=6));
            (format!("K = C sample {t}"), first, lambda)
        })
        .collect()
}

/// `count` random words of length `1..=max_len` over all generators.
pub fn sample_words(n: usize, count: usize, max_len: usize, seed: u64) -> Vec<Word> {
    let gens = all_generators(n);
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            Word((0..len).map(|_| gens[rng.gen_range(0..gens.len())]).collect())
        })
        .collect()
}

/// The two images `β_{n−1}(s_{n+2,n}) = −s_{n+1,n−1}` and
/// `β_n(s_{n+2,n−1}) = −s_{n+2,n−1}` of the unadjusted maps.
fn special_values(n: usize) -> Vec<(String, usize, Element, Element)> {
    vec![
        (format!("beta_{}(s[{},{}])", n - 1, n + 2, n), n - 1, s(n + 2, n), -s(n + 1, n - 1)),
        (format!("beta_{}(s[{},{}])", n, n + 2, n - 1), n, s(n + 2, n - 1), -s(n + 2, n - 1)),
    ]
}

/// Applies the Poisson braid table for each positive letter of `word`,
/// rightmost first.
pub fn poisson_braid_word(
    alg: &PoissonAlgebra,
    word: &[i64],
    variant: Variant,
    x: &poisson::PoissonPoly,
) -> Result<poisson::PoissonPoly, Error> {
    let mut tables = BTreeMap::new();
    let mut acc = alg.reduce(x)?;
    for &k in word.iter().rev() {
        if k <= 0 {
            return Err(Error::BadArgs("inverse letters are not available on Poisson polynomials".into()));
        }
        let k = k as usize;
        if let Entry::Vacant(slot) = tables.entry(k) {
            slot.insert(poisson::poisson_braid_table(k, alg.rank(), variant)?);
        }
        acc = poisson::apply_table(alg, &tables[&k], &acc)?;
    }
    Ok(acc)
}
