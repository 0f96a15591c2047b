//! Hand-expanded forms of the quadratic and central relations, compared
//! with the machine expansion of the matrix identities by exact linear
//! algebra over `Q(i)(q)`.
//!
//! The closed form of the quadratic relations contains four sums without
//! an upper limit, each gated by a Kronecker delta (`a = i'`, `b = i'`,
//! `a = j'`, `i = j'`). An instance is *unambiguous* when none of those
//! deltas fires; ambiguous instances are evaluated with the limit `2n`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::freealg::{Element, Word};
use crate::pbwengine::Engine;
use crate::qscalar::{GaussRat, RatFunc};
use crate::tensorlab::{self, Conv};
use crate::Error;

/// An echelonized linear span of elements of the free algebra.
#[derive(Clone, Debug, Default)]
pub struct LinearSpan {
    rows: BTreeMap<Word, Element>,
}

impl LinearSpan {
    pub fn new() -> Self {
        Self::default()
    }

    /// The span of `xs`.
    pub fn of<'a, I: IntoIterator<Item = &'a Element>>(xs: I) -> Result<Self, Error> {
        let mut s = Self::new();
        for x in xs {
            s.insert(x)?;
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, x: &Element) -> Element {
        let mut x = x.clone();
        loop {
            let Some((w, c)) = x.terms().next_back().map(|(w, c)| (w.clone(), c.clone())) else {
                return x;
            };
            match self.rows.get(&w) {
                Some(row) => x.add_scaled(row, &-&c),
                None => {
                    // The leading word is free; continue below it.
                    let mut rest = x.clone();
                    rest.add_term(w.clone(), -&c);
                    let rest = self.reduce(&rest);
                    let mut out = rest;
                    out.add_term(w, c);
                    return out;
                }
            }
        }
    }

    /// Adds `x`; returns whether it enlarged the span.
    pub fn insert(&mut self, x: &Element) -> Result<bool, Error> {
        let r = self.reduce(x);
        let Some((w, c)) = r.terms().next_back().map(|(w, c)| (w.clone(), c.clone())) else {
            return Ok(false);
        };
        let r = r.scale(&c.inv()?);
        self.rows.insert(w, r);
        Ok(true)
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.reduce(x).is_zero()
    }
}

/// Upper limit used for the open-ended sums.
fn open_limit(conv: &Conv) -> usize {
    conv.dim()
}

/// Whether the instance `(i,a,j,b)` avoids all open-ended sums.
pub fn is_unambiguous(n: usize, i: usize, a: usize, j: usize, b: usize) -> bool {
    let c = Conv::new(n);
    a != c.prime(i) && b != c.prime(i) && a != c.prime(j) && i != c.prime(j)
}

/// The hand-expanded quadratic relation for the indices `(i,a,j,b)`, as
/// `lhs − rhs`, with entries `s_{xy}` of the generating matrix.
pub fn quadratic_instance(n: usize, i: usize, a: usize, j: usize, b: usize) -> Element {
    let c = Conv::new(n);
    let cv = &c;
    let s = |x: usize, y: usize| {
        if x == 0 || y == 0 || x > cv.dim() || y > cv.dim() {
            Element::zero()
        } else {
            tensorlab::s_entry(cv, x, y)
        }
    };
    let d = |x: usize, y: usize| i32::from(x == y);
    let lt = |x: usize, y: usize| i32::from(x < y);
    let p = |x: usize| cv.prime(x);
    let bar = |x: usize| cv.bar(x);
    let eps = |x: usize| cv.eps(x);
    let q = |e: i32| RatFunc::q_pow(e);
    let z = |k: i64| RatFunc::from_int(k);
    let qd = &RatFunc::q() - &q(-1);
    let qd2 = &qd * &qd;
    let top = open_limit(cv);

    let lhs = (&s(i, a) * &s(j, b)).scale(&q(d(i, j) - d(i, p(j)) + d(a, j) - d(a, p(j))));
    let mut rhs = (&s(j, b) * &s(i, a)).scale(&q(d(i, b) - d(i, p(b)) + d(a, b) - d(a, p(b))));
    let c2 = (lt(b, a) - lt(i, j)) as i64;
    if c2 != 0 {
        rhs = &rhs + &(&s(j, a) * &s(i, b)).scale(&(&(&qd * &q(d(i, a) - d(i, p(a)))) * &z(c2)));
    }
    if b < i {
        rhs = &rhs + &(&s(j, i) * &s(b, a)).scale(&(&qd * &q(d(a, b) - d(a, p(b)))));
    }
    if a < j {
        rhs = &rhs - &(&s(i, j) * &s(a, b)).scale(&(&qd * &q(d(i, j) - d(i, p(j)))));
    }
    let c4 = i64::from(b < a && a < i) - i64::from(a < i && i < j);
    if c4 != 0 {
        rhs = &rhs + &(&s(j, i) * &s(a, b)).scale(&(&qd2 * &z(c4)));
    }
    if a == p(i) {
        let g = (lt(i, j) - lt(b, p(i))) as i64;
        for k in p(i) + 1..=top {
            let coef = q(bar(k) - bar(p(i))).scale(&GaussRat::from_int(eps(i) * eps(p(k)) * g));
            rhs = &rhs + &(&s(j, k) * &s(p(k), b)).scale(&(&qd2 * &coef));
        }
    }
    if b == p(a) {
        for k in 1..a {
            let coef = q(bar(a) - bar(k) + d(i, p(k)) - d(i, k)).scale(&GaussRat::from_int(eps(k) * eps(a)));
            rhs = &rhs - &(&s(j, p(k)) * &s(i, k)).scale(&(&qd * &coef));
        }
        for k in p(i) + 1..a {
            let coef = q(bar(a) - bar(k)).scale(&GaussRat::from_int(eps(k) * eps(a)));
            rhs = &rhs - &(&s(j, i) * &s(p(k), k)).scale(&(&qd2 * &coef));
        }
    }
    if b == p(i) {
        for k in p(i) + 1..=top {
            let coef = q(bar(i) - bar(p(k)) + d(a, p(i)) - d(a, i)).scale(&GaussRat::from_int(eps(i) * eps(p(k))));
            rhs = &rhs - &(&s(j, k) * &s(p(k), a)).scale(&(&qd * &coef));
        }
    }
    if a == p(j) {
        for k in p(j) + 1..=top {
            let coef = q(bar(k) - bar(p(j)) + d(i, j) - d(i, p(j))).scale(&GaussRat::from_int(eps(k) * eps(p(j))));
            rhs = &rhs + &(&s(i, k) * &s(p(k), b)).scale(&(&qd * &coef));
        }
    }
    if i == p(j) {
        for k in i + 1..=top {
            let coef = q(bar(k) - bar(i) + d(a, p(k)) - d(a, k)).scale(&GaussRat::from_int(eps(i) * eps(k)));
            rhs = &rhs + &(&s(k, a) * &s(p(k), b)).scale(&(&qd * &coef));
        }
        for k in i + 1..p(a) {
            let coef = q(bar(k) - bar(i)).scale(&GaussRat::from_int(eps(k) * eps(i)));
            rhs = &rhs + &(&s(k, p(k)) * &s(a, b)).scale(&(&qd2 * &coef));
        }
    }
    &lhs - &rhs
}

/// Outcome of comparing hand-expanded relations with a machine expansion.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CrossCheck {
    /// Instances compared.
    pub checked: usize,
    /// Instances that are not in the span, labelled by their indices.
    pub discrepancies: Vec<String>,
}

impl CrossCheck {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Checks every quadratic instance (only the unambiguous ones when
/// `unambiguous_only`) against the span of the expanded reflection
/// relations.
pub fn quadratic_into_machine(n: usize, unambiguous_only: bool) -> Result<CrossCheck, Error> {
    let rels = tensorlab::expand_reflection(n);
    let span = LinearSpan::of(rels.iter().map(|r| &r.element))?;
    let d = 2 * n;
    let mut out = CrossCheck::default();
    for i in 1..=d {
        for a in 1..=d {
            for j in 1..=d {
                for b in 1..=d {
                    if unambiguous_only && !is_unambiguous(n, i, a, j, b) {
                        continue;
                    }
                    let x = quadratic_instance(n, i, a, j, b);
                    out.checked += 1;
                    if !span.contains(&x) {
                        out.discrepancies.push(format!("(i,a,j,b)=({i},{a},{j},{b})"));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Checks expanded reflection relations against the span of the
/// hand-expanded instances (unambiguous only when `unambiguous_only`);
/// with `homogeneous_only` just the relations whose words all have length
/// two. Discrepancies carry the tensor entry index.
pub fn machine_into_quadratic(n: usize, unambiguous_only: bool, homogeneous_only: bool) -> Result<CrossCheck, Error> {
    let d = 2 * n;
    let mut inst = Vec::new();
    for i in 1..=d {
        for a in 1..=d {
            for j in 1..=d {
                for b in 1..=d {
                    if !unambiguous_only || is_unambiguous(n, i, a, j, b) {
                        inst.push(quadratic_instance(n, i, a, j, b));
                    }
                }
            }
        }
    }
    let span = LinearSpan::of(inst.iter())?;
    let mut out = CrossCheck::default();
    for r in tensorlab::expand_reflection(n) {
        if homogeneous_only && r.element.terms().any(|(w, _)| w.len() != 2) {
            continue;
        }
        out.checked += 1;
        if !span.contains(&r.element) {
            out.discrepancies.push(r.index.clone());
        }
    }
    Ok(out)
}

/// Checks the closed central relations (literal form when `as_printed`)
/// against the span of the expanded central relations.
pub fn central_into_machine(engine: &Engine, as_printed: bool) -> Result<CrossCheck, Error> {
    let rels = tensorlab::expand_central(engine.rank());
    let span = LinearSpan::of(rels.iter().map(|r| &r.element))?;
    let d = engine.conv().dim();
    let mut out = CrossCheck::default();
    for i in 1..=d {
        for j in 1..i {
            let x =
                if as_printed { engine.central_relation_as_printed(i, j)? } else { engine.central_relation(i, j)? };
            out.checked += 1;
            if !span.contains(&x) {
                out.discrepancies.push(format!("(i,j)=({i},{j})"));
            }
        }
    }
    Ok(out)
}
