//! Canonical text for scalars, elements and Poisson polynomials, in the
//! syntax accepted by [`crate::expr::parse`].
//!
//! Terms appear in canonical word order joined by ` + ` or ` - `. A
//! coefficient that is a single signed monomial `c·q^e` is written in
//! front of the word (`3/2*q^-1*s[2,1]`), any other one in parentheses.

use qtwist_core::poisson::PoissonPoly;
use qtwist_core::{Element, GaussRat, Gen, LaurentPoly, RatFunc};

/// `(negative, magnitude)` of a rational printed by its `Display`.
fn split_sign(s: String) -> (bool, String) {
    match s.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, s),
    }
}

/// A Gaussian rational as `(negative, body)` where `body` is unsigned, or
/// `None` when both parts are nonzero.
fn signed_gauss(c: &GaussRat) -> Option<(bool, String)> {
    if c.im == Default::default() {
        Some(split_sign(c.re.to_string()))
    } else if c.re == Default::default() {
        let (neg, m) = split_sign(c.im.to_string());
        Some((neg, if m == "1" { "i".to_string() } else { format!("{m}*i") }))
    } else {
        None
    }
}

/// A Gaussian rational in expression syntax.
pub fn fmt_gauss(c: &GaussRat) -> String {
    match signed_gauss(c) {
        Some((neg, body)) => format!("{}{body}", if neg { "-" } else { "" }),
        None => {
            let (neg, im) = split_sign(c.im.to_string());
            let im = if im == "1" { "i".to_string() } else { format!("{im}*i") };
            format!("({} {} {im})", c.re, if neg { '-' } else { '+' })
        }
    }
}

fn q_power(e: i32) -> String {
    match e {
        0 => String::new(),
        1 => "q".to_string(),
        _ => format!("q^{e}"),
    }
}

/// `(negative, body)` for `c·q^e`; `body` carries no leading sign.
fn signed_monomial(c: &GaussRat, e: i32) -> (bool, String) {
    let qp = q_power(e);
    match signed_gauss(c) {
        Some((neg, body)) => {
            let text = match (body == "1", qp.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => qp,
                (false, true) => body,
                (false, false) => format!("{body}*{qp}"),
            };
            (neg, text)
        }
        None => {
            let g = fmt_gauss(c);
            (false, if qp.is_empty() { g } else { format!("{g}*{qp}") })
        }
    }
}

fn join(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (neg, body)) in parts.into_iter().enumerate() {
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

/// A Laurent polynomial, highest power of `q` first.
pub fn fmt_laurent(p: &LaurentPoly) -> String {
    join(p.terms().iter().rev().map(|(e, c)| signed_monomial(c, *e)).collect())
}

/// A rational function as `num` or `(num)/(den)`.
pub fn fmt_ratfunc(r: &RatFunc) -> String {
    if r.den().is_one() {
        fmt_laurent(r.num())
    } else {
        format!("({})/({})", fmt_laurent(r.num()), fmt_laurent(r.den()))
    }
}

fn fmt_letters(prefix: char, letters: &[Gen]) -> String {
    letters.iter().map(|g| format!("{prefix}[{},{}]", g.row, g.col)).collect::<Vec<_>>().join("*")
}

/// `(negative, body)` for a term with coefficient `c` and monomial text `w`.
fn signed_term(c: &RatFunc, w: String) -> (bool, String) {
    let single = c.den().is_one() && c.num().terms().len() == 1;
    if w.is_empty() {
        return if single {
            let (e, g) = &c.num().terms()[0];
            signed_monomial(g, *e)
        } else {
            (false, format!("({})", fmt_ratfunc(c)))
        };
    }
    if single {
        let (e, g) = &c.num().terms()[0];
        let (neg, body) = signed_monomial(g, *e);
        if body == "1" {
            (neg, w)
        } else {
            (neg, format!("{body}*{w}"))
        }
    } else {
        (false, format!("({})*{w}", fmt_ratfunc(c)))
    }
}

/// An element of the twisted algebra in canonical word order.
pub fn fmt_element(x: &Element) -> String {
    join(x.terms().map(|(w, c)| signed_term(c, fmt_letters('s', w.letters()))).collect())
}

/// A Poisson polynomial in monomial order.
pub fn fmt_poisson(p: &PoissonPoly) -> String {
    join(p.terms().map(|(m, c)| signed_term(&RatFunc::constant(c.clone()), fmt_letters('a', m.vars()))).collect())
}

/// A single word of generators, `1` for the empty word.
pub fn fmt_word(letters: &[Gen]) -> String {
    if letters.is_empty() {
        "1".to_string()
    } else {
        fmt_letters('s', letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{evaluate, Value};

    fn round(text: &str, n: usize) -> String {
        match evaluate(text, n).unwrap() {
            Value::Scalar(c) => fmt_ratfunc(&c),
            Value::Quantum(x) => fmt_element(&x),
            Value::Poisson(p) => fmt_poisson(&p),
        }
    }

    #[test]
    fn canonical_text() {
        assert_eq!(round("s[2,1]", 2), "s[2,1]");
        assert_eq!(round("0*s[2,1]", 2), "0");
        assert_eq!(round("-s[3,2]*s[2,1] + q*s[2,1]", 2), "q*s[2,1] - s[3,2]*s[2,1]");
        assert_eq!(round("(q + 1)*s[2,1] + 3/2", 2), "3/2 + (q + 1)*s[2,1]");
        assert_eq!(round("1/(q + 1)", 1), "(1)/(q + 1)");
        assert_eq!(round("(1 - 2*i)*q^-2*s[2,1]", 1), "(1 - 2*i)*q^-2*s[2,1]");
        assert_eq!(round("-i*q*s[2,1]", 1), "-i*q*s[2,1]");
        assert_eq!(round("2*a[2,1]*a[3,1] - a[3,2]", 2), "2*a[2,1]*a[3,1] - a[3,2]");
    }
}
