//! Expression syntax: a recursive-descent parser producing [`Expr`] and its
//! elaboration into algebra elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? uint)*
//! atom   := uint | 'q' | 'i' | 's[i,j]' | 'a[i,j]' | 'B[i]' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. Division is allowed by scalars only and negative
//! exponents on scalars only.

use std::fmt;

use qtwist_core::braidact::b_gen;
use qtwist_core::poisson::PoissonPoly;
use qtwist_core::{Element, GaussRat, Gen, RatFunc};

/// A parse or elaboration failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprError {
    /// Malformed input; `pos` is a byte offset.
    Syntax { pos: usize, msg: String },
    /// A generator token whose indices do not name a generator at this rank.
    IndexOutOfRange { pos: usize, token: String, n: usize },
    /// Well-formed input that does not denote an element.
    Type(String),
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Syntax { pos, msg } => write!(f, "syntax error at position {pos}: {msg}"),
            ExprError::IndexOutOfRange { pos, token, n } => {
                write!(f, "index out of range at position {pos}: {token} at rank {n}")
            }
            ExprError::Type(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for ExprError {}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Q,
    I,
    S(usize, usize),
    A(usize, usize),
    B(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

/// Parses `input` for rank `n`, checking generator indices.
pub fn parse(input: &str, n: usize) -> Result<Expr, ExprError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0, n };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ExprError {
        ExprError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let mut base = self.atom()?;
        while self.eat(b'^') {
            let neg = self.eat(b'-');
            self.skip_ws();
            let at = self.pos;
            let v = self.uint()?;
            let e = i32::try_from(v).map_err(|_| ExprError::Syntax { pos: at, msg: "exponent too large".into() })?;
            base = Expr::Pow(Box::new(base), if neg { -e } else { e });
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<i64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a non-negative integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().map_err(|_| ExprError::Syntax { pos: start, msg: "integer literal too large".into() })
    }

    fn indices(&mut self, count: usize) -> Result<Vec<usize>, ExprError> {
        self.expect(b'[')?;
        let mut v = Vec::with_capacity(count);
        for k in 0..count {
            if k > 0 {
                self.expect(b',')?;
            }
            v.push(self.uint()? as usize);
        }
        self.expect(b']')?;
        Ok(v)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let start = match self.peek() {
            Some(_) => self.pos,
            None => return Err(self.err("unexpected end of input")),
        };
        let c = self.src[start];
        let d = 2 * self.n;
        let out_of_range = |token: String, n: usize| ExprError::IndexOutOfRange { pos: start, token, n };
        match c {
            b'0'..=b'9' => Ok(Expr::Int(self.uint()?)),
            b'(' => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            b'q' => {
                self.pos += 1;
                Ok(Expr::Q)
            }
            b'i' => {
                self.pos += 1;
                Ok(Expr::I)
            }
            b's' | b'a' => {
                self.pos += 1;
                let v = self.indices(2)?;
                let (i, j) = (v[0], v[1]);
                if !(1 <= j && j < i && i <= d) {
                    return Err(out_of_range(format!("{}[{i},{j}]", c as char), self.n));
                }
                Ok(if c == b's' { Expr::S(i, j) } else { Expr::A(i, j) })
            }
            b'B' => {
                self.pos += 1;
                let v = self.indices(1)?;
                if !(1 <= v[0] && v[0] <= self.n) {
                    return Err(out_of_range(format!("B[{}]", v[0]), self.n));
                }
                Ok(Expr::B(v[0]))
            }
            _ => Err(self.err(&format!("unexpected character '{}'", c as char))),
        }
    }
}

/// The value of an expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(RatFunc),
    Quantum(Element),
    Poisson(PoissonPoly),
}

impl Value {
    /// The value as an element of the twisted algebra.
    pub fn into_element(self) -> Result<Element, ExprError> {
        match self {
            Value::Scalar(c) => Ok(Element::constant(c)),
            Value::Quantum(x) => Ok(x),
            Value::Poisson(_) => Err(ExprError::Type("expected s-generators, found a-variables".into())),
        }
    }

    /// The value as a Poisson polynomial.
    pub fn into_poisson(self) -> Result<PoissonPoly, ExprError> {
        match self {
            Value::Scalar(c) => Ok(PoissonPoly::constant(q_free(&c)?)),
            Value::Poisson(p) => Ok(p),
            Value::Quantum(_) => Err(ExprError::Type("expected a-variables, found s-generators".into())),
        }
    }
}

fn q_free(c: &RatFunc) -> Result<GaussRat, ExprError> {
    c.as_constant().ok_or_else(|| ExprError::Type(format!("coefficient {c} depends on q in a Poisson expression")))
}

fn core(e: qtwist_core::Error) -> ExprError {
    ExprError::Type(e.to_string())
}

fn mixed() -> ExprError {
    ExprError::Type("expression mixes s-generators and a-variables".into())
}

fn combine(
    x: Value,
    y: Value,
    scalar: impl Fn(&RatFunc, &RatFunc) -> RatFunc,
    quantum: impl Fn(&Element, &Element) -> Element,
    poisson: impl Fn(&PoissonPoly, &PoissonPoly) -> PoissonPoly,
) -> Result<Value, ExprError> {
    Ok(match (x, y) {
        (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(scalar(&a, &b)),
        (Value::Poisson(_), Value::Quantum(_)) | (Value::Quantum(_), Value::Poisson(_)) => return Err(mixed()),
        (a @ Value::Poisson(_), b) | (a, b @ Value::Poisson(_)) => {
            Value::Poisson(poisson(&a.into_poisson()?, &b.into_poisson()?))
        }
        (a, b) => Value::Quantum(quantum(&a.into_element()?, &b.into_element()?)),
    })
}

/// Evaluates `e` at rank `n`. `B[i]` becomes the scaled band generator
/// `φ s_i/(q_i − q_i⁻¹)`.
pub fn elaborate(e: &Expr, n: usize) -> Result<Value, ExprError> {
    Ok(match e {
        Expr::Int(v) => Value::Scalar(RatFunc::from_int(*v)),
        Expr::Q => Value::Scalar(RatFunc::q()),
        Expr::I => Value::Scalar(RatFunc::i()),
        Expr::S(i, j) => Value::Quantum(Element::gen(Gen::new(*i as u8, *j as u8))),
        Expr::A(i, j) => Value::Poisson(PoissonPoly::var(Gen::new(*i as u8, *j as u8))),
        Expr::B(i) => Value::Quantum(b_gen(n, *i).map_err(core)?),
        Expr::Neg(x) => match elaborate(x, n)? {
            Value::Scalar(c) => Value::Scalar(-c),
            Value::Quantum(x) => Value::Quantum(-x),
            Value::Poisson(p) => Value::Poisson(-p),
        },
        Expr::Add(a, b) => combine(elaborate(a, n)?, elaborate(b, n)?, |x, y| x + y, |x, y| x + y, |x, y| x + y)?,
        Expr::Sub(a, b) => combine(elaborate(a, n)?, elaborate(b, n)?, |x, y| x - y, |x, y| x - y, |x, y| x - y)?,
        Expr::Mul(a, b) => combine(elaborate(a, n)?, elaborate(b, n)?, |x, y| x * y, |x, y| x * y, |x, y| x * y)?,
        Expr::Div(a, b) => {
            let d = match elaborate(b, n)? {
                Value::Scalar(d) => d,
                _ => return Err(ExprError::Type("division by a non-scalar".into())),
            };
            let inv = d.inv().map_err(core)?;
            match elaborate(a, n)? {
                Value::Scalar(c) => Value::Scalar(&c * &inv),
                Value::Quantum(x) => Value::Quantum(x.scale(&inv)),
                Value::Poisson(p) => Value::Poisson(p.scale(&q_free(&inv)?)),
            }
        }
        Expr::Pow(a, k) => {
            let base = elaborate(a, n)?;
            if let Value::Scalar(c) = &base {
                return Ok(Value::Scalar(c.pow(*k).map_err(core)?));
            }
            if *k < 0 {
                return Err(ExprError::Type("negative power of a non-scalar".into()));
            }
            let mut acc = Value::Scalar(RatFunc::one());
            for _ in 0..*k {
                acc = combine(acc, base.clone(), |x, y| x * y, |x, y| x * y, |x, y| x * y)?;
            }
            acc
        }
    })
}

/// Parses and elaborates in one step.
pub fn evaluate(input: &str, n: usize) -> Result<Value, ExprError> {
    elaborate(&parse(input, n)?, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        assert!(parse("q*s[3,2]*s[2,1] - s[2,1]*s[3,2]", 2).is_ok());
        assert!(matches!(parse("s[1,2]", 2), Err(ExprError::IndexOutOfRange { pos: 0, .. })));
        assert!(matches!(parse("s[5,1]", 2), Err(ExprError::IndexOutOfRange { .. })));
        assert!(matches!(parse("B[3]", 2), Err(ExprError::IndexOutOfRange { .. })));
        assert!(matches!(parse("s[2,1] +", 2), Err(ExprError::Syntax { pos: 8, .. })));
        assert!(matches!(parse("s[2 1]", 2), Err(ExprError::Syntax { pos: 4, .. })));
        assert!(matches!(parse("x", 2), Err(ExprError::Syntax { pos: 0, .. })));
        assert_eq!(parse(" 2 ^ 3 ", 1), Ok(Expr::Pow(Box::new(Expr::Int(2)), 3)));
    }

    #[test]
    fn elaboration() {
        let x = evaluate("B[1]^2*B[2]", 2).unwrap().into_element().unwrap();
        let b1 = b_gen(2, 1).unwrap();
        assert_eq!(x, &(&b1 * &b1) * &b_gen(2, 2).unwrap());
        let y = evaluate("(q^2 - q^-2)/(q - q^-1)", 1).unwrap();
        assert_eq!(y, Value::Scalar(&RatFunc::q() + &RatFunc::q_pow(-1)));
        assert!(matches!(evaluate("s[2,1]*a[2,1]", 2), Err(ExprError::Type(_))));
        assert!(matches!(evaluate("q*a[2,1]", 2), Err(ExprError::Type(_))));
        assert!(matches!(evaluate("1/s[2,1]", 2), Err(ExprError::Type(_))));
        assert!(matches!(evaluate("1/(q - q)", 2), Err(ExprError::Type(_))));
        let p = evaluate("i*a[2,1]^2 - 3", 1).unwrap().into_poisson().unwrap();
        assert_eq!(p.degree(), 2);
    }
}
