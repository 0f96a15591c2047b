//! The coefficient field `Q(i)(q)`: Gaussian rationals, Laurent polynomials
//! in `q` and reduced rational functions, together with q-integers and the
//! order-of-vanishing analysis at `q = 1` used by classical limits.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// A number `re + im·i` with exact rational parts, `i² = −1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The square root of −1.
    pub fn i() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(v: i64) -> Self {
        GaussRat { re: BigRational::from_integer(BigInt::from(v)), im: BigRational::zero() }
    }

    /// `num/den` as a real Gaussian rational. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat { re: BigRational::new(BigInt::from(num), BigInt::from(den)), im: BigRational::zero() }
    }

    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `re² + im²`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(GaussRat { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self, Error> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = GaussRat::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

impl Default for GaussRat {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for GaussRat {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat { re: &self.re * &o.re, im: BigRational::zero() };
        }
        GaussRat { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re, im: -self.im }
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, o: &GaussRat) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) if self.im.is_one() => write!(f, "i"),
            (true, false) if (-self.im.clone()).is_one() => write!(f, "-i"),
            (true, false) => write!(f, "{}*i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}*i)", self.re, sign, self.im.abs())
            }
        }
    }
}

/// A finitely supported sum `Σ c_e q^e` with `e ∈ Z`.
///
/// Terms are kept sorted by exponent with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    terms: Vec<(i32, GaussRat)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::monomial(c, 0)
    }

    /// `c·q^e`.
    pub fn monomial(c: GaussRat, e: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(e, c)] }
        }
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// merging repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (i32, GaussRat)>>(it: I) -> Self {
        let mut v: Vec<(i32, GaussRat)> = it.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, GaussRat)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += &c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        LaurentPoly { terms: out }
    }

    pub fn terms(&self) -> &[(i32, GaussRat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// The constant value if the polynomial has no `q`-dependence.
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.as_slice() {
            [] => Some(GaussRat::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    /// Coefficient of `q^e`.
    pub fn coeff(&self, e: i32) -> GaussRat {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(p) => self.terms[p].1.clone(),
            Err(_) => GaussRat::zero(),
        }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn eval(&self, x: &GaussRat) -> Result<GaussRat, Error> {
        let mut acc = GaussRat::zero();
        for (e, c) in &self.terms {
            acc += &(c * &x.pow(*e)?);
        }
        Ok(acc)
    }

    /// Substitutes `q ↦ q^{-1}`.
    pub fn bar(&self) -> Self {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (-e, c.clone())))
    }

    fn dense(&self) -> (i32, Vec<GaussRat>) {
        let lo = self.min_exp().unwrap_or(0);
        let hi = self.max_exp().unwrap_or(0);
        let mut v = vec![GaussRat::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    fn from_dense(lo: i32, v: Vec<GaussRat>) -> Self {
        let terms = v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (lo + k as i32, c)).collect();
        LaurentPoly { terms }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                Ordering::Less => {
                    out.push(a[x].clone());
                    x += 1;
                }
                Ordering::Greater => {
                    out.push(b[y].clone());
                    y += 1;
                }
                Ordering::Equal => {
                    let c = &a[x].1 + &b[y].1;
                    if !c.is_zero() {
                        out.push((a[x].0, c));
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend_from_slice(&b[y..]);
        LaurentPoly { terms: out }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &(-o)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return o.scale(c).shift(*e);
        }
        if o.terms.len() == 1 {
            let (e, c) = &o.terms[0];
            return self.scale(c).shift(*e);
        }
        let (la, da) = self.dense();
        let (lb, db) = o.dense();
        let mut v = vec![GaussRat::zero(); da.len() + db.len() - 1];
        for (x, ca) in da.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (y, cb) in db.iter().enumerate() {
                if !cb.is_zero() {
                    v[x + y] += &(ca * cb);
                }
            }
        }
        LaurentPoly::from_dense(la + lb, v)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*q")?,
                _ => write!(f, "{c}*q^{e}")?,
            }
        }
        Ok(())
    }
}

/// Dense polynomial helpers over `Q(i)` (index = exponent, no trailing zeros).
mod dense {
    use super::*;

    pub fn trim(v: &mut Vec<GaussRat>) {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }

    /// Quotient and remainder of `a` by a nonzero `b`.
    pub fn divrem(a: &[GaussRat], b: &[GaussRat]) -> (Vec<GaussRat>, Vec<GaussRat>) {
        let mut r: Vec<GaussRat> = a.to_vec();
        trim(&mut r);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead_inv = b[b.len() - 1].inv().expect("nonzero divisor");
        let mut quo = vec![GaussRat::zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let c = &r[r.len() - 1] * &lead_inv;
            for (k, bk) in b.iter().enumerate() {
                if !bk.is_zero() {
                    let t = &r[shift + k] - &(&c * bk);
                    r[shift + k] = t;
                }
            }
            quo[shift] = c;
            trim(&mut r);
        }
        (quo, r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &[GaussRat], b: &[GaussRat]) -> Vec<GaussRat> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let (_, r) = divrem(&x, &y);
            x = y;
            y = r;
        }
        if let Some(l) = x.last().cloned() {
            let li = l.inv().expect("nonzero");
            for c in x.iter_mut() {
                *c = &*c * &li;
            }
        }
        x
    }
}

/// A reduced quotient of Laurent polynomials.
///
/// Canonical form: the denominator is an ordinary polynomial with nonzero
/// constant term equal to 1, and it is coprime to the numerator. Any
/// power of `q` lives in the numerator. Two values are equal exactly when
/// their representations are identical.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentPoly::one())
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> Self {
        Self::from_laurent(LaurentPoly::monomial(GaussRat::one(), e))
    }

    /// The constant `√−1`.
    pub fn i() -> Self {
        Self::constant(GaussRat::i())
    }

    pub fn from_int(v: i64) -> Self {
        Self::constant(GaussRat::from_int(v))
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::from_laurent(LaurentPoly::constant(c))
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        RatFunc { num: p, den: LaurentPoly::one() }
    }

    /// Reduces `num/den` to canonical form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let dlo = den.min_exp().unwrap_or(0);
        let mut num = num.shift(-dlo);
        let mut den = den.shift(-dlo);
        if den.terms.len() > 1 {
            let nlo = num.min_exp().unwrap_or(0);
            let (_, nd) = num.dense();
            let (_, dd) = den.dense();
            let g = dense::gcd(&nd, &dd);
            if g.len() > 1 {
                let (qn, _) = dense::divrem(&nd, &g);
                let (qd, _) = dense::divrem(&dd, &g);
                num = LaurentPoly::from_dense(nlo, qn);
                den = LaurentPoly::from_dense(0, qd);
            }
        }
        let lead = den.terms[0].1.clone();
        if !lead.is_one() {
            let li = lead.inv()?;
            num = num.scale(&li);
            den = den.scale(&li);
        }
        Ok(RatFunc { num, den })
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value if this is a constant.
    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<Self, Error> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if o.den.is_one() && o.num.terms.len() == 1 {
            let (e, c) = &o.num.terms[0];
            let ci = c.inv()?;
            return Ok(RatFunc { num: self.num.scale(&ci).shift(-e), den: self.den.clone() });
        }
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i32) -> Result<Self, Error> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Evaluates at a point that is not a root of the denominator.
    pub fn eval(&self, x: &GaussRat) -> Result<GaussRat, Error> {
        let d = self.den.eval(x)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.num.eval(x)?.div(&d)
    }

    /// Substitutes `q ↦ q^{-1}`.
    pub fn bar(&self) -> Self {
        RatFunc::new(self.num.bar(), self.den.bar()).expect("nonzero denominator")
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let num = &self.num + &o.num;
            if self.den.is_one() {
                return RatFunc { num, den: self.den.clone() };
            }
            return RatFunc::new(num, self.den.clone()).expect("nonzero denominator");
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).expect("nonzero denominator")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: &self.num * &o.num, den: LaurentPoly::one() };
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominator")
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
    };
}

owned_ops!(RatFunc);
owned_ops!(LaurentPoly);
owned_ops!(GaussRat);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// The q-integer `[k]_{q^d} = (q^{dk} − q^{−dk})/(q^d − q^{−d})`.
pub fn qint(k: u32, d: u32) -> RatFunc {
    let (k, d) = (k as i32, d as i32);
    RatFunc::from_laurent(LaurentPoly::from_terms((0..k).map(|m| (d * (k - 1 - 2 * m), GaussRat::one()))))
}

/// The q-factorial `[k]_{q^d}!`.
pub fn qfactorial(k: u32, d: u32) -> RatFunc {
    (1..=k).fold(RatFunc::one(), |acc, m| &acc * &qint(m, d))
}

/// The q-binomial `[k]!/([r]![k−r]!)` at `q^d`.
pub fn qbinom(k: u32, r: u32, d: u32) -> Result<RatFunc, Error> {
    if r > k {
        return Err(Error::BadArgs(alloc::format!("qbinom: r = {r} exceeds k = {k}")));
    }
    qfactorial(k, d).div(&(&qfactorial(r, d) * &qfactorial(k - r, d)))
}

/// Multiplicity of the root `q = 1` in a nonzero Laurent polynomial, and
/// the cofactor after removing it.
fn split_at_one(p: &LaurentPoly) -> (i32, LaurentPoly) {
    let lo = p.min_exp().unwrap_or(0);
    let (_, mut v) = p.dense();
    let mut mult = 0;
    loop {
        let s = v.iter().fold(GaussRat::zero(), |a, c| &a + c);
        if !s.is_zero() || v.len() <= 1 {
            break;
        }
        // synthetic division by (q − 1)
        let deg = v.len() - 1;
        let mut quo = vec![GaussRat::zero(); deg];
        let mut carry = GaussRat::zero();
        for k in (1..=deg).rev() {
            carry = &carry + &v[k];
            quo[k - 1] = carry.clone();
        }
        v = quo;
        mult += 1;
    }
    (mult, LaurentPoly::from_dense(lo, v))
}

/// The order `v` with `x = (q − 1)^v · u`, `u` finite and nonzero at 1.
pub fn order_at_one(x: &RatFunc) -> Result<i32, Error> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(split_at_one(&x.num).0 - split_at_one(&x.den).0)
}

/// `(x / (1 − q)^v)` evaluated at `q = 1`.
pub fn eval_at_one_after_dividing(x: &RatFunc, v: i32) -> Result<GaussRat, Error> {
    if x.is_zero() {
        return Ok(GaussRat::zero());
    }
    let (a, un) = split_at_one(&x.num);
    let (b, ud) = split_at_one(&x.den);
    let ord = a - b;
    if ord < v {
        return Err(Error::PoleAtOne);
    }
    if ord > v {
        return Ok(GaussRat::zero());
    }
    let one = GaussRat::one();
    let val = un.eval(&one)?.div(&ud.eval(&one)?)?;
    Ok(if v % 2 == 0 { val } else { -val })
}

/// Plain evaluation at `q = 1`.
pub fn eval_at_one(x: &RatFunc) -> Result<GaussRat, Error> {
    eval_at_one_after_dividing(x, 0)
}
