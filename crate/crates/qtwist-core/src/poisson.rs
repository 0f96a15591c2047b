//! The Poisson algebra `P_n`, the `q = 1` degeneration of the twisted
//! algebra.
//!
//! Polynomials are commutative in the variables `a[i,j]`, `i > j`. As in
//! the matrix `A`, `a[i,i]` stands for the constant `ε_i` and `a[i,j]` for
//! `i < j` is zero. The eliminable variables (`i > j > i'`) are expressed
//! through the basis variables by the central relation, so [`PoissonAlgebra`]
//! works in the polynomial ring on the `n²` basis variables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::audit::{AuditReport, Residual};
use crate::braidact::{self, BraidAction, Direction, Variant};
use crate::freealg::{all_generators, Element, Gen};
use crate::pbwengine::{pbw_generators, Engine};
use crate::qscalar::{eval_at_one, GaussRat, RatFunc};
use crate::tensorlab::{self, Conv, Entry, Matrix};
use crate::Error;

/// A commutative monomial: variables sorted by `(row, col)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<Gen>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut vars: Vec<Gen>) -> Self {
        vars.sort();
        Monomial(vars)
    }

    pub fn vars(&self) -> &[Gen] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    fn times(&self, o: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Monomial::new(v)
    }
}

/// A polynomial in the variables `a[i,j]` with Gaussian-rational
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PoissonPoly {
    terms: BTreeMap<Monomial, GaussRat>,
}

impl PoissonPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::unit(), c);
        p
    }

    /// The variable `a[g]` itself.
    pub fn var(g: Gen) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial(alloc::vec![g]), GaussRat::one());
        p
    }

    /// The entry `a_{ij}` of the matrix `A`: `ε_i` on the diagonal, 0 above.
    pub fn entry(conv: &Conv, i: usize, j: usize) -> Self {
        if i == 0 || j == 0 || i > conv.dim() || j > conv.dim() || i < j {
            Self::zero()
        } else if i == j {
            Self::constant(GaussRat::from_int(conv.eps(i)))
        } else {
            Self::var(Gen::new(i as u8, j as u8))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussRat {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&m) {
            Some(x) => &x + &c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(m, v);
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Variables that occur, sorted.
    pub fn variables(&self) -> Vec<Gen> {
        let mut v: Vec<Gen> = self.terms.keys().flat_map(|m| m.0.iter().copied()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// The algebra map determined by `image` on variables.
    pub fn substitute_with<F>(&self, mut image: F) -> Result<Self, Error>
    where
        F: FnMut(Gen) -> Option<PoissonPoly>,
    {
        let mut cache: BTreeMap<Gen, PoissonPoly> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            for g in &m.0 {
                if !cache.contains_key(g) {
                    let img = image(*g).ok_or(Error::MissingImage(*g))?;
                    cache.insert(*g, img);
                }
                acc = &acc * &cache[g];
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// `∂/∂a[g]`.
    pub fn derivative(&self, g: Gen) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let k = m.0.iter().filter(|&&x| x == g).count();
            if k == 0 {
                continue;
            }
            let mut v = m.0.clone();
            let pos = v.iter().position(|&x| x == g).expect("present");
            v.remove(pos);
            out.add_term(Monomial(v), c * &GaussRat::from_int(k as i64));
        }
        out
    }

    /// The image of an element of the twisted algebra at `q = 1`: words
    /// become commutative monomials and coefficients are evaluated at 1.
    pub fn from_element_at_one(x: &Element) -> Result<Self, Error> {
        Self::from_element_with(x, eval_at_one)
    }

    /// Like [`PoissonPoly::from_element_at_one`] with each coefficient
    /// first mapped through `coeff`.
    pub fn from_element_with<F>(x: &Element, mut coeff: F) -> Result<Self, Error>
    where
        F: FnMut(&RatFunc) -> Result<GaussRat, Error>,
    {
        let mut out = Self::zero();
        for (w, c) in x.terms() {
            out.add_term(Monomial::new(w.letters().to_vec()), coeff(c)?);
        }
        Ok(out)
    }
}

impl Add for &PoissonPoly {
    type Output = PoissonPoly;
    fn add(self, o: &PoissonPoly) -> PoissonPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &PoissonPoly {
    type Output = PoissonPoly;
    fn neg(self) -> PoissonPoly {
        self.scale(&GaussRat::from_int(-1))
    }
}

impl Neg for PoissonPoly {
    type Output = PoissonPoly;
    fn neg(self) -> PoissonPoly {
        -&self
    }
}

impl Sub for &PoissonPoly {
    type Output = PoissonPoly;
    fn sub(self, o: &PoissonPoly) -> PoissonPoly {
        self + &-o
    }
}

impl Mul for &PoissonPoly {
    type Output = PoissonPoly;
    fn mul(self, o: &PoissonPoly) -> PoissonPoly {
        let mut out = PoissonPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        out
    }
}

impl Entry for PoissonPoly {
    fn zero() -> Self {
        PoissonPoly::zero()
    }
    fn is_zero(&self) -> bool {
        PoissonPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

impl Residual for PoissonPoly {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

impl fmt::Display for PoissonPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for g in &m.0 {
                write!(f, "*a[{},{}]", g.row, g.col)?;
            }
        }
        Ok(())
    }
}

/// The grading `wt(a_{ij}) = ī + j̄`. The quadratic part of
/// `{a_{ij}, a_{kl}}` from [`bracket_gen`] is homogeneous of weight
/// `wt(a_{ij}) + wt(a_{kl})`; the linear part is not.
pub fn weight(n: usize, g: Gen) -> i32 {
    let c = Conv::new(n);
    c.bar(g.row as usize) + c.bar(g.col as usize)
}

/// `{a_{ij}, a_{kl}}` by the closed formula, with `a` read as entries of
/// `A` and the open-ended sums running to `2n`. The result may contain
/// eliminable variables.
pub fn bracket_gen(n: usize, i: usize, j: usize, k: usize, l: usize) -> Result<PoissonPoly, Error> {
    let c = Conv::new(n);
    let d = c.dim();
    for (x, y) in [(i, j), (k, l)] {
        if !(1 <= y && y < x && x <= d) {
            return Err(Error::BadIndices { i: x, j: y, n });
        }
    }
    let cv = &c;
    let a = |x: usize, y: usize| PoissonPoly::entry(cv, x, y);
    let p = |x: usize| cv.prime(x);
    let e = |x: usize| cv.eps(x);
    let dl = |x: usize, y: usize| i64::from(x == y);
    let lt = |x: usize, y: usize| i64::from(x < y);
    let z = GaussRat::from_int;

    let c1 = dl(i, k) - dl(i, p(k)) + dl(j, k) - dl(j, p(k)) - dl(i, l) + dl(i, p(l)) - dl(j, l) + dl(j, p(l));
    let mut r = (&a(i, j) * &a(k, l)).scale(&z(c1));
    r = &r + &(&a(k, j) * &a(i, l)).scale(&z(-2 * (lt(l, j) - lt(i, k))));
    r = &r + &(&a(k, i) * &a(l, j)).scale(&z(-2 * lt(l, i)));
    r = &r + &(&a(i, k) * &a(j, l)).scale(&z(2 * lt(j, k)));
    if l == p(j) {
        for m in 1..j {
            r = &r + &(&a(k, p(m)) * &a(i, m)).scale(&z(2 * e(m) * e(j)));
        }
    }
    if l == p(i) {
        for m in p(i) + 1..=d {
            r = &r + &(&a(k, m) * &a(p(m), j)).scale(&z(2 * e(i) * e(p(m))));
        }
    }
    if j == p(k) {
        for m in p(k) + 1..=d {
            r = &r + &(&a(i, m) * &a(p(m), l)).scale(&z(-2 * e(m) * e(p(k))));
        }
    }
    if i == p(k) {
        for m in i + 1..=d {
            r = &r + &(&a(m, j) * &a(p(m), l)).scale(&z(-2 * e(i) * e(m)));
        }
    }
    Ok(r)
}

/// The central relation in `P_n` for `i ≠ j`:
/// `Σ_{k=j, k≠i'}^{i−1} ε_iε_k a_{k'i'}a_{kj} + ε_{i'}a_{ij} + δ_{j≤i'≤i}·t`,
/// with the literal `t = ε_{i'}a_{i'j}` ([`Variant::AsPrinted`]) or
/// `t = −a_{ii'}a_{i'j}`, the `q = 1` value of the quantum `δ` term
/// ([`Variant::Corrected`]).
pub fn poisson_central(n: usize, i: usize, j: usize, variant: Variant) -> Result<PoissonPoly, Error> {
    let c = Conv::new(n);
    if i == j || i == 0 || j == 0 || i > c.dim() || j > c.dim() {
        return Err(Error::BadIndices { i, j, n });
    }
    let a = |x: usize, y: usize| PoissonPoly::entry(&c, x, y);
    let ip = c.prime(i);
    let mut r = PoissonPoly::zero();
    for k in j..i {
        if k == ip {
            continue;
        }
        r = &r + &(&a(c.prime(k), ip) * &a(k, j)).scale(&GaussRat::from_int(c.eps(i) * c.eps(k)));
    }
    r = &r + &a(i, j).scale(&GaussRat::from_int(c.eps(ip)));
    if j <= ip && ip <= i {
        let t = match variant {
            Variant::AsPrinted => a(ip, j).scale(&GaussRat::from_int(c.eps(ip))),
            Variant::Corrected => -&(&a(i, ip) * &a(ip, j)),
        };
        r = &r + &t;
    }
    Ok(r)
}

/// `P_n` presented on the basis variables: the closed-form bracket of
/// [`bracket_gen`] reduced modulo the central relations.
#[derive(Clone, Debug)]
pub struct PoissonAlgebra {
    n: usize,
    conv: Conv,
    elim: BTreeMap<Gen, PoissonPoly>,
    brackets: BTreeMap<(Gen, Gen), PoissonPoly>,
}

impl PoissonAlgebra {
    pub fn new(n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::BadArgs(String::from("rank must be at least 1")));
        }
        let conv = Conv::new(n);
        let mut alg = PoissonAlgebra { n, conv, elim: BTreeMap::new(), brackets: BTreeMap::new() };
        alg.elim = alg.elimination_from_central()?;
        let gens = pbw_generators(n);
        for &p in &gens {
            for &r in &gens {
                let raw = bracket_gen(n, p.row as usize, p.col as usize, r.row as usize, r.col as usize)?;
                let red = alg.reduce(&raw)?;
                alg.brackets.insert((p, r), red);
            }
        }
        Ok(alg)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Images of the eliminable variables in the basis variables.
    pub fn elimination(&self) -> &BTreeMap<Gen, PoissonPoly> {
        &self.elim
    }

    /// Solves the central relation at each eliminable `(i,j)` for `a_{ij}`,
    /// in increasing `i − j`.
    fn elimination_from_central(&self) -> Result<BTreeMap<Gen, PoissonPoly>, Error> {
        let mut gens: Vec<Gen> = all_generators(self.n).into_iter().filter(|g| g.is_omega2(self.n)).collect();
        gens.sort_by_key(|g| (g.row - g.col, g.row));
        let mut elim: BTreeMap<Gen, PoissonPoly> = BTreeMap::new();
        for g in gens {
            let (i, j) = (g.row as usize, g.col as usize);
            let rel = poisson_central(self.n, i, j, Variant::Corrected)?;
            let lead = Monomial(alloc::vec![g]);
            let c = rel.coeff(&lead);
            let mut rest = rel.clone();
            rest.add_term(lead, -&c);
            if rest.variables().contains(&g) {
                return Err(Error::OrientationFailure(format!("central relation at {g}")));
            }
            let rest = rest.substitute_with(|x| Some(elim.get(&x).cloned().unwrap_or_else(|| PoissonPoly::var(x))))?;
            elim.insert(g, rest.scale(&-&c.inv()?));
        }
        Ok(elim)
    }

    /// Replaces eliminable variables by their images.
    pub fn reduce(&self, p: &PoissonPoly) -> Result<PoissonPoly, Error> {
        p.substitute_with(|g| {
            if !g.in_rank(self.n) {
                return None;
            }
            Some(self.elim.get(&g).cloned().unwrap_or_else(|| PoissonPoly::var(g)))
        })
    }

    /// `{a_p, a_r}` for basis variables, reduced.
    pub fn bracket_vars(&self, p: Gen, r: Gen) -> Result<&PoissonPoly, Error> {
        self.brackets.get(&(p, r)).ok_or(Error::NotInRank { gen: p, n: self.n })
    }

    /// The bracket extended by the Leibniz rule, on reduced arguments.
    pub fn bracket(&self, f: &PoissonPoly, g: &PoissonPoly) -> Result<PoissonPoly, Error> {
        for v in f.variables().into_iter().chain(g.variables()) {
            if !v.in_rank(self.n) {
                return Err(Error::NotInRank { gen: v, n: self.n });
            }
        }
        let (f, g) = (self.reduce(f)?, self.reduce(g)?);
        let mut out = PoissonPoly::zero();
        let gv = g.variables();
        for x in f.variables() {
            let fx = f.derivative(x);
            for &y in &gv {
                let gy = g.derivative(y);
                out = &out + &(&(&fx * &gy) * &self.brackets[&(x, y)]);
            }
        }
        Ok(out)
    }

    /// `{x,{y,z}} + {y,{z,x}} + {z,{x,y}}`.
    pub fn jacobi(&self, x: &PoissonPoly, y: &PoissonPoly, z: &PoissonPoly) -> Result<PoissonPoly, Error> {
        let a = self.bracket(x, &self.bracket(y, z)?)?;
        let b = self.bracket(y, &self.bracket(z, x)?)?;
        let c = self.bracket(z, &self.bracket(x, y)?)?;
        Ok(&(&a + &b) + &c)
    }

    /// Jacobi residuals on all triples of basis variables.
    pub fn jacobi_all(&self) -> Result<AuditReport<PoissonPoly>, Error> {
        let gens = pbw_generators(self.n);
        let mut rep = AuditReport::new();
        for (ix, &x) in gens.iter().enumerate() {
            for (iy, &y) in gens.iter().enumerate().skip(ix + 1) {
                for &z in gens.iter().skip(iy + 1) {
                    let (px, py, pz) = (PoissonPoly::var(x), PoissonPoly::var(y), PoissonPoly::var(z));
                    rep.push(format!("{x} {y} {z}"), self.jacobi(&px, &py, &pz)?);
                }
            }
        }
        Ok(rep)
    }

    /// Reduced central relations for all `i ≠ j`.
    pub fn central_audit(&self, variant: Variant) -> Result<AuditReport<PoissonPoly>, Error> {
        let d = self.conv.dim();
        let mut rep = AuditReport::new();
        for i in 1..=d {
            for j in 1..=d {
                if i != j {
                    rep.push(format!("({i},{j})"), self.reduce(&poisson_central(self.n, i, j, variant)?)?);
                }
            }
        }
        Ok(rep)
    }
}

/// The classical r-matrix `Σ e_ii⊗e_ii − Σ e_ii⊗e_i'i' + 2Σ_{i<j}
/// e_ij⊗e_ji − 2Σ_{i<j} ε_iε_j e_ij⊗e_i'j'`.
pub fn r_classical(n: usize) -> Matrix<GaussRat> {
    classical_r(n, false)
}

/// The matrix `rᵘ`, the transpose of `r` in the first leg.
pub fn ru_classical(n: usize) -> Matrix<GaussRat> {
    classical_r(n, true)
}

fn classical_r(n: usize, transposed: bool) -> Matrix<GaussRat> {
    let c = Conv::new(n);
    let d = c.dim();
    let mut m = Matrix::zero(d * d);
    let mut put = |a: usize, b: usize, x: usize, y: usize, v: i64| {
        let (a, b) = if transposed { (b, a) } else { (a, b) };
        m.add_at((a - 1) * d + (x - 1), (b - 1) * d + (y - 1), &GaussRat::from_int(v));
    };
    for i in 1..=d {
        put(i, i, i, i, 1);
        put(i, i, c.prime(i), c.prime(i), -1);
        for j in i + 1..=d {
            put(i, j, j, i, 2);
            put(i, j, c.prime(i), c.prime(j), -2 * c.eps(i) * c.eps(j));
        }
    }
    m
}

/// `(R − I⊗I)/(q − 1)` at `q = 1`, computed from the quantum R-matrix.
pub fn r_from_quantum(n: usize) -> Result<Matrix<GaussRat>, Error> {
    let r = tensorlab::build_r(n);
    let d2 = r.size();
    let mut out = Matrix::zero(d2);
    for a in 0..d2 {
        for b in 0..d2 {
            let mut x = r.get(a, b);
            if a == b {
                x = &x - &RatFunc::one();
            }
            // x / (q − 1) at q = 1 is −(x / (1 − q)) at q = 1.
            let v = crate::qscalar::eval_at_one_after_dividing(&x, 1)?;
            out.set(a, b, -v);
        }
    }
    Ok(out)
}

/// Residuals of `{A₁,A₂} = [r, A₁A₂] + A₁rᵘA₂ − A₂rᵘA₁`, one per tensor
/// entry whose two sides differ, compared as raw polynomials or after
/// reduction.
pub fn matrix_form_report(alg: &PoissonAlgebra, reduced: bool) -> Result<AuditReport<PoissonPoly>, Error> {
    let n = alg.n;
    let c = &alg.conv;
    let d = c.dim();
    let mut a = Matrix::<PoissonPoly>::zero(d);
    for i in 1..=d {
        for j in 1..=i {
            a.set(i - 1, j - 1, PoissonPoly::entry(c, i, j));
        }
    }
    let mut id = Matrix::<PoissonPoly>::zero(d);
    for k in 0..d {
        id.set(k, k, PoissonPoly::one());
    }
    let a1 = a.kron(&id);
    let a2 = id.kron(&a);
    let r = r_classical(n).map(|x| PoissonPoly::constant(x.clone()));
    let ru = ru_classical(n).map(|x| PoissonPoly::constant(x.clone()));
    let a12 = a1.mul(&a2);
    let ra = r.mul(&a12);
    let ar = a12.mul(&r);
    let t2 = a1.mul(&ru).mul(&a2);
    let t3 = a2.mul(&ru).mul(&a1);
    let mut rep = AuditReport::new();
    for row in 0..d * d {
        for col in 0..d * d {
            let rhs = &(&(&ra.get(row, col) - &ar.get(row, col)) + &t2.get(row, col)) - &t3.get(row, col);
            let (i, k) = (row / d + 1, row % d + 1);
            let (j, l) = (col / d + 1, col % d + 1);
            let lhs = if i > j && k > l { bracket_gen(n, i, j, k, l)? } else { PoissonPoly::zero() };
            let mut diff = &lhs - &rhs;
            if reduced {
                diff = alg.reduce(&diff)?;
            }
            if !diff.is_zero() {
                rep.push(format!("(({i},{k}),({j},{l}))"), diff);
            }
        }
    }
    Ok(rep)
}

/// True when the matrix form holds entry by entry modulo the central
/// relations. As a raw polynomial identity it fails from `n = 2` on: the
/// entries with an upper-triangular pair on the left carry central
/// relations on the right.
pub fn matrix_form_check(alg: &PoissonAlgebra) -> Result<bool, Error> {
    Ok(matrix_form_report(alg, true)?.is_empty())
}

/// The braid action on `P_n` as a table of images of the basis variables,
/// unreduced.
///
/// [`Variant::AsPrinted`] uses the closed-form Poisson table, with cases
/// tried in a fixed order and recursive images resolved from the table
/// itself. [`Variant::Corrected`] is the `q = 1` value of the corrected
/// quantum table [`braidact::extended_table`].
pub fn poisson_braid_table(k: usize, n: usize, variant: Variant) -> Result<BTreeMap<Gen, PoissonPoly>, Error> {
    if k == 0 || k > n {
        return Err(Error::BadNode { k, n });
    }
    match variant {
        Variant::Corrected => braidact::extended_table(k, n, Variant::Corrected)?
            .into_iter()
            .map(|(g, (_, x))| Ok((g, PoissonPoly::from_element_at_one(&x)?)))
            .collect(),
        Variant::AsPrinted => {
            let mut ctx = PTable { n, k, conv: Conv::new(n), memo: BTreeMap::new(), visiting: Vec::new() };
            let mut out = BTreeMap::new();
            for g in pbw_generators(n) {
                let v = ctx.resolve(g.row as usize, g.col as usize)?;
                out.insert(g, v);
            }
            Ok(out)
        }
    }
}

/// The `q = 1` value of the braid action computed from the band images
/// (normal forms of the images of the basis generators).
pub fn degenerate_braid(engine: &Engine, k: usize) -> Result<BTreeMap<Gen, PoissonPoly>, Error> {
    let n = engine.rank();
    let act = BraidAction::new(engine, braidact::beta(k, n, Direction::Forward)?)?;
    pbw_generators(n).into_iter().map(|g| Ok((g, PoissonPoly::from_element_at_one(&act.table()[&g])?))).collect()
}

/// Applies the algebra map given by `table` on basis variables to `x`,
/// reducing before and after.
pub fn apply_table(
    alg: &PoissonAlgebra,
    table: &BTreeMap<Gen, PoissonPoly>,
    x: &PoissonPoly,
) -> Result<PoissonPoly, Error> {
    let x = alg.reduce(x)?;
    let y = x.substitute_with(|g| table.get(&g).cloned())?;
    alg.reduce(&y)
}

/// `β_k(x)` on `P_n` through [`poisson_braid_table`].
pub fn poisson_braid(alg: &PoissonAlgebra, k: usize, x: &PoissonPoly, variant: Variant) -> Result<PoissonPoly, Error> {
    let table = poisson_braid_table(k, alg.n, variant)?;
    apply_table(alg, &table, x)
}

/// Compares each table image with the degenerate action from the band
/// images, both reduced; labels are the generators.
pub fn poisson_table_consistency(
    alg: &PoissonAlgebra,
    engine: &Engine,
    k: usize,
    variant: Variant,
) -> Result<AuditReport<PoissonPoly>, Error> {
    let table = poisson_braid_table(k, alg.n, variant)?;
    let truth = degenerate_braid(engine, k)?;
    let mut rep = AuditReport::new();
    for (g, x) in &table {
        rep.push(format!("{g}"), &alg.reduce(x)? - &alg.reduce(&truth[g])?);
    }
    Ok(rep)
}

/// `β_k({a_p, a_r}) − {β_k(a_p), β_k(a_r)}` for all ordered pairs of basis
/// variables, with `β_k` given by `table`.
pub fn braid_preserves_bracket_check(
    alg: &PoissonAlgebra,
    table: &BTreeMap<Gen, PoissonPoly>,
) -> Result<AuditReport<PoissonPoly>, Error> {
    let gens = pbw_generators(alg.n);
    let mut img = BTreeMap::new();
    for &g in &gens {
        img.insert(g, alg.reduce(&table[&g])?);
    }
    let mut rep = AuditReport::new();
    for &p in &gens {
        for &r in &gens {
            let lhs = apply_table(alg, &img, alg.bracket_vars(p, r)?)?;
            let rhs = alg.bracket(&img[&p], &img[&r])?;
            rep.push(format!("{p} {r}"), &lhs - &rhs);
        }
    }
    Ok(rep)
}

struct PTable {
    n: usize,
    k: usize,
    conv: Conv,
    memo: BTreeMap<(usize, usize), PoissonPoly>,
    visiting: Vec<(usize, usize)>,
}

impl PTable {
    fn a(&self, i: usize, j: usize) -> PoissonPoly {
        PoissonPoly::entry(&self.conv, i, j)
    }

    fn beta(&mut self, i: usize, j: usize) -> Result<PoissonPoly, Error> {
        if i <= j || i > self.conv.dim() {
            return Ok(self.a(i, j));
        }
        self.resolve(i, j)
    }

    fn resolve(&mut self, i: usize, j: usize) -> Result<PoissonPoly, Error> {
        if let Some(v) = self.memo.get(&(i, j)) {
            return Ok(v.clone());
        }
        if !Gen::new(i as u8, j as u8).is_omega1(self.n) || self.visiting.contains(&(i, j)) {
            return Err(Error::UnresolvedTableEntry(format!("beta_{}(a[{i},{j}])", self.k)));
        }
        self.visiting.push((i, j));
        let (n, k) = (self.n, self.k);
        let v = if k + 2 <= n {
            self.row_low(i, j)?
        } else if k + 1 == n {
            self.row_penultimate(i, j)?
        } else {
            self.row_last(i, j)
        };
        let v = v.unwrap_or_else(|| self.a(i, j));
        self.visiting.pop();
        self.memo.insert((i, j), v.clone());
        Ok(v)
    }

    fn row_low(&mut self, i: usize, j: usize) -> Result<Option<PoissonPoly>, Error> {
        let k = self.k;
        let c = self.conv;
        let kp = c.prime(k);
        let a = |x: usize, y: usize| PoissonPoly::entry(&c, x, y);
        let r = if (i, j) == (k + 1, k) {
            -a(k + 1, k)
        } else if j == k && k + 2 <= i && i + 2 <= kp {
            &a(i, k + 1) - &(&a(i, k) * &a(k + 1, k))
        } else if j == k + 1 && k + 2 <= i && i + 2 <= kp {
            a(i, k)
        } else if i == k && j < k {
            &a(k + 1, j) - &(&a(k + 1, k) * &a(k, j))
        } else if i == k + 1 && j < k {
            a(k, j)
        } else if (i, j) == (kp - 1, k + 1) {
            &(&a(kp - 1, k) * &a(k + 1, k)) + &a(kp, k)
        } else if (i, j) == (kp - 1, k) {
            let b = self.beta(kp - 1, k + 1)?;
            let mut x = &a(kp, k) - &(&b * &a(k + 1, k));
            for t in k + 2..=kp - 2 {
                let bt = self.beta(t, k)?;
                x = &x + &(&a(c.prime(t), k) * &bt).scale(&GaussRat::from_int(c.eps(t)));
            }
            x
        } else if i == kp - 1 && j < k {
            &(&a(kp, kp - 1) * &a(kp - 1, j)) + &a(kp, j)
        } else if i == kp && j < k {
            a(kp - 1, j)
        } else if (i, j) == (kp, k) {
            &-(&a(kp - 1, k) * &a(k + 1, k)) + &a(kp - 1, k + 1)
        } else if i + j == c.dim() + 1 && ![k.wrapping_sub(1), k, k + 1].contains(&j) {
            let b = self.beta(i - 1, j + 1)?;
            &(&a(i, j) - &a(i - 1, j + 1)) + &b
        } else {
            return Ok(None);
        };
        Ok(Some(r))
    }

    fn row_penultimate(&mut self, i: usize, j: usize) -> Result<Option<PoissonPoly>, Error> {
        let n = self.n;
        let c = self.conv;
        let a = |x: usize, y: usize| PoissonPoly::entry(&c, x, y);
        let r = if (i, j) == (n, n - 1) {
            -a(n, n - 1)
        } else if (i, j) == (n + 1, n - 1) {
            -a(n + 2, n - 1)
        } else if i == n - 1 && j + 2 <= n {
            &a(n, j) - &(&a(n, n - 1) * &a(n - 1, j))
        } else if i == n && j + 2 <= n {
            a(n - 1, j)
        } else if (i, j) == (n + 1, n) {
            &-(&a(n + 2, n + 1) * &a(n + 1, n - 1)) - &a(n + 2, n - 1)
        } else if (i, j) == (n + 2, n - 1) {
            &(&a(n, n - 1) * &a(n + 1, n - 1)) - &a(n + 1, n)
        } else if i == n + 1 && j + 2 <= n {
            let l = j;
            let mut x = -a(n + 2, l);
            for t in n + 3..=c.prime(l) {
                x = &x + &(&(&a(n, n - 1) * &a(t, n)) * &a(c.prime(t), l));
            }
            &x + &(&(&a(n + 2, n - 1) - &a(n + 1, n)) * &a(n - 1, l))
        } else if i == n + 2 && j < n {
            -a(n + 1, j)
        } else if n >= 3 && (i, j) == (n + 3, n - 2) {
            &(&-a(n + 3, n - 2) - &(&a(n + 1, n - 1) * &a(n, n - 1))) + &(&a(n, n - 1) * &a(n + 1, n - 1))
        } else if i >= n + 3 && j + 3 <= n {
            -a(i, j)
        } else if i + j == c.dim() + 1 && j >= n + 4 {
            let b = self.beta(i - 1, j + 1)?;
            &(&-a(i, j) + &a(i - 1, j + 1)) + &b
        } else {
            return Ok(None);
        };
        Ok(Some(r))
    }

    fn row_last(&mut self, i: usize, j: usize) -> Option<PoissonPoly> {
        let n = self.n;
        let c = &self.conv;
        let a = |x: usize, y: usize| PoissonPoly::entry(c, x, y);
        let im = GaussRat::i();
        let r = if (i, j) == (n + 1, n) {
            -a(n + 1, n)
        } else if i == n && j < n {
            (&a(n + 1, j) - &(&a(n + 1, n) * &a(n, j))).scale(&im)
        } else if i == n + 1 && j < n {
            a(n, j).scale(&-&im)
        } else if n >= 2 && (i, j) == (n + 2, n - 1) {
            -a(n + 2, n - 1)
        } else {
            // The anti-diagonal case needs `m ≥ n+3`, which is never a
            // basis variable.
            return None;
        };
        Some(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{classical_structure_from_quantum, degenerate_bracket};

    fn v(i: u8, j: u8) -> PoissonPoly {
        PoissonPoly::var(Gen::new(i, j))
    }

    fn z(c: i64) -> GaussRat {
        GaussRat::from_int(c)
    }

    fn labels<T: Residual>(rep: &AuditReport<T>) -> Vec<&str> {
        rep.failures().map(|(l, _)| l.as_str()).collect()
    }

    #[test]
    fn bracket_of_generators() {
        let x = bracket_gen(2, 3, 1, 2, 1).unwrap();
        let want = &(&(&v(3, 1) * &v(2, 1)).scale(&z(-2)) + &v(3, 2).scale(&z(2))) + &v(4, 1).scale(&z(-2));
        assert_eq!(x, want);
        assert_eq!(bracket_gen(2, 2, 1, 3, 1).unwrap(), -x);
        assert!(bracket_gen(2, 3, 1, 3, 1).unwrap().is_zero());
        assert!(matches!(bracket_gen(2, 1, 3, 2, 1), Err(Error::BadIndices { .. })));
    }

    #[test]
    fn quadratic_part_is_graded() {
        for n in 1..=4 {
            let d = 2 * n;
            for (i, j, k, l) in (1..=d)
                .flat_map(|i| (1..i).flat_map(move |j| (1..=d).flat_map(move |k| (1..k).map(move |l| (i, j, k, l)))))
            {
                let want = weight(n, Gen::new(i as u8, j as u8)) + weight(n, Gen::new(k as u8, l as u8));
                let b = bracket_gen(n, i, j, k, l).unwrap();
                for (m, _) in b.terms().filter(|(m, _)| m.degree() == 2) {
                    assert_eq!(m.vars().iter().map(|&g| weight(n, g)).sum::<i32>(), want);
                }
            }
        }
        // The plain row-index sum is not a grading.
        let b = bracket_gen(2, 3, 1, 4, 2).unwrap();
        assert!(b.terms().any(|(m, _)| m.degree() == 2 && m.vars().iter().map(|g| g.row as usize).sum::<usize>() != 7));
    }

    #[test]
    fn formula_matches_quantum_commutators() {
        for n in 1..=3 {
            let engine = Engine::new(n).unwrap();
            let alg = PoissonAlgebra::new(n).unwrap();
            for p in pbw_generators(n) {
                for r in pbw_generators(n) {
                    let q = classical_structure_from_quantum(&engine, p, r).unwrap();
                    let f = bracket_gen(n, p.row as usize, p.col as usize, r.row as usize, r.col as usize).unwrap();
                    assert_eq!(alg.reduce(&f).unwrap(), q, "n={n} {p} {r}");
                }
            }
        }
    }

    #[test]
    fn elimination_matches_the_quantum_one() {
        for n in 1..=3 {
            let engine = Engine::new(n).unwrap();
            let alg = PoissonAlgebra::new(n).unwrap();
            assert_eq!(alg.elimination().len(), engine.elimination().len());
            for (g, x) in engine.elimination() {
                assert_eq!(alg.elimination()[g], PoissonPoly::from_element_at_one(x).unwrap(), "{g}");
            }
        }
        let alg = PoissonAlgebra::new(2).unwrap();
        assert_eq!(alg.elimination()[&Gen::new(4, 3)], v(2, 1));
    }

    #[test]
    fn leibniz_and_constants() {
        let alg = PoissonAlgebra::new(2).unwrap();
        let (a, b, c) = (v(2, 1), v(3, 2), v(4, 1));
        assert!(alg.bracket(&a, &PoissonPoly::one()).unwrap().is_zero());
        let lhs = alg.bracket(&(&a * &b), &c).unwrap();
        let rhs = &(&a * &alg.bracket(&b, &c).unwrap()) + &(&alg.bracket(&a, &c).unwrap() * &b);
        assert_eq!(lhs, rhs);
        assert!(matches!(alg.bracket(&v(7, 1), &a), Err(Error::NotInRank { .. })));
    }

    #[test]
    fn jacobi_identity() {
        for n in 1..=3 {
            let alg = PoissonAlgebra::new(n).unwrap();
            let rep = alg.jacobi_all().unwrap();
            assert!(rep.is_clean(), "n={n}: {:?}", labels(&rep));
        }
    }

    #[test]
    fn r_matrices() {
        for n in 1..=3 {
            assert_eq!(r_classical(n), r_from_quantum(n).unwrap(), "n={n}");
            let alg = PoissonAlgebra::new(n).unwrap();
            assert!(matrix_form_check(&alg).unwrap(), "n={n}");
        }
        assert!(matrix_form_report(&PoissonAlgebra::new(1).unwrap(), false).unwrap().is_empty());
        assert_eq!(matrix_form_report(&PoissonAlgebra::new(2).unwrap(), false).unwrap().len(), 14);
    }

    #[test]
    fn central_relations() {
        for n in 1..=3 {
            let alg = PoissonAlgebra::new(n).unwrap();
            assert!(alg.central_audit(Variant::Corrected).unwrap().is_clean());
        }
        let alg = PoissonAlgebra::new(2).unwrap();
        let printed = alg.central_audit(Variant::AsPrinted).unwrap();
        assert_eq!(labels(&printed), ["(3,1)", "(3,2)", "(4,1)"]);
        assert_eq!(labels(&PoissonAlgebra::new(1).unwrap().central_audit(Variant::AsPrinted).unwrap()), ["(2,1)"]);
        let rel = poisson_central(2, 4, 3, Variant::AsPrinted).unwrap();
        assert_eq!(rel.variables(), [Gen::new(2, 1), Gen::new(4, 3)]);
        for g in pbw_generators(2) {
            let x = poisson_central(2, 4, 2, Variant::Corrected).unwrap();
            assert!(alg.bracket(&x, &PoissonPoly::var(g)).unwrap().is_zero());
        }
    }

    #[test]
    fn braid_table_values() {
        let alg = PoissonAlgebra::new(2).unwrap();
        let x = poisson_braid(&alg, 2, &v(2, 1), Variant::AsPrinted).unwrap();
        assert_eq!(x, (&v(3, 1) - &(&v(3, 2) * &v(2, 1))).scale(&GaussRat::i()));
        for k in 1..=2 {
            let g = v(k as u8 + 1, k as u8);
            assert_eq!(poisson_braid(&alg, k, &g, Variant::AsPrinted).unwrap(), -g);
        }
        let c = PoissonPoly::constant(z(5));
        assert_eq!(poisson_braid(&alg, 1, &c, Variant::AsPrinted).unwrap(), c);
    }

    #[test]
    fn braid_tables_against_the_quantum_action() {
        let printed_failures: [(usize, usize, &[&str]); 5] = [
            (2, 1, &["s[3,1]"]),
            (2, 2, &[]),
            (3, 1, &["s[5,1]"]),
            (3, 2, &["s[4,1]", "s[4,2]"]),
            (3, 3, &["s[5,1]", "s[6,1]"]),
        ];
        for (n, k, want) in printed_failures {
            let engine = Engine::new(n).unwrap();
            let alg = PoissonAlgebra::new(n).unwrap();
            let printed = poisson_table_consistency(&alg, &engine, k, Variant::AsPrinted).unwrap();
            assert_eq!(labels(&printed), want, "n={n} k={k}");
            let corrected = poisson_table_consistency(&alg, &engine, k, Variant::Corrected).unwrap();
            assert!(corrected.is_clean(), "n={n} k={k}");
        }
    }

    #[test]
    fn braid_action_preserves_the_bracket() {
        for n in 1..=3 {
            let engine = Engine::new(n).unwrap();
            let alg = PoissonAlgebra::new(n).unwrap();
            for k in 1..=n {
                let rep = braid_preserves_bracket_check(&alg, &degenerate_braid(&engine, k).unwrap()).unwrap();
                assert!(rep.is_clean(), "n={n} k={k}");
                let table = poisson_braid_table(k, n, Variant::Corrected).unwrap();
                assert!(braid_preserves_bracket_check(&alg, &table).unwrap().is_clean());
            }
        }
        let alg = PoissonAlgebra::new(2).unwrap();
        let k1 = braid_preserves_bracket_check(&alg, &poisson_braid_table(1, 2, Variant::AsPrinted).unwrap()).unwrap();
        assert_eq!(k1.failures().count(), 10);
        let k2 = braid_preserves_bracket_check(&alg, &poisson_braid_table(2, 2, Variant::AsPrinted).unwrap()).unwrap();
        assert!(k2.is_clean());
    }

    #[test]
    fn quantum_and_poisson_braid_actions_commute_with_degeneration() {
        let engine = Engine::new(2).unwrap();
        let alg = PoissonAlgebra::new(2).unwrap();
        for k in 1..=2 {
            let act = BraidAction::new(&engine, braidact::beta(k, 2, Direction::Forward).unwrap()).unwrap();
            for p in pbw_generators(2) {
                for r in pbw_generators(2) {
                    let (sp, sr) = (Element::gen(p), Element::gen(r));
                    let quantum =
                        degenerate_bracket(&engine, &act.apply(&sp).unwrap(), &act.apply(&sr).unwrap()).unwrap();
                    let bracket = alg.bracket_vars(p, r).unwrap();
                    let classical = poisson_braid(&alg, k, bracket, Variant::Corrected).unwrap();
                    assert_eq!(alg.reduce(&quantum).unwrap(), classical, "k={k} {p} {r}");
                }
            }
        }
    }
}
