//! Index conventions, sparse matrices on `V` and `V ⊗ V` with
//! `dim V = 2n`, the R-matrix and its partial transpose, the
//! transpositions `t`, `u`, `ut`, and the machine expansion of the
//! reflection and central relations of the generating matrix `S`.
//!
//! Tensor indices: the basis vector `v_a ⊗ v_c` of `V ⊗ V` has the
//! row-major flat index `(a−1)·2n + (c−1)`. The coefficient of
//! `e_{ab} ⊗ e_{cd}` sits in row `(a,c)` and column `(b,d)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::freealg::{Element, Gen};
use crate::qscalar::{GaussRat, RatFunc};

/// `i' = 2n+1−i`, `ε_i` and `ī` for a fixed rank `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conv {
    pub n: usize,
}

impl Conv {
    pub fn new(n: usize) -> Self {
        Conv { n }
    }

    /// `2n`, the dimension of `V`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn prime(&self, i: usize) -> usize {
        2 * self.n + 1 - i
    }

    pub fn eps(&self, i: usize) -> i64 {
        if i <= self.n {
            1
        } else {
            -1
        }
    }

    /// `ī`: `(1̄, …, 2n̄) = (n, …, 1, −1, …, −n)`.
    pub fn bar(&self, i: usize) -> i32 {
        if i <= self.n {
            (self.n + 1 - i) as i32
        } else {
            -((i - self.n) as i32)
        }
    }
}

/// Coefficient rings usable as matrix entries.
pub trait Entry: Clone + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
}

impl Entry for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

impl Entry for GaussRat {
    fn zero() -> Self {
        GaussRat::zero()
    }
    fn is_zero(&self) -> bool {
        GaussRat::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

impl Entry for Element {
    fn zero() -> Self {
        Element::zero()
    }
    fn is_zero(&self) -> bool {
        Element::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

/// A sparse square matrix; products keep the left-to-right order of the
/// entries, so noncommutative entries are handled correctly.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T: Entry> {
    size: usize,
    rows: Vec<BTreeMap<usize, T>>,
}

impl<T: Entry> Matrix<T> {
    pub fn zero(size: usize) -> Self {
        Matrix { size, rows: vec![BTreeMap::new(); size] }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry at 0-based `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> T {
        self.rows[r].get(&c).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        if v.is_zero() {
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c, v);
        }
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &T) {
        let cur = self.get(r, c);
        self.set(r, c, cur.add(v));
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.rows.iter().enumerate().flat_map(|(r, m)| m.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn mul(&self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.size, o.size, "matrix sizes differ");
        let mut out = Matrix::zero(self.size);
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, T> = BTreeMap::new();
            for (k, a) in row {
                for (c, b) in &o.rows[*k] {
                    let p = a.mul(b);
                    match acc.get_mut(c) {
                        Some(x) => *x = x.add(&p),
                        None => {
                            acc.insert(*c, p);
                        }
                    }
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.rows[r] = acc;
        }
        out
    }

    pub fn map<U: Entry, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        let mut out = Matrix::zero(self.size);
        for (r, c, v) in self.entries() {
            out.set(r, c, f(v));
        }
        out
    }

    /// `A ⊗ B` with the row-major flattening of the module docs.
    pub fn kron(&self, o: &Matrix<T>) -> Matrix<T> {
        let m = o.size;
        let mut out = Matrix::zero(self.size * m);
        for (a, b, x) in self.entries() {
            for (c, d, y) in o.entries() {
                out.set(a * m + c, b * m + d, x.mul(y));
            }
        }
        out
    }
}

impl Matrix<RatFunc> {
    pub fn identity(size: usize) -> Self {
        let mut m = Matrix::zero(size);
        for k in 0..size {
            m.set(k, k, RatFunc::one());
        }
        m
    }

    pub fn diag(values: &[RatFunc]) -> Self {
        let mut m = Matrix::zero(values.len());
        for (k, v) in values.iter().enumerate() {
            m.set(k, k, v.clone());
        }
        m
    }

    pub fn to_elements(&self) -> Matrix<Element> {
        self.map(|c| Element::constant(c.clone()))
    }
}

/// Tensor-entry key `((a,c),(b,d))`, 1-based, for the coefficient of
/// `e_{ab} ⊗ e_{cd}`.
pub type TensorKey = ((usize, usize), (usize, usize));

fn flat(conv: &Conv, a: usize, c: usize) -> usize {
    (a - 1) * conv.dim() + (c - 1)
}

fn unflat(conv: &Conv, x: usize) -> (usize, usize) {
    (x / conv.dim() + 1, x % conv.dim() + 1)
}

/// Reads an operator on `V ⊗ V` by tensor key.
pub fn tensor_get<T: Entry>(m: &Matrix<T>, conv: &Conv, key: TensorKey) -> T {
    let ((a, c), (b, d)) = key;
    m.get(flat(conv, a, c), flat(conv, b, d))
}

/// Nonzero entries of an operator on `V ⊗ V` keyed by tensor index.
pub fn tensor_entries<'a, T: Entry>(m: &'a Matrix<T>, conv: &'a Conv) -> impl Iterator<Item = (TensorKey, &'a T)> + 'a {
    m.entries().map(move |(r, c, v)| ((unflat(conv, r), unflat(conv, c)), v))
}

fn q_pow(e: i32) -> RatFunc {
    RatFunc::q_pow(e)
}

fn q_minus_qinv() -> RatFunc {
    &RatFunc::q() - &RatFunc::q_pow(-1)
}

/// Adds `v · e_{ab} ⊗ e_{cd}`, optionally transposing the first leg.
fn put(
    m: &mut Matrix<RatFunc>,
    conv: &Conv,
    first_leg_u: bool,
    (a, b): (usize, usize),
    (c, d): (usize, usize),
    v: &RatFunc,
) {
    let (a, b) = if first_leg_u { (b, a) } else { (a, b) };
    m.add_at(flat(conv, a, c), flat(conv, b, d), v);
}

fn build_r_impl(n: usize, first_leg_u: bool) -> Matrix<RatFunc> {
    let conv = Conv::new(n);
    let big_n = conv.dim();
    let mut m = Matrix::zero(big_n * big_n);
    for i in 1..=big_n {
        for j in 1..=big_n {
            let e = (i == j) as i32 - (i == conv.prime(j)) as i32;
            put(&mut m, &conv, first_leg_u, (i, i), (j, j), &q_pow(e));
        }
    }
    let h = q_minus_qinv();
    for i in 1..=big_n {
        for j in i + 1..=big_n {
            put(&mut m, &conv, first_leg_u, (i, j), (j, i), &h);
            let c = q_pow(conv.bar(j) - conv.bar(i)).scale(&GaussRat::from_int(-conv.eps(i) * conv.eps(j)));
            put(&mut m, &conv, first_leg_u, (i, j), (conv.prime(i), conv.prime(j)), &(&h * &c));
        }
    }
    m
}

/// The R-matrix on `V ⊗ V`.
pub fn build_r(n: usize) -> Matrix<RatFunc> {
    build_r_impl(n, false)
}

/// `R^u`: the R-matrix with the usual transposition applied to its first
/// tensor leg.
pub fn build_ru(n: usize) -> Matrix<RatFunc> {
    build_r_impl(n, true)
}

/// The closed-form expansion of `R^u` with diagonal exponent
/// `δ_{ij} − δ_{i'j'}`. It disagrees with
/// [`build_ru`] on the diagonal block; see [`ru_closed_form_discrepancies`].
pub fn build_ru_closed_form(n: usize) -> Matrix<RatFunc> {
    let conv = Conv::new(n);
    let big_n = conv.dim();
    let mut m = Matrix::zero(big_n * big_n);
    for i in 1..=big_n {
        for j in 1..=big_n {
            let e = (i == j) as i32 - (conv.prime(i) == conv.prime(j)) as i32;
            put(&mut m, &conv, false, (i, i), (j, j), &q_pow(e));
        }
    }
    let h = q_minus_qinv();
    for i in 1..=big_n {
        for j in i + 1..=big_n {
            put(&mut m, &conv, false, (j, i), (j, i), &h);
            let c = q_pow(conv.bar(j) - conv.bar(i)).scale(&GaussRat::from_int(-conv.eps(i) * conv.eps(j)));
            put(&mut m, &conv, false, (j, i), (conv.prime(i), conv.prime(j)), &(&h * &c));
        }
    }
    m
}

/// Tensor keys where the closed-form expansion of `R^u` differs from the
/// partial transpose of `R`.
pub fn ru_closed_form_discrepancies(n: usize) -> Vec<TensorKey> {
    let conv = Conv::new(n);
    let a = build_ru(n);
    let b = build_ru_closed_form(n);
    let size = a.size();
    let mut out = Vec::new();
    for r in 0..size {
        for c in 0..size {
            if a.get(r, c) != b.get(r, c) {
                out.push((unflat(&conv, r), unflat(&conv, c)));
            }
        }
    }
    out
}

/// Embeds an operator on `V ⊗ V` into legs `(x, y)` of `V^{⊗3}`.
pub fn embed3(m: &Matrix<RatFunc>, conv: &Conv, legs: (usize, usize)) -> Matrix<RatFunc> {
    let d = conv.dim();
    let mut out = Matrix::zero(d * d * d);
    let third = 3 - legs.0 - legs.1;
    for (r, c, v) in m.entries() {
        let (ra, rb) = (r / d, r % d);
        let (ca, cb) = (c / d, c % d);
        for z in 0..d {
            let mut ri = [0usize; 3];
            let mut ci = [0usize; 3];
            ri[legs.0] = ra;
            ri[legs.1] = rb;
            ri[third] = z;
            ci[legs.0] = ca;
            ci[legs.1] = cb;
            ci[third] = z;
            out.set(ri[0] * d * d + ri[1] * d + ri[2], ci[0] * d * d + ci[1] * d + ci[2], v.clone());
        }
    }
    out
}

/// `R₁₂R₁₃R₂₃ = R₂₃R₁₃R₁₂` exactly.
pub fn check_ybe(n: usize) -> bool {
    let conv = Conv::new(n);
    let r = build_r(n);
    let r12 = embed3(&r, &conv, (0, 1));
    let r13 = embed3(&r, &conv, (0, 2));
    let r23 = embed3(&r, &conv, (1, 2));
    r12.mul(&r13).mul(&r23) == r23.mul(&r13).mul(&r12)
}

/// The transpositions of `End(V)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transposition {
    /// `e_{ij} ↦ ε_iε_j e_{j'i'}`
    T,
    /// `e_{ij} ↦ e_{ji}`
    U,
    /// `e_{ij} ↦ ε_iε_j e_{i'j'}`
    Ut,
}

/// Applies a transposition entrywise to a `2n × 2n` matrix.
pub fn transpose<T: Entry>(m: &Matrix<T>, kind: Transposition, n: usize, neg: impl Fn(&T) -> T) -> Matrix<T> {
    let conv = Conv::new(n);
    let mut out = Matrix::zero(m.size());
    for (r, c, v) in m.entries() {
        let (i, j) = (r + 1, c + 1);
        let (ti, tj, sign) = match kind {
            Transposition::T => (conv.prime(j), conv.prime(i), conv.eps(i) * conv.eps(j)),
            Transposition::U => (j, i, 1),
            Transposition::Ut => (conv.prime(i), conv.prime(j), conv.eps(i) * conv.eps(j)),
        };
        let val = if sign < 0 { neg(v) } else { v.clone() };
        out.set(ti - 1, tj - 1, val);
    }
    out
}

/// Scalar transposition helper.
pub fn transpose_scalar(m: &Matrix<RatFunc>, kind: Transposition, n: usize) -> Matrix<RatFunc> {
    transpose(m, kind, n, |x| -x)
}

/// `J = Σ ε_k e_{kk}`.
pub fn j_matrix(n: usize) -> Matrix<RatFunc> {
    let conv = Conv::new(n);
    let v: Vec<RatFunc> = (1..=conv.dim()).map(|k| RatFunc::from_int(conv.eps(k))).collect();
    Matrix::diag(&v)
}

/// `D = diag(q^{1̄}, …, q^{2n̄})`.
pub fn d_matrix(n: usize) -> Matrix<RatFunc> {
    let conv = Conv::new(n);
    let v: Vec<RatFunc> = (1..=conv.dim()).map(|k| q_pow(conv.bar(k))).collect();
    Matrix::diag(&v)
}

/// `C = diag(c₁, …, c_{2n})` with `c_k c_{k'} = λ`, built from the free
/// values `c₁, …, c_n`.
pub fn c_matrix(n: usize, first_half: &[GaussRat], lambda: &GaussRat) -> Option<Matrix<RatFunc>> {
    if first_half.len() != n || first_half.iter().any(GaussRat::is_zero) || lambda.is_zero() {
        return None;
    }
    let conv = Conv::new(n);
    let mut v = vec![RatFunc::zero(); conv.dim()];
    for (k, c) in first_half.iter().enumerate() {
        v[k] = RatFunc::constant(c.clone());
        v[conv.prime(k + 1) - 1] = RatFunc::constant(lambda.div(c).ok()?);
    }
    Some(Matrix::diag(&v))
}

/// `R K₁ R^u K₂ = K₂ R^u K₁ R` for a scalar `2n × 2n` matrix `K`.
pub fn check_const_reflection(k: &Matrix<RatFunc>, n: usize) -> bool {
    let d = 2 * n;
    let id = Matrix::identity(d);
    let r = build_r(n);
    let ru = build_ru(n);
    let k1 = k.kron(&id);
    let k2 = id.kron(k);
    r.mul(&k1).mul(&ru).mul(&k2) == k2.mul(&ru).mul(&k1).mul(&r)
}

/// `R J R^u = R^u J R` with `J = J ⊗ J` acting on both legs.
pub fn check_rjru_symmetry(n: usize) -> bool {
    let j1 = j_matrix(n).kron(&j_matrix(n));
    let r = build_r(n);
    let ru = build_ru(n);
    r.mul(&j1).mul(&ru) == ru.mul(&j1).mul(&r)
}

/// The entry `s_{ij}` of the generating matrix: `ε_i` on the diagonal,
/// 0 above it, the generator below it.
pub fn s_entry(conv: &Conv, i: usize, j: usize) -> Element {
    match i.cmp(&j) {
        core::cmp::Ordering::Less => Element::zero(),
        core::cmp::Ordering::Equal => Element::constant(RatFunc::from_int(conv.eps(i))),
        core::cmp::Ordering::Greater => Element::gen(Gen::new(i as u8, j as u8)),
    }
}

/// The lower-triangular matrix `S` with generator entries.
pub fn symbolic_s(n: usize) -> Matrix<Element> {
    let conv = Conv::new(n);
    let mut m = Matrix::zero(conv.dim());
    for i in 1..=conv.dim() {
        for j in 1..=i {
            m.set(i - 1, j - 1, s_entry(&conv, i, j));
        }
    }
    m
}

/// The entry `s̄_{ij}` written in the generators `s`.
///
/// `s̄_{ii} = ε_{i'}`, `s̄_{ij} = 0` for `i < j`,
/// `s̄_{ij} = q ε_iε_j s_{j'i'}` for `j < i`, `i ≠ j'`, and
/// `s̄_{j'j} = −q² s_{j'j} + (q²−1) Σ_{m=j+1}^{n} q^{m̄−j̄} s̄_{m'm}`.
pub fn sbar(conv: &Conv, i: usize, j: usize) -> Element {
    if i < j {
        return Element::zero();
    }
    if i == j {
        return Element::constant(RatFunc::from_int(conv.eps(conv.prime(i))));
    }
    if i != conv.prime(j) {
        let c = RatFunc::q().scale(&GaussRat::from_int(conv.eps(i) * conv.eps(j)));
        return Element::gen(Gen::new(conv.prime(j) as u8, conv.prime(i) as u8)).scale(&c);
    }
    let mut r = Element::gen(Gen::new(i as u8, j as u8)).scale(&-q_pow(2));
    let q2m1 = &q_pow(2) - &RatFunc::one();
    for m in j + 1..=conv.n {
        let c = &q2m1 * &q_pow(conv.bar(m) - conv.bar(j));
        r = &r + &sbar(conv, conv.prime(m), m).scale(&c);
    }
    r
}

/// The matrix `S̄` with entries from [`sbar`].
pub fn symbolic_sbar(n: usize) -> Matrix<Element> {
    let conv = Conv::new(n);
    let mut m = Matrix::zero(conv.dim());
    for i in 1..=conv.dim() {
        for j in 1..=i {
            m.set(i - 1, j - 1, sbar(&conv, i, j));
        }
    }
    m
}

/// One relation produced by a matrix identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    /// Human-readable entry index, e.g. `((1,2),(2,1))` or `(3,1)`.
    pub index: String,
    pub element: Element,
}

/// Every nonzero tensor entry of `R S₁ R^u S₂ − S₂ R^u S₁ R`.
pub fn expand_reflection(n: usize) -> Vec<Relation> {
    let conv = Conv::new(n);
    let d = conv.dim();
    let id = Matrix::<RatFunc>::identity(d).to_elements();
    let s = symbolic_s(n);
    let s1 = s.kron(&id);
    let s2 = id.kron(&s);
    let r = build_r(n).to_elements();
    let ru = build_ru(n).to_elements();
    let lhs = r.mul(&s1).mul(&ru).mul(&s2);
    let rhs = s2.mul(&ru).mul(&s1).mul(&r);
    let mut out = Vec::new();
    for row in 0..d * d {
        for col in 0..d * d {
            let e = &lhs.get(row, col) - &rhs.get(row, col);
            if !e.is_zero() {
                let ((a, c), (b, dd)) = (unflat(&conv, row), unflat(&conv, col));
                out.push(Relation { index: format!("(({a},{c}),({b},{dd}))"), element: e });
            }
        }
    }
    out
}

/// The `(i,j)` entry of `S̄ D⁻¹ S D + I`, with `s̄` expanded.
pub fn central_entry(conv: &Conv, i: usize, j: usize) -> Element {
    let mut r = if i == j { Element::one() } else { Element::zero() };
    for k in 1..=conv.dim() {
        let sb = sbar(conv, i, k);
        if sb.is_zero() {
            continue;
        }
        let sk = s_entry(conv, k, j);
        if sk.is_zero() {
            continue;
        }
        r = &r + &(&sb * &sk).scale(&q_pow(conv.bar(j) - conv.bar(k)));
    }
    r
}

/// Every nonzero entry of `S̄ D⁻¹ S D + I`.
pub fn expand_central(n: usize) -> Vec<Relation> {
    let conv = Conv::new(n);
    let mut out = Vec::new();
    for i in 1..=conv.dim() {
        for j in 1..=conv.dim() {
            let e = central_entry(&conv, i, j);
            if !e.is_zero() {
                out.push(Relation { index: format!("({i},{j})"), element: e });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(ts: &[(i32, i64)]) -> RatFunc {
        RatFunc::from_laurent(crate::qscalar::LaurentPoly::from_terms(
            ts.iter().map(|&(e, c)| (e, GaussRat::from_int(c))),
        ))
    }

    #[test]
    fn conventions() {
        let c = Conv::new(3);
        for i in 1..=6 {
            assert_eq!(c.prime(c.prime(i)), i);
            assert_eq!(c.eps(c.prime(i)), -c.eps(i));
            assert_eq!(c.bar(c.prime(i)), -c.bar(i));
        }
        assert_eq!((1..=6).map(|i| c.bar(i)).collect::<Vec<_>>(), vec![3, 2, 1, -1, -2, -3]);
    }

    #[test]
    fn r_matrix_entries_rank_one() {
        let c = Conv::new(1);
        let r = build_r(1);
        assert_eq!(tensor_get(&r, &c, ((1, 1), (1, 1))), RatFunc::q());
        assert_eq!(tensor_get(&r, &c, ((1, 2), (1, 2))), rf(&[(-1, 1)]));
        // at n = 1 both off-diagonal sums land on e_{12} ⊗ e_{21}
        assert_eq!(tensor_get(&r, &c, ((1, 2), (2, 1))), rf(&[(1, 1), (-3, -1)]));
        assert!(tensor_get(&r, &c, ((1, 1), (2, 2))).is_zero());
    }

    #[test]
    fn yang_baxter_small_ranks() {
        assert!(check_ybe(1));
        assert!(check_ybe(2));
    }

    #[test]
    fn transpositions() {
        let mut e12 = Matrix::<RatFunc>::zero(2);
        e12.set(0, 1, RatFunc::one());
        let u = transpose_scalar(&e12, Transposition::U, 1);
        assert_eq!(u.get(1, 0), RatFunc::one());
        let ut = transpose_scalar(&e12, Transposition::Ut, 1);
        assert_eq!(ut.get(1, 0), RatFunc::from_int(-1));
        let t = transpose_scalar(&e12, Transposition::T, 1);
        assert_eq!(transpose_scalar(&t, Transposition::T, 1), e12);
    }

    #[test]
    fn constant_solutions() {
        assert!(check_const_reflection(&j_matrix(2), 2));
        assert!(check_const_reflection(&Matrix::identity(2), 1));
        let c = c_matrix(2, &[GaussRat::from_int(2), GaussRat::from_int(-3)], &GaussRat::from_int(5)).unwrap();
        assert!(check_const_reflection(&c, 2));
    }

    #[test]
    fn rjru_symmetry() {
        assert!(check_rjru_symmetry(1));
        assert!(check_rjru_symmetry(2));
    }

    #[test]
    fn symbolic_s_rank_one() {
        let s = symbolic_s(1);
        assert_eq!(s.get(0, 0), Element::one());
        assert_eq!(s.get(0, 1), Element::zero());
        assert_eq!(s.get(1, 0), crate::freealg::s(2, 1));
        assert_eq!(s.get(1, 1), Element::constant(RatFunc::from_int(-1)));
    }

    #[test]
    fn sbar_examples() {
        let c = Conv::new(2);
        assert_eq!(sbar(&c, 3, 2), crate::freealg::s(3, 2).scale(&-RatFunc::q_pow(2)));
        assert_eq!(sbar(&c, 3, 1), crate::freealg::s(4, 2).scale(&-RatFunc::q()));
        assert_eq!(sbar(&c, 1, 1), Element::constant(RatFunc::from_int(-1)));
    }

    #[test]
    fn central_diagonal_rank_one() {
        let c = Conv::new(1);
        // s̄_{11} s_{11} + 1 = (−1)(1) + 1
        assert!(central_entry(&c, 1, 1).is_zero());
    }
}
