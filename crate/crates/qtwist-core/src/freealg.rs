//! The free associative algebra over `Q(i)(q)` on the generators
//! `s[i,j]`, `i > j`: words, linear combinations, products and
//! substitution.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::qscalar::RatFunc;
use crate::Error;

/// The generator `s[row,col]` with `row > col`.
///
/// The derived order compares `row` first and then `col`; this is the
/// order of letters inside PBW monomials.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Gen {
    pub row: u8,
    pub col: u8,
}

impl Gen {
    pub const fn new(row: u8, col: u8) -> Self {
        Gen { row, col }
    }

    /// True if the generator exists at rank `n` (`2n ≥ row > col ≥ 1`).
    pub fn in_rank(self, n: usize) -> bool {
        self.col >= 1 && self.row > self.col && (self.row as usize) <= 2 * n
    }

    /// `col' ≥ row > col`, i.e. `row + col ≤ 2n + 1`.
    pub fn is_omega1(self, n: usize) -> bool {
        self.in_rank(n) && (self.row as usize + self.col as usize) <= 2 * n + 1
    }

    /// `row > col > row'`, i.e. `row + col > 2n + 1`.
    pub fn is_omega2(self, n: usize) -> bool {
        self.in_rank(n) && (self.row as usize + self.col as usize) > 2 * n + 1
    }

    /// The band generator `s_m = s[m+1,m]`.
    pub fn band(m: usize) -> Self {
        Gen::new(m as u8 + 1, m as u8)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s[{},{}]", self.row, self.col)
    }
}

/// All generators `s[i,j]` of rank `n`, sorted by `(row, col)`.
pub fn all_generators(n: usize) -> Vec<Gen> {
    let mut v = Vec::new();
    for i in 2..=2 * n {
        for j in 1..i {
            v.push(Gen::new(i as u8, j as u8));
        }
    }
    v
}

/// A product of generators; the empty word is the unit.
///
/// Words are ordered by length, then weight (sum of row indices), then
/// lexicographically on the letters. This is the canonical print order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    /// Sum of the row indices of the letters.
    pub fn weight(&self) -> usize {
        self.0.iter().map(|g| g.row as usize).sum()
    }

    /// `(length, weight)`.
    pub fn stats(&self) -> (usize, usize) {
        (self.len(), self.weight())
    }

    /// True if the letters are non-decreasing in `(row, col)`.
    pub fn is_ordered(&self) -> bool {
        self.0.windows(2).all(|p| p[0] <= p[1])
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + o.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&o.0);
        Word(v)
    }
}

impl From<Vec<Gen>> for Word {
    fn from(v: Vec<Gen>) -> Self {
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.len().cmp(&o.len()).then_with(|| self.weight().cmp(&o.weight())).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// A finite linear combination of words with `RatFunc` coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Element {
    terms: BTreeMap<Word, RatFunc>,
}

impl Element {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(RatFunc::one())
    }

    pub fn constant(c: RatFunc) -> Self {
        Self::term(Word::unit(), c)
    }

    pub fn gen(g: Gen) -> Self {
        Self::term(Word(alloc::vec![g]), RatFunc::one())
    }

    /// `c·w`.
    pub fn term(w: Word, c: RatFunc) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    /// The word `g₁g₂⋯` with coefficient 1.
    pub fn word(gens: &[Gen]) -> Self {
        Self::term(Word(gens.to_vec()), RatFunc::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical word order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &RatFunc)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, RatFunc> {
        self.terms
    }

    pub fn coeff(&self, w: &Word) -> RatFunc {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Adds `c·w` in place.
    pub fn add_term(&mut self, w: Word, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                let s = &*x + &c;
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    /// Adds `c·x` in place.
    pub fn add_scaled(&mut self, x: &Element, c: &RatFunc) {
        for (w, v) in &x.terms {
            self.add_term(w.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    /// The largest word length occurring.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// The scalar value if the element is a multiple of the unit.
    pub fn as_constant(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => self.terms.get(&Word::unit()).cloned(),
            _ => None,
        }
    }

    /// Every generator occurring in some word.
    pub fn generators(&self) -> Vec<Gen> {
        let mut v: Vec<Gen> = self.terms.keys().flat_map(|w| w.0.iter().copied()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Applies the algebra map determined by `image` on generators.
    pub fn substitute_with<F>(&self, mut image: F) -> Result<Element, Error>
    where
        F: FnMut(Gen) -> Option<Element>,
    {
        let mut cache: BTreeMap<Gen, Element> = BTreeMap::new();
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            let mut acc = Element::constant(c.clone());
            for g in &w.0 {
                if !cache.contains_key(g) {
                    let img = image(*g).ok_or(Error::MissingImage(*g))?;
                    cache.insert(*g, img);
                }
                acc = &acc * &cache[g];
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Applies the algebra map extending `images`.
    pub fn substitute(&self, images: &BTreeMap<Gen, Element>) -> Result<Element, Error> {
        self.substitute_with(|g| images.get(&g).cloned())
    }
}

impl From<Gen> for Element {
    fn from(g: Gen) -> Self {
        Element::gen(g)
    }
}

impl From<RatFunc> for Element {
    fn from(c: RatFunc) -> Self {
        Element::constant(c)
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, o: &Element) -> Element {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut r = big.clone();
        for (w, c) in &small.terms {
            r.add_term(w.clone(), c.clone());
        }
        r
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, o: &Element) -> Element {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), -c);
        }
        r
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, o: &Element) -> Element {
        let mut r = Element::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                r.add_term(w1.concat(w2), c1 * c2);
            }
        }
        r
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, o: Element) -> Element {
        &self + &o
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, o: Element) -> Element {
        &self - &o
    }
}

impl Mul for Element {
    type Output = Element;
    fn mul(self, o: Element) -> Element {
        &self * &o
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) * {w}")?;
        }
        Ok(())
    }
}

/// Shorthand for the generator `s[i,j]`.
pub fn s(i: usize, j: usize) -> Element {
    Element::gen(Gen::new(i as u8, j as u8))
}

/// Commutator `xy − yx`.
pub fn commutator(x: &Element, y: &Element) -> Element {
    &(x * y) - &(y * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_is_identity() {
        assert_eq!(&Element::one() * &s(2, 1), s(2, 1));
        assert_eq!(&s(2, 1) * &Element::one(), s(2, 1));
    }

    #[test]
    fn distributivity_example() {
        let lhs = &(&s(2, 1) + &s(3, 1)) * &s(3, 2);
        let rhs = &(&s(2, 1) * &s(3, 2)) + &(&s(3, 1) * &s(3, 2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalars_cancel() {
        let a = s(2, 1).scale(&RatFunc::q());
        let b = s(2, 1).scale(&RatFunc::q_pow(-1));
        assert_eq!(&a * &b, &s(2, 1) * &s(2, 1));
    }

    #[test]
    fn substitution_examples() {
        let mut m = BTreeMap::new();
        m.insert(Gen::new(2, 1), s(3, 1));
        m.insert(Gen::new(3, 1), s(2, 1));
        assert_eq!((&s(2, 1) * &s(3, 1)).substitute(&m).unwrap(), &s(3, 1) * &s(2, 1));
        let x = s(2, 1).scale(&RatFunc::q());
        let mut neg = BTreeMap::new();
        neg.insert(Gen::new(2, 1), -&s(2, 1));
        assert_eq!(x.substitute(&neg).unwrap(), s(2, 1).scale(&-RatFunc::q()));
        assert_eq!(x.substitute(&BTreeMap::new()), Err(Error::MissingImage(Gen::new(2, 1))));
    }

    #[test]
    fn word_statistics() {
        let w = Word(alloc::vec![Gen::new(3, 1), Gen::new(4, 1)]);
        assert_eq!(w.stats(), (2, 7));
        assert_eq!(Word::unit().stats(), (0, 0));
        assert_eq!(Word(alloc::vec![Gen::new(2, 1); 3]).stats(), (3, 6));
    }

    #[test]
    fn membership_flags() {
        assert!(Gen::new(4, 1).is_omega1(2));
        assert!(Gen::new(4, 2).is_omega2(2));
        assert!(!Gen::new(2, 1).is_omega2(1));
        assert_eq!(all_generators(2).iter().filter(|g| g.is_omega1(2)).count(), 4);
    }
}
