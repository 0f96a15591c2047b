//! The `q = 1` side as concrete matrices: the symplectic Lie algebra
//! `sp_2n` spanned by `F_{ij}`, the involution `θ`, its fixed subalgebra
//! spanned by `G_{ij}`, the isomorphism `ψ: gl_n → sp_2n^θ`, and the
//! structure constants read off from quantum commutators.
//!
//! Every bracket here is a matrix commutator, so this module serves as an
//! oracle for the closed formulas elsewhere.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::audit::AuditReport;
use crate::freealg::{Element, Gen};
use crate::pbwengine::{pbw_generators, Engine};
use crate::poisson::PoissonPoly;
use crate::qscalar::{eval_at_one_after_dividing, GaussRat};
use crate::tensorlab::{Conv, Entry, Matrix};
use crate::Error;

/// A `2n × 2n` matrix with Gaussian-rational entries.
pub type ClassicalMatrix = Matrix<GaussRat>;

/// A linear combination of the basis elements `G_{ij}`, `(i,j) ∈ Ω₁`.
pub type GComb = BTreeMap<Gen, GaussRat>;

fn int(v: i64) -> GaussRat {
    GaussRat::from_int(v)
}

/// The elementary matrix `e_{ij}` (1-based indices).
pub fn e(n: usize, i: usize, j: usize) -> ClassicalMatrix {
    let mut m = Matrix::zero(2 * n);
    m.set(i - 1, j - 1, GaussRat::one());
    m
}

/// `F_{ij} = e_{ij} − ε_iε_j e_{j'i'}`.
pub fn f_mat(n: usize, i: usize, j: usize) -> ClassicalMatrix {
    let c = Conv::new(n);
    let mut m = e(n, i, j);
    m.add_at(c.prime(j) - 1, c.prime(i) - 1, &int(-c.eps(i) * c.eps(j)));
    m
}

/// `G_{ij} = ε_iF_{ij} − ε_jF_{ji}`.
pub fn g_mat(n: usize, i: usize, j: usize) -> ClassicalMatrix {
    let c = Conv::new(n);
    sub(&scale(&f_mat(n, i, j), &int(c.eps(i))), &scale(&f_mat(n, j, i), &int(c.eps(j))))
}

/// `J = Σ ε_k e_{kk}`.
pub fn j_mat(n: usize) -> ClassicalMatrix {
    let c = Conv::new(n);
    let mut m = Matrix::zero(c.dim());
    for k in 1..=c.dim() {
        m.set(k - 1, k - 1, int(c.eps(k)));
    }
    m
}

/// The form `Ω = Σ ε_i e_{ii'}` preserved by `sp_2n`.
pub fn symplectic_form(n: usize) -> ClassicalMatrix {
    let c = Conv::new(n);
    let mut m = Matrix::zero(c.dim());
    for i in 1..=c.dim() {
        m.set(i - 1, c.prime(i) - 1, int(c.eps(i)));
    }
    m
}

pub fn transpose(x: &ClassicalMatrix) -> ClassicalMatrix {
    let mut m = Matrix::zero(x.size());
    for (r, c, v) in x.entries() {
        m.set(c, r, v.clone());
    }
    m
}

pub fn scale(x: &ClassicalMatrix, s: &GaussRat) -> ClassicalMatrix {
    x.map(|v| v * s)
}

pub fn add(x: &ClassicalMatrix, y: &ClassicalMatrix) -> ClassicalMatrix {
    let mut m = x.clone();
    for (r, c, v) in y.entries() {
        m.add_at(r, c, v);
    }
    m
}

pub fn sub(x: &ClassicalMatrix, y: &ClassicalMatrix) -> ClassicalMatrix {
    add(x, &scale(y, &int(-1)))
}

/// `[x, y] = xy − yx`.
pub fn bracket(x: &ClassicalMatrix, y: &ClassicalMatrix) -> ClassicalMatrix {
    sub(&x.mul(y), &y.mul(x))
}

/// True when `XᵘΩ + ΩX = 0`.
pub fn is_symplectic(x: &ClassicalMatrix, n: usize) -> bool {
    let w = symplectic_form(n);
    add(&transpose(x).mul(&w), &w.mul(x)).entries().next().is_none()
}

/// `θ(X) = J Xᵘ J⁻¹` (here `J⁻¹ = J`).
pub fn theta(x: &ClassicalMatrix, n: usize) -> ClassicalMatrix {
    let j = j_mat(n);
    j.mul(&transpose(x)).mul(&j)
}

/// The basis `G_{ij}`, `(i,j) ∈ Ω₁`, in the order of [`pbw_generators`].
pub fn g_basis(n: usize) -> Vec<(Gen, ClassicalMatrix)> {
    pbw_generators(n).into_iter().map(|g| (g, g_mat(n, g.row as usize, g.col as usize))).collect()
}

/// The matrix `Σ c_g G_g`.
pub fn g_comb_matrix(n: usize, x: &GComb) -> ClassicalMatrix {
    let mut m = Matrix::zero(2 * n);
    for (g, c) in x {
        m = add(&m, &scale(&g_mat(n, g.row as usize, g.col as usize), c));
    }
    m
}

/// Writes `x` in the basis `G_{ij}`, `(i,j) ∈ Ω₁`. The coefficient of
/// `G_{ij}` is read from the `(i,j)` entry, where it is the only basis
/// element with support; the result is checked by reassembly.
pub fn decompose(x: &ClassicalMatrix, n: usize) -> Option<GComb> {
    let mut out = GComb::new();
    for (g, m) in g_basis(n) {
        let (r, c) = (g.row as usize - 1, g.col as usize - 1);
        let v = x.get(r, c);
        if !v.is_zero() {
            out.insert(g, v.div(&m.get(r, c)).ok()?);
        }
    }
    (g_comb_matrix(n, &out) == *x).then_some(out)
}

/// Rank over `Q(i)` of a list of matrices viewed as vectors.
pub fn rank(ms: &[ClassicalMatrix]) -> usize {
    let mut rows: Vec<BTreeMap<(usize, usize), GaussRat>> = Vec::new();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for m in ms {
        let mut v: BTreeMap<(usize, usize), GaussRat> = m.entries().map(|(r, c, x)| ((r, c), x.clone())).collect();
        for (row, p) in rows.iter().zip(&pivots) {
            if let Some(f) = v.get(p).cloned() {
                for (k, x) in row {
                    let cur = v.remove(k).unwrap_or_default();
                    let nv = &cur - &(&f * x);
                    if !nv.is_zero() {
                        v.insert(*k, nv);
                    }
                }
            }
        }
        if let Some((&p, lead)) = v.iter().next() {
            let inv = lead.inv().expect("nonzero pivot");
            let v: BTreeMap<_, _> = v.iter().map(|(k, x)| (*k, x * &inv)).collect();
            rows.push(v);
            pivots.push(p);
        }
    }
    rows.len()
}

/// `[G_{ij}, G_{kl}]` by the closed formula, as a combination of symbols
/// `G_{xy}` with arbitrary indices.
pub fn g_bracket_formula(n: usize, (i, j): (usize, usize), (k, l): (usize, usize)) -> Vec<((usize, usize), GaussRat)> {
    let c = Conv::new(n);
    let (ip, jp) = (c.prime(i), c.prime(j));
    let d = |a: usize, b: usize| i64::from(a == b);
    let (ei, ej) = (c.eps(i), c.eps(j));
    let terms = [
        (ej * d(j, k), (i, l)),
        (ej * d(jp, k), (ip, l)),
        (-ei * d(i, k), (j, l)),
        (-ei * d(ip, k), (jp, l)),
        (ei * d(i, l), (j, k)),
        (ei * d(ip, l), (jp, k)),
        (-ej * d(j, l), (i, k)),
        (-ej * d(jp, l), (ip, k)),
    ];
    terms.into_iter().filter(|(v, _)| *v != 0).map(|(v, g)| (g, int(v))).collect()
}

fn check_indices(n: usize, (i, j): (usize, usize)) -> Result<(), Error> {
    if i == 0 || j == 0 || i > 2 * n || j > 2 * n {
        return Err(Error::BadIndices { i, j, n });
    }
    Ok(())
}

/// `[G_p, G_r]` in the basis `G_{ij}`, `(i,j) ∈ Ω₁`, computed from the
/// closed formula and from the matrix commutator; the two must agree.
pub fn g_bracket(n: usize, p: (usize, usize), r: (usize, usize)) -> Result<GComb, Error> {
    check_indices(n, p)?;
    check_indices(n, r)?;
    let by_matrix = bracket(&g_mat(n, p.0, p.1), &g_mat(n, r.0, r.1));
    let mut by_formula = Matrix::zero(2 * n);
    for ((x, y), v) in g_bracket_formula(n, p, r) {
        by_formula = add(&by_formula, &scale(&g_mat(n, x, y), &v));
    }
    if by_formula != by_matrix {
        return Err(Error::FormulaMatrixMismatch(format!("[G{p:?}, G{r:?}]")));
    }
    decompose(&by_matrix, n).ok_or_else(|| Error::FormulaMatrixMismatch(format!("[G{p:?}, G{r:?}] leaves the span")))
}

/// Which images of `e_{ji}` (`i < j`) to use for `ψ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PsiVariant {
    /// `e_{ji} ↦ (−1)^{i−j+1}(G_{ji} + G_{j'i})/2`.
    #[default]
    AsPrinted,
    /// `e_{ji} ↦ (−1)^{i−j}(G_{ji} + G_{j'i})/2`.
    SignFlipped,
}

/// `ψ(e_{ab})` for `1 ≤ a, b ≤ n`.
pub fn psi(n: usize, a: usize, b: usize, variant: PsiVariant) -> ClassicalMatrix {
    let c = Conv::new(n);
    let half = GaussRat::from_ratio(1, 2);
    if a == b {
        return scale(&g_mat(n, c.prime(a), a), &half);
    }
    let (i, j) = (a.min(b), a.max(b));
    let sign = if (j - i + 1) % 2 == 0 { 1 } else { -1 };
    let (g1, g2) = (g_mat(n, j, i), g_mat(n, c.prime(j), i));
    if a < b {
        scale(&sub(&g1, &g2), &int(sign).mul(&half))
    } else {
        let sign = match variant {
            PsiVariant::AsPrinted => sign,
            PsiVariant::SignFlipped => -sign,
        };
        scale(&add(&g1, &g2), &int(sign).mul(&half))
    }
}

/// `ψ([x, y]) − [ψ(x), ψ(y)]` on all pairs of elementary matrices of `gl_n`.
pub fn psi_report(n: usize, variant: PsiVariant) -> AuditReport<bool> {
    let mut rep = AuditReport::new();
    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                for d in 1..=n {
                    // [e_ab, e_cd] = δ_bc e_ad − δ_da e_cb.
                    let mut lhs = Matrix::zero(2 * n);
                    if b == c {
                        lhs = add(&lhs, &psi(n, a, d, variant));
                    }
                    if d == a {
                        lhs = sub(&lhs, &psi(n, c, b, variant));
                    }
                    let rhs = bracket(&psi(n, a, b, variant), &psi(n, c, d, variant));
                    rep.push(format!("e{a}{b} e{c}{d}"), lhs == rhs);
                }
            }
        }
    }
    rep
}

/// True when `ψ` with the literal images ([`PsiVariant::AsPrinted`]) is a
/// Lie algebra homomorphism.
pub fn psi_check(n: usize) -> bool {
    psi_report(n, PsiVariant::AsPrinted).is_clean()
}

/// True when `ψ` with [`PsiVariant::SignFlipped`] is a Lie algebra
/// homomorphism whose image has dimension `n²`.
pub fn psi_check_sign_flipped(n: usize) -> bool {
    let images: Vec<_> = (1..=n)
        .flat_map(|a| (1..=n).map(move |b| (a, b)))
        .map(|(a, b)| psi(n, a, b, PsiVariant::SignFlipped))
        .collect();
    psi_report(n, PsiVariant::SignFlipped).is_clean() && rank(&images) == n * n
}

/// Checks on the matrix models: every `F_{ij}` is symplectic, `θ` is an
/// involution, each `G_{ij}` satisfies `θ(G) = −G`, the basis `G_{ij}`,
/// `(i,j) ∈ Ω₁`, has rank `n²` and spans all `G_{ij}`, and it is closed
/// under the bracket.
pub fn structure_report(n: usize) -> AuditReport<bool> {
    let d = 2 * n;
    let mut rep = AuditReport::new();
    let mut all_f = true;
    let mut invol = true;
    let mut anti = true;
    let mut all_g = Vec::new();
    for i in 1..=d {
        for j in 1..=d {
            let f = f_mat(n, i, j);
            all_f &= is_symplectic(&f, n);
            invol &= theta(&theta(&f, n), n) == f;
            let g = g_mat(n, i, j);
            anti &= theta(&g, n) == scale(&g, &int(-1));
            all_g.push(g);
        }
    }
    rep.push("F symplectic", all_f);
    rep.push("theta involution", invol);
    rep.push("theta(G) = -G", anti);
    let basis: Vec<_> = g_basis(n).into_iter().map(|(_, m)| m).collect();
    rep.push("basis rank n^2", rank(&basis) == n * n);
    rep.push("basis spans all G", rank(&all_g) == n * n);
    let mut closed = true;
    for p in &basis {
        for r in &basis {
            closed &= decompose(&bracket(p, r), n).is_some();
        }
    }
    rep.push("closed under bracket", closed);
    rep
}

/// `[x, y]` normalized, divided by `1 − q` and evaluated at `q = 1`.
pub fn degenerate_bracket(engine: &Engine, x: &Element, y: &Element) -> Result<PoissonPoly, Error> {
    let c = engine.commutator(x, y)?;
    PoissonPoly::from_element_with(&c, |v| eval_at_one_after_dividing(v, 1))
}

/// `{a_p, a_r}` read off from the quantum commutator `s_p s_r − s_r s_p`.
pub fn classical_structure_from_quantum(engine: &Engine, p: Gen, r: Gen) -> Result<PoissonPoly, Error> {
    let n = engine.rank();
    for g in [p, r] {
        if !g.is_omega1(n) {
            return Err(Error::BadIndices { i: g.row as usize, j: g.col as usize, n });
        }
    }
    degenerate_bracket(engine, &Element::gen(p), &Element::gen(r))
}

/// The degree-one part of a polynomial as a `G`-combination.
pub fn linear_part(p: &PoissonPoly) -> GComb {
    p.terms().filter(|(m, _)| m.degree() == 1).map(|(m, c)| (m.vars()[0], c.clone())).collect()
}

/// Compares the degree-one part of each quantum-derived bracket with
/// `−2[G_p, G_r]`; labels are the generator pairs.
pub fn linear_part_report(engine: &Engine) -> Result<AuditReport<bool>, Error> {
    let n = engine.rank();
    let mut rep = AuditReport::new();
    for p in pbw_generators(n) {
        for r in pbw_generators(n) {
            let got = linear_part(&classical_structure_from_quantum(engine, p, r)?);
            let want: GComb = g_bracket(n, (p.row as usize, p.col as usize), (r.row as usize, r.col as usize))?
                .into_iter()
                .map(|(g, c)| (g, &c * &int(-2)))
                .collect();
            rep.push(format!("{p} {r}"), got == want);
        }
    }
    Ok(rep)
}

/// Renders a `G`-combination as `c*G[i,j] + …`.
pub fn format_gcomb(x: &GComb) -> String {
    if x.is_empty() {
        return String::from("0");
    }
    let parts: Vec<String> = x.iter().map(|(g, c)| format!("({c})*G[{},{}]", g.row, g.col)).collect();
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_models() {
        for n in 1..=4 {
            let rep = structure_report(n);
            assert!(rep.is_clean(), "n={n}: {:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn g_symmetries() {
        for n in 1..=3 {
            let c = Conv::new(n);
            for i in 1..=n {
                for j in 1..=n {
                    let g = g_mat(n, i, j);
                    assert_eq!(g_mat(n, c.prime(j), c.prime(i)), g);
                    assert_eq!(g_mat(n, c.prime(i), c.prime(j)), scale(&g, &int(-1)));
                    assert_eq!(g_mat(n, j, i), scale(&g, &int(-1)));
                }
            }
        }
    }

    #[test]
    fn bracket_formula_matches_matrices() {
        for n in 1..=3 {
            for i in 1..=2 * n {
                for j in 1..=2 * n {
                    for k in 1..=2 * n {
                        for l in 1..=2 * n {
                            g_bracket(n, (i, j), (k, l)).unwrap();
                        }
                    }
                }
            }
        }
        assert!(g_bracket(2, (2, 1), (2, 1)).unwrap().is_empty());
        assert!(matches!(g_bracket(2, (5, 1), (2, 1)), Err(Error::BadIndices { .. })));
    }

    #[test]
    fn psi_images() {
        assert!(psi_check(1));
        assert!(psi_check_sign_flipped(1));
        for n in 2..=4 {
            assert!(!psi_check(n), "n={n}");
            assert!(psi_check_sign_flipped(n), "n={n}");
        }
        // At n = 2 only the pair e_12, e_21 breaks: their images bracket to
        // −ψ(e_11 − e_22).
        let rep = psi_report(2, PsiVariant::AsPrinted);
        let bad: Vec<_> = rep.failures().map(|(l, _)| l.as_str()).collect();
        assert_eq!(bad, ["e12 e21", "e21 e12"]);
    }

    #[test]
    fn quantum_structure_constants() {
        let engine = Engine::new(2).unwrap();
        let x = classical_structure_from_quantum(&engine, Gen::new(3, 1), Gen::new(2, 1)).unwrap();
        assert_eq!(x, crate::poisson::bracket_gen(2, 3, 1, 2, 1).unwrap());
        let z = classical_structure_from_quantum(&engine, Gen::new(3, 1), Gen::new(3, 1)).unwrap();
        assert!(z.is_zero());
        for n in 1..=3 {
            let engine = Engine::new(n).unwrap();
            let rep = linear_part_report(&engine).unwrap();
            assert!(rep.is_clean(), "n={n}: {:?}", rep.failures().collect::<Vec<_>>());
        }
    }
}
