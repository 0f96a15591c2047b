use std::sync::OnceLock;

use proptest::prelude::*;
use qtwist_core::braidact::{self, BraidAction, Convention, Direction};
use qtwist_core::freealg::all_generators;
use qtwist_core::pbwengine::pbw_generators;
use qtwist_core::poisson::{PoissonAlgebra, PoissonPoly};
use qtwist_core::tensorlab::Conv;
use qtwist_core::{Element, Engine, GaussRat, Gen, LaurentPoly, RatFunc, Word};

fn engine2() -> &'static Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(|| Engine::new(2).unwrap())
}

fn poisson2() -> &'static PoissonAlgebra {
    static P: OnceLock<PoissonAlgebra> = OnceLock::new();
    P.get_or_init(|| PoissonAlgebra::new(2).unwrap())
}

fn gauss() -> impl Strategy<Value = GaussRat> {
    (-4i64..=4, 1i64..=3, -2i64..=2)
        .prop_map(|(a, b, c)| &GaussRat::from_ratio(a, b) + &(&GaussRat::i() * &GaussRat::from_int(c)))
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i32..=3, gauss()), 0..4).prop_map(LaurentPoly::from_terms)
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (laurent(), laurent()).prop_map(|(a, b)| {
        let b = if b.is_zero() { LaurentPoly::one() } else { b };
        RatFunc::new(a, b).unwrap()
    })
}

fn small_coeff() -> impl Strategy<Value = RatFunc> {
    (-2i64..=2, -1i32..=1).prop_map(|(c, e)| RatFunc::q_pow(e).scale(&GaussRat::from_int(c)))
}

/// Elements of rank 2 with up to three words of length at most two.
fn element2() -> impl Strategy<Value = Element> {
    let gens = all_generators(2);
    let word = prop::collection::vec(prop::sample::select(gens), 0..=2);
    prop::collection::vec((word, small_coeff()), 0..=3).prop_map(|ts| {
        let mut x = Element::zero();
        for (w, c) in ts {
            x.add_term(Word::from(w), c);
        }
        x
    })
}

fn basis_poly2() -> impl Strategy<Value = PoissonPoly> {
    let gens = pbw_generators(2);
    let mono = prop::collection::vec(prop::sample::select(gens), 0..=2);
    prop::collection::vec((mono, -3i64..=3), 0..=3).prop_map(|ts| {
        let mut p = PoissonPoly::zero();
        for (m, c) in ts {
            let mut t = PoissonPoly::constant(GaussRat::from_int(c));
            for g in m {
                t = &t * &PoissonPoly::var(g);
            }
            p = &p + &t;
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratfunc_field_laws(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
    }

    #[test]
    fn gauss_inverse(a in gauss()) {
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn free_algebra_is_associative(x in element2(), y in element2(), z in element2()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
    }

    #[test]
    fn substitution_is_multiplicative(x in element2(), y in element2(), imgs in prop::collection::vec(element2(), 6)) {
        let gens = all_generators(2);
        let map = |g: Gen| gens.iter().position(|&h| h == g).map(|k| imgs[k].clone());
        let lhs = (&x * &y).substitute_with(map).unwrap();
        let rhs = &x.substitute_with(map).unwrap() * &y.substitute_with(map).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalization_is_sound_and_idempotent(x in element2(), y in element2()) {
        let e = engine2();
        let nx = e.normalize(&x).unwrap();
        prop_assert!(e.is_normal(&nx));
        prop_assert_eq!(e.normalize(&nx).unwrap(), nx.clone());
        let ny = e.normalize(&y).unwrap();
        prop_assert_eq!(e.normalize(&(&x + &y)).unwrap(), &nx + &ny);
        prop_assert_eq!(e.normalize(&(&x * &y)).unwrap(), e.normalize(&(&nx * &ny)).unwrap());
    }

    #[test]
    fn braid_maps_are_multiplicative(x in element2(), y in element2(), k in 1usize..=2, inverse in any::<bool>()) {
        let e = engine2();
        let dir = if inverse { Direction::Inverse } else { Direction::Forward };
        let act = BraidAction::new(e, braidact::beta_with(k, 2, dir, Convention::AsPrinted).unwrap()).unwrap();
        let lhs = act.apply(&(&x * &y)).unwrap();
        let rhs = e.normalize(&(&act.apply(&x).unwrap() * &act.apply(&y).unwrap())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poisson_bracket_laws(f in basis_poly2(), g in basis_poly2(), h in basis_poly2()) {
        let p = poisson2();
        let fg = p.bracket(&f, &g).unwrap();
        prop_assert_eq!(p.bracket(&g, &f).unwrap(), -fg.clone());
        prop_assert_eq!(p.bracket(&f, &(&g * &h)).unwrap(), &(&fg * &h) + &(&g * &p.bracket(&f, &h).unwrap()));
        prop_assert_eq!(p.bracket(&f, &(&g + &h)).unwrap(), &fg + &p.bracket(&f, &h).unwrap());
        prop_assert!(p.jacobi(&f, &g, &h).unwrap().is_zero());
    }

    #[test]
    fn index_conventions(n in 1usize..=6, seed in 0usize..1000) {
        let c = Conv::new(n);
        let i = seed % (2 * n) + 1;
        prop_assert_eq!(c.prime(c.prime(i)), i);
        prop_assert_eq!(c.eps(c.prime(i)), -c.eps(i));
        prop_assert_eq!(c.bar(c.prime(i)), -c.bar(i));
    }
}
