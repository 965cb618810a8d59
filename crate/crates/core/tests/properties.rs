use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use metahecke::finite_hecke::Rep;
use metahecke::grouplalg::{decompose, Fraction, Laurent};
use metahecke::parse::parse_laurent;
use metahecke::poly::Rat;
use metahecke::render::{from_json, to_json};
use metahecke::roots::{Lattice, MetaRootSystem, WeylElement};
use metahecke::scalars::{Coeff, Scalar, Specialization};
use metahecke::weight::Weight;

fn laurent_rat(terms: &[(i32, i32, i64)]) -> Laurent<Rat> {
    let mut f = Laurent::zero(2);
    for &(a, b, c) in terms {
        f.add_term(Weight::new(&[a, b]), <Rat as Coeff>::from_i64(c));
    }
    f
}

fn term() -> impl Strategy<Value = (i32, i32, i64)> {
    (-3..=3i32, -3..=3i32, -4..=4i64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decompose_then_recombine(
        num in prop::collection::vec(term(), 1..5),
        den in prop::collection::vec(term(), 1..4),
        m1 in 1..=3i32,
        m2 in 1..=3i32,
    ) {
        let n = laurent_rat(&num);
        let d = laurent_rat(&den);
        prop_assume!(!d.is_zero());
        let parts = decompose(&[m1, m2], &n, &d, 256).unwrap();
        let back = parts.recombine();
        prop_assert!(back.equals(&Fraction::new(n, d).unwrap()));
        for (rep, _) in parts.parts() {
            prop_assert!(rep.get(0) >= 0 && rep.get(0) < m1 && rep.get(1) >= 0 && rep.get(1) < m2);
        }
    }

    #[test]
    fn weyl_words_compose(w1 in prop::collection::vec(0..2usize, 0..6), w2 in prop::collection::vec(0..2usize, 0..6),
                          a in -3..=3i32, b in -3..=3i32) {
        let sys = MetaRootSystem::from_str_type("G2", 1, 1, Lattice::Weight).unwrap();
        let lam = Weight::new(&[a, b]);
        let joined: Vec<usize> = w1.iter().chain(&w2).copied().collect();
        let lhs = WeylElement::from_word(&sys, &joined).act(&lam);
        let rhs = WeylElement::from_word(&sys, &w1).act(&WeylElement::from_word(&sys, &w2).act(&lam));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sigma_word_independence(a in -2..=2i32, b in -2..=2i32, idx in 0..8usize, seed in 0..4u64) {
        let sys = MetaRootSystem::from_str_type("B2", 2, 1, Lattice::Weight).unwrap();
        let sym = sys.ground_field(1, -1).unwrap().params();
        let p = Specialization::random(&mut ChaCha8Rng::seed_from_u64(seed)).params(&sym).unwrap();
        let rep = Rep::new(&sys, &p);
        let g = sys.weyl_group().unwrap();
        let w = &g.elements[idx % g.len()];
        let f = rep.coset_monomial(&Weight::new(&[a, b]));
        let words = g.reduced_words(&sys, w);
        let first = rep.sigma_word(&words[0], &f);
        for word in &words[1..] {
            prop_assert!(rep.sigma_word(word, &f).rational_eq(&first));
        }
    }

    #[test]
    fn json_and_text_round_trip(terms in prop::collection::vec((-2..=2i32, -2..=2i32, 0..5usize), 0..6)) {
        let coeffs = ["1", "-k^2", "(k-1)*(k+1)/(k^4*q-1)", "g1^-1*q/3", "k_sh*g2_sh - q^2"];
        let mut f: Laurent<Scalar> = Laurent::zero(2);
        for (a, b, c) in terms {
            f.add_term(Weight::new(&[a, b]), parse_laurent(coeffs[c], 0, None).unwrap().as_constant().unwrap());
        }
        let text = serde_json::to_string(&to_json(&f)).unwrap();
        prop_assert_eq!(from_json(&serde_json::from_str(&text).unwrap(), 2).unwrap(), f.clone());
        prop_assert_eq!(parse_laurent(&f.to_string(), 2, None).unwrap(), f);
    }
}
