//! Property tests for the path algebra and the structure map, driven by a
//! seeded generator over the corpus.

use leavitt_core::corpus;
use leavitt_core::graph::parse_graph;
use leavitt_core::lpa::random::{random_element, random_raw};
use leavitt_core::lpa::rewrite::{reduce, Strategy as Rewriting};
use leavitt_core::lpa::Lpa;
use leavitt_core::scalars::FieldKind;
use leavitt_core::structure::Structure;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graphs() -> impl Strategy<Value = &'static str> {
    prop::sample::select(
        corpus::ALL
            .iter()
            .map(|(_, text)| *text)
            .collect::<Vec<_>>(),
    )
}

fn no_exit_graphs() -> impl Strategy<Value = &'static str> {
    prop::sample::select(corpus::no_exit().map(|(_, text)| text).collect::<Vec<_>>())
}

fn field() -> impl Strategy<Value = FieldKind> {
    prop::sample::select(vec![
        FieldKind::Rational,
        FieldKind::Gaussian,
        FieldKind::Prime(5),
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn involution_is_an_anti_automorphism(text in graphs(), field in field(), seed in any::<u64>()) {
        let alg = Lpa::new(parse_graph(text).unwrap(), field);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&alg, 3, 4, &mut rng);
        let b = random_element(&alg, 3, 4, &mut rng);
        prop_assert_eq!(a.mul(&b).unwrap().involve(), b.involve().mul(&a.involve()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().involve(), a.involve().add(&b.involve()).unwrap());
        prop_assert_eq!(a.involve().involve(), a);
    }

    #[test]
    fn multiplication_is_associative(text in graphs(), seed in any::<u64>()) {
        let alg = Lpa::new(parse_graph(text).unwrap(), FieldKind::Rational);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c] = [(); 3].map(|_| random_element(&alg, 2, 3, &mut rng));
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn rewriting_terminates_within_bound(text in graphs(), seed in any::<u64>()) {
        let alg = Lpa::new(parse_graph(text).unwrap(), FieldKind::Rational);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = random_raw(&alg, 3, 6, &mut rng);
        let longest = raw.terms.iter().map(|(_, w)| w.len().max(1)).max().unwrap_or(1);
        for strategy in [Rewriting::Leftmost, Rewriting::Rightmost] {
            let r = reduce(&alg, &raw, strategy).unwrap();
            prop_assert!(r.max_depth <= 2 * longest);
            prop_assert_eq!(&r.element, &alg.normal_form(&raw));
        }
    }

    #[test]
    fn phi_is_a_star_isomorphism(text in no_exit_graphs(), field in field(), seed in any::<u64>()) {
        let alg = Lpa::new(parse_graph(text).unwrap(), field);
        let s = Structure::new(&alg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&alg, 3, 4, &mut rng);
        let b = random_element(&alg, 3, 4, &mut rng);
        let (pa, pb) = (s.phi(&a).unwrap(), s.phi(&b).unwrap());
        prop_assert_eq!(s.phi(&a.mul(&b).unwrap()).unwrap(), pa.mul(&pb).unwrap());
        prop_assert_eq!(s.phi(&a.add(&b).unwrap()).unwrap(), pa.add(&pb).unwrap());
        prop_assert_eq!(s.phi(&a.involve()).unwrap(), pa.adjoint());
        prop_assert_eq!(s.phi_inv(&pa).unwrap(), a.clone());
        prop_assert_eq!(pa.is_zero(), a.is_zero());
    }
}
