use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::random_raw;
use super::rewrite::{reduce, Strategy};
use super::*;
use crate::corpus;
use crate::graph::parse_graph;

fn algebra(text: &str) -> Arc<Lpa> {
    Lpa::new(parse_graph(text).unwrap(), FieldKind::Rational)
}

fn el(alg: &Arc<Lpa>, s: &str) -> LpaElement {
    alg.parse(s).unwrap()
}

#[test]
fn ck1_contracts() {
    let a = algebra(corpus::CYC2);
    assert_eq!(el(&a, "f*.f"), el(&a, "v"));
}

#[test]
fn ck2_with_single_edge() {
    let a = algebra(corpus::TAIL);
    assert_eq!(el(&a, "t.t*"), el(&a, "u"));
    assert!(el(&a, "t.t*").is_projection());
}

#[test]
fn ck2_orientation_on_rose() {
    let a = algebra(corpus::ROSE2);
    let bb = el(&a, "b.b*");
    assert_eq!(bb, el(&a, "v - a.a*"));
    assert_eq!(bb.to_string(), "v - a.a*");
    assert!(el(&a, "a*.b").is_zero());
}

#[test]
fn parse_and_print() {
    let a = algebra(corpus::TAIL);
    let e = el(&a, "2*t - 3/2*v");
    assert_eq!(e.num_terms(), 2);
    assert_eq!(e.to_string(), "-3/2*v + 2*t");
    // l and t are the only edges out of v and u, so CK2 collapses the word
    assert_eq!(el(&a, "t.l.l*.t*"), el(&a, "u"));
    assert_eq!(el(&a, "t.l.l*").to_string(), "t");
    assert_eq!(el(&a, &e.to_string()), e);
}

#[test]
fn parse_errors() {
    let a = algebra(corpus::TAIL);
    assert!(matches!(a.parse("t + z"), Err(Error::UnknownName(_))));
    assert!(matches!(a.parse("v.t"), Err(Error::NotComposable(_))));
    assert!(matches!(a.parse("2*"), Err(Error::Parse { column: 3, .. })));
    assert!(matches!(a.parse("t ) v"), Err(Error::Parse { .. })));
}

#[test]
fn gaussian_coefficients() {
    let a = Lpa::new(parse_graph(corpus::TAIL).unwrap(), FieldKind::Gaussian);
    let e = el(&a, "(1+2i)*t.l*");
    assert_eq!(e.involve(), el(&a, "(1-2i)*l.t*"));
    assert_eq!(el(&a, &e.to_string()), e);
    assert!(algebra(corpus::TAIL).parse("(1+2i)*t").is_err());
}

#[test]
fn involution_and_unit() {
    let a = algebra(corpus::TAIL);
    assert_eq!(el(&a, "2*t.l*").involve(), el(&a, "2*l.t*"));
    assert_eq!(el(&a, "v").mul(&el(&a, "t")).unwrap(), a.zero());
    assert_eq!(el(&a, "t").mul(&el(&a, "v")).unwrap(), el(&a, "t"));
    assert_eq!(el(&a, "3"), a.one().scale(&Scalar::from_int(3)));
}

#[test]
fn idempotents() {
    let a = algebra(corpus::TAIL);
    for v in ["u", "v"] {
        assert!(el(&a, v).is_projection());
    }
    // v·t = 0 and t·v = t, so v + t squares to itself
    assert!(el(&a, "v + t").is_idempotent());
    assert!(!el(&a, "v + t").is_projection());
    let one_plus_t = el(&a, "u + v + t");
    assert_eq!(one_plus_t.mul(&one_plus_t).unwrap(), el(&a, "u + v + 2*t"));
    assert!(!one_plus_t.is_idempotent());
}

#[test]
fn mixed_graphs_are_rejected() {
    let a = algebra(corpus::TAIL);
    let b = algebra(corpus::CYC2);
    assert_eq!(a.one().mul(&b.one()), Err(Error::MixedGraphs));
}

#[test]
fn strategies_agree_on_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, text) in corpus::ALL {
        let a = algebra(text);
        for _ in 0..200 {
            let raw = random_raw(&a, 3, 6, &mut rng);
            let left = reduce(&a, &raw, Strategy::Leftmost).unwrap();
            let right = reduce(&a, &raw, Strategy::Rightmost).unwrap();
            let structured = a.normal_form(&raw);
            assert_eq!(
                left.element,
                right.element,
                "{name}: {}",
                raw.display(a.graph())
            );
            assert_eq!(
                left.element,
                structured,
                "{name}: {}",
                raw.display(a.graph())
            );
        }
    }
}
