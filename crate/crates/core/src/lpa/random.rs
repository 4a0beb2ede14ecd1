//! Random raw expressions and elements for property tests.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Atom, Lpa, LpaElement, RawExpr};
use crate::scalars::{FieldKind, Ring, Scalar};

/// A small nonzero scalar of `field`.
pub fn random_scalar<R: Rng>(field: FieldKind, rng: &mut R) -> Scalar {
    loop {
        let num = rng.gen_range(-3..=3);
        let den = if rng.gen_bool(0.2) {
            rng.gen_range(1..=3)
        } else {
            1
        };
        let mut c = Scalar::from_ratio(num, den);
        if field == FieldKind::Gaussian && rng.gen_bool(0.3) {
            c = c.add(&Scalar::i().mul(&Scalar::from_int(rng.gen_range(-2..=2))));
        }
        let c = field.embed(&c);
        if !c.is_zero() {
            return c;
        }
    }
}

fn all_atoms(alg: &Lpa) -> Vec<Atom> {
    let g = alg.graph();
    (0..g.num_vertices())
        .map(Atom::Vertex)
        .chain((0..g.num_edges()).flat_map(|e| [Atom::Edge(e), Atom::Ghost(e)]))
        .collect()
}

/// A random word of length `1..=max_len`. Most words follow the graph, so
/// that they do not vanish immediately; some are arbitrary atom strings.
pub fn random_word<R: Rng>(alg: &Lpa, max_len: usize, rng: &mut R) -> Vec<Atom> {
    let g = alg.graph();
    let atoms = all_atoms(alg);
    let len = rng.gen_range(1..=max_len.max(1));
    let follow = rng.gen_bool(0.85);
    let mut word = vec![*atoms.choose(rng).expect("graphs have vertices")];
    while word.len() < len {
        let here = word.last().expect("non-empty").range(g);
        let next = if follow {
            let options: Vec<Atom> = atoms
                .iter()
                .copied()
                .filter(|a| a.source(g) == here)
                .collect();
            *options.choose(rng).expect("the vertex atom always fits")
        } else {
            *atoms.choose(rng).expect("non-empty")
        };
        word.push(next);
    }
    word
}

pub fn random_raw<R: Rng>(alg: &Lpa, max_terms: usize, max_len: usize, rng: &mut R) -> RawExpr {
    let n = rng.gen_range(1..=max_terms.max(1));
    RawExpr {
        terms: (0..n)
            .map(|_| {
                (
                    random_scalar(alg.field(), rng),
                    random_word(alg, max_len, rng),
                )
            })
            .collect(),
    }
}

pub fn random_element<R: Rng>(
    alg: &Arc<Lpa>,
    max_terms: usize,
    max_len: usize,
    rng: &mut R,
) -> LpaElement {
    alg.normal_form(&random_raw(alg, max_terms, max_len, rng))
}
