//! Property tests for block linear algebra: Smith normal form, saturation,
//! the projection lattice and direct finiteness.

use leavitt_core::blocks::{snf, BlockEntry, Matrix};
use leavitt_core::corpus;
use leavitt_core::dimension::sample::Sampler;
use leavitt_core::graph::parse_graph;
use leavitt_core::lpa::Lpa;
use leavitt_core::scalars::{Field, FieldKind, Laurent, RatFun, Ring, Scalar};
use leavitt_core::structure::Structure;
use proptest::prelude::*;

fn laurent(max_width: usize) -> impl Strategy<Value = Laurent> {
    prop_oneof![
        1 => Just(Laurent::zero()),
        4 => (-2i64..=2, prop::collection::vec(-3i64..=3, 1..=max_width + 1))
            .prop_map(|(low, cs)| Laurent::from_ints(low, &cs)),
    ]
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix<Laurent>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec(laurent(3), n), m).prop_map(Matrix::from_rows)
    })
}

fn structure(text: &str) -> Structure {
    Structure::new(&Lpa::new(parse_graph(text).unwrap(), FieldKind::Rational)).unwrap()
}

fn no_exit_graphs() -> impl Strategy<Value = &'static str> {
    prop::sample::select(corpus::no_exit().map(|(_, text)| text).collect::<Vec<_>>())
}

fn ratfun_rank(m: &Matrix<Laurent>) -> usize {
    m.map(|e| RatFun::from_laurent(e.clone())).rank()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_sound(a in matrix(4, 4)) {
        let s = snf(&a);
        prop_assert!(s.verify(&a));
        prop_assert_eq!(s.rank, ratfun_rank(&a));
    }

    #[test]
    fn saturation_is_the_smallest_summand(text in no_exit_graphs(), seed in any::<u64>(), n in 1usize..=3) {
        let s = structure(text);
        let mut sampler = Sampler::new(s.layout(), seed);
        let g = sampler.relations(n);
        let q = g.saturate();
        // containment, idempotency, rank equality
        prop_assert_eq!(g.mul(&q).unwrap(), g.clone());
        prop_assert!(q.is_idempotent());
        prop_assert_eq!(q.rank_q(), g.rank_q());
        // torsion quotient: some nonzero multiple of each row of q lies in the row space of g
        for (gb, qb) in g.blocks().iter().zip(q.blocks()) {
            let sm = snf(gb);
            let d = sm.invariant_factors().iter().fold(Laurent::one(), |acc, f| acc.mul(f));
            let gt = gb.transpose();
            for i in 0..qb.rows() {
                let row = qb.submatrix(i..i + 1, 0..qb.cols()).scale(&d).transpose();
                prop_assert!(<Laurent as BlockEntry>::solve(&gt, &row).is_some(), "row {} of\n{}", i, qb);
            }
        }
    }

    #[test]
    fn parallelogram_rank_identity(text in no_exit_graphs(), seed in any::<u64>(), n in 1usize..=2) {
        let s = structure(text);
        let mut sampler = Sampler::new(s.layout(), seed);
        let p = sampler.projection_q(n);
        let q = sampler.projection_q(n);
        let (meet, join) = (p.proj_meet(&q).unwrap(), p.proj_join(&q).unwrap());
        prop_assert!(meet.is_projection() && join.is_projection());
        let (rp, rq, rm, rj) = (p.rank_q(), q.rank_q(), meet.rank_q(), join.rank_q());
        for b in 0..rp.len() {
            prop_assert_eq!(rp[b] + rq[b], rm[b] + rj[b]);
        }
    }

    #[test]
    fn one_sided_inverses_are_two_sided(
        n in 1usize..=3,
        ops in prop::collection::vec((0usize..3, 0usize..3, laurent(2), -2i64..=2), 1..8),
    ) {
        // a product of elementary and diagonal unit matrices
        let mut a = Matrix::<Laurent>::identity(n);
        for (i, j, f, k) in ops {
            let (i, j) = (i % n, j % n);
            if i == j {
                a.scale_row(i, &Laurent::monomial(Scalar::from_int(if k < 0 { -2 } else { 3 }), k));
            } else {
                a.add_row_multiple(i, j, &f);
            }
        }
        // a right inverse over K(x), then brought back to K[x, x⁻¹]
        let b = a.map(|e| RatFun::from_laurent(e.clone())).solve_right(&Matrix::identity(n)).unwrap();
        let b = b.try_map(|e| e.to_laurent().ok_or(())).unwrap();
        prop_assert!(a.mul(&b).is_identity());
        prop_assert!(b.mul(&a).is_identity());
    }

    #[test]
    fn ratfun_inverse_agrees_with_units(f in laurent(3)) {
        let r = RatFun::from_laurent(f.clone());
        match r.inv() {
            Some(inv) => prop_assert_eq!(inv.to_laurent().is_some(), f.is_unit()),
            None => prop_assert!(f.is_zero()),
        }
    }
}
