//! Sampled checks of the comparability axioms and the properties of `d`.
//!
//! Q-side samples are orthogonal projections (meets and joins exist there);
//! R-side samples are idempotents `u·D·u⁻¹`. Values of `d` are compared in
//! the normalization `d(1_n) = n`, so the bounds of (D3) and (D5) read
//! `d(c) = n·c` and `0 ≤ d(p) ≤ n` for `n×n` matrices.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use super::sample::Sampler;
use super::{
    d, d_checked, dominate_checked, gc_witness_checked, reciprocal, sim_a_checked,
    simple_family_checked, simple_order_checked, v_class, DimVector,
};
use crate::blocks::{orthogonal_projection, BlockEntry, BlockMatrix, Matrix, QMatrix};
use crate::error::Result;
use crate::scalars::RatFun;
use crate::structure::Structure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomResult {
    pub axiom: String,
    pub status: Status,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub seed: u64,
    pub samples: usize,
    pub max_n: usize,
    /// Number of `∼ₐ` witnesses produced and verified by multiplication.
    pub verified_witnesses: usize,
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.axiom == axiom)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AxiomParams {
    pub samples: usize,
    pub seed: u64,
    pub max_n: usize,
}

impl Default for AxiomParams {
    fn default() -> Self {
        AxiomParams {
            samples: 200,
            seed: 0,
            max_n: 3,
        }
    }
}

/// Order in which axioms are reported.
pub const AXIOMS: [&str; 20] = [
    "Def", "CC", "FA", "OA", "P", "GC", "Fin", "D1", "D2", "D3", "D4", "D5", "D6", "D7", "D8",
    "D9", "D10", "D11", "simple", "V",
];

#[derive(Default)]
struct Tally {
    samples: BTreeMap<&'static str, usize>,
    failures: BTreeMap<&'static str, String>,
    witnesses: usize,
}

impl Tally {
    fn check(&mut self, axiom: &'static str, ok: bool, describe: impl FnOnce() -> String) {
        *self.samples.entry(axiom).or_default() += 1;
        if !ok && !self.failures.contains_key(axiom) {
            self.failures.insert(axiom, describe());
        }
    }

    /// `sim_a` with witness accounting.
    fn equivalent<T: BlockEntry>(
        &mut self,
        p: &BlockMatrix<T>,
        q: &BlockMatrix<T>,
    ) -> Result<bool> {
        let w = sim_a_checked(p, q)?;
        if w.is_some() {
            self.witnesses += 1;
        }
        Ok(w.is_some())
    }

    fn report(self, params: &AxiomParams) -> AxiomReport {
        let results = AXIOMS
            .iter()
            .map(|&axiom| {
                let samples = self.samples.get(axiom).copied().unwrap_or(0);
                let counterexample = self.failures.get(axiom).cloned();
                let status = match (&counterexample, samples) {
                    (Some(_), _) => Status::Fail,
                    (None, 0) => Status::Unknown,
                    (None, _) => Status::Pass,
                };
                AxiomResult {
                    axiom: axiom.to_string(),
                    status,
                    samples,
                    counterexample,
                }
            })
            .collect();
        AxiomReport {
            seed: params.seed,
            samples: params.samples,
            max_n: params.max_n,
            verified_witnesses: self.witnesses,
            results,
        }
    }
}

fn show<T: BlockEntry>(named: &[(&str, &BlockMatrix<T>)]) -> String {
    named
        .iter()
        .map(|(name, m)| format!("{name} =\n{m}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// `m` placed at logical offset `offset` inside an `n×n` zero matrix.
fn embed<T: BlockEntry>(m: &BlockMatrix<T>, n: usize, offset: usize) -> Result<BlockMatrix<T>> {
    let layout = m.layout();
    let blocks = layout
        .blocks
        .iter()
        .enumerate()
        .map(|(b, shape)| {
            let mut big = Matrix::zeros(n * shape.size, n * shape.size);
            big.paste(offset * shape.size, offset * shape.size, m.block(b));
            big
        })
        .collect();
    BlockMatrix::from_blocks(layout, n, n, blocks)
}

/// Diagonal coordinate idempotents with the given per-block ranks, placed
/// one after another.
fn coordinate_family<T: BlockEntry>(like: &[BlockMatrix<T>]) -> Result<Vec<BlockMatrix<T>>> {
    let first = &like[0];
    let layout = first.layout();
    let n = first.rows();
    let mut starts = vec![0; layout.num_blocks()];
    like.iter()
        .map(|p| {
            let ranks = p.idempotent_ranks();
            let blocks = layout
                .blocks
                .iter()
                .enumerate()
                .map(|(b, shape)| {
                    let size = n * shape.size;
                    let range = starts[b]..starts[b] + ranks[b];
                    starts[b] += ranks[b];
                    let diag: Vec<T> = (0..size)
                        .map(|i| {
                            if range.contains(&i) {
                                T::one()
                            } else {
                                T::zero()
                            }
                        })
                        .collect();
                    Matrix::diagonal(&diag)
                })
                .collect();
            BlockMatrix::from_blocks(layout, n, n, blocks)
        })
        .collect()
}

fn sum<T: BlockEntry>(ms: &[BlockMatrix<T>]) -> Result<BlockMatrix<T>> {
    let mut acc = BlockMatrix::zeros(ms[0].layout(), ms[0].rows(), ms[0].cols());
    for m in ms {
        acc = acc.add(m)?;
    }
    Ok(acc)
}

fn dim_sum(ds: &[DimVector]) -> DimVector {
    ds[1..].iter().fold(ds[0].clone(), |acc, v| acc.add(v))
}

/// Checks shared by both sides on a pair `p`, `q` of idempotents of `M_n`
/// and a pairwise orthogonal family.
fn check_common<T: BlockEntry>(
    t: &mut Tally,
    p: &BlockMatrix<T>,
    q: &BlockMatrix<T>,
    family: &[BlockMatrix<T>],
    mask: &[bool],
) -> Result<()> {
    let layout = p.layout().clone();
    let n = p.rows();
    let one = BlockMatrix::<T>::identity(&layout, n);
    let zero = BlockMatrix::<T>::zeros(&layout, n, n);
    let c = BlockMatrix::<T>::central(&layout, n, mask);
    let (dp, dq) = (d(p)?, d(q)?);
    let full = DimVector::free(&layout, n);
    let pair = || show(&[("p", p), ("q", q)]);

    t.check(
        "D2",
        dp.values.iter().all(|v| *v >= BigRational::zero()),
        pair,
    );
    t.check("D5", DimVector::zero(&layout).le(&dp) && dp.le(&full), pair);
    t.check("D7", dp.is_zero() == p.is_zero(), pair);
    let p_zero = t.equivalent(p, &zero)?;
    t.check("Def", p_zero == p.is_zero(), pair);
    let p_one = t.equivalent(p, &one)?;
    t.check("Fin", p_one == p.is_identity(), pair);
    if p.idempotent_ranks() == one.idempotent_ranks() {
        t.check("Fin", p.is_identity(), pair);
    }

    let equiv = t.equivalent(p, q)?;
    if equiv {
        t.check("D1", dp == dq, pair);
    }
    t.check("D8", equiv == (dp == dq), pair);
    let dom = dominate_checked(p, q)?;
    if let Some(dm) = &dom {
        t.witnesses += 1;
        let ok = dm.sub.is_idempotent()
            && dm.sub.mul(q)? == dm.sub
            && q.mul(&dm.sub)? == dm.sub
            && dm.witness.verify(p, &dm.sub);
        t.check("D9", ok, pair);
    }
    t.check("D9", dom.is_some() == dp.le(&dq), pair);

    let gc = gc_witness_checked(p, q);
    t.check("GC", gc.is_ok(), pair);

    // central idempotents
    t.check("D3", d_checked(&c) == full.restrict(mask), || {
        format!("mask {mask:?}")
    });
    let (cp, cq) = (c.mul(p)?, c.mul(q)?);
    t.check("D6", d_checked(&cp) == dp.restrict(mask), pair);
    if equiv {
        let ok = t.equivalent(&cp, &cq)?;
        t.check("CC", ok, pair);
    }

    // orthogonal families
    let ds: Vec<DimVector> = family.iter().map(d_checked).collect();
    let total = sum(family)?;
    let fam = || {
        show(
            &family
                .iter()
                .enumerate()
                .map(|(i, m)| (["p1", "p2", "p3"][i.min(2)], m))
                .collect::<Vec<_>>(),
        )
    };
    let pair_sum = family[0].add(&family[1])?;
    t.check("D4", d_checked(&pair_sum) == ds[0].add(&ds[1]), fam);
    t.check(
        "D11",
        total.is_idempotent() && d_checked(&total) == dim_sum(&ds),
        fam,
    );

    let coords = coordinate_family(family)?;
    let mut pieces_ok = true;
    for (a, b) in family.iter().zip(&coords) {
        pieces_ok &= t.equivalent(a, b)?;
    }
    let sum_ok = t.equivalent(&total, &sum(&coords)?)?;
    t.check("FA", pieces_ok && sum_ok, fam);

    // orthogonal additivity with p·q = 0: families in complementary corners of M_{2n}
    let big = 2 * n;
    let left = family
        .iter()
        .map(|m| embed(m, big, 0))
        .collect::<Result<Vec<_>>>()?;
    let right = coords
        .iter()
        .map(|m| embed(m, big, n))
        .collect::<Result<Vec<_>>>()?;
    let (sl, sr) = (sum(&left)?, sum(&right)?);
    let mut pieces_ok = sl.mul(&sr)?.is_zero();
    for (a, b) in left.iter().zip(&right) {
        pieces_ok &= t.equivalent(a, b)?;
    }
    let sum_ok = t.equivalent(&sl, &sr)?;
    t.check("OA", pieces_ok && sum_ok, fam);

    // simple idempotents
    for (x, dx) in [(p, &dp), (q, &dq)] {
        if let Some(m) = simple_order_checked(x) {
            let cover = BlockMatrix::central(&layout, n, &super::support(x));
            let family = simple_family_checked(x)?.expect("simple");
            let mut ok = dx.scale(&BigRational::from_integer(m.into())) == d_checked(&cover);
            ok &= *dx == full.restrict(&super::support(x)).scale(&reciprocal(m));
            ok &= family.len() == m && sum(&family)? == cover;
            for (i, a) in family.iter().enumerate() {
                ok &= t.equivalent(a, x)?;
                for b in &family[i + 1..] {
                    ok &= a.mul(b)?.is_zero();
                }
            }
            t.check("simple", ok, || show(&[("p", x)]));
        }
    }
    Ok(())
}

fn check_q(t: &mut Tally, s: &mut Sampler, n: usize) -> Result<()> {
    let layout = s.layout().clone();
    let p = s.projection_q(n);
    let q = s.projection_q(n);
    let family = s.orthogonal_projections_q(n, 3);
    let mask: Vec<bool> = (0..layout.num_blocks())
        .map(|_| s.rng().gen_bool(0.5))
        .collect();
    check_common(t, &p, &q, &family, &mask)?;

    let pair = || show(&[("p", &p), ("q", &q)]);
    let meet = p.proj_meet(&q)?;
    let join = p.proj_join(&q)?;
    let lattice_ok = meet.is_projection()
        && join.is_projection()
        && meet.mul(&p)? == meet
        && meet.mul(&q)? == meet
        && p.mul(&join)? == p
        && q.mul(&join)? == q;
    let sides = t.equivalent(&p.sub(&meet)?, &join.sub(&q)?)?;
    t.check("P", lattice_ok && sides, pair);

    // targeted (Fin): the projection onto a spanning set is the identity
    let rows: Vec<Matrix<RatFun>> = p
        .blocks()
        .iter()
        .map(|m| orthogonal_projection(&Matrix::identity(m.rows()).vstack(m)))
        .collect();
    let spanning = QMatrix::from_blocks(&layout, n, n, rows)?;
    t.check("Fin", spanning.is_identity(), || show(&[("p", &spanning)]));

    // (D10) on a finite increasing chain: the supremum is the last member
    let chain = s.chain_q(n, 3);
    let ds = chain.iter().map(d).collect::<Result<Vec<_>>>()?;
    let mut ok = chain
        .windows(2)
        .all(|w| w[0].mul(&w[1]).is_ok_and(|m| m == w[0]));
    ok &= ds.windows(2).all(|w| w[0].le(&w[1]));
    let last = ds.last().expect("non-empty");
    ok &= ds.iter().all(|v| v.le(last));
    t.check("D10", ok, || {
        show(&[("p1", &chain[0]), ("p2", &chain[1]), ("p3", &chain[2])])
    });
    Ok(())
}

fn check_r(t: &mut Tally, s: &mut Sampler, n: usize) -> Result<()> {
    let layout = s.layout().clone();
    let p = s.idempotent_r(n);
    let q = s.idempotent_r(n);
    let family = s.orthogonal_idempotents_r(n, 3);
    let mask: Vec<bool> = (0..layout.num_blocks())
        .map(|_| s.rng().gen_bool(0.5))
        .collect();
    check_common(t, &p, &q, &family, &mask)?;
    for x in [&p, &q] {
        t.check("V", v_class(x)? == v_class(&x.to_q())?, || {
            show(&[("p", x)])
        });
    }
    Ok(())
}

/// Runs `params.samples` rounds; each round samples projections on the Q
/// side and idempotents on the R side at a random logical size `n ≤ max_n`.
pub fn check_axioms(s: &Structure, params: &AxiomParams) -> Result<AxiomReport> {
    let layout = s.layout();
    layout.field.require_positive_definite()?;
    let mut sampler = Sampler::new(layout, params.seed);
    let mut tally = Tally::default();
    for _ in 0..params.samples {
        let n = sampler.rng().gen_range(1..=params.max_n.max(1));
        check_q(&mut tally, &mut sampler, n)?;
        check_r(&mut tally, &mut sampler, n)?;
    }
    Ok(tally.report(params))
}
