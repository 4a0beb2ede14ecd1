//! Seeded random idempotents, projections and presentations over a block
//! ring.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::{orthogonal_projection, BlockKind, Layout, Matrix, QMatrix, RMatrix};
use crate::scalars::{FieldKind, Laurent, RatFun, Ring, Scalar};

pub struct Sampler {
    layout: Layout,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(layout: &Layout, seed: u64) -> Self {
        Sampler {
            layout: layout.clone(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn scalar(&mut self) -> Scalar {
        let c = Scalar::from_int(*[1, -1, 2].choose(&mut self.rng).expect("non-empty"));
        if self.layout.field == FieldKind::Gaussian && self.rng.gen_bool(0.25) {
            c.mul(&Scalar::i())
        } else {
            self.layout.field.embed(&c)
        }
    }

    /// A small nonzero entry: a scalar on sink blocks, one of a few short
    /// Laurent polynomials on cycle blocks.
    pub fn entry(&mut self, kind: BlockKind) -> Laurent {
        let c = self.scalar();
        match kind {
            BlockKind::Sink => Laurent::constant(c),
            BlockKind::Cycle => {
                let shape = match self.rng.gen_range(0..5) {
                    0 => Laurent::from_ints(0, &[1]),
                    1 => Laurent::x(),
                    2 => Laurent::from_ints(-1, &[1]),
                    3 => Laurent::from_ints(0, &[1, 1]),
                    _ => Laurent::from_ints(-1, &[1, 0, 1]),
                };
                shape.scale(&c)
            }
        }
    }

    /// Rows with one to three nonzero entries each.
    fn sparse(&mut self, kind: BlockKind, rows: usize, cols: usize) -> Matrix<Laurent> {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for _ in 0..self.rng.gen_range(1..=3) {
                let j = self.rng.gen_range(0..cols);
                let e = self.entry(kind);
                m.set(i, j, e);
            }
        }
        m
    }

    /// Rows with one or two nonzero entries each.
    fn sparse_rows(&mut self, kind: BlockKind, count: usize, cols: usize) -> Matrix<RatFun> {
        let mut m = Matrix::zeros(count, cols);
        for i in 0..count {
            let nonzeros = if cols > 1 && self.rng.gen_bool(0.5) {
                2
            } else {
                1
            };
            for _ in 0..nonzeros {
                let j = self.rng.gen_range(0..cols);
                let e = self.entry(kind);
                m.set(i, j, RatFun::from_laurent(e));
            }
        }
        m
    }

    /// Orthogonal projections `p₁, …, p_parts` onto successive pieces of a
    /// random subspace: `pᵢ` projects onto the orthogonal complement of the
    /// first `i−1` pieces inside the first `i`. The field must be positive
    /// definite.
    pub fn orthogonal_projections_q(&mut self, n: usize, parts: usize) -> Vec<QMatrix> {
        let layout = self.layout.clone();
        let mut per_block: Vec<Vec<Matrix<RatFun>>> = Vec::new();
        for shape in &layout.blocks {
            let size = n * shape.size;
            let total = self.rng.gen_range(0..=size + 1);
            let rows = self.sparse_rows(shape.kind, total, size);
            let mut cuts: Vec<usize> = (0..parts.saturating_sub(1))
                .map(|_| self.rng.gen_range(0..=total))
                .collect();
            cuts.push(total);
            cuts.sort_unstable();
            let mut previous = Matrix::zeros(size, size);
            let mut pieces = Vec::new();
            for &cut in &cuts {
                let cur = orthogonal_projection(&rows.submatrix(0..cut, 0..size));
                pieces.push(cur.sub(&previous));
                previous = cur;
            }
            per_block.push(pieces);
        }
        (0..parts)
            .map(|k| {
                let blocks = per_block.iter().map(|pieces| pieces[k].clone()).collect();
                QMatrix::from_blocks(&layout, n, n, blocks).expect("shapes match")
            })
            .collect()
    }

    pub fn projection_q(&mut self, n: usize) -> QMatrix {
        self.orthogonal_projections_q(n, 1).pop().expect("one part")
    }

    /// An increasing chain `p₁ ≤ … ≤ p_len`.
    pub fn chain_q(&mut self, n: usize, len: usize) -> Vec<QMatrix> {
        let parts = self.orthogonal_projections_q(n, len);
        let mut acc = QMatrix::zeros(&self.layout, n, n);
        parts
            .into_iter()
            .map(|p| {
                acc = acc.add(&p).expect("same shape");
                acc.clone()
            })
            .collect()
    }

    /// Pairwise orthogonal idempotents `u·Dᵢ·u⁻¹` for a random unimodular
    /// `u` and disjoint diagonal 0/1 matrices `Dᵢ`.
    pub fn orthogonal_idempotents_r(&mut self, n: usize, parts: usize) -> Vec<RMatrix> {
        let layout = self.layout.clone();
        let mut per_block: Vec<Vec<Matrix<Laurent>>> = Vec::new();
        for shape in &layout.blocks {
            let size = n * shape.size;
            let (u, u_inv) = self.unimodular(shape.kind, size);
            // coordinate i goes to part `slot[i]`, or nowhere
            let slot: Vec<Option<usize>> = (0..size)
                .map(|_| {
                    let k = self.rng.gen_range(0..=parts);
                    (k < parts).then_some(k)
                })
                .collect();
            let pieces = (0..parts)
                .map(|k| {
                    let diag: Vec<Laurent> = slot
                        .iter()
                        .map(|&s| {
                            if s == Some(k) {
                                Laurent::one()
                            } else {
                                Laurent::zero()
                            }
                        })
                        .collect();
                    u.mul(&Matrix::diagonal(&diag)).mul(&u_inv)
                })
                .collect();
            per_block.push(pieces);
        }
        (0..parts)
            .map(|k| {
                let blocks = per_block.iter().map(|pieces| pieces[k].clone()).collect();
                RMatrix::from_blocks(&layout, n, n, blocks).expect("sink blocks stay constant")
            })
            .collect()
    }

    pub fn idempotent_r(&mut self, n: usize) -> RMatrix {
        self.orthogonal_idempotents_r(n, 1).pop().expect("one part")
    }

    /// A product of elementary matrices and its inverse.
    fn unimodular(&mut self, kind: BlockKind, size: usize) -> (Matrix<Laurent>, Matrix<Laurent>) {
        let mut u = Matrix::identity(size);
        let mut u_inv = Matrix::identity(size);
        if size < 2 {
            return (u, u_inv);
        }
        for _ in 0..self.rng.gen_range(0..=3) {
            let i = self.rng.gen_range(0..size);
            let j = (i + self.rng.gen_range(1..size)) % size;
            let f = self.entry(kind);
            // u ← u·(1 + f·E_ij), u⁻¹ ← (1 − f·E_ij)·u⁻¹
            u.add_col_multiple(j, i, &f);
            u_inv.add_row_multiple(i, j, &f.neg());
        }
        (u, u_inv)
    }

    /// A random `k×n` relation matrix with `k ≤ n + 1`.
    pub fn relations(&mut self, n: usize) -> RMatrix {
        let k = self.rng.gen_range(0..=n + 1);
        let layout = self.layout.clone();
        let blocks = layout
            .blocks
            .iter()
            .map(|shape| self.sparse(shape.kind, k * shape.size, n * shape.size))
            .collect();
        RMatrix::from_blocks(&layout, k, n, blocks).expect("sink blocks stay constant")
    }
}
