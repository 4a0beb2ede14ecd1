//! `p ∼* q`: witness verification and a bounded search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::{BlockEntry, BlockKind, BlockMatrix, Matrix};
use crate::error::{Error, Result};
use crate::scalars::{FieldKind, Laurent, Ring, Scalar};

fn require_projection<T: BlockEntry>(p: &BlockMatrix<T>) -> Result<()> {
    if p.is_projection() {
        Ok(())
    } else {
        Err(Error::NotProjection)
    }
}

/// Checks `p = x·x*` and `q = x*·x` exactly.
pub fn sim_star_verify<T: BlockEntry>(
    p: &BlockMatrix<T>,
    q: &BlockMatrix<T>,
    x: &BlockMatrix<T>,
) -> Result<bool> {
    require_projection(p)?;
    require_projection(q)?;
    let xs = x.adjoint();
    Ok(x.mul(&xs).is_ok_and(|m| m == *p) && xs.mul(x).is_ok_and(|m| m == *q))
}

#[derive(Debug, Clone, PartialEq)]
pub enum StarSearch<T> {
    Found(BlockMatrix<T>),
    /// The ranks differ, so not even `p ∼ₐ q` holds.
    NotEquivalent,
    /// No witness among `tried` candidates; this proves nothing.
    Unknown {
        tried: usize,
    },
}

fn units<T: BlockEntry>(kind: BlockKind, field: FieldKind) -> Vec<T> {
    let mut scalars = vec![Scalar::one(), Scalar::one().neg()];
    if field == FieldKind::Gaussian {
        scalars.extend([Scalar::i(), Scalar::i().neg()]);
    }
    let powers: &[i64] = match kind {
        BlockKind::Sink => &[0],
        BlockKind::Cycle => &[0, 1, -1],
    };
    powers
        .iter()
        .flat_map(|&k| {
            scalars
                .iter()
                .map(move |c| T::from_laurent(Laurent::monomial(c.clone(), k)))
        })
        .collect()
}

/// Candidate `x_b = p_b·w·q_b` for partial monomial matrices `w` of rank `r`
/// with unit entries, enumerated depth-first until the budget runs out.
struct MonomialSearch<'a, T> {
    p: &'a Matrix<T>,
    q: &'a Matrix<T>,
    units: Vec<T>,
    rank: usize,
    tried: usize,
    budget: usize,
}

impl<T: BlockEntry> MonomialSearch<'_, T> {
    fn accept(&self, w: &Matrix<T>) -> Option<Matrix<T>> {
        let x = self.p.mul(w).mul(self.q);
        let xs = x.adjoint();
        (x.mul(&xs) == *self.p && xs.mul(&x) == *self.q).then_some(x)
    }

    fn search(
        &mut self,
        w: &mut Matrix<T>,
        row: usize,
        used: &mut Vec<bool>,
        placed: usize,
    ) -> Option<Matrix<T>> {
        if placed == self.rank {
            self.tried += 1;
            return self.accept(w);
        }
        let n = w.rows();
        if row == n || n - row < self.rank - placed || self.tried >= self.budget {
            return None;
        }
        for col in 0..n {
            if used[col] {
                continue;
            }
            used[col] = true;
            for k in 0..self.units.len() {
                w.set(row, col, self.units[k].clone());
                if let Some(x) = self.search(w, row + 1, used, placed + 1) {
                    return Some(x);
                }
                if self.tried >= self.budget {
                    break;
                }
            }
            w.set(row, col, T::zero());
            used[col] = false;
            if self.tried >= self.budget {
                return None;
            }
        }
        self.search(w, row + 1, used, placed)
    }
}

/// Random `u` built from elementary operations with unit or small entries.
fn random_unimodular<T: BlockEntry>(n: usize, units: &[T], rng: &mut ChaCha8Rng) -> Matrix<T> {
    let mut u = Matrix::identity(n);
    for _ in 0..rng.gen_range(1..=3) {
        if n < 2 {
            break;
        }
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let f = units[rng.gen_range(0..units.len())].clone();
        u.add_row_multiple(i, j, &f);
    }
    u
}

/// Looks for `x` with `p = x·x*`, `q = x*·x`: first among `p·w·q` for
/// partial monomial `w` with unit entries, then among `p·u·q` for sampled
/// unimodular `u`. At most `budget` candidates per block.
pub fn sim_star_search<T: BlockEntry>(
    p: &BlockMatrix<T>,
    q: &BlockMatrix<T>,
    budget: usize,
    seed: u64,
) -> Result<StarSearch<T>> {
    require_projection(p)?;
    require_projection(q)?;
    if p.layout() != q.layout() || p.rows() != q.rows() {
        return Err(Error::ShapeMismatch(
            "projections of different shapes".into(),
        ));
    }
    if p == q {
        return Ok(StarSearch::Found(p.clone()));
    }
    let ranks = p.idempotent_ranks();
    if ranks != q.idempotent_ranks() {
        return Ok(StarSearch::NotEquivalent);
    }
    let layout = p.layout();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::new();
    let mut tried = 0;
    for (b, shape) in layout.blocks.iter().enumerate() {
        let (pb, qb) = (p.block(b), q.block(b));
        let units = units::<T>(shape.kind, layout.field);
        let mut search = MonomialSearch {
            p: pb,
            q: qb,
            units: units.clone(),
            rank: ranks[b],
            tried: 0,
            budget,
        };
        let n = pb.rows();
        let mut found = search.search(&mut Matrix::zeros(n, n), 0, &mut vec![false; n], 0);
        tried += search.tried;
        let mut extra = 0;
        while found.is_none() && search.tried + extra < budget {
            extra += 1;
            let u = random_unimodular(n, &units, &mut rng);
            found = search.accept(&u);
        }
        tried += extra;
        match found {
            Some(x) => blocks.push(x),
            None => return Ok(StarSearch::Unknown { tried }),
        }
    }
    let x = BlockMatrix::from_blocks(layout, p.rows(), p.cols(), blocks)?;
    debug_assert!(sim_star_verify(p, q, &x)?);
    Ok(StarSearch::Found(x))
}
