//! The dimension function for algebraic equivalence on idempotents of
//! `M_n(R)` and `M_n(Q)`, module dimensions, and the axiom checks.
//!
//! Dimension values live in `ℚ^{#blocks}`. With `R` normalized so that
//! `d(1_n) = n`, the value on block `b` is `rank_b(p) / s_b`.

pub mod axioms;
mod module;
pub mod sample;
mod star;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use module::{dim_module, dim_over_q, split_bnd, ModulePresentation, Splitting, TorsionBlock};
pub use star::{sim_star_search, sim_star_verify, StarSearch};

use crate::blocks::{BlockEntry, BlockKind, BlockMatrix, BlockShape, Layout, Matrix, RMatrix};
use crate::error::{Error, Result};
use crate::structure::Structure;

/// One nonnegative rational per block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimVector {
    pub shapes: Vec<BlockShape>,
    pub values: Vec<BigRational>,
}

impl DimVector {
    pub fn zero(layout: &Layout) -> Self {
        DimVector {
            shapes: layout.blocks.clone(),
            values: vec![BigRational::zero(); layout.num_blocks()],
        }
    }

    /// `n` on every block: the dimension of `R^n`.
    pub fn free(layout: &Layout, n: usize) -> Self {
        DimVector {
            shapes: layout.blocks.clone(),
            values: vec![BigRational::from_integer(BigInt::from(n)); layout.num_blocks()],
        }
    }

    fn from_ranks(layout: &Layout, ranks: &[usize]) -> Self {
        DimVector {
            shapes: layout.blocks.clone(),
            values: ranks
                .iter()
                .zip(&layout.blocks)
                .map(|(&r, b)| BigRational::new(BigInt::from(r), BigInt::from(b.size)))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        DimVector {
            shapes: self.shapes.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Multiplies by the indicator of `mask`.
    pub fn restrict(&self, mask: &[bool]) -> Self {
        DimVector {
            shapes: self.shapes.clone(),
            values: self
                .values
                .iter()
                .zip(mask)
                .map(|(v, &keep)| if keep { v.clone() } else { BigRational::zero() })
                .collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        DimVector {
            shapes: self.shapes.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Entrywise `≤`.
    pub fn le(&self, other: &Self) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn to_json(&self) -> DimVectorJson {
        DimVectorJson {
            blocks: self
                .shapes
                .iter()
                .zip(&self.values)
                .map(|(s, v)| DimEntryJson {
                    kind: s.kind,
                    size: s.size,
                    value: v.to_string(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.len() == 1 {
            return write!(f, "{}", self.values[0]);
        }
        let parts: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimVectorJson {
    pub blocks: Vec<DimEntryJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimEntryJson {
    pub kind: BlockKind,
    pub size: usize,
    pub value: String,
}

fn require_idempotent<T: BlockEntry>(p: &BlockMatrix<T>) -> Result<()> {
    if p.is_idempotent() {
        Ok(())
    } else {
        Err(Error::NotIdempotent)
    }
}

/// `d(p)`: rank over the fraction field divided by the block size.
pub fn d<T: BlockEntry>(p: &BlockMatrix<T>) -> Result<DimVector> {
    p.layout().field.require_positive_definite()?;
    require_idempotent(p)?;
    Ok(d_checked(p))
}

/// `d(p)` for a `p` already known to be idempotent.
pub(crate) fn d_checked<T: BlockEntry>(p: &BlockMatrix<T>) -> DimVector {
    DimVector::from_ranks(p.layout(), &p.idempotent_ranks())
}

/// The per-block rank: the class of `p·R^n` in `V(R) ≅ ℕ^{#blocks}`.
pub fn v_class<T: BlockEntry>(p: &BlockMatrix<T>) -> Result<Vec<usize>> {
    require_idempotent(p)?;
    Ok(p.idempotent_ranks())
}

/// Blocks on which `p` is nonzero.
pub fn support<T: BlockEntry>(p: &BlockMatrix<T>) -> Vec<bool> {
    p.blocks().iter().map(|m| !m.is_zero()).collect()
}

/// The smallest central idempotent `c` with `c·p = p`.
pub fn central_cover<T: BlockEntry>(p: &BlockMatrix<T>) -> Result<BlockMatrix<T>> {
    require_idempotent(p)?;
    Ok(BlockMatrix::central(p.layout(), p.rows(), &support(p)))
}

/// The order `m` of `p` as a simple idempotent, if it is one: `m` orthogonal
/// copies of `p` sum to `C(p)`, so `m = n·s_b / rank_b` on every block of
/// the support.
pub fn simple_order<T: BlockEntry>(p: &BlockMatrix<T>) -> Result<Option<usize>> {
    require_idempotent(p)?;
    Ok(simple_order_checked(p))
}

pub(crate) fn simple_order_checked<T: BlockEntry>(p: &BlockMatrix<T>) -> Option<usize> {
    let n = p.rows();
    let mut order = None;
    for (r, shape) in p.idempotent_ranks().into_iter().zip(&p.layout().blocks) {
        if r == 0 {
            continue;
        }
        let total = n * shape.size;
        if !total.is_multiple_of(r) {
            return None;
        }
        match order {
            None => order = Some(total / r),
            Some(m) if m != total / r => return None,
            Some(_) => {}
        }
    }
    order
}

/// For a simple idempotent of order `m`: `m` pairwise orthogonal idempotents,
/// each algebraically equivalent to `p`, summing to `C(p)`.
pub fn simple_family<T: BlockEntry>(p: &BlockMatrix<T>) -> Result<Option<Vec<BlockMatrix<T>>>> {
    require_idempotent(p)?;
    simple_family_checked(p)
}

pub(crate) fn simple_family_checked<T: BlockEntry>(
    p: &BlockMatrix<T>,
) -> Result<Option<Vec<BlockMatrix<T>>>> {
    let Some(m) = simple_order_checked(p) else {
        return Ok(None);
    };
    let layout = p.layout();
    let ranks = p.idempotent_ranks();
    let family = (0..m)
        .map(|k| {
            let blocks = layout
                .blocks
                .iter()
                .zip(&ranks)
                .map(|(shape, &r)| {
                    let size = p.rows() * shape.size;
                    let diag: Vec<T> = (0..size)
                        .map(|i| {
                            if r > 0 && i / r == k {
                                T::one()
                            } else {
                                T::zero()
                            }
                        })
                        .collect();
                    Matrix::diagonal(&diag)
                })
                .collect();
            BlockMatrix::from_blocks(layout, p.rows(), p.cols(), blocks)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(family))
}

/// `x`, `y` with `p = x·y` and `q = y·x`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivWitness<T> {
    pub x: BlockMatrix<T>,
    pub y: BlockMatrix<T>,
}

impl<T: BlockEntry> EquivWitness<T> {
    pub fn verify(&self, p: &BlockMatrix<T>, q: &BlockMatrix<T>) -> bool {
        matches!(self.x.mul(&self.y), Ok(ref xy) if xy == p)
            && matches!(self.y.mul(&self.x), Ok(ref yx) if yx == q)
    }
}

/// `p = X·Y` with `Y·X = I`, per block.
fn factor<T: BlockEntry>(p: &BlockMatrix<T>) -> Vec<(Matrix<T>, Matrix<T>)> {
    p.blocks()
        .iter()
        .map(|m| {
            let (b, c) = T::summand_basis(m);
            (m.mul(&c), b)
        })
        .collect()
}

fn check_pair<T: BlockEntry>(p: &BlockMatrix<T>, q: &BlockMatrix<T>) -> Result<()> {
    require_idempotent(p)?;
    require_idempotent(q)?;
    if p.layout() != q.layout() || p.rows() != q.rows() {
        return Err(Error::ShapeMismatch(
            "idempotents of different shapes".into(),
        ));
    }
    Ok(())
}

/// Decides `p ∼ₐ q`; a positive answer carries a verified witness.
pub fn sim_a<T: BlockEntry>(
    p: &BlockMatrix<T>,
    q: &BlockMatrix<T>,
) -> Result<Option<EquivWitness<T>>> {
    check_pair(p, q)?;
    sim_a_checked(p, q)
}

pub(crate) fn sim_a_checked<T: BlockEntry>(
    p: &BlockMatrix<T>,
    q: &BlockMatrix<T>,
) -> Result<Option<EquivWitness<T>>> {
    if p.idempotent_ranks() != q.idempotent_ranks() {
        return Ok(None);
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for ((xp, yp), (xq, yq)) in factor(p).into_iter().zip(factor(q)) {
        xs.push(xp.mul(&yq));
        ys.push(xq.mul(&yp));
    }
    let w = EquivWitness {
        x: BlockMatrix::from_blocks(p.layout(), p.rows(), p.cols(), xs)?,
        y: BlockMatrix::from_blocks(p.layout(), p.rows(), p.cols(), ys)?,
    };
    if !w.verify(p, q) {
        return Err(Error::InvalidArgument(
            "equivalence witness failed verification".into(),
        ));
    }
    Ok(Some(w))
}

/// `p ⪯ q` with its certificate: a sub-idempotent `q′ ≤ q` and a witness
/// for `p ∼ₐ q′`.
#[derive(Debug, Clone, PartialEq)]
pub struct Domination<T> {
    pub sub: BlockMatrix<T>,
    pub witness: EquivWitness<T>,
}

pub fn dominate<T: BlockEntry>(
    p: &BlockMatrix<T>,
    q: &BlockMatrix<T>,
) -> Result<Option<Domination<T>>> {
    check_pair(p, q)?;
    dominate_checked(p, q)
}

pub(crate) fn dominate_checked<T: BlockEntry>(
    p: &BlockMatrix<T>,
    q: &BlockMatrix<T>,
) -> Result<Option<Domination<T>>> {
    let rp = p.idempotent_ranks();
    if rp.iter().zip(q.idempotent_ranks()).any(|(a, b)| *a > b) {
        return Ok(None);
    }
    let blocks = factor(q)
        .into_iter()
        .zip(&rp)
        .map(|((x, y), &r)| {
            let n = x.rows();
            x.submatrix(0..n, 0..r).mul(&y.submatrix(0..r, 0..n))
        })
        .collect();
    let sub = BlockMatrix::from_blocks(q.layout(), q.rows(), q.cols(), blocks)?;
    debug_assert!(sub.mul(q)? == sub && q.mul(&sub)? == sub);
    let witness = sim_a_checked(p, &sub)?.expect("ranks match by construction");
    Ok(Some(Domination { sub, witness }))
}

/// `p ⪯ₐ q`, decided by `d(p) ≤ d(q)`.
pub fn preceq_a<T: BlockEntry>(p: &BlockMatrix<T>, q: &BlockMatrix<T>) -> Result<bool> {
    check_pair(p, q)?;
    Ok(p.idempotent_ranks()
        .iter()
        .zip(q.idempotent_ranks())
        .all(|(a, b)| *a <= b))
}

/// The central idempotent of generalized comparability.
#[derive(Debug, Clone, PartialEq)]
pub struct GcWitness<T> {
    pub mask: Vec<bool>,
    pub c: BlockMatrix<T>,
}

/// `c` = indicator of the blocks where `rank(p) ≤ rank(q)`, so that
/// `c·p ⪯ c·q` and `(1−c)·q ⪯ (1−c)·p`; both dominations are verified.
pub fn gc_witness<T: BlockEntry>(p: &BlockMatrix<T>, q: &BlockMatrix<T>) -> Result<GcWitness<T>> {
    check_pair(p, q)?;
    gc_witness_checked(p, q)
}

pub(crate) fn gc_witness_checked<T: BlockEntry>(
    p: &BlockMatrix<T>,
    q: &BlockMatrix<T>,
) -> Result<GcWitness<T>> {
    let mask: Vec<bool> = p
        .idempotent_ranks()
        .iter()
        .zip(q.idempotent_ranks())
        .map(|(a, b)| *a <= b)
        .collect();
    let c = BlockMatrix::central(p.layout(), p.rows(), &mask);
    let rest = BlockMatrix::identity(p.layout(), p.rows()).sub(&c)?;
    // central cuts of idempotents are idempotent
    let ok = dominate_checked(&c.mul(p)?, &c.mul(q)?)?.is_some()
        && dominate_checked(&rest.mul(q)?, &rest.mul(p)?)?.is_some();
    if !ok {
        return Err(Error::InvalidArgument(
            "comparability witness failed verification".into(),
        ));
    }
    Ok(GcWitness { mask, c })
}

/// One CK2 relation in the V-monoid: `[v] = Σ_{s(e)=v} [r(e)]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VRelation {
    pub vertex: String,
    pub class: Vec<usize>,
    pub sum_over_edges: Vec<usize>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VRelationReport {
    pub classes: Vec<(String, Vec<usize>)>,
    pub relations: Vec<VRelation>,
    /// Whether every vertex class is unchanged by passing to the Q side.
    pub q_invariant: bool,
    pub ok: bool,
}

pub fn v_relation_check(s: &Structure) -> Result<VRelationReport> {
    let alg = s.algebra();
    let g = alg.graph();
    let mut classes = Vec::new();
    let mut q_invariant = true;
    for v in 0..g.num_vertices() {
        let p: RMatrix = s.phi(&alg.vertex(v))?;
        let class = v_class(&p)?;
        q_invariant &= v_class(&p.to_q())? == class;
        classes.push(class);
    }
    let mut relations = Vec::new();
    for v in 0..g.num_vertices() {
        if g.is_sink(v) {
            continue;
        }
        let mut sum = vec![0; s.layout().num_blocks()];
        for &e in g.out_edges(v) {
            for (acc, c) in sum.iter_mut().zip(&classes[g.dst(e)]) {
                *acc += c;
            }
        }
        relations.push(VRelation {
            vertex: g.vertex_name(v).to_string(),
            holds: sum == classes[v],
            class: classes[v].clone(),
            sum_over_edges: sum,
        });
    }
    let ok = q_invariant && relations.iter().all(|r| r.holds);
    Ok(VRelationReport {
        classes: (0..g.num_vertices())
            .map(|v| g.vertex_name(v).to_string())
            .zip(classes)
            .collect(),
        relations,
        q_invariant,
        ok,
    })
}

/// `1/m` as a rational.
pub fn reciprocal(m: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(m))
}

#[cfg(test)]
mod tests;
