//! Exact linear algebra in the block ring `⊕ M_s(K) ⊕ M_s(K[x,x⁻¹])` and its
//! fraction-field counterpart.
//!
//! A logical `n×k` matrix over the block ring is stored as one `(n·s)×(k·s)`
//! matrix per block of size `s`, with logical index `(i, a)` at `i·s + a`.
//! R-side matrices have [`Laurent`] entries, Q-side matrices [`RatFun`]
//! entries; sink blocks only ever hold constants.

mod matrix;
mod snf;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use matrix::{Matrix, Rref};
pub use snf::{snf, Snf};

use crate::error::{Error, Result};
use crate::scalars::{FieldKind, Laurent, RatFun, Ring, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    /// Entries in K.
    Sink,
    /// Entries in K[x, x⁻¹] (R side) or K(x) (Q side).
    Cycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    R,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockShape {
    pub kind: BlockKind,
    pub size: usize,
}

/// The shape of the block ring: coefficient field plus ordered block list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub field: FieldKind,
    pub blocks: Vec<BlockShape>,
}

impl Layout {
    pub fn new(field: FieldKind, blocks: Vec<BlockShape>) -> Self {
        Layout { field, blocks }
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().map(|b| b.size)
    }
}

/// Entry rings of block matrices, with the per-block linear algebra the
/// dimension theory needs. Implemented by [`Laurent`] (via Smith normal
/// form) and [`RatFun`] (via Gauss–Jordan elimination).
pub trait BlockEntry: Ring {
    const SIDE: Side;

    /// Rank over the fraction field K(x).
    fn rank(m: &Matrix<Self>) -> usize;

    /// `(B, C)` where the rows of `B` are a basis of the smallest direct
    /// summand containing the row space of `m`, and `B·C = I`.
    fn summand_basis(m: &Matrix<Self>) -> (Matrix<Self>, Matrix<Self>);

    /// Some `Y` with `a·Y = t`.
    fn solve(a: &Matrix<Self>, t: &Matrix<Self>) -> Option<Matrix<Self>>;

    fn is_constant(&self) -> bool;

    fn to_ratfun(&self) -> RatFun;

    fn from_laurent(f: Laurent) -> Self;

    fn parse_entry(text: &str, field: FieldKind) -> Result<Self>;

    fn embed_field(&self, field: FieldKind) -> Result<Self>;
}

impl BlockEntry for Laurent {
    const SIDE: Side = Side::R;

    fn rank(m: &Matrix<Self>) -> usize {
        snf(m).rank
    }

    fn summand_basis(m: &Matrix<Self>) -> (Matrix<Self>, Matrix<Self>) {
        let s = snf(m);
        let n = m.cols();
        (
            s.v_inv.submatrix(0..s.rank, 0..n),
            s.v.submatrix(0..n, 0..s.rank),
        )
    }

    fn solve(a: &Matrix<Self>, t: &Matrix<Self>) -> Option<Matrix<Self>> {
        let s = snf(a);
        let ut = s.u.mul(t);
        let mut z = Matrix::zeros(a.cols(), t.cols());
        for i in 0..a.rows() {
            for j in 0..t.cols() {
                let rhs = ut.get(i, j);
                if i < s.rank {
                    z.set(i, j, rhs.div_exact(s.d.get(i, i))?);
                } else if !rhs.is_zero() {
                    return None;
                }
            }
        }
        Some(s.v.mul(&z))
    }

    fn is_constant(&self) -> bool {
        Laurent::is_constant(self)
    }

    fn to_ratfun(&self) -> RatFun {
        RatFun::from_laurent(self.clone())
    }

    fn from_laurent(f: Laurent) -> Self {
        f
    }

    fn parse_entry(text: &str, field: FieldKind) -> Result<Self> {
        Laurent::parse(text, field)
    }

    fn embed_field(&self, field: FieldKind) -> Result<Self> {
        self.in_field(field)
    }
}

impl BlockEntry for RatFun {
    const SIDE: Side = Side::Q;

    fn rank(m: &Matrix<Self>) -> usize {
        m.rank()
    }

    fn summand_basis(m: &Matrix<Self>) -> (Matrix<Self>, Matrix<Self>) {
        let Rref { reduced, pivots } = m.rref();
        let b = reduced.submatrix(0..pivots.len(), 0..m.cols());
        let mut c = Matrix::zeros(m.cols(), pivots.len());
        for (k, &p) in pivots.iter().enumerate() {
            c.set(p, k, RatFun::one());
        }
        (b, c)
    }

    fn solve(a: &Matrix<Self>, t: &Matrix<Self>) -> Option<Matrix<Self>> {
        a.solve_right(t)
    }

    fn is_constant(&self) -> bool {
        RatFun::is_constant(self)
    }

    fn to_ratfun(&self) -> RatFun {
        self.clone()
    }

    fn from_laurent(f: Laurent) -> Self {
        RatFun::from_laurent(f)
    }

    fn parse_entry(text: &str, field: FieldKind) -> Result<Self> {
        RatFun::parse(text, field)
    }

    fn embed_field(&self, field: FieldKind) -> Result<Self> {
        RatFun::new(self.numer().in_field(field)?, self.denom().in_field(field)?)
    }
}

/// A logical `rows×cols` matrix over the block ring.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix<T> {
    layout: Layout,
    rows: usize,
    cols: usize,
    blocks: Vec<Matrix<T>>,
}

/// R-side matrices (entries in K or K[x, x⁻¹]).
pub type RMatrix = BlockMatrix<Laurent>;
/// Q-side matrices (entries in K or K(x)).
pub type QMatrix = BlockMatrix<RatFun>;

impl<T: BlockEntry> BlockMatrix<T> {
    /// Validates block shapes and that sink blocks hold constants.
    pub fn from_blocks(
        layout: &Layout,
        rows: usize,
        cols: usize,
        blocks: Vec<Matrix<T>>,
    ) -> Result<Self> {
        if blocks.len() != layout.num_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks given, layout has {}",
                blocks.len(),
                layout.num_blocks()
            )));
        }
        for (b, (m, shape)) in blocks.iter().zip(&layout.blocks).enumerate() {
            if m.shape() != (rows * shape.size, cols * shape.size) {
                return Err(Error::ShapeMismatch(format!(
                    "block {b} is {}×{}, expected {}×{}",
                    m.rows(),
                    m.cols(),
                    rows * shape.size,
                    cols * shape.size
                )));
            }
            if shape.kind == BlockKind::Sink {
                if let Some(bad) = m.entries().find(|e| !e.is_constant()) {
                    return Err(Error::NotConstant(bad.to_string()));
                }
            }
        }
        Ok(BlockMatrix {
            layout: layout.clone(),
            rows,
            cols,
            blocks,
        })
    }

    pub fn zeros(layout: &Layout, rows: usize, cols: usize) -> Self {
        BlockMatrix {
            layout: layout.clone(),
            rows,
            cols,
            blocks: layout
                .blocks
                .iter()
                .map(|b| Matrix::zeros(rows * b.size, cols * b.size))
                .collect(),
        }
    }

    pub fn identity(layout: &Layout, n: usize) -> Self {
        BlockMatrix {
            layout: layout.clone(),
            rows: n,
            cols: n,
            blocks: layout
                .blocks
                .iter()
                .map(|b| Matrix::identity(n * b.size))
                .collect(),
        }
    }

    /// The central idempotent of `M_n` that is the identity on the blocks
    /// where `mask` is set and zero elsewhere.
    pub fn central(layout: &Layout, n: usize, mask: &[bool]) -> Self {
        let mut m = Self::identity(layout, n);
        for (b, &keep) in mask.iter().enumerate() {
            if !keep {
                m.blocks[b] = Matrix::zeros(n * layout.blocks[b].size, n * layout.blocks[b].size);
            }
        }
        m
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn block(&self, b: usize) -> &Matrix<T> {
        &self.blocks[b]
    }

    pub fn blocks(&self) -> &[Matrix<T>] {
        &self.blocks
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn side(&self) -> Side {
        T::SIDE
    }

    fn same_layout(&self, rhs: &Self) -> Result<()> {
        if self.layout != rhs.layout {
            return Err(Error::ShapeMismatch(
                "matrices live over different block rings".into(),
            ));
        }
        Ok(())
    }

    fn zip_blocks(&self, rhs: &Self, f: impl Fn(&Matrix<T>, &Matrix<T>) -> Matrix<T>) -> Self {
        BlockMatrix {
            layout: self.layout.clone(),
            rows: self.rows,
            cols: self.cols,
            blocks: self
                .blocks
                .iter()
                .zip(&rhs.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn map_blocks(&self, rows: usize, cols: usize, f: impl Fn(&Matrix<T>) -> Matrix<T>) -> Self {
        BlockMatrix {
            layout: self.layout.clone(),
            rows,
            cols,
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_layout(rhs)?;
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {}×{} and {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.zip_blocks(rhs, Matrix::add))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.same_layout(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = self.zip_blocks(rhs, Matrix::mul);
        out.cols = rhs.cols;
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map_blocks(self.rows, self.cols, Matrix::neg)
    }

    /// Multiplies every entry by a scalar of the entry ring.
    pub fn scale(&self, c: &T) -> Self {
        self.map_blocks(self.rows, self.cols, |m| m.scale(c))
    }

    /// Conjugate transpose with the entry involution (`x ↦ x⁻¹`, `k ↦ k̄`).
    pub fn adjoint(&self) -> Self {
        self.map_blocks(self.cols, self.rows, Matrix::adjoint)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.blocks.iter().all(Matrix::is_identity)
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_square() && self.blocks.iter().all(|m| m.mul(m) == *m)
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.is_square() && self.blocks.iter().all(|m| m.adjoint() == *m)
    }

    pub fn is_projection(&self) -> bool {
        self.is_self_adjoint() && self.is_idempotent()
    }

    /// Rank over the fraction field, per block.
    pub fn rank_q(&self) -> Vec<usize> {
        self.blocks.iter().map(T::rank).collect()
    }

    /// Per-block ranks of an idempotent. In characteristic zero the rank of
    /// an idempotent equals its trace, which is much cheaper than elimination.
    pub fn idempotent_ranks(&self) -> Vec<usize> {
        if matches!(self.layout.field, FieldKind::Prime(_)) {
            return self.rank_q();
        }
        self.blocks
            .iter()
            .map(|m| {
                let trace =
                    (0..m.rows().min(m.cols())).fold(T::zero(), |acc, i| acc.add(m.get(i, i)));
                trace
                    .to_ratfun()
                    .to_laurent()
                    .filter(Laurent::is_constant)
                    .and_then(|c| match c.constant_term() {
                        Scalar::Rat(r) if r.is_integer() => r.to_integer().try_into().ok(),
                        _ => None,
                    })
                    .unwrap_or_else(|| T::rank(m))
            })
            .collect()
    }

    /// The idempotent whose row space is the smallest direct summand of
    /// `R^cols` containing the row space of `self` (the torsion closure of the
    /// generated submodule).
    pub fn saturate(&self) -> Self {
        self.map_blocks(self.cols, self.cols, |m| {
            let (b, c) = T::summand_basis(m);
            c.mul(&b)
        })
    }

    /// Some `y` with `self·y = target`.
    pub fn ideal_membership(&self, target: &Self) -> Result<Option<Self>> {
        self.same_layout(target)?;
        if self.rows != target.rows {
            return Err(Error::ShapeMismatch(format!(
                "target has {} rows, expected {}",
                target.rows, self.rows
            )));
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (a, t) in self.blocks.iter().zip(&target.blocks) {
            match T::solve(a, t) {
                Some(y) => blocks.push(y),
                None => return Ok(None),
            }
        }
        let y = BlockMatrix {
            layout: self.layout.clone(),
            rows: self.cols,
            cols: target.cols,
            blocks,
        };
        debug_assert!(self.mul(&y).map(|p| p == *target).unwrap_or(false));
        Ok(Some(y))
    }

    /// Passes to the Q side.
    pub fn to_q(&self) -> QMatrix {
        BlockMatrix {
            layout: self.layout.clone(),
            rows: self.rows,
            cols: self.cols,
            blocks: self.blocks.iter().map(|m| m.map(T::to_ratfun)).collect(),
        }
    }

    /// Logical entry `(i, j)` as the `s×s` matrix it occupies in block `b`.
    pub fn logical_entry(&self, b: usize, i: usize, j: usize) -> Matrix<T> {
        let s = self.layout.blocks[b].size;
        self.blocks[b].submatrix(i * s..(i + 1) * s, j * s..(j + 1) * s)
    }

    /// Assembles a logical matrix from per-entry block matrices (each `1×1`).
    pub fn from_entries(layout: &Layout, entries: &[Vec<Self>]) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        let mut out = Self::zeros(layout, rows, cols);
        for (i, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch("ragged entry rows".into()));
            }
            for (j, e) in row.iter().enumerate() {
                if e.layout != *layout || (e.rows, e.cols) != (1, 1) {
                    return Err(Error::ShapeMismatch(
                        "entries must be 1×1 over the same ring".into(),
                    ));
                }
                for (b, shape) in layout.blocks.iter().enumerate() {
                    out.blocks[b].paste(i * shape.size, j * shape.size, &e.blocks[b]);
                }
            }
        }
        Ok(out)
    }

    /// Stacks `self` above `rhs` (same number of columns).
    pub fn vstack(&self, rhs: &Self) -> Result<Self> {
        self.same_layout(rhs)?;
        if self.cols != rhs.cols {
            return Err(Error::ShapeMismatch("column counts differ".into()));
        }
        let mut out = self.zip_blocks(rhs, Matrix::vstack);
        out.rows = self.rows + rhs.rows;
        Ok(out)
    }

    /// Replaces the matrix of block `b`.
    pub fn with_block(&self, b: usize, m: Matrix<T>) -> Result<Self> {
        let mut blocks = self.blocks.clone();
        blocks[b] = m;
        Self::from_blocks(&self.layout, self.rows, self.cols, blocks)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            n: self.rows,
            k: self.cols,
            side: T::SIDE,
            blocks: self
                .blocks
                .iter()
                .map(|m| {
                    m.to_rows()
                        .iter()
                        .map(|r| r.iter().map(ToString::to_string).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(layout: &Layout, json: &MatrixJson) -> Result<Self> {
        if json.side != T::SIDE {
            return Err(Error::InvalidArgument(format!(
                "expected a {:?}-side matrix, got {:?}",
                T::SIDE,
                json.side
            )));
        }
        let blocks = json
            .blocks
            .iter()
            .map(|rows| {
                let parsed = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|e| T::parse_entry(e, layout.field))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                if parsed
                    .iter()
                    .any(|r| r.len() != parsed.first().map_or(0, Vec::len))
                {
                    return Err(Error::ShapeMismatch("ragged matrix rows".into()));
                }
                Ok(if parsed.is_empty() {
                    Matrix::zeros(0, 0)
                } else {
                    Matrix::from_rows(parsed)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_blocks(layout, json.n, json.k, blocks)
    }
}

impl QMatrix {
    /// Passes back to the R side; fails on entries outside K[x, x⁻¹].
    pub fn to_r(&self) -> Result<RMatrix> {
        let blocks = self
            .blocks
            .iter()
            .map(|m| {
                m.try_map(|e| {
                    e.to_laurent()
                        .ok_or_else(|| Error::NotLaurent(e.to_string()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockMatrix {
            layout: self.layout.clone(),
            rows: self.rows,
            cols: self.cols,
            blocks,
        })
    }

    /// Orthogonal projection onto the row space of `self`, for the hermitian
    /// form `⟨v, w⟩ = Σ vᵢ·w̄ᵢ` (anisotropic over a positive definite field).
    pub fn row_space_projection(&self) -> Result<QMatrix> {
        self.layout.field.require_positive_definite()?;
        Ok(self.map_blocks(self.cols, self.cols, orthogonal_projection))
    }

    /// The projection onto `im(p) ∩ im(q)`.
    pub fn proj_meet(&self, q: &QMatrix) -> Result<QMatrix> {
        self.check_projection_pair(q)?;
        Ok(self.zip_blocks(q, |p, q| {
            let n = p.rows();
            let id = Matrix::identity(n);
            // v(1-p) = 0 and v(1-q) = 0
            let constraints = id.sub(p).hstack(&id.sub(q));
            orthogonal_projection_of_rows(&constraints.left_kernel(), n)
        }))
    }

    /// The projection onto `im(p) + im(q)`.
    pub fn proj_join(&self, q: &QMatrix) -> Result<QMatrix> {
        self.check_projection_pair(q)?;
        Ok(self.zip_blocks(q, |p, q| orthogonal_projection(&p.vstack(q))))
    }

    fn check_projection_pair(&self, q: &QMatrix) -> Result<()> {
        self.layout.field.require_positive_definite()?;
        self.same_layout(q)?;
        if !self.is_projection() || !q.is_projection() {
            return Err(Error::NotProjection);
        }
        if self.rows != q.rows {
            return Err(Error::ShapeMismatch(
                "projections of different sizes".into(),
            ));
        }
        Ok(())
    }
}

/// `B*(BB*)⁻¹B` for a row basis `B` of the row space of `m`: the orthogonal
/// projection onto that row space. The field must be positive definite.
pub fn orthogonal_projection(m: &Matrix<RatFun>) -> Matrix<RatFun> {
    orthogonal_projection_of_rows(&m.row_basis(), m.cols())
}

fn orthogonal_projection_of_rows(rows: &Matrix<RatFun>, n: usize) -> Matrix<RatFun> {
    let basis = rows.row_basis();
    if basis.rows() == 0 {
        return Matrix::zeros(n, n);
    }
    let adj = basis.adjoint();
    let gram = basis.mul(&adj);
    let inv = gram
        .inverse()
        .expect("Gram matrix of a basis is invertible over a positive definite field");
    adj.mul(&inv).mul(&basis)
}

/// Matrix file format: logical shape header plus one array of entry
/// strings per block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub k: usize,
    pub side: Side,
    pub blocks: Vec<Vec<Vec<String>>>,
}

impl<T: BlockEntry> fmt::Display for BlockMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (b, (m, shape)) in self.blocks.iter().zip(&self.layout.blocks).enumerate() {
            let ring = match (shape.kind, T::SIDE) {
                (BlockKind::Sink, _) => "K",
                (BlockKind::Cycle, Side::R) => "K[x,x^-1]",
                (BlockKind::Cycle, Side::Q) => "K(x)",
            };
            writeln!(
                f,
                "block {b}: M_{}({ring})",
                shape.size * self.rows.max(self.cols)
            )?;
            write!(f, "{m}")?;
        }
        Ok(())
    }
}
