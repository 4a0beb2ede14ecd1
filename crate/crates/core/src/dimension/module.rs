use num_bigint::BigInt;
use num_rational::BigRational;

use super::{d, DimVector};
use crate::blocks::{snf, BlockEntry, RMatrix};
use crate::error::{Error, Result};
use crate::lpa::LpaElement;
use crate::scalars::Laurent;
use crate::structure::Structure;

/// The module `R^n / K` where `K` is the row space of a `k×n` relation
/// matrix over `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulePresentation {
    pub relations: RMatrix,
}

impl ModulePresentation {
    pub fn new(relations: RMatrix) -> Self {
        ModulePresentation { relations }
    }

    /// Relations given as rows of algebra elements; `n` is needed when there
    /// are no rows.
    pub fn from_elements(s: &Structure, n: usize, rows: &[Vec<LpaElement>]) -> Result<Self> {
        if rows.is_empty() {
            return Ok(Self::new(RMatrix::zeros(s.layout(), 0, n)));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!(
                "every relation needs {n} entries"
            )));
        }
        Ok(Self::new(s.phi_matrix(rows)?))
    }

    /// Rank `n` of the ambient free module.
    pub fn n(&self) -> usize {
        self.relations.cols()
    }

    /// The idempotent onto `cl(K)`, the smallest direct summand containing `K`.
    pub fn closure(&self) -> RMatrix {
        self.relations.saturate()
    }
}

fn require(p: &ModulePresentation) -> Result<()> {
    p.relations.layout().field.require_positive_definite()
}

/// `dim(M) = d(1_n) − d(cl(K))`.
pub fn dim_module(p: &ModulePresentation) -> Result<DimVector> {
    require(p)?;
    let layout = p.relations.layout();
    Ok(DimVector::free(layout, p.n()).sub(&d(&p.closure())?))
}

/// The same dimension computed after passing to the fraction-field blocks.
pub fn dim_over_q(p: &ModulePresentation) -> Result<DimVector> {
    require(p)?;
    let closure = p.relations.to_q().saturate();
    Ok(DimVector::free(p.relations.layout(), p.n()).sub(&d(&closure)?))
}

/// The bounded (torsion) part `cl(K)/K` on one block.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionBlock {
    /// Non-unit invariant factors of the relations: `cl(K)/K ≅ ⊕ Λ/(dᵢ)`.
    pub factors: Vec<Laurent>,
    /// Rank of `cl(K)`, the number of generators of the torsion part.
    pub generators: usize,
    /// Dimension of the torsion part, computed from its own presentation.
    pub dim: BigRational,
}

/// `M = bnd M ⊕ unb M` with `unb M ≅ (1−q)·R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Splitting {
    pub closure: RMatrix,
    pub projective: RMatrix,
    pub torsion: Vec<TorsionBlock>,
}

impl Splitting {
    pub fn torsion_dim(&self) -> DimVector {
        DimVector {
            shapes: self.closure.layout().blocks.clone(),
            values: self.torsion.iter().map(|t| t.dim.clone()).collect(),
        }
    }

    pub fn is_torsion_trivial(&self) -> bool {
        self.torsion.iter().all(|t| t.factors.is_empty())
    }
}

pub fn split_bnd(p: &ModulePresentation) -> Result<Splitting> {
    require(p)?;
    let layout = p.relations.layout().clone();
    let n = p.n();
    let closure = p.closure();
    let projective = RMatrix::identity(&layout, n).sub(&closure)?;
    let mut torsion = Vec::new();
    for (a, shape) in p.relations.blocks().iter().zip(&layout.blocks) {
        let (basis, right) = Laurent::summand_basis(a);
        // relations in the coordinates of the closure: a = z·basis
        let z = a.mul(&right);
        debug_assert!(z.mul(&basis) == *a);
        let generators = basis.rows();
        let z_rank = if z.rows() == 0 { 0 } else { snf(&z).rank };
        let factors = if a.rows() == 0 {
            Vec::new()
        } else {
            snf(a)
                .invariant_factors()
                .into_iter()
                .filter(|f| !f.is_unit())
                .collect()
        };
        torsion.push(TorsionBlock {
            factors,
            generators,
            dim: BigRational::new(BigInt::from(generators - z_rank), BigInt::from(shape.size)),
        });
    }
    Ok(Splitting {
        closure,
        projective,
        torsion,
    })
}
