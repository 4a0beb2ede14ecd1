//! Block decomposition of `L_K(E)` for finite no-exit graphs,
//! `L_K(E) ≅ ⊕_{sinks} M_n(K) ⊕ ⊕_{cycles} M_m(K[x,x⁻¹])`, with the explicit
//! isomorphism `φ` and its inverse.
//!
//! A sink block at `w` is indexed by all paths ending at `w`; a cycle block
//! with base `w` and base edge `γ` by the paths ending at `w` that avoid `γ`.
//! On generators, `φ(e)` sends coordinate `q` to `e·q`, except that the base
//! edge sends the rest of the cycle to `w` with a factor `x`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::blocks::{BlockKind, BlockShape, Layout, Matrix, QMatrix, RMatrix};
use crate::error::{Error, Result};
use crate::graph::{Cycle, EdgeId, Graph, Path, VertexId};
use crate::lpa::{Lpa, LpaElement, Monomial};
use crate::scalars::{Laurent, Ring, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Anchor {
    Sink(VertexId),
    Cycle(Cycle),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub anchor: Anchor,
    /// Paths indexing rows and columns, in `paths_into` order.
    pub coords: Vec<Path>,
}

impl Block {
    pub fn size(&self) -> usize {
        self.coords.len()
    }

    /// The vertex every coordinate path ends at.
    pub fn base(&self) -> VertexId {
        match &self.anchor {
            Anchor::Sink(w) => *w,
            Anchor::Cycle(c) => c.base,
        }
    }

    /// `M_n(K)` or `M_n(K[x,x^-1])`.
    pub fn ring_name(&self) -> String {
        match self.kind {
            BlockKind::Sink => format!("M_{}(K)", self.size()),
            BlockKind::Cycle => format!("M_{}(K[x,x^-1])", self.size()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec {
    pub blocks: Vec<Block>,
}

/// Computes the block list: sinks by name, then cycles by base vertex name.
pub fn decompose(g: &Graph) -> Result<BlockSpec> {
    if let Some(c) = g.exiting_cycle() {
        return Err(Error::NotNoExit(c.display(g)));
    }
    let mut sinks: Vec<VertexId> = (0..g.num_vertices()).filter(|&v| g.is_sink(v)).collect();
    sinks.sort_by(|&a, &b| g.vertex_name(a).cmp(g.vertex_name(b)));
    let mut blocks = Vec::new();
    for w in sinks {
        blocks.push(Block {
            kind: BlockKind::Sink,
            anchor: Anchor::Sink(w),
            coords: g.paths_into(w, &BTreeSet::new())?,
        });
    }
    for c in g.cycles() {
        let forbidden = BTreeSet::from([c.base_edge()]);
        blocks.push(Block {
            kind: BlockKind::Cycle,
            coords: g.paths_into(c.base, &forbidden)?,
            anchor: Anchor::Cycle(c),
        });
    }
    Ok(BlockSpec { blocks })
}

/// A column-injective matrix with entries `x^k`: column `j` maps to
/// `(row, k)`. All generator images have this shape.
type PartialMap = Vec<Option<(usize, i64)>>;

fn compose(a: &PartialMap, b: &PartialMap) -> PartialMap {
    b.iter()
        .map(|img| img.and_then(|(m, k1)| a[m].map(|(i, k2)| (i, k1 + k2))))
        .collect()
}

/// The decomposition of one algebra, with per-block generator images.
#[derive(Debug, Clone)]
pub struct Structure {
    algebra: Arc<Lpa>,
    spec: BlockSpec,
    layout: Layout,
    vertex_maps: Vec<Vec<PartialMap>>,
    edge_maps: Vec<Vec<PartialMap>>,
}

impl Structure {
    pub fn new(algebra: &Arc<Lpa>) -> Result<Self> {
        let g = algebra.graph();
        let spec = decompose(g)?;
        let layout = Layout::new(
            algebra.field(),
            spec.blocks
                .iter()
                .map(|b| BlockShape {
                    kind: b.kind,
                    size: b.size(),
                })
                .collect(),
        );
        let mut vertex_maps = vec![Vec::new(); g.num_vertices()];
        let mut edge_maps = vec![Vec::new(); g.num_edges()];
        for block in &spec.blocks {
            let index: HashMap<&Path, usize> = block
                .coords
                .iter()
                .enumerate()
                .map(|(i, p)| (p, i))
                .collect();
            let n = block.size();
            for (v, maps) in vertex_maps.iter_mut().enumerate() {
                maps.push(
                    block
                        .coords
                        .iter()
                        .enumerate()
                        .map(|(j, q)| (q.start == v).then_some((j, 0)))
                        .collect(),
                );
            }
            for (e, maps) in edge_maps.iter_mut().enumerate() {
                let mut m: PartialMap = vec![None; n];
                if let Anchor::Cycle(c) = &block.anchor {
                    if c.base_edge() == e {
                        // γ·c′ = c ↦ x at the base coordinate
                        let rest = if c.edges.len() == 1 {
                            Path::trivial(c.base)
                        } else {
                            Path::from_edges(g, c.edges[1..].to_vec())?
                        };
                        m[index[&rest]] = Some((index[&Path::trivial(c.base)], 1));
                        maps.push(m);
                        continue;
                    }
                }
                for (j, q) in block.coords.iter().enumerate() {
                    if q.start == g.dst(e) {
                        let eq = Path {
                            start: g.src(e),
                            edges: std::iter::once(e).chain(q.edges.iter().copied()).collect(),
                        };
                        let i = *index.get(&eq).ok_or_else(|| {
                            Error::InvalidArgument(format!(
                                "{} is not a coordinate path",
                                eq.display(g)
                            ))
                        })?;
                        m[j] = Some((i, 0));
                    }
                }
                maps.push(m);
            }
        }
        Ok(Structure {
            algebra: Arc::clone(algebra),
            spec,
            layout,
            vertex_maps,
            edge_maps,
        })
    }

    pub fn algebra(&self) -> &Arc<Lpa> {
        &self.algebra
    }

    pub fn spec(&self) -> &BlockSpec {
        &self.spec
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    fn path_map(&self, b: usize, p: &Path) -> PartialMap {
        let mut acc = self.vertex_maps[p.start][b].clone();
        for &e in &p.edges {
            // acc = acc · φ(e)
            acc = compose(&acc, &self.edge_maps[e][b]);
        }
        acc
    }

    fn add_monomial(&self, blocks: &mut [Matrix<Laurent>], m: &Monomial, c: &Scalar) {
        for (b, out) in blocks.iter_mut().enumerate() {
            let fp = self.path_map(b, &m.p);
            let fq = self.path_map(b, &m.q);
            // φ(p)·φ(q)*: a shared column m contributes at (row of p, row of q)
            for (img_p, img_q) in fp.iter().zip(&fq) {
                if let (Some((i, kp)), Some((t, kq))) = (*img_p, *img_q) {
                    let val = out.get(i, t).add(&Laurent::monomial(c.clone(), kp - kq));
                    out.set(i, t, val);
                }
            }
        }
    }

    /// `φ(a)` as a `1×1` R-side block matrix.
    pub fn phi(&self, a: &LpaElement) -> Result<RMatrix> {
        self.check(a)?;
        let mut blocks: Vec<Matrix<Laurent>> = self
            .spec
            .blocks
            .iter()
            .map(|b| Matrix::zeros(b.size(), b.size()))
            .collect();
        for (m, c) in a.terms() {
            self.add_monomial(&mut blocks, m, c);
        }
        RMatrix::from_blocks(&self.layout, 1, 1, blocks)
    }

    /// Applies `φ` entrywise to a matrix over `L_K(E)`.
    pub fn phi_matrix(&self, entries: &[Vec<LpaElement>]) -> Result<RMatrix> {
        let images = entries
            .iter()
            .map(|row| row.iter().map(|a| self.phi(a)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if images.is_empty() {
            return Err(Error::ShapeMismatch("empty matrix".into()));
        }
        RMatrix::from_entries(&self.layout, &images)
    }

    fn check(&self, a: &LpaElement) -> Result<()> {
        if Arc::ptr_eq(a.algebra(), &self.algebra) || **a.algebra() == *self.algebra {
            Ok(())
        } else {
            Err(Error::MixedGraphs)
        }
    }

    /// The preimage of a `1×1` R-side matrix.
    pub fn phi_inv(&self, m: &RMatrix) -> Result<LpaElement> {
        let entries = self.phi_inv_matrix(m)?;
        match <[Vec<LpaElement>; 1]>::try_from(entries) {
            Ok([row]) if row.len() == 1 => Ok(row.into_iter().next().expect("one entry")),
            _ => Err(Error::ShapeMismatch(format!(
                "expected a 1×1 matrix, got {}×{}",
                m.rows(),
                m.cols()
            ))),
        }
    }

    /// The preimage of a Q-side matrix; fails unless every entry lies in
    /// K[x, x⁻¹].
    pub fn phi_inv_q(&self, m: &QMatrix) -> Result<LpaElement> {
        self.phi_inv(&m.to_r()?)
    }

    /// Entrywise preimage of an `n×k` R-side matrix.
    pub fn phi_inv_matrix(&self, m: &RMatrix) -> Result<Vec<Vec<LpaElement>>> {
        if *m.layout() != self.layout {
            return Err(Error::ShapeMismatch(
                "matrix does not match the block decomposition".into(),
            ));
        }
        let alg = &self.algebra;
        let g = alg.graph();
        let mut out = vec![vec![alg.zero(); m.cols()]; m.rows()];
        for (b, block) in self.spec.blocks.iter().enumerate() {
            let cycle = match &block.anchor {
                Anchor::Cycle(c) => Some(c.as_path(g)),
                Anchor::Sink(_) => None,
            };
            let power = |q: &Path, k: usize| {
                if k == 0 {
                    return q.clone();
                }
                let c = cycle.as_ref().expect("powers only occur on cycle blocks");
                (0..k).fold(q.clone(), |acc, _| acc.concat(c))
            };
            for (r, row) in out.iter_mut().enumerate() {
                for (col, slot) in row.iter_mut().enumerate() {
                    let entry = m.logical_entry(b, r, col);
                    for i in 0..block.size() {
                        for j in 0..block.size() {
                            for (k, c) in entry.get(i, j).terms() {
                                let (qi, qj) = (&block.coords[i], &block.coords[j]);
                                let (p, q) = if k >= 0 {
                                    (power(qi, k as usize), qj.clone())
                                } else {
                                    (qi.clone(), power(qj, k.unsigned_abs() as usize))
                                };
                                *slot = slot.add(&alg.monomial(c.clone(), p, q))?;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> BlockSpecJson {
        let g = self.algebra.graph();
        BlockSpecJson {
            blocks: self
                .spec
                .blocks
                .iter()
                .map(|b| BlockJson {
                    kind: b.kind,
                    size: b.size(),
                    ring: b.ring_name(),
                    anchor: match &b.anchor {
                        Anchor::Sink(w) => AnchorJson {
                            vertex: g.vertex_name(*w).to_string(),
                            cycle: None,
                            gamma: None,
                        },
                        Anchor::Cycle(c) => AnchorJson {
                            vertex: g.vertex_name(c.base).to_string(),
                            cycle: Some(c.edges.iter().map(|&e| g.edge(e).name.clone()).collect()),
                            gamma: Some(g.edge(c.base_edge()).name.clone()),
                        },
                    },
                    coordinates: b.coords.iter().map(|p| p.edge_names(g)).collect(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.algebra.graph();
        for (i, b) in self.spec.blocks.iter().enumerate() {
            let anchor = match &b.anchor {
                Anchor::Sink(w) => format!("sink {}", g.vertex_name(*w)),
                Anchor::Cycle(c) => format!("cycle {}", c.display(g)),
            };
            let coords: Vec<String> = b.coords.iter().map(|p| p.display(g)).collect();
            writeln!(
                f,
                "block {i}: {} ({anchor}), coordinates {}",
                b.ring_name(),
                coords.join(", ")
            )?;
        }
        Ok(())
    }
}

/// Serialized [`BlockSpec`]: coordinate paths as edge-name lists (the empty
/// list is the trivial path at the anchor vertex).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSpecJson {
    pub blocks: Vec<BlockJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockJson {
    pub kind: BlockKind,
    pub size: usize,
    pub ring: String,
    pub anchor: AnchorJson,
    pub coordinates: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorJson {
    pub vertex: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
}

/// Images of the generators, for relation checks.
pub fn generator_images(s: &Structure) -> Result<(Vec<RMatrix>, Vec<RMatrix>)> {
    let alg = s.algebra();
    let g = alg.graph();
    let vertices = (0..g.num_vertices())
        .map(|v| s.phi(&alg.vertex(v)))
        .collect::<Result<_>>()?;
    let edges = (0..g.num_edges() as EdgeId)
        .map(|e| s.phi(&alg.edge(e)))
        .collect::<Result<_>>()?;
    Ok((vertices, edges))
}

/// Checks `φ(e)*φ(f) = δ_{e,f} φ(r(e))`, `φ(v) = Σ_{s(e)=v} φ(e)φ(e)*` for
/// regular `v`, orthogonality of vertex images and `Σ φ(v) = 1`. Returns
/// the first failing relation.
pub fn check_relations(s: &Structure) -> Result<Option<String>> {
    let g = s.algebra().graph();
    let (vs, es) = generator_images(s)?;
    let layout = s.layout();
    for (i, pi) in vs.iter().enumerate() {
        for (j, pj) in vs.iter().enumerate() {
            let prod = pi.mul(pj)?;
            let expect = if i == j {
                pi.clone()
            } else {
                RMatrix::zeros(layout, 1, 1)
            };
            if prod != expect {
                return Ok(Some(format!("{}·{}", g.vertex_name(i), g.vertex_name(j))));
            }
        }
    }
    let total = vs
        .iter()
        .try_fold(RMatrix::zeros(layout, 1, 1), |acc, v| acc.add(v))?;
    if !total.is_identity() {
        return Ok(Some("sum of vertices is not 1".into()));
    }
    for (e, fe) in es.iter().enumerate() {
        if vs[g.src(e)].mul(fe)?.mul(&vs[g.dst(e)])? != *fe {
            return Ok(Some(format!("s({0})·{0}·r({0})", g.edge(e).name)));
        }
        for (f, ff) in es.iter().enumerate() {
            let lhs = fe.adjoint().mul(ff)?;
            let rhs = if e == f {
                vs[g.dst(e)].clone()
            } else {
                RMatrix::zeros(layout, 1, 1)
            };
            if lhs != rhs {
                return Ok(Some(format!(
                    "CK1 for {}*·{}",
                    g.edge(e).name,
                    g.edge(f).name
                )));
            }
        }
    }
    for (v, image) in vs.iter().enumerate() {
        if g.is_sink(v) {
            continue;
        }
        let sum = g
            .out_edges(v)
            .iter()
            .try_fold(RMatrix::zeros(layout, 1, 1), |acc, &e| {
                acc.add(&es[e].mul(&es[e].adjoint())?)
            })?;
        if sum != *image {
            return Ok(Some(format!("CK2 at {}", g.vertex_name(v))));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::corpus;
    use crate::graph::parse_graph;
    use crate::lpa::random::random_element;
    use crate::scalars::FieldKind;

    fn structure(text: &str) -> Structure {
        Structure::new(&Lpa::new(parse_graph(text).unwrap(), FieldKind::Rational)).unwrap()
    }

    fn l(s: &str) -> Laurent {
        Laurent::parse(s, FieldKind::Rational).unwrap()
    }

    fn single(s: &Structure, rows: Vec<Vec<&str>>) -> RMatrix {
        let m = Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(l).collect())
                .collect(),
        );
        RMatrix::from_blocks(s.layout(), 1, 1, vec![m]).unwrap()
    }

    #[test]
    fn example_graphs_are_two_by_two_laurent() {
        for text in [corpus::TAIL, corpus::CYC2] {
            let s = structure(text);
            assert_eq!(s.spec().blocks.len(), 1);
            assert_eq!(s.spec().blocks[0].ring_name(), "M_2(K[x,x^-1])");
            assert_eq!(check_relations(&s).unwrap(), None);
        }
        let s = structure(corpus::TAIL);
        let coords: Vec<String> = s.spec().blocks[0]
            .coords
            .iter()
            .map(|p| p.display(s.algebra().graph()))
            .collect();
        assert_eq!(coords, ["v", "t"]);
    }

    #[test]
    fn tail_generator_images() {
        let s = structure(corpus::TAIL);
        let a = s.algebra().clone();
        assert_eq!(
            s.phi(&a.parse("l").unwrap()).unwrap(),
            single(&s, vec![vec!["x", "0"], vec!["0", "0"]])
        );
        assert_eq!(
            s.phi(&a.parse("t").unwrap()).unwrap(),
            single(&s, vec![vec!["0", "0"], vec!["1", "0"]])
        );
        assert!(s.phi(&a.one()).unwrap().is_identity());
        assert_eq!(
            s.phi_inv(&single(&s, vec![vec!["1", "0"], vec!["0", "0"]]))
                .unwrap(),
            a.parse("v").unwrap()
        );
        assert_eq!(
            s.phi_inv(&single(&s, vec![vec!["x^-1", "0"], vec!["0", "0"]]))
                .unwrap(),
            a.parse("l*").unwrap()
        );
        assert_eq!(
            s.phi_inv(&RMatrix::identity(s.layout(), 1)).unwrap(),
            a.parse("u + v").unwrap()
        );
    }

    #[test]
    fn sink_blocks() {
        let s = structure(corpus::SINK);
        assert_eq!(s.spec().blocks[0].ring_name(), "M_1(K)");
        let s = structure(corpus::LINE);
        assert_eq!(s.spec().blocks[0].ring_name(), "M_2(K)");
        let s = structure(corpus::CYC3_TAIL);
        assert_eq!(s.spec().blocks[0].ring_name(), "M_4(K[x,x^-1])");
    }

    #[test]
    fn exits_are_rejected() {
        let a = Lpa::new(parse_graph(corpus::ROSE2).unwrap(), FieldKind::Rational);
        assert!(matches!(Structure::new(&a), Err(Error::NotNoExit(_))));
    }

    #[test]
    fn relations_and_round_trips_on_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (name, text) in corpus::no_exit() {
            let s = structure(text);
            assert_eq!(check_relations(&s).unwrap(), None, "{name}");
            for _ in 0..100 {
                let a = random_element(s.algebra(), 3, 5, &mut rng);
                let b = random_element(s.algebra(), 3, 5, &mut rng);
                let (pa, pb) = (s.phi(&a).unwrap(), s.phi(&b).unwrap());
                assert_eq!(s.phi_inv(&pa).unwrap(), a, "{name}");
                assert_eq!(
                    s.phi(&a.mul(&b).unwrap()).unwrap(),
                    pa.mul(&pb).unwrap(),
                    "{name}"
                );
                assert_eq!(s.phi(&a.involve()).unwrap(), pa.adjoint(), "{name}");
            }
        }
    }

    #[test]
    fn non_laurent_entries_have_no_preimage() {
        let s = structure(corpus::LOOP);
        let q = QMatrix::from_json(
            s.layout(),
            &crate::blocks::MatrixJson {
                n: 1,
                k: 1,
                side: crate::blocks::Side::Q,
                blocks: vec![vec![vec!["(1)/(1+x)".into()]]],
            },
        )
        .unwrap();
        assert!(matches!(s.phi_inv_q(&q), Err(Error::NotLaurent(_))));
    }
}
