//! Exact arithmetic in the Leavitt path algebra `L_K(E)`.
//!
//! Elements are stored in normal form: a K-linear combination of monomials
//! `p·q*` with `r(p) = r(q)` such that `p` and `q` do not both end in the
//! designated edge `γ_v` (the last-declared edge out of `v`). Products are
//! reduced by CK1 and the oriented CK2 rule
//! `(p′γ)(q′γ)* → p′q′* − Σ_{e≠γ, s(e)=v} (p′e)(q′e)*`.

mod parse;
pub mod random;
pub mod rewrite;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Path, VertexId};
use crate::scalars::{FieldKind, Ring, Scalar};

/// A graph together with a coefficient field: the algebra `L_K(E)`.
#[derive(Debug, PartialEq)]
pub struct Lpa {
    graph: Graph,
    field: FieldKind,
}

impl Lpa {
    pub fn new(graph: Graph, field: FieldKind) -> Arc<Lpa> {
        Arc::new(Lpa { graph, field })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn zero(self: &Arc<Self>) -> LpaElement {
        LpaElement {
            algebra: Arc::clone(self),
            terms: BTreeMap::new(),
        }
    }

    /// The unit `Σ_v v`.
    pub fn one(self: &Arc<Self>) -> LpaElement {
        let mut out = self.zero();
        for v in 0..self.graph.num_vertices() {
            out.add_term(Monomial::vertex(v), Scalar::one());
        }
        out
    }

    pub fn vertex(self: &Arc<Self>, v: VertexId) -> LpaElement {
        self.monomial(Scalar::one(), Path::trivial(v), Path::trivial(v))
    }

    pub fn edge(self: &Arc<Self>, e: EdgeId) -> LpaElement {
        let g = &self.graph;
        self.monomial(
            Scalar::one(),
            Path {
                start: g.src(e),
                edges: vec![e],
            },
            Path::trivial(g.dst(e)),
        )
    }

    pub fn ghost(self: &Arc<Self>, e: EdgeId) -> LpaElement {
        self.edge(e).involve()
    }

    /// `c·p·q*` in normal form; panics if `r(p) ≠ r(q)`.
    pub fn monomial(self: &Arc<Self>, c: Scalar, p: Path, q: Path) -> LpaElement {
        assert_eq!(
            p.range(&self.graph),
            q.range(&self.graph),
            "monomial ranges differ"
        );
        let mut out = self.zero();
        self.push_reduced(&mut out.terms, Monomial { p, q }, self.field.embed(&c));
        out
    }

    pub fn parse(self: &Arc<Self>, text: &str) -> Result<LpaElement> {
        let raw = self.parse_raw(text)?;
        Ok(self.normal_form(&raw))
    }

    /// Parses an element without reducing it.
    pub fn parse_raw(self: &Arc<Self>, text: &str) -> Result<RawExpr> {
        parse::parse_raw(self, text)
    }

    /// Reduces a raw sum of words to normal form.
    pub fn normal_form(self: &Arc<Self>, raw: &RawExpr) -> LpaElement {
        let mut out = self.zero();
        for (c, word) in &raw.terms {
            let mut acc = self.one().scale(&self.field.embed(c));
            for atom in word {
                let gen = match *atom {
                    Atom::Vertex(v) => self.vertex(v),
                    Atom::Edge(e) => self.edge(e),
                    Atom::Ghost(e) => self.ghost(e),
                };
                acc = acc.mul_unchecked(&gen);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add_unchecked(&acc);
        }
        out
    }

    /// Adds `c·m` to `terms` after CK2 reduction of `m`.
    fn push_reduced(&self, terms: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match (m.p.last_edge(), m.q.last_edge()) {
            (Some(a), Some(b))
                if a == b && self.graph.designated_edge(self.graph.src(a)) == Some(a) =>
            {
                let p = m.p.parent().expect("non-trivial");
                let q = m.q.parent().expect("non-trivial");
                let v = self.graph.src(a);
                for &e in self.graph.out_edges(v) {
                    if e != a {
                        let step = |path: &Path| Path {
                            start: path.start,
                            edges: path.edges.iter().copied().chain([e]).collect(),
                        };
                        insert(
                            terms,
                            Monomial {
                                p: step(&p),
                                q: step(&q),
                            },
                            c.neg(),
                        );
                    }
                }
                self.push_reduced(terms, Monomial { p, q }, c);
            }
            _ => insert(terms, m, c),
        }
    }

    /// The product of two normal-form monomials, before CK2 reduction.
    fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        let g = &self.graph;
        if let Some(rest) = b.p.strip_prefix(&a.q, g) {
            Some(Monomial {
                p: a.p.concat(&rest),
                q: b.q.clone(),
            })
        } else {
            a.q.strip_prefix(&b.p, g).map(|rest| Monomial {
                p: a.p.clone(),
                q: b.q.concat(&rest),
            })
        }
    }
}

fn insert(terms: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        Entry::Vacant(slot) => {
            slot.insert(c);
        }
        Entry::Occupied(mut slot) => {
            let sum = slot.get().add(&c);
            if sum.is_zero() {
                slot.remove();
            } else {
                *slot.get_mut() = sum;
            }
        }
    }
}

/// A generator symbol in a raw word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    Vertex(VertexId),
    Edge(EdgeId),
    Ghost(EdgeId),
}

impl Atom {
    /// The vertex an atom starts at, reading left to right.
    pub fn source(self, g: &Graph) -> VertexId {
        match self {
            Atom::Vertex(v) => v,
            Atom::Edge(e) => g.src(e),
            Atom::Ghost(e) => g.dst(e),
        }
    }

    pub fn range(self, g: &Graph) -> VertexId {
        match self {
            Atom::Vertex(v) => v,
            Atom::Edge(e) => g.dst(e),
            Atom::Ghost(e) => g.src(e),
        }
    }

    pub fn display(self, g: &Graph) -> String {
        match self {
            Atom::Vertex(v) => g.vertex_name(v).to_string(),
            Atom::Edge(e) => g.edge(e).name.clone(),
            Atom::Ghost(e) => format!("{}*", g.edge(e).name),
        }
    }
}

/// An unreduced sum `Σ cᵢ·wᵢ` of words in the generators. The empty word
/// is the unit.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawExpr {
    pub terms: Vec<(Scalar, Vec<Atom>)>,
}

impl RawExpr {
    pub fn display(&self, g: &Graph) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(c, w)| {
                let word = w.iter().map(|a| a.display(g)).collect::<Vec<_>>().join(".");
                format!("({c})*{word}")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `p·q*` with `r(p) = r(q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub p: Path,
    pub q: Path,
}

impl Monomial {
    pub fn vertex(v: VertexId) -> Self {
        Monomial {
            p: Path::trivial(v),
            q: Path::trivial(v),
        }
    }

    fn key(&self) -> (usize, &Path, &Path) {
        (self.p.len() + self.q.len(), &self.p, &self.q)
    }

    pub fn display(&self, g: &Graph) -> String {
        let mut atoms: Vec<String> = self
            .p
            .edges
            .iter()
            .map(|&e| g.edge(e).name.clone())
            .collect();
        atoms.extend(
            self.q
                .edges
                .iter()
                .rev()
                .map(|&e| format!("{}*", g.edge(e).name)),
        );
        if atoms.is_empty() {
            g.vertex_name(self.p.start).to_string()
        } else {
            atoms.join(".")
        }
    }

    pub fn involve(&self) -> Self {
        Monomial {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of `L_K(E)` in normal form.
#[derive(Debug, Clone)]
pub struct LpaElement {
    algebra: Arc<Lpa>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for LpaElement {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.terms == other.terms
    }
}

fn same_algebra(a: &Arc<Lpa>, b: &Arc<Lpa>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl LpaElement {
    pub fn algebra(&self) -> &Arc<Lpa> {
        &self.algebra
    }

    pub fn graph(&self) -> &Graph {
        &self.algebra.graph
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        insert(&mut self.terms, m, c);
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::MixedGraphs)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let alg = &self.algebra;
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(m) = alg.mul_monomials(a, b) {
                    alg.push_reduced(&mut terms, m, ca.mul(cb));
                }
            }
        }
        LpaElement {
            algebra: Arc::clone(alg),
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::one().neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let c = self.algebra.field.embed(c);
        let terms = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul(&c)))
                .collect()
        };
        LpaElement {
            algebra: Arc::clone(&self.algebra),
            terms,
        }
    }

    /// `Σ k·p·q* ↦ Σ k̄·q·p*`.
    pub fn involve(&self) -> Self {
        LpaElement {
            algebra: Arc::clone(&self.algebra),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.involve(), k.involve()))
                .collect(),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul_unchecked(self) == *self
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.involve() == *self
    }

    pub fn is_projection(&self) -> bool {
        self.is_self_adjoint() && self.is_idempotent()
    }

    /// The element as a raw expression (one word per monomial).
    pub fn to_raw(&self) -> RawExpr {
        RawExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut word: Vec<Atom> = m.p.edges.iter().map(|&e| Atom::Edge(e)).collect();
                    word.extend(m.q.edges.iter().rev().map(|&e| Atom::Ghost(e)));
                    if word.is_empty() {
                        word.push(Atom::Vertex(m.p.start));
                    }
                    (c.clone(), word)
                })
                .collect(),
        }
    }
}

impl fmt::Display for LpaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let g = &self.algebra.graph;
        let mut sorted: Vec<_> = self.terms.iter().collect();
        sorted
            .sort_by_cached_key(|(m, _)| (m.p.len() + m.q.len(), m.p.name_key(g), m.q.name_key(g)));
        for (i, (m, c)) in sorted.into_iter().enumerate() {
            let text = c.to_string();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, text),
            };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mono = m.display(g);
            if body == "1" {
                f.write_str(&mono)?;
            } else if body.contains(['+', '-', 'i']) {
                write!(f, "({body})*{mono}")?;
            } else {
                write!(f, "{body}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
