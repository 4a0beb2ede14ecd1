//! Finite directed multigraphs: construction, the line-oriented DSL, cycle
//! and exit analysis, matrix graphs and path enumeration.

mod dsl;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dsl::{parse_graph, parse_graph_json, GraphJson};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: VertexId,
    pub dst: VertexId,
}

/// A finite directed multigraph. Declaration order of vertices and edges is
/// part of the value: the last-declared edge out of a vertex is its
/// designated edge in the Leavitt path algebra rewriting system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

impl Graph {
    /// Builds a graph from vertex names and `(name, src, dst)` edge triples.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, S)]) -> Result<Self> {
        let mut g = GraphBuilder::default();
        for v in vertices {
            g.vertex(v.as_ref())?;
        }
        for (name, src, dst) in edges {
            g.edge(name.as_ref(), src.as_ref(), dst.as_ref())?;
        }
        g.finish()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.edges[e].src
    }

    pub fn dst(&self, e: EdgeId) -> VertexId {
        self.edges[e].dst
    }

    /// Edges leaving `v`, in declaration order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v]
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out_edges[v].is_empty()
    }

    /// The last-declared edge with source `v`, or `None` for sinks.
    pub fn designated_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.out_edges[v].last().copied()
    }

    /// Simple cycles, each rotated to start at its lexicographically least
    /// vertex name, sorted by `(base name, edge names)`.
    pub fn cycles(&self) -> Vec<Cycle> {
        let n = self.num_vertices();
        let mut found = Vec::new();
        // enumerate simple cycles whose minimal vertex id is `start`
        for start in 0..n {
            let mut on_path = vec![false; n];
            let mut stack: Vec<EdgeId> = Vec::new();
            self.cycle_dfs(start, start, &mut on_path, &mut stack, &mut found);
        }
        let mut cycles: Vec<Cycle> = found
            .into_iter()
            .map(|edges| Cycle::canonical(self, edges))
            .collect();
        cycles.sort_by_cached_key(|c| c.sort_key(self));
        cycles
    }

    fn cycle_dfs(
        &self,
        start: VertexId,
        v: VertexId,
        on_path: &mut [bool],
        stack: &mut Vec<EdgeId>,
        found: &mut Vec<Vec<EdgeId>>,
    ) {
        on_path[v] = true;
        for &e in &self.out_edges[v] {
            let w = self.dst(e);
            if w == start {
                let mut cyc = stack.clone();
                cyc.push(e);
                found.push(cyc);
            } else if w > start && !on_path[w] {
                stack.push(e);
                self.cycle_dfs(start, w, on_path, stack, found);
                stack.pop();
            }
        }
        on_path[v] = false;
    }

    /// Edges leaving a vertex of `cycle` other than the cycle's own next edge.
    pub fn exits(&self, cycle: &Cycle) -> Vec<EdgeId> {
        let on_cycle: BTreeSet<EdgeId> = cycle.edges.iter().copied().collect();
        cycle
            .edges
            .iter()
            .flat_map(|&e| self.out_edges(self.src(e)).iter().copied())
            .filter(|e| !on_cycle.contains(e))
            .collect()
    }

    pub fn analyze(&self) -> GraphReport {
        let sinks: Vec<String> = (0..self.num_vertices())
            .filter(|&v| self.is_sink(v))
            .map(|v| self.vertices[v].clone())
            .collect();
        let regular: Vec<String> = (0..self.num_vertices())
            .filter(|&v| !self.is_sink(v))
            .map(|v| self.vertices[v].clone())
            .collect();
        let cycles: Vec<CycleReport> = self
            .cycles()
            .into_iter()
            .map(|c| {
                let exits = self.exits(&c);
                CycleReport {
                    base: self.vertices[c.base].clone(),
                    edges: c
                        .edges
                        .iter()
                        .map(|&e| self.edges[e].name.clone())
                        .collect(),
                    has_exit: !exits.is_empty(),
                    exits: exits.iter().map(|&e| self.edges[e].name.clone()).collect(),
                }
            })
            .collect();
        let no_exit = cycles.iter().all(|c| !c.has_exit);
        GraphReport {
            vertices: self.num_vertices(),
            edges: self.num_edges(),
            sinks,
            regular,
            acyclic: cycles.is_empty(),
            no_exit,
            noetherian: no_exit,
            extending_verdict: no_exit,
            cycles,
        }
    }

    /// First cycle with an exit, if any.
    pub fn exiting_cycle(&self) -> Option<Cycle> {
        self.cycles()
            .into_iter()
            .find(|c| !self.exits(c).is_empty())
    }

    /// The graph `MₙE`: each vertex `v` receives a line `v⁽ⁿ⁻¹⁾ → … → v⁽¹⁾ → v`.
    /// New vertices are named `v_1`, `v_2`, …; the edge leaving `v_k` is
    /// `e_v_k`. Names are disambiguated with trailing primes on collision.
    pub fn matrix_graph(&self, n: usize) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "matrix size must be at least 1".into(),
            ));
        }
        let mut b = GraphBuilder::default();
        for v in &self.vertices {
            b.vertex(v)?;
        }
        for e in &self.edges {
            b.edge(&e.name, &self.vertices[e.src], &self.vertices[e.dst])?;
        }
        let mut taken: BTreeSet<String> = self
            .vertices
            .iter()
            .chain(self.edges.iter().map(|e| &e.name))
            .cloned()
            .collect();
        let mut fresh = |base: String| {
            let mut name = base;
            while taken.contains(&name) {
                name.push('\'');
            }
            taken.insert(name.clone());
            name
        };
        for v in &self.vertices {
            let mut prev = v.clone();
            for k in 1..n {
                let nv = fresh(format!("{v}_{k}"));
                let ne = fresh(format!("e_{v}_{k}"));
                b.vertex(&nv)?;
                b.edge(&ne, &nv, &prev)?;
                prev = nv;
            }
        }
        b.finish()
    }

    /// All paths ending at `v` that use no edge of `forbidden`, including the
    /// trivial path, ordered by length and then lexicographically by edge
    /// names. Fails if a cycle avoiding `forbidden` can reach `v`.
    pub fn paths_into(&self, v: VertexId, forbidden: &BTreeSet<EdgeId>) -> Result<Vec<Path>> {
        // Ancestors of v through allowed edges must be acyclic.
        let mut ancestors = BTreeSet::from([v]);
        let mut queue = VecDeque::from([v]);
        while let Some(w) = queue.pop_front() {
            for &e in &self.in_edges[w] {
                if !forbidden.contains(&e) && ancestors.insert(self.src(e)) {
                    queue.push_back(self.src(e));
                }
            }
        }
        for c in self.cycles() {
            if c.edges
                .iter()
                .all(|e| !forbidden.contains(e) && ancestors.contains(&self.src(*e)))
            {
                return Err(Error::CycleReachable {
                    vertex: self.vertices[v].clone(),
                    cycle: c.display(self),
                });
            }
        }
        let mut out = vec![Path::trivial(v)];
        let mut frontier = vec![Path::trivial(v)];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                for &e in &self.in_edges[p.source(self)] {
                    if forbidden.contains(&e) {
                        continue;
                    }
                    let mut edges = vec![e];
                    edges.extend_from_slice(&p.edges);
                    next.push(Path {
                        start: self.src(e),
                        edges,
                    });
                }
            }
            next.sort_by_cached_key(|p| p.name_key(self));
            out.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(out)
    }

    pub fn to_dsl(&self) -> String {
        let mut s = format!("vertices: {}\n", self.vertices.join(" "));
        for e in &self.edges {
            s.push_str(&format!(
                "edge {}: {} -> {}\n",
                e.name, self.vertices[e.src], self.vertices[e.dst]
            ));
        }
        s
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| dsl::EdgeJson {
                    name: e.name.clone(),
                    src: self.vertices[e.src].clone(),
                    dst: self.vertices[e.dst].clone(),
                })
                .collect(),
        }
    }

    /// Disjoint union; names of `other` must not clash with names of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let mut b = GraphBuilder::default();
        for g in [self, other] {
            for v in &g.vertices {
                b.vertex(v)?;
            }
        }
        for g in [self, other] {
            for e in &g.edges {
                b.edge(&e.name, &g.vertices[e.src], &g.vertices[e.dst])?;
            }
        }
        b.finish()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsl())
    }
}

#[derive(Default)]
pub(crate) struct GraphBuilder {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
}

impl GraphBuilder {
    pub(crate) fn vertex(&mut self, name: &str) -> Result<VertexId> {
        if self.vertex_index.contains_key(name) || self.edge_index.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        let id = self.vertices.len();
        self.vertices.push(name.to_string());
        self.vertex_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub(crate) fn edge(&mut self, name: &str, src: &str, dst: &str) -> Result<EdgeId> {
        if self.vertex_index.contains_key(name) || self.edge_index.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        let lookup = |v: &str| {
            self.vertex_index
                .get(v)
                .copied()
                .ok_or_else(|| Error::DanglingEndpoint {
                    edge: name.to_string(),
                    vertex: v.to_string(),
                })
        };
        let (src, dst) = (lookup(src)?, lookup(dst)?);
        let id = self.edges.len();
        self.edges.push(Edge {
            name: name.to_string(),
            src,
            dst,
        });
        self.edge_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub(crate) fn finish(self) -> Result<Graph> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let n = self.vertices.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (id, e) in self.edges.iter().enumerate() {
            out_edges[e.src].push(id);
            in_edges[e.dst].push(id);
        }
        Ok(Graph {
            vertices: self.vertices,
            edges: self.edges,
            vertex_index: self.vertex_index,
            edge_index: self.edge_index,
            out_edges,
            in_edges,
        })
    }
}

/// A path: either the trivial path at `start`, or a composable edge sequence
/// beginning at `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: VertexId,
    pub edges: Vec<EdgeId>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path {
            start: v,
            edges: Vec::new(),
        }
    }

    /// A path from a non-empty composable edge sequence.
    pub fn from_edges(g: &Graph, edges: Vec<EdgeId>) -> Result<Self> {
        let Some(&first) = edges.first() else {
            return Err(Error::InvalidArgument("empty edge sequence".into()));
        };
        for w in edges.windows(2) {
            if g.dst(w[0]) != g.src(w[1]) {
                return Err(Error::NotComposable(format!(
                    "{} then {}",
                    g.edge(w[0]).name,
                    g.edge(w[1]).name
                )));
            }
        }
        Ok(Path {
            start: g.src(first),
            edges,
        })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_trivial()
    }

    pub fn source(&self, _g: &Graph) -> VertexId {
        self.start
    }

    pub fn range(&self, g: &Graph) -> VertexId {
        self.edges.last().map_or(self.start, |&e| g.dst(e))
    }

    pub fn last_edge(&self) -> Option<EdgeId> {
        self.edges.last().copied()
    }

    /// `self` followed by `other`; assumes `range(self) = source(other)`.
    pub fn concat(&self, other: &Path) -> Path {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Path {
            start: self.start,
            edges,
        }
    }

    /// Drops the last edge.
    pub fn parent(&self) -> Option<Path> {
        let (_, rest) = self.edges.split_last()?;
        Some(Path {
            start: self.start,
            edges: rest.to_vec(),
        })
    }

    /// If `self = prefix · rest`, returns `rest`.
    pub fn strip_prefix(&self, prefix: &Path, g: &Graph) -> Option<Path> {
        if self.start != prefix.start || !self.edges.starts_with(&prefix.edges) {
            return None;
        }
        let rest = self.edges[prefix.edges.len()..].to_vec();
        Some(if rest.is_empty() {
            Path::trivial(self.range(g))
        } else {
            Path {
                start: g.src(rest[0]),
                edges: rest,
            }
        })
    }

    pub fn name_key(&self, g: &Graph) -> (usize, Vec<String>) {
        if self.edges.is_empty() {
            (0, vec![g.vertex_name(self.start).to_string()])
        } else {
            (
                self.edges.len(),
                self.edges.iter().map(|&e| g.edge(e).name.clone()).collect(),
            )
        }
    }

    /// Dotted edge names, or the vertex name for a trivial path.
    pub fn display(&self, g: &Graph) -> String {
        if self.edges.is_empty() {
            g.vertex_name(self.start).to_string()
        } else {
            self.edges
                .iter()
                .map(|&e| g.edge(e).name.as_str())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    pub fn edge_names(&self, g: &Graph) -> Vec<String> {
        self.edges.iter().map(|&e| g.edge(e).name.clone()).collect()
    }
}

/// A simple cycle rotated to start at its base vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub base: VertexId,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    fn canonical(g: &Graph, edges: Vec<EdgeId>) -> Cycle {
        let pos = (0..edges.len())
            .min_by(|&a, &b| {
                g.vertex_name(g.src(edges[a]))
                    .cmp(g.vertex_name(g.src(edges[b])))
            })
            .expect("cycles are non-empty");
        let mut rotated = edges[pos..].to_vec();
        rotated.extend_from_slice(&edges[..pos]);
        Cycle {
            base: g.src(rotated[0]),
            edges: rotated,
        }
    }

    fn sort_key(&self, g: &Graph) -> (String, Vec<String>) {
        (
            g.vertex_name(self.base).to_string(),
            self.edges.iter().map(|&e| g.edge(e).name.clone()).collect(),
        )
    }

    /// The cycle edge leaving the base vertex.
    pub fn base_edge(&self) -> EdgeId {
        self.edges[0]
    }

    pub fn vertices(&self, g: &Graph) -> Vec<VertexId> {
        self.edges.iter().map(|&e| g.src(e)).collect()
    }

    pub fn as_path(&self, g: &Graph) -> Path {
        Path::from_edges(g, self.edges.clone()).expect("cycle edges compose")
    }

    pub fn display(&self, g: &Graph) -> String {
        format!(
            "({}) at {}",
            self.edges
                .iter()
                .map(|&e| g.edge(e).name.as_str())
                .collect::<Vec<_>>()
                .join("."),
            g.vertex_name(self.base)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleReport {
    pub base: String,
    pub edges: Vec<String>,
    pub has_exit: bool,
    pub exits: Vec<String>,
}

/// Structural summary of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphReport {
    pub vertices: usize,
    pub edges: usize,
    pub sinks: Vec<String>,
    pub regular: Vec<String>,
    pub cycles: Vec<CycleReport>,
    pub no_exit: bool,
    /// For finite graphs the algebra is noetherian iff the graph is no-exit.
    pub noetherian: bool,
    /// Over a positive definite field the algebra is extending iff the graph is no-exit.
    pub extending_verdict: bool,
    pub acyclic: bool,
}

/// Count of paths ending at each vertex and avoiding `forbidden`, by
/// dynamic programming over a topological order. Used to cross-check
/// [`Graph::paths_into`].
pub fn count_paths_into(g: &Graph, v: VertexId, forbidden: &BTreeSet<EdgeId>) -> Option<usize> {
    let mut memo: BTreeMap<VertexId, usize> = BTreeMap::new();
    fn go(
        g: &Graph,
        w: VertexId,
        forbidden: &BTreeSet<EdgeId>,
        memo: &mut BTreeMap<VertexId, usize>,
        depth: usize,
    ) -> Option<usize> {
        if depth > g.num_vertices() {
            return None;
        }
        if let Some(&c) = memo.get(&w) {
            return Some(c);
        }
        let mut total = 1;
        for &e in g.in_edges(w) {
            if !forbidden.contains(&e) {
                total += go(g, g.src(e), forbidden, memo, depth + 1)?;
            }
        }
        memo.insert(w, total);
        Some(total)
    }
    go(g, v, forbidden, &mut memo, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn names(g: &Graph, ps: &[Path]) -> Vec<String> {
        ps.iter().map(|p| p.display(g)).collect()
    }

    #[test]
    fn tail_graph_report() {
        let g = parse_graph(corpus::TAIL).unwrap();
        let r = g.analyze();
        assert!(r.sinks.is_empty());
        assert_eq!(r.cycles.len(), 1);
        assert_eq!(r.cycles[0].base, "v");
        assert_eq!(r.cycles[0].edges, vec!["l"]);
        assert!(r.no_exit && r.extending_verdict && !r.acyclic);
    }

    #[test]
    fn rose_has_exits() {
        let g = parse_graph(corpus::ROSE2).unwrap();
        let r = g.analyze();
        assert_eq!(r.vertices, 1);
        assert_eq!(r.cycles.len(), 2);
        assert!(r.cycles.iter().all(|c| c.has_exit));
        assert!(!r.no_exit && !r.extending_verdict);
    }

    #[test]
    fn line_is_acyclic() {
        let g = parse_graph(corpus::LINE).unwrap();
        let r = g.analyze();
        assert_eq!(r.sinks, vec!["v"]);
        assert!(r.cycles.is_empty() && r.acyclic && r.no_exit);
    }

    #[test]
    fn cycle_base_is_least_name() {
        let g =
            parse_graph("vertices: c a b\nedge x: c -> a\nedge y: a -> b\nedge z: b -> c").unwrap();
        let cycles = g.cycles();
        assert_eq!(cycles.len(), 1);
        assert_eq!(g.vertex_name(cycles[0].base), "a");
        assert_eq!(cycles[0].display(&g), "(y.z.x) at a");
    }

    #[test]
    fn parallel_edges_give_distinct_cycles() {
        let g =
            parse_graph("vertices: u v\nedge a: u -> v\nedge b: u -> v\nedge c: v -> u").unwrap();
        assert_eq!(g.cycles().len(), 2);
        assert!(!g.analyze().no_exit);
    }

    #[test]
    fn matrix_graph_examples() {
        let sink = parse_graph(corpus::SINK).unwrap();
        let m = sink.matrix_graph(2).unwrap();
        assert_eq!(m.num_vertices(), 2);
        assert_eq!(m.num_edges(), 1);
        let r = m.analyze();
        assert_eq!(r.sinks, vec!["w"]);
        assert!(r.acyclic);

        let tail = parse_graph(corpus::TAIL).unwrap();
        assert_eq!(tail.matrix_graph(1).unwrap(), tail);
        let m2 = tail.matrix_graph(2).unwrap();
        assert_eq!((m2.num_vertices(), m2.num_edges()), (4, 4));
        assert!(m2.analyze().no_exit);
        assert!(tail.matrix_graph(0).is_err());
    }

    #[test]
    fn paths_into_examples() {
        let line = parse_graph(corpus::LINE).unwrap();
        let v = line.vertex_id("v").unwrap();
        assert_eq!(
            names(&line, &line.paths_into(v, &BTreeSet::new()).unwrap()),
            ["v", "h"]
        );

        let tail = parse_graph(corpus::TAIL).unwrap();
        let v = tail.vertex_id("v").unwrap();
        let l = tail.edge_id("l").unwrap();
        assert_eq!(
            names(&tail, &tail.paths_into(v, &BTreeSet::from([l])).unwrap()),
            ["v", "t"]
        );
        assert!(matches!(
            tail.paths_into(v, &BTreeSet::new()),
            Err(Error::CycleReachable { .. })
        ));

        let cyc = parse_graph(corpus::CYC2).unwrap();
        let u = cyc.vertex_id("u").unwrap();
        let f = cyc.edge_id("f").unwrap();
        assert_eq!(
            names(&cyc, &cyc.paths_into(u, &BTreeSet::from([f])).unwrap()),
            ["u", "g"]
        );
    }

    #[test]
    fn path_helpers() {
        let g = parse_graph(corpus::TAIL).unwrap();
        let t = g.edge_id("t").unwrap();
        let l = g.edge_id("l").unwrap();
        let p = Path::from_edges(&g, vec![t, l, l]).unwrap();
        assert_eq!(p.range(&g), g.vertex_id("v").unwrap());
        let tl = Path::from_edges(&g, vec![t, l]).unwrap();
        assert_eq!(p.strip_prefix(&tl, &g).unwrap().display(&g), "l");
        assert_eq!(p.parent().unwrap(), tl);
        assert_eq!(
            Path::from_edges(&g, vec![t]).unwrap().parent().unwrap(),
            Path::trivial(0)
        );
        assert!(Path::from_edges(&g, vec![l, t]).is_err());
    }
}
