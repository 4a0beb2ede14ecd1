//! Normal forms by word rewriting, independent of the monomial product.
//!
//! Rules on adjacent atoms `a·b`: non-composable pairs vanish, vertices are
//! absorbed, `e*·f → δ_{e,f}·r(e)` and `γ·γ* → s(γ) − Σ_{e≠γ} e·e*` for the
//! designated edge `γ`. Every rule lowers `length + #designated atoms`, so a
//! word of length `L` is fully reduced along any branch within `2L` steps.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{insert, Atom, Lpa, LpaElement, Monomial, RawExpr};
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::scalars::{Ring, Scalar};

/// Which redex is rewritten first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

enum Rewrite {
    Zero,
    Replace(Vec<(Scalar, Vec<Atom>)>),
}

fn rewrite_pair(g: &Graph, a: Atom, b: Atom) -> Option<Rewrite> {
    if a.range(g) != b.source(g) {
        return Some(Rewrite::Zero);
    }
    match (a, b) {
        (Atom::Vertex(_), _) => Some(Rewrite::Replace(vec![(Scalar::one(), vec![b])])),
        (_, Atom::Vertex(_)) => Some(Rewrite::Replace(vec![(Scalar::one(), vec![a])])),
        (Atom::Ghost(e), Atom::Edge(f)) => Some(if e == f {
            Rewrite::Replace(vec![(Scalar::one(), vec![Atom::Vertex(g.dst(e))])])
        } else {
            Rewrite::Zero
        }),
        (Atom::Edge(e), Atom::Ghost(f)) if e == f && g.designated_edge(g.src(e)) == Some(e) => {
            let v = g.src(e);
            let mut out = vec![(Scalar::one(), vec![Atom::Vertex(v)])];
            for &other in g.out_edges(v) {
                if other != e {
                    out.push((
                        Scalar::one().neg(),
                        vec![Atom::Edge(other), Atom::Ghost(other)],
                    ));
                }
            }
            Some(Rewrite::Replace(out))
        }
        _ => None,
    }
}

fn find_redex(g: &Graph, word: &[Atom], strategy: Strategy) -> Option<(usize, Rewrite)> {
    let n = word.len();
    let mut positions: Box<dyn Iterator<Item = usize>> = match strategy {
        Strategy::Leftmost => Box::new(0..n.saturating_sub(1)),
        Strategy::Rightmost => Box::new((0..n.saturating_sub(1)).rev()),
    };
    positions.find_map(|i| rewrite_pair(g, word[i], word[i + 1]).map(|r| (i, r)))
}

/// An irreducible word `e₁…e_k f_l*…f₁*` as the monomial `p·q*`.
fn to_monomial(g: &Graph, word: &[Atom]) -> Monomial {
    let p: Vec<_> = word
        .iter()
        .filter_map(|a| match a {
            Atom::Edge(e) => Some(*e),
            _ => None,
        })
        .collect();
    let mut q: Vec<_> = word
        .iter()
        .filter_map(|a| match a {
            Atom::Ghost(e) => Some(*e),
            _ => None,
        })
        .collect();
    q.reverse();
    let start = word[0].source(g);
    let end = word[word.len() - 1].range(g);
    let path = |edges: Vec<_>, at| {
        if edges.is_empty() {
            Path::trivial(at)
        } else {
            Path::from_edges(g, edges).expect("irreducible words compose")
        }
    };
    Monomial {
        p: path(p, start),
        q: path(q, end),
    }
}

/// Outcome of a rewriting run.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub element: LpaElement,
    /// Total number of rule applications.
    pub steps: usize,
    /// Longest chain of rule applications from an input word.
    pub max_depth: usize,
}

/// Reduces `raw` by repeated rewriting under `strategy`. Fails if some branch
/// exceeds the `2L` step bound, which would mean the rules do not terminate
/// as claimed.
pub fn reduce(alg: &Arc<Lpa>, raw: &RawExpr, strategy: Strategy) -> Result<Reduction> {
    let g = alg.graph();
    let mut terms = BTreeMap::new();
    let mut steps = 0;
    let mut max_depth = 0;
    for (c, word) in &raw.terms {
        let c = alg.field().embed(c);
        let mut stack: Vec<(Scalar, Vec<Atom>, usize)> = if word.is_empty() {
            (0..g.num_vertices())
                .map(|v| (c.clone(), vec![Atom::Vertex(v)], 0))
                .collect()
        } else {
            vec![(c, word.clone(), 0)]
        };
        let bound = 2 * word.len().max(1);
        while let Some((c, w, depth)) = stack.pop() {
            max_depth = max_depth.max(depth);
            let Some((i, rule)) = find_redex(g, &w, strategy) else {
                insert(&mut terms, to_monomial(g, &w), c);
                continue;
            };
            steps += 1;
            if depth + 1 > bound {
                return Err(Error::InvalidArgument(format!(
                    "rewriting exceeded the step bound {bound} on a word of length {}",
                    word.len()
                )));
            }
            if let Rewrite::Replace(parts) = rule {
                for (k, middle) in parts {
                    let mut next = w[..i].to_vec();
                    next.extend(middle);
                    next.extend_from_slice(&w[i + 2..]);
                    stack.push((c.mul(&k), next, depth + 1));
                }
            }
        }
    }
    let mut element = alg.zero();
    element.terms = terms;
    Ok(Reduction {
        element,
        steps,
        max_depth,
    })
}
