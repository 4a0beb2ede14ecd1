use serde::{Deserialize, Serialize};

use super::{Graph, GraphBuilder};
use crate::error::{Error, Result};

/// JSON form of a graph: `{"vertices": [...], "edges": [{"name", "src", "dst"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub name: String,
    pub src: String,
    pub dst: String,
}

pub(crate) fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Parses the line-oriented graph DSL:
///
/// ```text
/// # comment
/// vertices: u v
/// edge t: u -> v
/// edge l: v -> v
/// ```
///
/// Input starting with `{` is read as the JSON form instead.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        return parse_graph_json(text);
    }
    let mut b = GraphBuilder::default();
    let mut seen_vertices = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let indent = raw.len() - raw.trim_start().len();
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let col = |sub: &str| -> usize {
            // 1-based column of `sub` inside `raw`
            raw.find(sub).map_or(indent + 1, |p| p + 1)
        };
        if let Some(rest) = line.strip_prefix("vertices:") {
            if seen_vertices {
                return Err(Error::parse(line_no, indent + 1, "second `vertices:` line"));
            }
            seen_vertices = true;
            for name in rest.split_whitespace() {
                if !is_name(name) {
                    return Err(Error::parse(
                        line_no,
                        col(name),
                        format!("invalid vertex name `{name}`"),
                    ));
                }
                b.vertex(name)?;
            }
        } else if let Some(rest) = line.strip_prefix("edge ") {
            if !seen_vertices {
                return Err(Error::parse(
                    line_no,
                    indent + 1,
                    "edge before `vertices:` line",
                ));
            }
            let Some((name, ends)) = rest.split_once(':') else {
                return Err(Error::parse(
                    line_no,
                    indent + 6,
                    "expected `edge NAME: SRC -> DST`",
                ));
            };
            let name = name.trim();
            if !is_name(name) {
                return Err(Error::parse(
                    line_no,
                    col(name),
                    format!("invalid edge name `{name}`"),
                ));
            }
            let Some((src, dst)) = ends.split_once("->") else {
                return Err(Error::parse(line_no, col(ends), "expected `SRC -> DST`"));
            };
            let (src, dst) = (src.trim(), dst.trim());
            for end in [src, dst] {
                if !is_name(end) {
                    return Err(Error::parse(
                        line_no,
                        col(ends),
                        format!("invalid endpoint `{end}`"),
                    ));
                }
            }
            b.edge(name, src, dst)?;
        } else {
            return Err(Error::parse(
                line_no,
                indent + 1,
                format!(
                    "unexpected `{}`",
                    line.split_whitespace().next().unwrap_or(line)
                ),
            ));
        }
    }
    if !seen_vertices {
        return Err(Error::parse(1, 1, "missing `vertices:` line"));
    }
    b.finish()
}

pub fn parse_graph_json(text: &str) -> Result<Graph> {
    let json: GraphJson = serde_json::from_str(text)
        .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
    let mut b = GraphBuilder::default();
    for v in &json.vertices {
        if !is_name(v) {
            return Err(Error::InvalidArgument(format!("invalid vertex name `{v}`")));
        }
        b.vertex(v)?;
    }
    for e in &json.edges {
        if !is_name(&e.name) {
            return Err(Error::InvalidArgument(format!(
                "invalid edge name `{}`",
                e.name
            )));
        }
        b.edge(&e.name, &e.src, &e.dst)?;
    }
    b.finish()
}
