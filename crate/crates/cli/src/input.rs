//! Reading graphs, elements and matrices from files and arguments.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use leavitt_core::blocks::{MatrixJson, RMatrix};
use leavitt_core::graph::{parse_graph, parse_graph_json, Graph};
use leavitt_core::lpa::{Lpa, LpaElement};
use leavitt_core::scalars::FieldKind;
use leavitt_core::structure::Structure;
use serde::Deserialize;

use crate::error::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// A graph file in the line DSL, or its JSON form when the text starts with `{`.
pub fn graph(path: &Path) -> Result<Graph, CliError> {
    let text = read(path)?;
    let parsed = if text.trim_start().starts_with('{') {
        parse_graph_json(&text)
    } else {
        parse_graph(&text)
    };
    parsed.map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn algebra(path: &Path, field: FieldKind) -> Result<Arc<Lpa>, CliError> {
    Ok(Lpa::new(graph(path)?, field))
}

pub fn structure(alg: &Arc<Lpa>) -> Result<Structure, CliError> {
    Ok(Structure::new(alg)?)
}

pub fn element(alg: &Arc<Lpa>, text: &str) -> Result<LpaElement, CliError> {
    alg.parse(text)
        .map_err(|e| CliError::Parse(format!("`{text}`: {e}")))
}

/// Matrix files hold either the block form written by `--json` output or a
/// logical matrix of algebra elements.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Blocks(MatrixJson),
    Elements { elements: Vec<Vec<String>> },
}

fn element_rows(alg: &Arc<Lpa>, rows: &[Vec<String>]) -> Result<Vec<Vec<LpaElement>>, CliError> {
    rows.iter()
        .map(|r| r.iter().map(|e| element(alg, e)).collect())
        .collect()
}

/// A matrix argument: the path of a matrix file, or else an inline element
/// read as a 1×1 matrix.
pub fn matrix(s: &Structure, arg: &str) -> Result<RMatrix, CliError> {
    let path = Path::new(arg);
    if !path.is_file() {
        return Ok(s.phi(&element(s.algebra(), arg)?)?);
    }
    let text = read(path)?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    match file {
        MatrixFile::Blocks(json) => {
            RMatrix::from_json(s.layout(), &json).map_err(|e| parse_in(path, e))
        }
        MatrixFile::Elements { elements } => {
            if elements.is_empty() || elements.iter().any(|r| r.len() != elements[0].len()) {
                return Err(CliError::Parse(format!(
                    "{}: ragged or empty element matrix",
                    path.display()
                )));
            }
            Ok(s.phi_matrix(&element_rows(s.algebra(), &elements)?)?)
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PresentationFile {
    Elements {
        n: usize,
        relations: Vec<Vec<String>>,
    },
    Blocks(MatrixJson),
}

/// Relations of a presentation `R^n / K`, one row per relation.
pub fn presentation(s: &Structure, path: &Path) -> Result<RMatrix, CliError> {
    let text = read(path)?;
    let file: PresentationFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    match file {
        PresentationFile::Blocks(json) => {
            RMatrix::from_json(s.layout(), &json).map_err(|e| parse_in(path, e))
        }
        PresentationFile::Elements { n, relations } => {
            let rows = element_rows(s.algebra(), &relations)?;
            Ok(leavitt_core::dimension::ModulePresentation::from_elements(s, n, &rows)?.relations)
        }
    }
}

fn parse_in(path: &Path, e: leavitt_core::Error) -> CliError {
    match e {
        leavitt_core::Error::ShapeMismatch(_) | leavitt_core::Error::InvalidArgument(_) => {
            CliError::Parse(format!("{}: {e}", path.display()))
        }
        other => other.into(),
    }
}
