//! The idempotent `e = [[1, 1+x], [0, 0]]` of `M₂(K[x,x⁻¹])`, realized as
//! `L_ℚ(E)` for the tail graph `u → v ⟲`: `eR` is strictly larger than
//! `ee*R`, so the Rickart ring `R` is not a Rickart `*`-ring.

use std::fmt;

use serde::Serialize;

use crate::blocks::{Matrix, RMatrix};
use crate::corpus;
use crate::dimension::{d, DimVector};
use crate::error::Result;
use crate::graph::parse_graph;
use crate::lpa::Lpa;
use crate::scalars::{FieldKind, Laurent, Ring};
use crate::structure::Structure;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NotRickartStar,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NotRickartStar => f.write_str("not Rickart *"),
            Verdict::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RickartReport {
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    pub e: RMatrix,
    /// `φ⁻¹(e)` in the path algebra.
    pub element: String,
    pub dim: DimVector,
}

impl RickartReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn l(s: &str) -> Laurent {
    Laurent::parse(s, FieldKind::Rational).expect("valid literal")
}

fn check(checks: &mut Vec<Check>, name: &str, passed: bool, detail: String) -> bool {
    checks.push(Check {
        name: name.to_string(),
        passed,
        detail,
    });
    passed
}

/// `diag(a, b)` if the matrix is diagonal.
fn diag_string(m: &Matrix<Laurent>) -> Option<String> {
    let off = (0..m.rows()).any(|i| (0..m.cols()).any(|j| i != j && !m.get(i, j).is_zero()));
    if off || m.rows() != m.cols() {
        return None;
    }
    let entries: Vec<String> = (0..m.rows()).map(|i| m.get(i, i).to_string()).collect();
    Some(format!("diag({})", entries.join(", ")))
}

pub fn rickart_example() -> Result<RickartReport> {
    let alg = Lpa::new(parse_graph(corpus::TAIL)?, FieldKind::Rational);
    let s = Structure::new(&alg)?;
    let layout = s.layout().clone();
    let single = |rows: Vec<Vec<&str>>| {
        let m = Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(l).collect())
                .collect(),
        );
        RMatrix::from_blocks(&layout, 1, 1, vec![m])
    };
    let e = single(vec![vec!["1", "1+x"], vec!["0", "0"]])?;
    let e11 = single(vec![vec!["1", "0"], vec!["0", "0"]])?;
    let f = l("3+x+x^-1");
    let mut checks = Vec::new();

    let ok1 = check(
        &mut checks,
        "e is idempotent",
        e.is_idempotent(),
        "e·e = e".into(),
    );
    let ok2 = check(
        &mut checks,
        "e is not a projection",
        e.adjoint() != e,
        format!("e* has (2,1) entry {}", e.adjoint().block(0).get(1, 0)),
    );

    let ee = e.mul(&e.adjoint())?;
    let expected = single(vec![vec!["3+x+x^-1", "0"], vec!["0", "0"]])?;
    let printed = diag_string(ee.block(0)).unwrap_or_else(|| ee.to_string());
    let ok3 = check(
        &mut checks,
        "ee* = diag(3+x+x^-1, 0)",
        ee == expected,
        printed,
    );

    let witness = e.ideal_membership(&e11)?;
    let ok4 = match &witness {
        Some(y) => {
            let verified = e.mul(y)? == e11;
            check(
                &mut checks,
                "e11 in eR",
                verified,
                format!(
                    "e·y = e11 with y = {}",
                    diag_string(y.block(0)).unwrap_or_else(|| y.to_string())
                ),
            )
        }
        None => check(
            &mut checks,
            "e11 in eR",
            false,
            "no solution of e·y = e11".into(),
        ),
    };

    // e11 = ee*·y forces f·y₁₁ = 1, so f would be a unit
    let width = f.width().unwrap_or(0);
    let not_member = ee.ideal_membership(&e11)?.is_none();
    let ok5 = check(
        &mut checks,
        "e11 not in ee*R",
        not_member && !f.is_unit() && *ee.block(0).get(0, 0) == f,
        format!("{f} has width {width}, so it is not a unit"),
    );

    let all = ok1 && ok2 && ok3 && ok4 && ok5;
    let verdict = if all {
        Verdict::NotRickartStar
    } else {
        Verdict::Inconclusive
    };
    check(
        &mut checks,
        "verdict",
        all,
        format!("{verdict}: eR differs from ee*R"),
    );

    Ok(RickartReport {
        element: s.phi_inv(&e)?.to_string(),
        dim: d(&e)?,
        checks,
        verdict,
        e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_six_checks_pass() {
        let r = rickart_example().unwrap();
        assert_eq!(r.checks.len(), 6);
        assert!(r.all_pass(), "{:?}", r.checks);
        assert_eq!(r.verdict, Verdict::NotRickartStar);
        assert_eq!(r.checks[2].detail, "diag(3+x+x^-1, 0)");
        assert_eq!(r.dim.to_string(), "1/2");
    }
}
