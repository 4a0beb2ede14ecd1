use std::fmt::Write as _;

use leavitt_core::blocks::RMatrix;
use leavitt_core::dimension::axioms::{check_axioms, AxiomParams, Status};
use leavitt_core::dimension::{
    d, dim_module, dim_over_q, sim_a, sim_star_search, simple_order, split_bnd, v_class, DimVector,
    ModulePresentation, Splitting, StarSearch,
};
use leavitt_core::lpa::rewrite::{reduce, Strategy};
use leavitt_core::rickart::rickart_example;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::{input, Cli, Command, Opts};

type Outcome = Result<String, (String, CliError)>;

pub fn run(cli: &Cli) -> Outcome {
    let o = &cli.opts;
    let result = match &cli.command {
        Command::Analyze { graph } => analyze(o, graph),
        Command::Structure { graph } => structure(o, graph),
        Command::Reduce { graph, element } => reduce_cmd(o, graph, element),
        Command::Dim {
            graph,
            idempotent,
            presentation,
            element,
        } => match (idempotent.as_ref().or(element.as_ref()), presentation) {
            (Some(m), None) => dim_idempotent(o, graph, m),
            (None, Some(p)) => dim_presentation(o, graph, p),
            _ => Err(
                CliError::Usage("dim needs one of --idempotent, -e or --presentation".into())
                    .into(),
            ),
        },
        Command::Closure {
            graph,
            presentation,
        } => closure(o, graph, presentation),
        Command::Equiv { graph, p, q, star } => equiv(o, graph, p, q, *star),
        Command::Axioms { graph } => axioms(o, graph),
        Command::MatrixGraph { graph, n } => matrix_graph(o, graph, *n),
        Command::RickartExample => rickart(o),
    };
    result.map_err(|f| (f.output, f.error))
}

/// An error, with whatever was rendered before the failure was detected.
struct Failure {
    output: String,
    error: CliError,
}

impl From<CliError> for Failure {
    fn from(error: CliError) -> Self {
        Failure {
            output: String::new(),
            error,
        }
    }
}

impl From<leavitt_core::Error> for Failure {
    fn from(e: leavitt_core::Error) -> Self {
        CliError::from(e).into()
    }
}

type Res = Result<String, Failure>;

fn render(o: &Opts, value: &Value, text: String) -> String {
    if o.json {
        serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n"
    } else {
        text
    }
}

/// Fails with the rendered output attached when `ok` is false.
fn checked(out: String, ok: bool, message: impl FnOnce() -> String) -> Res {
    if ok {
        Ok(out)
    } else {
        Err(Failure {
            output: out,
            error: CliError::Check(message()),
        })
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn dim_json(v: &DimVector) -> Value {
    let mut value = to_value(&v.to_json());
    value["display"] = json!(v.to_string());
    value
}

fn analyze(o: &Opts, path: &std::path::Path) -> Res {
    let g = input::graph(path)?;
    let r = g.analyze();
    let mut t = String::new();
    writeln!(t, "vertices: {}, edges: {}", r.vertices, r.edges).unwrap();
    writeln!(t, "sinks: {}", list(&r.sinks)).unwrap();
    writeln!(t, "cycles: {}", r.cycles.len()).unwrap();
    for c in &r.cycles {
        writeln!(
            t,
            "  at {}: {} (exits: {})",
            c.base,
            c.edges.join("."),
            list(&c.exits)
        )
        .unwrap();
    }
    writeln!(t, "no-exit: {}", r.no_exit).unwrap();
    writeln!(t, "noetherian: {}", r.noetherian).unwrap();
    writeln!(t, "extending: {}", r.extending_verdict).unwrap();
    Ok(render(o, &to_value(&r), t))
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join(", ")
    }
}

fn structure(o: &Opts, path: &std::path::Path) -> Res {
    let alg = input::algebra(path, o.field)?;
    let s = input::structure(&alg)?;
    let spec = s.to_json();
    let ring = spec
        .blocks
        .iter()
        .map(|b| b.ring.clone())
        .collect::<Vec<_>>()
        .join(" ⊕ ");
    let value =
        json!({ "field": o.field.to_string(), "ring": ring, "blocks": to_value(&spec.blocks) });
    Ok(render(o, &value, format!("L(E) ≅ {ring}\n{s}")))
}

fn reduce_cmd(o: &Opts, path: &std::path::Path, text: &str) -> Res {
    let alg = input::algebra(path, o.field)?;
    let raw = alg
        .parse_raw(text)
        .map_err(|e| CliError::Parse(format!("`{text}`: {e}")))?;
    let left = reduce(&alg, &raw, Strategy::Leftmost)?;
    let right = reduce(&alg, &raw, Strategy::Rightmost)?;
    let nf = alg.normal_form(&raw);
    let confluent = left.element == nf && right.element == nf;
    let value = json!({
        "input": text,
        "normal_form": nf.to_string(),
        "terms": nf.num_terms(),
        "steps": { "leftmost": left.steps, "rightmost": right.steps },
        "confluent": confluent,
        "idempotent": nf.is_idempotent(),
        "projection": nf.is_projection(),
    });
    let mut t = format!("{nf}\n");
    writeln!(
        t,
        "steps: leftmost {}, rightmost {}",
        left.steps, right.steps
    )
    .unwrap();
    writeln!(
        t,
        "idempotent: {}, projection: {}",
        nf.is_idempotent(),
        nf.is_projection()
    )
    .unwrap();
    checked(render(o, &value, t), confluent, || {
        "rewriting strategies disagree".into()
    })
}

fn dim_idempotent(o: &Opts, path: &std::path::Path, arg: &str) -> Res {
    let alg = input::algebra(path, o.field)?;
    let s = input::structure(&alg)?;
    let p = input::matrix(&s, arg)?;
    let dim = d(&p)?;
    let order = simple_order(&p)?;
    let value = json!({
        "kind": "idempotent",
        "n": p.rows(),
        "dim": dim_json(&dim),
        "v_class": v_class(&p)?,
        "simple_order": order,
    });
    let mut t = format!("{dim}\n");
    if let Some(m) = order {
        writeln!(t, "simple of order {m}").unwrap();
    }
    Ok(render(o, &value, t))
}

fn torsion_json(split: &Splitting) -> Value {
    json!(split
        .torsion
        .iter()
        .enumerate()
        .map(|(b, t)| json!({
            "block": b,
            "factors": t.factors.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "generators": t.generators,
            "dim": t.dim.to_string(),
        }))
        .collect::<Vec<_>>())
}

fn torsion_text(t: &mut String, split: &Splitting) {
    for (b, tb) in split.torsion.iter().enumerate() {
        if !tb.factors.is_empty() {
            let factors: Vec<String> = tb.factors.iter().map(ToString::to_string).collect();
            writeln!(t, "torsion on block {b}: {}", factors.join(", ")).unwrap();
        }
    }
}

fn presentation(
    o: &Opts,
    path: &std::path::Path,
    file: &std::path::Path,
) -> Result<ModulePresentation, Failure> {
    let alg = input::algebra(path, o.field)?;
    let s = input::structure(&alg)?;
    Ok(ModulePresentation::new(input::presentation(&s, file)?))
}

fn dim_presentation(o: &Opts, path: &std::path::Path, file: &std::path::Path) -> Res {
    let m = presentation(o, path, file)?;
    let dim = dim_module(&m)?;
    let over_q = dim_over_q(&m)?;
    let split = split_bnd(&m)?;
    let value = json!({
        "kind": "presentation",
        "n": m.n(),
        "relations": m.relations.rows(),
        "dim": dim_json(&dim),
        "dim_over_q": dim_json(&over_q),
        "torsion": torsion_json(&split),
        "torsion_dim": split.torsion_dim().to_string(),
    });
    let mut t = format!("{dim}\n");
    torsion_text(&mut t, &split);
    let agree = dim == over_q;
    checked(render(o, &value, t), agree, || {
        format!("dim over R is {dim} but over Q is {over_q}")
    })
}

fn closure(o: &Opts, path: &std::path::Path, file: &std::path::Path) -> Res {
    let m = presentation(o, path, file)?;
    let split = split_bnd(&m)?;
    let q = &split.closure;
    let dq = d(q)?;
    let quotient = dim_module(&m)?;
    let value = json!({
        "closure": to_value(&q.to_json()),
        "dim": dim_json(&dq),
        "quotient_dim": dim_json(&quotient),
        "torsion": torsion_json(&split),
    });
    let mut t = format!("closure idempotent:\n{q}\n");
    writeln!(t, "d(closure) = {dq}").unwrap();
    writeln!(t, "dim of module = {quotient}").unwrap();
    torsion_text(&mut t, &split);
    Ok(render(o, &value, t))
}

fn equiv(o: &Opts, path: &std::path::Path, p: &str, q: &str, star: bool) -> Res {
    let alg = input::algebra(path, o.field)?;
    let s = input::structure(&alg)?;
    let (p, q) = (input::matrix(&s, p)?, input::matrix(&s, q)?);
    let w = sim_a(&p, &q)?;
    let (dp, dq) = (d(&p)?, d(&q)?);
    let verified = w.as_ref().is_none_or(|w| w.verify(&p, &q));
    let mut value = json!({
        "equivalent": w.is_some(),
        "dims": { "p": dim_json(&dp), "q": dim_json(&dq) },
        "witness": w.as_ref().map(|w| json!({ "x": to_value(&w.x.to_json()), "y": to_value(&w.y.to_json()) })),
    });
    let mut t = String::new();
    match &w {
        Some(w) => writeln!(
            t,
            "p ~a q: p = x·y, q = y·x with\nx =\n{}\ny =\n{}",
            w.x, w.y
        )
        .unwrap(),
        None => writeln!(
            t,
            "p and q are not algebraically equivalent: d(p) = {dp}, d(q) = {dq}"
        )
        .unwrap(),
    }
    if star {
        let (status, witness) = star_search(&p, &q, o)?;
        value["star"] = json!({ "status": status, "witness": witness.as_ref().map(|x| to_value(&x.to_json())) });
        match &witness {
            Some(x) => writeln!(t, "p ~* q: p = x·x*, q = x*·x with\nx =\n{x}").unwrap(),
            None => writeln!(t, "*-equivalence: {status}").unwrap(),
        }
    }
    checked(render(o, &value, t), verified, || {
        "equivalence witness failed verification".into()
    })
}

fn star_search(p: &RMatrix, q: &RMatrix, o: &Opts) -> Result<(String, Option<RMatrix>), CliError> {
    Ok(match sim_star_search(p, q, o.budget, o.seed)? {
        StarSearch::Found(x) => ("found".into(), Some(x)),
        StarSearch::NotEquivalent => ("not_equivalent".into(), None),
        StarSearch::Unknown { tried } => (format!("unknown after {tried} candidates"), None),
    })
}

fn axioms(o: &Opts, path: &std::path::Path) -> Res {
    let alg = input::algebra(path, o.field)?;
    let s = input::structure(&alg)?;
    let params = AxiomParams {
        samples: o.samples,
        seed: o.seed,
        max_n: o.max_size,
    };
    let report = check_axioms(&s, &params)?;
    let mut value = to_value(&report);
    value["rng"] = json!("ChaCha8");
    let mut t = format!(
        "rng ChaCha8, seed {}, {} samples, sizes up to {}\n",
        report.seed, report.samples, report.max_n
    );
    for r in &report.results {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Unknown => "unknown",
        };
        writeln!(t, "{:<7} {:<8} {} samples", r.axiom, status, r.samples).unwrap();
        if let Some(c) = &r.counterexample {
            writeln!(t, "{c}").unwrap();
        }
    }
    writeln!(t, "verified witnesses: {}", report.verified_witnesses).unwrap();
    let failed = report.results.iter().any(|r| r.status == Status::Fail);
    checked(render(o, &value, t), !failed, || "some axiom failed".into())
}

fn matrix_graph(o: &Opts, path: &std::path::Path, n: usize) -> Res {
    if n == 0 {
        return Err(CliError::Usage("-n must be at least 1".into()).into());
    }
    let g = input::graph(path)?.matrix_graph(n)?;
    let value = json!({
        "n": n,
        "vertices": g.num_vertices(),
        "edges": g.num_edges(),
        "graph": to_value(&g.to_json()),
    });
    Ok(render(o, &value, g.to_dsl()))
}

fn rickart(o: &Opts) -> Res {
    let r = rickart_example()?;
    let value = json!({
        "checks": to_value(&r.checks),
        "verdict": to_value(&r.verdict),
        "element": r.element,
        "dim": dim_json(&r.dim),
    });
    let mut t = String::new();
    for c in &r.checks {
        let mark = if c.passed { "✓" } else { "✗" };
        writeln!(t, "{mark} {}: {}", c.name, c.detail).unwrap();
    }
    writeln!(t, "d(e) = {}", r.dim).unwrap();
    writeln!(t, "e = {}", r.element).unwrap();
    let all = r.all_pass();
    checked(render(o, &value, t), all, || {
        "the Rickart example did not reproduce".into()
    })
}
