use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use zigzag_core::assembly::{verify_gluing, verify_shadow_compat};
use zigzag_core::exec::Execution;
use zigzag_core::extension::{extension_class, normalize, self_duality};
use zigzag_core::linalg::{QMatrix, Rational};
use zigzag_core::monodromy::{
    nilpotent_log, pl_operator, pl_transform, unipotent_exp, weight_filtration, NilpotentOperator, Pairing,
};
use zigzag_core::report::CheckReport;
use zigzag_core::skeleton::{skeleton_of, to_dot, to_json};
use zigzag_core::tables::{table_one, table_two, Table};
use zigzag_core::zigzag::{dualize, is_isomorphic};
use zigzag_core::zzl::{matrix_json, matrix_literal, parse_bytes, zigzag_json, Category, Document, ParseOptions};

use crate::{Cli, Command, Format, Outcome};

fn usage(message: impl Into<String>) -> Outcome {
    let message = message.into();
    Outcome {
        code: 2,
        text: format!("error: {message}\n"),
        json: json!({"status": "error", "error": message}),
    }
}

fn failure(message: impl Into<String>) -> Outcome {
    let message = message.into();
    Outcome {
        code: 1,
        text: format!("error: {message}\n"),
        json: json!({"status": "fail", "error": message}),
    }
}

fn report_outcome(report: &CheckReport, heading: &str) -> Outcome {
    Outcome {
        code: if report.passed() { 0 } else { 1 },
        text: format!("{heading}\n{report}"),
        json: report.to_json_value(),
    }
}

/// Reads and parses a file; diagnostics become the outcome.
fn load(path: &Path, validate: bool) -> Result<Document, Outcome> {
    let bytes = std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_bytes(&bytes, ParseOptions { validate }).map_err(|diags| {
        let malformed = diags
            .iter()
            .any(|d| matches!(d.code.category(), Category::Lexical | Category::Syntactic));
        let mut text = String::new();
        for d in &diags {
            let _ = writeln!(text, "{}:{d}", path.display());
        }
        Outcome {
            code: if malformed { 2 } else { 1 },
            text,
            json: json!({
                "status": "fail",
                "diagnostics": diags.iter().map(|d| d.to_json_value()).collect::<Vec<_>>(),
            }),
        }
    })
}

fn vector_of(doc: &Document, name: &str) -> Result<Vec<Rational>, Outcome> {
    let m = doc.map(name).ok_or_else(|| usage(format!("no map named `{name}`")))?;
    match m.shape() {
        (_, 1) => Ok(m.column(0)),
        (1, _) => Ok(m.row(0).to_vec()),
        (r, c) => Err(failure(format!("`{name}` is {r}x{c}; a vector must have one row or one column"))),
    }
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn run(cli: &Cli) -> Outcome {
    if cli.format == Format::Dot && !matches!(cli.command, Command::Skeleton { .. }) {
        return usage("--format dot is only available for `skeleton`");
    }
    let result = match &cli.command {
        Command::Check { file } => check(file),
        Command::Dual { file, name } => dual(file, name),
        Command::ExtClass { file, name } => ext_class(file, name),
        Command::Assemble { file } => assemble(file),
        Command::Gluing { file, name } => gluing(file, name),
        Command::Skeleton { file } => skeleton(file),
        Command::Tables => Ok(tables()),
        Command::Wfilt { file, name, center } => wfilt(file, name, *center),
        Command::Nlog { file, name } => nlog(file, name),
        Command::Pl {
            file,
            alpha,
            delta,
            pairing,
        } => pl(file, alpha, delta, pairing),
    };
    result.unwrap_or_else(|o| o)
}

fn check(file: &Path) -> Result<Outcome, Outcome> {
    let doc = load(file, true)?;
    let mut text = format!("{}: ok, {} declarations\n", file.display(), doc.item_count());
    for (name, z) in &doc.zigzags {
        let _ = writeln!(text, "  zigzag {name} = {} exact", z.value);
    }
    for (name, e) in &doc.extensions {
        let _ = writeln!(text, "  extension {name}: class {}", extension_class(&e.value.presentation));
    }
    if let Some(n) = doc.node_datum() {
        let _ = writeln!(text, "  nodes: {}", n.node_labels().join(", "));
    }
    for name in doc.gluings.keys() {
        let _ = writeln!(text, "  gluing {name}: checks pass");
    }
    Ok(Outcome {
        code: 0,
        text,
        json: json!({"status": "pass", "document": doc.to_json_value()}),
    })
}

fn dual(file: &Path, name: &str) -> Result<Outcome, Outcome> {
    let doc = load(file, true)?;
    let z = doc.zigzag(name).ok_or_else(|| usage(format!("no zigzag named `{name}`")))?;
    let d = dualize(z);
    let mut text = format!("zigzag {name} = {z}\ndual          = {d}\n");
    let verdict = match is_isomorphic(&d, z) {
        Ok(v) => {
            let _ = writeln!(text, "self-dual: {}", if v.isomorphic { "yes" } else { "no" });
            if let Some(w) = v.witness() {
                let _ = writeln!(
                    text,
                    "witness: E- {}, A {}, B {}, E0 {}",
                    matrix_literal(&w.e_minus),
                    matrix_literal(&w.a),
                    matrix_literal(&w.b),
                    matrix_literal(&w.e_zero)
                );
            }
            json!(v.isomorphic)
        }
        Err(e) => {
            let _ = writeln!(text, "self-dual: undecided ({e})");
            Value::Null
        }
    };
    Ok(Outcome {
        code: 0,
        text,
        json: json!({"zigzag": zigzag_json(z), "dual": zigzag_json(&d), "self_dual": verdict}),
    })
}

fn ext_class(file: &Path, name: &str) -> Result<Outcome, Outcome> {
    let doc = load(file, true)?;
    let e = doc.extension(name).ok_or_else(|| usage(format!("no extension named `{name}`")))?;
    let class = extension_class(e);
    let mut text = format!(
        "extension {name}: total {}\nclass: {}\nsplit: {}\n",
        e.total(),
        class,
        if class.is_split() { "yes" } else { "no" }
    );
    let normal = match normalize(e) {
        Ok((target, iso)) => {
            let sigma = iso.sigma.as_ref().map(ToString::to_string);
            let _ = writeln!(
                text,
                "normal form: class {} (sigma {})",
                extension_class(&target).value,
                sigma.as_deref().unwrap_or("-")
            );
            json!({"class": extension_class(&target).value.to_string(), "sigma": sigma})
        }
        Err(err) => {
            let _ = writeln!(text, "normal form: unavailable ({err})");
            Value::Null
        }
    };
    let self_dual = match self_duality(e) {
        Ok(s) => {
            let _ = writeln!(text, "self-dual: {}", if s.self_dual { "yes" } else { "no" });
            json!(s.self_dual)
        }
        Err(err) => {
            let _ = writeln!(text, "self-dual: undecided ({err})");
            Value::Null
        }
    };
    Ok(Outcome {
        code: 0,
        text,
        json: json!({
            "class": class.value.to_string(),
            "normalized": class.normalized.to_string(),
            "split": class.is_split(),
            "normal_form": normal,
            "self_dual": self_dual,
            "total": zigzag_json(&e.total()),
        }),
    })
}

fn assemble(file: &Path) -> Result<Outcome, Outcome> {
    let doc = load(file, true)?;
    let s = doc.node_datum().ok_or_else(|| usage("the file has no nodes block"))?;
    let report = verify_shadow_compat(s, Execution::default());
    Ok(report_outcome(
        &report,
        &format!("shadow compatibility over nodes {}", s.node_labels().join(", ")),
    ))
}

fn gluing(file: &Path, name: &str) -> Result<Outcome, Outcome> {
    let doc = load(file, false)?;
    let g = doc.gluing(name).ok_or_else(|| usage(format!("no gluing named `{name}`")))?;
    Ok(report_outcome(&verify_gluing(g), &format!("gluing {name}")))
}

fn skeleton(file: &Path) -> Result<Outcome, Outcome> {
    let doc = load(file, true)?;
    let s = doc.node_datum().ok_or_else(|| usage("the file has no nodes block"))?;
    let k = skeleton_of(s);
    Ok(Outcome {
        code: 0,
        text: to_dot(&k),
        json: to_json(&k),
    })
}

fn table_json(t: &Table) -> Value {
    json!({
        "title": t.title,
        "verified": t.verified(),
        "rows": t.rows.iter().map(|r| json!({
            "object": r.object,
            "zigzag": r.zigzag,
            "comment": r.comment,
            "verified": r.verified(),
            "failures": r.failures,
        })).collect::<Vec<_>>(),
    })
}

fn tables() -> Outcome {
    let t1 = table_one(3);
    let t2 = table_two();
    let ok = t1.verified() && t2.verified();
    Outcome {
        code: if ok { 0 } else { 1 },
        text: format!("{t1}\n{t2}"),
        json: json!({
            "status": if ok { "pass" } else { "fail" },
            "tables": [table_json(&t1), table_json(&t2)],
        }),
    }
}

fn wfilt(file: &Path, name: &str, center: i64) -> Result<Outcome, Outcome> {
    let doc = load(file, true)?;
    let m = doc.map(name).ok_or_else(|| usage(format!("no map named `{name}`")))?;
    let n = NilpotentOperator::new(m.clone()).map_err(|e| failure(format!("`{name}`: {e}")))?;
    let w = weight_filtration(&n, center).map_err(|e| failure(format!("`{name}`: {e}")))?;
    let violations = w.violations(&n);
    let mut text = format!("weight filtration of `{name}` centered at {center}\n");
    let _ = writeln!(text, "jordan type: {:?}", n.jordan_type());
    for (l, s) in w.steps() {
        let _ = writeln!(text, "  W_{l}: dim {}", s.dim());
    }
    for (l, d) in w.graded_dims() {
        let _ = writeln!(text, "  Gr_{l}: dim {d}");
    }
    for v in &violations {
        let _ = writeln!(text, "  violation: {v}");
    }
    let _ = writeln!(text, "status: {}", if violations.is_empty() { "PASS" } else { "FAIL" });
    Ok(Outcome {
        code: if violations.is_empty() { 0 } else { 1 },
        text,
        json: json!({
            "center": center,
            "jordan_type": n.jordan_type(),
            "steps": w.steps().iter().map(|(l, s)| json!({"weight": l, "dim": s.dim(), "basis": matrix_json(s.basis())})).collect::<Vec<_>>(),
            "graded": w.graded_dims().iter().map(|(l, d)| json!({"weight": l, "dim": d})).collect::<Vec<_>>(),
            "violations": violations,
            "status": if violations.is_empty() { "pass" } else { "fail" },
        }),
    })
}

fn nlog(file: &Path, name: &str) -> Result<Outcome, Outcome> {
    let doc = load(file, true)?;
    let t = doc.map(name).ok_or_else(|| usage(format!("no map named `{name}`")))?;
    let n = nilpotent_log(t).map_err(|e| failure(format!("`{name}`: {e}")))?;
    let round_trip = &unipotent_exp(&n) == t;
    Ok(Outcome {
        code: if round_trip { 0 } else { 1 },
        text: format!(
            "N = log `{name}` = {}\nexp N = T: {}\n",
            matrix_literal(n.matrix()),
            if round_trip { "PASS" } else { "FAIL" }
        ),
        json: json!({
            "N": matrix_json(n.matrix()),
            "round_trip": round_trip,
            "status": if round_trip { "pass" } else { "fail" },
        }),
    })
}

fn pl(file: &Path, alpha: &str, delta: &str, pairing: &str) -> Result<Outcome, Outcome> {
    let doc = load(file, true)?;
    let a = vector_of(&doc, alpha)?;
    let d = vector_of(&doc, delta)?;
    let g = doc.map(pairing).ok_or_else(|| usage(format!("no map named `{pairing}`")))?;
    let q = Pairing::new(g.clone()).map_err(|e| failure(format!("`{pairing}`: {e}")))?;
    let image = pl_transform(&a, &d, &q).map_err(|e| failure(e.to_string()))?;
    let t = pl_operator(&d, &q).map_err(|e| failure(e.to_string()))?;
    let dev = &t - &QMatrix::identity(t.rows());
    let unipotent = (&dev * &dev).is_zero();
    let mut text = format!(
        "T({alpha}) = [{}]\nT = {}\n",
        rationals(&image).join(", "),
        matrix_literal(&t)
    );
    let _ = writeln!(text, "pairing skew: {}", if q.is_skew() { "yes" } else { "no" });
    let _ = writeln!(text, "(T - I)^2 = 0: {}", if unipotent { "yes" } else { "no" });
    Ok(Outcome {
        code: 0,
        text,
        json: json!({
            "image": rationals(&image),
            "T": matrix_json(&t),
            "skew": q.is_skew(),
            "unipotent": unipotent,
        }),
    })
}
