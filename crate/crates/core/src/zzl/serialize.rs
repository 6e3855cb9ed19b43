use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::{ClassSpec, Document};
use crate::assembly::GluingQuadruple;
use crate::linalg::{QMatrix, Rational};
use crate::zigzag::ZigZag;

fn row(entries: &[Rational]) -> String {
    entries.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// `[a, b; c, d]`, or `[]` when there are no entries.
pub fn matrix_literal(m: &QMatrix) -> String {
    if m.rows() * m.cols() == 0 {
        return "[]".into();
    }
    let rows: Vec<String> = (0..m.rows()).map(|i| row(m.row(i))).collect();
    format!("[{}]", rows.join("; "))
}

fn zigzag_stanza(name: &str, z: &ZigZag) -> String {
    format!(
        "zigzag {name} {{ open = {}, eminus = {}, ezero = {}, A = {}, B = {}, alpha = {}, beta = {}, gamma = {} }}",
        z.open_label(),
        z.e_minus(),
        z.e_zero(),
        z.a_dim(),
        z.b_dim(),
        matrix_literal(z.alpha()),
        matrix_literal(z.beta()),
        matrix_literal(z.gamma())
    )
}

fn ranges_literal(g: &GluingQuadruple) -> String {
    let rows: Vec<String> = g
        .decomposition
        .iter()
        .map(|(_, r)| format!("{}, {}", r.start + 1, r.end))
        .collect();
    format!("[{}]", rows.join("; "))
}

/// Canonical text: one stanza per line, kinds in declaration-kind order and
/// names sorted within a kind.
pub fn serialize(d: &Document) -> String {
    let mut out = String::new();
    for (name, s) in &d.spaces {
        let _ = writeln!(out, "space {name} dim {}", s.value);
    }
    for (name, m) in &d.maps {
        let m = &m.value;
        let _ = writeln!(out, "map {name} : {} -> {} = {}", m.from, m.to, matrix_literal(&m.matrix));
    }
    for (name, z) in &d.zigzags {
        let _ = writeln!(out, "{}", zigzag_stanza(name, &z.value));
    }
    for (name, e) in &d.extensions {
        let e = &e.value;
        let class = match &e.class {
            ClassSpec::Scalar(c) => format!("class {c}"),
            ClassSpec::Vector(v) => format!("class [{}]", row(v)),
            ClassSpec::Block(u) => format!("u = {}", matrix_literal(u)),
        };
        let _ = writeln!(out, "extension {name} = ext({}, {}) {class}", e.sub, e.quot);
    }
    if let Some(n) = &d.nodes {
        let entries: Vec<String> = n
            .value
            .entries
            .iter()
            .map(|e| match &e.local {
                Some(l) => format!("{} = {l}", e.label),
                None => e.label.clone(),
            })
            .collect();
        let _ = writeln!(out, "nodes {{ {} }}", entries.join(", "));
    }
    for (name, g) in &d.gluings {
        let g = &g.value.quadruple;
        let mut fields = vec![
            format!("psi = {}", g.psi_dim),
            format!("u = {}", matrix_literal(&g.u)),
            format!("v = {}", matrix_literal(&g.v)),
        ];
        if g.n_supplied {
            fields.push(format!("N = {}", matrix_literal(&g.n)));
        }
        if !g.decomposition.is_empty() {
            fields.push(format!("ranges = {}", ranges_literal(g)));
        }
        let _ = writeln!(out, "gluing {name} {{ {} }}", fields.join(", "));
    }
    out
}

/// Rows of rational strings.
pub fn matrix_json(m: &QMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

pub fn zigzag_json(z: &ZigZag) -> Value {
    json!({
        "open": z.open_label(),
        "eminus": z.e_minus(),
        "ezero": z.e_zero(),
        "A": z.a_dim(),
        "B": z.b_dim(),
        "alpha": matrix_json(z.alpha()),
        "beta": matrix_json(z.beta()),
        "gamma": matrix_json(z.gamma()),
    })
}

pub(super) fn to_json(d: &Document) -> Value {
    let spaces: Map<String, Value> = d.spaces.iter().map(|(k, s)| (k.clone(), json!(s.value))).collect();
    let maps: Map<String, Value> = d
        .maps
        .iter()
        .map(|(k, m)| {
            let m = &m.value;
            (k.clone(), json!({"from": m.from, "to": m.to, "matrix": matrix_json(&m.matrix)}))
        })
        .collect();
    let zigzags: Map<String, Value> = d.zigzags.iter().map(|(k, z)| (k.clone(), zigzag_json(&z.value))).collect();
    let extensions: Map<String, Value> = d
        .extensions
        .iter()
        .map(|(k, e)| {
            let e = &e.value;
            let class = match &e.class {
                ClassSpec::Scalar(c) => json!({"scalar": c.to_string()}),
                ClassSpec::Vector(v) => json!({"vector": v.iter().map(ToString::to_string).collect::<Vec<_>>()}),
                ClassSpec::Block(u) => json!({"block": matrix_json(u)}),
            };
            (k.clone(), json!({"sub": e.sub, "quot": e.quot, "class": class}))
        })
        .collect();
    let nodes = d.nodes.as_ref().map(|n| {
        n.value
            .entries
            .iter()
            .map(|e| json!({"label": e.label, "local": e.local}))
            .collect::<Vec<_>>()
    });
    let gluings: Map<String, Value> = d
        .gluings
        .iter()
        .map(|(k, g)| {
            let g = &g.value.quadruple;
            let ranges: Vec<Value> = g
                .decomposition
                .iter()
                .map(|(node, r)| json!({"node": node, "start": r.start + 1, "end": r.end}))
                .collect();
            (
                k.clone(),
                json!({
                    "psi": g.psi_dim,
                    "u": matrix_json(&g.u),
                    "v": matrix_json(&g.v),
                    "N": matrix_json(&g.n),
                    "N_supplied": g.n_supplied,
                    "ranges": ranges,
                }),
            )
        })
        .collect();
    json!({
        "spaces": spaces,
        "maps": maps,
        "zigzags": zigzags,
        "extensions": extensions,
        "nodes": nodes,
        "gluings": gluings,
    })
}
