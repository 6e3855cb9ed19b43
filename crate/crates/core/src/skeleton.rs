//! The combinatorial skeleton: a star with the bulk sector at the centre,
//! one vertex per node and two tagged attachment edges per node.

use std::fmt::Write as _;

use serde::Serialize;

use crate::assembly::{global_shadow, FiniteNodeDatum};
use crate::extension::class_vector;
use crate::linalg::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeTag {
    Phi,
    Psi,
}

impl EdgeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeTag::Phi => "Phi",
            EdgeTag::Psi => "Psi",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkeletonNode {
    pub label: String,
    pub class: Rational,
    pub quotient_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub tag: EdgeTag,
    /// 1-based node position.
    pub index: usize,
}

impl Edge {
    pub fn label(&self) -> String {
        format!("{}_{}", self.tag.as_str(), self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skeleton {
    pub bulk: String,
    pub nodes: Vec<SkeletonNode>,
    pub edges: Vec<Edge>,
}

impl Skeleton {
    pub fn vertex_count(&self) -> usize {
        1 + self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

pub fn skeleton_of(s: &FiniteNodeDatum) -> Skeleton {
    let classes = class_vector(global_shadow(s));
    let nodes: Vec<SkeletonNode> = s
        .nodes()
        .iter()
        .zip(classes)
        .map(|(n, c)| SkeletonNode {
            label: n.node.clone(),
            class: c.normalized,
            quotient_rank: n.local.quot().a_dim(),
        })
        .collect();
    let bulk = s.bulk_label().to_string();
    let edges = nodes
        .iter()
        .enumerate()
        .flat_map(|(k, n)| {
            [
                Edge {
                    from: n.label.clone(),
                    to: bulk.clone(),
                    tag: EdgeTag::Phi,
                    index: k + 1,
                },
                Edge {
                    from: bulk.clone(),
                    to: n.label.clone(),
                    tag: EdgeTag::Psi,
                    index: k + 1,
                },
            ]
        })
        .collect();
    Skeleton { bulk, nodes, edges }
}

/// A DOT identifier, quoted unless it is a plain alphanumeric name.
pub fn dot_id(s: &str) -> String {
    let plain = !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !s.starts_with(|c: char| c.is_ascii_digit())
        && !["node", "edge", "graph", "digraph", "subgraph", "strict"]
            .contains(&s.to_ascii_lowercase().as_str());
    if plain {
        s.to_string()
    } else {
        format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

pub fn to_dot(k: &Skeleton) -> String {
    let mut out = String::from("digraph skeleton {\n");
    let _ = writeln!(out, "  {} [shape=box, label=\"{}\"];", dot_id(&k.bulk), escape(&k.bulk));
    for n in &k.nodes {
        let _ = writeln!(
            out,
            "  {} [label=\"{} class={} rank={}\"];",
            dot_id(&n.label),
            escape(&n.label),
            n.class,
            n.quotient_rank
        );
    }
    for e in &k.edges {
        let _ = writeln!(out, "  {} -> {} [label=\"{}\"];", dot_id(&e.from), dot_id(&e.to), e.label());
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// `{"bulk", "edges": [{from, label, tag, to}], "nodes": [{class, label, rank}]}`
/// with sorted keys.
pub fn to_json(k: &Skeleton) -> serde_json::Value {
    serde_json::json!({
        "bulk": k.bulk,
        "nodes": k.nodes.iter().map(|n| serde_json::json!({
            "label": n.label,
            "class": n.class.to_string(),
            "rank": n.quotient_rank,
        })).collect::<Vec<_>>(),
        "edges": k.edges.iter().map(|e| serde_json::json!({
            "from": e.from,
            "to": e.to,
            "tag": e.tag.as_str(),
            "label": e.label(),
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble, NodeDatum};

    fn star(classes: &[i64]) -> Skeleton {
        let nodes = classes
            .iter()
            .enumerate()
            .map(|(k, &c)| NodeDatum::odp(format!("p{}", k + 1), "Q_U[3]", Rational::from_integer(c)))
            .collect();
        skeleton_of(&assemble("bulk", "Q_U[3]", nodes).unwrap())
    }

    #[test]
    fn counts() {
        for r in 0..=5 {
            let k = star(&vec![1; r]);
            assert_eq!(k.vertex_count(), r + 1);
            assert_eq!(k.edge_count(), 2 * r);
        }
    }

    #[test]
    fn empty_skeleton_has_one_vertex_statement() {
        assert_eq!(to_dot(&star(&[])), "digraph skeleton {\n  bulk [shape=box, label=\"bulk\"];\n}\n");
    }

    #[test]
    fn single_node_template() {
        let dot = to_dot(&star(&[1]));
        assert!(dot.contains("  p1 -> bulk [label=\"Phi_1\"];\n"));
        assert!(dot.contains("  bulk -> p1 [label=\"Psi_1\"];\n"));
        assert!(dot.contains("class=1"));
        assert_eq!(dot, to_dot(&star(&[1])));
    }

    #[test]
    fn quoting() {
        assert_eq!(dot_id("p1"), "p1");
        assert_eq!(dot_id("C bulk"), "\"C bulk\"");
        assert_eq!(dot_id("1p"), "\"1p\"");
        assert_eq!(dot_id("node"), "\"node\"");
        assert_eq!(dot_id("a\"b"), "\"a\\\"b\"");
    }

    #[test]
    fn json_is_sorted() {
        let text = serde_json::to_string(&to_json(&star(&[0]))).unwrap();
        assert_eq!(
            text,
            r#"{"bulk":"bulk","edges":[{"from":"p1","label":"Phi_1","tag":"Phi","to":"bulk"},{"from":"bulk","label":"Psi_1","tag":"Psi","to":"p1"}],"nodes":[{"class":"0","label":"p1","rank":1}]}"#
        );
    }
}
