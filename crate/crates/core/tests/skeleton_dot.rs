mod common;

use common::read_dot;
use zigzag_core::assembly::{assemble, NodeDatum};
use zigzag_core::linalg::Rational;
use zigzag_core::skeleton::{skeleton_of, to_dot, to_json, Skeleton};

fn star(labels: &[&str], bulk: &str) -> Skeleton {
    let nodes = labels
        .iter()
        .enumerate()
        .map(|(k, l)| NodeDatum::odp(*l, "Q_U[3]", Rational::from_integer((k % 2) as i64)))
        .collect();
    skeleton_of(&assemble(bulk, "Q_U[3]", nodes).unwrap())
}

#[test]
fn reader_recovers_the_graph() {
    for labels in [vec![], vec!["p1"], vec!["p1", "p2", "p3"], vec!["node", "a b", "q\"x", "7"]] {
        let k = star(&labels, "bulk");
        let g = read_dot(&to_dot(&k)).expect("exporter output is readable");
        assert_eq!(g.name, "skeleton");
        assert_eq!(g.vertices.len(), k.vertex_count());
        assert_eq!(g.edges.len(), k.edge_count());
        let ids: Vec<&str> = g.vertices.iter().skip(1).map(|(id, _)| id.as_str()).collect();
        assert_eq!(ids, labels);
        for (e, (from, to, label)) in k.edges.iter().zip(&g.edges) {
            assert_eq!((&e.from, &e.to, &e.label()), (from, to, label));
        }
        for (n, (_, label)) in k.nodes.iter().zip(g.vertices.iter().skip(1)) {
            assert_eq!(label, &format!("{} class={} rank={}", n.label, n.class, n.quotient_rank));
        }
    }
}

#[test]
fn every_node_has_both_attachments() {
    let k = star(&["p1", "p2", "p3", "p4", "p5"], "bulk");
    let g = read_dot(&to_dot(&k)).unwrap();
    for (i, (id, _)) in g.vertices.iter().enumerate().skip(1) {
        let phi = format!("Phi_{i}");
        let psi = format!("Psi_{i}");
        assert!(g.edges.contains(&(id.clone(), "bulk".into(), phi)));
        assert!(g.edges.contains(&("bulk".into(), id.clone(), psi)));
    }
}

#[test]
fn json_mirrors_dot() {
    let k = star(&["p1", "p2"], "bulk");
    let v = to_json(&k);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 2);
    assert_eq!(v["edges"].as_array().unwrap().len(), 4);
    assert_eq!(v["nodes"][1]["class"], "1");
}

#[test]
fn reader_rejects_malformed() {
    assert!(read_dot("graph x {\n}\n").is_none());
    assert!(read_dot("digraph x {\n  a [label=\"a\"]\n}\n").is_none());
    assert!(read_dot("digraph x {\n  a [label=\"a\"];\n").is_none());
}
