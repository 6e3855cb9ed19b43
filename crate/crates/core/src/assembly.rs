//! Finite-node assembly: local node data over one bulk label, the global
//! extension shadow, and the gluing quadruple with `N = v u`.

use std::collections::BTreeSet;
use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::extension::{class_vector, extension_class, make_extension, ClassInput, ExtensionError, ExtensionPresentation};
use crate::linalg::{QMatrix, Rational};
use crate::report::CheckReport;
use crate::zigzag::{std_ic, MultiZigZag, ZigZag};

pub const FILTRATION_NOTICE: &str = "filtrations: not checked";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error("duplicate node label {0:?}")]
    DuplicateNode(String),
    #[error("node {node:?}: quotient has rank {rank}, expected 1")]
    NonRankOneQuotient { node: String, rank: usize },
    #[error("node {node:?}: local sub-object must have no point terms and open label {expected:?}")]
    SubMismatch { node: String, expected: String },
    #[error("node {node:?}: v u is not nilpotent")]
    NotNilpotent { node: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
}

/// Local rank-one gluing block at a node: `u: Psi_k -> Q^{r_k}` and
/// `v: Q^{r_k} -> Psi_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingBlock {
    pub u: QMatrix,
    pub v: QMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeDatum {
    pub node: String,
    pub local: ExtensionPresentation,
    pub gluing: Option<GluingBlock>,
}

impl NodeDatum {
    pub fn new(node: impl Into<String>, local: ExtensionPresentation) -> Self {
        NodeDatum {
            node: node.into(),
            local,
            gluing: None,
        }
    }

    /// The standard ordinary double point datum: the intersection complex
    /// with boundary `(1, 1)` extended by one skyscraper with class `class`.
    pub fn odp(node: impl Into<String>, open_label: &str, class: Rational) -> Self {
        let local = make_extension(
            std_ic(open_label, 1, 1),
            crate::zigzag::std_skyscraper(1).expect("rank one"),
            ClassInput::Scalar(class),
        )
        .expect("the ordinary double point extension is valid for every class");
        NodeDatum::new(node, local)
    }

    pub fn with_gluing(mut self, u: QMatrix, v: QMatrix) -> Self {
        self.gluing = Some(GluingBlock { u, v });
        self
    }

    pub fn normalized_class(&self) -> Rational {
        extension_class(&self.local).normalized
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteNodeDatum {
    bulk_label: String,
    open_label: String,
    nodes: Vec<NodeDatum>,
    shadow: ExtensionPresentation,
}

impl FiniteNodeDatum {
    pub fn bulk_label(&self) -> &str {
        &self.bulk_label
    }

    pub fn open_label(&self) -> &str {
        &self.open_label
    }

    pub fn nodes(&self) -> &[NodeDatum] {
        &self.nodes
    }

    pub fn node_labels(&self) -> Vec<String> {
        self.nodes.iter().map(|n| n.node.clone()).collect()
    }

    /// Replaces the shadow without any check; for negative controls.
    pub fn with_shadow_unchecked(&self, shadow: ExtensionPresentation) -> Self {
        FiniteNodeDatum {
            shadow,
            ..self.clone()
        }
    }
}

/// The corrected finite-node extension built directly: the intersection
/// complex over the summed boundary, extended by one labelled rank-one
/// skyscraper per node with the given classes.
pub fn corrected_extension(
    open_label: &str,
    boundary: (usize, usize),
    nodes: &[String],
    classes: &[Rational],
) -> Result<ExtensionPresentation, AssemblyError> {
    if nodes.len() != classes.len() {
        return Err(AssemblyError::Shape(format!(
            "{} nodes but {} classes",
            nodes.len(),
            classes.len()
        )));
    }
    let quot = if nodes.is_empty() {
        ZigZag::zero()
    } else {
        MultiZigZag::skyscrapers(nodes)
            .map_err(|e| match e {
                crate::zigzag::ZigZagError::DuplicateNode(n) => AssemblyError::DuplicateNode(n),
                other => AssemblyError::Shape(other.to_string()),
            })?
            .total()
    };
    let e = make_extension(
        std_ic(open_label, boundary.0, boundary.1),
        quot,
        ClassInput::Vector(classes.to_vec()),
    )?
    .with_quot_labels(nodes.to_vec())?;
    Ok(e)
}

pub fn assemble(bulk_label: &str, open_label: &str, nodes: Vec<NodeDatum>) -> Result<FiniteNodeDatum, AssemblyError> {
    let mut seen = BTreeSet::new();
    let (mut e_minus, mut e_zero) = (0, 0);
    for n in &nodes {
        if !seen.insert(n.node.as_str()) {
            return Err(AssemblyError::DuplicateNode(n.node.clone()));
        }
        let rank = n.local.quot().a_dim();
        if rank != 1 {
            return Err(AssemblyError::NonRankOneQuotient {
                node: n.node.clone(),
                rank,
            });
        }
        let sub = n.local.sub();
        if !sub.is_ic_type() || sub.open_label() != open_label {
            return Err(AssemblyError::SubMismatch {
                node: n.node.clone(),
                expected: open_label.to_string(),
            });
        }
        if let Some(g) = &n.gluing {
            let vu = g
                .v
                .checked_mul(&g.u)
                .map_err(|e| AssemblyError::Shape(format!("node {:?}: {e}", n.node)))?;
            if !vu.is_square() || !vu.pow(vu.rows()).is_zero() {
                return Err(AssemblyError::NotNilpotent { node: n.node.clone() });
            }
        }
        e_minus += sub.e_minus();
        e_zero += sub.e_zero();
    }
    let labels: Vec<String> = nodes.iter().map(|n| n.node.clone()).collect();
    let classes: Vec<Rational> = nodes.iter().map(NodeDatum::normalized_class).collect();
    let shadow = corrected_extension(open_label, (e_minus, e_zero), &labels, &classes)?;
    Ok(FiniteNodeDatum {
        bulk_label: bulk_label.to_string(),
        open_label: open_label.to_string(),
        nodes,
        shadow,
    })
}

pub fn global_shadow(s: &FiniteNodeDatum) -> &ExtensionPresentation {
    &s.shadow
}

/// Rebuilds the corrected finite-node extension from the node data and
/// compares it with the stored shadow component by component.
pub fn verify_shadow_compat(s: &FiniteNodeDatum, exec: Execution) -> CheckReport {
    let mut report = CheckReport::new();
    let shadow = &s.shadow;
    let labels = s.node_labels();
    let r = s.nodes.len();
    let (e_minus, e_zero) = s
        .nodes
        .iter()
        .fold((0, 0), |(m, z), n| (m + n.local.sub().e_minus(), z + n.local.sub().e_zero()));

    let quot_rank = shadow.quot().a_dim();
    report.check(
        "quotient summands",
        quot_rank == r,
        format!("{quot_rank} rank-one summands for {r} nodes"),
    );
    report.check(
        "sub",
        *shadow.sub() == std_ic(&s.open_label, e_minus, e_zero),
        format!("intersection complex over boundary ({e_minus}, {e_zero})"),
    );
    let expected_quot = if r == 0 {
        Ok(ZigZag::zero())
    } else {
        MultiZigZag::skyscrapers(&labels).map(|m| m.total())
    };
    report.check(
        "quotient",
        expected_quot.as_ref() == Ok(shadow.quot()),
        "direct sum of rank-one point zig-zags in node order",
    );
    report.check(
        "node labels",
        shadow.quot_labels() == Some(labels.as_slice()),
        labels.join(", "),
    );
    report.check("total exact", shadow.total().is_valid(), shadow.total().validate().to_string());

    let stored = class_vector(shadow);
    let local = exec.map(&s.nodes, NodeDatum::normalized_class);
    for (k, (node, expected)) in s.nodes.iter().zip(&local).enumerate() {
        let got = stored.get(k).map(|c| c.value.clone());
        let ok = got.as_ref() == Some(expected);
        let detail = match &got {
            Some(g) if ok => format!("class {g}{}", if g.is_zero() { " (split)" } else { "" }),
            Some(g) => format!("shadow class {g}, local class {expected}"),
            None => format!("missing; local class {expected}"),
        };
        report.check(format!("class at {}", node.node), ok, detail);
        if expected.is_zero() {
            report.notice(format!("node {} ({} of {r}) is split", node.node, k + 1));
        }
    }
    report
}

/// `(Psi, M'', u, v)` with `N = v u`, split over node ranges of `Psi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingQuadruple {
    pub psi_dim: usize,
    /// Node label and its coordinate range in `Psi` (0-based, half-open).
    pub decomposition: Vec<(String, Range<usize>)>,
    /// Dimension of each node's block of `M''`.
    pub m2_dims: Vec<usize>,
    /// `M'' x Psi`.
    pub u: QMatrix,
    /// `Psi x M''`.
    pub v: QMatrix,
    pub n: QMatrix,
    /// Whether `n` was supplied rather than derived.
    pub n_supplied: bool,
}

impl GluingQuadruple {
    /// Coordinates of `Psi` owned by no node.
    pub fn inert(&self) -> Vec<usize> {
        (0..self.psi_dim)
            .filter(|i| !self.decomposition.iter().any(|(_, r)| r.contains(i)))
            .collect()
    }

    fn m2_offsets(&self) -> Vec<Range<usize>> {
        let mut off = 0;
        self.m2_dims
            .iter()
            .map(|&d| {
                let r = off..off + d;
                off += d;
                r
            })
            .collect()
    }
}

/// Places the node blocks into global `u`, `v` and derives `N = v u`. With
/// `expected_n` the derived operator is compared against it.
pub fn assemble_gluing(
    nodes: &[(String, GluingBlock)],
    psi_dim: usize,
    ranges: &[Range<usize>],
    expected_n: Option<QMatrix>,
) -> Result<GluingQuadruple, AssemblyError> {
    if nodes.len() != ranges.len() {
        return Err(AssemblyError::Shape(format!(
            "{} nodes but {} ranges",
            nodes.len(),
            ranges.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for (k, ((node, block), range)) in nodes.iter().zip(ranges).enumerate() {
        if !seen.insert(node.as_str()) {
            return Err(AssemblyError::DuplicateNode(node.clone()));
        }
        if range.end > psi_dim || range.start > range.end {
            return Err(AssemblyError::Shape(format!(
                "node {node:?}: range {}..{} outside Psi of dimension {psi_dim}",
                range.start, range.end
            )));
        }
        if ranges[..k].iter().any(|o| o.start < range.end && range.start < o.end) {
            return Err(AssemblyError::Shape(format!("node {node:?}: range overlaps an earlier node")));
        }
        let width = range.len();
        if block.u.cols() != width || block.v.rows() != width || block.u.rows() != block.v.cols() {
            return Err(AssemblyError::Shape(format!(
                "node {node:?}: u is {}x{}, v is {}x{}, Psi block has dimension {width}",
                block.u.rows(),
                block.u.cols(),
                block.v.rows(),
                block.v.cols()
            )));
        }
        let local = &block.v * &block.u;
        if !local.pow(width).is_zero() {
            return Err(AssemblyError::NotNilpotent { node: node.clone() });
        }
    }
    let m2_dims: Vec<usize> = nodes.iter().map(|(_, b)| b.u.rows()).collect();
    let m2: usize = m2_dims.iter().sum();
    let mut u = QMatrix::zeros(m2, psi_dim);
    let mut v = QMatrix::zeros(psi_dim, m2);
    let mut off = 0;
    for ((_, block), range) in nodes.iter().zip(ranges) {
        u.place(off, range.start, &block.u);
        v.place(range.start, off, &block.v);
        off += block.u.rows();
    }
    let derived = &v * &u;
    let (n, n_supplied) = match expected_n {
        Some(n) => {
            if n.shape() != (psi_dim, psi_dim) {
                return Err(AssemblyError::Shape(format!(
                    "N must be {psi_dim}x{psi_dim}, got {}x{}",
                    n.rows(),
                    n.cols()
                )));
            }
            (n, true)
        }
        None => (derived, false),
    };
    Ok(GluingQuadruple {
        psi_dim,
        decomposition: nodes.iter().map(|(n, _)| n.clone()).zip(ranges.iter().cloned()).collect(),
        m2_dims,
        u,
        v,
        n,
        n_supplied,
    })
}

/// Checks `N = v u`, nilpotency of `N`, rank one per node block of `M''`
/// and that `u`, `v` only touch each node's own coordinates.
pub fn verify_gluing(g: &GluingQuadruple) -> CheckReport {
    let mut report = CheckReport::new();
    let shapes_ok = g.u.shape() == (g.m2_dims.iter().sum(), g.psi_dim)
        && g.v.shape() == (g.psi_dim, g.m2_dims.iter().sum())
        && g.n.shape() == (g.psi_dim, g.psi_dim)
        && g.decomposition.len() == g.m2_dims.len();
    report.check(
        "shapes",
        shapes_ok,
        format!(
            "Psi {}, M'' {}, u {}x{}, v {}x{}, N {}x{}",
            g.psi_dim,
            g.m2_dims.iter().sum::<usize>(),
            g.u.rows(),
            g.u.cols(),
            g.v.rows(),
            g.v.cols(),
            g.n.rows(),
            g.n.cols()
        ),
    );
    report.notice(FILTRATION_NOTICE);
    if !shapes_ok {
        return report;
    }

    let vu = &g.v * &g.u;
    let mismatches = (0..g.psi_dim)
        .flat_map(|i| (0..g.psi_dim).map(move |j| (i, j)))
        .filter(|&(i, j)| vu.get(i, j) != g.n.get(i, j))
        .count();
    report.check(
        "N = v u",
        mismatches == 0,
        if mismatches == 0 {
            "entrywise equal".to_string()
        } else {
            format!("{mismatches} entries differ")
        },
    );

    let nilpotent = g.n.pow(g.psi_dim).is_zero();
    let index = (1..=g.psi_dim).find(|&k| g.n.pow(k).is_zero());
    report.check(
        "N nilpotent",
        nilpotent,
        match index {
            Some(k) => format!("N^{k} = 0"),
            None => format!("N^{} != 0", g.psi_dim),
        },
    );

    for ((node, _), &d) in g.decomposition.iter().zip(&g.m2_dims) {
        report.check(format!("rank one at {node}"), d == 1, format!("M'' block has dimension {d}"));
    }

    let offsets = g.m2_offsets();
    let mut stray = Vec::new();
    for ((node, range), rows) in g.decomposition.iter().zip(&offsets) {
        for i in rows.clone() {
            for j in 0..g.psi_dim {
                if !range.contains(&j) && !g.u.get(i, j).is_zero() {
                    stray.push(format!("u[{}][{}] ({node})", i + 1, j + 1));
                }
                if !range.contains(&j) && !g.v.get(j, i).is_zero() {
                    stray.push(format!("v[{}][{}] ({node})", j + 1, i + 1));
                }
            }
        }
    }
    report.check(
        "blocks respect decomposition",
        stray.is_empty(),
        if stray.is_empty() {
            "no entries outside node ranges".to_string()
        } else {
            format!("entries outside node ranges: {}", stray.join(", "))
        },
    );
    let inert = g.inert();
    if !inert.is_empty() {
        let coords: Vec<String> = inert.iter().map(|i| (i + 1).to_string()).collect();
        report.notice(format!("inert coordinates of Psi: {} (unconstrained)", coords.join(", ")));
    }
    report
}

/// Every single-entry mutation of `u`, `v` and `N` (each entry shifted by
/// one), labelled by the mutated entry.
pub fn single_entry_mutants(g: &GluingQuadruple) -> Vec<(String, GluingQuadruple)> {
    let mut out = Vec::new();
    let bump = |m: &QMatrix, i: usize, j: usize| {
        let mut m = m.clone();
        let x = m.get(i, j) + &Rational::one();
        m.set(i, j, x);
        m
    };
    for i in 0..g.u.rows() {
        for j in 0..g.u.cols() {
            out.push((format!("u[{i}][{j}]"), GluingQuadruple { u: bump(&g.u, i, j), ..g.clone() }));
        }
    }
    for i in 0..g.v.rows() {
        for j in 0..g.v.cols() {
            out.push((format!("v[{i}][{j}]"), GluingQuadruple { v: bump(&g.v, i, j), ..g.clone() }));
        }
    }
    for i in 0..g.n.rows() {
        for j in 0..g.n.cols() {
            out.push((format!("N[{i}][{j}]"), GluingQuadruple { n: bump(&g.n, i, j), ..g.clone() }));
        }
    }
    out
}

#[cfg(test)]
#[allow(clippy::single_range_in_vec_init)]
mod tests {
    use super::*;
    use crate::extension::{ext_isomorphic, extension_class};
    use crate::zigzag::std_corrected;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn datum(classes: &[i64]) -> FiniteNodeDatum {
        let nodes = classes
            .iter()
            .enumerate()
            .map(|(k, &c)| NodeDatum::odp(format!("p{}", k + 1), "Q_U[3]", q(c)))
            .collect();
        assemble("bulk", "Q_U[3]", nodes).unwrap()
    }

    #[test]
    fn single_node_shadow_is_the_corrected_object() {
        let s = datum(&[1]);
        assert_eq!(global_shadow(&s).total(), std_corrected("Q_U[3]", 1, 1));
        assert_eq!(extension_class(global_shadow(&s)).normalized, q(1));
    }

    #[test]
    fn two_nodes_and_none() {
        let s = datum(&[1, 1]);
        assert_eq!(global_shadow(&s).quot().dims(), [0, 2, 2, 0]);
        let empty = datum(&[]);
        assert_eq!(global_shadow(&empty).quot().a_dim(), 0);
        assert!(verify_shadow_compat(&empty, Execution::Sequential).passed());
    }

    #[test]
    fn compat_passes_and_flags_split_nodes() {
        let s = datum(&[1, 0, 1]);
        let r = verify_shadow_compat(&s, Execution::Parallel);
        assert!(r.passed(), "{r}");
        assert_eq!(r.notices, vec!["node p2 (2 of 3) is split".to_string()]);
    }

    #[test]
    fn corrupted_class_names_the_node() {
        let s = datum(&[1, 1]);
        let bad = global_shadow(&s).with_gluing_unchecked(crate::extension::Gluing::Collapsed(QMatrix::from_i64(&[&[1, 0]])));
        let r = verify_shadow_compat(&s.with_shadow_unchecked(bad), Execution::Sequential);
        assert!(!r.passed());
        let failed: Vec<_> = r.failures().map(|c| c.name.clone()).collect();
        assert_eq!(failed, vec!["class at p2".to_string()]);
    }

    #[test]
    fn permuted_nodes_give_isomorphic_shadows() {
        let a = assemble(
            "bulk",
            "Q_U[3]",
            vec![NodeDatum::odp("p1", "Q_U[3]", q(1)), NodeDatum::odp("p2", "Q_U[3]", q(0))],
        )
        .unwrap();
        let b = assemble(
            "bulk",
            "Q_U[3]",
            vec![NodeDatum::odp("p2", "Q_U[3]", q(0)), NodeDatum::odp("p1", "Q_U[3]", q(1))],
        )
        .unwrap();
        let v = ext_isomorphic(global_shadow(&a), global_shadow(&b)).unwrap();
        assert!(v.isomorphic);
        let p = v.witness.unwrap().quot_a;
        assert!(p.get(0, 0).is_zero() && p.get(1, 1).is_zero());
    }

    #[test]
    fn assembly_errors() {
        let dup = assemble(
            "bulk",
            "Q_U[3]",
            vec![NodeDatum::odp("p", "Q_U[3]", q(1)), NodeDatum::odp("p", "Q_U[3]", q(1))],
        );
        assert_eq!(dup.unwrap_err(), AssemblyError::DuplicateNode("p".into()));
        let two = make_extension(
            std_ic("Q_U[3]", 1, 1),
            crate::zigzag::std_skyscraper(2).unwrap(),
            ClassInput::Scalar(q(1)),
        )
        .unwrap();
        let err = assemble("bulk", "Q_U[3]", vec![NodeDatum::new("p", two)]).unwrap_err();
        assert!(matches!(err, AssemblyError::NonRankOneQuotient { rank: 2, .. }));
    }

    fn block(u: &[i64], v: &[i64]) -> GluingBlock {
        GluingBlock {
            u: QMatrix::from_i64(&[u]),
            v: QMatrix::from_i64(&v.iter().map(std::slice::from_ref).collect::<Vec<_>>()),
        }
    }

    #[test]
    fn one_node_gluing() {
        let g = assemble_gluing(&[("p1".into(), block(&[1, 0], &[0, 1]))], 2, &[0..2], None).unwrap();
        assert_eq!(g.n, QMatrix::from_i64(&[&[0, 0], &[1, 0]]));
        assert!(g.n.pow(2).is_zero());
        let r = verify_gluing(&g);
        assert!(r.passed(), "{r}");
        assert!(r.notices.contains(&FILTRATION_NOTICE.to_string()));
    }

    #[test]
    fn two_node_gluing_is_block_diagonal() {
        let b = block(&[1, 0], &[0, 1]);
        let g = assemble_gluing(&[("p1".into(), b.clone()), ("p2".into(), b)], 4, &[0..2, 2..4], None).unwrap();
        let expected = QMatrix::from_i64(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(g.n, expected);
        assert!(g.n.pow(2).is_zero());
        assert!(verify_gluing(&g).passed());
    }

    #[test]
    fn zero_maps_and_failures() {
        let g = assemble_gluing(&[("p".into(), block(&[0], &[0]))], 1, &[0..1], None).unwrap();
        assert!(g.n.is_zero());
        let err = assemble_gluing(&[("p".into(), block(&[1], &[1]))], 1, &[0..1], None).unwrap_err();
        assert_eq!(err, AssemblyError::NotNilpotent { node: "p".into() });
        let forced = GluingQuadruple {
            psi_dim: 1,
            decomposition: vec![("p".into(), 0..1)],
            m2_dims: vec![1],
            u: QMatrix::identity(1),
            v: QMatrix::identity(1),
            n: QMatrix::identity(1),
            n_supplied: true,
        };
        let r = verify_gluing(&forced);
        assert_eq!(r.failures().map(|c| c.name.as_str()).collect::<Vec<_>>(), vec!["N nilpotent"]);
    }

    #[test]
    fn rank_two_block_fails_odp_check() {
        let b = GluingBlock {
            u: QMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1]]),
            v: QMatrix::from_i64(&[&[1, 0], &[0, 0], &[0, 0]]),
        };
        let g = assemble_gluing(&[("p".into(), b)], 3, &[0..3], None).unwrap();
        let r = verify_gluing(&g);
        let failed: Vec<_> = r.failures().map(|c| c.name.clone()).collect();
        assert_eq!(failed, vec!["rank one at p".to_string()]);
    }

    #[test]
    fn every_mutant_is_killed() {
        let b = block(&[1, 0], &[0, 1]);
        let g = assemble_gluing(&[("p1".into(), b.clone()), ("p2".into(), b)], 5, &[0..2, 2..4], None).unwrap();
        assert!(verify_gluing(&g).passed());
        let mutants = single_entry_mutants(&g);
        assert_eq!(mutants.len(), 10 + 10 + 25);
        for (name, m) in mutants {
            assert!(!verify_gluing(&m).passed(), "mutant {name} survived");
        }
    }
}
