use std::collections::BTreeSet;

use serde::Serialize;

use super::{ZigZag, ZigZagError, ZERO_LABEL};
use crate::linalg::QMatrix;

/// The point terms at one node: `alpha: E- -> A_k`, `beta: A_k -> B_k`,
/// `gamma: B_k -> E0` against the shared boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointTerm {
    pub node: String,
    pub alpha: QMatrix,
    pub beta: QMatrix,
    pub gamma: QMatrix,
}

impl PointTerm {
    /// The rank-one skyscraper point term `(Q, Q, 0, id, 0)` at `node`.
    pub fn rank_one(node: impl Into<String>, e_minus: usize, e_zero: usize) -> Self {
        PointTerm {
            node: node.into(),
            alpha: QMatrix::zeros(1, e_minus),
            beta: QMatrix::identity(1),
            gamma: QMatrix::zeros(e_zero, 1),
        }
    }

    pub fn a_dim(&self) -> usize {
        self.beta.cols()
    }

    pub fn b_dim(&self) -> usize {
        self.beta.rows()
    }
}

/// Several point terms over one open part; the total zig-zag is their direct
/// sum, in node order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiZigZag {
    open_label: String,
    e_minus: usize,
    e_zero: usize,
    nodes: Vec<PointTerm>,
}

impl MultiZigZag {
    pub fn new(
        open_label: impl Into<String>,
        e_minus: usize,
        e_zero: usize,
        nodes: Vec<PointTerm>,
    ) -> Result<Self, ZigZagError> {
        let mut seen = BTreeSet::new();
        for n in &nodes {
            if !seen.insert(n.node.as_str()) {
                return Err(ZigZagError::DuplicateNode(n.node.clone()));
            }
        }
        let m = MultiZigZag {
            open_label: open_label.into(),
            e_minus,
            e_zero,
            nodes,
        };
        let total = m.try_total()?;
        let report = total.validate();
        if !report.is_valid() {
            return Err(ZigZagError::Invalid(report));
        }
        Ok(m)
    }

    /// Rank-one skyscrapers at the given nodes over the zero open part.
    pub fn skyscrapers<S: AsRef<str>>(nodes: &[S]) -> Result<Self, ZigZagError> {
        MultiZigZag::new(
            ZERO_LABEL,
            0,
            0,
            nodes.iter().map(|n| PointTerm::rank_one(n.as_ref(), 0, 0)).collect(),
        )
    }

    pub fn open_label(&self) -> &str {
        &self.open_label
    }

    pub fn e_minus(&self) -> usize {
        self.e_minus
    }

    pub fn e_zero(&self) -> usize {
        self.e_zero
    }

    pub fn nodes(&self) -> &[PointTerm] {
        &self.nodes
    }

    pub fn node_labels(&self) -> Vec<&str> {
        self.nodes.iter().map(|n| n.node.as_str()).collect()
    }

    fn try_total(&self) -> Result<ZigZag, ZigZagError> {
        let shape = |e: crate::linalg::LinalgError| ZigZagError::Shape(e.to_string());
        let mut alpha = QMatrix::zeros(0, self.e_minus);
        let mut beta = QMatrix::zeros(0, 0);
        let mut gamma = QMatrix::zeros(self.e_zero, 0);
        for n in &self.nodes {
            alpha = alpha.vstack(&n.alpha).map_err(shape)?;
            beta = beta.block_diag(&n.beta);
            gamma = gamma.hstack(&n.gamma).map_err(shape)?;
        }
        ZigZag::new(self.open_label.clone(), self.e_minus, self.e_zero, alpha, beta, gamma)
    }

    /// The direct sum of the point terms as one zig-zag.
    pub fn total(&self) -> ZigZag {
        self.try_total().expect("checked at construction")
    }

    /// Offsets of each node's `A` and `B` blocks inside the total.
    pub fn offsets(&self) -> Vec<(usize, usize)> {
        let (mut a, mut b) = (0, 0);
        self.nodes
            .iter()
            .map(|n| {
                let out = (a, b);
                a += n.a_dim();
                b += n.b_dim();
                out
            })
            .collect()
    }
}
