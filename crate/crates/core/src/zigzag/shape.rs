use std::fmt;

use serde::Serialize;

use super::{sum_label, ZigZag};

/// Dimensions and exact ranks of a zig-zag. Isomorphic zig-zags share it,
/// the converse fails (split and corrected extensions collide).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CompressedShape {
    pub open_label: String,
    pub e_minus: usize,
    pub e_zero: usize,
    pub a_dim: usize,
    pub b_dim: usize,
    pub rank_alpha: usize,
    pub rank_beta: usize,
    pub rank_gamma: usize,
}

pub fn compressed_shape(z: &ZigZag) -> CompressedShape {
    CompressedShape {
        open_label: z.open_label().to_string(),
        e_minus: z.e_minus(),
        e_zero: z.e_zero(),
        a_dim: z.a_dim(),
        b_dim: z.b_dim(),
        rank_alpha: z.alpha().rank(),
        rank_beta: z.beta().rank(),
        rank_gamma: z.gamma().rank(),
    }
}

impl CompressedShape {
    /// Componentwise sum; matches the shape of a direct sum.
    pub fn add(&self, other: &CompressedShape) -> CompressedShape {
        CompressedShape {
            open_label: sum_label(&self.open_label, &other.open_label),
            e_minus: self.e_minus + other.e_minus,
            e_zero: self.e_zero + other.e_zero,
            a_dim: self.a_dim + other.a_dim,
            b_dim: self.b_dim + other.b_dim,
            rank_alpha: self.rank_alpha + other.rank_alpha,
            rank_beta: self.rank_beta + other.rank_beta,
            rank_gamma: self.rank_gamma + other.rank_gamma,
        }
    }
}

impl fmt::Display for CompressedShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: ({},{},{},{}; ranks {},{},{})",
            self.open_label,
            self.e_minus,
            self.e_zero,
            self.a_dim,
            self.b_dim,
            self.rank_alpha,
            self.rank_beta,
            self.rank_gamma
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zigzag::{direct_sum, std_corrected, std_ic, std_skyscraper};

    #[test]
    fn table_one_shapes() {
        let p = compressed_shape(&std_corrected("Q_U[3]", 1, 1));
        assert_eq!(p.to_string(), "Q_U[3]: (1,1,1,1; ranks 0,1,0)");
        let ic = compressed_shape(&std_ic("Q_U[3]", 1, 1));
        assert_eq!(ic.to_string(), "Q_U[3]: (1,1,0,0; ranks 0,0,0)");
        let split = direct_sum(&std_ic("Q_U[3]", 1, 1), &std_skyscraper(1).unwrap());
        assert_eq!(compressed_shape(&split), p);
    }

    #[test]
    fn shapes_add_under_direct_sum() {
        let z1 = std_corrected("L", 2, 1);
        let z2 = std_skyscraper(3).unwrap();
        assert_eq!(
            compressed_shape(&direct_sum(&z1, &z2)),
            compressed_shape(&z1).add(&compressed_shape(&z2))
        );
    }
}
