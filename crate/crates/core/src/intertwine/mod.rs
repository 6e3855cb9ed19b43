//! Search for invertible solutions of linear matrix equations.
//!
//! A [`LinearProblem`] declares unknown matrix blocks and homogeneous linear
//! constraints between them (`sum L_k X_k R_k = 0`). The solution set is a
//! linear space with basis `K_1..K_d`; a generic element is `sum t_i K_i`.
//! [`LinearProblem::search`] looks for parameters `t` at which every block
//! marked invertible has nonzero determinant:
//!
//! 1. a few fixed parameter points are tried directly;
//! 2. otherwise the determinant of each invertible block is expanded as an
//!    exact polynomial in `t`. If one of them is the zero polynomial no
//!    invertible solution exists and that block is returned as the
//!    certificate. If none is zero, the parameters are fixed one at a time
//!    from the grid `{0, 1, ..., D}`, `D` the sum of the block sizes, keeping
//!    every determinant a nonzero polynomial; each determinant has degree at
//!    most its block size in any single variable, so some grid value always
//!    survives.
//!
//! Every returned solution is re-checked exactly before it leaves this module.

mod poly;

pub use poly::{determinant, Poly};

use crate::linalg::{kernel_basis, QMatrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockId(usize);

#[derive(Debug, Clone)]
struct Block {
    rows: usize,
    cols: usize,
    invertible: bool,
    offset: usize,
}

/// One term `left * X * right` of a constraint; `None` stands for the identity.
pub struct Term<'a> {
    pub left: Option<&'a QMatrix>,
    pub block: BlockId,
    pub right: Option<&'a QMatrix>,
    pub negate: bool,
}

impl<'a> Term<'a> {
    pub fn new(left: Option<&'a QMatrix>, block: BlockId, right: Option<&'a QMatrix>) -> Self {
        Term { left, block, right, negate: false }
    }

    pub fn negated(mut self) -> Self {
        self.negate = !self.negate;
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct LinearProblem {
    blocks: Vec<Block>,
    unknowns: usize,
    equations: Vec<Vec<(usize, Rational)>>,
}

/// How a search ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// One matrix per declared block, in declaration order.
    Found(Vec<QMatrix>),
    /// The determinant of this block vanishes identically on the solution
    /// space, so no solution makes it invertible.
    Impossible { vanishing_block: BlockId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Search {
    pub outcome: Outcome,
    /// Dimension of the solution space.
    pub space_dim: usize,
    /// Whether the symbolic determinant route was needed.
    pub symbolic: bool,
}

impl LinearProblem {
    pub fn new() -> Self {
        LinearProblem::default()
    }

    pub fn add_block(&mut self, rows: usize, cols: usize, invertible: bool) -> BlockId {
        assert!(!invertible || rows == cols, "invertible blocks must be square");
        self.blocks.push(Block {
            rows,
            cols,
            invertible,
            offset: self.unknowns,
        });
        self.unknowns += rows * cols;
        BlockId(self.blocks.len() - 1)
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    fn var(&self, id: BlockId, i: usize, j: usize) -> usize {
        let b = &self.blocks[id.0];
        b.offset + i * b.cols + j
    }

    /// Adds the constraint `sum_k terms[k] = 0`. All terms must produce the
    /// same shape.
    pub fn constrain(&mut self, terms: &[Term<'_>]) {
        let mut shape = None;
        let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
        for term in terms {
            let b = self.blocks[term.block.0].clone();
            let out_rows = term.left.map_or(b.rows, QMatrix::rows);
            let out_cols = term.right.map_or(b.cols, QMatrix::cols);
            if let Some(left) = term.left {
                assert_eq!(left.cols(), b.rows, "left factor does not fit the block");
            }
            if let Some(right) = term.right {
                assert_eq!(right.rows(), b.cols, "right factor does not fit the block");
            }
            match shape {
                None => {
                    shape = Some((out_rows, out_cols));
                    rows = vec![Vec::new(); out_rows * out_cols];
                }
                Some(s) => assert_eq!(s, (out_rows, out_cols), "terms of different shapes"),
            }
            let l = |p: usize, i: usize| -> Rational {
                match term.left {
                    Some(m) => m.get(p, i).clone(),
                    None if p == i => Rational::one(),
                    None => Rational::zero(),
                }
            };
            let r = |j: usize, q: usize| -> Rational {
                match term.right {
                    Some(m) => m.get(j, q).clone(),
                    None if j == q => Rational::one(),
                    None => Rational::zero(),
                }
            };
            for p in 0..out_rows {
                for i in 0..b.rows {
                    let lp = l(p, i);
                    if lp.is_zero() {
                        continue;
                    }
                    for j in 0..b.cols {
                        for q in 0..out_cols {
                            let rq = r(j, q);
                            if rq.is_zero() {
                                continue;
                            }
                            let mut c = &lp * &rq;
                            if term.negate {
                                c = -c;
                            }
                            rows[p * out_cols + q].push((self.var(term.block, i, j), c));
                        }
                    }
                }
            }
        }
        self.equations.extend(rows.into_iter().filter(|r| !r.is_empty()));
    }

    /// Forces `X[i][j] = 0`.
    pub fn fix_zero(&mut self, block: BlockId, i: usize, j: usize) {
        let v = self.var(block, i, j);
        self.equations.push(vec![(v, Rational::one())]);
    }

    /// Forces `X = s * I`, with `scalar` a `1 x 1` block.
    pub fn tie_to_scalar(&mut self, block: BlockId, scalar: BlockId) {
        let b = self.blocks[block.0].clone();
        let s = self.var(scalar, 0, 0);
        for i in 0..b.rows {
            for j in 0..b.cols {
                let mut eq = vec![(self.var(block, i, j), Rational::one())];
                if i == j {
                    eq.push((s, -Rational::one()));
                }
                self.equations.push(eq);
            }
        }
    }

    /// Basis of the solution space, one column per basis vector.
    pub fn solution_basis(&self) -> QMatrix {
        let mut system = QMatrix::zeros(self.equations.len(), self.unknowns);
        for (r, eq) in self.equations.iter().enumerate() {
            for (v, c) in eq {
                let cur = system.get(r, *v) + c;
                system.set(r, *v, cur);
            }
        }
        kernel_basis(&system).basis().clone()
    }

    fn blocks_at(&self, x: &[Rational]) -> Vec<QMatrix> {
        self.blocks
            .iter()
            .map(|b| {
                QMatrix::from_entries(b.rows, b.cols, x[b.offset..b.offset + b.rows * b.cols].to_vec())
                    .expect("block slice has the block's size")
            })
            .collect()
    }

    fn all_invertible(&self, mats: &[QMatrix]) -> bool {
        self.blocks
            .iter()
            .zip(mats)
            .all(|(b, m)| !b.invertible || !m.determinant().is_zero())
    }

    fn satisfies_equations(&self, x: &[Rational]) -> bool {
        self.equations.iter().all(|eq| {
            eq.iter()
                .fold(Rational::zero(), |acc, (v, c)| acc + c * &x[*v])
                .is_zero()
        })
    }

    pub fn search(&self) -> Search {
        self.run(true)
    }

    /// Same as [`search`](Self::search) but always takes the symbolic route.
    pub fn search_symbolic(&self) -> Search {
        self.run(false)
    }

    fn run(&self, try_fixed_points: bool) -> Search {
        let basis = self.solution_basis();
        let d = basis.cols();
        let point = |t: &[Rational]| basis.apply(t).expect("parameter count matches basis");

        let candidates = if try_fixed_points { fixed_points(d) } else { Vec::new() };
        for t in candidates {
            let x = point(&t);
            let mats = self.blocks_at(&x);
            if self.all_invertible(&mats) {
                debug_assert!(self.satisfies_equations(&x));
                return Search {
                    outcome: Outcome::Found(mats),
                    space_dim: d,
                    symbolic: false,
                };
            }
        }

        // symbolic route
        let mut dets: Vec<(usize, Poly)> = Vec::new();
        for (idx, b) in self.blocks.iter().enumerate() {
            if !b.invertible {
                continue;
            }
            let entries: Vec<Vec<Poly>> = (0..b.rows)
                .map(|i| {
                    (0..b.cols)
                        .map(|j| {
                            let row = b.offset + i * b.cols + j;
                            let coeffs: Vec<(u32, Rational)> = (0..d)
                                .filter(|&k| !basis.get(row, k).is_zero())
                                .map(|k| (k as u32, basis.get(row, k).clone()))
                                .collect();
                            Poly::linear(&coeffs)
                        })
                        .collect()
                })
                .collect();
            let det = determinant(&entries);
            if det.is_zero() {
                return Search {
                    outcome: Outcome::Impossible {
                        vanishing_block: BlockId(idx),
                    },
                    space_dim: d,
                    symbolic: true,
                };
            }
            dets.push((idx, det));
        }

        let grid_size: i64 = self
            .blocks
            .iter()
            .filter(|b| b.invertible)
            .map(|b| b.rows as i64)
            .sum::<i64>()
            + 1;
        let mut t = vec![Rational::zero(); d];
        for (v, slot) in t.iter_mut().enumerate() {
            let var = v as u32;
            if !dets.iter().any(|(_, p)| p.variables().contains(&var)) {
                continue;
            }
            let chosen = (0..grid_size).find_map(|c| {
                let c = Rational::from_integer(c);
                let substituted: Vec<(usize, Poly)> =
                    dets.iter().map(|(i, p)| (*i, p.substitute(var, &c))).collect();
                substituted.iter().all(|(_, p)| !p.is_zero()).then_some((c, substituted))
            });
            let (c, substituted) = chosen.expect("a grid larger than the degree always has a good value");
            *slot = c;
            dets = substituted;
        }
        let x = point(&t);
        let mats = self.blocks_at(&x);
        assert!(
            self.all_invertible(&mats) && self.satisfies_equations(&x),
            "guided grid search produced a non-solution"
        );
        Search {
            outcome: Outcome::Found(mats),
            space_dim: d,
            symbolic: true,
        }
    }
}

fn fixed_points(d: usize) -> Vec<Vec<Rational>> {
    let ones = vec![Rational::one(); d];
    let ramp: Vec<Rational> = (0..d).map(|i| Rational::from_integer(i as i64 + 1)).collect();
    let squares: Vec<Rational> = (0..d).map(|i| Rational::from_integer(((i * i) % 31) as i64 + 2)).collect();
    let alternating: Vec<Rational> = (0..d)
        .map(|i| Rational::from_integer(if i % 2 == 0 { i as i64 + 3 } else { -(i as i64) - 1 }))
        .collect();
    vec![ones, ramp, squares, alternating]
}
