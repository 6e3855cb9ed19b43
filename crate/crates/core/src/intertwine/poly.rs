use std::collections::BTreeMap;

use crate::linalg::Rational;

/// Exponent vector as sorted `(variable, exponent)` pairs with exponent > 0.
type Monomial = Vec<(u32, u32)>;

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    /// `sum_v coeffs[v] * x_v`.
    pub fn linear(coeffs: &[(u32, Rational)]) -> Self {
        let mut p = Poly::zero();
        for (v, c) in coeffs {
            p.add_term(vec![(*v, 1)], c.clone());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    /// Variables occurring with a nonzero coefficient, ascending.
    pub fn variables(&self) -> Vec<u32> {
        let mut vars: Vec<u32> = self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| *v)).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(mul_monomials(m1, m2), c1 * c2);
            }
        }
        out
    }

    /// Substitutes `x_var = value`.
    pub fn substitute(&self, var: u32, value: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            match m.iter().position(|(v, _)| *v == var) {
                Some(pos) => {
                    let mut reduced = m.clone();
                    let (_, e) = reduced.remove(pos);
                    out.add_term(reduced, c * &value.pow(e));
                }
                None => out.add_term(m.clone(), c.clone()),
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m {
                t *= &point[*v as usize].pow(*e);
            }
            acc += &t;
        }
        acc
    }
}

fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Determinant of a square matrix of polynomials by Laplace expansion over
/// column subsets (`n * 2^n` products).
pub fn determinant(entries: &[Vec<Poly>]) -> Poly {
    let n = entries.len();
    if n == 0 {
        return Poly::constant(Rational::one());
    }
    assert!(n <= 20, "symbolic determinant limited to 20x20");
    // minors[S] = det(rows 0..|S|, columns S)
    let mut minors: Vec<Option<Poly>> = vec![None; 1 << n];
    minors[0] = Some(Poly::constant(Rational::one()));
    let mut subsets: Vec<usize> = (1..(1usize << n)).collect();
    subsets.sort_by_key(|s| s.count_ones());
    for s in subsets {
        let k = s.count_ones() as usize;
        let row = &entries[k - 1];
        let mut acc = Poly::zero();
        let mut idx = 0;
        for j in 0..n {
            if s & (1 << j) == 0 {
                continue;
            }
            let sub = minors[s & !(1 << j)].as_ref().expect("smaller subsets first");
            if !row[j].is_zero() && !sub.is_zero() {
                let term = row[j].mul(sub);
                acc = if (k - 1 + idx).is_multiple_of(2) { acc.add(&term) } else { acc.add(&term.neg()) };
            }
            idx += 1;
        }
        minors[s] = Some(acc);
    }
    minors[(1 << n) - 1].take().expect("full subset computed")
}
