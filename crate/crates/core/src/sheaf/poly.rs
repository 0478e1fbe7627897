use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

/// All monomials of total degree `degree` in `nvars` variables, lexicographically decreasing.
pub fn monomials(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn go(nvars: usize, degree: u32, prefix: &mut Monomial, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            go(nvars, degree - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(nvars, degree, &mut Vec::new(), &mut out);
    out
}

/// Monomials in `nx + ny` variables with degree `a` in the first `nx` and `b` in the rest.
pub fn bigraded_monomials(nx: usize, ny: usize, a: u32, b: u32) -> Vec<Monomial> {
    let xs = monomials(nx, a);
    let ys = monomials(ny, b);
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in &xs {
        for y in &ys {
            let mut m = x.clone();
            m.extend_from_slice(y);
            out.push(m);
        }
    }
    out
}

/// Polynomial with rational coefficients in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], Rational::one())
    }

    pub fn monomial(exps: Monomial, coeff: Rational) -> Self {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, coeff);
        p
    }

    /// `Σ coeffs[i] · var_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exps: Monomial, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in other.terms() {
            self.add_term(m.clone(), v.clone() * c.clone());
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                let m = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(m, x.clone() * y.clone());
            }
        }
        out
    }

    /// Replaces variable `i` by the polynomial `images[i]` (all in a common ring).
    pub fn substitute(&self, images: &[Poly], target_nvars: usize) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let mut out = Poly::zero(target_nvars);
        // powers are cached per variable
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target_nvars), p.clone()]).collect();
        for (m, c) in self.terms() {
            let mut term = Poly::monomial(vec![0; target_nvars], c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            out.add_scaled(&term, &Rational::one());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(0, 0), vec![Vec::<u32>::new()]);
        assert!(monomials(0, 1).is_empty());
        assert_eq!(bigraded_monomials(1, 2, 2, 1).len(), 2);
    }

    #[test]
    fn substitution_expands_powers() {
        // x² with x ↦ u + v
        let p = Poly::monomial(vec![2], rat(1));
        let img = Poly::linear(&[rat(1), rat(1)]);
        let q = p.substitute(&[img], 2);
        assert_eq!(q.coeff(&vec![1, 1]), rat(2));
        assert_eq!(q.coeff(&vec![2, 0]), rat(1));
        assert_eq!(q.terms().count(), 3);
    }
}
