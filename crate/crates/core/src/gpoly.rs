//! Toric g- and h-polynomials of Eulerian posets and the graded dimensions of
//! combinatorial intersection cohomology they encode.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::GradedDims;
use crate::lattice::{ConePair, FaceId, FacePoset};

/// Integer polynomial in one variable `t`; zero coefficients are not stored.
#[derive(Clone, Default, PartialEq, Eq, Serialize)]
pub struct IntPolynomial {
    coeffs: BTreeMap<usize, i64>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial::default()
    }

    pub fn one() -> Self {
        Self::from_coeffs(&[1])
    }

    /// `Σ coeffs[i] tⁱ`.
    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        let mut p = IntPolynomial::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(i, c);
        }
        p
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    fn add_term(&mut self, i: usize, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(i).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&i);
        }
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, c);
        }
        out
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut out = IntPolynomial::zero();
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                out.add_term(i + j, a * b);
            }
        }
        out
    }

    /// `(t − 1)^k`.
    pub fn t_minus_one_pow(k: usize) -> IntPolynomial {
        let base = IntPolynomial::from_coeffs(&[-1, 1]);
        (0..k).fold(IntPolynomial::one(), |acc, _| acc.mul(&base))
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.values().all(|&c| c >= 0)
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}t"),
                _ => format!("{c}t^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A finite graded poset given by ranks and an explicit order relation.
#[derive(Clone, Debug)]
pub struct Poset {
    ranks: Vec<usize>,
    le: Vec<Vec<bool>>,
}

impl Poset {
    /// `le[i][j]` must be a partial order compatible with the ranks.
    pub fn new(ranks: Vec<usize>, le: Vec<Vec<bool>>) -> Self {
        assert_eq!(ranks.len(), le.len());
        Poset { ranks, le }
    }

    /// The face lattice of a cone, ranked by dimension.
    pub fn of_faces(faces: &FacePoset) -> Self {
        let ranks = faces.faces().iter().map(|f| f.dim).collect();
        let le = faces.ids().map(|a| faces.ids().map(|b| faces.le(a, b)).collect()).collect();
        Poset { ranks, le }
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank(&self, x: usize) -> usize {
        self.ranks[x]
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.le[x][y]
    }

    pub fn interval(&self, lo: usize, hi: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| self.le(lo, z) && self.le(z, hi)).collect()
    }

    /// `Σ_{lo ≤ z ≤ hi} (−1)^{ρ(z)} = 0` on every subinterval of positive length.
    pub fn interval_is_eulerian(&self, lo: usize, hi: usize) -> bool {
        let elems = self.interval(lo, hi);
        elems.iter().all(|&a| {
            elems.iter().filter(|&&b| b != a && self.le(a, b)).all(|&b| {
                let s: i64 = self
                    .interval(a, b)
                    .iter()
                    .map(|&z| if self.rank(z).is_multiple_of(2) { 1 } else { -1 })
                    .sum();
                s == 0
            })
        })
    }
}

/// Memoizing evaluator of `g([lo, hi])` and `h([lo, hi])`.
pub struct GPolynomials<'a> {
    poset: &'a Poset,
    cache: HashMap<(usize, usize), IntPolynomial>,
}

impl<'a> GPolynomials<'a> {
    pub fn new(poset: &'a Poset) -> Self {
        GPolynomials {
            poset,
            cache: HashMap::new(),
        }
    }

    /// Stanley's h-polynomial `Σ_{lo ≤ x < hi} g([lo,x]) (t−1)^{d−ρ(x)}` with rank `d + 1`.
    pub fn h(&mut self, lo: usize, hi: usize) -> Result<IntPolynomial> {
        let n = self.relative_rank(lo, hi)?;
        if n == 0 {
            return Ok(IntPolynomial::one());
        }
        let d = n - 1;
        let mut h = IntPolynomial::zero();
        for x in self.poset.interval(lo, hi) {
            if x == hi {
                continue;
            }
            let rho = self.poset.rank(x) - self.poset.rank(lo);
            let g = self.g(lo, x)?;
            h = h.add(&g.mul(&IntPolynomial::t_minus_one_pow(d - rho)));
        }
        Ok(h)
    }

    /// `g = h₀ + Σ_{i=1}^{⌊d/2⌋} (hᵢ − hᵢ₋₁) tⁱ`, with `g = 1` on a rank-0 interval.
    pub fn g(&mut self, lo: usize, hi: usize) -> Result<IntPolynomial> {
        if let Some(g) = self.cache.get(&(lo, hi)) {
            return Ok(g.clone());
        }
        let n = self.relative_rank(lo, hi)?;
        let g = if n == 0 {
            IntPolynomial::one()
        } else {
            if !self.poset.interval_is_eulerian(lo, hi) {
                return Err(Error::NotEulerian);
            }
            let d = n - 1;
            let h = self.h(lo, hi)?;
            let mut coeffs = vec![h.coeff(0)];
            for i in 1..=d / 2 {
                coeffs.push(h.coeff(i) - h.coeff(i - 1));
            }
            IntPolynomial::from_coeffs(&coeffs)
        };
        self.cache.insert((lo, hi), g.clone());
        Ok(g)
    }

    fn relative_rank(&self, lo: usize, hi: usize) -> Result<usize> {
        if !self.poset.le(lo, hi) {
            return Err(Error::Precondition("interval endpoints are not comparable".into()));
        }
        Ok(self.poset.rank(hi) - self.poset.rank(lo))
    }
}

/// g-polynomial of the interval `[lo, hi]` of a face lattice.
pub fn g_polynomial(faces: &FacePoset, lo: FaceId, hi: FaceId) -> Result<IntPolynomial> {
    let poset = Poset::of_faces(faces);
    GPolynomials::new(&poset).g(lo.0, hi.0)
}

/// Graded dimensions of `IH(θ)` and `IH(θ, ∂θ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IHDims {
    pub absolute: GradedDims,
    pub relative: GradedDims,
}

impl IHDims {
    /// Absolute dims from the g-coefficients; relative ones by `relative_k = absolute_{dim − k}`.
    pub fn from_g(g: &IntPolynomial, dim: usize) -> IHDims {
        let absolute: GradedDims = g.terms().map(|(i, c)| (i as i64, c.max(0) as usize)).collect();
        let relative = absolute.map_degrees(|k| dim as i64 - k);
        IHDims { absolute, relative }
    }
}

pub fn ih_dims(faces: &FacePoset, theta: FaceId) -> Result<IHDims> {
    let g = g_polynomial(faces, faces.zero(), theta)?;
    Ok(IHDims::from_g(&g, faces.face(theta).dim))
}

/// `absolute ⊆ [0, dim/2]`, `relative ⊆ [dim/2, dim]`, strict at `dim/2` when `dim > 0`.
pub fn degree_bounds_hold(dim: usize, dims: &IHDims) -> bool {
    let dim = dim as i64;
    if dim == 0 {
        return dims.absolute.support().all(|k| k == 0) && dims.relative.support().all(|k| k == 0);
    }
    dims.absolute.support().all(|k| k >= 0 && 2 * k < dim) && dims.relative.support().all(|k| k <= dim && 2 * k > dim)
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceBoundVerdict {
    /// `"primal"` or `"dual"`.
    pub side: &'static str,
    pub face: usize,
    pub dim: usize,
    pub g: Vec<i64>,
    pub dims: IHDims,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeBoundsReport {
    pub faces: Vec<FaceBoundVerdict>,
    pub pass: bool,
}

/// Checks the intersection-cohomology degree bounds on every face of both cones.
pub fn verify_degree_bounds(pair: &ConePair) -> Result<DegreeBoundsReport> {
    let mut faces = Vec::new();
    for (side, poset) in [("primal", pair.primal_faces()), ("dual", pair.dual_faces())] {
        let p = Poset::of_faces(poset);
        let mut gp = GPolynomials::new(&p);
        for id in poset.ids() {
            let g = gp.g(poset.zero().0, id.0)?;
            let dim = poset.face(id).dim;
            let dims = IHDims::from_g(&g, dim);
            let pass = g.has_nonnegative_coeffs() && degree_bounds_hold(dim, &dims);
            let coeffs = (0..=g.degree().unwrap_or(0)).map(|i| g.coeff(i)).collect();
            faces.push(FaceBoundVerdict {
                side,
                face: id.0,
                dim,
                g: coeffs,
                dims,
                pass,
            });
        }
    }
    let pass = faces.iter().all(|f| f.pass);
    Ok(DegreeBoundsReport { faces, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Cone, LatticePoint};

    fn polytope_faces(v: &[&[i64]]) -> FacePoset {
        let pts: Vec<LatticePoint> = v.iter().map(|c| LatticePoint(c.to_vec())).collect();
        FacePoset::of_cone(&Cone::over_polytope(&pts).unwrap())
    }

    #[test]
    fn t_minus_one_powers() {
        assert_eq!(IntPolynomial::t_minus_one_pow(2), IntPolynomial::from_coeffs(&[1, -2, 1]));
        assert_eq!(IntPolynomial::t_minus_one_pow(0), IntPolynomial::one());
    }

    #[test]
    fn square_h_and_g() {
        let f = polytope_faces(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        let p = Poset::of_faces(&f);
        let mut gp = GPolynomials::new(&p);
        assert_eq!(gp.h(0, f.top().0).unwrap(), IntPolynomial::from_coeffs(&[1, 2, 1]));
        assert_eq!(gp.g(0, f.top().0).unwrap(), IntPolynomial::from_coeffs(&[1, 1]));
    }

    #[test]
    fn pentagon_h_and_g() {
        let f = polytope_faces(&[&[1, 0], &[0, 1], &[-1, 1], &[-1, 0], &[0, -1]]);
        assert_eq!(f.len(), 12);
        let p = Poset::of_faces(&f);
        let mut gp = GPolynomials::new(&p);
        assert_eq!(gp.h(0, f.top().0).unwrap(), IntPolynomial::from_coeffs(&[1, 3, 1]));
        assert_eq!(gp.g(0, f.top().0).unwrap(), IntPolynomial::from_coeffs(&[1, 2]));
    }

    #[test]
    fn ih_dims_of_square_cone() {
        let f = polytope_faces(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        let ih = ih_dims(&f, f.top()).unwrap();
        assert_eq!(ih.absolute, GradedDims::from([(0, 1), (1, 1)]));
        assert_eq!(ih.relative, GradedDims::from([(2, 1), (3, 1)]));
        let z = ih_dims(&f, f.zero()).unwrap();
        assert_eq!(z.absolute, GradedDims::from([(0, 1)]));
        assert_eq!(z.relative, GradedDims::from([(0, 1)]));
    }

    #[test]
    fn non_eulerian_chain_is_rejected() {
        // 0 < a < 1 : a chain of rank 2 is not Eulerian
        let p = Poset::new(
            vec![0, 1, 2],
            vec![vec![true, true, true], vec![false, true, true], vec![false, false, true]],
        );
        assert_eq!(GPolynomials::new(&p).g(0, 2), Err(Error::NotEulerian));
    }

    #[test]
    fn corrupted_dims_fail_bounds() {
        let bad = IHDims {
            absolute: GradedDims::from([(0, 1), (2, 1)]),
            relative: GradedDims::from([(1, 1), (3, 1)]),
        };
        assert!(!degree_bounds_hold(3, &bad));
        let good = IHDims::from_g(&IntPolynomial::from_coeffs(&[1, 1]), 3);
        assert!(degree_bounds_hold(3, &good));
    }
}
