use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::coefficients::CoefficientFunction;
use crate::error::{Error, Result};
use crate::graded::GradedDims;
use crate::lattice::{FaceId, GorensteinPair, LatticePoint};
use crate::linalg::{SparseEchelon, SparseMatrix, SparseVec};
use crate::scalar::{rat, Rational};

/// Finite combination of monomials `[m]`.
pub type RingElement = BTreeMap<LatticePoint, Rational>;

/// `μ(m)` for a functional given by rational coordinates.
pub fn pair_with(mu: &[Rational], m: &LatticePoint) -> Rational {
    mu.iter()
        .zip(&m.0)
        .filter(|(_, &c)| c != 0)
        .fold(Rational::zero(), |acc, (a, &c)| acc + a.clone() * rat(c))
}

/// Coordinate functionals at the pivot coordinates of `θ`: a basis of the linear functions on its span.
pub fn pivot_functionals(pair: &GorensteinPair, theta: FaceId) -> Vec<Vec<Rational>> {
    let r = pair.rank();
    pair.faces()
        .face(theta)
        .coordinate_pivots
        .iter()
        .map(|&p| (0..r).map(|i| rat((i == p) as i64)).collect())
        .collect()
}

/// `Σ_{m ∈ Δ ∩ θ} f(m) μ(m) [m]` for each functional `μ`.
pub fn log_derivatives_for(
    pair: &GorensteinPair,
    theta: FaceId,
    f: &CoefficientFunction,
    functionals: &[Vec<Rational>],
) -> Vec<RingElement> {
    let pts = pair.face_points(theta, 1, false);
    functionals
        .iter()
        .map(|mu| {
            pts.iter()
                .filter_map(|m| {
                    let c = f.get(m) * pair_with(mu, m);
                    (!c.is_zero()).then(|| (m.clone(), c))
                })
                .collect()
        })
        .collect()
}

/// The generators of `I_{f,θ}` for the pivot basis of linear functions on `span θ`.
pub fn log_derivative_elements(pair: &GorensteinPair, theta: FaceId, f: &CoefficientFunction) -> Vec<RingElement> {
    log_derivatives_for(pair, theta, f, &pivot_functionals(pair, theta))
}

/// Graded pieces of the semigroup ring of a face up to a fixed degree.
pub struct FaceRing {
    pub theta: FaceId,
    pub dim: usize,
    points: Vec<Vec<LatticePoint>>,
    interior: Vec<Vec<LatticePoint>>,
    index: Vec<HashMap<LatticePoint, usize>>,
}

impl FaceRing {
    pub fn new(pair: &GorensteinPair, theta: FaceId, max_degree: usize) -> FaceRing {
        let points: Vec<Vec<LatticePoint>> = (0..=max_degree).map(|k| pair.face_points(theta, k as i64, false)).collect();
        let interior = (0..=max_degree).map(|k| pair.face_points(theta, k as i64, true)).collect();
        let index = points
            .iter()
            .map(|ps| ps.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect())
            .collect();
        FaceRing {
            theta,
            dim: pair.faces().face(theta).dim,
            points,
            interior,
            index,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self, k: usize) -> &[LatticePoint] {
        &self.points[k]
    }

    pub fn interior(&self, k: usize) -> &[LatticePoint] {
        &self.interior[k]
    }

    pub fn index_of(&self, k: usize, p: &LatticePoint) -> Option<usize> {
        self.index[k].get(p).copied()
    }

    /// Rows `g·[c]` spanning the degree-`k` part of the ideal generated by `gens` (all of degree one).
    pub fn ideal_rows(&self, gens: &[RingElement], k: usize) -> Vec<SparseVec<Rational>> {
        if k == 0 {
            return Vec::new();
        }
        let mut rows = Vec::new();
        for g in gens {
            for c in &self.points[k - 1] {
                let mut row: SparseVec<Rational> = g
                    .iter()
                    .map(|(m, v)| (self.index[k][&(m + c)], v.clone()))
                    .collect();
                row.sort_by_key(|e| e.0);
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
        rows
    }

    pub fn ideal_rank(&self, gens: &[RingElement], k: usize) -> usize {
        SparseMatrix::from_rows(self.points[k].len(), self.ideal_rows(gens, k)).rank()
    }
}

/// Graded dimensions of `ℂ[θ]`, of `I_{f,θ}` and of their quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedQuotient {
    pub face: usize,
    pub dim: usize,
    pub max_degree: usize,
    pub ring: GradedDims,
    pub ideal: GradedDims,
    pub quotient: GradedDims,
}

pub fn quotient_dims(pair: &GorensteinPair, theta: FaceId, f: &CoefficientFunction, max_degree: usize) -> GradedQuotient {
    quotient_dims_with(pair, theta, &log_derivative_elements(pair, theta, f), max_degree)
}

/// Quotient dimensions for an explicit generating set of the ideal.
pub fn quotient_dims_with(pair: &GorensteinPair, theta: FaceId, gens: &[RingElement], max_degree: usize) -> GradedQuotient {
    let ring = FaceRing::new(pair, theta, max_degree);
    let mut out = GradedQuotient {
        face: theta.0,
        dim: ring.dim,
        max_degree,
        ring: GradedDims::new(),
        ideal: GradedDims::new(),
        quotient: GradedDims::new(),
    };
    for k in 0..=max_degree {
        let n = ring.points(k).len();
        let i = ring.ideal_rank(gens, k);
        out.ring.set(k as i64, n);
        out.ideal.set(k as i64, i);
        out.quotient.set(k as i64, n - i);
    }
    out
}

/// `R₁(f,θ)`: the image of the interior monomials in `ℂ[θ]/I_{f,θ}`, by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct R1Space {
    pub face: usize,
    pub dim: usize,
    pub max_degree: usize,
    pub dims: GradedDims,
    /// Interior monomials whose classes form a basis, by degree.
    pub representatives: BTreeMap<i64, Vec<LatticePoint>>,
}

impl R1Space {
    pub fn total(&self) -> usize {
        self.dims.total()
    }
}

pub fn r1(pair: &GorensteinPair, theta: FaceId, f: &CoefficientFunction, max_degree: usize) -> R1Space {
    let ring = FaceRing::new(pair, theta, max_degree);
    let gens = log_derivative_elements(pair, theta, f);
    let mut dims = GradedDims::new();
    let mut representatives = BTreeMap::new();
    for k in 0..=max_degree {
        let mut ech = SparseEchelon::new(ring.points(k).len());
        for row in ring.ideal_rows(&gens, k) {
            ech.insert(&row);
        }
        let reps: Vec<LatticePoint> = ring
            .interior(k)
            .iter()
            .filter(|p| ech.insert(&vec![(ring.index_of(k, p).expect("interior point"), rat(1))]))
            .cloned()
            .collect();
        dims.set(k as i64, reps.len());
        if !reps.is_empty() {
            representatives.insert(k as i64, reps);
        }
    }
    R1Space {
        face: theta.0,
        dim: ring.dim,
        max_degree,
        dims,
        representatives,
    }
}

/// `R₁(f,θ)` for every face, computed up to degree `dim θ + 2`.
pub fn r1_all(pair: &GorensteinPair, f: &CoefficientFunction) -> Vec<R1Space> {
    let ids: Vec<FaceId> = pair.faces().ids().collect();
    ids.par_iter()
        .map(|&t| r1(pair, t, f, pair.faces().face(t).dim + 2))
        .collect()
}

/// Coefficients of `(1 − t)^d · Σ h_k t^k` up to degree `max`.
fn times_one_minus_t_pow(h: &GradedDims, d: usize, max: usize) -> Vec<i64> {
    let mut binom = vec![1i64];
    for _ in 0..d {
        let mut next = vec![1i64; binom.len() + 1];
        for i in 1..binom.len() {
            next[i] = binom[i - 1] + binom[i];
        }
        binom = next;
    }
    (0..=max)
        .map(|k| {
            (0..=k.min(d))
                .map(|j| {
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * binom[j] * h.get((k - j) as i64) as i64
                })
                .sum()
        })
        .collect()
}

/// Why a face fails the nondegeneracy test, if it does.
fn face_defect(pair: &GorensteinPair, theta: FaceId, f: &CoefficientFunction) -> Option<String> {
    let d = pair.faces().face(theta).dim;
    let q = quotient_dims(pair, theta, f, d + 2);
    let expect = times_one_minus_t_pow(&q.ring, d, d + 2);
    for (k, e) in expect.iter().enumerate() {
        let got = q.quotient.get(k as i64) as i64;
        if got != *e {
            return Some(format!("face {}: quotient has dimension {got} in degree {k}, expected {e}", theta.0));
        }
    }
    None
}

/// The Hilbert series of `ℂ[θ]/I_{f,θ}` is `(1−t)^{dim θ}` times that of `ℂ[θ]`, on every face.
pub fn is_nondegenerate(pair: &GorensteinPair, f: &CoefficientFunction) -> bool {
    check_nondegenerate(pair, f).is_ok()
}

pub fn check_nondegenerate(pair: &GorensteinPair, f: &CoefficientFunction) -> Result<()> {
    let ids: Vec<FaceId> = pair.faces().ids().collect();
    let defects: Vec<String> = ids.par_iter().filter_map(|&t| face_defect(pair, t, f)).collect();
    match defects.into_iter().next() {
        None => Ok(()),
        Some(msg) => Err(Error::DegenerateCoefficients(msg)),
    }
}

/// Seeded sampling of a nondegenerate coefficient function, with bounded retries.
pub fn random_nondegenerate(pair: &GorensteinPair, seed: u64, tries: usize) -> Result<CoefficientFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tries {
        let f = CoefficientFunction::random(pair.delta(), &mut rng);
        if is_nondegenerate(pair, &f) {
            return Ok(f);
        }
    }
    Err(Error::DegenerateCoefficients(format!("no nondegenerate sample in {tries} tries from seed {seed}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<LatticePoint> {
        v.iter().map(|c| LatticePoint(c.to_vec())).collect()
    }

    fn triangle() -> GorensteinPair {
        GorensteinPair::from_polytope(&pts(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap()
    }

    fn fermat(p: &GorensteinPair) -> CoefficientFunction {
        let center = LatticePoint(vec![0, 0, 1]);
        let vals: Vec<_> = p.delta().iter().map(|m| (m.clone(), rat((m != &center) as i64))).collect();
        CoefficientFunction::new(p.delta(), vals).unwrap()
    }

    #[test]
    fn zero_face_has_no_generators() {
        let p = triangle();
        let f = fermat(&p);
        assert!(log_derivative_elements(&p, p.faces().zero(), &f).iter().all(|g| g.is_empty()));
        assert_eq!(log_derivative_elements(&p, p.faces().zero(), &f).len(), 0);
        assert_eq!(log_derivative_elements(&p, p.faces().top(), &f).len(), 3);
    }

    #[test]
    fn triangle_quotient_and_r1() {
        let p = triangle();
        let f = CoefficientFunction::constant(p.delta(), rat(1));
        let top = p.faces().top();
        let q = quotient_dims(&p, top, &f, 4);
        assert_eq!(q.quotient, GradedDims::from([(0, 1), (1, 1), (2, 1)]));
        let r = r1(&p, top, &f, 5);
        assert_eq!(r.dims, GradedDims::from([(1, 1), (2, 1)]));
        let z = r1(&p, p.faces().zero(), &f, 2);
        assert_eq!(z.dims, GradedDims::from([(0, 1)]));
    }

    #[test]
    fn ray_quotient_is_trivial() {
        let p = triangle();
        let f = fermat(&p);
        let ray = p.faces().ids().find(|&t| p.faces().face(t).dim == 1).unwrap();
        assert_eq!(quotient_dims(&p, ray, &f, 3).quotient, GradedDims::from([(0, 1)]));
        assert!(r1(&p, ray, &f, 3).dims.is_zero());
    }

    #[test]
    fn zero_function_gives_the_ring_itself() {
        let p = triangle();
        let f = CoefficientFunction::constant(p.delta(), rat(0));
        let q = quotient_dims(&p, p.faces().top(), &f, 3);
        assert_eq!(q.quotient, q.ring);
        assert!(!is_nondegenerate(&p, &f));
    }

    #[test]
    fn nondegeneracy_examples() {
        let p = triangle();
        assert!(is_nondegenerate(&p, &fermat(&p)));
        let v = LatticePoint(vec![1, 0, 1]);
        let single = CoefficientFunction::new(p.delta(), [(v, rat(1))]).unwrap();
        assert!(!is_nondegenerate(&p, &single));
    }

    #[test]
    fn hilbert_correction() {
        // ℂ[ray] has one point per degree; (1−t)·Σ t^k = 1
        let h: GradedDims = (0..5).map(|k| (k, 1)).collect();
        assert_eq!(times_one_minus_t_pow(&h, 1, 4), vec![1, 0, 0, 0, 0]);
    }
}
