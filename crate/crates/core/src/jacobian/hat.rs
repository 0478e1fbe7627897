use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use super::coefficients::CoefficientFunction;
use super::ring::{pair_with, pivot_functionals, r1, R1Space};
use crate::error::{Error, Result};
use crate::graded::GradedDims;
use crate::lattice::{FaceId, GorensteinPair, LatticePoint};
use crate::linalg::{SparseEchelon, SparseVec};
use crate::scalar::{rat, Rational, Scalar};

/// Finite combination of hat-monomials `\hat[c]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HatElement {
    pub terms: BTreeMap<LatticePoint, Rational>,
}

impl HatElement {
    pub fn monomial(c: LatticePoint) -> Self {
        HatElement {
            terms: BTreeMap::from([(c, rat(1))]),
        }
    }

    pub fn add_term(&mut self, c: LatticePoint, v: Rational) {
        let slot = self.terms.entry(c.clone()).or_insert_with(Rational::zero);
        *slot = slot.clone() + v;
        if slot.is_zero() {
            self.terms.remove(&c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest degree in the support.
    pub fn level(&self, pair: &GorensteinPair) -> Option<i64> {
        self.terms.keys().map(|c| pair.degree_m(c)).max()
    }
}

/// `μ·\hat[c] = Σ_{n ∈ Δ∩θ} g(n) μ(n) \hat[n+c] + μ(c) \hat[c]`, extended linearly.
pub fn hat_action(pair: &GorensteinPair, theta: FaceId, g: &CoefficientFunction, mu: &[Rational], v: &HatElement) -> HatElement {
    let delta = pair.face_points(theta, 1, false);
    let mut out = HatElement::default();
    for (c, a) in &v.terms {
        for n in &delta {
            let coef = g.get(n) * pair_with(mu, n);
            if !coef.is_zero() {
                out.add_term(n + c, a.clone() * coef);
            }
        }
        out.add_term(c.clone(), a.clone() * pair_with(mu, c));
    }
    out
}

/// The points of `θ` of degree `≤ D` together with the span of the hat relations
/// `μ·\hat[c]` for `deg c ≤ D − 1`, over any scalar.
pub struct HatTruncation<S> {
    pub theta: FaceId,
    pub max_degree: usize,
    points: Vec<LatticePoint>,
    degrees: Vec<usize>,
    index: HashMap<LatticePoint, usize>,
    relations: SparseEchelon<S>,
}

impl<S: Scalar> HatTruncation<S> {
    pub fn new(pair: &GorensteinPair, theta: FaceId, g: impl Fn(&LatticePoint) -> S, max_degree: usize) -> Result<Self> {
        let mut points = Vec::new();
        let mut degrees = Vec::new();
        for k in 0..=max_degree {
            for p in pair.face_points(theta, k as i64, false) {
                points.push(p);
                degrees.push(k);
            }
        }
        let index: HashMap<LatticePoint, usize> = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let delta: Vec<(LatticePoint, S)> = pair.face_points(theta, 1, false).into_iter().map(|n| {
            let v = g(&n);
            (n, v)
        }).collect();
        let functionals = pivot_functionals(pair, theta);
        let mut relations = SparseEchelon::new(points.len());
        for (c, &k) in points.iter().zip(&degrees) {
            if k == max_degree {
                break;
            }
            for mu in &functionals {
                let mut row: BTreeMap<usize, S> = BTreeMap::new();
                for (n, gn) in &delta {
                    let coef = gn.clone() * S::from_rational(&pair_with(mu, n));
                    let e = row.entry(index[&(n + c)]).or_insert_with(S::zero);
                    *e = e.clone() + coef;
                }
                let e = row.entry(index[c]).or_insert_with(S::zero);
                *e = e.clone() + S::from_rational(&pair_with(mu, c));
                let row: SparseVec<S> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                relations.try_insert(&row).map_err(|_| {
                    Error::StabilizationFailed(format!("hat relations on face {} change rank under the perturbation", theta.0))
                })?;
            }
        }
        Ok(HatTruncation {
            theta,
            max_degree,
            points,
            degrees,
            index,
            relations,
        })
    }

    pub fn column(&self, p: &LatticePoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn degree_of_column(&self, j: usize) -> usize {
        self.degrees[j]
    }

    pub fn relation_rank(&self) -> usize {
        self.relations.rank()
    }

    /// Canonical representative of `v` modulo the relations.
    pub fn normal_form(&self, v: &SparseVec<S>) -> SparseVec<S> {
        self.relations.reduce(v)
    }

    pub fn monomial_normal_form(&self, p: &LatticePoint) -> Option<SparseVec<S>> {
        self.column(p).map(|j| self.normal_form(&vec![(j, S::one())]))
    }

    /// Interior points, level by level, whose classes are independent modulo the relations.
    pub fn interior_basis(&self, pair: &GorensteinPair) -> Result<BTreeMap<i64, Vec<LatticePoint>>> {
        let mut ech = self.relations.clone();
        let mut reps: BTreeMap<i64, Vec<LatticePoint>> = BTreeMap::new();
        for k in 0..=self.max_degree {
            for p in pair.face_points(self.theta, k as i64, true) {
                let added = ech
                    .try_insert(&vec![(self.index[&p], S::one())])
                    .map_err(|_| Error::StabilizationFailed(format!("interior classes on face {} degenerate", self.theta.0)))?;
                if added {
                    reps.entry(k as i64).or_default().push(p);
                }
            }
        }
        Ok(reps)
    }
}

/// `R̂₁(g,θ)` from a single truncation, with dimensions by filtration level.
pub fn r1_hat_at(pair: &GorensteinPair, theta: FaceId, g: &CoefficientFunction, max_degree: usize) -> Result<R1Space> {
    let trunc = HatTruncation::new(pair, theta, |n| g.get(n), max_degree)?;
    let representatives = trunc.interior_basis(pair)?;
    let dims: GradedDims = representatives.iter().map(|(&k, v)| (k, v.len())).collect();
    Ok(R1Space {
        face: theta.0,
        dim: pair.faces().face(theta).dim,
        max_degree,
        dims,
        representatives,
    })
}

/// `R̂₁(g,θ)`, certified against the graded `R₁(g,θ)` at truncations `D` and `D − 1`.
pub fn r1_hat(pair: &GorensteinPair, theta: FaceId, g: &CoefficientFunction, max_degree: usize) -> Result<R1Space> {
    let dim = pair.faces().face(theta).dim;
    if max_degree < dim + 2 {
        return Err(Error::TruncationTooSmall {
            degree: max_degree,
            reason: format!("face {} has dimension {dim}; need at least {}", theta.0, dim + 2),
        });
    }
    let graded = r1(pair, theta, g, max_degree);
    let hat = r1_hat_at(pair, theta, g, max_degree)?;
    let lower = r1_hat_at(pair, theta, g, max_degree - 1)?;
    for (d, got) in [(max_degree, &hat), (max_degree - 1, &lower)] {
        if got.dims != graded.dims.truncated(d as i64) {
            return Err(Error::StabilizationFailed(format!(
                "face {}: filtered dims {:?} at truncation {d} differ from graded dims {:?}",
                theta.0, got.dims, graded.dims
            )));
        }
    }
    Ok(hat)
}

/// [`r1_hat`] with the default truncation `dim θ + 2`.
pub fn r1_hat_default(pair: &GorensteinPair, theta: FaceId, g: &CoefficientFunction) -> Result<R1Space> {
    r1_hat(pair, theta, g, pair.faces().face(theta).dim + 2)
}

/// Per-face comparison of filtered and graded dimensions.
#[derive(Clone, Debug, Serialize)]
pub struct HatComparison {
    pub face: usize,
    pub dim: usize,
    pub graded: GradedDims,
    pub filtered: Option<GradedDims>,
    pub error: Option<String>,
    pub pass: bool,
}

pub fn compare_hat_dims(pair: &GorensteinPair, g: &CoefficientFunction) -> Vec<HatComparison> {
    use rayon::prelude::*;
    let ids: Vec<FaceId> = pair.faces().ids().collect();
    ids.par_iter()
        .map(|&t| {
            let dim = pair.faces().face(t).dim;
            let graded = r1(pair, t, g, dim + 2).dims;
            match r1_hat(pair, t, g, dim + 2) {
                Ok(h) => HatComparison {
                    face: t.0,
                    dim,
                    pass: h.dims == graded,
                    graded,
                    filtered: Some(h.dims),
                    error: None,
                },
                Err(e) => HatComparison {
                    face: t.0,
                    dim,
                    graded,
                    filtered: None,
                    error: Some(e.to_string()),
                    pass: false,
                },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobian::ring::is_nondegenerate;

    fn triangle() -> GorensteinPair {
        let v: Vec<LatticePoint> = [[1, 0], [0, 1], [-1, -1]].iter().map(|c| LatticePoint(c.to_vec())).collect();
        GorensteinPair::from_polytope(&v).unwrap()
    }

    #[test]
    fn action_on_origin_and_ray() {
        let p = triangle();
        let g = CoefficientFunction::seeded(p.delta(), 3);
        let top = p.faces().top();
        let mu = vec![rat(1), rat(2), rat(0)];
        let zero = LatticePoint::zero(3);
        let out = hat_action(&p, top, &g, &mu, &HatElement::monomial(zero.clone()));
        for n in p.delta() {
            assert_eq!(out.terms.get(n).cloned().unwrap_or_else(Rational::zero), g.get(n) * pair_with(&mu, n));
        }
        let ray = p.faces().ids().find(|&t| p.faces().face(t).dim == 1).unwrap();
        let n = p.face_points(ray, 1, false)[0].clone();
        let k = 3;
        let out = hat_action(&p, ray, &g, &mu, &HatElement::monomial(n.scale(k)));
        let mun = pair_with(&mu, &n);
        let mut expect = HatElement::default();
        expect.add_term(n.scale(k + 1), g.get(&n) * mun.clone());
        expect.add_term(n.scale(k), rat(k) * mun);
        assert_eq!(out, expect);
    }

    #[test]
    fn actions_commute() {
        let p = triangle();
        let g = CoefficientFunction::seeded(p.delta(), 5);
        let top = p.faces().top();
        let mu1 = vec![rat(1), rat(-1), rat(3)];
        let mu2 = vec![rat(0), rat(2), rat(-1)];
        let mut v = HatElement::monomial(LatticePoint(vec![0, 0, 1]));
        v.add_term(LatticePoint(vec![1, 1, 2]), rat(4));
        let a = hat_action(&p, top, &g, &mu1, &hat_action(&p, top, &g, &mu2, &v));
        let b = hat_action(&p, top, &g, &mu2, &hat_action(&p, top, &g, &mu1, &v));
        assert_eq!(a, b);
        assert!(a.level(&p).unwrap() <= v.level(&p).unwrap() + 2);
    }

    #[test]
    fn filtered_dims_match_graded_on_triangle() {
        let p = triangle();
        let g = CoefficientFunction::seeded(p.delta(), 11);
        assert!(is_nondegenerate(&p, &g));
        for c in compare_hat_dims(&p, &g) {
            assert!(c.pass, "{c:?}");
        }
        let top = r1_hat_default(&p, p.faces().top(), &g).unwrap();
        assert_eq!(top.total(), 2);
        assert_eq!(r1_hat_default(&p, p.faces().zero(), &g).unwrap().dims, GradedDims::from([(0, 1)]));
    }

    #[test]
    fn small_truncation_is_rejected() {
        let p = triangle();
        let g = CoefficientFunction::seeded(p.delta(), 1);
        assert!(matches!(r1_hat(&p, p.faces().top(), &g, 3), Err(Error::TruncationTooSmall { .. })));
    }
}
