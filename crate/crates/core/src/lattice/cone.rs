use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{rat, Rational};

/// An integer vector in a lattice `ℤʳ` (either `M` or `N`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn zero(rank: usize) -> Self {
        LatticePoint(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The pairing `⟨self, other⟩` between dual lattices.
    pub fn dot(&self, other: &LatticePoint) -> i64 {
        assert_eq!(self.rank(), other.rank(), "pairing of mismatched ranks");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: i64) -> LatticePoint {
        LatticePoint(self.0.iter().map(|c| c * k).collect())
    }

    /// Divides by the gcd of the coordinates. The zero vector is returned unchanged.
    pub fn primitive(&self) -> LatticePoint {
        let g = self.0.iter().fold(0i64, |g, &c| g.gcd(&c));
        if g <= 1 {
            return self.clone();
        }
        LatticePoint(self.0.iter().map(|c| c / g).collect())
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().map(|&c| rat(c)).collect()
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl<const N: usize> From<[i64; N]> for LatticePoint {
    fn from(v: [i64; N]) -> Self {
        LatticePoint(v.to_vec())
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| -a).collect())
    }
}

/// Rank over ℚ of a set of integer vectors.
pub fn integer_rank(vectors: &[LatticePoint], ambient: usize) -> usize {
    if vectors.is_empty() || ambient == 0 {
        return 0;
    }
    Matrix::from_rows(vectors.iter().map(LatticePoint::to_rational).collect()).rank()
}

/// A full-dimensional pointed rational polyhedral cone.
///
/// Both the rays and the inward facet normals are primitive, irredundant and
/// sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cone {
    rays: Vec<LatticePoint>,
    facet_normals: Vec<LatticePoint>,
    ambient_rank: usize,
}

impl Cone {
    /// Builds the cone generated by `rays`, computing its facets by double description.
    pub fn from_rays(rays: &[LatticePoint]) -> Result<Cone> {
        let Some(first) = rays.first() else {
            return Err(Error::Validation("a cone needs at least one ray".into()));
        };
        let d = first.rank();
        if d == 0 || rays.iter().any(|r| r.rank() != d) {
            return Err(Error::Validation("rays must share a positive ambient rank".into()));
        }
        let mut gens: Vec<LatticePoint> = rays.iter().filter(|r| !r.is_zero()).map(LatticePoint::primitive).collect();
        gens.sort();
        gens.dedup();
        if gens.is_empty() {
            return Err(Error::NotFullDimensional);
        }

        let dd = double_description(&gens, d);
        let mut span = dd.rays.clone();
        span.extend(dd.lineality.iter().cloned());
        if integer_rank(&span, d) < d {
            return Err(Error::NotPointed);
        }
        if !dd.lineality.is_empty() {
            return Err(Error::NotFullDimensional);
        }
        let mut facets = dd.rays;
        facets.sort();
        facets.dedup();

        // a generator is extreme iff the facets through it have rank d − 1
        let extreme: Vec<LatticePoint> = gens
            .into_iter()
            .filter(|g| {
                let tight: Vec<LatticePoint> = facets.iter().filter(|f| f.dot(g) == 0).cloned().collect();
                integer_rank(&tight, d) == d - 1
            })
            .collect();

        Ok(Cone {
            rays: extreme,
            facet_normals: facets,
            ambient_rank: d,
        })
    }

    /// The cone over a lattice polytope: rays `(v, 1)` for each vertex `v`.
    pub fn over_polytope(vertices: &[LatticePoint]) -> Result<Cone> {
        let Some(first) = vertices.first() else {
            return Err(Error::DegeneratePolytope);
        };
        let n = first.rank();
        if vertices.iter().any(|v| v.rank() != n) {
            return Err(Error::Validation("polytope vertices must share a rank".into()));
        }
        let lifted: Vec<LatticePoint> = vertices
            .iter()
            .map(|v| {
                let mut c = v.0.clone();
                c.push(1);
                LatticePoint(c)
            })
            .collect();
        if integer_rank(&lifted, n + 1) < n + 1 {
            return Err(Error::DegeneratePolytope);
        }
        Cone::from_rays(&lifted)
    }

    /// The dual cone `{n : ⟨m, n⟩ ≥ 0 for all m}`; rays and facets swap roles.
    pub fn dual(&self) -> Cone {
        Cone {
            rays: self.facet_normals.clone(),
            facet_normals: self.rays.clone(),
            ambient_rank: self.ambient_rank,
        }
    }

    pub fn rays(&self) -> &[LatticePoint] {
        &self.rays
    }

    pub fn facet_normals(&self) -> &[LatticePoint] {
        &self.facet_normals
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.facet_normals.iter().all(|f| f.dot(p) >= 0)
    }

    pub fn contains_in_interior(&self, p: &LatticePoint) -> bool {
        self.facet_normals.iter().all(|f| f.dot(p) > 0)
    }
}

struct DdResult {
    rays: Vec<LatticePoint>,
    lineality: Vec<LatticePoint>,
}

/// Extreme rays and lineality of `{y : ⟨a, y⟩ ≥ 0 for all a ∈ constraints}`.
///
/// Starts from the whole space (lineality = standard basis) and adds one
/// constraint at a time; adjacency of rays is tested combinatorially on zero sets.
fn double_description(constraints: &[LatticePoint], d: usize) -> DdResult {
    let mut lineality: Vec<LatticePoint> = (0..d)
        .map(|i| {
            let mut v = vec![0; d];
            v[i] = 1;
            LatticePoint(v)
        })
        .collect();
    // each ray carries its zero set over the constraints processed so far
    let mut rays: Vec<(LatticePoint, Vec<bool>)> = Vec::new();

    for (ci, a) in constraints.iter().enumerate() {
        for (_, z) in rays.iter_mut() {
            z.push(false);
        }
        if let Some(li) = lineality.iter().position(|l| a.dot(l) != 0) {
            let mut l = lineality.remove(li);
            if a.dot(&l) < 0 {
                l = -&l;
            }
            let al = a.dot(&l);
            lineality = lineality
                .iter()
                .map(|v| (&v.scale(al) - &l.scale(a.dot(v))).primitive())
                .collect();
            for (r, z) in rays.iter_mut() {
                *r = (&r.scale(al) - &l.scale(a.dot(r))).primitive();
                z[ci] = true;
            }
            let mut z = vec![true; ci + 1];
            z[ci] = false;
            rays.push((l, z));
            continue;
        }

        let signs: Vec<i64> = rays.iter().map(|(r, _)| a.dot(r)).collect();
        let mut next: Vec<(LatticePoint, Vec<bool>)> = Vec::new();
        for (k, (r, z)) in rays.iter().enumerate() {
            if signs[k] >= 0 {
                let mut z = z.clone();
                z[ci] = signs[k] == 0;
                next.push((r.clone(), z));
            }
        }
        for p in 0..rays.len() {
            if signs[p] <= 0 {
                continue;
            }
            for q in 0..rays.len() {
                if signs[q] >= 0 {
                    continue;
                }
                let common: Vec<bool> = rays[p].1.iter().zip(&rays[q].1).map(|(x, y)| *x && *y).collect();
                let adjacent = !rays.iter().enumerate().any(|(t, (_, zt))| {
                    t != p && t != q && common.iter().zip(zt).all(|(c, zz)| !*c || *zz)
                });
                if !adjacent {
                    continue;
                }
                let v = (&rays[q].0.scale(signs[p]) - &rays[p].0.scale(signs[q])).primitive();
                let mut z = common;
                z[ci] = true;
                next.push((v, z));
            }
        }
        rays = next;
    }

    DdResult {
        rays: rays.into_iter().map(|(r, _)| r).collect(),
        lineality,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<LatticePoint> {
        v.iter().map(|c| LatticePoint(c.to_vec())).collect()
    }

    #[test]
    fn quadrant_is_self_dual() {
        let c = Cone::from_rays(&pts(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(c.facet_normals(), pts(&[&[0, 1], &[1, 0]]).as_slice());
        assert_eq!(c.dual().rays(), c.rays());
    }

    #[test]
    fn line_is_not_pointed() {
        assert_eq!(Cone::from_rays(&pts(&[&[1, 0], &[-1, 0]])), Err(Error::NotPointed));
        assert_eq!(Cone::from_rays(&pts(&[&[1, 0], &[-1, 0], &[0, 1]])), Err(Error::NotPointed));
    }

    #[test]
    fn lower_dimensional_is_rejected() {
        assert_eq!(Cone::from_rays(&pts(&[&[1, 0, 0], &[0, 1, 0]])), Err(Error::NotFullDimensional));
    }

    #[test]
    fn redundant_rays_are_dropped() {
        let c = Cone::from_rays(&pts(&[&[1, 0], &[1, 1], &[0, 2], &[2, 0]])).unwrap();
        assert_eq!(c.rays(), pts(&[&[0, 1], &[1, 0]]).as_slice());
    }

    #[test]
    fn polytope_cone() {
        let c = Cone::over_polytope(&pts(&[&[-1], &[1]])).unwrap();
        assert_eq!(c.rays(), pts(&[&[-1, 1], &[1, 1]]).as_slice());
        assert_eq!(Cone::over_polytope(&pts(&[&[3, 4]])), Err(Error::DegeneratePolytope));
    }
}
