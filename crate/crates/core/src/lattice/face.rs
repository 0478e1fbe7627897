use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::cone::{integer_rank, Cone, LatticePoint};
use crate::linalg::Matrix;

/// Index of a face inside its [`FacePoset`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FaceId(pub usize);

/// A face of a cone, identified by the facets that vanish on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    /// Indices into the owning cone's rays.
    pub rays: Vec<usize>,
    /// Indices into the owning cone's facet normals; equal sets ⇔ equal faces.
    pub active_facets: Vec<usize>,
    pub dim: usize,
    /// Linearly independent rays spanning the face.
    pub span_basis: Vec<LatticePoint>,
    /// Ambient coordinates whose coordinate functionals restrict to a basis of
    /// the linear functions on the face's span.
    pub coordinate_pivots: Vec<usize>,
}

impl Face {
    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// `self ⊆ other` as faces of the same cone.
    pub fn is_subface_of(&self, other: &Face) -> bool {
        self.rays.iter().all(|r| other.rays.binary_search(r).is_ok())
    }
}

/// The face lattice of a cone, ordered by dimension then by active facet set.
#[derive(Clone, Debug, Serialize)]
pub struct FacePoset {
    faces: Vec<Face>,
    /// `covers[i]` lists the faces of dimension `dim + 1` containing face `i`.
    covers: Vec<Vec<FaceId>>,
    /// `covered_by[i]` lists the facets of face `i` (faces of dimension `dim − 1` inside it).
    facets_of: Vec<Vec<FaceId>>,
    #[serde(skip)]
    by_rays: HashMap<Vec<usize>, FaceId>,
}

impl FacePoset {
    pub fn of_cone(cone: &Cone) -> FacePoset {
        let rays = cone.rays();
        let normals = cone.facet_normals();
        let d = cone.ambient_rank();
        let on_facet: Vec<BTreeSet<usize>> = normals
            .iter()
            .map(|n| (0..rays.len()).filter(|&i| n.dot(&rays[i]) == 0).collect())
            .collect();

        let full: BTreeSet<usize> = (0..rays.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = vec![full];
        while let Some(f) = queue.pop() {
            let key: Vec<usize> = f.iter().copied().collect();
            if !seen.insert(key) {
                continue;
            }
            for facet in &on_facet {
                if f.is_subset(facet) {
                    continue;
                }
                queue.push(f.intersection(facet).copied().collect());
            }
        }

        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|ray_set| {
                let active: Vec<usize> = (0..normals.len())
                    .filter(|&j| ray_set.iter().all(|&i| normals[j].dot(&rays[i]) == 0))
                    .collect();
                let pts: Vec<LatticePoint> = ray_set.iter().map(|&i| rays[i].clone()).collect();
                let span_basis = independent_subset(&pts, d);
                let coordinate_pivots = pivot_coordinates(&span_basis);
                Face {
                    dim: span_basis.len(),
                    rays: ray_set,
                    active_facets: active,
                    span_basis,
                    coordinate_pivots,
                }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.active_facets).cmp(&(b.dim, &b.active_facets)));

        let by_rays: HashMap<Vec<usize>, FaceId> =
            faces.iter().enumerate().map(|(i, f)| (f.rays.clone(), FaceId(i))).collect();
        let mut covers = vec![Vec::new(); faces.len()];
        let mut facets_of = vec![Vec::new(); faces.len()];
        for (i, a) in faces.iter().enumerate() {
            for (j, b) in faces.iter().enumerate() {
                if b.dim == a.dim + 1 && a.is_subface_of(b) {
                    covers[i].push(FaceId(j));
                    facets_of[j].push(FaceId(i));
                }
            }
        }
        FacePoset {
            faces,
            covers,
            facets_of,
            by_rays,
        }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.faces.len()).map(FaceId)
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id.0]
    }

    pub fn zero(&self) -> FaceId {
        FaceId(0)
    }

    pub fn top(&self) -> FaceId {
        FaceId(self.faces.len() - 1)
    }

    pub fn by_rays(&self, rays: &[usize]) -> Option<FaceId> {
        self.by_rays.get(rays).copied()
    }

    /// Faces of one dimension more containing `id`.
    pub fn covers(&self, id: FaceId) -> &[FaceId] {
        &self.covers[id.0]
    }

    /// Faces of one dimension less contained in `id`.
    pub fn facets_of(&self, id: FaceId) -> &[FaceId] {
        &self.facets_of[id.0]
    }

    pub fn le(&self, a: FaceId, b: FaceId) -> bool {
        self.face(a).is_subface_of(self.face(b))
    }

    /// All faces `z` with `lo ⊆ z ⊆ hi`.
    pub fn interval(&self, lo: FaceId, hi: FaceId) -> Vec<FaceId> {
        self.ids().filter(|&z| self.le(lo, z) && self.le(z, hi)).collect()
    }

    /// Checks that every interval of positive length has as many even-rank as odd-rank elements.
    pub fn is_eulerian(&self) -> bool {
        self.ids().all(|lo| {
            self.ids()
                .filter(|&hi| self.le(lo, hi) && hi != lo)
                .all(|hi| self.interval_is_eulerian(lo, hi))
        })
    }

    pub fn interval_is_eulerian(&self, lo: FaceId, hi: FaceId) -> bool {
        if lo == hi {
            return true;
        }
        let sum: i64 = self
            .interval(lo, hi)
            .iter()
            .map(|&z| if self.face(z).dim.is_multiple_of(2) { 1 } else { -1 })
            .sum();
        sum == 0
    }
}

fn independent_subset(pts: &[LatticePoint], d: usize) -> Vec<LatticePoint> {
    let mut chosen: Vec<LatticePoint> = Vec::new();
    for p in pts {
        chosen.push(p.clone());
        if integer_rank(&chosen, d) < chosen.len() {
            chosen.pop();
        }
    }
    chosen
}

fn pivot_coordinates(basis: &[LatticePoint]) -> Vec<usize> {
    if basis.is_empty() {
        return Vec::new();
    }
    let mut m = Matrix::from_rows(basis.iter().map(LatticePoint::to_rational).collect());
    m.row_reduce()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(v: &[&[i64]]) -> Cone {
        Cone::from_rays(&v.iter().map(|c| LatticePoint(c.to_vec())).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn quadrant_faces() {
        let p = FacePoset::of_cone(&cone(&[&[1, 0], &[0, 1]]));
        assert_eq!(p.len(), 4);
        assert_eq!(p.face(p.zero()).dim, 0);
        assert_eq!(p.face(p.top()).dim, 2);
        assert!(p.is_eulerian());
    }

    #[test]
    fn triangle_cone_faces() {
        let p = FacePoset::of_cone(&cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, -1, 1]]));
        assert_eq!(p.len(), 8);
        let dims: Vec<usize> = p.faces().iter().map(|f| f.dim).collect();
        assert_eq!(dims, vec![0, 1, 1, 1, 2, 2, 2, 3]);
        assert!(p.is_eulerian());
    }

    #[test]
    fn square_cone_faces() {
        let p = FacePoset::of_cone(&cone(&[&[1, 1, 1], &[1, -1, 1], &[-1, 1, 1], &[-1, -1, 1]]));
        assert_eq!(p.len(), 10);
        assert!(p.is_eulerian());
        assert_eq!(p.facets_of(p.top()).len(), 4);
    }

    #[test]
    fn pivots_give_a_coordinate_chart() {
        let p = FacePoset::of_cone(&cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, -1, 1]]));
        for f in p.faces() {
            assert_eq!(f.coordinate_pivots.len(), f.dim);
        }
    }
}
