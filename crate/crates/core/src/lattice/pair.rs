use serde::Serialize;

use super::cone::{Cone, LatticePoint};
use super::face::{FaceId, FacePoset};
use super::points::points_at_degree;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{rat, rational_to_i64};

/// A cone together with its dual, both face lattices and the dual-face map.
#[derive(Clone, Debug, Serialize)]
pub struct ConePair {
    primal: Cone,
    dual: Cone,
    primal_faces: FacePoset,
    dual_faces: FacePoset,
    to_dual: Vec<FaceId>,
    to_primal: Vec<FaceId>,
}

impl ConePair {
    pub fn new(primal: Cone) -> ConePair {
        let dual = primal.dual();
        let primal_faces = FacePoset::of_cone(&primal);
        let dual_faces = FacePoset::of_cone(&dual);
        // rays of the dual are the primal facets (same order), so θ* is the
        // dual face spanned by the facets active on θ
        let to_dual = primal_faces
            .faces()
            .iter()
            .map(|f| dual_faces.by_rays(&f.active_facets).expect("annihilator is a face of the dual"))
            .collect();
        let to_primal = dual_faces
            .faces()
            .iter()
            .map(|f| primal_faces.by_rays(&f.active_facets).expect("annihilator is a face of the primal"))
            .collect();
        ConePair {
            primal,
            dual,
            primal_faces,
            dual_faces,
            to_dual,
            to_primal,
        }
    }

    pub fn rank(&self) -> usize {
        self.primal.ambient_rank()
    }

    pub fn primal(&self) -> &Cone {
        &self.primal
    }

    pub fn dual(&self) -> &Cone {
        &self.dual
    }

    pub fn primal_faces(&self) -> &FacePoset {
        &self.primal_faces
    }

    pub fn dual_faces(&self) -> &FacePoset {
        &self.dual_faces
    }

    /// `θ ↦ θ* = Ann(θ) ∩ K^∨`.
    pub fn dual_face(&self, theta: FaceId) -> FaceId {
        self.to_dual[theta.0]
    }

    /// `σ ↦ σ* = Ann(σ) ∩ K`.
    pub fn primal_face_of(&self, sigma: FaceId) -> FaceId {
        self.to_primal[sigma.0]
    }

    /// The same data with the roles of the two cones exchanged.
    pub fn swapped(&self) -> ConePair {
        ConePair {
            primal: self.dual.clone(),
            dual: self.primal.clone(),
            primal_faces: self.dual_faces.clone(),
            dual_faces: self.primal_faces.clone(),
            to_dual: self.to_primal.clone(),
            to_primal: self.to_dual.clone(),
        }
    }
}

/// Dual reflexive Gorenstein cones `K ⊂ M_ℝ`, `K^∨ ⊂ N_ℝ` with their degree elements.
#[derive(Clone, Debug, Serialize)]
pub struct GorensteinPair {
    cones: ConePair,
    /// `deg ∈ M`, with `⟨deg, n⟩ = 1` on every ray of `K^∨`.
    deg: LatticePoint,
    /// `deg^∨ ∈ N`, with `⟨m, deg^∨⟩ = 1` on every ray of `K`.
    deg_dual: LatticePoint,
    delta: Vec<LatticePoint>,
    delta_dual: Vec<LatticePoint>,
}

impl GorensteinPair {
    pub fn new(k: Cone) -> Result<GorensteinPair> {
        let deg_dual = unit_height_functional(k.rays()).map_err(|e| Error::NotGorenstein(format!("primal side: {e}")))?;
        let deg = unit_height_functional(k.facet_normals()).map_err(|e| Error::NotGorenstein(format!("dual side: {e}")))?;
        let cones = ConePair::new(k);
        debug_assert!(cones.primal().contains_in_interior(&deg));
        debug_assert!(cones.dual().contains_in_interior(&deg_dual));
        let top = cones.primal_faces().top();
        let dual_top = cones.dual_faces().top();
        let delta = points_at_degree(cones.primal(), cones.primal_faces().face(top), 1, &deg_dual, false)?;
        let delta_dual = points_at_degree(cones.dual(), cones.dual_faces().face(dual_top), 1, &deg, false)?;
        Ok(GorensteinPair {
            cones,
            deg,
            deg_dual,
            delta,
            delta_dual,
        })
    }

    pub fn from_polytope(vertices: &[LatticePoint]) -> Result<GorensteinPair> {
        GorensteinPair::new(Cone::over_polytope(vertices)?)
    }

    pub fn rank(&self) -> usize {
        self.cones.rank()
    }

    pub fn cones(&self) -> &ConePair {
        &self.cones
    }

    pub fn k(&self) -> &Cone {
        self.cones.primal()
    }

    pub fn k_dual(&self) -> &Cone {
        self.cones.dual()
    }

    pub fn faces(&self) -> &FacePoset {
        self.cones.primal_faces()
    }

    pub fn dual_faces(&self) -> &FacePoset {
        self.cones.dual_faces()
    }

    pub fn dual_face(&self, theta: FaceId) -> FaceId {
        self.cones.dual_face(theta)
    }

    pub fn deg(&self) -> &LatticePoint {
        &self.deg
    }

    pub fn deg_dual(&self) -> &LatticePoint {
        &self.deg_dual
    }

    /// Lattice points of `K` at degree one.
    pub fn delta(&self) -> &[LatticePoint] {
        &self.delta
    }

    /// Lattice points of `K^∨` at degree one.
    pub fn delta_dual(&self) -> &[LatticePoint] {
        &self.delta_dual
    }

    /// Degree `⟨m, deg^∨⟩` of a point of `M`.
    pub fn degree_m(&self, m: &LatticePoint) -> i64 {
        m.dot(&self.deg_dual)
    }

    /// Degree `⟨deg, n⟩` of a point of `N`.
    pub fn degree_n(&self, n: &LatticePoint) -> i64 {
        self.deg.dot(n)
    }

    /// Lattice points of a face of `K` at degree `k`.
    pub fn face_points(&self, theta: FaceId, k: i64, interior_only: bool) -> Vec<LatticePoint> {
        points_at_degree(self.k(), self.faces().face(theta), k, &self.deg_dual, interior_only)
            .expect("deg^∨ is positive on K")
    }

    /// Lattice points of a face of `K^∨` at degree `k`.
    pub fn dual_face_points(&self, sigma: FaceId, k: i64, interior_only: bool) -> Vec<LatticePoint> {
        points_at_degree(self.k_dual(), self.dual_faces().face(sigma), k, &self.deg, interior_only)
            .expect("deg is positive on K^∨")
    }

    /// The mirror pair `(K^∨, K)`.
    pub fn swapped(&self) -> GorensteinPair {
        GorensteinPair {
            cones: self.cones.swapped(),
            deg: self.deg_dual.clone(),
            deg_dual: self.deg.clone(),
            delta: self.delta_dual.clone(),
            delta_dual: self.delta.clone(),
        }
    }

    /// The smallest face of `K` containing `m`.
    pub fn carrier(&self, m: &LatticePoint) -> FaceId {
        carrier_face(self.k(), self.faces(), m)
    }

    /// The smallest face of `K^∨` containing `n`.
    pub fn dual_carrier(&self, n: &LatticePoint) -> FaceId {
        carrier_face(self.k_dual(), self.dual_faces(), n)
    }
}

/// Smallest face of `cone` containing `p` (which must lie in the cone).
pub fn carrier_face(cone: &Cone, faces: &FacePoset, p: &LatticePoint) -> FaceId {
    let active: Vec<usize> = cone
        .facet_normals()
        .iter()
        .enumerate()
        .filter(|(_, n)| n.dot(p) == 0)
        .map(|(i, _)| i)
        .collect();
    faces
        .ids()
        .find(|&id| faces.face(id).active_facets == active)
        .expect("point lies in the cone")
}

/// Solves `⟨v, x⟩ = 1` for all `v`, demanding an integral solution.
fn unit_height_functional(vectors: &[LatticePoint]) -> std::result::Result<LatticePoint, String> {
    let a = Matrix::from_rows(vectors.iter().map(LatticePoint::to_rational).collect());
    let ones = vec![rat(1); vectors.len()];
    let x = a.solve(&ones).ok_or("generators do not lie on a common affine hyperplane")?;
    let coords: Option<Vec<i64>> = x.iter().map(rational_to_i64).collect();
    coords.map(LatticePoint).ok_or_else(|| "height-one hyperplane is not integral".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Face;

    fn face_dims_sum(pair: &ConePair, theta: FaceId) -> usize {
        let f: &Face = pair.primal_faces().face(theta);
        f.dim + pair.dual_faces().face(pair.dual_face(theta)).dim
    }

    fn pts(v: &[&[i64]]) -> Vec<LatticePoint> {
        v.iter().map(|c| LatticePoint(c.to_vec())).collect()
    }

    #[test]
    fn quadrant_degrees() {
        let p = GorensteinPair::new(Cone::from_rays(&pts(&[&[1, 0], &[0, 1]])).unwrap()).unwrap();
        assert_eq!(p.deg(), &LatticePoint(vec![1, 1]));
        assert_eq!(p.deg_dual(), &LatticePoint(vec![1, 1]));
    }

    #[test]
    fn triangle_degrees() {
        let p = GorensteinPair::from_polytope(&pts(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap();
        assert_eq!(p.deg(), &LatticePoint(vec![0, 0, 1]));
        assert_eq!(p.deg_dual(), &LatticePoint(vec![0, 0, 1]));
        assert_eq!(p.delta().len(), 4);
        assert_eq!(p.delta_dual().len(), 10);
    }

    #[test]
    fn non_gorenstein_dual_side() {
        // (1,0),(1,3): ⟨ray, x⟩ = 1 has x = (1,0), but the dual rays (0,1),(3,-1) need deg = (2/3, 1)
        let k = Cone::from_rays(&pts(&[&[1, 0], &[1, 3]])).unwrap();
        assert!(matches!(GorensteinPair::new(k), Err(Error::NotGorenstein(_))));
    }

    #[test]
    fn dual_faces_are_order_reversing_involution() {
        let p = GorensteinPair::from_polytope(&pts(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])).unwrap();
        let c = p.cones();
        for a in c.primal_faces().ids() {
            assert_eq!(face_dims_sum(c, a), p.rank());
            assert_eq!(c.primal_face_of(c.dual_face(a)), a);
            for b in c.primal_faces().ids() {
                if c.primal_faces().le(a, b) {
                    assert!(c.dual_faces().le(c.dual_face(b), c.dual_face(a)));
                }
            }
        }
    }
}
