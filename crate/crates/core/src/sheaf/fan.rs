use serde::Serialize;

use crate::gpoly::Poset;
use crate::lattice::{ConePair, Face, FaceId, FacePoset};
use crate::linalg::Matrix;
use crate::scalar::{rat, Rational};

/// A cone `θ ⊕ σ` of the product fan, with `θ ⊆ C` and `σ ⊆ C^∨`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanCone {
    pub theta: FaceId,
    pub sigma: FaceId,
    pub dim_x: usize,
    pub dim_y: usize,
}

impl FanCone {
    pub fn dim(&self) -> usize {
        self.dim_x + self.dim_y
    }
}

/// A subfan of the faces `θ ⊕ σ` of `C ⊕ C^∨` with `θ · σ = 0`, closed under faces.
#[derive(Clone, Debug)]
pub struct FanSpace {
    pair: ConePair,
    cones: Vec<FanCone>,
    le: Vec<Vec<bool>>,
    /// `x_coords[θ][i]`: the coordinate function `x_i` on `span θ`, in the pivot coordinates of `θ`.
    x_coords: Vec<Vec<Vec<Rational>>>,
    y_coords: Vec<Vec<Vec<Rational>>>,
}

impl FanSpace {
    /// The fan `Φ` of all `θ ⊕ σ` with `σ ⊆ θ*`.
    pub fn dual_pairs(pair: &ConePair) -> FanSpace {
        let dual = pair.dual_faces();
        Self::build(pair, |theta, sigma| dual.le(sigma, pair.dual_face(theta)))
    }

    /// The face fan of `C`, as the cones `θ ⊕ {0}`.
    pub fn primal_faces(pair: &ConePair) -> FanSpace {
        let zero = pair.dual_faces().zero();
        Self::build(pair, |_, sigma| sigma == zero)
    }

    fn build(pair: &ConePair, keep: impl Fn(FaceId, FaceId) -> bool) -> FanSpace {
        let pf = pair.primal_faces();
        let df = pair.dual_faces();
        let mut cones = Vec::new();
        for t in pf.ids() {
            for s in df.ids() {
                if keep(t, s) {
                    cones.push(FanCone {
                        theta: t,
                        sigma: s,
                        dim_x: pf.face(t).dim,
                        dim_y: df.face(s).dim,
                    });
                }
            }
        }
        cones.sort_by(|a, b| {
            let key = |c: &FanCone| (c.dim(), pf.face(c.theta).active_facets.clone(), df.face(c.sigma).active_facets.clone());
            key(a).cmp(&key(b))
        });
        let le = cones
            .iter()
            .map(|a| cones.iter().map(|b| pf.le(a.theta, b.theta) && df.le(a.sigma, b.sigma)).collect())
            .collect();
        let r = pair.rank();
        FanSpace {
            pair: pair.clone(),
            cones,
            le,
            x_coords: pf.faces().iter().map(|f| coordinate_restrictions(f, r)).collect(),
            y_coords: df.faces().iter().map(|f| coordinate_restrictions(f, r)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pair.rank()
    }

    pub fn pair(&self) -> &ConePair {
        &self.pair
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn cones(&self) -> &[FanCone] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> &FanCone {
        &self.cones[i]
    }

    pub fn find(&self, theta: FaceId, sigma: FaceId) -> Option<usize> {
        self.cones.iter().position(|c| c.theta == theta && c.sigma == sigma)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    /// Proper faces of cone `i`.
    pub fn proper_faces(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| j != i && self.le(j, i)).collect()
    }

    /// Faces of cone `i` of dimension one less.
    pub fn facets(&self, i: usize) -> Vec<usize> {
        let d = self.cones[i].dim();
        self.proper_faces(i).into_iter().filter(|&j| self.cones[j].dim() + 1 == d).collect()
    }

    /// Cones not contained in any other cone.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| (0..self.len()).all(|j| j == i || !self.le(i, j))).collect()
    }

    /// The coordinate function `x_i` on `span θ` in the local coordinates of cone `c`.
    pub fn x_form(&self, c: usize, i: usize) -> &[Rational] {
        &self.x_coords[self.cones[c].theta.0][i]
    }

    /// The coordinate function `y_i` on `span σ` in the local coordinates of cone `c`.
    pub fn y_form(&self, c: usize, i: usize) -> &[Rational] {
        &self.y_coords[self.cones[c].sigma.0][i]
    }

    /// The linear function `Σ λ_i x_i` (or `Σ λ_i y_i`) on cone `c`, in its local coordinates.
    pub fn linear_form(&self, c: usize, lambda: &[Rational], y_side: bool) -> Vec<Rational> {
        let cone = &self.cones[c];
        let mut out = vec![rat(0); cone.dim()];
        for (i, l) in lambda.iter().enumerate() {
            if num_traits::Zero::is_zero(l) {
                continue;
            }
            let (form, offset) = if y_side { (self.y_form(c, i), cone.dim_x) } else { (self.x_form(c, i), 0) };
            for (k, v) in form.iter().enumerate() {
                out[offset + k] = out[offset + k].clone() + l.clone() * v.clone();
            }
        }
        out
    }

    /// Images of the local coordinates of cone `from` as linear forms on its face `to`.
    pub fn restriction_forms(&self, from: usize, to: usize) -> Vec<Vec<Rational>> {
        let (a, b) = (&self.cones[from], &self.cones[to]);
        let pf = self.pair.primal_faces();
        let df = self.pair.dual_faces();
        let mut out = Vec::with_capacity(a.dim());
        for &p in &pf.face(a.theta).coordinate_pivots {
            let mut v = self.x_coords[b.theta.0][p].clone();
            v.resize(b.dim(), rat(0));
            out.push(v);
        }
        for &p in &df.face(a.sigma).coordinate_pivots {
            let mut v = vec![rat(0); b.dim_x];
            v.extend(self.y_coords[b.sigma.0][p].iter().cloned());
            out.push(v);
        }
        out
    }

    /// The cone poset ranked by dimension.
    pub fn poset(&self) -> Poset {
        Poset::new(self.cones.iter().map(FanCone::dim).collect(), self.le.clone())
    }

    pub fn primal_poset(&self) -> &FacePoset {
        self.pair.primal_faces()
    }

    pub fn dual_poset(&self) -> &FacePoset {
        self.pair.dual_faces()
    }
}

/// For each ambient coordinate `i`, its restriction to `span face` written in
/// the face's pivot coordinates.
fn coordinate_restrictions(face: &Face, rank: usize) -> Vec<Vec<Rational>> {
    let k = face.dim;
    if k == 0 {
        return vec![Vec::new(); rank];
    }
    let b: Vec<Vec<Rational>> = face.span_basis.iter().map(|v| v.to_rational()).collect();
    let bp = Matrix::from_rows(b.iter().map(|row| face.coordinate_pivots.iter().map(|&p| row[p].clone()).collect()).collect());
    (0..rank)
        .map(|i| {
            let col: Vec<Rational> = b.iter().map(|row| row[i].clone()).collect();
            bp.solve(&col).expect("pivot coordinates form a chart")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Cone, LatticePoint};

    fn quadrant() -> ConePair {
        ConePair::new(Cone::from_rays(&[LatticePoint(vec![1, 0]), LatticePoint(vec![0, 1])]).unwrap())
    }

    #[test]
    fn quadrant_fan_counts() {
        let fan = FanSpace::dual_pairs(&quadrant());
        // θ = 0: 4 choices of σ; each ray: 2; top: 1
        assert_eq!(fan.len(), 9);
        assert_eq!(fan.maximal().len(), 4);
        assert!(fan.maximal().iter().all(|&i| fan.cone(i).dim() == 2));
        assert_eq!(FanSpace::primal_faces(&quadrant()).len(), 4);
        assert!(fan.poset().interval_is_eulerian(0, fan.maximal()[0]));
    }

    #[test]
    fn ordering_is_by_dimension() {
        let fan = FanSpace::dual_pairs(&quadrant());
        let dims: Vec<usize> = fan.cones().iter().map(FanCone::dim).collect();
        assert!(dims.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(fan.cone(0).dim(), 0);
    }
}
