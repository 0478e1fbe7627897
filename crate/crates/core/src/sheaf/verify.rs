use serde::Serialize;

use super::complex::{CohomologyCell, DualBases, GlobalSections, WComplex};
use super::fan::FanSpace;
use super::minimal::SheafSections;
use crate::error::{Error, Result};
use crate::lattice::{ConePair, FaceId};
use crate::scalar::{format_rational, ratio};

/// Vanishing of the cohomology of `W ⊗ Λ*N` for the sheaf originating at the zero cone.
#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub rank: usize,
    pub max_degree: u32,
    /// Highest total degree `deg_x + deg_y` that is certified.
    pub window: u32,
    pub cells: Vec<CohomologyCell>,
    pub violations: Vec<CohomologyCell>,
    pub d_squared_zero: bool,
    pub pass: bool,
}

pub fn verify_vanishing(pair: &ConePair, max_degree: u32) -> Result<VanishingReport> {
    let r = pair.rank();
    if r == 0 {
        return Err(Error::Precondition("rank 0: the complex is one-dimensional with zero differential".into()));
    }
    let fan = FanSpace::dual_pairs(pair);
    let origin = fan
        .find(pair.primal_faces().zero(), pair.dual_faces().zero())
        .expect("zero cone is in the fan");
    let complex = build(&fan, origin, max_degree)?;
    let window = max_degree - 1;
    let cells = complex.cohomology(window)?;
    let violations: Vec<CohomologyCell> = cells.iter().filter(|c| c.dim > 0).cloned().collect();
    let d_squared_zero = complex.squares_to_zero();
    Ok(VanishingReport {
        rank: r,
        max_degree,
        window,
        pass: violations.is_empty() && d_squared_zero,
        cells,
        violations,
        d_squared_zero,
    })
}

/// Cohomology of `W ⊗ Λ*N` for the sheaf originating at `θ₀ ⊕ σ₀`.
#[derive(Clone, Debug, Serialize)]
pub struct OriginReport {
    pub theta: usize,
    pub sigma: usize,
    pub dim_theta: usize,
    pub dim_sigma: usize,
    /// Whether `σ₀ = θ₀*`.
    pub complementary: bool,
    pub window: u32,
    pub total: usize,
    pub classes: Vec<CohomologyCell>,
    /// `(r − dim θ₀ + dim σ₀) / 2`, the grading a surviving class is expected to carry.
    pub predicted_grading: String,
    pub pass: bool,
}

pub fn verify_origin_classes(pair: &ConePair, theta0: FaceId, sigma0: FaceId, max_degree: u32) -> Result<OriginReport> {
    let star = pair.dual_face(theta0);
    if !pair.dual_faces().le(sigma0, star) {
        return Err(Error::Precondition(format!(
            "dual face {} is not contained in the dual of face {}",
            sigma0.0, theta0.0
        )));
    }
    let fan = FanSpace::dual_pairs(pair);
    let origin = fan.find(theta0, sigma0).expect("pair lies in the fan");
    let complex = build(&fan, origin, max_degree)?;
    let window = max_degree - 1;
    let cells = complex.cohomology(window)?;
    let classes: Vec<CohomologyCell> = cells.into_iter().filter(|c| c.dim > 0).collect();
    let total = classes.iter().map(|c| c.dim).sum();
    let dim_theta = pair.primal_faces().face(theta0).dim;
    let dim_sigma = pair.dual_faces().face(sigma0).dim;
    let complementary = sigma0 == star;
    let dim_star = pair.dual_faces().face(star).dim as i64;
    let pass = if complementary {
        // one class in W_{0,0} ⊗ Λ^{dim θ₀*}
        total == 1 && classes[0].total_degree == 0 && classes[0].grading == dim_star
    } else {
        total == 0
    };
    let r = pair.rank() as i64;
    Ok(OriginReport {
        theta: theta0.0,
        sigma: sigma0.0,
        dim_theta,
        dim_sigma,
        complementary,
        window,
        total,
        classes,
        predicted_grading: format_rational(&ratio(r - dim_theta as i64 + dim_sigma as i64, 2)),
        pass,
    })
}

fn build(fan: &FanSpace, origin: usize, max_degree: u32) -> Result<WComplex> {
    let sheaf = SheafSections::minimal(fan, origin, max_degree)?;
    Ok(WComplex::new(GlobalSections::new(sheaf), DualBases::standard(fan.rank())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Cone, LatticePoint};

    fn quadrant() -> ConePair {
        ConePair::new(Cone::from_rays(&[LatticePoint(vec![1, 0]), LatticePoint(vec![0, 1])]).unwrap())
    }

    #[test]
    fn ray_cohomology_vanishes() {
        let p = ConePair::new(Cone::from_rays(&[LatticePoint(vec![1])]).unwrap());
        let rep = verify_vanishing(&p, 4).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn quadrant_origins() {
        let p = quadrant();
        let zero = p.primal_faces().zero();
        let full_dual = p.dual_face(zero);
        let rep = verify_origin_classes(&p, zero, full_dual, 4).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.classes[0].grading, 2);
        let rep = verify_origin_classes(&p, zero, p.dual_faces().zero(), 4).unwrap();
        assert!(rep.pass && rep.total == 0);
        let ray = p.primal_faces().ids().find(|&f| p.primal_faces().face(f).dim == 1).unwrap();
        let rep = verify_origin_classes(&p, ray, p.dual_face(ray), 4).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.classes[0].grading, 1);
    }

    #[test]
    fn origin_outside_fan_is_rejected() {
        let p = quadrant();
        let top = p.primal_faces().top();
        let res = verify_origin_classes(&p, top, p.dual_faces().top(), 4);
        assert!(matches!(res, Err(Error::Precondition(_))));
    }
}
