use super::*;
use crate::jacobian::random_nondegenerate;
use crate::graded::GradedDims;
use crate::lattice::{Cone, GorensteinPair, LatticePoint};
use crate::scalar::rat;

fn ray() -> GorensteinPair {
    GorensteinPair::new(Cone::from_rays(&[LatticePoint(vec![1])]).unwrap()).unwrap()
}

fn triangle() -> GorensteinPair {
    let v: Vec<LatticePoint> = [[1, 0], [0, 1], [-1, -1]].iter().map(|c| LatticePoint(c.to_vec())).collect();
    GorensteinPair::from_polytope(&v).unwrap()
}

fn generic(pair: &GorensteinPair, seed: u64) -> (crate::jacobian::CoefficientFunction, crate::jacobian::CoefficientFunction) {
    let f = random_nondegenerate(pair, seed, 20).unwrap();
    let g = random_nondegenerate(&pair.swapped(), seed + 1000, 20).unwrap();
    (f, g)
}

#[test]
fn ray_d_cohomology_vanishes() {
    let p = ray();
    let (f, g) = generic(&p, 1);
    let rep = cohomology_d(&p, &f, &g, 6).unwrap();
    assert!(rep.dims.is_zero(), "{:?}", rep.dims);
    assert!(rep.d_squared_zero && rep.euler_consistent);
}

#[test]
fn triangle_main_decomposition() {
    let p = triangle();
    let (f, g) = generic(&p, 2);
    let rep = verify_decomposition(&p, &f, &g, 6).unwrap();
    assert_eq!(rep.decomposition.total.total(), 4);
    assert!(rep.pass, "{:?} vs {:?}", rep.cohomology.dims, rep.decomposition.total);
}

#[test]
fn ray_dhat_vanishes_but_quotient_does_not() {
    let p = ray();
    let (f, g) = generic(&p, 3);
    let rep = cohomology_dhat(&p, &f, &g, 4, 8).unwrap();
    assert!(rep.all_stabilized());
    assert!(rep.dims.is_zero(), "{:?}", rep.dims);
    assert_eq!(rep.quotient_dims, GradedDims::from([(0, 1)]));
    assert!(rep.dhat_squared_zero);
}

#[test]
fn triangle_hatted_cohomology() {
    let p = triangle();
    let (f, g) = generic(&p, 4);
    let rep = verify_hatted_decomposition(&p, &f, &g, 6, 8).unwrap();
    assert_eq!(rep.assembly.total, GradedDims::from([(2, 1), (3, 2), (4, 1)]));
    assert!(rep.pass, "{:#?}", rep.dhat.gradings);
}

#[test]
fn zero_coefficients_are_rejected() {
    let p = ray();
    let f = crate::jacobian::CoefficientFunction::constant(p.delta(), rat(0));
    let g = crate::jacobian::CoefficientFunction::constant(p.delta_dual(), rat(1));
    assert!(matches!(cohomology_d(&p, &f, &g, 3), Err(crate::Error::DegenerateCoefficients(_))));
}
