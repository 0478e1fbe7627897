#![allow(dead_code)]

use stringykit::jacobian::{random_nondegenerate, CoefficientFunction};
use stringykit::job::SAMPLE_TRIES;
use stringykit::lattice::{Cone, ConePair, GorensteinPair, LatticePoint};

pub fn points(rows: &[&[i64]]) -> Vec<LatticePoint> {
    rows.iter().map(|r| LatticePoint(r.to_vec())).collect()
}

pub fn cones(rays: &[&[i64]]) -> ConePair {
    ConePair::new(Cone::from_rays(&points(rays)).unwrap())
}

pub fn quadrant() -> ConePair {
    cones(&[&[1, 0], &[0, 1]])
}

pub fn octant() -> ConePair {
    cones(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
}

pub fn square_cone() -> ConePair {
    cones(&[&[-1, -1, 1], &[1, -1, 1], &[-1, 1, 1], &[1, 1, 1]])
}

pub fn pentagon_cone() -> ConePair {
    cones(&[&[1, 0, 1], &[0, 1, 1], &[-1, 1, 1], &[-1, 0, 1], &[0, -1, 1]])
}

pub fn ray() -> GorensteinPair {
    GorensteinPair::new(Cone::from_rays(&points(&[&[1]])).unwrap()).unwrap()
}

pub fn segment() -> GorensteinPair {
    GorensteinPair::from_polytope(&points(&[&[-1], &[1]])).unwrap()
}

pub fn projective_plane() -> GorensteinPair {
    GorensteinPair::from_polytope(&points(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap()
}

pub fn square() -> GorensteinPair {
    GorensteinPair::from_polytope(&points(&[&[-1, -1], &[1, -1], &[-1, 1], &[1, 1]])).unwrap()
}

pub fn gorenstein_pairs() -> Vec<(&'static str, GorensteinPair)> {
    vec![("ray", ray()), ("segment", segment()), ("projective plane", projective_plane()), ("square", square())]
}

pub const SEEDS: [u64; 3] = [11, 12, 13];

/// Seeded nondegenerate `f` on `Δ` and `g` on `Δ^∨`.
pub fn coefficients(pair: &GorensteinPair, seed: u64) -> (CoefficientFunction, CoefficientFunction) {
    let f = random_nondegenerate(pair, seed, SAMPLE_TRIES).unwrap();
    let g = random_nondegenerate(&pair.swapped(), seed + 1000, SAMPLE_TRIES).unwrap();
    (f, g)
}
