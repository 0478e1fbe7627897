mod common;

use proptest::prelude::*;

use common::{cones, octant, pentagon_cone, quadrant, square_cone};
use stringykit::gpoly::{g_polynomial, ih_dims, IntPolynomial};
use stringykit::lattice::{points_at_degree, Cone, ConePair, FacePoset, LatticePoint};

fn check_dual_faces(pair: &ConePair) {
    let r = pair.rank();
    let faces = pair.primal_faces();
    for a in faces.ids() {
        let star = pair.dual_face(a);
        assert_eq!(faces.face(a).dim + pair.dual_faces().face(star).dim, r);
        assert_eq!(pair.primal_face_of(star), a);
        for b in faces.ids() {
            if faces.le(a, b) {
                assert!(pair.dual_faces().le(pair.dual_face(b), star));
            }
        }
    }
}

fn g_of(faces: &FacePoset) -> IntPolynomial {
    g_polynomial(faces, faces.zero(), faces.top()).unwrap()
}

/// Direct scan of a box large enough to hold the slice.
fn scan(cone: &Cone, face_idx: usize, faces: &FacePoset, k: i64, lambda: &LatticePoint, interior: bool) -> Vec<LatticePoint> {
    let face = &faces.faces()[face_idx];
    let d = cone.ambient_rank();
    let bound = k * cone.rays().iter().flat_map(|r| r.0.iter()).map(|c| c.abs()).max().unwrap_or(0);
    let mut out = Vec::new();
    let mut x = vec![-bound; d];
    loop {
        let p = LatticePoint(x.clone());
        let on_face = face.active_facets.iter().all(|&i| cone.facet_normals()[i].dot(&p) == 0);
        let strict = (0..cone.facet_normals().len())
            .filter(|i| !face.active_facets.contains(i))
            .all(|i| cone.facet_normals()[i].dot(&p) > 0);
        if p.dot(lambda) == k && cone.contains(&p) && on_face && (!interior || strict || face.dim == 0) {
            out.push(p);
        }
        let mut i = 0;
        while i < d && x[i] == bound {
            x[i] = -bound;
            i += 1;
        }
        if i == d {
            break;
        }
        x[i] += 1;
    }
    out.sort();
    out
}

fn check_points(pair: &ConePair) {
    let cone = pair.primal();
    let faces = pair.primal_faces();
    // sum of the facet normals is positive on every ray
    let mut lambda = vec![0; cone.ambient_rank()];
    for n in cone.facet_normals() {
        for (l, c) in lambda.iter_mut().zip(&n.0) {
            *l += c;
        }
    }
    let lambda = LatticePoint(lambda);
    for (i, face) in faces.faces().iter().enumerate() {
        for k in 0..3 {
            for interior in [false, true] {
                let fast = points_at_degree(cone, face, k, &lambda, interior).unwrap();
                assert_eq!(fast, scan(cone, i, faces, k, &lambda, interior), "face {i}, k = {k}");
            }
        }
    }
}

#[test]
fn g_polynomial_oracles() {
    assert_eq!(g_of(square_cone().primal_faces()), IntPolynomial::from_coeffs(&[1, 1]));
    assert_eq!(g_of(pentagon_cone().primal_faces()), IntPolynomial::from_coeffs(&[1, 2]));
    assert_eq!(g_of(octant().primal_faces()), IntPolynomial::one());
    let cube = cones(&[
        &[1, 1, 1, 1],
        &[1, 1, -1, 1],
        &[1, -1, 1, 1],
        &[1, -1, -1, 1],
        &[-1, 1, 1, 1],
        &[-1, 1, -1, 1],
        &[-1, -1, 1, 1],
        &[-1, -1, -1, 1],
    ]);
    // h = (1, 5, 5, 1) for the boundary of the cube
    assert_eq!(g_of(cube.primal_faces()), IntPolynomial::from_coeffs(&[1, 4]));
}

#[test]
fn fixed_pairs_are_well_formed() {
    for pair in [quadrant(), octant(), square_cone(), pentagon_cone()] {
        assert!(pair.primal_faces().is_eulerian() && pair.dual_faces().is_eulerian());
        check_dual_faces(&pair);
        check_dual_faces(&pair.swapped());
        check_points(&pair);
        assert_eq!(pair.primal().dual().dual().rays(), pair.primal().rays());
    }
}

#[test]
fn intersection_dims_are_palindromic() {
    let pair = pentagon_cone();
    let faces = pair.primal_faces();
    for t in faces.ids() {
        let d = faces.face(t).dim as i64;
        let dims = ih_dims(faces, t).unwrap();
        assert_eq!(dims.relative, dims.absolute.map_degrees(|k| d - k));
    }
}

fn ray_sets() -> impl Strategy<Value = Vec<LatticePoint>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 3..7)
        .prop_map(|rows| rows.into_iter().map(|mut r| {
            // keep rays in the upper half space so most samples are pointed
            r[2] = r[2].abs() + 1;
            LatticePoint(r)
        }).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_cones_satisfy_duality(rays in ray_sets()) {
        let Ok(cone) = Cone::from_rays(&rays) else { return Ok(()) };
        let pair = ConePair::new(cone);
        let back = pair.primal().dual().dual();
        prop_assert_eq!(back.rays(), pair.primal().rays());
        for r in pair.primal().rays() {
            for n in pair.primal().facet_normals() {
                prop_assert!(r.dot(n) >= 0);
            }
        }
        prop_assert!(pair.primal_faces().is_eulerian());
        prop_assert!(pair.dual_faces().is_eulerian());
        check_dual_faces(&pair);
        let faces = pair.primal_faces();
        for t in faces.ids() {
            prop_assert!(g_polynomial(faces, faces.zero(), t).unwrap().has_nonnegative_coeffs());
        }
    }

    #[test]
    fn random_cones_enumerate_points(rays in ray_sets()) {
        let Ok(cone) = Cone::from_rays(&rays) else { return Ok(()) };
        check_points(&ConePair::new(cone));
    }
}
