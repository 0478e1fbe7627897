mod common;

use common::{coefficients, gorenstein_pairs, projective_plane, quadrant, segment, square, square_cone, SEEDS};
use stringykit::gpoly::GPolynomials;
use stringykit::graded::GradedDims;
use stringykit::koszul::{cohomology_d, cohomology_dhat, dhat_squares_to_zero, hb_assemble, VSpace};
use stringykit::scalar::ratio;
use stringykit::sheaf::{FanSpace, SheafSections};

#[test]
fn differentials_square_to_zero() {
    for (name, pair) in gorenstein_pairs() {
        let (f, g) = coefficients(&pair, SEEDS[0]);
        let rep = cohomology_d(&pair, &f, &g, 5).unwrap();
        assert!(rep.d_squared_zero, "{name}");
        assert!(rep.euler_consistent, "{name}");
        let space = VSpace::new(&pair, 4, 5);
        for grading in 0..6 {
            assert!(dhat_squares_to_zero(&space, &f, &g, grading, 4), "{name}, grading {grading}");
        }
    }
}

#[test]
fn swapping_sides_preserves_totals() {
    for pair in [segment(), projective_plane(), square()] {
        for seed in SEEDS {
            let (f, g) = coefficients(&pair, seed);
            let here = cohomology_d(&pair, &f, &g, 6).unwrap();
            let there = cohomology_d(&pair.swapped(), &g, &f, 6).unwrap();
            assert_eq!(here.dims.total(), there.dims.total());
            let a = hb_assemble(&pair, &f, &g).unwrap();
            let b = hb_assemble(&pair.swapped(), &g, &f).unwrap();
            assert_eq!(a.total.total(), b.total.total());
        }
    }
}

#[test]
fn rescaling_f_preserves_cohomology() {
    for pair in [segment(), projective_plane()] {
        let (f, g) = coefficients(&pair, SEEDS[1]);
        let base = cohomology_d(&pair, &f, &g, 5).unwrap();
        for c in [ratio(-1, 1), ratio(3, 2), ratio(-2, 7)] {
            let scaled = cohomology_d(&pair, &f.scaled(&c), &g, 5).unwrap();
            assert_eq!(base.dims, scaled.dims);
            let hat = cohomology_dhat(&pair, &f.scaled(&c), &g, 4, 8).unwrap();
            let hat_base = cohomology_dhat(&pair, &f, &g, 4, 8).unwrap();
            assert_eq!(hat.dims, hat_base.dims);
        }
    }
}

#[test]
fn hatted_cohomology_of_the_square() {
    let pair = square();
    let (f, g) = coefficients(&pair, SEEDS[2]);
    let rep = cohomology_dhat(&pair, &f, &g, 6, 8).unwrap();
    assert!(rep.all_stabilized());
    assert_eq!(rep.dims, GradedDims::from([(2, 1), (3, 2), (4, 1)]));
}

fn check_generators(fan: &FanSpace, origins: &[usize], max_degree: u32) {
    let poset = fan.poset();
    for &origin in origins {
        let sheaf = SheafSections::minimal(fan, origin, max_degree).unwrap();
        let mut g = GPolynomials::new(&poset);
        for c in 0..fan.len() {
            if !fan.le(origin, c) {
                assert!(sheaf.generators(c).is_empty());
                continue;
            }
            let expect: GradedDims = g.g(origin, c).unwrap().terms().map(|(i, v)| (i as i64, v as usize)).collect();
            assert_eq!(sheaf.generator_degrees(c), expect, "origin {origin}, cone {c}");
            assert!(sheaf.is_flabby_at(c));
        }
    }
}

#[test]
fn generator_degrees_follow_g_polynomials() {
    let fan = FanSpace::dual_pairs(&quadrant());
    check_generators(&fan, &(0..fan.len()).collect::<Vec<_>>(), 3);
    let fan = FanSpace::primal_faces(&square_cone());
    check_generators(&fan, &(0..fan.len()).collect::<Vec<_>>(), 3);
    let fan = FanSpace::dual_pairs(&square_cone());
    check_generators(&fan, &[0], 3);
}
