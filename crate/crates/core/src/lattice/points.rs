use num_integer::Integer;

use super::cone::{Cone, LatticePoint};
use super::face::Face;
use crate::error::{Error, Result};

/// Lattice points `x ∈ θ` with `⟨x, λ⟩ = k`, sorted lexicographically.
///
/// With `interior_only` the result is restricted to the relative interior of
/// `θ`. The zero face is its own relative interior.
pub fn points_at_degree(
    cone: &Cone,
    face: &Face,
    k: i64,
    functional: &LatticePoint,
    interior_only: bool,
) -> Result<Vec<LatticePoint>> {
    let d = cone.ambient_rank();
    let rays: Vec<&LatticePoint> = face.rays.iter().map(|&i| &cone.rays()[i]).collect();
    let heights: Vec<i64> = rays.iter().map(|r| r.dot(functional)).collect();
    if heights.iter().any(|&h| h <= 0) {
        return Err(Error::UnboundedSlice);
    }
    if k < 0 {
        return Ok(Vec::new());
    }
    if face.dim == 0 || k == 0 {
        let origin = vec![LatticePoint::zero(d)];
        return Ok(if k == 0 && (face.dim == 0 || !interior_only) { origin } else { Vec::new() });
    }

    // bounding box of the slice polytope conv{k·r/⟨r,λ⟩}
    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for (r, &h) in rays.iter().zip(&heights) {
        for i in 0..d {
            let num = k * r.0[i];
            lo[i] = lo[i].min(Integer::div_floor(&num, &h));
            hi[i] = hi[i].max(Integer::div_ceil(&num, &h));
        }
    }

    let normals = cone.facet_normals();
    let mut active = vec![false; normals.len()];
    for &j in &face.active_facets {
        active[j] = true;
    }
    let member = |x: &LatticePoint| {
        normals.iter().zip(&active).all(|(n, &a)| {
            let v = n.dot(x);
            if a {
                v == 0
            } else if interior_only {
                v > 0
            } else {
                v >= 0
            }
        })
    };

    // scan all coordinates but one; the last is solved from ⟨x, λ⟩ = k
    let solved = (0..d).rev().find(|&i| functional.0[i] != 0).expect("λ is nonzero");
    let free: Vec<usize> = (0..d).filter(|&i| i != solved).collect();
    let mut out = Vec::new();
    let mut x = LatticePoint::zero(d);
    for &i in &free {
        x.0[i] = lo[i];
    }
    loop {
        let partial: i64 = free.iter().map(|&i| x.0[i] * functional.0[i]).sum();
        let rest = k - partial;
        let c = functional.0[solved];
        if rest % c == 0 {
            let v = rest / c;
            if (lo[solved]..=hi[solved]).contains(&v) {
                x.0[solved] = v;
                if member(&x) {
                    out.push(x.clone());
                }
            }
        }
        // odometer over the free coordinates
        let mut carry = true;
        for &i in free.iter().rev() {
            if x.0[i] < hi[i] {
                x.0[i] += 1;
                carry = false;
                break;
            }
            x.0[i] = lo[i];
        }
        if carry {
            break;
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::FacePoset;

    fn triangle() -> Cone {
        Cone::over_polytope(&[
            LatticePoint(vec![1, 0]),
            LatticePoint(vec![0, 1]),
            LatticePoint(vec![-1, -1]),
        ])
        .unwrap()
    }

    #[test]
    fn triangle_degree_one() {
        let c = triangle();
        let faces = FacePoset::of_cone(&c);
        let top = faces.face(faces.top());
        let lam = LatticePoint(vec![0, 0, 1]);
        assert_eq!(points_at_degree(&c, top, 1, &lam, false).unwrap().len(), 4);
        assert_eq!(points_at_degree(&c, top, 1, &lam, true).unwrap(), vec![LatticePoint(vec![0, 0, 1])]);
        assert_eq!(points_at_degree(&c, top, 0, &lam, false).unwrap(), vec![LatticePoint::zero(3)]);
        assert!(points_at_degree(&c, top, 0, &lam, true).unwrap().is_empty());
    }

    #[test]
    fn vanishing_functional_is_unbounded() {
        let c = triangle();
        let faces = FacePoset::of_cone(&c);
        let lam = LatticePoint(vec![1, 0, 0]);
        assert_eq!(points_at_degree(&c, faces.face(faces.top()), 1, &lam, false), Err(Error::UnboundedSlice));
    }
}
