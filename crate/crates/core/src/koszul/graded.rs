use rayon::prelude::*;
use serde::Serialize;

use super::space::{differential_matrix, Piece, VSpace};
use crate::error::{Error, Result};
use crate::graded::GradedDims;
use crate::jacobian::{check_nondegenerate, r1, CoefficientFunction};
use crate::lattice::{FaceId, GorensteinPair};
use crate::linalg::SparseMatrix;
use crate::scalar::Rational;

fn tag(which: &str, e: Error) -> Error {
    match e {
        Error::DegenerateCoefficients(m) => Error::DegenerateCoefficients(format!("{which}: {m}")),
        other => other,
    }
}

/// Checks that `f` lives on `Δ`, `g` on `Δ^∨`, and both are nondegenerate.
pub fn certify_coefficients(pair: &GorensteinPair, f: &CoefficientFunction, g: &CoefficientFunction) -> Result<()> {
    if !f.domain().eq(sorted(pair.delta()).iter()) {
        return Err(Error::Validation("f must be defined on the degree-one points of K".into()));
    }
    if !g.domain().eq(sorted(pair.delta_dual()).iter()) {
        return Err(Error::Validation("g must be defined on the degree-one points of the dual cone".into()));
    }
    check_nondegenerate(pair, f).map_err(|e| tag("f", e))?;
    check_nondegenerate(&pair.swapped(), g).map_err(|e| tag("g", e))?;
    Ok(())
}

fn sorted(v: &[crate::lattice::LatticePoint]) -> Vec<crate::lattice::LatticePoint> {
    let mut v = v.to_vec();
    v.sort();
    v
}

/// Cohomology of `(V, d_{f,g})` in one `(total degree, weight)` piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulCell {
    pub total_degree: usize,
    /// `deg m − deg n + |P|`, preserved by the differential.
    pub weight: i64,
    pub chain_dim: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    /// Highest certified total degree.
    pub window: usize,
    pub chain_dims: GradedDims,
    pub dims: GradedDims,
    pub cells: Vec<KoszulCell>,
    pub euler_chain: i64,
    pub euler_cohomology: i64,
    pub euler_consistent: bool,
    pub d_squared_zero: bool,
}

/// Weights that can occur in total degree `k`.
fn weights(k: usize, r: usize) -> std::ops::RangeInclusive<i64> {
    -(k as i64)..=(k + r) as i64
}

/// Cohomology of `(V, d_{f,g})` for total degrees `k ≤ D − 1`.
pub fn cohomology_d(pair: &GorensteinPair, f: &CoefficientFunction, g: &CoefficientFunction, max_degree: usize) -> Result<CohomologyReport> {
    certify_coefficients(pair, f, g)?;
    Ok(cohomology_d_unchecked(pair, f, g, max_degree))
}

/// [`cohomology_d`] without certifying `f` and `g`.
pub fn cohomology_d_unchecked(
    pair: &GorensteinPair,
    f: &CoefficientFunction,
    g: &CoefficientFunction,
    max_degree: usize,
) -> CohomologyReport {
    let r = pair.rank();
    let window = max_degree.saturating_sub(1);
    let space = VSpace::new(pair, max_degree, max_degree);
    let keys: Vec<(usize, i64)> = (0..=max_degree).flat_map(|k| weights(k, r).map(move |w| (k, w))).collect();
    let pieces: Vec<((usize, i64), Piece)> = keys.par_iter().map(|&(k, w)| ((k, w), space.weighted(k, w))).collect();
    let piece = |k: usize, w: i64| -> &Piece { &pieces.iter().find(|(key, _)| *key == (k, w)).expect("piece").1 };
    let dkeys: Vec<(usize, i64)> = keys.iter().copied().filter(|&(k, _)| k < max_degree).collect();
    let diffs: Vec<((usize, i64), SparseMatrix<Rational>)> = dkeys
        .par_iter()
        .map(|&(k, w)| ((k, w), differential_matrix(pair, f, g, piece(k, w), piece(k + 1, w), false, |_| false)))
        .collect();
    let ranks: Vec<((usize, i64), usize)> = diffs.par_iter().map(|(key, m)| (*key, m.rank())).collect();
    let rank = |k: usize, w: i64| ranks.iter().find(|(key, _)| *key == (k, w)).map_or(0, |e| e.1);
    let mut chain_dims = GradedDims::new();
    let mut dims = GradedDims::new();
    let mut cells = Vec::new();
    let (mut euler_chain, mut euler_cohomology) = (0i64, 0i64);
    for k in 0..=window {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for w in weights(k, r) {
            let n = piece(k, w).len();
            let h = n - rank(k, w) - if k > 0 { rank(k - 1, w) } else { 0 };
            chain_dims.add(k as i64, n);
            dims.add(k as i64, h);
            euler_chain += sign * n as i64;
            euler_cohomology += sign * h as i64;
            if h > 0 {
                cells.push(KoszulCell {
                    total_degree: k,
                    weight: w,
                    chain_dim: n,
                    dim: h,
                });
            }
        }
    }
    let top_rank: usize = weights(window, r).map(|w| rank(window, w)).sum();
    let sign = if window.is_multiple_of(2) { 1 } else { -1 };
    let euler_consistent = euler_chain - sign * top_rank as i64 == euler_cohomology;
    let d_squared_zero = diffs.par_iter().all(|((k, w), m)| {
        match diffs.iter().find(|(key, _)| *key == (k + 1, *w)) {
            Some((_, next)) => next.mul(m).is_zero(),
            None => true,
        }
    });
    CohomologyReport {
        window,
        chain_dims,
        dims,
        cells,
        euler_chain,
        euler_cohomology,
        euler_consistent,
        d_squared_zero,
    }
}

/// One face's contribution `R₁(f,θ) ⊗ R₁(g,θ*)`.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionSummand {
    pub face: usize,
    pub dim_theta: usize,
    pub dual_face: usize,
    pub r1_f: GradedDims,
    pub r1_g: GradedDims,
    pub dims: GradedDims,
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub summands: Vec<DecompositionSummand>,
    pub total: GradedDims,
}

/// `Σ_θ R₁(f,θ) ⊗ R₁(g,θ*)`, graded by total degree.
pub fn decomposition_dims(pair: &GorensteinPair, f: &CoefficientFunction, g: &CoefficientFunction) -> Result<Decomposition> {
    certify_coefficients(pair, f, g)?;
    let swapped = pair.swapped();
    let ids: Vec<FaceId> = pair.faces().ids().collect();
    let summands: Vec<DecompositionSummand> = ids
        .par_iter()
        .map(|&t| {
            let star = pair.dual_face(t);
            let dt = pair.faces().face(t).dim;
            let ds = pair.dual_faces().face(star).dim;
            let r1_f = r1(pair, t, f, dt + 2).dims;
            let r1_g = r1(&swapped, star, g, ds + 2).dims;
            DecompositionSummand {
                face: t.0,
                dim_theta: dt,
                dual_face: star.0,
                dims: r1_f.convolve(&r1_g),
                r1_f,
                r1_g,
            }
        })
        .collect();
    let mut total = GradedDims::new();
    for s in &summands {
        total.merge(&s.dims);
    }
    Ok(Decomposition { summands, total })
}

/// Per-degree comparison of `H(V, d_{f,g})` with the face decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub window: usize,
    pub cohomology: CohomologyReport,
    pub decomposition: Decomposition,
    pub pass: bool,
}

pub fn verify_decomposition(
    pair: &GorensteinPair,
    f: &CoefficientFunction,
    g: &CoefficientFunction,
    max_degree: usize,
) -> Result<DecompositionReport> {
    let decomposition = decomposition_dims(pair, f, g)?;
    let cohomology = cohomology_d_unchecked(pair, f, g, max_degree);
    let window = cohomology.window;
    let pass = cohomology.dims == decomposition.total.truncated(window as i64) && cohomology.d_squared_zero;
    Ok(DecompositionReport {
        window,
        cohomology,
        decomposition,
        pass,
    })
}
