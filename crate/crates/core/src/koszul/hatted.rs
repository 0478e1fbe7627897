use rayon::prelude::*;
use serde::Serialize;

use super::graded::certify_coefficients;
use super::space::{differential_matrix, Piece, VSpace};
use crate::error::Result;
use crate::graded::GradedDims;
use crate::jacobian::{r1, r1_hat_default, CoefficientFunction};
use crate::lattice::{FaceId, GorensteinPair};
use crate::linalg::SparseMatrix;
use crate::scalar::Rational;

fn n_degree(pair: &GorensteinPair) -> impl Fn(&super::VElement) -> usize + '_ {
    move |e| pair.degree_n(&e.n) as usize
}

/// Matrix of `d̂_{f,g}` from grading `grading` with `deg n ≤ source_cap` to grading
/// `grading + 1` with `deg n ≤ target_cap`; images beyond `target_cap` are dropped.
pub fn dhat_matrix(
    space: &VSpace,
    f: &CoefficientFunction,
    g: &CoefficientFunction,
    grading: usize,
    source_cap: usize,
    target_cap: usize,
) -> (Piece, Piece, SparseMatrix<Rational>) {
    let pair = space.pair();
    let source = space.hat_graded(grading, source_cap);
    let target = space.hat_graded(grading + 1, target_cap);
    let deg = n_degree(pair);
    let m = differential_matrix(pair, f, g, &source, &target, true, |e| deg(e) > target_cap);
    (source, target, m)
}

/// Cohomology at `grading` approximated with cocycles and boundary preimages of `deg n ≤ cap`:
/// `dim Z_{≤cap} − dim (d̂ V_{≤cap} ∩ V_{≤cap})`.
pub fn windowed_dim(space: &VSpace, f: &CoefficientFunction, g: &CoefficientFunction, grading: usize, cap: usize) -> usize {
    let (source, _, d) = dhat_matrix(space, f, g, grading, cap, cap + 1);
    let cocycles = source.len() - d.rank();
    if grading == 0 {
        return cocycles;
    }
    let (_, target, b) = dhat_matrix(space, f, g, grading - 1, cap, cap + 1);
    let deg = n_degree(space.pair());
    let high: Vec<_> = (0..target.len())
        .filter(|&i| deg(&target.elements()[i]) > cap)
        .map(|i| b.row(i).clone())
        .collect();
    let high = SparseMatrix::from_rows(b.ncols(), high);
    cocycles - (b.rank() - high.rank())
}

/// Cohomology of the quotient complex `V / S_p`, where `S_p` is spanned by elements with `deg n ≥ p`.
pub fn quotient_dim(space: &VSpace, f: &CoefficientFunction, g: &CoefficientFunction, grading: usize, p: usize) -> usize {
    assert!(p >= 1);
    let (source, _, d) = dhat_matrix(space, f, g, grading, p - 1, p - 1);
    let prev = if grading == 0 { 0 } else { dhat_matrix(space, f, g, grading - 1, p - 1, p - 1).2.rank() };
    source.len() - d.rank() - prev
}

/// `d̂² = 0` on `V / S_p` from `grading`.
pub fn dhat_squares_to_zero(space: &VSpace, f: &CoefficientFunction, g: &CoefficientFunction, grading: usize, p: usize) -> bool {
    let (_, _, a) = dhat_matrix(space, f, g, grading, p - 1, p - 1);
    let (_, _, b) = dhat_matrix(space, f, g, grading + 1, p - 1, p - 1);
    b.mul(&a).is_zero()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CapStep {
    pub cap: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HatGrading {
    pub grading: usize,
    pub trace: Vec<CapStep>,
    pub stabilized: Option<usize>,
    /// First cap at which two consecutive values agreed.
    pub stabilized_cap: Option<usize>,
    /// Cohomology of `V / S_p` at the last cap tried.
    pub quotient_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DhatReport {
    pub max_grading: usize,
    pub n_cap: usize,
    pub gradings: Vec<HatGrading>,
    /// Stabilized dimensions.
    pub dims: GradedDims,
    pub unstabilized: Vec<usize>,
    pub quotient_dims: GradedDims,
    pub dhat_squared_zero: bool,
}

impl DhatReport {
    pub fn all_stabilized(&self) -> bool {
        self.unstabilized.is_empty()
    }
}

/// Cohomology of `(V, d̂_{f,g})` in gradings `≤ max_grading`, raising the `N`-degree cap up to
/// `n_cap` until two consecutive caps agree.
pub fn cohomology_dhat(
    pair: &GorensteinPair,
    f: &CoefficientFunction,
    g: &CoefficientFunction,
    max_grading: usize,
    n_cap: usize,
) -> Result<DhatReport> {
    certify_coefficients(pair, f, g)?;
    Ok(cohomology_dhat_unchecked(pair, f, g, max_grading, n_cap))
}

pub fn cohomology_dhat_unchecked(
    pair: &GorensteinPair,
    f: &CoefficientFunction,
    g: &CoefficientFunction,
    max_grading: usize,
    n_cap: usize,
) -> DhatReport {
    let n_cap = n_cap.max(2);
    let space = VSpace::new(pair, max_grading / 2 + 1, n_cap + 1);
    let gradings: Vec<HatGrading> = (0..=max_grading)
        .into_par_iter()
        .map(|gr| {
            let mut trace: Vec<CapStep> = Vec::new();
            let mut stabilized = None;
            for cap in 1..=n_cap {
                let dim = windowed_dim(&space, f, g, gr, cap);
                let agrees = trace.last().is_some_and(|s| s.dim == dim);
                trace.push(CapStep { cap, dim });
                if agrees {
                    stabilized = Some((dim, cap));
                    break;
                }
            }
            let last = trace.last().map_or(1, |s| s.cap);
            HatGrading {
                grading: gr,
                stabilized: stabilized.map(|s| s.0),
                stabilized_cap: stabilized.map(|s| s.1),
                quotient_dim: quotient_dim(&space, f, g, gr, last),
                trace,
            }
        })
        .collect();
    let mut dims = GradedDims::new();
    let mut quotient_dims = GradedDims::new();
    let mut unstabilized = Vec::new();
    for h in &gradings {
        match h.stabilized {
            Some(d) => dims.add(h.grading as i64, d),
            None => unstabilized.push(h.grading),
        }
        quotient_dims.add(h.grading as i64, h.quotient_dim);
    }
    let dhat_squared_zero = (0..max_grading).into_par_iter().all(|gr| dhat_squares_to_zero(&space, f, g, gr, n_cap));
    DhatReport {
        max_grading,
        n_cap,
        gradings,
        dims,
        unstabilized,
        quotient_dims,
        dhat_squared_zero,
    }
}

/// `H_A(K, f, g)`, computed as `H_B` of the mirror pair `(K^∨, g, f)`.
pub fn cohomology_dhat_a(
    pair: &GorensteinPair,
    f: &CoefficientFunction,
    g: &CoefficientFunction,
    max_grading: usize,
    n_cap: usize,
) -> Result<DhatReport> {
    cohomology_dhat(&pair.swapped(), g, f, max_grading, n_cap)
}

/// One face's contribution `R₁(f,θ) ⊗ R̂₁(g,θ*) ⊗ Λ^{dim θ*}`, placed at grading `2i + dim θ*`.
#[derive(Clone, Debug, Serialize)]
pub struct HbSummand {
    pub face: usize,
    pub dim_theta: usize,
    pub dual_face: usize,
    pub dim_dual: usize,
    pub r1_f: GradedDims,
    pub r1_hat_g: GradedDims,
    pub dims: GradedDims,
}

#[derive(Clone, Debug, Serialize)]
pub struct HbAssembly {
    pub summands: Vec<HbSummand>,
    pub total: GradedDims,
}

pub fn hb_assemble(pair: &GorensteinPair, f: &CoefficientFunction, g: &CoefficientFunction) -> Result<HbAssembly> {
    certify_coefficients(pair, f, g)?;
    let swapped = pair.swapped();
    let ids: Vec<FaceId> = pair.faces().ids().collect();
    let summands: Vec<HbSummand> = ids
        .par_iter()
        .map(|&t| -> Result<HbSummand> {
            let star = pair.dual_face(t);
            let dim_theta = pair.faces().face(t).dim;
            let dim_dual = pair.dual_faces().face(star).dim;
            let r1_f = r1(pair, t, f, dim_theta + 2).dims;
            let r1_hat_g = r1_hat_default(&swapped, star, g)?.dims;
            let width = r1_hat_g.total();
            let mut dims = GradedDims::new();
            for (i, a) in r1_f.iter() {
                dims.add(2 * i + dim_dual as i64, a * width);
            }
            Ok(HbSummand {
                face: t.0,
                dim_theta,
                dual_face: star.0,
                dim_dual,
                r1_f,
                r1_hat_g,
                dims,
            })
        })
        .collect::<Result<_>>()?;
    let mut total = GradedDims::new();
    for s in &summands {
        total.merge(&s.dims);
    }
    Ok(HbAssembly { summands, total })
}

#[derive(Clone, Debug, Serialize)]
pub struct HattedDecompositionReport {
    pub dhat: DhatReport,
    pub assembly: HbAssembly,
    pub pass: bool,
}

impl HattedDecompositionReport {
    pub fn stabilized(&self) -> bool {
        self.dhat.all_stabilized()
    }
}

pub fn verify_hatted_decomposition(
    pair: &GorensteinPair,
    f: &CoefficientFunction,
    g: &CoefficientFunction,
    max_grading: usize,
    n_cap: usize,
) -> Result<HattedDecompositionReport> {
    let assembly = hb_assemble(pair, f, g)?;
    let dhat = cohomology_dhat_unchecked(pair, f, g, max_grading, n_cap);
    let pass = dhat.all_stabilized() && dhat.dhat_squared_zero && dhat.dims == assembly.total.truncated(max_grading as i64);
    Ok(HattedDecompositionReport { dhat, assembly, pass })
}
