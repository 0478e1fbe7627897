//! Connection matrices on `R̂₁(g,σ)` and exact flatness checks by dual-number differentiation.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::jacobian::{check_nondegenerate, r1, r1_hat_default, CoefficientFunction, HatTruncation};
use crate::lattice::{FaceId, GorensteinPair, LatticePoint};
use crate::linalg::Matrix;
use crate::scalar::{format_rational, Rational, Scalar};
use crate::{DualRational, QMatrix};

fn serialize_matrix<S: Serializer>(m: &QMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = (0..m.nrows()).map(|i| m.row(i).iter().map(format_rational).collect()).collect();
    rows.serialize(s)
}

/// `A_n` for one degree-one point `n` of the face.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplicationMatrix {
    pub n: LatticePoint,
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: QMatrix,
}

/// Basis of `R̂₁(g₀,σ)` and the matrices `A_n`, whose column `i` expands `\hat[c_i + n]` in the basis.
///
/// `σ` is a face of the primal cone of `pair`, and `g₀` lives on its degree-one points;
/// pass the swapped pair to work on the dual side.
#[derive(Clone, Debug, Serialize)]
pub struct ConnectionData {
    pub face: usize,
    pub base_point: CoefficientFunction,
    pub basis: Vec<LatticePoint>,
    pub matrices: Vec<MultiplicationMatrix>,
}

impl ConnectionData {
    pub fn matrix(&self, n: &LatticePoint) -> Option<&QMatrix> {
        self.matrices.iter().find(|m| &m.n == n).map(|m| &m.matrix)
    }
}

fn truncation_degree(pair: &GorensteinPair, sigma: FaceId) -> usize {
    pair.faces().face(sigma).dim + 2
}

/// Interior monomials whose classes form a basis of `R̂₁(g₀,σ)`, by increasing level.
pub fn basis_select(pair: &GorensteinPair, sigma: FaceId, g0: &CoefficientFunction) -> Result<Vec<LatticePoint>> {
    check_nondegenerate(pair, g0)?;
    let space = r1_hat_default(pair, sigma, g0)?;
    Ok(space.representatives.into_values().flatten().collect())
}

/// Expansion of the classes of `targets` in the classes of `basis`, one column per target.
fn expand<S: Scalar>(trunc: &HatTruncation<S>, basis: &[LatticePoint], targets: &[LatticePoint]) -> Result<Matrix<S>> {
    let nf = |p: &LatticePoint| {
        trunc.monomial_normal_form(p).ok_or_else(|| Error::TruncationTooSmall {
            degree: trunc.max_degree,
            reason: format!("point {:?} lies beyond the truncation", p.0),
        })
    };
    let basis_nf: Vec<_> = basis.iter().map(nf).collect::<Result<_>>()?;
    let target_nf: Vec<_> = targets.iter().map(nf).collect::<Result<_>>()?;
    let support: BTreeSet<usize> = basis_nf.iter().chain(&target_nf).flatten().map(|e| e.0).collect();
    let support: Vec<usize> = support.into_iter().collect();
    let dense = |v: &Vec<(usize, S)>| -> Vec<S> {
        let mut out = vec![S::zero(); support.len()];
        for (j, x) in v {
            out[support.binary_search(j).expect("in support")] = x.clone();
        }
        out
    };
    let b = Matrix::from_columns(&basis_nf.iter().map(dense).collect::<Vec<_>>(), support.len());
    let mut cols = Vec::with_capacity(targets.len());
    for (t, v) in targets.iter().zip(&target_nf) {
        let x = b.solve(&dense(v)).ok_or_else(|| {
            Error::DegenerateCoefficients(format!("class of {:?} is not in the span of the selected basis", t.0))
        })?;
        cols.push(x);
    }
    Ok(Matrix::from_columns(&cols, basis.len()))
}

/// `A_n` for every `n ∈ Δ ∩ σ`, with `g` evaluated in any scalar ring.
pub fn multiplication_matrices<S: Scalar>(
    pair: &GorensteinPair,
    sigma: FaceId,
    g: impl Fn(&LatticePoint) -> S,
    basis: &[LatticePoint],
) -> Result<Vec<(LatticePoint, Matrix<S>)>> {
    let trunc = HatTruncation::new(pair, sigma, g, truncation_degree(pair, sigma))?;
    pair.face_points(sigma, 1, false)
        .into_iter()
        .map(|n| {
            let targets: Vec<LatticePoint> = basis.iter().map(|c| c + &n).collect();
            Ok((n, expand(&trunc, basis, &targets)?))
        })
        .collect()
}

pub fn connection_data(pair: &GorensteinPair, sigma: FaceId, g0: &CoefficientFunction) -> Result<ConnectionData> {
    let basis = basis_select(pair, sigma, g0)?;
    let matrices = multiplication_matrices(pair, sigma, |m| g0.get(m), &basis)?
        .into_iter()
        .map(|(n, matrix)| MultiplicationMatrix { n, matrix })
        .collect();
    Ok(ConnectionData {
        face: sigma.0,
        base_point: g0.clone(),
        basis,
        matrices,
    })
}

/// `∂A_{n'}/∂g(n)` at `g₀` for every `n'`, with the basis held fixed.
pub fn derivative_matrices(
    pair: &GorensteinPair,
    sigma: FaceId,
    g0: &CoefficientFunction,
    basis: &[LatticePoint],
    n: &LatticePoint,
) -> Result<Vec<(LatticePoint, QMatrix)>> {
    let g = |m: &LatticePoint| {
        if m == n {
            DualRational::variable(g0.get(m))
        } else {
            DualRational::constant(g0.get(m))
        }
    };
    let mats = multiplication_matrices(pair, sigma, g, basis).map_err(|e| match e {
        Error::StabilizationFailed(msg) => Error::DegenerateCoefficients(format!("at the perturbed point: {msg}")),
        other => other,
    })?;
    Ok(mats.into_iter().map(|(np, m)| (np, m.map(|x: &Dual<Rational>| x.deriv.clone()))).collect())
}

/// Exact comparison of the mixed derivatives of `A_n` and `A_{n'}`.
#[derive(Clone, Debug, Serialize)]
pub struct FlatnessCheck {
    pub n: LatticePoint,
    pub n_prime: LatticePoint,
    /// `∂_{g(n)} A_{n'} = ∂_{g(n')} A_n`.
    pub derivative_symmetric: bool,
    /// `A_n A_{n'} = A_{n'} A_n`.
    pub commuting: bool,
    /// `∂_{g(n)} A_{n'} − ∂_{g(n')} A_n = A_{n'} A_n − A_n A_{n'}`: the compatibility of `∂_{g(n)} φ = φ A_n`.
    pub integrable: bool,
    /// The same difference compared with `A_n A_{n'} − A_{n'} A_n`.
    pub integrable_opposite_sign: bool,
}

fn compare(
    n: &LatticePoint,
    np: &LatticePoint,
    a: &QMatrix,
    ap: &QMatrix,
    d_n_ap: &QMatrix,
    d_np_a: &QMatrix,
) -> FlatnessCheck {
    let diff = d_n_ap.sub(d_np_a);
    let comm = a.mul(ap).sub(&ap.mul(a));
    FlatnessCheck {
        n: n.clone(),
        n_prime: np.clone(),
        derivative_symmetric: diff.is_zero(),
        commuting: comm.is_zero(),
        integrable: diff.sub(&comm.map(|x| -x.clone())).is_zero(),
        integrable_opposite_sign: diff.sub(&comm).is_zero(),
    }
}

pub fn flatness_check(
    pair: &GorensteinPair,
    sigma: FaceId,
    g0: &CoefficientFunction,
    n: &LatticePoint,
    n_prime: &LatticePoint,
) -> Result<FlatnessCheck> {
    let data = connection_data(pair, sigma, g0)?;
    let lookup = |v: &[(LatticePoint, QMatrix)], p: &LatticePoint| -> Result<QMatrix> {
        v.iter()
            .find(|e| &e.0 == p)
            .map(|e| e.1.clone())
            .ok_or_else(|| Error::Precondition(format!("{:?} is not a degree-one point of the face", p.0)))
    };
    let d_n = derivative_matrices(pair, sigma, g0, &data.basis, n)?;
    let d_np = derivative_matrices(pair, sigma, g0, &data.basis, n_prime)?;
    let a = data.matrix(n).cloned().ok_or_else(|| Error::Precondition("n is not in the face".into()))?;
    let ap = data.matrix(n_prime).cloned().ok_or_else(|| Error::Precondition("n' is not in the face".into()))?;
    Ok(compare(n, n_prime, &a, &ap, &lookup(&d_n, n_prime)?, &lookup(&d_np, n)?))
}

/// Every pair `(n, n')` of one block.
#[derive(Clone, Debug, Serialize)]
pub struct BlockFlatness {
    pub data: ConnectionData,
    pub checks: Vec<FlatnessCheck>,
    pub derivative_symmetric: bool,
    pub commuting: bool,
    pub integrable: bool,
}

pub fn block_flatness(pair: &GorensteinPair, sigma: FaceId, g0: &CoefficientFunction) -> Result<BlockFlatness> {
    let data = connection_data(pair, sigma, g0)?;
    let points: Vec<LatticePoint> = data.matrices.iter().map(|m| m.n.clone()).collect();
    let derivs: Vec<Vec<(LatticePoint, QMatrix)>> = points
        .par_iter()
        .map(|n| derivative_matrices(pair, sigma, g0, &data.basis, n))
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();
    for i in 0..points.len() {
        for j in i..points.len() {
            checks.push(compare(
                &points[i],
                &points[j],
                &data.matrices[i].matrix,
                &data.matrices[j].matrix,
                &derivs[i][j].1,
                &derivs[j][i].1,
            ));
        }
    }
    Ok(BlockFlatness {
        derivative_symmetric: checks.iter().all(|c| c.derivative_symmetric),
        commuting: checks.iter().all(|c| c.commuting),
        integrable: checks.iter().all(|c| c.integrable),
        data,
        checks,
    })
}

/// One summand `R₁(f,θ) ⊗ R̂₁(g,θ*)` with the connection acting on the second factor.
#[derive(Clone, Debug, Serialize)]
pub struct ConnectionBlock {
    pub face: usize,
    pub dual_face: usize,
    pub r1_f_dim: usize,
    pub summand_dim: usize,
    pub flatness: BlockFlatness,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectionBundle {
    pub blocks: Vec<ConnectionBlock>,
    pub derivative_symmetric: bool,
    pub commuting: bool,
    pub integrable: bool,
}

/// Connection blocks over every face `θ` whose summand is nonzero; `g` lives on `Δ^∨`.
pub fn connection_on_hb(pair: &GorensteinPair, f: &CoefficientFunction, g0: &CoefficientFunction) -> Result<ConnectionBundle> {
    check_nondegenerate(pair, f)?;
    let swapped = pair.swapped();
    check_nondegenerate(&swapped, g0)?;
    let ids: Vec<FaceId> = pair.faces().ids().collect();
    let blocks: Vec<Option<ConnectionBlock>> = ids
        .par_iter()
        .map(|&t| -> Result<Option<ConnectionBlock>> {
            let r1_f_dim = r1(pair, t, f, pair.faces().face(t).dim + 2).total();
            if r1_f_dim == 0 {
                return Ok(None);
            }
            let star = pair.dual_face(t);
            let hat_dim = r1_hat_default(&swapped, star, g0)?.total();
            if hat_dim == 0 {
                return Ok(None);
            }
            let flatness = block_flatness(&swapped, star, g0)?;
            Ok(Some(ConnectionBlock {
                face: t.0,
                dual_face: star.0,
                r1_f_dim,
                summand_dim: r1_f_dim * hat_dim,
                flatness,
            }))
        })
        .collect::<Result<_>>()?;
    let blocks: Vec<ConnectionBlock> = blocks.into_iter().flatten().collect();
    Ok(ConnectionBundle {
        derivative_symmetric: blocks.iter().all(|b| b.flatness.derivative_symmetric),
        commuting: blocks.iter().all(|b| b.flatness.commuting),
        integrable: blocks.iter().all(|b| b.flatness.integrable),
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobian::random_nondegenerate;
    use crate::scalar::rat;

    fn triangle() -> GorensteinPair {
        let v: Vec<LatticePoint> = [[1, 0], [0, 1], [-1, -1]].iter().map(|c| LatticePoint(c.to_vec())).collect();
        GorensteinPair::from_polytope(&v).unwrap()
    }

    #[test]
    fn zero_face_basis_is_the_unit() {
        let p = triangle().swapped();
        let g = random_nondegenerate(&p, 7, 20).unwrap();
        assert_eq!(basis_select(&p, p.faces().zero(), &g).unwrap(), vec![LatticePoint::zero(3)]);
    }

    #[test]
    fn dual_triangle_basis_has_one_monomial_per_level() {
        let p = triangle().swapped();
        let g = random_nondegenerate(&p, 7, 20).unwrap();
        let basis = basis_select(&p, p.faces().top(), &g).unwrap();
        let levels: Vec<i64> = basis.iter().map(|c| p.degree_m(c)).collect();
        assert_eq!(levels, vec![1, 2]);
    }

    #[test]
    fn matrices_depend_on_the_base_point() {
        let p = triangle().swapped();
        let g1 = random_nondegenerate(&p, 7, 20).unwrap();
        let g2 = random_nondegenerate(&p, 8, 20).unwrap();
        let a = connection_data(&p, p.faces().top(), &g1).unwrap();
        let b = connection_data(&p, p.faces().top(), &g2).unwrap();
        assert_ne!(a.matrices[0].matrix, b.matrices[0].matrix);
    }

    #[test]
    fn equal_points_are_trivially_flat() {
        let p = triangle().swapped();
        let g = random_nondegenerate(&p, 9, 20).unwrap();
        let n = p.delta()[0].clone();
        let c = flatness_check(&p, p.faces().top(), &g, &n, &n).unwrap();
        assert!(c.derivative_symmetric && c.commuting && c.integrable);
    }

    #[test]
    fn degenerate_base_point_is_rejected() {
        let p = triangle().swapped();
        let g = CoefficientFunction::constant(p.delta(), rat(0));
        assert!(matches!(connection_data(&p, p.faces().top(), &g), Err(Error::DegenerateCoefficients(_))));
    }
}
