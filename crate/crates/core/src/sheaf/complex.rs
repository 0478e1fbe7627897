use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::fan::FanSpace;
use super::minimal::{Bidegree, FamilySpace, Section, SheafSections};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseMatrix};
use crate::scalar::{rat, Rational};

/// Dual bases `(m_i)` of `M` and `(n_i)` of `N`, as coordinate vectors.
#[derive(Clone, Debug)]
pub struct DualBases {
    pub m: Vec<Vec<Rational>>,
    pub n: Vec<Vec<Rational>>,
}

impl DualBases {
    pub fn standard(r: usize) -> DualBases {
        let unit = |i: usize| (0..r).map(|j| rat((i == j) as i64)).collect::<Vec<_>>();
        DualBases {
            m: (0..r).map(unit).collect(),
            n: (0..r).map(unit).collect(),
        }
    }

    /// `m_i` = column `i` of `u`, `n_i` = row `i` of `u⁻¹`.
    pub fn from_matrix(u: &Matrix<Rational>) -> Result<DualBases> {
        let inv = u
            .inverse()
            .ok_or_else(|| Error::Precondition("basis change is not invertible".into()))?;
        Ok(DualBases {
            m: (0..u.ncols()).map(|i| u.column(i)).collect(),
            n: (0..inv.nrows()).map(|i| inv.row(i).to_vec()).collect(),
        })
    }
}

/// Global sections `W = Γ(fan, L)` in every bidegree up to the truncation degree.
pub struct GlobalSections {
    sheaf: SheafSections,
    spaces: BTreeMap<Bidegree, FamilySpace>,
}

impl GlobalSections {
    pub fn new(sheaf: SheafSections) -> GlobalSections {
        let d = sheaf.max_degree();
        let degs: Vec<Bidegree> = (0..=d).flat_map(|t| (0..=t).map(move |a| (a, t - a))).collect();
        let spaces = degs.into_par_iter().map(|deg| (deg, sheaf.global_sections(deg))).collect();
        GlobalSections { sheaf, spaces }
    }

    pub fn sheaf(&self) -> &SheafSections {
        &self.sheaf
    }

    pub fn fan(&self) -> &FanSpace {
        self.sheaf.fan()
    }

    pub fn max_degree(&self) -> u32 {
        self.sheaf.max_degree()
    }

    pub fn dim(&self, deg: Bidegree) -> usize {
        self.spaces.get(&deg).map_or(0, FamilySpace::dim)
    }

    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        self.spaces.iter().map(|(&k, v)| (k, v.dim())).collect()
    }

    /// Matrix of multiplication by `Σ λ_i x_i` (or `Σ λ_i y_i`) from bidegree `deg`.
    pub fn action(&self, lambda: &[Rational], y_side: bool, deg: Bidegree) -> Matrix<Rational> {
        let (a, b) = deg;
        let target = if y_side { (a, b + 1) } else { (a + 1, b) };
        let src = &self.spaces[&deg];
        let dst = &self.spaces[&target];
        let mut cols = Vec::with_capacity(src.dim());
        for v in &src.kernel.basis {
            let fam = self.sheaf.family_sections(src, v);
            let moved: Vec<Section> = src
                .members
                .iter()
                .zip(&fam)
                .map(|(&m, s)| self.sheaf.multiply(s, &self.fan().linear_form(m, lambda, y_side)))
                .collect();
            let w = self.sheaf.family_vector(dst, target, &moved);
            cols.push(dst.kernel.coordinates(&w));
        }
        Matrix::from_columns(&cols, dst.dim())
    }
}

/// One graded piece of `W ⊗ Λ*N`: total degree `t = deg_x + deg_y` and grading `deg_x − deg_y + deg Λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WPiece {
    pub total_degree: u32,
    pub grading: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyCell {
    pub total_degree: u32,
    pub grading: i64,
    pub chain_dim: usize,
    pub dim: usize,
}

/// The complex `(W ⊗ Λ*N, d)` with `d = Σ x_i ⊗ contr(m_i) + Σ y_i ⊗ (n_i ∧)`.
pub struct WComplex {
    w: GlobalSections,
    bases: DualBases,
}

type Block = (u32, u32, u32);

impl WComplex {
    pub fn new(w: GlobalSections, bases: DualBases) -> WComplex {
        WComplex { w, bases }
    }

    pub fn sections(&self) -> &GlobalSections {
        &self.w
    }

    fn rank(&self) -> usize {
        self.w.fan().rank()
    }

    /// Blocks `(a, b, P)` of a piece, with their offsets.
    fn blocks(&self, piece: WPiece) -> (Vec<(Block, usize)>, usize) {
        let r = self.rank() as u32;
        let mut out = Vec::new();
        let mut off = 0;
        let t = piece.total_degree;
        for a in 0..=t {
            let b = t - a;
            let p = piece.grading - a as i64 + b as i64;
            if p < 0 || p > r as i64 {
                continue;
            }
            let dim_w = self.w.dim((a, b));
            if dim_w == 0 {
                continue;
            }
            for mask in 0u32..(1 << r) {
                if mask.count_ones() as i64 != p {
                    continue;
                }
                out.push(((a, b, mask), off));
                off += dim_w;
            }
        }
        (out, off)
    }

    pub fn piece_dim(&self, piece: WPiece) -> usize {
        self.blocks(piece).1
    }

    /// Differential from `piece` to the piece of total degree one higher.
    pub fn differential(&self, piece: WPiece) -> SparseMatrix<Rational> {
        let r = self.rank();
        let next = WPiece {
            total_degree: piece.total_degree + 1,
            grading: piece.grading,
        };
        let (src, nsrc) = self.blocks(piece);
        let (dst, ndst) = self.blocks(next);
        let index: BTreeMap<Block, usize> = dst.into_iter().collect();
        let mut triplets = Vec::new();
        let mut actions: BTreeMap<(usize, bool, Bidegree), Matrix<Rational>> = BTreeMap::new();
        for ((a, b, mask), off) in src {
            for i in 0..r {
                // x'_i = ⟨·, n_i⟩ acts with contraction by m_i
                for (y_side, form, vec) in [(false, &self.bases.n[i], &self.bases.m[i]), (true, &self.bases.m[i], &self.bases.n[i])] {
                    let act = actions
                        .entry((i, y_side, (a, b)))
                        .or_insert_with(|| self.w.action(form, y_side, (a, b)));
                    let target_deg = if y_side { (a, b + 1) } else { (a + 1, b) };
                    for (k, c) in vec.iter().enumerate() {
                        if num_traits::Zero::is_zero(c) {
                            continue;
                        }
                        let bit = 1u32 << k;
                        let (new_mask, sign) = if y_side {
                            if mask & bit != 0 {
                                continue;
                            }
                            (mask | bit, wedge_sign(mask, k))
                        } else {
                            if mask & bit == 0 {
                                continue;
                            }
                            (mask & !bit, wedge_sign(mask, k))
                        };
                        let Some(&toff) = index.get(&(target_deg.0, target_deg.1, new_mask)) else {
                            continue;
                        };
                        let coef = c.clone() * rat(sign);
                        for row in 0..act.nrows() {
                            for col in 0..act.ncols() {
                                let v = &act[(row, col)];
                                if !num_traits::Zero::is_zero(v) {
                                    triplets.push((toff + row, off + col, coef.clone() * v.clone()));
                                }
                            }
                        }
                    }
                }
            }
        }
        SparseMatrix::from_triplets(ndst, nsrc, triplets)
    }

    /// Gradings that can occur up to total degree `t`.
    fn gradings(&self, t: u32) -> std::ops::RangeInclusive<i64> {
        -(t as i64)..=(t as i64 + self.rank() as i64)
    }

    /// Cohomology dimensions of every piece with total degree `≤ window`.
    ///
    /// Needs the sections up to `window + 1`.
    pub fn cohomology(&self, window: u32) -> Result<Vec<CohomologyCell>> {
        if window + 1 > self.w.max_degree() {
            return Err(Error::TruncationTooSmall {
                degree: self.w.max_degree() as usize,
                reason: format!("cohomology up to degree {window} needs sections up to {}", window + 1),
            });
        }
        let pieces: Vec<WPiece> = (0..=window + 1)
            .flat_map(|t| {
                self.gradings(window + 1).map(move |g| WPiece {
                    total_degree: t,
                    grading: g,
                })
            })
            .collect();
        // rank of d out of each piece with total degree ≤ window
        let ranks: BTreeMap<WPiece, usize> = pieces
            .par_iter()
            .filter(|p| p.total_degree <= window)
            .map(|&p| (p, self.differential(p).rank()))
            .collect();
        let mut cells = Vec::new();
        for t in 0..=window {
            for g in self.gradings(window + 1) {
                let p = WPiece {
                    total_degree: t,
                    grading: g,
                };
                let dim = self.piece_dim(p);
                if dim == 0 {
                    continue;
                }
                let out = ranks[&p];
                let inc = if t == 0 {
                    0
                } else {
                    ranks[&WPiece {
                        total_degree: t - 1,
                        grading: g,
                    }]
                };
                cells.push(CohomologyCell {
                    total_degree: t,
                    grading: g,
                    chain_dim: dim,
                    dim: dim - out - inc,
                });
            }
        }
        Ok(cells)
    }

    /// `d ∘ d = 0` on every piece whose image stays within the truncation.
    pub fn squares_to_zero(&self) -> bool {
        let d = self.w.max_degree();
        (0..d.saturating_sub(1)).all(|t| {
            self.gradings(d).all(|g| {
                let p = WPiece {
                    total_degree: t,
                    grading: g,
                };
                let q = WPiece {
                    total_degree: t + 1,
                    grading: g,
                };
                self.differential(q).mul(&self.differential(p)).is_zero()
            })
        })
    }
}

/// Sign of inserting or removing index `k` in the ascending wedge `mask`.
pub(crate) fn wedge_sign(mask: u32, k: usize) -> i64 {
    if (mask & ((1u32 << k) - 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Cone, ConePair, LatticePoint};

    fn quadrant() -> ConePair {
        ConePair::new(Cone::from_rays(&[LatticePoint(vec![1, 0]), LatticePoint(vec![0, 1])]).unwrap())
    }

    fn complex(pair: &ConePair, origin: usize, d: u32, bases: DualBases) -> WComplex {
        let fan = FanSpace::dual_pairs(pair);
        let l = SheafSections::minimal(&fan, origin, d).unwrap();
        WComplex::new(GlobalSections::new(l), bases)
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_sign(0b000, 1), 1);
        assert_eq!(wedge_sign(0b001, 1), -1);
        assert_eq!(wedge_sign(0b011, 2), 1);
    }

    #[test]
    fn constants_are_one_dimensional() {
        let c = complex(&quadrant(), 0, 3, DualBases::standard(2));
        assert_eq!(c.sections().dim((0, 0)), 1);
    }

    #[test]
    fn quadrant_sections_match_monomial_count() {
        // Φ for the quadrant is four coordinate-plane pieces glued along axes:
        // W_{a,b} = functions on the union, counted directly
        let c = complex(&quadrant(), 0, 4, DualBases::standard(2));
        for a in 0..=2u32 {
            for b in 0..=2u32 {
                let expect = if a == 0 && b == 0 {
                    1
                } else if a == 0 || b == 0 {
                    // any polynomial on the x-plane (or y-plane); the mixed planes are forced
                    (a + b + 1) as usize
                } else {
                    // x1^i x2^(a−i) y1^j y2^(b−j) survives only on the planes
                    // (x1, y2) and (x2, y1)
                    2
                };
                assert_eq!(c.sections().dim((a, b)), expect, "bidegree ({a},{b})");
            }
        }
    }

    #[test]
    fn differential_squares_to_zero_and_is_basis_independent() {
        let std = complex(&quadrant(), 0, 4, DualBases::standard(2));
        assert!(std.squares_to_zero());
        let u = Matrix::from_rows(vec![vec![rat(2), rat(1)], vec![rat(1), rat(1)]]);
        let other = complex(&quadrant(), 0, 4, DualBases::from_matrix(&u).unwrap());
        let p = WPiece {
            total_degree: 1,
            grading: 1,
        };
        assert_eq!(std.differential(p), other.differential(p));
        let dims = |c: &WComplex| c.cohomology(3).unwrap().iter().map(|x| x.dim).collect::<Vec<_>>();
        assert_eq!(dims(&std), dims(&other));
    }

    #[test]
    fn quadrant_cohomology_vanishes() {
        let c = complex(&quadrant(), 0, 4, DualBases::standard(2));
        assert!(c.cohomology(3).unwrap().iter().all(|x| x.dim == 0));
    }
}
