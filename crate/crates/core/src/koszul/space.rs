use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::jacobian::CoefficientFunction;
use crate::lattice::{GorensteinPair, LatticePoint};
use crate::linalg::SparseMatrix;
use crate::scalar::{rat, Rational};
use crate::sheaf::wedge_sign;

/// `[m ⊕ n] ⊗ e_P` with `⟨m,n⟩ = 0`; bit `i` of `wedge` selects `e_{i+1}` of the standard basis of `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VElement {
    pub m: LatticePoint,
    pub n: LatticePoint,
    pub wedge: u32,
}

impl VElement {
    pub fn wedge_degree(&self) -> usize {
        self.wedge.count_ones() as usize
    }

    /// 1-based indices in ascending order.
    pub fn wedge_indices(&self) -> Vec<usize> {
        (0..32).filter(|i| self.wedge & (1 << i) != 0).map(|i| i + 1).collect()
    }
}

/// An indexed finite set of basis elements of `V`.
#[derive(Clone, Debug, Default)]
pub struct Piece {
    elements: Vec<VElement>,
    index: HashMap<VElement, usize>,
}

impl Piece {
    pub fn new(elements: Vec<VElement>) -> Piece {
        let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Piece { elements, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[VElement] {
        &self.elements
    }

    pub fn position(&self, e: &VElement) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// Lattice points of `K` and `K^∨` by degree, for enumerating basis elements of `V`.
pub struct VSpace<'a> {
    pair: &'a GorensteinPair,
    m_points: Vec<Vec<LatticePoint>>,
    n_points: Vec<Vec<LatticePoint>>,
}

impl<'a> VSpace<'a> {
    pub fn new(pair: &'a GorensteinPair, max_m: usize, max_n: usize) -> VSpace<'a> {
        let top = pair.faces().top();
        let dual_top = pair.dual_faces().top();
        VSpace {
            pair,
            m_points: (0..=max_m).map(|a| pair.face_points(top, a as i64, false)).collect(),
            n_points: (0..=max_n).map(|b| pair.dual_face_points(dual_top, b as i64, false)).collect(),
        }
    }

    pub fn pair(&self) -> &GorensteinPair {
        self.pair
    }

    pub fn rank(&self) -> usize {
        self.pair.rank()
    }

    fn wedges(&self, size: usize) -> impl Iterator<Item = u32> {
        let r = self.rank();
        (0u32..(1 << r)).filter(move |w| w.count_ones() as usize == size)
    }

    /// Elements with `deg m = a`, `deg n = b` and `|P| = size`.
    pub fn block(&self, a: usize, b: usize, size: usize) -> Vec<VElement> {
        let mut out = Vec::new();
        if size > self.rank() {
            return out;
        }
        for m in &self.m_points[a] {
            for n in &self.n_points[b] {
                if m.dot(n) != 0 {
                    continue;
                }
                for w in self.wedges(size) {
                    out.push(VElement {
                        m: m.clone(),
                        n: n.clone(),
                        wedge: w,
                    });
                }
            }
        }
        out
    }

    /// All elements with `deg m + deg n = k`.
    pub fn total_degree(&self, k: usize) -> Piece {
        let mut els = Vec::new();
        for a in 0..=k {
            for s in 0..=self.rank() {
                els.extend(self.block(a, k - a, s));
            }
        }
        Piece::new(els)
    }

    /// Elements with `deg m + deg n = k` and `deg m − deg n + |P| = weight`; `d_{f,g}` preserves the weight.
    pub fn weighted(&self, k: usize, weight: i64) -> Piece {
        let mut els = Vec::new();
        for a in 0..=k {
            let b = k - a;
            let s = weight - a as i64 + b as i64;
            if s >= 0 {
                els.extend(self.block(a, b, s as usize));
            }
        }
        Piece::new(els)
    }

    /// Elements with `2 deg m + |P| = grading` and `deg n ≤ cap`.
    pub fn hat_graded(&self, grading: usize, cap: usize) -> Piece {
        let mut els = Vec::new();
        for a in 0..=grading / 2 {
            let s = grading - 2 * a;
            for b in 0..=cap {
                els.extend(self.block(a, b, s));
            }
        }
        Piece::new(els)
    }
}

/// Image of one basis element under `d_{f,g}`, plus `[m ⊕ n] ⊗ (n ∧ P)` when `hat` is set.
pub fn apply(
    pair: &GorensteinPair,
    f: &CoefficientFunction,
    g: &CoefficientFunction,
    e: &VElement,
    hat: bool,
) -> Vec<(VElement, Rational)> {
    let r = pair.rank();
    let mut out = Vec::new();
    for (m, fm) in f.iter() {
        if fm.is_zero() {
            continue;
        }
        let m2 = m + &e.m;
        if m2.dot(&e.n) != 0 {
            continue;
        }
        for i in (0..r).filter(|i| e.wedge & (1 << i) != 0) {
            if m.0[i] != 0 {
                let c = fm.clone() * rat(m.0[i] * wedge_sign(e.wedge, i));
                out.push((
                    VElement {
                        m: m2.clone(),
                        n: e.n.clone(),
                        wedge: e.wedge & !(1 << i),
                    },
                    c,
                ));
            }
        }
    }
    for (n, gn) in g.iter() {
        if gn.is_zero() {
            continue;
        }
        let n2 = n + &e.n;
        if e.m.dot(&n2) != 0 {
            continue;
        }
        for i in (0..r).filter(|i| e.wedge & (1 << i) == 0) {
            if n.0[i] != 0 {
                let c = gn.clone() * rat(n.0[i] * wedge_sign(e.wedge, i));
                out.push((
                    VElement {
                        m: e.m.clone(),
                        n: n2.clone(),
                        wedge: e.wedge | (1 << i),
                    },
                    c,
                ));
            }
        }
    }
    if hat {
        for i in (0..r).filter(|i| e.wedge & (1 << i) == 0) {
            if e.n.0[i] != 0 {
                out.push((
                    VElement {
                        m: e.m.clone(),
                        n: e.n.clone(),
                        wedge: e.wedge | (1 << i),
                    },
                    rat(e.n.0[i] * wedge_sign(e.wedge, i)),
                ));
            }
        }
    }
    out
}

/// Matrix of the differential from `source` to `target`. Images outside `target` are
/// dropped when `keep` accepts them, and are a bug otherwise.
pub fn differential_matrix(
    pair: &GorensteinPair,
    f: &CoefficientFunction,
    g: &CoefficientFunction,
    source: &Piece,
    target: &Piece,
    hat: bool,
    drop: impl Fn(&VElement) -> bool,
) -> SparseMatrix<Rational> {
    let mut triplets = Vec::new();
    for (j, e) in source.elements().iter().enumerate() {
        for (img, c) in apply(pair, f, g, e, hat) {
            match target.position(&img) {
                Some(i) => triplets.push((i, j, c)),
                None => assert!(drop(&img), "image {img:?} escapes the target piece"),
            }
        }
    }
    SparseMatrix::from_triplets(target.len(), source.len(), triplets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ray() -> GorensteinPair {
        GorensteinPair::new(crate::lattice::Cone::from_rays(&[LatticePoint(vec![1])]).unwrap()).unwrap()
    }

    #[test]
    fn ray_pieces() {
        let p = ray();
        let v = VSpace::new(&p, 3, 3);
        let k0 = v.total_degree(0);
        assert_eq!(k0.len(), 2);
        assert_eq!(v.total_degree(1).len(), 4);
        // [1,1] is killed by the pairing
        assert_eq!(v.total_degree(2).len(), 4);
    }

    #[test]
    fn ray_differential_on_unit() {
        let p = ray();
        let f = CoefficientFunction::constant(p.delta(), rat(3));
        let g = CoefficientFunction::constant(p.delta_dual(), rat(5));
        let e = VElement {
            m: LatticePoint(vec![0]),
            n: LatticePoint(vec![0]),
            wedge: 1,
        };
        let img = apply(&p, &f, &g, &e, false);
        assert_eq!(
            img,
            vec![(
                VElement {
                    m: LatticePoint(vec![1]),
                    n: LatticePoint(vec![0]),
                    wedge: 0
                },
                rat(3)
            )]
        );
    }
}
