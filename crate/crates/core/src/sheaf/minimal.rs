use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::fan::FanSpace;
use super::poly::{bigraded_monomials, Monomial, Poly};
use crate::error::{Error, Result};
use crate::graded::GradedDims;
use crate::linalg::{EchelonBasis, Kernel, SparseMatrix};
use crate::scalar::{rat, Rational};

/// Element of the free module over one cone: one coefficient polynomial per generator.
pub type Section = Vec<Poly>;

/// Bidegree `(deg_x, deg_y)`.
pub type Bidegree = (u32, u32);

/// A free generator over a cone, with its restrictions to every proper face
/// that carries sections.
#[derive(Clone, Debug)]
pub struct Generator {
    pub bidegree: Bidegree,
    pub boundary: BTreeMap<usize, Section>,
}

/// The minimal flabby locally free sheaf `L` on a fan originating at one cone,
/// computed up to total degree `D`.
#[derive(Clone, Debug)]
pub struct SheafSections {
    fan: FanSpace,
    origin: usize,
    max_degree: u32,
    support: Vec<bool>,
    generators: Vec<Vec<Generator>>,
}

/// Compatible families of sections over a set of cones, in one bidegree.
#[derive(Clone, Debug)]
pub struct FamilySpace {
    pub bidegree: Bidegree,
    /// Cones carrying the unknowns.
    pub members: Vec<usize>,
    offsets: Vec<usize>,
    pub ambient_dim: usize,
    pub kernel: Kernel<Rational>,
}

impl FamilySpace {
    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorSummary {
    pub theta: usize,
    pub sigma: usize,
    pub bidegrees: Vec<Bidegree>,
}

impl SheafSections {
    /// Builds `L` on `fan` starting from cone `origin`, with all data up to total degree `max_degree`.
    pub fn minimal(fan: &FanSpace, origin: usize, max_degree: u32) -> Result<SheafSections> {
        let top_dim = fan.cones().iter().map(|c| c.dim()).max().unwrap_or(0);
        if (max_degree as usize) < top_dim {
            return Err(Error::TruncationTooSmall {
                degree: max_degree as usize,
                reason: format!("cones of dimension {top_dim} need at least that degree"),
            });
        }
        let support: Vec<bool> = (0..fan.len()).map(|c| fan.le(origin, c)).collect();
        let mut sheaf = SheafSections {
            fan: fan.clone(),
            origin,
            max_degree,
            support,
            generators: vec![Vec::new(); fan.len()],
        };
        for tau in 0..fan.len() {
            if !sheaf.support[tau] {
                continue;
            }
            if tau == origin {
                sheaf.generators[tau].push(Generator {
                    bidegree: (0, 0),
                    boundary: BTreeMap::new(),
                });
                continue;
            }
            let members: Vec<usize> = fan.facets(tau).into_iter().filter(|&c| sheaf.support[c]).collect();
            let checked: Vec<usize> = fan
                .proper_faces(tau)
                .into_iter()
                .filter(|&c| sheaf.support[c] && !members.contains(&c))
                .collect();
            let spaces = sheaf.all_families(&members, &checked);
            let gens = sheaf.select_generators(tau, &spaces, &members)?;
            sheaf.generators[tau] = gens;
        }
        Ok(sheaf)
    }

    pub fn fan(&self) -> &FanSpace {
        &self.fan
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn supports(&self, c: usize) -> bool {
        self.support[c]
    }

    pub fn generators(&self, c: usize) -> &[Generator] {
        &self.generators[c]
    }

    /// Generator counts over cone `c` by total degree.
    pub fn generator_degrees(&self, c: usize) -> GradedDims {
        self.generators[c].iter().map(|g| ((g.bidegree.0 + g.bidegree.1) as i64, 1)).collect()
    }

    pub fn summary(&self) -> Vec<GeneratorSummary> {
        (0..self.fan.len())
            .filter(|&c| self.support[c])
            .map(|c| GeneratorSummary {
                theta: self.fan.cone(c).theta.0,
                sigma: self.fan.cone(c).sigma.0,
                bidegrees: self.generators[c].iter().map(|g| g.bidegree).collect(),
            })
            .collect()
    }

    /// Basis `(generator, monomial)` of the sections over `c` in bidegree `(a, b)`.
    pub fn basis(&self, c: usize, (a, b): Bidegree) -> Vec<(usize, Monomial)> {
        let cone = self.fan.cone(c);
        let mut out = Vec::new();
        for (j, g) in self.generators[c].iter().enumerate() {
            let (ga, gb) = g.bidegree;
            if ga > a || gb > b {
                continue;
            }
            for m in bigraded_monomials(cone.dim_x, cone.dim_y, a - ga, b - gb) {
                out.push((j, m));
            }
        }
        out
    }

    pub fn section_dim(&self, c: usize, deg: Bidegree) -> usize {
        self.basis(c, deg).len()
    }

    pub fn zero_section(&self, c: usize) -> Section {
        vec![Poly::zero(self.fan.cone(c).dim()); self.generators[c].len()]
    }

    pub fn encode(&self, c: usize, deg: Bidegree, s: &Section) -> Vec<Rational> {
        self.basis(c, deg).iter().map(|(j, m)| s[*j].coeff(m)).collect()
    }

    pub fn decode(&self, c: usize, deg: Bidegree, v: &[Rational]) -> Section {
        let mut s = self.zero_section(c);
        for ((j, m), x) in self.basis(c, deg).into_iter().zip(v) {
            s[j].add_term(m, x.clone());
        }
        s
    }

    /// Restriction of a section over `from` to its face `to`.
    pub fn restrict(&self, from: usize, s: &Section, to: usize) -> Section {
        if from == to {
            return s.clone();
        }
        debug_assert!(self.fan.le(to, from));
        let mut out = self.zero_section(to);
        if !self.support[to] {
            return out;
        }
        let n = self.fan.cone(to).dim();
        let images: Vec<Poly> = self.fan.restriction_forms(from, to).iter().map(|f| Poly::linear(f)).collect();
        for (j, p) in s.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let q = p.substitute(&images, n);
            let e = &self.generators[from][j].boundary[&to];
            for (k, ek) in e.iter().enumerate() {
                if !ek.is_zero() {
                    out[k].add_scaled(&q.mul(ek), &rat(1));
                }
            }
        }
        out
    }

    /// Multiplies a section over `c` by a linear form in the local coordinates of `c`.
    pub fn multiply(&self, s: &Section, form: &[Rational]) -> Section {
        let l = Poly::linear(form);
        s.iter().map(|p| p.mul(&l)).collect()
    }

    /// Compatible families over `members` agreeing on every cone of `checked`.
    pub fn families(&self, members: &[usize], checked: &[usize], deg: Bidegree) -> FamilySpace {
        let mut offsets = Vec::with_capacity(members.len());
        let mut total = 0;
        for &m in members {
            offsets.push(total);
            total += self.section_dim(m, deg);
        }
        let mut triplets = Vec::new();
        let mut row = 0;
        for &rho in checked {
            let over: Vec<usize> = (0..members.len()).filter(|&i| self.fan.le(rho, members[i])).collect();
            if over.len() < 2 {
                continue;
            }
            let rdim = self.section_dim(rho, deg);
            if rdim == 0 {
                continue;
            }
            let blocks: Vec<Vec<Vec<Rational>>> = over
                .iter()
                .map(|&i| self.restriction_columns(members[i], rho, deg))
                .collect();
            for l in 1..over.len() {
                for (sign, idx) in [(rat(1), 0), (rat(-1), l)] {
                    let i = over[idx];
                    for (col, image) in blocks[idx].iter().enumerate() {
                        for (k, v) in image.iter().enumerate() {
                            if !num_traits::Zero::is_zero(v) {
                                triplets.push((row + k, offsets[i] + col, sign.clone() * v.clone()));
                            }
                        }
                    }
                }
                row += rdim;
            }
        }
        let kernel = SparseMatrix::from_triplets(row, total, triplets).kernel();
        FamilySpace {
            bidegree: deg,
            members: members.to_vec(),
            offsets,
            ambient_dim: total,
            kernel,
        }
    }

    /// Images of the basis of sections over `from` under restriction to `to`.
    fn restriction_columns(&self, from: usize, to: usize, deg: Bidegree) -> Vec<Vec<Rational>> {
        let mut unit = self.zero_section(from);
        self.basis(from, deg)
            .into_iter()
            .map(|(j, m)| {
                let n = unit[j].nvars();
                unit[j] = Poly::monomial(m, rat(1));
                let img = self.restrict(from, &unit, to);
                unit[j] = Poly::zero(n);
                self.encode(to, deg, &img)
            })
            .collect()
    }

    /// Splits a family vector into per-member sections.
    pub fn family_sections(&self, space: &FamilySpace, v: &[Rational]) -> Vec<Section> {
        space
            .members
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let start = space.offsets[i];
                let len = self.section_dim(m, space.bidegree);
                self.decode(m, space.bidegree, &v[start..start + len])
            })
            .collect()
    }

    pub fn family_vector(&self, space: &FamilySpace, deg: Bidegree, sections: &[Section]) -> Vec<Rational> {
        let mut out = Vec::with_capacity(space.ambient_dim);
        for (&m, s) in space.members.iter().zip(sections) {
            out.extend(self.encode(m, deg, s));
        }
        out
    }

    fn bidegrees(&self) -> Vec<Bidegree> {
        let d = self.max_degree;
        (0..=d).flat_map(|t| (0..=t).map(move |a| (a, t - a))).collect()
    }

    fn all_families(&self, members: &[usize], checked: &[usize]) -> HashMap<Bidegree, FamilySpace> {
        self.bidegrees()
            .into_par_iter()
            .map(|deg| (deg, self.families(members, checked, deg)))
            .collect()
    }

    /// Echelon-greedy lift of a basis of `L(∂τ) / m·L(∂τ)` in each bidegree.
    fn select_generators(
        &self,
        tau: usize,
        spaces: &HashMap<Bidegree, FamilySpace>,
        members: &[usize],
    ) -> Result<Vec<Generator>> {
        let r = self.fan.rank();
        let mut gens = Vec::new();
        let faces: Vec<usize> = self.fan.proper_faces(tau).into_iter().filter(|&c| self.support[c]).collect();
        for deg in self.bidegrees() {
            let space = &spaces[&deg];
            if space.dim() == 0 {
                continue;
            }
            let mut ech = EchelonBasis::new(space.ambient_dim);
            let (a, b) = deg;
            for (prev, y_side) in [(a.checked_sub(1).map(|x| (x, b)), false), (b.checked_sub(1).map(|y| (a, y)), true)] {
                let Some(prev) = prev else { continue };
                let lower = &spaces[&prev];
                for v in &lower.kernel.basis {
                    let fam = self.family_sections(lower, v);
                    for i in 0..r {
                        let mut e = vec![rat(0); r];
                        e[i] = rat(1);
                        let moved: Vec<Section> = members
                            .iter()
                            .zip(&fam)
                            .map(|(&m, s)| self.multiply(s, &self.fan.linear_form(m, &e, y_side)))
                            .collect();
                        ech.insert(&self.family_vector(space, deg, &moved));
                    }
                }
            }
            for v in &space.kernel.basis {
                if !ech.insert(v) {
                    continue;
                }
                if a + b == self.max_degree && self.max_degree > 0 {
                    return Err(Error::TruncationTooSmall {
                        degree: self.max_degree as usize,
                        reason: format!("a generator appears in bidegree ({a}, {b})"),
                    });
                }
                let fam = self.family_sections(space, v);
                let mut boundary = BTreeMap::new();
                for &rho in &faces {
                    let comp = match members.iter().position(|&m| m == rho) {
                        Some(i) => fam[i].clone(),
                        None => {
                            let i = members.iter().position(|&m| self.fan.le(rho, m)).expect("face lies in a facet");
                            self.restrict(members[i], &fam[i], rho)
                        }
                    };
                    boundary.insert(rho, comp);
                }
                gens.push(Generator { bidegree: deg, boundary });
            }
        }
        Ok(gens)
    }

    /// Whether the sections over `c` restrict onto all compatible boundary families, degreewise.
    pub fn is_flabby_at(&self, c: usize) -> bool {
        if c == self.origin || !self.support[c] {
            return true;
        }
        let members: Vec<usize> = self.fan.facets(c).into_iter().filter(|&m| self.support[m]).collect();
        let checked: Vec<usize> = self
            .fan
            .proper_faces(c)
            .into_iter()
            .filter(|&m| self.support[m] && !members.contains(&m))
            .collect();
        self.bidegrees().into_iter().all(|deg| {
            let space = self.families(&members, &checked, deg);
            let mut ech = EchelonBasis::new(space.ambient_dim);
            for (j, m) in self.basis(c, deg) {
                let mut s = self.zero_section(c);
                s[j] = Poly::monomial(m, rat(1));
                let fam: Vec<Section> = members.iter().map(|&rho| self.restrict(c, &s, rho)).collect();
                ech.insert(&self.family_vector(&space, deg, &fam));
            }
            ech.rank() == space.dim()
        })
    }

    /// Global sections over every cone carrying the sheaf, in one bidegree.
    pub fn global_sections(&self, deg: Bidegree) -> FamilySpace {
        let carried: Vec<usize> = (0..self.fan.len()).filter(|&c| self.support[c]).collect();
        let members: Vec<usize> = carried
            .iter()
            .copied()
            .filter(|&c| carried.iter().all(|&d| d == c || !self.fan.le(c, d)))
            .collect();
        let checked: Vec<usize> = carried.into_iter().filter(|c| !members.contains(c)).collect();
        self.families(&members, &checked, deg)
    }
}
