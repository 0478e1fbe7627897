use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::scalar::{format_rational, ratio, Rational};

/// Rational values on the degree-one lattice points of a cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientFunction {
    values: BTreeMap<LatticePoint, Rational>,
}

impl CoefficientFunction {
    /// Values on `domain`; points of `domain` missing from `values` get 0.
    pub fn new(domain: &[LatticePoint], values: impl IntoIterator<Item = (LatticePoint, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<LatticePoint, Rational> = domain.iter().map(|p| (p.clone(), Rational::zero())).collect();
        for (p, v) in values {
            match map.get_mut(&p) {
                Some(slot) => *slot = v,
                None => return Err(Error::Validation(format!("point {:?} is not a degree-one point", p.0))),
            }
        }
        Ok(CoefficientFunction { values: map })
    }

    pub fn constant(domain: &[LatticePoint], c: Rational) -> Self {
        CoefficientFunction {
            values: domain.iter().map(|p| (p.clone(), c.clone())).collect(),
        }
    }

    /// Nonzero values `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 5` drawn from a seeded stream.
    pub fn random(domain: &[LatticePoint], rng: &mut impl Rng) -> Self {
        let values = domain
            .iter()
            .map(|p| {
                let mut num = 0;
                while num == 0 {
                    num = rng.gen_range(-9..=9);
                }
                let den = rng.gen_range(1..=5);
                (p.clone(), ratio(num, den))
            })
            .collect();
        CoefficientFunction { values }
    }

    pub fn seeded(domain: &[LatticePoint], seed: u64) -> Self {
        Self::random(domain, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn get(&self, p: &LatticePoint) -> Rational {
        self.values.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn domain(&self) -> impl Iterator<Item = &LatticePoint> {
        self.values.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Rational)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(Zero::is_zero)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        CoefficientFunction {
            values: self.values.iter().map(|(p, v)| (p.clone(), v.clone() * c.clone())).collect(),
        }
    }

    /// The same function with one value replaced.
    pub fn with_value(&self, p: &LatticePoint, v: Rational) -> Self {
        let mut out = self.clone();
        out.values.insert(p.clone(), v);
        out
    }
}

impl Serialize for CoefficientFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            point: &'a LatticePoint,
            value: String,
        }
        let mut seq = s.serialize_seq(Some(self.values.len()))?;
        for (p, v) in &self.values {
            seq.serialize_element(&Entry {
                point: p,
                value: format_rational(v),
            })?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn domain() -> Vec<LatticePoint> {
        vec![LatticePoint(vec![0, 1]), LatticePoint(vec![1, 1])]
    }

    #[test]
    fn missing_points_default_to_zero() {
        let f = CoefficientFunction::new(&domain(), [(LatticePoint(vec![1, 1]), rat(3))]).unwrap();
        assert_eq!(f.get(&LatticePoint(vec![0, 1])), rat(0));
        assert_eq!(f.get(&LatticePoint(vec![1, 1])), rat(3));
    }

    #[test]
    fn foreign_point_is_rejected() {
        let res = CoefficientFunction::new(&domain(), [(LatticePoint(vec![2, 1]), rat(1))]);
        assert!(matches!(res, Err(Error::Validation(_))));
    }

    #[test]
    fn seeded_is_reproducible() {
        assert_eq!(CoefficientFunction::seeded(&domain(), 7), CoefficientFunction::seeded(&domain(), 7));
        assert!(!CoefficientFunction::seeded(&domain(), 7).iter().any(|(_, v)| v.is_zero()));
    }
}
