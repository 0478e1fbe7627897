//! Minimal flabby locally free sheaves on fans of dual face pairs, their global
//! sections, and the Koszul-type differential on them.

mod complex;
mod fan;
mod minimal;
mod poly;
mod verify;

pub use complex::{CohomologyCell, DualBases, GlobalSections, WComplex, WPiece};
pub(crate) use complex::wedge_sign;
pub use fan::{FanCone, FanSpace};
pub use minimal::{Bidegree, FamilySpace, Generator, GeneratorSummary, Section, SheafSections};
pub use poly::{bigraded_monomials, monomials, Monomial, Poly};
pub use verify::{verify_origin_classes, verify_vanishing, VanishingReport, OriginReport};
