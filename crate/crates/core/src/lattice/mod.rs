//! Lattices, cones, faces and the Gorenstein structure.

mod cone;
mod face;
mod pair;
mod points;

pub use cone::{integer_rank, Cone, LatticePoint};
pub use face::{Face, FaceId, FacePoset};
pub use pair::{carrier_face, ConePair, GorensteinPair};
pub use points::points_at_degree;
