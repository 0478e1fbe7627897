//! The double Koszul complex `V = ℂ[(K⊕K^∨)₀] ⊗ Λ*N` with the differentials `d_{f,g}` and `d̂_{f,g}`.

mod graded;
mod hatted;
mod space;

pub use graded::{
    certify_coefficients, cohomology_d, cohomology_d_unchecked, decomposition_dims, verify_decomposition,
    CohomologyReport, Decomposition, DecompositionSummand, KoszulCell, DecompositionReport,
};
pub use hatted::{
    cohomology_dhat, cohomology_dhat_a, cohomology_dhat_unchecked, dhat_matrix, dhat_squares_to_zero, hb_assemble,
    quotient_dim, verify_hatted_decomposition, windowed_dim, CapStep, DhatReport, HatGrading, HattedDecompositionReport, HbAssembly,
    HbSummand,
};
pub use space::{apply, differential_matrix, Piece, VElement, VSpace};

#[cfg(test)]
mod tests;
