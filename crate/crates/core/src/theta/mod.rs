//! Numerical side of the construction: period matrices, Riemann theta
//! functions with characteristics, and the level-nu projective embedding
//! whose coordinate system the Heisenberg group permutes.

mod embedding;
mod eval;
mod period;

pub use embedding::{
    embed_default, embedding_batch, embedding_batch_seq, embedding_coords,
    equivariance_selftest, even_theta_constants, min_even_theta_modulus, sample_embedded,
    sample_points, EmbeddingPoint, ThetaConstant,
};
pub use eval::{
    quasi_periodicity_selftest, theta_char, theta_char_with_radius, truncation_radius, DEFAULT_TOL,
};
pub use period::{PeriodMatrix, PeriodMatrixJson, MAX_GENUS};
