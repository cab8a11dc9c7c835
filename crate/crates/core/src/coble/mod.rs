//! Recovery of the invariant singular hypersurfaces (the cubic in P^8 and
//! the quartic in P^7) and numerical verification of the dimension claims
//! behind them.

mod nullspace;
pub mod recover;
mod report;
mod system;

pub use nullspace::{
    numerical_nullspace, rank_of_matrix, NullspaceReport, RankOptions, RankSpectrum,
};
pub use recover::{
    coble_hypersurface, full_monomial_basis, singular_invariant_space,
    verify_uniqueness_full_space, Hypersurface, HypersurfaceKind,
};
pub use report::{dimension_report, m_formula, DimensionReport, Prop3Witness};
pub use system::{assemble_system, assemble_system_seq, ConstraintSystem, SystemKind};
