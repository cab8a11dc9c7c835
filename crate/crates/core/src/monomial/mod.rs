//! Monomial modules over the Heisenberg group: bases, orbits, invariants,
//! isotypic decompositions, polynomial forms and the derivative map.

mod form;
mod hmap;
mod module;
mod reynolds;

pub use form::{Coeff, Monomial, RootMul, SparseForm, ToComplex};
pub use hmap::{h_map_matrix, verify_prop1, Prop1Report};
pub use module::{
    invariant_basis, invariant_dimension, invariant_orbits, isotypic_table, translation_orbits,
    IsotypicTable, ModuleKind, MonomialModule, TranslationOrbit,
};
pub use reynolds::reynolds_invariant_basis;
