//! Desk-scale capacity bounds. Exceeding any of them is a capacity error,
//! not a panic, so callers get a predictable exit.

/// Largest monomial basis we will enumerate.
pub const MAX_BASIS: usize = 200_000;

/// Largest lattice `(Z/nu)^g` we will enumerate.
pub const MAX_LATTICE: usize = 200_000;

/// Largest full Heisenberg group order `n * nu^(2g)` accepted by the
/// brute-force oracles (Reynolds average, closure enumeration).
pub const MAX_ORACLE_GROUP: usize = 10_000;

/// Largest lattice-point count a single theta evaluation may sum over;
/// hit only when Im(Omega) is nearly degenerate.
pub const MAX_THETA_TERMS: usize = 5_000_000;
