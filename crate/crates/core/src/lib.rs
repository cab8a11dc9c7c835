//! Finite Heisenberg group representation theory and numerical recovery of
//! the Coble hypersurfaces.
//!
//! The library has two halves.
//!
//! The exact half works over the finite group `K = (Z/nu)^g` and the
//! Heisenberg group `H_n` acting on `V = C^K` by the Schroedinger
//! representation. Phases live in `Z/n` (exponents of a fixed primitive
//! n-th root of unity), so invariant subspaces, isotypic decompositions and
//! the derivative map `S^n V -> Hom(V*, S^{n-1} V)` are all computed with
//! integer or rational arithmetic; a brute-force Reynolds average over the
//! whole group, run in the cyclotomic field `Q(zeta_n)`, doubles as an
//! independent oracle.
//!
//! The numerical half evaluates Riemann theta functions with
//! characteristics to embed an abelian variety `A = C^g/(Z^g + Omega Z^g)`
//! into `P^{nu^g - 1}`, assembles vanishing and singularity constraint
//! systems from sample points, and reads ranks and nullspaces off the
//! singular value spectrum. For `g = 2` this recovers the unique invariant
//! cubic in `P^8` singular along the abelian surface; for `g = 3` the
//! unique invariant quartic in `P^7` singular along the Kummer threefold.
//!
//! Everything downstream of a seed is deterministic: identical inputs give
//! byte-identical reports.

pub mod bounds;
pub mod coble;
mod error;
pub mod exact;
pub mod heisenberg;
pub mod json;
pub mod lattice;
pub mod monomial;
pub mod par;
pub mod theta;

pub use error::{Error, Result};

/// Canonical Heisenberg level for a polarization level: `n = nu` for odd
/// `nu`, `n = 2 nu` for even `nu`.
pub fn canonical_level(nu: u32) -> u32 {
    if nu.is_multiple_of(2) {
        2 * nu
    } else {
        nu
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_level_parity() {
        assert_eq!(canonical_level(3), 3);
        assert_eq!(canonical_level(2), 4);
        assert_eq!(canonical_level(5), 5);
        assert_eq!(canonical_level(4), 8);
    }
}
