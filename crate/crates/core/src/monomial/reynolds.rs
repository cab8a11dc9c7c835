//! Brute-force Reynolds projector onto the invariants of a monomial
//! module, averaging over the whole finite group in Q(zeta_n).
//!
//! Quadratic in the module dimension and linear in the group order, so it
//! is capacity-capped; its only job is to cross-check the orbit-sum
//! construction on small cases.

use crate::bounds::MAX_ORACLE_GROUP;
use crate::exact::{Cyclotomic, ExactMatrix, Rational, SparseRow};
use crate::monomial::module::MonomialModule;
use crate::{Error, Result};

/// Row-echelon basis (sparse rows over Q(zeta_n)) of the image of the
/// Reynolds projector P = |G|^-1 sum_h rho(h).
pub fn reynolds_invariant_basis(module: &MonomialModule) -> Result<Vec<SparseRow<Cyclotomic>>> {
    let n = module.n();
    let k = module.lattice().size();
    let order = n as u64 * (k as u64) * (k as u64);
    if order > MAX_ORACLE_GROUP as u64 {
        return Err(Error::capacity(format!(
            "group order {order} exceeds the Reynolds oracle bound {MAX_ORACLE_GROUP}"
        )));
    }
    let dim = module.dim();
    if dim > 2_000 {
        return Err(Error::capacity(format!(
            "module dimension {dim} too large for the dense Reynolds oracle"
        )));
    }
    let inv_order = Rational::new(1.into(), order.into());
    let mut matrix = ExactMatrix::new(dim, Cyclotomic::one(n)?);
    for e in 0..dim {
        // Column P e, as a sparse combination of basis elements. Support
        // stays inside the K-orbit of e, so a map keyed by element is small.
        let mut acc: std::collections::BTreeMap<usize, Cyclotomic> = std::collections::BTreeMap::new();
        for lambda in 0..n {
            for a in 0..k as u32 {
                for b in 0..k as u32 {
                    let (phase, target) = module.act_indexed(lambda, a, b, e);
                    let root = Cyclotomic::root(n, phase)?;
                    acc.entry(target)
                        .and_modify(|v| *v = v.add(&root))
                        .or_insert(root);
                }
            }
        }
        let row: SparseRow<Cyclotomic> = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(t, v)| (t as u32, v.scale(&inv_order)))
            .collect();
        matrix.push_row(row);
    }
    Ok(matrix.echelon().rows().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::same_row_span;
    use crate::monomial::module::{invariant_basis, invariant_orbits};

    /// Orbit-sum invariants as sparse cyclotomic rows for span comparison.
    fn orbit_rows(module: &MonomialModule) -> Vec<SparseRow<Cyclotomic>> {
        let n = module.n();
        invariant_orbits(module)
            .into_iter()
            .map(|o| {
                o.elems
                    .iter()
                    .map(|&e| (e as u32, Cyclotomic::one(n).unwrap()))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn matches_orbit_sums_on_elliptic_cubics() {
        let m = MonomialModule::symmetric_power(3, 1, 3).unwrap();
        let reynolds = reynolds_invariant_basis(&m).unwrap();
        let orbits = orbit_rows(&m);
        assert_eq!(reynolds.len(), 2);
        assert!(same_row_span(
            &reynolds,
            &orbits,
            m.dim(),
            Cyclotomic::one(3).unwrap()
        ));
        // And both agree with the form-level basis.
        assert_eq!(invariant_basis(&m).unwrap().len(), 2);
    }

    #[test]
    fn matches_orbit_sums_on_even_level_quartics() {
        // nu = 2: S^4 V at g = 1 (group order 16) and g = 2 (order 64).
        for g in [1u32, 2] {
            let m = MonomialModule::symmetric_power(2, g, 4).unwrap();
            let reynolds = reynolds_invariant_basis(&m).unwrap();
            let orbits = orbit_rows(&m);
            assert_eq!(reynolds.len(), if g == 1 { 2 } else { 5 });
            assert!(same_row_span(
                &reynolds,
                &orbits,
                m.dim(),
                Cyclotomic::one(4).unwrap()
            ));
        }
    }

    #[test]
    fn projects_to_zero_without_central_triviality() {
        // S^2 V at nu = 3: the central average kills everything.
        let m = MonomialModule::symmetric_power(3, 1, 2).unwrap();
        assert!(reynolds_invariant_basis(&m).unwrap().is_empty());
        // Same for the standard module.
        let v = MonomialModule::standard(3, 1).unwrap();
        assert!(reynolds_invariant_basis(&v).unwrap().is_empty());
    }

    #[test]
    fn tensor_module_invariants_match() {
        // V tensor S^2 V at nu = 3, g = 1: two invariant orbit sums.
        let t = MonomialModule::symmetric_power(3, 1, 2)
            .unwrap()
            .tensor_with_standard()
            .unwrap();
        let reynolds = reynolds_invariant_basis(&t).unwrap();
        let orbits = orbit_rows(&t);
        assert_eq!(reynolds.len(), orbits.len());
        assert!(same_row_span(
            &reynolds,
            &orbits,
            t.dim(),
            Cyclotomic::one(3).unwrap()
        ));
    }

    #[test]
    fn oracle_respects_capacity() {
        // Group order n * nu^(2g): nu = 3, g = 4 gives 3 * 3^8 = 19683,
        // past the 10^4 oracle bound. The module itself is fine (dim 81);
        // only the oracle refuses.
        let m = MonomialModule::standard(3, 4).unwrap();
        assert!(matches!(
            reynolds_invariant_basis(&m),
            Err(Error::Capacity(_))
        ));
    }
}
