//! The equivariant derivative map h : S^n V -> V tensor S^(n-1) V,
//! F -> sum_x delta_x tensor dF/dT_x, restricted to H_n-invariants, and the
//! check of when it is bijective.
//!
//! Under the identification Hom(V^*, S^(n-1) V) = V tensor S^(n-1) V, this
//! is the map sending a form to its polar map. Both sides' invariant spaces
//! have orbit-sum bases, so the restriction is a small exact matrix whose
//! rank settles bijectivity.

use serde::Serialize;

use crate::exact::{ExactMatrix, Rational};
use crate::monomial::module::{invariant_basis, invariant_orbits, MonomialModule};
use crate::{canonical_level, Error, Result};

use num_traits::Zero;

/// Outcome of the bijectivity check at one (nu, g).
#[derive(Clone, Debug, Serialize)]
pub struct Prop1Report {
    pub nu: u32,
    pub g: u32,
    pub n: u32,
    pub dim_invariant_source: usize,
    pub dim_invariant_target: usize,
    pub rank: usize,
    pub bijective: bool,
}

/// Matrix of h restricted to invariants, rows indexed by weight-0 orbits
/// of V tensor S^(n-1) V (ascending representative), columns by the
/// invariant basis of S^n V (ascending orbit representative).
pub fn h_map_matrix(nu: u32, g: u32, n: u32) -> Result<ExactMatrix<Rational>> {
    h_map_parts(nu, g, n).map(|(m, _, _)| m)
}

fn h_map_parts(
    nu: u32,
    g: u32,
    n: u32,
) -> Result<(ExactMatrix<Rational>, usize, usize)> {
    if n != canonical_level(nu) {
        return Err(Error::parameter(format!(
            "level {n} does not match nu = {nu}; expected {}",
            canonical_level(nu)
        )));
    }
    if n < 2 {
        return Err(Error::parameter("need n >= 2 for the derivative map"));
    }
    let source = MonomialModule::symmetric_power(nu, g, n)?;
    let source_forms = invariant_basis(&source)?;
    let lower = MonomialModule::symmetric_power(nu, g, n - 1)?;
    let target = lower.tensor_with_standard()?;
    let target_orbits = invariant_orbits(&target);

    // Position of each target element inside the weight-0 orbit list.
    let mut orbit_of: Vec<Option<u32>> = vec![None; target.dim()];
    for (oi, orbit) in target_orbits.iter().enumerate() {
        for &e in &orbit.elems {
            orbit_of[e] = Some(oi as u32);
        }
    }

    let cols = source_forms.len();
    let rows = target_orbits.len();
    // Dense accumulation per column, then transpose into sparse rows.
    let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(cols);
    for form in &source_forms {
        // Expand h(F) = sum over monomials M, distinct variables x | M, of
        // coeff(M) * mult_x(M) at the tensor element (x, M / T_x).
        let mut dense: Vec<Rational> = vec![Rational::zero(); target.dim()];
        for (mon, coeff) in form.terms() {
            for (var, mult) in mon.powers() {
                let (_, quotient) = mon.without_one(var).expect("var divides mon");
                let m_idx = lower.monomial_index(&quotient)?;
                let e = target.tensor_index(var, m_idx)?;
                dense[e] += coeff * Rational::from_integer(mult.into());
            }
        }
        // h(F) is invariant, so it must be constant on weight-0 orbits and
        // vanish elsewhere; anything else is an internal inconsistency.
        let mut col = vec![Rational::zero(); rows];
        for (e, value) in dense.iter().enumerate() {
            if value.is_zero() {
                continue;
            }
            let Some(oi) = orbit_of[e] else {
                return Err(Error::structural(format!(
                    "derivative of an invariant form hit non-invariant element {e}"
                )));
            };
            col[oi as usize] = value.clone();
        }
        for (oi, orbit) in target_orbits.iter().enumerate() {
            for &e in &orbit.elems {
                if dense[e] != col[oi] {
                    return Err(Error::structural(
                        "derivative of an invariant form is not constant on an orbit".to_string(),
                    ));
                }
            }
        }
        columns.push(col);
    }

    let mut matrix = ExactMatrix::new(cols, Rational::from_integer(1.into()));
    // `r` walks the row index across every column family at once.
    #[allow(clippy::needless_range_loop)]
    for r in 0..rows {
        let entries = (0..cols)
            .filter(|&c| !columns[c][r].is_zero())
            .map(|c| (c as u32, columns[c][r].clone()))
            .collect();
        matrix.push_row(entries);
    }
    Ok((matrix, cols, rows))
}

/// Computes both invariant dimensions and the exact rank of h between them.
pub fn verify_prop1(nu: u32, g: u32, n: u32) -> Result<Prop1Report> {
    let (matrix, cols, rows) = h_map_parts(nu, g, n)?;
    let rank = matrix.rank();
    Ok(Prop1Report {
        nu,
        g,
        n,
        dim_invariant_source: cols,
        dim_invariant_target: rows,
        rank,
        bijective: cols == rows && rank == cols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    /// Dense snapshot of the h matrix (rows x cols).
    fn dense_h(nu: u32, g: u32, n: u32) -> Vec<Vec<Rational>> {
        let (m, cols, _rows) = h_map_parts(nu, g, n).unwrap();
        // Recover entries by applying the matrix to unit vectors.
        let mut out = Vec::new();
        for c in 0..cols {
            let mut unit = vec![Rational::zero(); cols];
            unit[c] = Rational::from_integer(1.into());
            out.push(m.apply(&unit));
        }
        // out[c][r]: transpose to row-major.
        let rows = out[0].len();
        (0..rows)
            .map(|r| (0..cols).map(|c| out[c][r].clone()).collect())
            .collect()
    }

    #[test]
    fn elliptic_curve_matrix_is_diagonal() {
        // nu = 3, g = 1: invariant cubics (T0^3+T1^3+T2^3, T0T1T2) map to
        // the two target orbit sums with coefficients 3 and 1.
        let m = dense_h(3, 1, 3);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0], vec![rat(3), rat(0)]);
        assert_eq!(m[1], vec![rat(0), rat(1)]);
    }

    #[test]
    fn bijective_for_cubic_and_quartic_levels() {
        let r = verify_prop1(3, 1, 3).unwrap();
        assert_eq!(
            (r.dim_invariant_source, r.dim_invariant_target, r.rank),
            (2, 2, 2)
        );
        assert!(r.bijective);

        let r = verify_prop1(3, 2, 3).unwrap();
        assert_eq!(
            (r.dim_invariant_source, r.dim_invariant_target, r.rank),
            (5, 5, 5)
        );
        assert!(r.bijective);

        let r = verify_prop1(2, 2, 4).unwrap();
        assert_eq!(
            (r.dim_invariant_source, r.dim_invariant_target, r.rank),
            (5, 5, 5)
        );
        assert!(r.bijective);

        let r = verify_prop1(2, 3, 4).unwrap();
        assert_eq!(
            (r.dim_invariant_source, r.dim_invariant_target, r.rank),
            (15, 15, 15)
        );
        assert!(r.bijective);
    }

    #[test]
    fn fails_beyond_quartic_levels() {
        // nu = n = 5, g = 1: source invariants 6, target 14; h is injective
        // but far from surjective.
        let r = verify_prop1(5, 1, 5).unwrap();
        assert_eq!(r.dim_invariant_source, 6);
        assert_eq!(r.dim_invariant_target, 14);
        assert_eq!(r.rank, 6);
        assert!(!r.bijective);
    }

    #[test]
    fn level_validation() {
        assert!(verify_prop1(3, 1, 6).is_err());
        assert!(verify_prop1(2, 1, 2).is_err());
    }
}
