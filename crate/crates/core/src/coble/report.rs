//! Dimension bookkeeping: the count m_n(g) of invariant degree-n forms
//! singular along the image, the graded pieces of the ideal in degrees
//! n-1 and n, and the polar-span check, all cross-checked against the
//! closed formulas where those exist.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::HashMap;

use crate::coble::recover::full_monomial_basis;
use crate::coble::{
    assemble_system, numerical_nullspace, rank_of_matrix, RankOptions, SystemKind,
};
use crate::exact::intertwiner_dimension;
use crate::lattice::Lattice;
use crate::monomial::{invariant_basis, Monomial, MonomialModule, SparseForm, ToComplex};
use crate::theta::{sample_embedded, PeriodMatrix, DEFAULT_TOL};
use crate::{Error, Result};

const MIN_POOL: usize = 40;
const NEAR_PRODUCT_EPS: f64 = 1e-8;

/// Closed formula for m_n(g), the dimension of the space of invariant
/// degree-n forms singular along the embedded variety; defined for the
/// cubic (nu = 3) and quartic (nu = 2) settings.
pub fn m_formula(n: u32, g: u32) -> Option<usize> {
    let g = g as i64;
    let value = match n {
        3 => (3i64.pow(g as u32) - 2i64.pow(g as u32 + 1) + 1) / 2,
        4 => (2i64.pow(g as u32) * (2i64.pow(g as u32) + 3) - 3i64.pow(g as u32 + 1) - 1) / 6,
        _ => return None,
    };
    usize::try_from(value).ok()
}

/// The numerical side of the surjectivity obstruction: the invariant part
/// of the degree-n ideal piece is strictly larger than the invariant part
/// of the source of the multiplication map, so that map cannot surject.
#[derive(Clone, Debug)]
pub struct Prop3Witness {
    pub m: usize,
    pub dim_ideal_n_invariant: usize,
    /// dim Hom(V, V) over the group, computed in exact arithmetic; this is
    /// the invariant dimension of the multiplication source.
    pub hom_v_v: usize,
    pub surjection_possible: bool,
}

#[derive(Clone, Debug)]
pub struct DimensionReport {
    pub n: u32,
    pub nu: u32,
    pub g: u32,
    pub big_n: usize,
    pub points_used: usize,
    /// dim (S^n V)^{H_n}.
    pub dim_invariant_forms: usize,
    /// Nullity of the invariant singularity system.
    pub m_computed: usize,
    pub m_formula: usize,
    /// Full monomial space of degree n-1 and the rank of its evaluation
    /// system on the image; the difference is dim I_{n-1}.
    pub eval_cols_nm1: usize,
    pub eval_rank_nm1: usize,
    pub dim_ideal_nm1: usize,
    pub expected_dim_ideal_nm1: Option<usize>,
    /// Nullity of the invariant vanishing system in degree n.
    pub dim_ideal_n_invariant: usize,
    pub expected_dim_ideal_n_invariant: Option<usize>,
    /// Rank of the coefficient matrix of the N polars of the recovered
    /// form (only when m = 1), and whether it equals dim I_{n-1}.
    pub polar_rank: Option<usize>,
    pub polars_span_ideal: Option<bool>,
    pub prop3: Option<Prop3Witness>,
    pub warnings: Vec<String>,
}

fn nu_for_degree(n: u32) -> Result<u32> {
    match n {
        3 => Ok(3),
        4 => Ok(2),
        other => Err(Error::parameter(format!(
            "dimension reports cover degrees 3 and 4, got {other}"
        ))),
    }
}

/// Coefficient matrix of `forms` over the full monomial basis of their
/// degree, rows = forms.
fn coefficient_matrix(
    forms: &[SparseForm<Complex64>],
    column_basis: &[SparseForm<num_rational::BigRational>],
) -> Result<DMatrix<Complex64>> {
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    for (j, f) in column_basis.iter().enumerate() {
        let (m, _) = f
            .terms()
            .next()
            .ok_or_else(|| Error::parameter("column basis contains a zero form"))?;
        index.insert(m.clone(), j);
    }
    let mut matrix = DMatrix::zeros(forms.len(), column_basis.len());
    for (i, f) in forms.iter().enumerate() {
        for (m, c) in f.terms() {
            let j = *index
                .get(m)
                .ok_or_else(|| Error::structural("monomial missing from the column basis"))?;
            matrix[(i, j)] = *c;
        }
    }
    Ok(matrix)
}

/// Computes every dimension claim for degree n at genus g and compares
/// with the closed formulas where they are known ((n,g) = (3,2), (4,3)).
pub fn dimension_report(
    n: u32,
    g: u32,
    period: &PeriodMatrix,
    seed: u64,
) -> Result<DimensionReport> {
    let nu = nu_for_degree(n)?;
    if period.g() != g as usize {
        return Err(Error::parameter(format!(
            "period matrix has g = {}, expected {g}",
            period.g()
        )));
    }
    let lattice = Lattice::new(nu, g)?;
    let big_n = lattice.size();

    let module = MonomialModule::symmetric_power(nu, g, n)?;
    let inv_basis = invariant_basis(&module)?;
    let nm1_basis = full_monomial_basis(nu, g, n - 1)?;

    let need = [
        (2 * inv_basis.len()).div_ceil(big_n), // singularity rows: N per point
        2 * nm1_basis.len(),                   // evaluation rows: 1 per point
        2 * inv_basis.len(),                   // invariant vanishing rows
        MIN_POOL,
    ];
    let pool_size = need.into_iter().max().unwrap();
    let pool = sample_embedded(nu, pool_size, period, seed, DEFAULT_TOL)?;

    let mut warnings = Vec::new();
    if period.near_product_blocks(NEAR_PRODUCT_EPS).is_some() {
        warnings.push(
            "period matrix is numerically block diagonal; the abelian variety may be a product"
                .to_string(),
        );
    }

    let opts = RankOptions::default();

    let sing = numerical_nullspace(
        &assemble_system(SystemKind::Singularity, &inv_basis, &pool)?,
        &opts,
    )?;
    let m_computed = sing.nullity;
    let m_form = m_formula(n, g)
        .ok_or_else(|| Error::parameter("no closed formula for this degree"))?;

    let eval = numerical_nullspace(
        &assemble_system(SystemKind::Vanishing, &nm1_basis, &pool)?,
        &opts,
    )?;
    let dim_ideal_nm1 = eval.nullity;

    let vanish = numerical_nullspace(
        &assemble_system(SystemKind::Vanishing, &inv_basis, &pool)?,
        &opts,
    )?;
    let dim_ideal_n_invariant = vanish.nullity;

    warnings.extend(sing.warnings.iter().cloned());
    warnings.extend(eval.warnings.iter().cloned());
    warnings.extend(vanish.warnings.iter().cloned());

    let (mut polar_rank, mut polars_span_ideal) = (None, None);
    if m_computed == 1 {
        let mut form = SparseForm::zero(nu, g, n)?;
        for (f, &c) in inv_basis.iter().zip(&sing.nullspace[0]) {
            form = form.add(&f.map_coeffs(|r| r.to_complex() * c))?;
        }
        let polars: Vec<SparseForm<Complex64>> = (0..big_n as u32)
            .map(|x| form.partial_derivative(&lattice.point(x)))
            .collect::<Result<Vec<_>>>()?;
        let spectrum = rank_of_matrix(&coefficient_matrix(&polars, &nm1_basis)?, &opts)?;
        polar_rank = Some(spectrum.rank);
        polars_span_ideal = Some(spectrum.rank == dim_ideal_nm1);
    }

    let canonical = (n == 3 && g == 2) || (n == 4 && g == 3);
    let expected_dim_ideal_nm1 = canonical.then_some(big_n);
    let expected_dim_ideal_n_invariant = match (n, g) {
        (3, 2) => Some((big_n - 1) / 2),
        (4, 3) => Some((big_n - 1) * (big_n - 2) / 6),
        _ => None,
    };

    let prop3 = if (n, g) == (3, 2) {
        let standard = MonomialModule::standard(nu, g)?;
        let hom_v_v = intertwiner_dimension(&standard, &standard)?;
        Some(Prop3Witness {
            m: m_computed,
            dim_ideal_n_invariant,
            hom_v_v,
            surjection_possible: hom_v_v >= dim_ideal_n_invariant,
        })
    } else {
        None
    };

    Ok(DimensionReport {
        n,
        nu,
        g,
        big_n,
        points_used: pool_size,
        dim_invariant_forms: inv_basis.len(),
        m_computed,
        m_formula: m_form,
        eval_cols_nm1: nm1_basis.len(),
        eval_rank_nm1: eval.rank,
        dim_ideal_nm1,
        expected_dim_ideal_nm1,
        dim_ideal_n_invariant,
        expected_dim_ideal_n_invariant,
        polar_rank,
        polars_span_ideal,
        prop3,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_formulas() {
        assert_eq!(m_formula(3, 1), Some(0));
        assert_eq!(m_formula(3, 2), Some(1));
        assert_eq!(m_formula(3, 3), Some(6));
        assert_eq!(m_formula(4, 1), Some(0));
        assert_eq!(m_formula(4, 2), Some(0));
        assert_eq!(m_formula(4, 3), Some(1));
        assert_eq!(m_formula(4, 4), Some(10));
        assert_eq!(m_formula(5, 2), None);
    }

    #[test]
    fn cubic_report_matches_all_anchors() {
        let period = PeriodMatrix::random_generic(2, 5).unwrap();
        let rep = dimension_report(3, 2, &period, 13).unwrap();
        assert_eq!(rep.big_n, 9);
        assert_eq!(rep.dim_invariant_forms, 5);
        assert_eq!(rep.m_computed, 1);
        assert_eq!(rep.m_formula, 1);
        assert_eq!(rep.eval_cols_nm1, 45);
        assert_eq!(rep.eval_rank_nm1, 36);
        assert_eq!(rep.dim_ideal_nm1, 9);
        assert_eq!(rep.expected_dim_ideal_nm1, Some(9));
        assert_eq!(rep.dim_ideal_n_invariant, 4);
        assert_eq!(rep.expected_dim_ideal_n_invariant, Some(4));
        assert_eq!(rep.polar_rank, Some(9));
        assert_eq!(rep.polars_span_ideal, Some(true));
        let p3 = rep.prop3.as_ref().unwrap();
        assert_eq!(p3.hom_v_v, 1);
        assert_eq!(p3.dim_ideal_n_invariant, 4);
        assert!(!p3.surjection_possible);
    }

    #[test]
    fn degree_validation() {
        let period = PeriodMatrix::random_generic(2, 5).unwrap();
        assert!(dimension_report(5, 2, &period, 1).is_err());
        assert!(dimension_report(3, 3, &period, 1).is_err()); // genus mismatch
    }
}
