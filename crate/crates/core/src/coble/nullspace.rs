//! Numerical rank/nullspace decisions by SVD with an explicit spectral-gap
//! requirement: an ambiguous cutoff is an error, never a silent guess.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::coble::{ConstraintSystem, SystemKind};
use crate::{Error, Result};

/// Residuals of returned nullvectors must satisfy |M v| <= RESIDUAL_FACTOR
/// * sigma_1 * |v|; violating this marks a failed decomposition.
const RESIDUAL_FACTOR: f64 = 1e-7;

/// Everything below this absolute size is treated as an exactly zero
/// spectrum (the zero matrix).
const ABS_ZERO: f64 = 1e-300;

#[derive(Clone, Copy, Debug)]
pub struct RankOptions {
    /// Singular values below rel_cutoff * sigma_1 count toward the nullity.
    pub rel_cutoff: f64,
    /// Minimum ratio between the last kept and first discarded singular
    /// value; anything smaller is reported as rank ambiguity.
    pub gap_threshold: f64,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            rel_cutoff: 1e-8,
            gap_threshold: 1e6,
        }
    }
}

/// Outcome of a rank/nullspace computation.
#[derive(Clone, Debug)]
pub struct NullspaceReport {
    pub kind: SystemKind,
    pub rows: usize,
    pub cols: usize,
    pub points: usize,
    pub basis_desc: String,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub nullity: usize,
    /// sigma_rank / sigma_{rank+1}; None when nothing was discarded.
    pub gap: Option<f64>,
    pub max_residual: f64,
    pub warnings: Vec<String>,
    /// Unit vectors spanning the numerical nullspace, over the form basis.
    pub nullspace: Vec<Vec<Complex64>>,
}

/// Singular values with the rank decision applied to them.
#[derive(Clone, Debug)]
pub struct RankSpectrum {
    /// Descending.
    pub singular_values: Vec<f64>,
    pub rank: usize,
    /// sigma_rank / sigma_{rank+1}; None when nothing was discarded.
    pub gap: Option<f64>,
}

fn spectral_rank(values: &[f64], opts: &RankOptions) -> Result<RankSpectrum> {
    let singular_values = values.to_vec();
    debug_assert!(singular_values.windows(2).all(|w| w[0] >= w[1]));
    let sigma1 = singular_values.first().copied().unwrap_or(0.0);
    if !sigma1.is_finite() {
        return Err(Error::Arithmetic(
            "singular value decomposition produced non-finite values".into(),
        ));
    }
    if sigma1 < ABS_ZERO {
        return Ok(RankSpectrum {
            singular_values,
            rank: 0,
            gap: None,
        });
    }
    let cutoff = sigma1 * opts.rel_cutoff;
    let rank = singular_values.iter().filter(|&&s| s >= cutoff).count();
    let gap = if rank < singular_values.len() {
        let discarded = singular_values[rank];
        let kept = singular_values[rank - 1];
        let gap = if discarded < ABS_ZERO {
            f64::INFINITY
        } else {
            kept / discarded
        };
        if gap < opts.gap_threshold {
            return Err(Error::RankAmbiguity {
                gap,
                threshold: opts.gap_threshold,
                singular_values,
            });
        }
        Some(gap)
    } else {
        None
    };
    Ok(RankSpectrum {
        singular_values,
        rank,
        gap,
    })
}

/// Numerical rank of an arbitrary complex matrix under the same cutoff and
/// gap rules; no nullspace is extracted, so wide matrices are fine.
pub fn rank_of_matrix(matrix: &DMatrix<Complex64>, opts: &RankOptions) -> Result<RankSpectrum> {
    let svd = matrix.clone().svd(false, false);
    let values: Vec<f64> = svd.singular_values.iter().copied().collect();
    spectral_rank(&values, opts)
}

/// Rank, nullity, and a nullspace basis of the system matrix. The nullity
/// counts singular values below sigma_1 * rel_cutoff; the kept/discarded
/// gap must exceed the threshold or the call fails with the full spectrum
/// attached.
pub fn numerical_nullspace(
    system: &ConstraintSystem,
    opts: &RankOptions,
) -> Result<NullspaceReport> {
    let m = system.matrix();
    let (rows, cols) = (m.nrows(), m.ncols());
    if rows < cols {
        return Err(Error::parameter(format!(
            "underdetermined system ({rows} rows < {cols} columns); add sample points"
        )));
    }
    let mut warnings = Vec::new();
    if rows < 2 * cols {
        warnings.push(format!(
            "only {rows} rows for {cols} columns (< 2x oversampling); rank may be fragile"
        ));
    }
    let svd = m.clone().svd(false, true);
    let values: Vec<f64> = svd.singular_values.iter().copied().collect();
    let spectrum = spectral_rank(&values, opts)?;
    let sigma1 = spectrum.singular_values.first().copied().unwrap_or(0.0);
    let v_t = svd.v_t.as_ref().expect("requested V^T");

    let nullity = cols - spectrum.rank;
    let mut nullspace = Vec::with_capacity(nullity);
    for i in spectrum.rank..cols {
        let row = v_t.row(i);
        nullspace.push(row.iter().map(|c| c.conj()).collect::<Vec<_>>());
    }

    let mut max_residual = 0.0f64;
    for v in &nullspace {
        let vec = nalgebra::DVector::from_column_slice(v);
        let residual = (m * &vec).norm();
        max_residual = max_residual.max(residual);
        if residual > RESIDUAL_FACTOR * sigma1 * vec.norm() {
            return Err(Error::structural(format!(
                "nullvector residual {residual:.3e} exceeds {RESIDUAL_FACTOR:.0e} * sigma_1"
            )));
        }
    }

    Ok(NullspaceReport {
        kind: system.kind(),
        rows,
        cols,
        points: system.points(),
        basis_desc: system.basis_desc().to_string(),
        singular_values: spectrum.singular_values,
        rank: spectrum.rank,
        nullity,
        gap: spectrum.gap,
        max_residual,
        warnings,
        nullspace,
    })
}
