//! Constraint systems: evaluation ("vanishing") and derivative
//! ("singularity") conditions of a family of forms at embedded points.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::monomial::{Coeff, SparseForm, ToComplex};
use crate::theta::EmbeddingPoint;
use crate::{par, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    /// One row per point: F_j(p) = 0.
    Vanishing,
    /// N rows per point: dF_j/dT_x(p) = 0 for every coordinate x.
    Singularity,
}

/// A complex matrix whose columns are indexed by a basis of forms and whose
/// rows constrain those forms at unit-normalized embedded points.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    kind: SystemKind,
    matrix: DMatrix<Complex64>,
    points: usize,
    basis_desc: String,
}

impl ConstraintSystem {
    /// Wraps an explicit matrix (tests, external systems).
    pub fn from_parts(
        kind: SystemKind,
        matrix: DMatrix<Complex64>,
        points: usize,
        basis_desc: impl Into<String>,
    ) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.ncols() == 0 {
            return Err(Error::parameter("constraint system must be nonempty"));
        }
        Ok(ConstraintSystem {
            kind,
            matrix,
            points,
            basis_desc: basis_desc.into(),
        })
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn basis_desc(&self) -> &str {
        &self.basis_desc
    }
}

struct Prepared {
    /// For vanishing: the forms themselves. For singularity: all partial
    /// derivatives, laid out as derivs[x][j] for coordinate x, form j.
    blocks: Vec<Vec<SparseForm<Complex64>>>,
    cols: usize,
    big_n: usize,
}

fn prepare<C: Coeff + ToComplex>(
    kind: SystemKind,
    basis: &[SparseForm<C>],
    points: &[EmbeddingPoint],
) -> Result<Prepared> {
    let first = basis
        .first()
        .ok_or_else(|| Error::parameter("form basis must be nonempty"))?;
    let (nu, g, degree) = (first.nu(), first.g(), first.degree());
    for f in basis {
        if (f.nu(), f.g(), f.degree()) != (nu, g, degree) {
            return Err(Error::parameter(
                "all basis forms must share level, rank, and degree",
            ));
        }
    }
    if points.is_empty() {
        return Err(Error::parameter("need at least one sample point"));
    }
    let big_n = first.lattice().size();
    for p in points {
        if p.nu() != nu || p.dim() != big_n {
            return Err(Error::parameter(
                "sample points and forms live in different projective spaces",
            ));
        }
    }
    let complex: Vec<SparseForm<Complex64>> = basis
        .iter()
        .map(|f| f.map_coeffs(|c| c.to_complex()))
        .collect();
    let blocks = match kind {
        SystemKind::Vanishing => vec![complex],
        SystemKind::Singularity => {
            if degree == 0 {
                return Err(Error::parameter(
                    "singularity systems need forms of positive degree",
                ));
            }
            let lattice = first.lattice();
            let mut out = Vec::with_capacity(big_n);
            for x in 0..big_n as u32 {
                let xp = lattice.point(x);
                out.push(
                    complex
                        .iter()
                        .map(|f| f.partial_derivative(&xp))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            out
        }
    };
    Ok(Prepared {
        blocks,
        cols: basis.len(),
        big_n,
    })
}

fn block_rows(prep: &Prepared, point: &EmbeddingPoint) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(prep.blocks.len() * prep.cols);
    for row_forms in &prep.blocks {
        for f in row_forms {
            out.push(f.evaluate(point.coords())?);
        }
    }
    Ok(out)
}

fn collect_system(
    kind: SystemKind,
    prep: Prepared,
    points: &[EmbeddingPoint],
    rows_per_point: Vec<Result<Vec<Complex64>>>,
) -> Result<ConstraintSystem> {
    let block = prep.blocks.len();
    let mut matrix = DMatrix::zeros(block * points.len(), prep.cols);
    for (p, rows) in rows_per_point.into_iter().enumerate() {
        let rows = rows?;
        for r in 0..block {
            for j in 0..prep.cols {
                matrix[(p * block + r, j)] = rows[r * prep.cols + j];
            }
        }
    }
    let desc = format!(
        "{} degree-{} forms in {} variables",
        prep.cols,
        match kind {
            SystemKind::Vanishing => prep.blocks[0][0].degree(),
            SystemKind::Singularity => prep.blocks[0][0].degree() + 1,
        },
        prep.big_n
    );
    ConstraintSystem::from_parts(kind, matrix, points.len(), desc)
}

/// Builds the constraint matrix, one block of rows per point, evaluated in
/// parallel when the `parallel` feature is on; ordering is deterministic.
pub fn assemble_system<C: Coeff + ToComplex>(
    kind: SystemKind,
    basis: &[SparseForm<C>],
    points: &[EmbeddingPoint],
) -> Result<ConstraintSystem> {
    let prep = prepare(kind, basis, points)?;
    let rows = par::map_indexed(points.len(), |p| block_rows(&prep, &points[p]));
    collect_system(kind, prep, points, rows)
}

/// Sequential twin of [`assemble_system`], for benchmarking.
pub fn assemble_system_seq<C: Coeff + ToComplex>(
    kind: SystemKind,
    basis: &[SparseForm<C>],
    points: &[EmbeddingPoint],
) -> Result<ConstraintSystem> {
    let prep = prepare(kind, basis, points)?;
    let rows = par::map_indexed_seq(points.len(), |p| block_rows(&prep, &points[p]));
    collect_system(kind, prep, points, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{invariant_basis, MonomialModule, SparseForm};
    use crate::theta::{sample_embedded, PeriodMatrix, DEFAULT_TOL};
    use num_rational::BigRational;

    fn cubic_setup() -> (Vec<SparseForm<BigRational>>, Vec<EmbeddingPoint>) {
        let module = MonomialModule::symmetric_power(3, 2, 3).unwrap();
        let basis = invariant_basis(&module).unwrap();
        let p = PeriodMatrix::random_generic(2, 12).unwrap();
        let pts = sample_embedded(3, 30, &p, 7, DEFAULT_TOL).unwrap();
        (basis, pts)
    }

    #[test]
    fn system_shapes() {
        let (basis, pts) = cubic_setup();
        assert_eq!(basis.len(), 5);
        let sing = assemble_system(SystemKind::Singularity, &basis, &pts).unwrap();
        assert_eq!((sing.rows(), sing.cols()), (270, 5));
        assert_eq!(sing.points(), 30);
        let van = assemble_system(SystemKind::Vanishing, &basis, &pts).unwrap();
        assert_eq!((van.rows(), van.cols()), (30, 5));
    }

    #[test]
    fn zero_form_gives_zero_column() {
        let (mut basis, pts) = cubic_setup();
        basis.push(SparseForm::zero(3, 2, 3).unwrap());
        let van = assemble_system(SystemKind::Vanishing, &basis, &pts).unwrap();
        for r in 0..van.rows() {
            assert_eq!(van.matrix()[(r, 5)], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let (basis, pts) = cubic_setup();
        let a = assemble_system(SystemKind::Singularity, &basis, &pts).unwrap();
        let b = assemble_system_seq(SystemKind::Singularity, &basis, &pts).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let (basis, _) = cubic_setup();
        let p2 = PeriodMatrix::random_generic(2, 13).unwrap();
        let wrong_level = sample_embedded(2, 3, &p2, 7, DEFAULT_TOL).unwrap();
        assert!(assemble_system(SystemKind::Vanishing, &basis, &wrong_level).is_err());
        assert!(assemble_system::<BigRational>(SystemKind::Vanishing, &[], &wrong_level).is_err());

        let mut mixed = basis.clone();
        mixed.push(SparseForm::zero(3, 2, 2).unwrap());
        let p = PeriodMatrix::random_generic(2, 12).unwrap();
        let pts = sample_embedded(3, 3, &p, 7, DEFAULT_TOL).unwrap();
        assert!(assemble_system(SystemKind::Vanishing, &mixed, &pts).is_err());
    }
}
