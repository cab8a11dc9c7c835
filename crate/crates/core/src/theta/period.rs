//! Period matrices: symmetric complex g x g matrices with positive
//! definite imaginary part, defining A = C^g / (Z^g + Omega Z^g).

use nalgebra::{Cholesky, DMatrix, Dyn};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative tolerance for the symmetry check on input matrices.
const SYMMETRY_TOL: f64 = 1e-9;

/// Largest supported genus; theta sums grow exponentially in g.
pub const MAX_GENUS: usize = 6;

/// A validated point of the Siegel upper half space.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodMatrix {
    omega: DMatrix<Complex64>,
    min_im_eigenvalue: f64,
}

/// On-disk form: {"g": 2, "re": [[..]], "im": [[..]]}, row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodMatrixJson {
    pub g: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl PeriodMatrix {
    pub fn new(omega: DMatrix<Complex64>) -> Result<Self> {
        let g = omega.nrows();
        if g == 0 || omega.ncols() != g {
            return Err(Error::parameter("period matrix must be square, g >= 1"));
        }
        if g > MAX_GENUS {
            return Err(Error::capacity(format!(
                "genus {g} exceeds supported maximum {MAX_GENUS}"
            )));
        }
        let scale = omega
            .iter()
            .map(|c| c.norm())
            .fold(1.0_f64, f64::max);
        for i in 0..g {
            for j in (i + 1)..g {
                if (omega[(i, j)] - omega[(j, i)]).norm() > SYMMETRY_TOL * scale {
                    return Err(Error::parameter(format!(
                        "period matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let im = omega.map(|c| c.im);
        // Positive definiteness: Cholesky must exist, and we keep the
        // smallest eigenvalue for truncation-radius estimates.
        if Cholesky::<f64, Dyn>::new(im.clone()).is_none() {
            return Err(Error::parameter(
                "imaginary part of the period matrix is not positive definite",
            ));
        }
        let min_im_eigenvalue = im
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if min_im_eigenvalue.is_nan() || min_im_eigenvalue <= 0.0 {
            return Err(Error::parameter(
                "imaginary part of the period matrix is not positive definite",
            ));
        }
        Ok(PeriodMatrix {
            omega,
            min_im_eigenvalue,
        })
    }

    pub fn g(&self) -> usize {
        self.omega.nrows()
    }

    pub fn omega(&self) -> &DMatrix<Complex64> {
        &self.omega
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.omega[(i, j)]
    }

    pub fn im(&self) -> DMatrix<f64> {
        self.omega.map(|c| c.im)
    }

    pub fn min_im_eigenvalue(&self) -> f64 {
        self.min_im_eigenvalue
    }

    /// k * Omega for k > 0 (used for the level-nu theta arguments);
    /// symmetry and positivity are preserved, no revalidation needed.
    pub fn scaled(&self, k: f64) -> Result<PeriodMatrix> {
        if k.is_nan() || k <= 0.0 {
            return Err(Error::parameter("scale factor must be positive"));
        }
        Ok(PeriodMatrix {
            omega: self.omega.map(|c| c * k),
            min_im_eigenvalue: self.min_im_eigenvalue * k,
        })
    }

    /// Omega * v for a real vector v.
    pub fn apply_real(&self, v: &[f64]) -> Vec<Complex64> {
        let g = self.g();
        assert_eq!(v.len(), g);
        (0..g)
            .map(|i| (0..g).map(|j| self.omega[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Splits {0..g} into two blocks with all cross terms below `eps`, if
    /// such a split exists (a near-product period matrix), smallest-first.
    pub fn near_product_blocks(&self, eps: f64) -> Option<(Vec<usize>, Vec<usize>)> {
        let g = self.g();
        if g < 2 {
            return None;
        }
        // Subsets containing index 0 to avoid double counting.
        for mask in 0..(1u32 << (g - 1)) {
            let mask = mask << 1 | 1;
            if mask == (1 << g) - 1 {
                continue;
            }
            let left: Vec<usize> = (0..g).filter(|&i| mask >> i & 1 == 1).collect();
            let right: Vec<usize> = (0..g).filter(|&i| mask >> i & 1 == 0).collect();
            let cross_max = left
                .iter()
                .flat_map(|&i| right.iter().map(move |&j| self.omega[(i, j)].norm()))
                .fold(0.0_f64, f64::max);
            if cross_max < eps {
                return Some((left, right));
            }
        }
        None
    }

    /// Deterministic generic matrix: Im = I + 0.1 * sym, Re = 0.1 * sym,
    /// with symmetric parts built from uniform (-1, 1) draws.
    pub fn random_generic(g: usize, seed: u64) -> Result<PeriodMatrix> {
        if g == 0 || g > MAX_GENUS {
            return Err(Error::parameter(format!(
                "genus must be in 1..={MAX_GENUS}, got {g}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw_sym = |rng: &mut ChaCha8Rng| {
            let a = DMatrix::<f64>::from_fn(g, g, |_, _| rng.gen_range(-1.0..1.0));
            (&a + a.transpose()) * 0.5
        };
        let s_im = draw_sym(&mut rng);
        let s_re = draw_sym(&mut rng);
        let omega = DMatrix::from_fn(g, g, |i, j| {
            let im = if i == j { 1.0 } else { 0.0 } + 0.1 * s_im[(i, j)];
            Complex64::new(0.1 * s_re[(i, j)], im)
        });
        PeriodMatrix::new(omega)
    }

    pub fn to_json_struct(&self) -> PeriodMatrixJson {
        let g = self.g();
        PeriodMatrixJson {
            g,
            re: (0..g)
                .map(|i| (0..g).map(|j| self.omega[(i, j)].re).collect())
                .collect(),
            im: (0..g)
                .map(|i| (0..g).map(|j| self.omega[(i, j)].im).collect())
                .collect(),
        }
    }

    pub fn from_json_struct(j: &PeriodMatrixJson) -> Result<PeriodMatrix> {
        let g = j.g;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == g && rows.iter().all(|r| r.len() == g);
        if !shape_ok(&j.re) || !shape_ok(&j.im) {
            return Err(Error::parameter(
                "period matrix JSON arrays do not match the declared g",
            ));
        }
        let omega = DMatrix::from_fn(g.max(1), g.max(1), |i, j_| {
            Complex64::new(j.re[i][j_], j.im[i][j_])
        });
        if g == 0 {
            return Err(Error::parameter("period matrix must have g >= 1"));
        }
        PeriodMatrix::new(omega)
    }

    pub fn from_json_str(s: &str) -> Result<PeriodMatrix> {
        let j: PeriodMatrixJson = serde_json::from_str(s)
            .map_err(|e| Error::parameter(format!("invalid period matrix JSON: {e}")))?;
        Self::from_json_struct(&j)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_struct()).expect("serializable")
    }
}
