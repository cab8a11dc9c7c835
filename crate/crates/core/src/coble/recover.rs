//! Recovery of the invariant hypersurface singular along the embedded
//! abelian variety: the cubic in P^8 (g=2, level 3) and the quartic in P^7
//! (g=3, level 2), plus the full-space uniqueness cross-check.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::coble::{
    assemble_system, numerical_nullspace, NullspaceReport, RankOptions, SystemKind,
};
use crate::lattice::Lattice;
use crate::monomial::{invariant_basis, Monomial, MonomialModule, SparseForm, ToComplex};
use crate::theta::{min_even_theta_modulus, sample_embedded, PeriodMatrix, DEFAULT_TOL};
use crate::{Error, Result};

/// Fresh-point streams must not overlap the fitting stream for the same
/// user seed; fixed salts keep everything reproducible.
const HOLDOUT_SALT: u64 = 0x686f6c64_6f757431;
const FULL_SPACE_SALT: u64 = 0x66756c6c_73706163;

const HOLDOUT_POINTS: usize = 10;
const HOLDOUT_FACTOR: f64 = 1e-8;
const THETA_CONSTANT_FLOOR: f64 = 1e-6;
const NEAR_PRODUCT_EPS: f64 = 1e-8;
const FULL_MATCH_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypersurfaceKind {
    /// g=2, level 3: the invariant cubic in P^8 singular along the surface.
    Cubic,
    /// g=3, level 2: the invariant quartic in P^7 singular along the
    /// threefold.
    Quartic,
}

impl HypersurfaceKind {
    pub fn nu(self) -> u32 {
        match self {
            HypersurfaceKind::Cubic => 3,
            HypersurfaceKind::Quartic => 2,
        }
    }

    pub fn g(self) -> u32 {
        match self {
            HypersurfaceKind::Cubic => 2,
            HypersurfaceKind::Quartic => 3,
        }
    }

    pub fn degree(self) -> u32 {
        match self {
            HypersurfaceKind::Cubic => 3,
            HypersurfaceKind::Quartic => 4,
        }
    }

    /// N = nu^g: 9 for the cubic, 8 for the quartic.
    pub fn big_n(self) -> usize {
        (self.nu() as usize).pow(self.g())
    }
}

impl std::str::FromStr for HypersurfaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cubic" => Ok(HypersurfaceKind::Cubic),
            "quartic" => Ok(HypersurfaceKind::Quartic),
            other => Err(Error::parameter(format!(
                "unknown hypersurface kind '{other}' (expected cubic or quartic)"
            ))),
        }
    }
}

fn validate_period(kind: HypersurfaceKind, period: &PeriodMatrix) -> Result<Vec<String>> {
    if period.g() != kind.g() as usize {
        return Err(Error::parameter(format!(
            "period matrix has g = {}, this hypersurface needs g = {}",
            period.g(),
            kind.g()
        )));
    }
    let mut warnings = Vec::new();
    if kind == HypersurfaceKind::Quartic {
        let min_mod = min_even_theta_modulus(period, DEFAULT_TOL)?;
        if min_mod <= THETA_CONSTANT_FLOOR {
            return Err(Error::parameter(format!(
                "vanishing theta constant (min even theta modulus {min_mod:.3e}); \
                 the quartic construction needs a generic period matrix"
            )));
        }
    }
    if period.near_product_blocks(NEAR_PRODUCT_EPS).is_some() {
        warnings.push(
            "period matrix is numerically block diagonal; the abelian variety may be a product"
                .to_string(),
        );
    }
    Ok(warnings)
}

fn points_needed(samples: usize, cols: usize, rows_per_point: usize) -> usize {
    samples.max((2 * cols).div_ceil(rows_per_point))
}

/// Sums coeffs[j] * basis[j] into one complex form.
fn combine(
    basis: &[SparseForm<BigRational>],
    coeffs: &[Complex64],
) -> Result<SparseForm<Complex64>> {
    let first = basis.first().ok_or_else(|| Error::parameter("empty basis"))?;
    let mut out = SparseForm::zero(first.nu(), first.g(), first.degree())?;
    for (f, &c) in basis.iter().zip(coeffs) {
        out = out.add(&f.map_coeffs(|r| r.to_complex() * c))?;
    }
    Ok(out)
}

/// Rescales so the largest-modulus coefficient becomes exactly 1 (ties
/// resolved by monomial order, which the term map fixes).
fn normalize_leading(form: &SparseForm<Complex64>) -> Result<SparseForm<Complex64>> {
    let mut pivot: Option<Complex64> = None;
    for (_, c) in form.terms() {
        if pivot.is_none_or(|p| c.norm() > p.norm()) {
            pivot = Some(*c);
        }
    }
    let pivot = pivot.ok_or_else(|| Error::structural("cannot normalize the zero form"))?;
    Ok(form.map_coeffs(|c| c / pivot))
}

fn coefficient_norm(form: &SparseForm<Complex64>) -> f64 {
    form.terms().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt()
}

/// The recovered hypersurface plus the diagnostics of the nullspace
/// computation that produced it.
pub type Hypersurface = (SparseForm<Complex64>, NullspaceReport);

/// Builds the invariant basis of degree-n forms, assembles the singularity
/// system at embedded sample points, and returns the unique form singular
/// along the image, validated on fresh holdout points.
pub fn coble_hypersurface(
    kind: HypersurfaceKind,
    period: &PeriodMatrix,
    samples: usize,
    seed: u64,
) -> Result<Hypersurface> {
    let warnings = validate_period(kind, period)?;
    let (nu, g, n) = (kind.nu(), kind.g(), kind.degree());
    let module = MonomialModule::symmetric_power(nu, g, n)?;
    let basis = invariant_basis(&module)?;

    let npts = points_needed(samples, basis.len(), kind.big_n());
    let points = sample_embedded(nu, npts, period, seed, DEFAULT_TOL)?;
    let system = assemble_system(SystemKind::Singularity, &basis, &points)?;
    let mut report = numerical_nullspace(&system, &RankOptions::default())?;
    report.warnings.extend(warnings);
    if report.nullity != 1 {
        return Err(Error::structural(format!(
            "expected exactly one invariant degree-{n} form singular along the image, \
             found nullity {} (gap {:?})",
            report.nullity, report.gap
        )));
    }

    let form = normalize_leading(&combine(&basis, &report.nullspace[0])?)?;

    // Holdout: the gradient must vanish at fresh points the fit never saw.
    let fresh = sample_embedded(nu, HOLDOUT_POINTS, period, seed ^ HOLDOUT_SALT, DEFAULT_TOL)?;
    let lattice = Lattice::new(nu, g)?;
    let scale = HOLDOUT_FACTOR * coefficient_norm(&form);
    let mut worst = 0.0f64;
    for x in 0..lattice.size() as u32 {
        let df = form.partial_derivative(&lattice.point(x))?;
        for p in &fresh {
            worst = worst.max(df.evaluate(p.coords())?.norm());
        }
    }
    if worst >= scale {
        return Err(Error::structural(format!(
            "holdout failure: gradient reaches {worst:.3e} on fresh points \
             (allowed {scale:.3e}); the recovered form does not generalize"
        )));
    }

    Ok((form, report))
}

/// All monomials of the given degree in the nu^g coordinates, each as a
/// single-term form; ordered compatibly with the monomial order.
pub fn full_monomial_basis(nu: u32, g: u32, degree: u32) -> Result<Vec<SparseForm<BigRational>>> {
    let lattice = Lattice::new(nu, g)?;
    let nvars = lattice.size() as u32;
    let mut out = Vec::new();
    let mut multiset = vec![0u32; degree as usize];
    loop {
        let mut f = SparseForm::zero(nu, g, degree)?;
        f.add_term(Monomial::from_multiset(multiset.clone()), BigRational::one())?;
        out.push(f);
        // Next nondecreasing sequence in lex order.
        let mut i = multiset.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if multiset[i] + 1 < nvars {
                let v = multiset[i] + 1;
                for slot in multiset.iter_mut().skip(i) {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// Runs the same singularity system over the full monomial basis of
/// degree-n forms. The nullity must again be 1, and the nullvector must
/// agree with the invariant-basis recovery up to one scalar.
pub fn verify_uniqueness_full_space(
    kind: HypersurfaceKind,
    period: &PeriodMatrix,
    samples: usize,
    seed: u64,
) -> Result<NullspaceReport> {
    let warnings = validate_period(kind, period)?;
    let (nu, g, n) = (kind.nu(), kind.g(), kind.degree());
    let basis = full_monomial_basis(nu, g, n)?;

    let npts = points_needed(samples, basis.len(), kind.big_n());
    let points = sample_embedded(nu, npts, period, seed ^ FULL_SPACE_SALT, DEFAULT_TOL)?;
    let system = assemble_system(SystemKind::Singularity, &basis, &points)?;
    let mut report = numerical_nullspace(&system, &RankOptions::default())?;
    report.warnings.extend(warnings);
    if report.nullity != 1 {
        return Err(Error::structural(format!(
            "full degree-{n} space should contain exactly one form singular along \
             the image; found nullity {}",
            report.nullity
        )));
    }

    // Cross-check against the invariant-basis recovery, up to scalar.
    let (invariant_form, _) = coble_hypersurface(kind, period, samples, seed)?;
    let full_form = normalize_leading(&combine(&basis, &report.nullspace[0])?)?;
    let diff = full_form.add(&invariant_form.map_coeffs(|c| -c))?;
    let rel = coefficient_norm(&diff) / coefficient_norm(&full_form);
    if rel >= FULL_MATCH_TOL {
        return Err(Error::structural(format!(
            "full-space nullvector deviates from the invariant recovery by {rel:.3e} \
             (allowed {FULL_MATCH_TOL:.0e})"
        )));
    }

    Ok(report)
}

/// Invariant degree-`degree` forms singular along the level-nu image:
/// returns the basis and the nullspace report of the singularity system.
/// This is the engine behind the m_n(g) dimension counts, including the
/// negative control m_4(2) = 0 on the Kummer surface in P^3.
pub fn singular_invariant_space(
    nu: u32,
    g: u32,
    degree: u32,
    period: &PeriodMatrix,
    samples: usize,
    seed: u64,
) -> Result<(Vec<SparseForm<BigRational>>, NullspaceReport)> {
    if period.g() != g as usize {
        return Err(Error::parameter(format!(
            "period matrix has g = {}, expected {g}",
            period.g()
        )));
    }
    let module = MonomialModule::symmetric_power(nu, g, degree)?;
    let basis = invariant_basis(&module)?;
    if basis.is_empty() {
        return Err(Error::parameter(format!(
            "no invariant forms of degree {degree} at level {nu} (center acts nontrivially)"
        )));
    }
    let big_n = Lattice::new(nu, g)?.size();
    let npts = points_needed(samples, basis.len(), big_n);
    let points = sample_embedded(nu, npts, period, seed, DEFAULT_TOL)?;
    let system = assemble_system(SystemKind::Singularity, &basis, &points)?;
    let report = numerical_nullspace(&system, &RankOptions::default())?;
    Ok((basis, report))
}
