//! JSON encodings for forms and reports. Forms serialize their monomials
//! as (K-point, multiplicity) pairs so files stay readable independently
//! of how the N = nu^g coordinates are enumerated internally.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::coble::{DimensionReport, NullspaceReport, Prop3Witness, SystemKind};
use crate::exact::Cyclotomic;
use crate::lattice::KPoint;
use crate::monomial::{Coeff, Monomial, SparseForm};
use crate::{Error, Result};

/// Bumped when any serialized layout changes incompatibly.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

/// Coefficient payloads; the field sets are disjoint, so untagged
/// round-trips are unambiguous, and `coeff_kind` on the form double-checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Rational(RationalJson),
    Cyclotomic {
        level: u32,
        coeffs: Vec<RationalJson>,
    },
    Complex {
        re: f64,
        im: f64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    /// (K-point coordinates, multiplicity) pairs, lexicographic in the
    /// point.
    pub exponents: Vec<(Vec<u32>, u32)>,
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormJson {
    pub degree: u32,
    pub nu: u32,
    pub g: u32,
    pub coeff_kind: String,
    pub terms: Vec<TermJson>,
}

fn rational_json(q: &BigRational) -> RationalJson {
    RationalJson {
        num: q.numer().to_string(),
        den: q.denom().to_string(),
    }
}

fn rational_back(j: &RationalJson) -> Result<BigRational> {
    let num = BigInt::from_str(&j.num)
        .map_err(|e| Error::parameter(format!("bad numerator '{}': {e}", j.num)))?;
    let den = BigInt::from_str(&j.den)
        .map_err(|e| Error::parameter(format!("bad denominator '{}': {e}", j.den)))?;
    if den == BigInt::from(0) {
        return Err(Error::parameter("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Coefficient types that can live in form files.
pub trait CoeffCodec: Coeff {
    const KIND: &'static str;
    fn encode(&self) -> CoeffJson;
    fn decode(j: &CoeffJson) -> Result<Self>
    where
        Self: Sized;
}

impl CoeffCodec for BigRational {
    const KIND: &'static str = "rational";

    fn encode(&self) -> CoeffJson {
        CoeffJson::Rational(rational_json(self))
    }

    fn decode(j: &CoeffJson) -> Result<Self> {
        match j {
            CoeffJson::Rational(r) => rational_back(r),
            _ => Err(Error::parameter("expected a rational coefficient")),
        }
    }
}

impl CoeffCodec for Cyclotomic {
    const KIND: &'static str = "cyclotomic";

    fn encode(&self) -> CoeffJson {
        CoeffJson::Cyclotomic {
            level: self.level(),
            coeffs: self.coeffs().iter().map(rational_json).collect(),
        }
    }

    fn decode(j: &CoeffJson) -> Result<Self> {
        match j {
            CoeffJson::Cyclotomic { level, coeffs } => {
                let coords = coeffs.iter().map(rational_back).collect::<Result<Vec<_>>>()?;
                Cyclotomic::from_power_basis(*level, coords)
            }
            _ => Err(Error::parameter("expected a cyclotomic coefficient")),
        }
    }
}

impl CoeffCodec for Complex64 {
    const KIND: &'static str = "complex";

    fn encode(&self) -> CoeffJson {
        CoeffJson::Complex {
            re: self.re,
            im: self.im,
        }
    }

    fn decode(j: &CoeffJson) -> Result<Self> {
        match j {
            CoeffJson::Complex { re, im } => Ok(Complex64::new(*re, *im)),
            _ => Err(Error::parameter("expected a complex coefficient")),
        }
    }
}

pub fn form_to_json<C: CoeffCodec>(form: &SparseForm<C>) -> FormJson {
    let lattice = form.lattice();
    let terms = form
        .terms()
        .map(|(m, c)| TermJson {
            exponents: m
                .powers()
                .into_iter()
                .map(|(var, mult)| (lattice.point(var).coords().to_vec(), mult))
                .collect(),
            coeff: c.encode(),
        })
        .collect();
    FormJson {
        degree: form.degree(),
        nu: form.nu(),
        g: form.g(),
        coeff_kind: C::KIND.to_string(),
        terms,
    }
}

pub fn form_from_json<C: CoeffCodec>(j: &FormJson) -> Result<SparseForm<C>> {
    if j.coeff_kind != C::KIND {
        return Err(Error::parameter(format!(
            "form has coefficient kind '{}', expected '{}'",
            j.coeff_kind,
            C::KIND
        )));
    }
    let mut form = SparseForm::zero(j.nu, j.g, j.degree)?;
    let lattice = form.lattice();
    for term in &j.terms {
        let mut powers = Vec::with_capacity(term.exponents.len());
        for (coords, mult) in &term.exponents {
            let signed: Vec<i64> = coords.iter().map(|&c| c as i64).collect();
            let var = lattice.index_of(&KPoint::new(j.nu, &signed)?)?;
            powers.push((var, *mult));
        }
        form.add_term(Monomial::from_powers(&powers), C::decode(&term.coeff)?)?;
    }
    Ok(form)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(c: Complex64) -> Self {
        ComplexJson { re: c.re, im: c.im }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NullspaceReportJson {
    pub kind: SystemKind,
    pub rows: usize,
    pub cols: usize,
    pub points: usize,
    pub basis_desc: String,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub nullity: usize,
    pub gap: Option<f64>,
    pub max_residual: f64,
    pub warnings: Vec<String>,
    pub nullspace: Vec<Vec<ComplexJson>>,
}

impl From<&NullspaceReport> for NullspaceReportJson {
    fn from(r: &NullspaceReport) -> Self {
        NullspaceReportJson {
            kind: r.kind,
            rows: r.rows,
            cols: r.cols,
            points: r.points,
            basis_desc: r.basis_desc.clone(),
            singular_values: r.singular_values.clone(),
            rank: r.rank,
            nullity: r.nullity,
            gap: r.gap,
            max_residual: r.max_residual,
            warnings: r.warnings.clone(),
            nullspace: r
                .nullspace
                .iter()
                .map(|v| v.iter().map(|&c| c.into()).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop3Json {
    pub m: usize,
    pub dim_ideal_n_invariant: usize,
    pub hom_v_v: usize,
    pub surjection_possible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionReportJson {
    pub n: u32,
    pub nu: u32,
    pub g: u32,
    pub big_n: usize,
    pub points_used: usize,
    pub dim_invariant_forms: usize,
    pub m_computed: usize,
    pub m_formula: usize,
    pub eval_cols_nm1: usize,
    pub eval_rank_nm1: usize,
    pub dim_ideal_nm1: usize,
    pub expected_dim_ideal_nm1: Option<usize>,
    pub dim_ideal_n_invariant: usize,
    pub expected_dim_ideal_n_invariant: Option<usize>,
    pub polar_rank: Option<usize>,
    pub polars_span_ideal: Option<bool>,
    pub prop3: Option<Prop3Json>,
    pub warnings: Vec<String>,
}

impl From<&DimensionReport> for DimensionReportJson {
    fn from(r: &DimensionReport) -> Self {
        DimensionReportJson {
            n: r.n,
            nu: r.nu,
            g: r.g,
            big_n: r.big_n,
            points_used: r.points_used,
            dim_invariant_forms: r.dim_invariant_forms,
            m_computed: r.m_computed,
            m_formula: r.m_formula,
            eval_cols_nm1: r.eval_cols_nm1,
            eval_rank_nm1: r.eval_rank_nm1,
            dim_ideal_nm1: r.dim_ideal_nm1,
            expected_dim_ideal_nm1: r.expected_dim_ideal_nm1,
            dim_ideal_n_invariant: r.dim_ideal_n_invariant,
            expected_dim_ideal_n_invariant: r.expected_dim_ideal_n_invariant,
            polar_rank: r.polar_rank,
            polars_span_ideal: r.polars_span_ideal,
            prop3: r.prop3.as_ref().map(|p: &Prop3Witness| Prop3Json {
                m: p.m,
                dim_ideal_n_invariant: p.dim_ideal_n_invariant,
                hom_v_v: p.hom_v_v,
                surjection_possible: p.surjection_possible,
            }),
            warnings: r.warnings.clone(),
        }
    }
}
