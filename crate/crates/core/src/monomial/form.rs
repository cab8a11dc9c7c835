//! Monomials in the coordinates `T_x` (x in K) and sparse polynomial forms
//! with exact or complex coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::exact::Cyclotomic;
use crate::heisenberg::HeisenbergElement;
use crate::lattice::{KPoint, Lattice};
use crate::{Error, Result};

/// A monomial in the `T_x`, stored as the sorted multiset of its variable
/// indices (lattice indices, with repetition). The derived order is the
/// multiset lexicographic order used everywhere for bases and output.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    vars: Vec<u32>,
}

impl Monomial {
    /// Degree-zero monomial (the constant 1).
    pub fn one() -> Self {
        Monomial { vars: Vec::new() }
    }

    pub fn from_multiset(vars: impl Into<Vec<u32>>) -> Self {
        let mut vars = vars.into();
        vars.sort_unstable();
        Monomial { vars }
    }

    pub fn from_powers(powers: &[(u32, u32)]) -> Self {
        let mut vars = Vec::new();
        for &(idx, mult) in powers {
            vars.extend(std::iter::repeat_n(idx, mult as usize));
        }
        vars.sort_unstable();
        Monomial { vars }
    }

    pub fn degree(&self) -> u32 {
        self.vars.len() as u32
    }

    /// Variable indices with repetition, sorted.
    pub fn multiset(&self) -> &[u32] {
        &self.vars
    }

    /// (variable index, multiplicity) pairs, ascending in the index.
    pub fn powers(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &v in &self.vars {
            match out.last_mut() {
                Some((idx, mult)) if *idx == v => *mult += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    /// Sum of the variables as a point of K (the weight of the monomial).
    pub fn weight(&self, lattice: &Lattice) -> u32 {
        let mut w = 0u32;
        for &v in &self.vars {
            w = lattice.add(w, v);
        }
        w
    }

    /// Monomial with every variable translated by `a`.
    pub fn translate(&self, lattice: &Lattice, a: u32) -> Monomial {
        let mut vars: Vec<u32> = self.vars.iter().map(|&v| lattice.add(a, v)).collect();
        vars.sort_unstable();
        Monomial { vars }
    }

    /// Removes one factor `T_var`; returns the multiplicity it had and the
    /// quotient monomial, or None if `var` does not divide this monomial.
    pub fn without_one(&self, var: u32) -> Option<(u32, Monomial)> {
        let pos = self.vars.iter().position(|&v| v == var)?;
        let mult = self.vars.iter().filter(|&&v| v == var).count() as u32;
        let mut vars = self.vars.clone();
        vars.remove(pos);
        Some((mult, Monomial { vars }))
    }

    /// Multiplies by one factor `T_var`.
    pub fn times_var(&self, var: u32) -> Monomial {
        let mut vars = self.vars.clone();
        vars.push(var);
        vars.sort_unstable();
        Monomial { vars }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return write!(f, "1");
        }
        for (i, (idx, mult)) in self.powers().into_iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "T{idx}")?;
            if mult > 1 {
                write!(f, "^{mult}")?;
            }
        }
        Ok(())
    }
}

/// Coefficient ring for sparse forms. Zeros are never stored, so no nullary
/// zero constructor is needed (cyclotomic values carry their level).
pub trait Coeff: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale_u32(&self, k: u32) -> Self;
}

impl Coeff for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale_u32(&self, k: u32) -> Self {
        self * BigRational::from_integer(k.into())
    }
}

impl Coeff for Cyclotomic {
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Cyclotomic::add(self, other)
    }
    fn neg(&self) -> Self {
        Cyclotomic::neg(self)
    }
    fn scale_u32(&self, k: u32) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }
}

impl Coeff for Complex64 {
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale_u32(&self, k: u32) -> Self {
        self * (k as f64)
    }
}

/// Coefficients that embed into C, for numerical evaluation.
pub trait ToComplex: Coeff {
    fn to_complex(&self) -> Complex64;
}

impl ToComplex for BigRational {
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl ToComplex for Cyclotomic {
    fn to_complex(&self) -> Complex64 {
        Cyclotomic::to_complex(self)
    }
}

impl ToComplex for Complex64 {
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// Coefficients that can absorb a root-of-unity factor zeta_n^exp, for the
/// Heisenberg action on forms.
pub trait RootMul: Coeff {
    fn mul_root(&self, exp: u32, n: u32) -> Result<Self>
    where
        Self: Sized;
}

impl RootMul for Cyclotomic {
    fn mul_root(&self, exp: u32, n: u32) -> Result<Self> {
        if self.level() != n {
            return Err(Error::parameter(format!(
                "cyclotomic level {} cannot absorb a zeta_{n} phase",
                self.level()
            )));
        }
        Ok(self.mul(&Cyclotomic::root(n, exp)?))
    }
}

impl RootMul for Complex64 {
    fn mul_root(&self, exp: u32, n: u32) -> Result<Self> {
        let angle = 2.0 * std::f64::consts::PI * (exp % n) as f64 / n as f64;
        Ok(self * Complex64::from_polar(1.0, angle))
    }
}

/// A homogeneous polynomial in the `nu^g` coordinates `T_x`, stored
/// sparsely with deterministic (monomial-ordered) iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseForm<C> {
    nu: u32,
    g: u32,
    degree: u32,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> SparseForm<C> {
    pub fn zero(nu: u32, g: u32, degree: u32) -> Result<Self> {
        let _ = Lattice::new(nu, g)?;
        Ok(SparseForm {
            nu,
            g,
            degree,
            terms: BTreeMap::new(),
        })
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.nu, self.g).expect("validated at construction")
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// Adds `c * m` into the form, combining and dropping zeros.
    pub fn add_term(&mut self, m: Monomial, c: C) -> Result<()> {
        if m.degree() != self.degree {
            return Err(Error::parameter(format!(
                "monomial degree {} does not match form degree {}",
                m.degree(),
                self.degree
            )));
        }
        let size = self.lattice().size() as u32;
        if m.multiset().iter().any(|&v| v >= size) {
            return Err(Error::parameter("monomial variable index out of range"));
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.nu, self.g, self.degree) != (other.nu, other.g, other.degree) {
            return Err(Error::parameter("cannot add forms of different shape"));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> SparseForm<D> {
        SparseForm {
            nu: self.nu,
            g: self.g,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let d = f(c);
                    (!d.is_zero()).then(|| (m.clone(), d))
                })
                .collect(),
        }
    }

    /// d/dT_x. Degree drops by one.
    pub fn partial_derivative(&self, x: &KPoint) -> Result<SparseForm<C>> {
        if self.degree == 0 {
            return Err(Error::parameter("cannot differentiate a degree-0 form"));
        }
        let lattice = self.lattice();
        let var = lattice.index_of(x)?;
        let mut out = SparseForm::zero(self.nu, self.g, self.degree - 1)?;
        for (m, c) in &self.terms {
            if let Some((mult, quotient)) = m.without_one(var) {
                out.add_term(quotient, c.scale_u32(mult))?;
            }
        }
        Ok(out)
    }

    /// T_x * self. Degree grows by one.
    pub fn times_var(&self, x: &KPoint) -> Result<SparseForm<C>> {
        let lattice = self.lattice();
        let var = lattice.index_of(x)?;
        let mut out = SparseForm::zero(self.nu, self.g, self.degree + 1)?;
        for (m, c) in &self.terms {
            out.add_term(m.times_var(var), c.clone())?;
        }
        Ok(out)
    }
}

impl<C: ToComplex> SparseForm<C> {
    /// Evaluates at a coordinate vector of length `nu^g`.
    pub fn evaluate(&self, coords: &[Complex64]) -> Result<Complex64> {
        let size = self.lattice().size();
        if coords.len() != size {
            return Err(Error::parameter(format!(
                "expected {size} coordinates, got {}",
                coords.len()
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for (idx, mult) in m.powers() {
                t *= coords[idx as usize].powi(mult as i32);
            }
            acc += t;
        }
        Ok(acc)
    }
}

impl<C: RootMul> SparseForm<C> {
    /// The Heisenberg action on forms of degree d: a monomial M picks up
    /// the phase zeta_n^(d*lambda + (n/nu)<b, weight(M)>) and every
    /// variable is translated by a.
    pub fn apply_heisenberg(&self, h: &HeisenbergElement) -> Result<SparseForm<C>> {
        if h.nu() != self.nu || h.g() != self.g {
            return Err(Error::parameter(
                "group element and form live over different lattices",
            ));
        }
        let lattice = self.lattice();
        let n = h.n();
        let a = lattice.index_of(h.a())?;
        let b = lattice.index_of(h.b())?;
        let dl = (self.degree % n) * h.lambda() % n;
        let mut out = SparseForm::zero(self.nu, self.g, self.degree)?;
        for (m, c) in &self.terms {
            let exp = (dl + h.embed_factor() * lattice.pairing(b, m.weight(&lattice))) % n;
            out.add_term(m.translate(&lattice, a), c.mul_root(exp, n)?)?;
        }
        Ok(out)
    }
}

impl SparseForm<BigRational> {
    /// Embeds rational coefficients into Q(zeta_n).
    pub fn to_cyclotomic(&self, n: u32) -> Result<SparseForm<Cyclotomic>> {
        let mut out = SparseForm::zero(self.nu, self.g, self.degree)?;
        for (m, c) in &self.terms {
            out.add_term(m.clone(), Cyclotomic::from_rational(n, c.clone())?)?;
        }
        Ok(out)
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for SparseForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        Ok(())
    }
}
