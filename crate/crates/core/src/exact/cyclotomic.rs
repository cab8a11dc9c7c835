//! Elements of the cyclotomic field Q(zeta_n) in the power basis
//! 1, zeta, ..., zeta^(phi(n)-1) modulo the n-th cyclotomic polynomial.
//!
//! Levels of interest are tiny (n <= 10 in practice), so each level's
//! cyclotomic polynomial and the reduced powers zeta^0..zeta^(n-1) are
//! computed once and cached process-wide.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Largest supported root-of-unity order. Power-basis arithmetic is
/// quadratic in phi(n); nothing in this crate needs large levels.
pub const MAX_LEVEL: u32 = 100;

/// Euler totient.
pub fn phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Coefficients of the n-th cyclotomic polynomial, ascending degree.
///
/// Computed as (x^n - 1) / prod_{d | n, d < n} Phi_d; every division is
/// exact over Z because the divisors are monic integer polynomials.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Exact division of integer polynomials; `den` must be monic and divide
/// `num` exactly. Coefficients ascending.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    assert!(dn >= dd);
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            for j in 0..=dd {
                rem[k + j] -= &c * &den[j];
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

struct CycloTable {
    n: u32,
    phi: usize,
    /// Phi_n as a monic rational polynomial, ascending degree, length phi+1.
    modulus: Vec<BigRational>,
    /// zeta^k reduced to the power basis, for k in 0..n. Length-phi vectors.
    zeta_pow: Vec<Vec<BigRational>>,
}

fn tables() -> &'static Mutex<HashMap<u32, Arc<CycloTable>>> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<CycloTable>>>> = OnceLock::new();
    TABLES.get_or_init(|| Mutex::new(HashMap::new()))
}

fn table(n: u32) -> Result<Arc<CycloTable>> {
    if n == 0 || n > MAX_LEVEL {
        return Err(Error::parameter(format!(
            "cyclotomic level must be in 1..={MAX_LEVEL}, got {n}"
        )));
    }
    let mut cache = tables().lock().expect("cyclotomic table lock poisoned");
    if let Some(t) = cache.get(&n) {
        return Ok(t.clone());
    }
    let poly = cyclotomic_polynomial(n);
    let ph = poly.len() - 1;
    let modulus: Vec<BigRational> = poly.into_iter().map(BigRational::from_integer).collect();
    // zeta^k by repeated shift-and-reduce against the monic modulus.
    let mut zeta_pow = Vec::with_capacity(n as usize);
    let mut cur = vec![BigRational::zero(); ph];
    cur[0] = BigRational::one();
    zeta_pow.push(cur.clone());
    for _ in 1..n {
        let top = cur[ph - 1].clone();
        for i in (1..ph).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = BigRational::zero();
        if !top.is_zero() {
            for i in 0..ph {
                cur[i] -= &top * &modulus[i];
            }
        }
        zeta_pow.push(cur.clone());
    }
    let t = Arc::new(CycloTable {
        n,
        phi: ph,
        modulus,
        zeta_pow,
    });
    cache.insert(n, t.clone());
    Ok(t)
}

/// An element of Q(zeta_n), stored as phi(n) rational coordinates in the
/// power basis. Elements of different levels never mix; binary operations
/// panic on a level mismatch (a contract violation, not a runtime input).
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    level: u32,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(n: u32) -> Result<Self> {
        let t = table(n)?;
        Ok(Self {
            level: n,
            coeffs: vec![BigRational::zero(); t.phi],
        })
    }

    pub fn one(n: u32) -> Result<Self> {
        Self::from_rational(n, BigRational::one())
    }

    pub fn from_rational(n: u32, q: BigRational) -> Result<Self> {
        let t = table(n)?;
        let mut coeffs = vec![BigRational::zero(); t.phi];
        coeffs[0] = q;
        Ok(Self { level: n, coeffs })
    }

    /// zeta_n^k.
    pub fn root(n: u32, k: u32) -> Result<Self> {
        let t = table(n)?;
        Ok(Self {
            level: n,
            coeffs: t.zeta_pow[(k % n) as usize].clone(),
        })
    }

    /// Element with the given power-basis coordinates (length phi(n)).
    pub fn from_power_basis(n: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        let t = table(n)?;
        if coeffs.len() != t.phi {
            return Err(Error::parameter(format!(
                "Q(zeta_{n}) has degree {}, got {} coordinates",
                t.phi,
                coeffs.len()
            )));
        }
        Ok(Self { level: n, coeffs })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Power-basis coordinates, length phi(n).
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn check_level(&self, other: &Self) {
        assert_eq!(
            self.level, other.level,
            "cyclotomic level mismatch: {} vs {}",
            self.level, other.level
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_level(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            level: self.level,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_level(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            level: self.level,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            level: self.level,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_level(other);
        let t = table(self.level).expect("level validated at construction");
        let ph = t.phi;
        // Schoolbook convolution, then fold exponents >= phi back into the
        // basis through the cached reduced powers (zeta^j = zeta^(j mod n)).
        let mut conv = vec![BigRational::zero(); 2 * ph - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        let mut out = vec![BigRational::zero(); ph];
        for (j, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j < ph {
                out[j] += c;
            } else {
                let pow = &t.zeta_pow[j % t.n as usize];
                for (i, p) in pow.iter().enumerate() {
                    if !p.is_zero() {
                        out[i] += &c * p;
                    }
                }
            }
        }
        Self {
            level: self.level,
            coeffs: out,
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            level: self.level,
            coeffs: self.coeffs.iter().map(|a| a * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x]
    /// against the (irreducible) modulus.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Arithmetic(format!(
                "inversion of zero in Q(zeta_{})",
                self.level
            )));
        }
        let t = table(self.level)?;
        let f = trim(self.coeffs.clone());
        let (g, u) = xgcd_mod(&f, &t.modulus);
        // gcd(f, Phi_n) is a nonzero constant since Phi_n is irreducible
        // and deg f < deg Phi_n.
        debug_assert_eq!(g.len(), 1);
        let ginv = BigRational::one() / &g[0];
        let mut coeffs = vec![BigRational::zero(); t.phi];
        for (i, c) in u.into_iter().enumerate() {
            coeffs[i] = c * &ginv;
        }
        Ok(Self {
            level: self.level,
            coeffs,
        })
    }

    /// Complex conjugation, zeta -> zeta^(n-1).
    pub fn conj(&self) -> Self {
        let t = table(self.level).expect("level validated at construction");
        let n = t.n;
        let mut out = vec![BigRational::zero(); t.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((i as u32) * (n - 1)) % n;
            for (j, p) in t.zeta_pow[e as usize].iter().enumerate() {
                if !p.is_zero() {
                    out[j] += c * p;
                }
            }
        }
        Self {
            level: self.level,
            coeffs: out,
        }
    }

    /// Numerical value under zeta_n -> exp(2*pi*i/n).
    pub fn to_complex(&self) -> num_complex::Complex64 {
        use num_complex::Complex64;
        use num_traits::ToPrimitive;
        let n = self.level as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * (j as f64) / n;
            let v = c.to_f64().unwrap_or_else(|| {
                c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN)
            });
            acc += Complex64::from_polar(v, angle);
        }
        acc
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic(n={}; {})", self.level, self)
    }
}

/// Display as a polynomial in z = zeta_n, e.g. `1 - 2/3*z^2`.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match j {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if j == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{j}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().map(Zero::is_zero).unwrap_or(false) {
        p.pop();
    }
    p
}

fn poly_is_zero(p: &[BigRational]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Remainder and quotient of rational polynomials (coefficients ascending).
fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let den = trim(den.to_vec());
    assert!(!poly_is_zero(&den), "division by zero polynomial");
    let mut rem = trim(num.to_vec());
    let dd = den.len() - 1;
    if rem.len() - 1 < dd || poly_is_zero(&rem) {
        return (vec![BigRational::zero()], rem);
    }
    let dn = rem.len() - 1;
    let lead = den[dd].clone();
    let mut quot = vec![BigRational::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = &rem[k + dd] / &lead;
        if !c.is_zero() {
            for j in 0..=dd {
                let sub = &c * &den[j];
                rem[k + j] -= sub;
            }
        }
        quot[k] = c;
    }
    (trim(quot), trim(rem))
}

/// Returns (g, u) with u * f = g modulo `modulus` (Bezout reduced mod the
/// modulus), where g = gcd(f, modulus).
fn xgcd_mod(f: &[BigRational], modulus: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    // Invariants: r0 = u0 * f (mod modulus), r1 = u1 * f (mod modulus).
    let mut r0 = modulus.to_vec();
    let mut r1 = trim(f.to_vec());
    let mut u0 = vec![BigRational::zero()];
    let mut u1 = vec![BigRational::one()];
    while !poly_is_zero(&r1) {
        let (q, r) = poly_divmod(&r0, &r1);
        let qu = poly_mul_rat(&q, &u1);
        let u = poly_sub(&u0, &qu);
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = trim(u);
    }
    let (_, u0) = poly_divmod(&u0, modulus);
    (r0, u0)
}

fn poly_mul_rat(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use proptest::prelude::*;

    fn int_poly(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_polynomials_small_levels() {
        assert_eq!(cyclotomic_polynomial(1), int_poly(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), int_poly(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(3), int_poly(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(4), int_poly(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(5), int_poly(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(6), int_poly(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(8), int_poly(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_polynomial(12), int_poly(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn totient_values() {
        let vals: Vec<u32> = (1..=12).map(phi).collect();
        assert_eq!(vals, [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }

    #[test]
    fn cube_root_relations() {
        // In Q(zeta_3): zeta^2 = -1 - zeta and zeta^3 = 1.
        let z = Cyclotomic::root(3, 1).unwrap();
        let z2 = z.mul(&z);
        assert_eq!(z2.coeffs(), &[rat(-1), rat(-1)]);
        assert_eq!(z2, Cyclotomic::root(3, 2).unwrap());
        assert_eq!(z.mul(&z2), Cyclotomic::one(3).unwrap());
    }

    #[test]
    fn fourth_root_squares_to_minus_one() {
        let i = Cyclotomic::root(4, 1).unwrap();
        assert_eq!(i.mul(&i), Cyclotomic::from_rational(4, rat(-1)).unwrap());
    }

    #[test]
    fn inverse_of_one_plus_zeta_level_three() {
        // (1 + zeta)(1 + zeta^2) = 1 + zeta + zeta^2 + 1 = 1, so the inverse
        // of 1 + zeta is 1 + zeta^2 = -zeta. Frozen from the extended-Euclid
        // oracle; power-basis coordinates (0, -1).
        let one = Cyclotomic::one(3).unwrap();
        let z = Cyclotomic::root(3, 1).unwrap();
        let x = one.add(&z);
        let inv = x.inv().unwrap();
        assert_eq!(inv.coeffs(), &[rat(0), rat(-1)]);
        assert_eq!(inv, z.neg());
        assert_eq!(x.mul(&inv), one);
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let err = Cyclotomic::zero(5).unwrap().inv().unwrap_err();
        assert!(matches!(err, crate::Error::Arithmetic(_)));
    }

    #[test]
    fn root_sums_vanish_for_prime_levels() {
        for n in [3u32, 5, 7] {
            let mut acc = Cyclotomic::zero(n).unwrap();
            for k in 0..n {
                acc = acc.add(&Cyclotomic::root(n, k).unwrap());
            }
            assert!(acc.is_zero(), "sum of all {n}-th roots should vanish");
        }
    }

    #[test]
    fn conjugation_inverts_roots() {
        for n in [3u32, 4, 5, 8] {
            for k in 0..n {
                let z = Cyclotomic::root(n, k).unwrap();
                assert_eq!(z.conj(), Cyclotomic::root(n, (n - k) % n).unwrap());
                // z * conj(z) = |z|^2 = 1 for roots of unity.
                assert_eq!(z.mul(&z.conj()), Cyclotomic::one(n).unwrap());
            }
        }
    }

    #[test]
    fn scale_and_rational_embedding() {
        let x = Cyclotomic::from_rational(8, ratio(3, 4)).unwrap();
        assert!(x.is_rational());
        assert_eq!(x.scale(&ratio(4, 3)), Cyclotomic::one(8).unwrap());
    }

    #[test]
    fn to_complex_matches_euler() {
        let z = Cyclotomic::root(4, 1).unwrap().to_complex();
        assert!((z.re).abs() < 1e-12 && (z.im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn level_cap_is_enforced() {
        assert!(Cyclotomic::root(MAX_LEVEL + 1, 1).is_err());
        assert!(Cyclotomic::zero(0).is_err());
    }

    fn from_coeffs(n: u32, v: &[i64]) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(n).unwrap();
        for (k, &c) in v.iter().enumerate() {
            acc = acc.add(&Cyclotomic::root(n, k as u32).unwrap().scale(&rat(c)));
        }
        acc
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(350))]

        #[test]
        fn field_identities(n in prop::sample::select(vec![3u32, 4, 5]),
                            av in proptest::collection::vec(-9i64..=9, 4),
                            bv in proptest::collection::vec(-9i64..=9, 4),
                            cv in proptest::collection::vec(-9i64..=9, 4)) {
            let a = from_coeffs(n, &av);
            let b = from_coeffs(n, &bv);
            let c = from_coeffs(n, &cv);
            // Commutativity and associativity.
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            // Distributivity.
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            // Inverses.
            if !a.is_zero() {
                let one = Cyclotomic::one(n).unwrap();
                prop_assert_eq!(a.mul(&a.inv().unwrap()), one);
            }
            prop_assert!(a.sub(&a).is_zero());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(350))]

        #[test]
        fn random_inverses_round_trip(n in prop::sample::select(vec![3u32, 4, 5, 8]),
                                      coeffs in proptest::collection::vec(-9i64..=9, 1..=4)) {
            let mut a = Cyclotomic::zero(n).unwrap();
            for (k, c) in coeffs.into_iter().enumerate() {
                a = a.add(&Cyclotomic::root(n, k as u32).unwrap().scale(&rat(c)));
            }
            if !a.is_zero() {
                let inv = a.inv().unwrap();
                prop_assert_eq!(a.mul(&inv), Cyclotomic::one(n).unwrap());
                prop_assert_eq!(inv.inv().unwrap(), a);
            }
        }
    }
}
