//! The finite Heisenberg group H_n attached to K = (Z/nu)^g, and its
//! Schroedinger action on the delta basis of functions on K.
//!
//! Elements are triples (lambda, a, b) with lambda in Z/n and a, b in K,
//! where n = nu for odd nu and n = 2*nu for even nu. The commutator pairing
//! lands in the nu-torsion of the center, embedded via multiplication by
//! n/nu. Phases are carried as exponents of zeta_n, never as floats.

use std::fmt;

use crate::lattice::KPoint;
use crate::{canonical_level, Error, Result};

/// Group element (lambda, a, b) of H_n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeisenbergElement {
    n: u32,
    lambda: u32,
    a: KPoint,
    b: KPoint,
}

impl HeisenbergElement {
    /// Validates that `n` is the level attached to the lattice level of
    /// `a`, `b` (n = nu odd, n = 2*nu even) and that the two points live in
    /// the same lattice.
    pub fn new(n: u32, lambda: u32, a: KPoint, b: KPoint) -> Result<Self> {
        if a.level() != b.level() || a.rank() != b.rank() {
            return Err(Error::parameter(format!(
                "a and b must lie in the same lattice, got levels {}/{} ranks {}/{}",
                a.level(),
                b.level(),
                a.rank(),
                b.rank()
            )));
        }
        let nu = a.level();
        if n != canonical_level(nu) {
            return Err(Error::parameter(format!(
                "level {n} does not match lattice level {nu}: expected {} ( = nu for odd nu, 2*nu for even)",
                canonical_level(nu)
            )));
        }
        Ok(Self {
            n,
            lambda: lambda % n,
            a,
            b,
        })
    }

    pub fn identity(nu: u32, g: u32) -> Result<Self> {
        let zero = KPoint::zero(nu, g);
        Self::new(canonical_level(nu), 0, zero.clone(), zero)
    }

    /// Central element (lambda, 0, 0).
    pub fn central(nu: u32, g: u32, lambda: u32) -> Result<Self> {
        let zero = KPoint::zero(nu, g);
        Self::new(canonical_level(nu), lambda, zero.clone(), zero)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nu(&self) -> u32 {
        self.a.level()
    }

    pub fn g(&self) -> u32 {
        self.a.rank()
    }

    /// The embedding factor n/nu in {1, 2} carrying the Z/nu-valued pairing
    /// into Z/n.
    pub fn embed_factor(&self) -> u32 {
        self.n / self.nu()
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn a(&self) -> &KPoint {
        &self.a
    }

    pub fn b(&self) -> &KPoint {
        &self.b
    }

    pub fn is_central(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.lambda == 0 && self.is_central()
    }

    /// Group law: the cocycle adds (n/nu) * <b1, a2> to the center.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.nu() != other.nu() || self.g() != other.g() {
            return Err(Error::parameter(format!(
                "cannot compose elements of H_{} over (Z/{})^{} and H_{} over (Z/{})^{}",
                self.n,
                self.nu(),
                self.g(),
                other.n,
                other.nu(),
                other.g()
            )));
        }
        let cocycle = self.embed_factor() * self.b.pairing(&other.a)?;
        let lambda = (self.lambda + other.lambda + cocycle) % self.n;
        Self::new(self.n, lambda, self.a.add(&other.a)?, self.b.add(&other.b)?)
    }

    pub fn inverse(&self) -> Self {
        // (lambda, a, b)^-1 = (-lambda + (n/nu)<b, a>, -a, -b).
        let back = self.embed_factor() * self.b.pairing(&self.a).expect("same lattice");
        let lambda = ((self.n - self.lambda) + back) % self.n;
        Self::new(self.n, lambda, self.a.neg(), self.b.neg()).expect("parts already validated")
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::identity(self.nu(), self.g()).expect("valid parameters");
        for _ in 0..k {
            acc = acc.compose(self).expect("same group");
        }
        acc
    }

    /// Commutator h * other * h^-1 * other^-1; always central.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?
            .compose(&self.inverse())?
            .compose(&other.inverse())
    }

    /// Schroedinger action on the delta basis: delta_x picks up the phase
    /// zeta_n^(lambda + (n/nu)<b, x>) and moves to delta_(x + a). Returns
    /// the phase exponent and the target point.
    pub fn act_on_basis(&self, x: &KPoint) -> Result<(u32, KPoint)> {
        if x.level() != self.nu() || x.rank() != self.g() {
            return Err(Error::parameter(format!(
                "basis point lives in (Z/{})^{}, expected (Z/{})^{}",
                x.level(),
                x.rank(),
                self.nu(),
                self.g()
            )));
        }
        let phase = (self.lambda + self.embed_factor() * self.b.pairing(x)?) % self.n;
        Ok((phase, x.add(&self.a)?))
    }
}

impl fmt::Display for HeisenbergElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(z^{}; {}; {})", self.lambda, self.a, self.b)
    }
}

/// Standard generating set: the central generator (1, 0, 0), then the
/// translations (0, e_i, 0), then the characters (0, 0, e_i).
pub fn generators(nu: u32, g: u32) -> Result<Vec<HeisenbergElement>> {
    let n = canonical_level(nu);
    let zero = KPoint::zero(nu, g);
    let mut gens = vec![HeisenbergElement::new(n, 1, zero.clone(), zero.clone())?];
    for i in 0..g {
        gens.push(HeisenbergElement::new(n, 0, KPoint::unit(nu, g, i), zero.clone())?);
    }
    for i in 0..g {
        gens.push(HeisenbergElement::new(n, 0, zero.clone(), KPoint::unit(nu, g, i))?);
    }
    Ok(gens)
}

/// Every element of H_n, in lexicographic (lambda, a, b) order.
pub fn enumerate_elements(nu: u32, g: u32) -> Result<Vec<HeisenbergElement>> {
    let n = canonical_level(nu);
    let lattice = crate::lattice::Lattice::new(nu, g)?;
    let order = (n as u64)
        .checked_mul((lattice.size() as u64).pow(2))
        .ok_or_else(|| Error::capacity("group order overflows u64".to_string()))?;
    if order > crate::bounds::MAX_ORACLE_GROUP as u64 {
        return Err(Error::capacity(format!(
            "group order {order} exceeds exhaustive-enumeration bound {}",
            crate::bounds::MAX_ORACLE_GROUP
        )));
    }
    let mut out = Vec::with_capacity(order as usize);
    for lambda in 0..n {
        for ai in 0..lattice.size() as u32 {
            for bi in 0..lattice.size() as u32 {
                out.push(HeisenbergElement::new(
                    n,
                    lambda,
                    lattice.point(ai),
                    lattice.point(bi),
                )?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn elem(nu: u32, lambda: u32, a: &[i64], b: &[i64]) -> HeisenbergElement {
        HeisenbergElement::new(
            canonical_level(nu),
            lambda,
            KPoint::new(nu, a).unwrap(),
            KPoint::new(nu, b).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn level_validation() {
        let a = KPoint::new(3, &[1]).unwrap();
        let b = KPoint::new(3, &[2]).unwrap();
        // nu = 3 is odd, so n must be 3.
        assert!(HeisenbergElement::new(3, 0, a.clone(), b.clone()).is_ok());
        assert!(HeisenbergElement::new(6, 0, a.clone(), b.clone()).is_err());
        // nu = 2 needs n = 4.
        let c = KPoint::new(2, &[1, 0]).unwrap();
        assert!(HeisenbergElement::new(4, 0, c.clone(), c.clone()).is_ok());
        assert!(HeisenbergElement::new(2, 0, c.clone(), c).is_err());
    }

    #[test]
    fn mismatched_lattices_rejected() {
        let a = KPoint::new(3, &[1]).unwrap();
        let b = KPoint::new(5, &[1]).unwrap();
        assert!(HeisenbergElement::new(3, 0, a.clone(), b).is_err());
        let x = elem(3, 0, &[1], &[0]);
        let y = elem(5, 0, &[1], &[0]);
        assert!(x.compose(&y).is_err());
        assert!(x.act_on_basis(&KPoint::new(5, &[0]).unwrap()).is_err());
    }

    #[test]
    fn weyl_commutation_relation() {
        // With x = (0, e1, 0) and y = (0, 0, f1):
        // y * x = z^((n/nu)<f1, e1>) * x * y.
        for nu in [2u32, 3, 4, 5] {
            let x = elem(nu, 0, &[1], &[0]);
            let y = elem(nu, 0, &[0], &[1]);
            let lhs = y.compose(&x).unwrap();
            let phase = HeisenbergElement::central(nu, 1, canonical_level(nu) / nu).unwrap();
            let rhs = phase.compose(&x.compose(&y).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "Weyl relation failed at nu = {nu}");
            // And the commutator is exactly that central phase.
            assert_eq!(y.commutator(&x).unwrap(), phase);
        }
    }

    #[test]
    fn group_axioms_exhaustive() {
        for (nu, g) in [(3u32, 1u32), (2, 1), (4, 1)] {
            let elems = enumerate_elements(nu, g).unwrap();
            let id = HeisenbergElement::identity(nu, g).unwrap();
            for h in &elems {
                assert_eq!(h.compose(&id).unwrap(), *h);
                assert_eq!(id.compose(h).unwrap(), *h);
                assert!(h.compose(&h.inverse()).unwrap().is_identity());
                assert!(h.inverse().compose(h).unwrap().is_identity());
                // Every element has order dividing n.
                assert!(h.pow(h.n() as u64).is_identity(), "{h}^n != e");
            }
        }
    }

    #[test]
    fn associativity_exhaustive_small() {
        let elems = enumerate_elements(3, 1).unwrap();
        assert_eq!(elems.len(), 27);
        for a in &elems {
            for b in &elems {
                let ab = a.compose(b).unwrap();
                for c in &elems {
                    let bc = b.compose(c).unwrap();
                    assert_eq!(ab.compose(c).unwrap(), a.compose(&bc).unwrap());
                }
            }
        }
    }

    #[test]
    fn closure_from_generators() {
        // (nu, g, expected |H_n| = n * nu^(2g))
        for (nu, g, expected) in [(3u32, 1u32, 27usize), (2, 1, 16), (2, 2, 64), (4, 1, 128)] {
            let gens = generators(nu, g).unwrap();
            assert_eq!(gens.len(), (1 + 2 * g) as usize);
            let mut seen: HashSet<HeisenbergElement> = HashSet::new();
            let mut frontier = vec![HeisenbergElement::identity(nu, g).unwrap()];
            seen.insert(frontier[0].clone());
            while let Some(h) = frontier.pop() {
                for gen in &gens {
                    let next = h.compose(gen).unwrap();
                    if seen.insert(next.clone()) {
                        frontier.push(next);
                    }
                }
            }
            assert_eq!(seen.len(), expected, "wrong group order for nu={nu}, g={g}");
            assert_eq!(seen.len(), enumerate_elements(nu, g).unwrap().len());
        }
    }

    #[test]
    fn schroedinger_action_is_a_representation() {
        // rho(h1 h2) delta_x = rho(h1) rho(h2) delta_x, phases included,
        // checked exhaustively for one odd and one even level.
        for (nu, g) in [(3u32, 1u32), (2, 2)] {
            let lattice = crate::lattice::Lattice::new(nu, g).unwrap();
            let elems = enumerate_elements(nu, g).unwrap();
            let n = canonical_level(nu);
            for h1 in &elems {
                for h2 in &elems {
                    let h12 = h1.compose(h2).unwrap();
                    for xi in 0..lattice.size() as u32 {
                        let x = lattice.point(xi);
                        let (p2, mid) = h2.act_on_basis(&x).unwrap();
                        let (p1, fin) = h1.act_on_basis(&mid).unwrap();
                        let (p12, direct) = h12.act_on_basis(&x).unwrap();
                        assert_eq!(direct, fin);
                        assert_eq!(p12, (p1 + p2) % n);
                    }
                }
            }
        }
    }

    #[test]
    fn central_elements_act_by_scalars() {
        let nu = 3;
        let lattice = crate::lattice::Lattice::new(nu, 2).unwrap();
        for lambda in 0..3 {
            let z = HeisenbergElement::central(nu, 2, lambda).unwrap();
            assert!(z.is_central());
            for xi in 0..lattice.size() as u32 {
                let x = lattice.point(xi);
                let (phase, y) = z.act_on_basis(&x).unwrap();
                assert_eq!(phase, lambda);
                assert_eq!(y, x);
            }
        }
    }

    #[test]
    fn enumeration_respects_capacity_bound() {
        // nu = 7, g = 2 gives order 7 * 7^4 = 16807 > 10000.
        assert!(matches!(
            enumerate_elements(7, 2),
            Err(crate::Error::Capacity(_))
        ));
    }
}
