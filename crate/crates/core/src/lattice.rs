//! Arithmetic of the finite abelian group `K = (Z/nu)^g`, its characters
//! and the mod-`nu` dot-product pairing.
//!
//! The dual of `K` is identified with `K` itself through the pairing
//! `<b, x> = sum_i b_i x_i mod nu`, and the dual of `K x K` with pairs
//! `(alpha, beta)`. Points are enumerated in lexicographic order of their
//! coordinate vectors; this order fixes the coordinate system
//! `T_1, ..., T_N` on `P(V)` once and for all.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::MAX_LATTICE;
use crate::{Error, Result};

/// A point of `K = (Z/nu)^g`, stored as canonical representatives in
/// `[0, nu)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KPoint {
    nu: u32,
    coords: Vec<u32>,
}

impl KPoint {
    /// Builds a point from arbitrary integer coordinates, reducing mod `nu`.
    pub fn new(nu: u32, coords: &[i64]) -> Result<Self> {
        if nu < 2 {
            return Err(Error::parameter(format!("level nu must be >= 2, got {nu}")));
        }
        if coords.is_empty() {
            return Err(Error::parameter("rank g must be >= 1"));
        }
        let coords = coords
            .iter()
            .map(|&c| c.rem_euclid(nu as i64) as u32)
            .collect();
        Ok(KPoint { nu, coords })
    }

    pub fn zero(nu: u32, g: u32) -> Self {
        KPoint {
            nu,
            coords: vec![0; g as usize],
        }
    }

    /// The i-th standard basis vector `e_i` (0-based).
    pub fn unit(nu: u32, g: u32, i: u32) -> Self {
        let mut coords = vec![0; g as usize];
        coords[i as usize] = 1 % nu;
        KPoint { nu, coords }
    }

    pub fn level(&self) -> u32 {
        self.nu
    }

    pub fn rank(&self) -> u32 {
        self.coords.len() as u32
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &KPoint) -> Result<()> {
        if self.nu != other.nu || self.coords.len() != other.coords.len() {
            return Err(Error::parameter(format!(
                "incompatible lattice points: (nu={}, g={}) vs (nu={}, g={})",
                self.nu,
                self.coords.len(),
                other.nu,
                other.coords.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &KPoint) -> Result<KPoint> {
        self.check_compatible(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| (a + b) % self.nu)
            .collect();
        Ok(KPoint {
            nu: self.nu,
            coords,
        })
    }

    pub fn neg(&self) -> KPoint {
        let coords = self
            .coords
            .iter()
            .map(|&a| if a == 0 { 0 } else { self.nu - a })
            .collect();
        KPoint {
            nu: self.nu,
            coords,
        }
    }

    pub fn scale(&self, k: i64) -> KPoint {
        let k = k.rem_euclid(self.nu as i64) as u64;
        let coords = self
            .coords
            .iter()
            .map(|&a| ((a as u64 * k) % self.nu as u64) as u32)
            .collect();
        KPoint {
            nu: self.nu,
            coords,
        }
    }

    /// Dot-product pairing `<self, x> = sum_i self_i * x_i mod nu`.
    /// Bilinear and symmetric.
    pub fn pairing(&self, x: &KPoint) -> Result<u32> {
        self.check_compatible(x)?;
        let s: u64 = self
            .coords
            .iter()
            .zip(&x.coords)
            .map(|(&b, &x)| b as u64 * x as u64)
            .sum();
        Ok((s % self.nu as u64) as u32)
    }
}

impl fmt::Display for KPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A character of `A_nu = K x K`; evaluates on `(a, b)` as the exponent
/// `<alpha, a> + <beta, b> mod nu` of a fixed primitive `nu`-th root of
/// unity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    pub alpha: KPoint,
    pub beta: KPoint,
}

impl Character {
    pub fn new(alpha: KPoint, beta: KPoint) -> Result<Self> {
        if alpha.nu != beta.nu || alpha.rank() != beta.rank() {
            return Err(Error::parameter("character parts live in different groups"));
        }
        Ok(Character { alpha, beta })
    }

    pub fn is_trivial(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }

    /// Evaluation exponent mod `nu` on the group element `(a, b)`.
    pub fn eval(&self, a: &KPoint, b: &KPoint) -> Result<u32> {
        Ok((self.alpha.pairing(a)? + self.beta.pairing(b)?) % self.alpha.nu)
    }
}

/// Shared descriptor of `(Z/nu)^g` with index-based arithmetic.
///
/// Points are indexed by their lexicographic position: the point
/// `(c_0, ..., c_{g-1})` has index `sum c_i nu^(g-1-i)` (big-endian
/// digits). All hot loops work on these `u32` indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    nu: u32,
    g: u32,
    size: u32,
}

impl Lattice {
    pub fn new(nu: u32, g: u32) -> Result<Self> {
        if nu < 2 {
            return Err(Error::parameter(format!("level nu must be >= 2, got {nu}")));
        }
        if g < 1 {
            return Err(Error::parameter("rank g must be >= 1"));
        }
        let mut size: u64 = 1;
        for _ in 0..g {
            size *= nu as u64;
            if size > MAX_LATTICE as u64 {
                return Err(Error::capacity(format!(
                    "lattice size nu^g = {nu}^{g} exceeds {MAX_LATTICE}"
                )));
            }
        }
        Ok(Lattice {
            nu,
            g,
            size: size as u32,
        })
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn point(&self, index: u32) -> KPoint {
        debug_assert!(index < self.size);
        let mut coords = vec![0u32; self.g as usize];
        let mut rem = index;
        for slot in coords.iter_mut().rev() {
            *slot = rem % self.nu;
            rem /= self.nu;
        }
        KPoint {
            nu: self.nu,
            coords,
        }
    }

    pub fn index_of(&self, p: &KPoint) -> Result<u32> {
        if p.nu != self.nu || p.rank() != self.g {
            return Err(Error::parameter("point does not belong to this lattice"));
        }
        let mut idx = 0u32;
        for &c in &p.coords {
            idx = idx * self.nu + c;
        }
        Ok(idx)
    }

    pub fn add(&self, i: u32, j: u32) -> u32 {
        let (mut i, mut j) = (i, j);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.g {
            let d = (i % self.nu + j % self.nu) % self.nu;
            out += d * place;
            place = place.saturating_mul(self.nu);
            i /= self.nu;
            j /= self.nu;
        }
        out
    }

    pub fn neg(&self, i: u32) -> u32 {
        let mut i = i;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.g {
            let d = i % self.nu;
            let nd = if d == 0 { 0 } else { self.nu - d };
            out += nd * place;
            place = place.saturating_mul(self.nu);
            i /= self.nu;
        }
        out
    }

    /// Index-level pairing `<i, j> mod nu`.
    pub fn pairing(&self, i: u32, j: u32) -> u32 {
        let (mut i, mut j) = (i, j);
        let mut s = 0u64;
        for _ in 0..self.g {
            s += (i % self.nu) as u64 * (j % self.nu) as u64;
            i /= self.nu;
            j /= self.nu;
        }
        (s % self.nu as u64) as u32
    }

    pub fn points(&self) -> impl Iterator<Item = KPoint> + '_ {
        (0..self.size).map(|i| self.point(i))
    }

    /// All `nu^(2g)` characters of `K x K`, lexicographic in
    /// `(alpha, beta)`.
    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        (0..self.size).flat_map(move |a| {
            (0..self.size).map(move |b| Character {
                alpha: self.point(a),
                beta: self.point(b),
            })
        })
    }
}

/// All `nu^g` points of `K`, each exactly once, in the lexicographic order
/// that fixes the global coordinate system.
pub fn enumerate_group(nu: u32, g: u32) -> Result<Vec<KPoint>> {
    let lattice = Lattice::new(nu, g)?;
    Ok(lattice.points().collect())
}
