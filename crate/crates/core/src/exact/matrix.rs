//! Sparse exact row-echelon elimination, rank, and nullspace over any
//! field-like scalar (rationals, cyclotomics).
//!
//! Pivoting is deterministic: columns are processed in ascending order and
//! the pivot in each column is the earliest surviving row, so identical
//! input always yields identical echelon rows and nullspace vectors.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::Cyclotomic;
use crate::{Error, Result};

/// Sparse row: (column, value) pairs sorted by column, values nonzero.
pub type SparseRow<S> = Vec<(u32, S)>;

/// Exact field scalar usable in elimination. `normalize_row` may rescale a
/// whole row by a nonzero constant; the default keeps rows as-is. The
/// rational and cyclotomic impls clear denominators and divide out integer
/// content so intermediate rows stay fraction-free.
pub trait ExactScalar: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    fn normalize_row(_row: &mut SparseRow<Self>)
    where
        Self: Sized,
    {
    }
}

impl ExactScalar for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            return Err(Error::Arithmetic("inversion of rational zero".into()));
        }
        Ok(BigRational::one() / self)
    }
    fn normalize_row(row: &mut SparseRow<Self>) {
        if row.is_empty() {
            return;
        }
        let scale = row_scale(row.iter().map(|(_, v)| v), row[0].1.is_negative());
        if !scale.is_one() {
            for (_, v) in row.iter_mut() {
                *v *= &scale;
            }
        }
    }
}

impl ExactScalar for Cyclotomic {
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Cyclotomic::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Cyclotomic::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Cyclotomic::mul(self, other)
    }
    fn neg(&self) -> Self {
        Cyclotomic::neg(self)
    }
    fn inv(&self) -> Result<Self> {
        Cyclotomic::inv(self)
    }
    fn normalize_row(row: &mut SparseRow<Self>) {
        if row.is_empty() {
            return;
        }
        let scale = row_scale(
            row.iter().flat_map(|(_, v)| v.coeffs().iter()),
            false, // no canonical sign for a cyclotomic leading entry
        );
        if !scale.is_one() {
            for (_, v) in row.iter_mut() {
                *v = v.scale(&scale);
            }
        }
    }
}

/// Rescaling factor that makes every rational in the row an integer and
/// divides out their common content; optionally flips sign.
fn row_scale<'a>(values: impl Iterator<Item = &'a BigRational>, negate: bool) -> BigRational {
    let mut denom_lcm = BigInt::one();
    let mut numer_gcd = BigInt::zero();
    for v in values {
        if Zero::is_zero(v) {
            continue;
        }
        denom_lcm = denom_lcm.lcm(v.denom());
        numer_gcd = numer_gcd.gcd(v.numer());
    }
    if numer_gcd.is_zero() {
        return BigRational::one();
    }
    // gcd is non-negative, so this is positive; flip to fix the lead sign.
    let scale = BigRational::new(denom_lcm, numer_gcd);
    if negate {
        -scale
    } else {
        scale
    }
}

/// A sparse matrix intended for one-shot rank/nullspace queries. `one` is
/// the multiplicative unit of the scalar field (cyclotomics carry their
/// level in each value, so the unit cannot be synthesized from thin air).
#[derive(Clone, Debug)]
pub struct ExactMatrix<S> {
    ncols: usize,
    one: S,
    rows: Vec<SparseRow<S>>,
}

impl<S: ExactScalar> ExactMatrix<S> {
    pub fn new(ncols: usize, one: S) -> Self {
        Self {
            ncols,
            one,
            rows: Vec::new(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Append a row given as arbitrary (column, value) pairs; duplicates are
    /// combined and zeros dropped.
    pub fn push_row(&mut self, entries: SparseRow<S>) {
        let mut map: BTreeMap<u32, S> = BTreeMap::new();
        for (c, v) in entries {
            assert!((c as usize) < self.ncols, "column {c} out of range");
            match map.remove(&c) {
                Some(old) => {
                    let s = old.add(&v);
                    if !s.is_zero() {
                        map.insert(c, s);
                    }
                }
                None => {
                    if !v.is_zero() {
                        map.insert(c, v);
                    }
                }
            }
        }
        self.rows.push(map.into_iter().collect());
    }

    pub fn push_dense_row(&mut self, row: &[S]) {
        assert_eq!(row.len(), self.ncols);
        let entries = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c as u32, v.clone()))
            .collect();
        self.push_row(entries);
    }

    /// Matrix-vector product; used by tests to confirm nullspace vectors
    /// are exact solutions.
    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.ncols);
        let zero = self.one.sub(&self.one);
        self.rows
            .iter()
            .map(|row| {
                let mut acc = zero.clone();
                for (c, x) in row {
                    acc = acc.add(&x.mul(&v[*c as usize]));
                }
                acc
            })
            .collect()
    }

    /// Row-echelon form. Deterministic regardless of scalar type.
    pub fn echelon(&self) -> Echelon<S> {
        let mut buckets: BTreeMap<u32, VecDeque<SparseRow<S>>> = BTreeMap::new();
        for row in &self.rows {
            let mut row = row.clone();
            S::normalize_row(&mut row);
            if let Some(&(lead, _)) = row.first() {
                buckets.entry(lead).or_default().push_back(row);
            }
        }
        let mut pivots: Vec<SparseRow<S>> = Vec::new();
        while let Some((&col, _)) = buckets.iter().next() {
            let mut bucket = buckets.remove(&col).expect("bucket just observed");
            let pivot = bucket.pop_front().expect("buckets are never empty");
            let pivot_lead_inv = pivot[0].1.inv().expect("leading entries are nonzero");
            for row in bucket {
                let factor = row[0].1.mul(&pivot_lead_inv);
                let mut reduced = row_minus_scaled(&row, &factor, &pivot);
                S::normalize_row(&mut reduced);
                if let Some(&(lead, _)) = reduced.first() {
                    debug_assert!(lead > col);
                    buckets.entry(lead).or_default().push_back(reduced);
                }
            }
            pivots.push(pivot);
        }
        Echelon {
            ncols: self.ncols,
            one: self.one.clone(),
            rows: pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// (rank, dense nullspace basis). One vector per free column, in
    /// ascending free-column order, with a 1 in the free position.
    pub fn rank_nullspace(&self) -> (usize, Vec<Vec<S>>) {
        let ech = self.echelon();
        let rank = ech.rank();
        (rank, ech.nullspace())
    }
}

/// `row - factor * pivot`, both sparse and sorted.
fn row_minus_scaled<S: ExactScalar>(
    row: &SparseRow<S>,
    factor: &S,
    pivot: &SparseRow<S>,
) -> SparseRow<S> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        match (row.get(i), pivot.get(j)) {
            (Some((rc, rv)), Some((pc, pv))) => {
                if rc < pc {
                    out.push((*rc, rv.clone()));
                    i += 1;
                } else if pc < rc {
                    out.push((*pc, factor.mul(pv).neg()));
                    j += 1;
                } else {
                    let v = rv.sub(&factor.mul(pv));
                    if !v.is_zero() {
                        out.push((*rc, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some((rc, rv)), None) => {
                out.push((*rc, rv.clone()));
                i += 1;
            }
            (None, Some((pc, pv))) => {
                out.push((*pc, factor.mul(pv).neg()));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Echelonized rows, sorted by pivot column.
pub struct Echelon<S> {
    ncols: usize,
    one: S,
    rows: Vec<SparseRow<S>>,
}

impl<S: ExactScalar> Echelon<S> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    /// Echelon rows as sparse vectors (a basis of the row space).
    pub fn rows(&self) -> &[SparseRow<S>] {
        &self.rows
    }

    /// Dense nullspace basis via back-substitution.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let zero = self.one.sub(&self.one);
        let pivot_cols = self.pivot_columns();
        let is_pivot = {
            let mut mask = vec![false; self.ncols];
            for &c in &pivot_cols {
                mask[c as usize] = true;
            }
            mask
        };
        let mut basis = Vec::with_capacity(self.ncols - self.rows.len());
        for free in 0..self.ncols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![zero.clone(); self.ncols];
            v[free] = self.one.clone();
            // Rows are sorted by pivot column; work bottom-up so every
            // non-pivot coordinate of v is final when used.
            for row in self.rows.iter().rev() {
                let pcol = row[0].0 as usize;
                if pcol > free {
                    continue;
                }
                let mut acc = zero.clone();
                for (c, x) in &row[1..] {
                    let vc = &v[*c as usize];
                    if !vc.is_zero() {
                        acc = acc.add(&x.mul(vc));
                    }
                }
                v[pcol] = if acc.is_zero() {
                    zero.clone()
                } else {
                    acc.neg().mul(&row[0].1.inv().expect("pivot nonzero"))
                };
            }
            basis.push(v);
        }
        basis
    }
}

/// True when two sparse row families span the same subspace of k^ncols.
pub fn same_row_span<S: ExactScalar>(
    a: &[SparseRow<S>],
    b: &[SparseRow<S>],
    ncols: usize,
    one: S,
) -> bool {
    let rank_of = |families: &[&[SparseRow<S>]]| {
        let mut m = ExactMatrix::new(ncols, one.clone());
        for family in families {
            for row in *family {
                m.push_row(row.clone());
            }
        }
        m.rank()
    };
    let ra = rank_of(&[a]);
    let rb = rank_of(&[b]);
    ra == rb && rank_of(&[a, b]) == ra
}
