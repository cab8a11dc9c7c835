//! Monomial H_n-modules: symmetric powers S^d V, the twists V tensor S^d V,
//! and the (dual) standard module, all with permutation-times-phase action.
//!
//! Basis elements are indexed by `usize`; the action of (lambda, a, b)
//! sends element e to a single element translate(a, e) with the phase
//! zeta_n^(c*lambda + (n/nu)<b, weight(e)>), where c is the module's
//! central exponent. Orbit bookkeeping under the translation subgroup K is
//! what makes invariants and isotypic multiplicities cheap.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::One;

use crate::bounds::MAX_BASIS;
use crate::exact::Rational;
use crate::heisenberg::HeisenbergElement;
use crate::lattice::{Character, Lattice};
use crate::monomial::form::{Monomial, SparseForm};
use crate::{canonical_level, Error, Result};

/// C(n, k) without overflow; errors on overflow past u128.
fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or_else(|| Error::capacity("binomial overflow".to_string()))?;
        acc /= (i + 1) as u128;
    }
    Ok(acc)
}

/// Shared basis of S^d V: all sorted multisets of size d over the N
/// variable indices, in lexicographic order.
#[derive(Debug)]
pub(crate) struct SymBasis {
    pub elems: Vec<Vec<u32>>,
    pub index: HashMap<Vec<u32>, u32>,
    /// Lattice index of the weight (variable sum) of each element.
    pub weights: Vec<u32>,
}

impl SymBasis {
    fn build(lattice: &Lattice, degree: u32) -> Result<Arc<Self>> {
        let n_vars = lattice.size() as u64;
        let count = binomial(n_vars + degree as u64 - 1, degree as u64)?;
        if count > MAX_BASIS as u128 {
            return Err(Error::capacity(format!(
                "S^{degree} basis has {count} monomials, exceeding {MAX_BASIS}"
            )));
        }
        let mut elems: Vec<Vec<u32>> = Vec::with_capacity(count as usize);
        let mut cur = vec![0u32; degree as usize];
        let top = (n_vars - 1) as u32;
        loop {
            elems.push(cur.clone());
            // Next multiset in lex order: bump the last coordinate that has
            // room, then level everything after it.
            let Some(pos) = cur.iter().rposition(|&v| v < top) else {
                break;
            };
            let v = cur[pos] + 1;
            for slot in cur.iter_mut().skip(pos) {
                *slot = v;
            }
        }
        debug_assert_eq!(elems.len() as u128, count);
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        let weights = elems
            .iter()
            .map(|e| e.iter().fold(0u32, |w, &v| lattice.add(w, v)))
            .collect();
        Ok(Arc::new(SymBasis {
            elems,
            index,
            weights,
        }))
    }

    fn translate(&self, lattice: &Lattice, a: u32, m: u32) -> u32 {
        let mut moved: Vec<u32> = self.elems[m as usize]
            .iter()
            .map(|&v| lattice.add(a, v))
            .collect();
        moved.sort_unstable();
        self.index[&moved]
    }
}

/// Which monomial module this is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    /// S^d V.
    SymPower,
    /// V tensor S^d V, basis indexed by pairs (y, M).
    TensorStandard,
    /// V itself.
    Standard,
    /// V^*, with the inverse-transpose action.
    DualStandard,
}

#[derive(Clone, Debug)]
pub struct MonomialModule {
    lattice: Lattice,
    n: u32,
    kind: ModuleKind,
    degree: u32,
    central_exponent: u32,
    sym: Option<Arc<SymBasis>>,
}

impl MonomialModule {
    /// S^d V for H_n over (Z/nu)^g, with n the canonical level of nu.
    pub fn symmetric_power(nu: u32, g: u32, degree: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::parameter("symmetric power degree must be >= 1"));
        }
        let lattice = Lattice::new(nu, g)?;
        let n = canonical_level(nu);
        let sym = SymBasis::build(&lattice, degree)?;
        Ok(MonomialModule {
            lattice,
            n,
            kind: ModuleKind::SymPower,
            degree,
            central_exponent: degree % n,
            sym: Some(sym),
        })
    }

    /// V tensor S^d V, where self is S^d V.
    pub fn tensor_with_standard(&self) -> Result<Self> {
        if self.kind != ModuleKind::SymPower {
            return Err(Error::parameter(
                "tensor_with_standard expects a symmetric power",
            ));
        }
        let dim = self.lattice.size() as u128 * self.sym.as_ref().unwrap().elems.len() as u128;
        if dim > MAX_BASIS as u128 {
            return Err(Error::capacity(format!(
                "tensor basis has {dim} elements, exceeding {MAX_BASIS}"
            )));
        }
        Ok(MonomialModule {
            lattice: self.lattice.clone(),
            n: self.n,
            kind: ModuleKind::TensorStandard,
            degree: self.degree,
            central_exponent: (self.degree + 1) % self.n,
            sym: self.sym.clone(),
        })
    }

    /// The standard module V with the Schroedinger action.
    pub fn standard(nu: u32, g: u32) -> Result<Self> {
        let lattice = Lattice::new(nu, g)?;
        let n = canonical_level(nu);
        Ok(MonomialModule {
            lattice,
            n,
            kind: ModuleKind::Standard,
            degree: 1,
            central_exponent: 1,
            sym: None,
        })
    }

    /// The dual V^*; the center acts by zeta_n^(-1).
    pub fn dual_standard(nu: u32, g: u32) -> Result<Self> {
        let lattice = Lattice::new(nu, g)?;
        let n = canonical_level(nu);
        Ok(MonomialModule {
            lattice,
            n,
            kind: ModuleKind::DualStandard,
            degree: 1,
            central_exponent: n - 1,
            sym: None,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nu(&self) -> u32 {
        self.lattice.nu()
    }

    pub fn g(&self) -> u32 {
        self.lattice.g()
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn central_exponent(&self) -> u32 {
        self.central_exponent
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            ModuleKind::SymPower => self.sym.as_ref().unwrap().elems.len(),
            ModuleKind::TensorStandard => {
                self.lattice.size() * self.sym.as_ref().unwrap().elems.len()
            }
            ModuleKind::Standard | ModuleKind::DualStandard => self.lattice.size(),
        }
    }

    fn sym(&self) -> &SymBasis {
        self.sym.as_ref().expect("kind carries a symmetric basis")
    }

    /// Weight (lattice index) of basis element e: the point of K by which
    /// the diagonal characters (0, 0, b) scale it.
    pub fn weight(&self, e: usize) -> u32 {
        match self.kind {
            ModuleKind::SymPower => self.sym().weights[e],
            ModuleKind::TensorStandard => {
                let s = self.sym().elems.len();
                let (y, m) = ((e / s) as u32, e % s);
                self.lattice.add(y, self.sym().weights[m])
            }
            ModuleKind::Standard => e as u32,
            ModuleKind::DualStandard => self.lattice.neg(e as u32),
        }
    }

    /// Basis element translated by a (a lattice index).
    pub fn translate(&self, a: u32, e: usize) -> usize {
        match self.kind {
            ModuleKind::SymPower => self.sym().translate(&self.lattice, a, e as u32) as usize,
            ModuleKind::TensorStandard => {
                let s = self.sym().elems.len();
                let (y, m) = ((e / s) as u32, (e % s) as u32);
                let y2 = self.lattice.add(a, y) as usize;
                let m2 = self.sym().translate(&self.lattice, a, m) as usize;
                y2 * s + m2
            }
            ModuleKind::Standard | ModuleKind::DualStandard => {
                self.lattice.add(a, e as u32) as usize
            }
        }
    }

    /// Action of (lambda, a, b) given as lattice indices; returns the phase
    /// exponent mod n and the image element.
    pub fn act_indexed(&self, lambda: u32, a: u32, b: u32, e: usize) -> (u32, usize) {
        let phase = (self.central_exponent * lambda
            + (self.n / self.nu()) * self.lattice.pairing(b, self.weight(e)))
            % self.n;
        (phase, self.translate(a, e))
    }

    /// Action of a group element on basis element e.
    pub fn act(&self, h: &HeisenbergElement, e: usize) -> Result<(u32, usize)> {
        if h.nu() != self.nu() || h.g() != self.g() {
            return Err(Error::parameter(
                "group element and module live over different lattices",
            ));
        }
        if e >= self.dim() {
            return Err(Error::parameter(format!(
                "basis index {e} out of range for module of dimension {}",
                self.dim()
            )));
        }
        let a = self.lattice.index_of(h.a())?;
        let b = self.lattice.index_of(h.b())?;
        Ok(self.act_indexed(h.lambda(), a, b, e))
    }

    /// The monomial attached to a symmetric-power basis element.
    pub fn monomial(&self, e: usize) -> Result<Monomial> {
        if self.kind != ModuleKind::SymPower {
            return Err(Error::parameter("only symmetric powers carry monomials"));
        }
        Ok(Monomial::from_multiset(self.sym().elems[e].clone()))
    }

    /// Index of a monomial in the symmetric-power basis.
    pub fn monomial_index(&self, m: &Monomial) -> Result<usize> {
        if self.kind != ModuleKind::SymPower {
            return Err(Error::parameter("only symmetric powers carry monomials"));
        }
        if m.degree() != self.degree {
            return Err(Error::parameter("monomial degree mismatch"));
        }
        self.sym()
            .index
            .get(m.multiset())
            .map(|&i| i as usize)
            .ok_or_else(|| Error::parameter("monomial not in basis"))
    }

    /// Tensor basis element (y, M) -> index.
    pub fn tensor_index(&self, y: u32, m: usize) -> Result<usize> {
        if self.kind != ModuleKind::TensorStandard {
            return Err(Error::parameter("not a tensor module"));
        }
        let s = self.sym().elems.len();
        Ok(y as usize * s + m)
    }

    /// Tensor basis element index -> (y, M).
    pub fn tensor_parts(&self, e: usize) -> Result<(u32, usize)> {
        if self.kind != ModuleKind::TensorStandard {
            return Err(Error::parameter("not a tensor module"));
        }
        let s = self.sym().elems.len();
        Ok(((e / s) as u32, e % s))
    }
}

/// An orbit of the translation subgroup K on the basis, with its (pointwise)
/// stabilizer. The representative is the smallest element index. The stored
/// weight is the representative's; it is constant along the orbit exactly
/// when the central exponent vanishes mod nu, which holds in every module
/// where orbits are used for invariants or isotypic data.
#[derive(Clone, Debug)]
pub struct TranslationOrbit {
    pub rep: usize,
    pub elems: Vec<usize>,
    pub stabilizer: Vec<u32>,
    pub weight: u32,
}

/// All K-orbits on the basis, ascending in the representative.
pub fn translation_orbits(module: &MonomialModule) -> Vec<TranslationOrbit> {
    let dim = module.dim();
    let k = module.lattice().size() as u32;
    let mut seen = vec![false; dim];
    let mut orbits = Vec::new();
    for e in 0..dim {
        if seen[e] {
            continue;
        }
        let mut elems = Vec::new();
        let mut stabilizer = Vec::new();
        for a in 0..k {
            let t = module.translate(a, e);
            if t == e {
                stabilizer.push(a);
            }
            if !seen[t] {
                seen[t] = true;
                elems.push(t);
            }
        }
        elems.sort_unstable();
        orbits.push(TranslationOrbit {
            rep: e,
            elems,
            stabilizer,
            weight: module.weight(e),
        });
    }
    debug_assert_eq!(orbits.iter().map(|o| o.elems.len()).sum::<usize>(), dim);
    orbits
}

/// Orbits whose sums span the H_n-invariant subspace: weight 0, and only
/// when the center acts trivially (otherwise there are no invariants and
/// the list is empty).
pub fn invariant_orbits(module: &MonomialModule) -> Vec<TranslationOrbit> {
    if !module.central_exponent().is_multiple_of(module.n()) {
        return Vec::new();
    }
    translation_orbits(module)
        .into_iter()
        .filter(|o| o.weight == 0)
        .collect()
}

pub fn invariant_dimension(module: &MonomialModule) -> usize {
    invariant_orbits(module).len()
}

/// Basis of (S^d V)^{H_n} as monomial orbit sums with coefficient 1,
/// ordered by orbit representative. Empty when the center acts
/// non-trivially (d not divisible by n).
pub fn invariant_basis(module: &MonomialModule) -> Result<Vec<SparseForm<Rational>>> {
    if module.kind() != ModuleKind::SymPower {
        return Err(Error::parameter(
            "invariant_basis expects a symmetric power; other modules have no form model",
        ));
    }
    let mut out = Vec::new();
    for orbit in invariant_orbits(module) {
        let mut f = SparseForm::zero(module.nu(), module.g(), module.degree())?;
        for &e in &orbit.elems {
            f.add_term(module.monomial(e)?, Rational::one())?;
        }
        out.push(f);
    }
    Ok(out)
}

/// Multiplicities of the characters of A_nu = K x K on a module where the
/// center acts trivially.
#[derive(Clone, Debug)]
pub struct IsotypicTable {
    nu: u32,
    g: u32,
    total_dim: usize,
    entries: HashMap<(u32, u32), usize>,
}

impl IsotypicTable {
    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Multiplicity of the character (alpha, beta), as lattice indices.
    pub fn multiplicity_indexed(&self, alpha: u32, beta: u32) -> usize {
        self.entries.get(&(alpha, beta)).copied().unwrap_or(0)
    }

    pub fn multiplicity(&self, chi: &Character) -> Result<usize> {
        let lattice = Lattice::new(self.nu, self.g)?;
        Ok(self.multiplicity_indexed(
            lattice.index_of(&chi.alpha)?,
            lattice.index_of(&chi.beta)?,
        ))
    }

    pub fn trivial_multiplicity(&self) -> usize {
        self.multiplicity_indexed(0, 0)
    }

    /// Full table in lexicographic (alpha, beta) order, zeros included.
    pub fn dense(&self) -> Vec<((u32, u32), usize)> {
        let size = Lattice::new(self.nu, self.g)
            .map(|l| l.size() as u32)
            .unwrap_or(0);
        let mut out = Vec::with_capacity((size * size) as usize);
        for alpha in 0..size {
            for beta in 0..size {
                out.push(((alpha, beta), self.multiplicity_indexed(alpha, beta)));
            }
        }
        out
    }

    /// Sum of all multiplicities; equals the module dimension.
    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    /// The set of distinct multiplicities over non-trivial characters.
    pub fn nontrivial_multiplicities(&self) -> Vec<usize> {
        let mut vals: Vec<usize> = self
            .dense()
            .into_iter()
            .filter(|&((a, b), _)| (a, b) != (0, 0))
            .map(|(_, m)| m)
            .collect();
        vals.sort_unstable();
        vals.dedup();
        vals
    }
}

/// Decomposes a module with trivial central action under A_nu = K x K.
///
/// Each orbit O contributes its weight as the beta-part and one copy of
/// every alpha-character of K trivial on the stabilizer of O.
pub fn isotypic_table(module: &MonomialModule) -> Result<IsotypicTable> {
    if !module.central_exponent().is_multiple_of(module.n()) {
        return Err(Error::parameter(format!(
            "isotypic decomposition under K x K needs a trivial central action; \
             central exponent is {} mod {}",
            module.central_exponent(),
            module.n()
        )));
    }
    let lattice = module.lattice();
    let k = lattice.size() as u32;
    let nu = module.nu();
    let mut entries: HashMap<(u32, u32), usize> = HashMap::new();
    for orbit in translation_orbits(module) {
        let beta = orbit.weight;
        for alpha in 0..k {
            let annihilates = orbit
                .stabilizer
                .iter()
                .all(|&s| lattice.pairing(alpha, s).is_multiple_of(nu));
            if annihilates {
                *entries.entry((alpha, beta)).or_insert(0) += 1;
            }
        }
    }
    Ok(IsotypicTable {
        nu: module.nu(),
        g: module.g(),
        total_dim: module.dim(),
        entries,
    })
}
