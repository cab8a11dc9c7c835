//! Dimension of the space of H_n-equivariant linear maps between two
//! monomial modules, by exact linear algebra over Q(zeta_n).
//!
//! A map T : source -> target is equivariant iff T rho_s(h) = rho_t(h) T
//! for the 2g + 1 standard generators (the central one included, which is
//! what rules out maps between modules with different central exponents).
//! Both actions are monomial, so each equation row has at most two terms.

use crate::bounds::MAX_BASIS;
use crate::exact::{Cyclotomic, ExactMatrix};
use crate::heisenberg::generators;
use crate::monomial::MonomialModule;
use crate::{Error, Result};

/// dim Hom_{H_n}(source, target).
pub fn intertwiner_dimension(source: &MonomialModule, target: &MonomialModule) -> Result<usize> {
    if source.nu() != target.nu() || source.g() != target.g() {
        return Err(Error::parameter(
            "intertwiner endpoints live over different lattices",
        ));
    }
    let n = source.n();
    let nu = source.nu();
    let g = source.g();
    let s_dim = source.dim();
    let t_dim = target.dim();
    let unknowns = s_dim
        .checked_mul(t_dim)
        .filter(|&u| u <= MAX_BASIS)
        .ok_or_else(|| {
            Error::capacity(format!(
                "intertwiner system has {s_dim} x {t_dim} unknowns, exceeding {MAX_BASIS}"
            ))
        })?;

    let lattice = source.lattice();
    // Unknown T[e, x] at column e * s_dim + x (e in target, x in source).
    let col = |e: usize, x: usize| (e * s_dim + x) as u32;
    let mut matrix = ExactMatrix::new(unknowns, Cyclotomic::one(n)?);
    for h in generators(nu, g)? {
        let a = lattice.index_of(h.a())?;
        let b = lattice.index_of(h.b())?;
        let lambda = h.lambda();
        // Source action per basis element, and target preimages.
        let src: Vec<(u32, usize)> = (0..s_dim)
            .map(|x| source.act_indexed(lambda, a, b, x))
            .collect();
        // For the target side we need, for each e, the element e' with
        // translate(a, e') = e, i.e. e' = translate(-a, e), and its phase.
        let neg_a = lattice.neg(a);
        for e in 0..t_dim {
            let pre = target.translate(neg_a, e);
            let (t_phase, back) = target.act_indexed(lambda, a, b, pre);
            debug_assert_eq!(back, e);
            for (x, &(s_phase, sx)) in src.iter().enumerate() {
                // (rho_t(h) T)[e, x] = zeta^t_phase * T[pre, x]
                // (T rho_s(h))[e, x] = zeta^s_phase * T[e, src_target]
                let lhs = (col(pre, x), Cyclotomic::root(n, t_phase)?);
                let rhs = (col(e, sx), Cyclotomic::root(n, s_phase)?.neg());
                matrix.push_row(vec![lhs, rhs]);
            }
        }
    }
    Ok(unknowns - matrix.rank())
}
