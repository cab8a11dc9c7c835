//! The level-nu embedding A -> P^{N-1}, N = nu^g: coordinates are the
//! theta functions f_x(z) = theta[x/nu; 0](nu z, nu Omega) for x in K,
//! indexed by the fixed lattice enumeration.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::{KPoint, Lattice};
use crate::theta::eval::{theta_char, DEFAULT_TOL};
use crate::theta::PeriodMatrix;
use crate::{par, Error, Result};

/// A coordinate vector is declared degenerate when every theta value is
/// below this before normalization; for nu >= 2 the linear system is
/// base-point free, so this only flags numerical breakdown.
const DEGENERATE_TOL: f64 = 1e-12;

const MAX_RESAMPLE: usize = 100;

/// One embedded point: the argument z and the unit-norm coordinate vector.
#[derive(Clone, Debug)]
pub struct EmbeddingPoint {
    z: Vec<Complex64>,
    coords: Vec<Complex64>,
    nu: u32,
}

impl EmbeddingPoint {
    pub fn z(&self) -> &[Complex64] {
        &self.z
    }

    /// Unit Euclidean norm, indexed by the lattice enumeration of K.
    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

fn validate_level(nu: u32) -> Result<()> {
    if nu == 2 || nu == 3 {
        Ok(())
    } else {
        Err(Error::parameter(format!(
            "embedding level must be 2 or 3, got {nu}"
        )))
    }
}

/// coords[x] = theta[x/nu; 0](nu z, nu Omega) for x in K, normalized to
/// unit norm.
pub fn embedding_coords(
    nu: u32,
    z: &[Complex64],
    period: &PeriodMatrix,
    tol: f64,
) -> Result<EmbeddingPoint> {
    validate_level(nu)?;
    let g = period.g();
    if z.len() != g {
        return Err(Error::parameter(format!(
            "argument has length {}, period matrix has g = {g}",
            z.len()
        )));
    }
    let lattice = Lattice::new(nu, g as u32)?;
    let scaled = period.scaled(nu as f64)?;
    let zs: Vec<Complex64> = z.iter().map(|c| c * nu as f64).collect();
    let b = vec![0.0; g];
    let mut coords = Vec::with_capacity(lattice.size());
    for x in 0..lattice.size() as u32 {
        let a: Vec<f64> = lattice
            .point(x)
            .coords()
            .iter()
            .map(|&c| c as f64 / nu as f64)
            .collect();
        coords.push(theta_char(&a, &b, &zs, &scaled, tol)?);
    }
    let max_mod = coords.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max_mod < DEGENERATE_TOL {
        return Err(Error::structural(
            "degenerate point: all theta coordinates vanish numerically",
        ));
    }
    let norm = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut coords {
        *c /= norm;
    }
    Ok(EmbeddingPoint {
        z: z.to_vec(),
        coords,
        nu,
    })
}

/// Embeds many points, in parallel when the `parallel` feature is on;
/// output order always matches input order.
pub fn embedding_batch(
    nu: u32,
    points: &[Vec<Complex64>],
    period: &PeriodMatrix,
    tol: f64,
) -> Result<Vec<EmbeddingPoint>> {
    validate_level(nu)?;
    par::map_indexed(points.len(), |i| embedding_coords(nu, &points[i], period, tol))
        .into_iter()
        .collect()
}

/// Sequential twin of [`embedding_batch`], for benchmarking.
pub fn embedding_batch_seq(
    nu: u32,
    points: &[Vec<Complex64>],
    period: &PeriodMatrix,
    tol: f64,
) -> Result<Vec<EmbeddingPoint>> {
    validate_level(nu)?;
    par::map_indexed_seq(points.len(), |i| embedding_coords(nu, &points[i], period, tol))
        .into_iter()
        .collect()
}

fn draw_point(rng: &mut ChaCha8Rng, period: &PeriodMatrix) -> Vec<Complex64> {
    let g = period.g();
    let u: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
    let v: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
    let ov = period.apply_real(&v);
    (0..g).map(|i| ov[i] + u[i]).collect()
}

/// `count` points z = u + Omega v with u, v uniform in [0,1)^g, drawn from
/// a seeded generator; the same seed reproduces the same sequence.
pub fn sample_points(count: usize, period: &PeriodMatrix, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| draw_point(&mut rng, period)).collect()
}

/// Samples and embeds `count` points, redrawing any degenerate hit
/// (probability-zero event; bounded retries keep termination certain).
pub fn sample_embedded(
    nu: u32,
    count: usize,
    period: &PeriodMatrix,
    seed: u64,
    tol: f64,
) -> Result<Vec<EmbeddingPoint>> {
    validate_level(nu)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut attempts = 0;
        loop {
            let z = draw_point(&mut rng, period);
            match embedding_coords(nu, &z, period, tol) {
                Ok(p) => {
                    out.push(p);
                    break;
                }
                Err(Error::Structural(_)) if attempts < MAX_RESAMPLE => attempts += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// Checks the translation law of the coordinate system: for a, b in K,
///   f_x(z + a/nu + Omega b/nu) = C * e^{2 pi i <x,a>/nu} * f_{x+b}(z)
/// with one factor C common to all x. Both sides are normalized by their
/// entry at the index where the left side is largest (using each side's
/// own argmax is unstable under modulus ties), and the maximum entrywise
/// deviation is returned; 0 for a = b = 0 by construction.
pub fn equivariance_selftest(
    nu: u32,
    period: &PeriodMatrix,
    z: &[Complex64],
    a: &KPoint,
    b: &KPoint,
    tol: f64,
) -> Result<f64> {
    validate_level(nu)?;
    let g = period.g();
    if a.level() != nu || b.level() != nu || a.rank() as usize != g || b.rank() as usize != g {
        return Err(Error::parameter(
            "translation characteristics must live in (Z/nu)^g",
        ));
    }
    let lattice = Lattice::new(nu, g as u32)?;
    let b_frac: Vec<f64> = b.coords().iter().map(|&c| c as f64 / nu as f64).collect();
    let omega_b = period.apply_real(&b_frac);
    let shifted: Vec<Complex64> = (0..g)
        .map(|i| z[i] + a.coords()[i] as f64 / nu as f64 + omega_b[i])
        .collect();

    let lhs = embedding_coords(nu, &shifted, period, tol)?;
    let base = embedding_coords(nu, z, period, tol)?;

    let b_idx = lattice.index_of(b)?;
    let n = lattice.size();
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    for x in 0..n as u32 {
        let pairing = lattice.point(x).pairing(a)?;
        let phase = (Complex64::i() * (2.0 * PI * pairing as f64 / nu as f64)).exp();
        rhs[x as usize] = phase * base.coords()[lattice.add(x, b_idx) as usize];
    }

    let pivot = (0..n)
        .max_by(|&i, &j| {
            lhs.coords()[i]
                .norm()
                .partial_cmp(&lhs.coords()[j].norm())
                .unwrap()
        })
        .expect("nonempty");
    if rhs[pivot].norm() < DEGENERATE_TOL {
        return Err(Error::structural(
            "equivariance self-test pivot entry vanishes on one side",
        ));
    }
    let lp = lhs.coords()[pivot];
    let rp = rhs[pivot];
    let mut worst = 0.0f64;
    for (&l, &r) in lhs.coords().iter().zip(&rhs) {
        worst = worst.max((l / lp - r / rp).norm());
    }
    Ok(worst)
}

/// A half-integer theta constant: value of theta[a;b](0, Omega) with
/// 2a, 2b in {0,1}^g recorded as bit vectors.
#[derive(Clone, Debug)]
pub struct ThetaConstant {
    pub a2: Vec<u8>,
    pub b2: Vec<u8>,
    pub value: Complex64,
}

/// All even half-integer characteristics (sum a_i b_i even), evaluated at
/// z = 0; odd ones vanish identically there and are excluded. The count
/// is 2^{g-1} (2^g + 1).
pub fn even_theta_constants(period: &PeriodMatrix, tol: f64) -> Result<Vec<ThetaConstant>> {
    let g = period.g();
    if g > 4 {
        return Err(Error::parameter(
            "even theta constants are enumerated only for g <= 4",
        ));
    }
    let mut chars = Vec::new();
    for am in 0u32..1 << g {
        for bm in 0u32..1 << g {
            let parity = (am & bm).count_ones() % 2;
            if parity == 0 {
                chars.push((am, bm));
            }
        }
    }
    debug_assert_eq!(chars.len(), (1 << (g - 1)) * ((1 << g) + 1));
    let z = vec![Complex64::new(0.0, 0.0); g];
    let values = par::map_indexed(chars.len(), |k| {
        let (am, bm) = chars[k];
        let a: Vec<f64> = (0..g).map(|i| 0.5 * (am >> i & 1) as f64).collect();
        let b: Vec<f64> = (0..g).map(|i| 0.5 * (bm >> i & 1) as f64).collect();
        theta_char(&a, &b, &z, period, tol)
    });
    let mut out = Vec::with_capacity(chars.len());
    for (k, v) in values.into_iter().enumerate() {
        let (am, bm) = chars[k];
        out.push(ThetaConstant {
            a2: (0..g).map(|i| (am >> i & 1) as u8).collect(),
            b2: (0..g).map(|i| (bm >> i & 1) as u8).collect(),
            value: v?,
        });
    }
    Ok(out)
}

/// Smallest modulus among the even theta constants; a generic (A, L) has
/// no vanishing theta constant, so values well above zero certify the
/// genericity preconditions downstream.
pub fn min_even_theta_modulus(period: &PeriodMatrix, tol: f64) -> Result<f64> {
    Ok(even_theta_constants(period, tol)?
        .iter()
        .map(|c| c.value.norm())
        .fold(f64::INFINITY, f64::min))
}

/// Convenience wrapper with the default tolerance.
pub fn embed_default(nu: u32, z: &[Complex64], period: &PeriodMatrix) -> Result<EmbeddingPoint> {
    embedding_coords(nu, z, period, DEFAULT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_count_matches_level() {
        let p = PeriodMatrix::random_generic(2, 3).unwrap();
        let z = vec![Complex64::new(0.1, 0.2), Complex64::new(-0.3, 0.05)];
        for (nu, n) in [(2u32, 4usize), (3, 9)] {
            let e = embedding_coords(nu, &z, &p, DEFAULT_TOL).unwrap();
            assert_eq!(e.dim(), n);
            let norm: f64 = e.coords().iter().map(|c| c.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        assert!(embedding_coords(4, &z, &p, DEFAULT_TOL).is_err());
    }

    #[test]
    fn kummer_evenness_level_two() {
        // Level-2 thetas are even, so the g=1 embedding identifies z and -z.
        let p = PeriodMatrix::random_generic(1, 9).unwrap();
        for z0 in [Complex64::new(0.37, 0.21), Complex64::new(-0.11, 0.64)] {
            let plus = embedding_coords(2, &[z0], &p, DEFAULT_TOL).unwrap();
            let minus = embedding_coords(2, &[-z0], &p, DEFAULT_TOL).unwrap();
            for (u, v) in plus.coords().iter().zip(minus.coords()) {
                assert!((u - v).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn equivariance_identity_is_exact() {
        let p = PeriodMatrix::random_generic(2, 4).unwrap();
        let z = vec![Complex64::new(0.2, 0.3), Complex64::new(0.1, -0.2)];
        let zero = KPoint::zero(3, 2);
        let dev = equivariance_selftest(3, &p, &z, &zero, &zero, DEFAULT_TOL).unwrap();
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn equivariance_all_generators_all_levels() {
        for (nu, g) in [(3u32, 1u32), (3, 2), (2, 2), (2, 3)] {
            let p = PeriodMatrix::random_generic(g as usize, 100 + nu as u64 + 10 * g as u64)
                .unwrap();
            let pts = sample_points(10, &p, 555);
            for z in &pts {
                for i in 0..g {
                    let e = KPoint::unit(nu, g, i);
                    let zero = KPoint::zero(nu, g);
                    let da = equivariance_selftest(nu, &p, z, &e, &zero, DEFAULT_TOL).unwrap();
                    let db = equivariance_selftest(nu, &p, z, &zero, &e, DEFAULT_TOL).unwrap();
                    assert!(da < 1e-9, "nu={nu} g={g} a=e_{i}: {da}");
                    assert!(db < 1e-9, "nu={nu} g={g} b=e_{i}: {db}");
                }
            }
        }
    }

    #[test]
    fn equivariance_with_combined_shift() {
        let p = PeriodMatrix::random_generic(2, 21).unwrap();
        let z = vec![Complex64::new(0.05, 0.4), Complex64::new(0.3, 0.15)];
        let a = KPoint::new(3, &[1, 2]).unwrap();
        let b = KPoint::new(3, &[2, 1]).unwrap();
        let dev = equivariance_selftest(3, &p, &z, &a, &b, DEFAULT_TOL).unwrap();
        assert!(dev < 1e-9, "{dev}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = PeriodMatrix::random_generic(2, 6).unwrap();
        let a = sample_points(5, &p, 99);
        let b = sample_points(5, &p, 99);
        assert_eq!(a.len(), 5);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y);
        }
        let c = sample_points(5, &p, 100);
        assert_ne!(a[0], c[0]);
    }

    #[test]
    fn sample_embedded_returns_normalized_points() {
        let p = PeriodMatrix::random_generic(2, 8).unwrap();
        let pts = sample_embedded(2, 30, &p, 17, DEFAULT_TOL).unwrap();
        assert_eq!(pts.len(), 30);
        for e in &pts {
            let norm: f64 = e.coords().iter().map(|c| c.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        let again = sample_embedded(2, 30, &p, 17, DEFAULT_TOL).unwrap();
        for (x, y) in pts.iter().zip(&again) {
            assert_eq!(x.coords(), y.coords());
        }
    }

    #[test]
    fn batch_matches_sequential() {
        let p = PeriodMatrix::random_generic(2, 14).unwrap();
        let pts = sample_points(6, &p, 3);
        let par_out = embedding_batch(3, &pts, &p, DEFAULT_TOL).unwrap();
        let seq_out = embedding_batch_seq(3, &pts, &p, DEFAULT_TOL).unwrap();
        for (x, y) in par_out.iter().zip(&seq_out) {
            assert_eq!(x.coords(), y.coords());
        }
    }

    #[test]
    fn even_theta_constant_counts_and_genericity() {
        for (g, count) in [(1usize, 3usize), (2, 10), (3, 36)] {
            let p = PeriodMatrix::random_generic(g, 60 + g as u64).unwrap();
            let cs = even_theta_constants(&p, DEFAULT_TOL).unwrap();
            assert_eq!(cs.len(), count);
            for c in &cs {
                let parity: u32 = c.a2.iter().zip(&c.b2).map(|(x, y)| (x * y) as u32).sum();
                assert_eq!(parity % 2, 0);
                assert!(c.value.norm() > 1e-6, "char {:?};{:?}", c.a2, c.b2);
            }
        }
        let p = PeriodMatrix::random_generic(2, 61).unwrap();
        assert!(min_even_theta_modulus(&p, DEFAULT_TOL).unwrap() > 1e-6);
    }
}
