//! Riemann theta functions with real characteristics,
//!   theta[a;b](z, Omega) = sum_{m in Z^g} e(pi i (m+a)' Omega (m+a) + 2 pi i (m+a)'(z+b)),
//! evaluated by a truncated lattice sum.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DVector, Dyn};
use num_complex::Complex64;

use crate::bounds::MAX_THETA_TERMS;
use crate::theta::PeriodMatrix;
use crate::{Error, Result};

/// Default truncation tolerance; leaves three digits of headroom over the
/// 1e-9 contracts on the self-tests built on top of this evaluator.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Truncation radius: Gaussian tail bound exp(-pi lambda_min r^2) < tol,
/// padded by the characteristic offset and one unit.
pub fn truncation_radius(a: &[f64], min_im_eigenvalue: f64, tol: f64) -> f64 {
    let norm_a = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    ((-tol.ln()) / (PI * min_im_eigenvalue)).sqrt().ceil() + norm_a + 1.0
}

/// Neumaier-compensated accumulator; the term order is deterministic, so
/// results are bit-stable run to run.
#[derive(Default)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn validate_args(
    a: &[f64],
    b: &[f64],
    z: &[Complex64],
    period: &PeriodMatrix,
) -> Result<usize> {
    let g = period.g();
    if a.len() != g || b.len() != g || z.len() != g {
        return Err(Error::parameter(format!(
            "characteristic/argument length must match g = {g} (got a: {}, b: {}, z: {})",
            a.len(),
            b.len(),
            z.len()
        )));
    }
    for v in a.iter().chain(b.iter()) {
        if !v.is_finite() {
            return Err(Error::parameter("characteristics must be finite"));
        }
    }
    if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::parameter("argument z must be finite"));
    }
    Ok(g)
}

/// theta[a;b](z, Omega) truncated so the dropped Gaussian tail is below
/// `tol` relative to the largest retained term.
pub fn theta_char(
    a: &[f64],
    b: &[f64],
    z: &[Complex64],
    period: &PeriodMatrix,
    tol: f64,
) -> Result<Complex64> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::parameter(format!(
            "tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let radius = truncation_radius(a, period.min_im_eigenvalue(), tol);
    theta_char_with_radius(a, b, z, period, radius)
}

/// Evaluation at an explicit truncation radius. Exposed so truncation
/// soundness can be tested by doubling the radius.
pub fn theta_char_with_radius(
    a: &[f64],
    b: &[f64],
    z: &[Complex64],
    period: &PeriodMatrix,
    radius: f64,
) -> Result<Complex64> {
    let g = validate_args(a, b, z, period)?;
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::parameter("truncation radius must be positive"));
    }

    // The real part of the exponent is -pi (w' Y w + 2 w' Im z) for
    // w = m + a, maximized at w = -Y^{-1} Im z. Center the summation box
    // there; a box centered at the origin would drop the dominant terms
    // whenever Im z is not small.
    let im = period.im();
    let chol = Cholesky::<f64, Dyn>::new(im).expect("Im Omega positive definite by construction");
    let neg_im_z = DVector::from_iterator(g, z.iter().map(|c| -c.im));
    let peak = chol.solve(&neg_im_z);

    let mut lo = vec![0i64; g];
    let mut hi = vec![0i64; g];
    let mut terms: u128 = 1;
    for i in 0..g {
        let center = peak[i] - a[i];
        lo[i] = (center - radius).floor() as i64;
        hi[i] = (center + radius).ceil() as i64;
        terms = terms.saturating_mul((hi[i] - lo[i] + 1) as u128);
    }
    if terms > MAX_THETA_TERMS as u128 {
        return Err(Error::capacity(format!(
            "theta lattice sum needs {terms} terms (> {MAX_THETA_TERMS}); \
             Im(Omega) is too close to degenerate for this tolerance"
        )));
    }

    let mut re = Compensated::default();
    let mut im_acc = Compensated::default();
    let mut m = lo.clone();
    let mut w = vec![0.0f64; g];
    loop {
        for i in 0..g {
            w[i] = m[i] as f64 + a[i];
        }
        // exponent = pi i w' Omega w + 2 pi i w'(z + b)
        let mut quad = Complex64::new(0.0, 0.0);
        let mut lin = Complex64::new(0.0, 0.0);
        for i in 0..g {
            let mut row = Complex64::new(0.0, 0.0);
            for (j, &wj) in w.iter().enumerate() {
                row += period.entry(i, j) * wj;
            }
            quad += row * w[i];
            lin += (z[i] + b[i]) * w[i];
        }
        let exponent = Complex64::i() * PI * (quad + lin * 2.0);
        let term = exponent.exp();
        re.add(term.re);
        im_acc.add(term.im);

        // Odometer in lexicographic order over the box.
        let mut idx = g;
        loop {
            if idx == 0 {
                return Ok(Complex64::new(re.value(), im_acc.value()));
            }
            idx -= 1;
            if m[idx] < hi[idx] {
                m[idx] += 1;
                break;
            }
            m[idx] = lo[idx];
        }
    }
}

/// Relative deviation of theta[a;b](z + p + Omega q) from its predicted
/// multiple of theta[a;b](z), for integer shifts (p, q):
///   factor = e(2 pi i a'p - pi i q' Omega q - 2 pi i q'(z + b)).
/// A correct evaluator keeps this within a small multiple of `tol`.
pub fn quasi_periodicity_selftest(
    a: &[f64],
    b: &[f64],
    z: &[Complex64],
    p: &[i64],
    q: &[i64],
    period: &PeriodMatrix,
    tol: f64,
) -> Result<f64> {
    let g = validate_args(a, b, z, period)?;
    if p.len() != g || q.len() != g {
        return Err(Error::parameter(format!(
            "integer shifts must have length g = {g}, got {} and {}",
            p.len(),
            q.len()
        )));
    }
    let qf: Vec<f64> = q.iter().map(|&x| x as f64).collect();
    let oq = period.apply_real(&qf);
    let z_shift: Vec<Complex64> = (0..g)
        .map(|i| z[i] + p[i] as f64 + oq[i])
        .collect();

    let lhs = theta_char(a, b, &z_shift, period, tol)?;
    let base = theta_char(a, b, z, period, tol)?;
    let mut quad = Complex64::new(0.0, 0.0);
    let mut lin = Complex64::new(0.0, 0.0);
    let mut ap = 0.0;
    for i in 0..g {
        quad += oq[i] * qf[i];
        lin += (z[i] + b[i]) * qf[i];
        ap += a[i] * p[i] as f64;
    }
    let factor = (Complex64::i() * PI * (2.0 * ap - quad - lin * 2.0)).exp();
    let rhs = factor * base;
    let denom = lhs.norm().max(rhs.norm()).max(1e-300);
    Ok((lhs - rhs).norm() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn period_i(g: usize) -> PeriodMatrix {
        PeriodMatrix::new(DMatrix::from_fn(g, g, |i, j| {
            Complex64::new(0.0, if i == j { 1.0 } else { 0.0 })
        }))
        .unwrap()
    }

    fn zeros_c(g: usize) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); g]
    }

    #[test]
    fn classical_g1_value() {
        let p = period_i(1);
        let v = theta_char(&[0.0], &[0.0], &zeros_c(1), &p, DEFAULT_TOL).unwrap();
        // Independent 1-D oracle: sum e^{-pi m^2} directly.
        let oracle: f64 = (-60..=60).map(|m| (-PI * (m * m) as f64).exp()).sum();
        assert!((v.re - oracle).abs() < 1e-13, "re {} vs {}", v.re, oracle);
        assert!(v.im.abs() < 1e-13);
        assert!((v.re - 1.086_434_811_213_308).abs() < 1e-12);
    }

    #[test]
    fn odd_characteristic_vanishes_at_zero() {
        for g in 1..=3 {
            let p = period_i(g);
            let half = vec![0.5; g];
            let v = theta_char(&half, &half, &zeros_c(g), &p, DEFAULT_TOL).unwrap();
            assert!(v.norm() < 1e-12, "g={g}: {v}");
        }
    }

    #[test]
    fn quasi_periodicity_lattice_translates() {
        // theta(z + Omega m) = exp(-pi i m' Omega m - 2 pi i m' z) theta(z),
        // checked on 100 pseudo-random (z, m) pairs; m entries up to 2 so the
        // shifted peak genuinely leaves the origin-centered box.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for g in [1usize, 2] {
            let p = PeriodMatrix::random_generic(g, 23).unwrap();
            for _ in 0..50 {
                let u: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
                let v: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
                let ov = p.apply_real(&v);
                let z: Vec<Complex64> = (0..g).map(|i| ov[i] + u[i]).collect();
                let m: Vec<f64> = (0..g).map(|_| rng.gen_range(-2i64..=2) as f64).collect();
                let om = p.apply_real(&m);
                let z_shift: Vec<Complex64> = (0..g).map(|i| z[i] + om[i]).collect();

                let lhs = theta_char(&[0.0; 2][..g], &[0.0; 2][..g], &z_shift, &p, DEFAULT_TOL)
                    .unwrap();
                let base =
                    theta_char(&[0.0; 2][..g], &[0.0; 2][..g], &z, &p, DEFAULT_TOL).unwrap();
                let mut quad = Complex64::new(0.0, 0.0);
                let mut lin = Complex64::new(0.0, 0.0);
                for i in 0..g {
                    quad += om[i] * m[i];
                    lin += z[i] * m[i];
                }
                let factor = (Complex64::i() * PI * (-quad - lin * 2.0)).exp();
                let rhs = factor * base;
                let denom = lhs.norm().max(rhs.norm()).max(1e-300);
                assert!(
                    (lhs - rhs).norm() / denom < 10.0 * DEFAULT_TOL,
                    "g={g} rel err {}",
                    (lhs - rhs).norm() / denom
                );
            }
        }
    }

    #[test]
    fn selftest_covers_nonzero_characteristics() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for g in [1usize, 2, 3] {
            let p = PeriodMatrix::random_generic(g, 41).unwrap();
            for _ in 0..20 {
                let a: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
                let b: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
                let z: Vec<Complex64> = (0..g)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let ps: Vec<i64> = (0..g).map(|_| rng.gen_range(-2i64..=2)).collect();
                let qs: Vec<i64> = (0..g).map(|_| rng.gen_range(-2i64..=2)).collect();
                let dev =
                    quasi_periodicity_selftest(&a, &b, &z, &ps, &qs, &p, DEFAULT_TOL).unwrap();
                assert!(dev < 10.0 * DEFAULT_TOL, "g={g} dev={dev:e}");
            }
        }
        // Shift length mismatch is a parameter error.
        let p = period_i(2);
        assert!(quasi_periodicity_selftest(
            &[0.0, 0.0],
            &[0.0, 0.0],
            &zeros_c(2),
            &[1],
            &[0, 0],
            &p,
            DEFAULT_TOL
        )
        .is_err());
    }

    #[test]
    fn truncation_radius_doubling_is_converged() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for g in [1usize, 2] {
            let p = PeriodMatrix::random_generic(g, 31).unwrap();
            for _ in 0..50 {
                let a: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
                let b: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
                let z: Vec<Complex64> = (0..g)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let r = truncation_radius(&a, p.min_im_eigenvalue(), DEFAULT_TOL);
                let v1 = theta_char_with_radius(&a, &b, &z, &p, r).unwrap();
                let v2 = theta_char_with_radius(&a, &b, &z, &p, 2.0 * r).unwrap();
                let denom = v1.norm().max(v2.norm()).max(1e-300);
                assert!(
                    (v1 - v2).norm() / denom < 10.0 * DEFAULT_TOL,
                    "g={g} rel {}",
                    (v1 - v2).norm() / denom
                );
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = period_i(2);
        assert!(theta_char(&[0.0], &[0.0, 0.0], &zeros_c(2), &p, 1e-12).is_err());
        assert!(theta_char(&[0.0, 0.0], &[0.0, 0.0], &zeros_c(2), &p, 0.0).is_err());
        assert!(theta_char(&[0.0, 0.0], &[0.0, 0.0], &zeros_c(2), &p, 2.0).is_err());
        assert!(theta_char(&[f64::NAN, 0.0], &[0.0, 0.0], &zeros_c(2), &p, 1e-12).is_err());
    }

    #[test]
    fn near_degenerate_imaginary_part_hits_capacity() {
        // lambda_min ~ 1e-9 forces ~3e4 points per axis; in g = 2 that is
        // ~1e9 terms, far beyond the capacity bound.
        let eps = 1e-9;
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 1.0 - eps),
                Complex64::new(0.0, 1.0 - eps),
                Complex64::new(0.0, 1.0),
            ],
        );
        let p = PeriodMatrix::new(m).unwrap();
        assert!(p.min_im_eigenvalue() < 1e-8);
        let got = theta_char(&[0.0, 0.0], &[0.0, 0.0], &zeros_c(2), &p, 1e-12);
        assert!(matches!(got, Err(Error::Capacity(_))), "{got:?}");
    }

    #[test]
    fn evenness_in_z_for_zero_characteristic() {
        let p = PeriodMatrix::random_generic(2, 77).unwrap();
        let z = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4)];
        let neg_z = [-z[0], -z[1]];
        let v = theta_char(&[0.0, 0.0], &[0.0, 0.0], &z, &p, DEFAULT_TOL).unwrap();
        let w = theta_char(&[0.0, 0.0], &[0.0, 0.0], &neg_z, &p, DEFAULT_TOL).unwrap();
        assert!((v - w).norm() < 1e-11 * v.norm().max(1.0));
    }
}
