//! Riemann theta functions with rational characteristics as certified
//! truncated lattice sums.
//!
//! For `x = n + a` the summand is `exp(pi i x^T tau x + 2 pi i x^T (z + b))`.
//! Its modulus is at most `exp(-pi lambda |x|^2 + 2 pi |Im z| |x|)` where
//! `lambda` is the smallest eigenvalue of `Im tau`. The sum is taken over the
//! box `max_i |n_i| <= R`; everything outside is bounded shell by shell
//! (shell `k` = `max_i |n_i| = k`, with exactly `(2k+1)^g - (2k-1)^g` points,
//! each with `|x| >= k - max_i a_i`).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::certified::CertifiedComplex;
use crate::characteristic::Characteristic;
use crate::error::{Error, Result};
use crate::siegel::SiegelPoint;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Truncation target for a lattice sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSpec {
    /// Absolute tolerance on the truncation error.
    pub target_abs_tol: f64,
    /// Largest box radius that will be summed.
    pub max_radius: usize,
    /// Fail with `ToleranceUnreachable` instead of returning a looser bound.
    pub strict: bool,
}

impl Default for TruncationSpec {
    fn default() -> Self {
        Self { target_abs_tol: 1e-15, max_radius: 200, strict: false }
    }
}

impl TruncationSpec {
    pub fn with_tol(target_abs_tol: f64) -> Self {
        Self { target_abs_tol, ..Self::default() }
    }

    pub fn strict(mut self) -> Self {
        self.strict = true;
        self
    }
}

/// Bound `|w(x)| <= coef * |x|^degree` on the polynomial prefactor of a
/// term-differentiated series.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialWeight {
    pub coef: f64,
    pub degree: u32,
}

impl RadialWeight {
    pub const ONE: RadialWeight = RadialWeight { coef: 1.0, degree: 0 };
}

/// Rigorous bound on the sum of term moduli outside the box of radius `radius`.
///
/// `a_max` is the largest characteristic shift (in `[0,1)`), `lambda` the
/// smallest eigenvalue of `Im tau`, `y_norm` the Euclidean norm of `Im z`.
pub(crate) fn shell_tail_bound(g: usize, radius: usize, a_max: f64, lambda: f64, y_norm: f64, w: RadialWeight) -> f64 {
    let term = |k: usize| -> f64 {
        let kf = k as f64;
        let count = (2.0 * kf + 1.0).powi(g as i32) - (2.0 * kf - 1.0).powi(g as i32);
        let r = kf - a_max;
        let log_f = -PI * lambda * r * r + 2.0 * PI * y_norm * r + (w.degree as f64) * r.ln();
        count * w.coef * log_f.exp()
    };
    // shell-to-shell ratios decrease in k, so the first ratio below one
    // closes the remaining sum geometrically
    let mut total = 0.0;
    let mut k = radius + 1;
    let mut t_k = term(k);
    for _ in 0..100_000 {
        let t_next = term(k + 1);
        if t_k == 0.0 {
            return total;
        }
        let q = t_next / t_k;
        if q < 1.0 {
            return total + t_k / (1.0 - q);
        }
        total += t_k;
        k += 1;
        t_k = t_next;
    }
    f64::INFINITY
}

/// Prepared lattice sum for one `(char, z, tau)` triple.
pub(crate) struct LatticeSum<'a> {
    g: usize,
    a: Vec<f64>,
    shift: Vec<Complex64>,
    tau: &'a SiegelPoint,
    y_norm: f64,
}

impl<'a> LatticeSum<'a> {
    pub fn new(chr: &Characteristic, z: &[Complex64], tau: &'a SiegelPoint) -> Result<Self> {
        let g = tau.genus();
        if chr.genus() != g {
            return Err(Error::DimensionMismatch { expected: g, got: chr.genus() });
        }
        if z.len() != g {
            return Err(Error::DimensionMismatch { expected: g, got: z.len() });
        }
        let b = chr.b_f64();
        let shift: Vec<Complex64> = z.iter().zip(&b).map(|(zi, bi)| zi + bi).collect();
        let y_norm = z.iter().map(|zi| zi.im * zi.im).sum::<f64>().sqrt();
        Ok(Self { g, a: chr.a_f64(), shift, tau, y_norm })
    }

    fn a_max(&self) -> f64 {
        self.a.iter().cloned().fold(0.0, f64::max)
    }

    /// Smallest radius meeting the target, with its tail bound.
    pub fn radius(&self, spec: &TruncationSpec, w: RadialWeight) -> Result<(usize, f64)> {
        let lambda = self.tau.lambda_min() * (1.0 - 1e-12);
        let a_max = self.a_max();
        let mut last = f64::INFINITY;
        for r in 0..=spec.max_radius {
            last = shell_tail_bound(self.g, r, a_max, lambda, self.y_norm, w);
            if last <= spec.target_abs_tol {
                return Ok((r, last));
            }
        }
        if spec.strict {
            return Err(Error::ToleranceUnreachable { max_radius: spec.max_radius, tail: last, target: spec.target_abs_tol });
        }
        Ok((spec.max_radius, last))
    }

    /// Visit every lattice point of the box with its shifted vector `x = n + a`
    /// and the plain summand.
    pub fn for_each<F: FnMut(&[f64], Complex64)>(&self, radius: usize, mut f: F) {
        let g = self.g;
        let r = radius as i64;
        let tau = self.tau.matrix();
        let mut n = vec![-r; g];
        let mut x = vec![0.0; g];
        loop {
            for i in 0..g {
                x[i] = n[i] as f64 + self.a[i];
            }
            let mut quad = Complex64::new(0.0, 0.0);
            for i in 0..g {
                quad += tau[(i, i)] * (x[i] * x[i]);
                for j in (i + 1)..g {
                    quad += tau[(i, j)] * (2.0 * x[i] * x[j]);
                }
            }
            let mut lin = Complex64::new(0.0, 0.0);
            for i in 0..g {
                lin += self.shift[i] * x[i];
            }
            let term = (I * PI * (quad + lin * 2.0)).exp();
            f(&x, term);
            // odometer
            let mut i = 0;
            loop {
                if i == g {
                    return;
                }
                if n[i] < r {
                    n[i] += 1;
                    break;
                }
                n[i] = -r;
                i += 1;
            }
        }
    }
}

/// `theta_{a,b}(z, tau)` as a certified truncated sum.
pub fn theta(chr: &Characteristic, z: &[Complex64], tau: &SiegelPoint, spec: &TruncationSpec) -> Result<CertifiedComplex> {
    let sum = LatticeSum::new(chr, z, tau)?;
    let (radius, tail) = sum.radius(spec, RadialWeight::ONE)?;
    let mut acc = Complex64::new(0.0, 0.0);
    sum.for_each(radius, |_, t| acc += t);
    Ok(CertifiedComplex::new(acc, tail))
}

/// Theta constant `theta_{a,b}(0, tau)`.
pub fn theta_constant(chr: &Characteristic, tau: &SiegelPoint, spec: &TruncationSpec) -> Result<CertifiedComplex> {
    let z = vec![Complex64::new(0.0, 0.0); tau.genus()];
    theta(chr, &z, tau, spec)
}

/// Gradient in `z`: component `k` carries the prefactor `2 pi i x_k`.
pub fn theta_z_grad(chr: &Characteristic, z: &[Complex64], tau: &SiegelPoint, spec: &TruncationSpec) -> Result<Vec<CertifiedComplex>> {
    let sum = LatticeSum::new(chr, z, tau)?;
    let w = RadialWeight { coef: 2.0 * PI, degree: 1 };
    let (radius, tail) = sum.radius(spec, w)?;
    let g = tau.genus();
    let mut acc = vec![Complex64::new(0.0, 0.0); g];
    sum.for_each(radius, |x, t| {
        for k in 0..g {
            acc[k] += t * x[k];
        }
    });
    Ok(acc.into_iter().map(|v| CertifiedComplex::new(v * (2.0 * PI) * I, tail)).collect())
}

/// `d^order/dt^order` at `t = 0` of `theta_{a,b}(0, tau + t (E_12 + E_21))`
/// for genus 2: the summand picks up `(2 pi i x_1 x_2)^order`.
pub fn theta_offdiag_deriv(chr: &Characteristic, tau: &SiegelPoint, order: u32, spec: &TruncationSpec) -> Result<CertifiedComplex> {
    if tau.genus() != 2 {
        return Err(Error::WrongGenus { expected: 2, got: tau.genus() });
    }
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidInput(format!("derivative order {order} not in {{1, 2}}")));
    }
    let z = [Complex64::new(0.0, 0.0); 2];
    let sum = LatticeSum::new(chr, &z, tau)?;
    // |2 pi x_1 x_2| <= pi |x|^2
    let w = RadialWeight { coef: PI.powi(order as i32), degree: 2 * order };
    let (radius, tail) = sum.radius(spec, w)?;
    let mut acc = Complex64::new(0.0, 0.0);
    sum.for_each(radius, |x, t| {
        let p = x[0] * x[1];
        acc += t * p.powi(order as i32);
    });
    let factor = (2.0 * PI * I).powi(order as i32);
    Ok(CertifiedComplex::new(acc * factor, tail))
}
