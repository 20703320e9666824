//! Genus-one layer: Jacobi's Delta, the even theta constants, chi_1, the
//! Weierstrass invariants, the Epstein zeta function of `Z + Z tau` and the
//! torsion of the flat elliptic curve.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::certified::CertifiedComplex;
use crate::characteristic::Characteristic;
use crate::error::{Error, Result};
use crate::siegel::SiegelPoint;
use crate::special::{expint_e1, gamma_upper, rgamma, EULER_GAMMA};
use crate::theta::{shell_tail_bound, theta, theta_constant, theta_z_grad, RadialWeight, TruncationSpec};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModularKind {
    Delta,
    Chi1,
    G2,
    G3,
    Theta00,
    Theta10,
    Theta01,
    EpsteinZeta,
}

impl ModularKind {
    pub fn weight(self) -> Ratio<i64> {
        match self {
            ModularKind::Delta => Ratio::from_integer(12),
            ModularKind::Chi1 => Ratio::new(3, 2),
            ModularKind::G2 => Ratio::from_integer(4),
            ModularKind::G3 => Ratio::from_integer(6),
            ModularKind::Theta00 | ModularKind::Theta10 | ModularKind::Theta01 => Ratio::new(1, 2),
            ModularKind::EpsteinZeta => Ratio::from_integer(0),
        }
    }
}

/// A genus-one modular quantity tagged with its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularValue {
    pub tau: Complex64,
    pub value: CertifiedComplex,
    pub weight: Ratio<i64>,
    pub kind: ModularKind,
}

impl ModularValue {
    pub fn new(kind: ModularKind, tau: Complex64, value: CertifiedComplex) -> Result<Self> {
        check_upper(tau)?;
        Ok(Self { tau, value, weight: kind.weight(), kind })
    }

    /// `(Im tau)^weight |value|^2`.
    pub fn petersson_norm_sq(&self) -> f64 {
        let w = *self.weight.numer() as f64 / *self.weight.denom() as f64;
        self.tau.im.powf(w) * self.value.value.norm_sqr()
    }
}

pub(crate) fn check_upper(tau: Complex64) -> Result<()> {
    if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
        return Err(Error::NonPositiveDefinite { pivot: tau.im, threshold: 0.0 });
    }
    Ok(())
}

/// `q prod_{n <= N} (1 - q^n)^24`, `q = e^{2 pi i tau}`.
///
/// The omitted factors satisfy `|sum_{n>N} 24 log(1 - q^n)| <= L` with
/// `L = 24 |q|^{N+1} / ((1 - |q|)(1 - |q|^{N+1}))`, so the error is at most
/// `|Delta_N| (e^L - 1)`.
pub fn delta_product(tau: Complex64, n_terms: usize) -> Result<CertifiedComplex> {
    check_upper(tau)?;
    if n_terms == 0 {
        return Err(Error::InvalidInput("n_terms must be at least 1".into()));
    }
    let q = (2.0 * PI * I * tau).exp();
    let mut prod = q;
    let mut qn = Complex64::new(1.0, 0.0);
    for _ in 1..=n_terms {
        qn *= q;
        prod *= (1.0 - qn).powu(24);
    }
    let aq = q.norm();
    let tail_pow = aq.powi(n_terms as i32 + 1);
    let l = 24.0 * tail_pow / ((1.0 - aq) * (1.0 - tail_pow));
    Ok(CertifiedComplex::new(prod, prod.norm() * l.exp_m1()))
}

/// Delta with enough factors for a relative bound near machine precision.
pub fn delta(tau: Complex64) -> Result<CertifiedComplex> {
    check_upper(tau)?;
    let aq = (-2.0 * PI * tau.im).exp();
    let n = ((1e-18f64).ln() / aq.ln()).ceil().max(1.0) as usize;
    delta_product(tau, n.min(100_000))
}

fn g1_point(tau: Complex64) -> Result<SiegelPoint> {
    check_upper(tau)?;
    SiegelPoint::genus1(tau)
}

fn g1_const(label: &str, tau: Complex64, spec: &TruncationSpec) -> Result<CertifiedComplex> {
    let chr = Characteristic::from_label(label)?;
    theta_constant(&chr, &g1_point(tau)?, spec)
}

pub fn theta00(tau: Complex64, spec: &TruncationSpec) -> Result<CertifiedComplex> {
    g1_const("00", tau, spec)
}

pub fn theta10(tau: Complex64, spec: &TruncationSpec) -> Result<CertifiedComplex> {
    g1_const("10", tau, spec)
}

pub fn theta01(tau: Complex64, spec: &TruncationSpec) -> Result<CertifiedComplex> {
    g1_const("01", tau, spec)
}

/// `chi_1 = theta_00 theta_10 theta_01`.
pub fn chi1(tau: Complex64, spec: &TruncationSpec) -> Result<CertifiedComplex> {
    Ok(theta00(tau, spec)? * theta10(tau, spec)? * theta01(tau, spec)?)
}

/// `d/dz theta_11(z, tau)` at `z = 0`.
pub fn theta11_prime(tau: Complex64, spec: &TruncationSpec) -> Result<CertifiedComplex> {
    let chr = Characteristic::from_label("11")?;
    Ok(theta_z_grad(&chr, &[Complex64::new(0.0, 0.0)], &g1_point(tau)?, spec)?[0])
}

/// `sum_{n >= 1} n^k q^n / (1 - q^n)` with a certified tail.
fn lambert_sum(q: Complex64, k: i32) -> (Complex64, f64) {
    let aq = q.norm();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    let mut n = 1;
    loop {
        qn *= q;
        let nf = n as f64;
        acc += qn * nf.powi(k) / (1.0 - qn);
        // bound for the terms after n: n'^k |q|^n' / (1 - |q|), ratios decreasing
        let next = |m: f64| m.powi(k) * aq.powf(m) / (1.0 - aq);
        let t1 = next(nf + 1.0);
        let ratio = ((nf + 2.0) / (nf + 1.0)).powi(k) * aq;
        if ratio < 1.0 && t1 / (1.0 - ratio) < 1e-18 {
            return (acc, t1 / (1.0 - ratio));
        }
        n += 1;
        if n > 1_000_000 {
            return (acc, f64::INFINITY);
        }
    }
}

/// Weierstrass invariants of `Z + Z tau`:
/// `g2 = (4 pi^4 / 3) E4`, `g3 = (8 pi^6 / 27) E6`.
pub fn eisenstein_g2_g3(tau: Complex64) -> Result<(CertifiedComplex, CertifiedComplex)> {
    check_upper(tau)?;
    let q = (2.0 * PI * I * tau).exp();
    let (s3, e3) = lambert_sum(q, 3);
    let (s5, e5) = lambert_sum(q, 5);
    let e4 = CertifiedComplex::new(1.0 + 240.0 * s3, 240.0 * e3);
    let e6 = CertifiedComplex::new(1.0 - 504.0 * s5, 504.0 * e5);
    Ok((e4.scale_real(4.0 * PI.powi(4) / 3.0), e6.scale_real(8.0 * PI.powi(6) / 27.0)))
}

/// Reduced binary form `Q(m, n) = |m + n tau|^2 / Im tau` (determinant one) and its inverse.
struct EpsteinForm {
    q: [[f64; 2]; 2],
    q_dual: [[f64; 2]; 2],
    lambda: f64,
}

impl EpsteinForm {
    fn new(tau: Complex64) -> Self {
        let (x, y) = (tau.re, tau.im);
        let n2 = tau.norm_sqr();
        let q = [[1.0 / y, x / y], [x / y, n2 / y]];
        let q_dual = [[n2 / y, -x / y], [-x / y, 1.0 / y]];
        let tr = (1.0 + n2) / y;
        let lambda = 0.5 * (tr - (tr * tr - 4.0).max(0.0).sqrt());
        Self { q, q_dual, lambda: lambda * (1.0 - 1e-12) }
    }

    fn eval(f: &[[f64; 2]; 2], m: f64, n: f64) -> f64 {
        f[0][0] * m * m + 2.0 * f[0][1] * m * n + f[1][1] * n * n
    }

    /// Radius and tail bound for a sum whose terms are bounded by
    /// `e^{-pi Q} / (pi Q - p)` with `p = shift`.
    fn radius(&self, shift: f64, target: f64) -> (usize, f64) {
        for r in 1..=400usize {
            let inner = PI * self.lambda * ((r + 1) as f64).powi(2) - shift;
            if inner <= 0.0 {
                continue;
            }
            let w = RadialWeight { coef: 1.0 / inner, degree: 0 };
            let tail = shell_tail_bound(2, r, 0.0, self.lambda, 0.0, w);
            if tail <= target {
                return (r, tail);
            }
        }
        (400, f64::INFINITY)
    }

    fn for_each<F: FnMut(f64, f64)>(r: usize, mut f: F) {
        let r = r as i64;
        for m in -r..=r {
            for n in -r..=r {
                if m != 0 || n != 0 {
                    f(m as f64, n as f64);
                }
            }
        }
    }
}

/// Continued Epstein zeta `zeta_tau(s) = (2 pi)^{-2s} sum' (Im tau)^s / |m + n tau|^{2s}`.
///
/// Uses the theta-lift split at `t = 1`:
/// `pi^{-s} Gamma(s) Z(s) = -1/s - 1/(1-s) + sum' (pi Q)^{-s} Gamma(s, pi Q)
///  + sum' (pi Q*)^{s-1} Gamma(1-s, pi Q*)`.
pub fn epstein_zeta(tau: Complex64, s: Complex64) -> Result<CertifiedComplex> {
    check_upper(tau)?;
    let d1 = (s - 1.0).norm();
    if d1 < 1e-9 {
        return Err(Error::PoleAt1(d1));
    }
    let form = EpsteinForm::new(tau);
    let s1 = 1.0 - s;
    let (r1, t1) = form.radius((s.re - 1.0).max(0.0), 1e-17);
    let (r2, t2) = form.radius((s1.re - 1.0).max(0.0), 1e-17);
    let mut h = Complex64::new(0.0, 0.0);
    EpsteinForm::for_each(r1, |m, n| {
        let x = PI * EpsteinForm::eval(&form.q, m, n);
        h += Complex64::new(x, 0.0).powc(-s) * gamma_upper(s, x);
    });
    EpsteinForm::for_each(r2, |m, n| {
        let x = PI * EpsteinForm::eval(&form.q_dual, m, n);
        h += Complex64::new(x, 0.0).powc(-s1) * gamma_upper(s1, x);
    });
    let rg = rgamma(s);
    let pis = Complex64::new(PI, 0.0).powc(s);
    let z = pis * (-rgamma(s + 1.0) + rg * (h - 1.0 / s1));
    let scale = Complex64::new(2.0 * PI, 0.0).powc(-2.0 * s);
    let err = (scale * pis * rg).norm() * (t1 + t2);
    Ok(CertifiedComplex::new(scale * z, err))
}

/// `d/ds zeta_tau(s)` at `s = 0`:
/// `2 log(2 pi) - 1 - gamma - log pi + sum' E1(pi Q) + sum' e^{-pi Q*} / (pi Q*)`.
pub fn epstein_zeta_deriv0(tau: Complex64) -> Result<CertifiedComplex> {
    check_upper(tau)?;
    let form = EpsteinForm::new(tau);
    let (r, tail) = form.radius(0.0, 1e-17);
    let mut h = 0.0;
    EpsteinForm::for_each(r, |m, n| {
        let x = PI * EpsteinForm::eval(&form.q, m, n);
        let xd = PI * EpsteinForm::eval(&form.q_dual, m, n);
        h += expint_e1(x) + (-xd).exp() / xd;
    });
    let v = 2.0 * (2.0 * PI).ln() - 1.0 - EULER_GAMMA - PI.ln() + h;
    Ok(CertifiedComplex::new(Complex64::new(v, 0.0), 2.0 * tail))
}

/// Analytic torsion of `(E_tau, (Im tau)^{-1} |dz|^2)`: `exp(zeta_tau'(0))`.
pub fn torsion_elliptic(tau: Complex64) -> Result<f64> {
    Ok(epstein_zeta_deriv0(tau)?.value.re.exp())
}

/// Midpoint quadrature result with an error estimate from grid halving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub err_estimate: f64,
}

/// `int_{[0,1]^2} log ||theta(x + tau y, tau)||^2 dx dy`, the average of
/// `log |theta|^2 e^{-2 pi (Im z)^2 / Im tau}` over the torus with the
/// normalized invariant measure.
///
/// Midpoint rule on an `n x n` grid; cells near the zero at `z = (1 + tau)/2`
/// are refined recursively since the integrand has a log singularity there.
pub fn faltings_integral(tau: Complex64, grid_n: usize) -> Result<QuadratureEstimate> {
    check_upper(tau)?;
    if grid_n < 4 {
        return Err(Error::InvalidInput("grid_n must be at least 4".into()));
    }
    let point = g1_point(tau)?;
    let spec = TruncationSpec::with_tol(1e-15);
    let chr = Characteristic::zero(1);
    let integrand = |x: f64, y: f64| -> Result<f64> {
        let z = Complex64::new(x, 0.0) + tau * y;
        let t = theta(&chr, &[z], &point, &spec)?.value;
        Ok(t.norm_sqr().ln() - 2.0 * PI * z.im * z.im / tau.im)
    };
    let grid = |n: usize| -> Result<f64> {
        let h = 1.0 / n as f64;
        let rows: Vec<Result<f64>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let mut s = 0.0;
                for i in 0..n {
                    s += refined_cell(&integrand, i as f64 * h, j as f64 * h, h, 4)?;
                }
                Ok(s)
            })
            .collect();
        let mut total = 0.0;
        for r in rows {
            total += r?;
        }
        Ok(total)
    };
    let fine = grid(grid_n)?;
    let coarse = grid(grid_n / 2)?;
    Ok(QuadratureEstimate { value: fine, err_estimate: (fine - coarse).abs() })
}

fn refined_cell<F: Fn(f64, f64) -> Result<f64>>(f: &F, x0: f64, y0: f64, h: f64, depth: u32) -> Result<f64> {
    let (cx, cy) = (x0 + 0.5 * h, y0 + 0.5 * h);
    let near = (cx - 0.5).abs() <= h && (cy - 0.5).abs() <= h;
    if !near || depth == 0 {
        return Ok(f(cx, cy)? * h * h);
    }
    let sub = h / 4.0;
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            s += refined_cell(f, x0 + a as f64 * sub, y0 + b as f64 * sub, sub, depth - 1)?;
        }
    }
    Ok(s)
}
