//! Closed-form analytic torsion: line bundles on abelian varieties, theta
//! divisors of genus two and three, and the L^2 Gram matrix of the level-m
//! theta basis on an elliptic curve.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::characteristic::{Characteristic, Rational};
use crate::error::{Error, Result};
use crate::siegel::SiegelPoint;
use crate::siegel_forms::{delta_g_weight, CharacteristicTable, Scale, C2};
use crate::theta::{theta, theta_constant, TruncationSpec};

/// A principally polarized `A_tau` with the line bundle `L^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizedTorus {
    pub tau: SiegelPoint,
    pub m: i64,
}

impl PolarizedTorus {
    pub fn new(tau: SiegelPoint, m: i64) -> Self {
        Self { tau, m }
    }

    pub fn genus(&self) -> usize {
        self.tau.genus()
    }

    /// `c_1(L^m)^g / g! = m^g`.
    pub fn rho_l(&self) -> f64 {
        (self.m as f64).powi(self.genus() as i32)
    }

    /// Volume of the invariant metric, normalized to one.
    pub fn rho_omega(&self) -> f64 {
        1.0
    }
}

/// `log tau(A, L^m, omega)`:
/// `k/2 log(k / (2 pi)^g)` with `k = |m|^g` for `m > 0`, zero for `m = 0`,
/// and `(-1)^{g+1}` times the same for `m < 0`.
pub fn torsion_abelian(pt: &PolarizedTorus) -> f64 {
    let g = pt.genus() as i32;
    if pt.m == 0 {
        return 0.0;
    }
    let k = (pt.m.unsigned_abs() as f64).powi(g);
    let v = 0.5 * k * (k.ln() - g as f64 * (2.0 * PI).ln());
    if pt.m > 0 || g % 2 == 1 {
        v
    } else {
        -v
    }
}

/// Torsion of a theta divisor, with the scale status of the result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionValue {
    pub value: f64,
    pub scale: Scale,
}

/// `||Delta_g(tau)||^{(-1)^{g+1} 2 / (g+1)!}` with Petersson weight `(g+3) g!/2`.
///
/// Exact for genus two; for genus three the unknown constant in `Delta_3`
/// is left out and the value is meaningful only up to scale.
pub fn torsion_theta_divisor(tau: &SiegelPoint, spec: &TruncationSpec) -> Result<TorsionValue> {
    let g = tau.genus();
    if g != 2 && g != 3 {
        return Err(Error::UnsupportedGenus(g));
    }
    let table = CharacteristicTable::new(g)?;
    let consts = table.evens.iter().map(|c| theta_constant(c, tau, spec)).collect::<Result<Vec<_>>>()?;
    let largest = consts.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let smallest = consts.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min);
    if smallest < 1e-12 * largest {
        return Err(Error::OnDiscriminantLocus { value: smallest, threshold: 1e-12 * largest });
    }
    // log |chi_g| as a sum, so tiny products stay representable
    let log_abs_chi: f64 = consts.iter().map(|c| c.norm().ln()).sum();
    let (log_abs_delta, scale) = match g {
        2 => (log_abs_chi + C2.ln(), Scale::Exact(C2)),
        _ => (log_abs_chi, Scale::Unknown),
    };
    let weight = delta_g_weight(g).to_f64().unwrap_or(f64::NAN);
    let log_norm = 0.5 * weight * tau.det_imag().ln() + log_abs_delta;
    let fact: f64 = (1..=g + 1).map(|k| k as f64).product();
    let sign = if g % 2 == 1 { 1.0 } else { -1.0 };
    Ok(TorsionValue { value: (sign * 2.0 / fact * log_norm).exp(), scale })
}

/// Gram matrix with a refinement-based error estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct GramEstimate {
    pub matrix: DMatrix<Complex64>,
    /// Max entrywise change against the grid with half the points per side.
    pub err_estimate: f64,
}

/// Gram matrix of the basis `theta_a(z) = theta_{a/m, 0}(m z, m tau)`,
/// `a = 0..m-1`, for the metric `h(s, t) = s conj(t) e^{-2 pi m (Im z)^2 / Im tau}`,
/// integrated over the torus in the coordinates `z = x + tau y`, `(x, y) in [0,1)^2`.
pub fn l2_gram_quadrature(m: usize, tau: Complex64, grid_n: usize) -> Result<GramEstimate> {
    if grid_n < 100 {
        return Err(Error::InvalidInput(format!("grid_n = {grid_n} < 100")));
    }
    let fine = gram_midpoint(m, tau, grid_n)?;
    let coarse = gram_midpoint(m, tau, grid_n / 2)?;
    let err_estimate = (&fine - &coarse).iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(GramEstimate { matrix: fine, err_estimate })
}

/// Closed form `(det 2m Im tau)^{-1/2}` of the diagonal entries, genus one.
pub fn gram_diagonal_exact(m: usize, tau: Complex64) -> f64 {
    (2.0 * m as f64 * tau.im).powf(-0.5)
}

/// Midpoint rule on an `n x n` grid, no size restriction.
pub fn gram_midpoint(m: usize, tau: Complex64, n: usize) -> Result<DMatrix<Complex64>> {
    if m == 0 || m > 2 {
        return Err(Error::InvalidInput(format!("level m = {m} not in {{1, 2}}")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("empty grid".into()));
    }
    let mf = m as f64;
    let mtau = SiegelPoint::genus1(tau * mf)?;
    let chars: Vec<Characteristic> =
        (0..m).map(|a| Characteristic::new(vec![Rational::new(a as i64, m as i64)], vec![Ratio::from_integer(0)])).collect::<Result<_>>()?;
    let spec = TruncationSpec::with_tol(1e-16);
    let h = 1.0 / n as f64;
    let rows: Vec<Result<DMatrix<Complex64>>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let y = (j as f64 + 0.5) * h;
            let mut acc = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
            let mut vals = vec![Complex64::new(0.0, 0.0); m];
            for i in 0..n {
                let x = (i as f64 + 0.5) * h;
                let z = Complex64::new(x, 0.0) + tau * y;
                let weight = (-2.0 * PI * mf * z.im * z.im / tau.im).exp();
                for (v, c) in vals.iter_mut().zip(&chars) {
                    *v = theta(c, &[z * mf], &mtau, &spec)?.value;
                }
                for a in 0..m {
                    for b in 0..m {
                        acc[(a, b)] += vals[a] * vals[b].conj() * weight;
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
    for r in rows {
        total += r?;
    }
    Ok(total * Complex64::new(h * h, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegel_forms::{chi_g, sympl_act, SymplecticElement};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec() -> TruncationSpec {
        TruncationSpec::default()
    }

    fn pt(g: usize, m: i64) -> PolarizedTorus {
        let diag: Vec<Complex64> = (0..g).map(|k| c(0.0, 1.0 + 0.1 * k as f64)).collect();
        PolarizedTorus::new(SiegelPoint::diagonal(&diag).unwrap(), m)
    }

    #[test]
    fn abelian_torsion_cases() {
        assert_eq!(torsion_abelian(&pt(2, 0)), 0.0);
        let want = -0.5 * (1.0 / (2.0 * PI).powi(2)).ln();
        assert!((torsion_abelian(&pt(2, -1)) - want).abs() < 1e-15);
        let v = torsion_abelian(&pt(1, 3));
        assert!((v - 1.5 * (3.0 / (2.0 * PI)).ln()).abs() < 1e-15);
        assert_eq!(pt(3, 2).rho_l(), 8.0);
        assert_eq!(pt(3, 2).rho_omega(), 1.0);
    }

    #[test]
    fn abelian_torsion_duality() {
        for g in 1..=3 {
            for m in 1..=3 {
                let sign = if g % 2 == 1 { 1.0 } else { -1.0 };
                assert_eq!(torsion_abelian(&pt(g, -m)), sign * torsion_abelian(&pt(g, m)));
            }
        }
    }

    fn tau2() -> SiegelPoint {
        SiegelPoint::from_rows(&[&[c(0.1, 1.1), c(0.2, 0.1)], &[c(0.2, 0.1), c(-0.3, 1.3)]]).unwrap()
    }

    #[test]
    fn genus_two_closed_form() {
        let tau = tau2();
        let t = torsion_theta_divisor(&tau, &spec()).unwrap();
        let d2 = chi_g(&tau, &spec()).unwrap().value * C2.value();
        let want = (tau.det_imag().powi(5) * d2.norm_sqr()).powf(-1.0 / 6.0);
        assert!((t.value - want).abs() / want < 1e-12);
        assert_eq!(t.scale, Scale::Exact(C2));
    }

    #[test]
    fn genus_two_modular_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let gens = SymplecticElement::generators(2);
        let tau = tau2();
        let base = torsion_theta_divisor(&tau, &spec()).unwrap().value;
        for _ in 0..10 {
            let mut w = SymplecticElement::identity(2);
            for _ in 0..4 {
                let g = &gens[rng.gen_range(0..gens.len())];
                w = w.mul(if rng.gen_bool(0.5) { g } else { &gens[0] }).unwrap();
            }
            let (_, t) = sympl_act(&w, &[c(0.0, 0.0); 2], &tau).unwrap();
            let v = torsion_theta_divisor(&t, &spec()).unwrap().value;
            assert!((v - base).abs() / base < 1e-7);
        }
    }

    #[test]
    fn diagonal_point_is_on_the_locus() {
        let tau = SiegelPoint::diagonal(&[c(0.0, 1.0), c(0.1, 1.2)]).unwrap();
        assert!(matches!(torsion_theta_divisor(&tau, &spec()), Err(Error::OnDiscriminantLocus { .. })));
        let t1 = SiegelPoint::genus1(c(0.0, 1.0)).unwrap();
        assert!(matches!(torsion_theta_divisor(&t1, &spec()), Err(Error::UnsupportedGenus(1))));
    }

    #[test]
    fn genus_three_is_scale_free_ratio() {
        let rows = [[c(0.0, 1.2), c(0.1, 0.2), c(0.0, 0.1)], [c(0.1, 0.2), c(0.2, 1.1), c(0.1, -0.1)], [c(0.0, 0.1), c(0.1, -0.1), c(0.0, 1.3)]];
        let tau = SiegelPoint::from_rows(&[&rows[0], &rows[1], &rows[2]]).unwrap();
        let t = torsion_theta_divisor(&tau, &spec()).unwrap();
        assert_eq!(t.scale, Scale::Unknown);
        let (_, moved) = sympl_act(&SymplecticElement::generators(3)[2], &[c(0.0, 0.0); 3], &tau).unwrap();
        let t2 = torsion_theta_divisor(&moved, &spec()).unwrap();
        assert!((t.value / t2.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gram_level_one() {
        let tau = c(0.0, 1.0);
        let g = gram_midpoint(1, tau, 64).unwrap();
        assert!((g[(0, 0)].re - gram_diagonal_exact(1, tau)).abs() < 1e-10);
        assert!(g[(0, 0)].im.abs() < 1e-14);
    }

    #[test]
    fn gram_level_two_is_orthogonal() {
        let tau = c(0.2, 1.1);
        let g = gram_midpoint(2, tau, 64).unwrap();
        let d = gram_diagonal_exact(2, tau);
        assert!((g[(0, 0)].re - d).abs() < 1e-10);
        assert!((g[(1, 1)].re - d).abs() < 1e-10);
        assert!(g[(0, 1)].norm() < 1e-10);
    }

    #[test]
    fn gram_converges_at_least_second_order() {
        let tau = c(0.0, 1.0);
        let exact = gram_diagonal_exact(1, tau);
        let e = |n| (gram_midpoint(1, tau, n).unwrap()[(0, 0)].re - exact).abs();
        let (e4, e8, e16) = (e(4), e(8), e(16));
        assert!(e8 <= e4 / 4.0, "{e4} {e8}");
        // the periodic integrand converges spectrally down to round-off
        assert!(e16 <= (e8 / 4.0).max(1e-14), "{e8} {e16}");
    }

    #[test]
    fn gram_precondition() {
        assert!(l2_gram_quadrature(1, c(0.0, 1.0), 50).is_err());
        let g = l2_gram_quadrature(1, c(0.0, 1.0), 100).unwrap();
        assert!(g.err_estimate < 1e-12);
    }
}
