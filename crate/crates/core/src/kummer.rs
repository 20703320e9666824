//! The Kummer quartic of a genus-two abelian surface, its sixteen nodes
//! under the Heisenberg group, the trope product `G` and the discriminant
//! `Delta_{2,2}(u, tau) = C_{2,2} F(u, tau)^2 G(u, tau)`.
//!
//! Coordinates `(x, y, z, t)` are the level-two theta values
//! `theta_{1/2 0 0 0}, theta_{1/2 1/2 0 0}, theta_{0 1/2 0 0}, theta_{0 0 0 0}`
//! at `(2z, 2 tau)`; dual coordinates `(u0, u1, u2, u3)` pair in the same order.

use num_complex::Complex64;

use crate::certified::CertifiedComplex;
use crate::characteristic::Characteristic;
use crate::error::{Error, Result};
use crate::siegel::SiegelPoint;
use crate::siegel_forms::ExactConstant;
use crate::theta::{theta, theta_constant, TruncationSpec};

pub type Point4 = [Complex64; 4];

/// Labels of the four level-two characteristics, in coordinate order.
pub const LEVEL2_LABELS: [&str; 4] = ["1000", "1100", "0100", "0000"];

/// `C_{2,2} = 2^-80 pi^-56 e^{48 zeta'(-1)}`.
pub const C22: ExactConstant = ExactConstant { pow2: -80, pow_pi: -56, zeta_prime_coeff: 48 };

fn level2_chars() -> [Characteristic; 4] {
    LEVEL2_LABELS.map(|l| Characteristic::from_label(l).expect("static label"))
}

fn check_genus2(tau: &SiegelPoint) -> Result<()> {
    if tau.genus() != 2 {
        return Err(Error::WrongGenus { expected: 2, got: tau.genus() });
    }
    Ok(())
}

/// `(alpha, beta, gamma, delta)`: the level-two theta constants at `2 tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaFourTuple {
    pub tau: SiegelPoint,
    pub alpha: CertifiedComplex,
    pub beta: CertifiedComplex,
    pub gamma: CertifiedComplex,
    pub delta: CertifiedComplex,
}

impl ThetaFourTuple {
    pub fn new(tau: &SiegelPoint, spec: &TruncationSpec) -> Result<Self> {
        check_genus2(tau)?;
        let two_tau = tau.scaled(2.0)?;
        let v = level2_chars().map(|c| theta_constant(&c, &two_tau, spec));
        let [a, b, g, d] = v;
        Ok(Self { tau: tau.clone(), alpha: a?, beta: b?, gamma: g?, delta: d? })
    }

    pub fn values(&self) -> Point4 {
        [self.alpha.value, self.beta.value, self.gamma.value, self.delta.value]
    }

    pub fn certified(&self) -> [CertifiedComplex; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }
}

/// The coefficients `(A, B, C, D, E)` of the quartic
/// `A(x^4+y^4+z^4+t^4) + B(x^2t^2+y^2z^2) + C(y^2t^2+z^2x^2) + D(z^2t^2+x^2y^2) + 2E xyzt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerCoeffs {
    pub a: CertifiedComplex,
    pub b: CertifiedComplex,
    pub c: CertifiedComplex,
    pub d: CertifiedComplex,
    pub e: CertifiedComplex,
}

impl KummerCoeffs {
    pub fn from_four(t: &ThetaFourTuple) -> Self {
        let (al, be, ga, de) = (t.alpha, t.beta, t.gamma, t.delta);
        let (a2, b2, g2, d2) = (al * al, be * be, ga * ga, de * de);
        let (a4, b4, g4, d4) = (a2 * a2, b2 * b2, g2 * g2, d2 * d2);
        let p = a2 * d2 - b2 * g2;
        let q = b2 * d2 - g2 * a2;
        let r = g2 * d2 - a2 * b2;
        let a = p * q * r;
        let b = (b4 + g4 - a4 - d4) * q * r;
        let c = (g4 + a4 - b4 - d4) * p * r;
        let d = (a4 + b4 - g4 - d4) * p * q;
        // the printed sign pattern has (delta^2 + gamma^2 - alpha^2 - beta^2) in the third
        // factor, which makes the quartic miss its own nodes; this is the corrected form
        let e = al * be * ga * de * (a2 - b2 + g2 - d2) * (a2 - b2 - g2 + d2) * (a2 + b2 - g2 - d2) * (a2 + b2 + g2 + d2);
        Self { a, b, c, d, e }
    }

    pub fn new(tau: &SiegelPoint, spec: &TruncationSpec) -> Result<Self> {
        Ok(Self::from_four(&ThetaFourTuple::new(tau, spec)?))
    }

    pub fn as_array(&self) -> [CertifiedComplex; 5] {
        [self.a, self.b, self.c, self.d, self.e]
    }

    fn values(&self) -> [Complex64; 5] {
        self.as_array().map(|v| v.value)
    }

    /// `F(w)` with the error propagated from the coefficients.
    pub fn eval(&self, w: &Point4) -> CertifiedComplex {
        let m = monomials(w);
        let mut value = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for (coef, mono) in self.as_array().iter().zip(m) {
            value += coef.value * mono;
            err += coef.err * mono.norm();
        }
        CertifiedComplex::new(value, err)
    }

    /// Sum of the moduli of the five grouped terms: the natural scale for
    /// relative residuals of `F(w)`.
    pub fn eval_scale(&self, w: &Point4) -> f64 {
        self.values().iter().zip(monomials(w)).map(|(c, m)| (c * m).norm()).sum()
    }

    /// Exact polynomial gradient `dF/dw`.
    pub fn gradient(&self, w: &Point4) -> Point4 {
        let [a, b, c, d, e] = self.values();
        let [x, y, z, t] = *w;
        [
            4.0 * a * x.powu(3) + 2.0 * b * x * t * t + 2.0 * c * x * z * z + 2.0 * d * x * y * y + 2.0 * e * y * z * t,
            4.0 * a * y.powu(3) + 2.0 * b * y * z * z + 2.0 * c * y * t * t + 2.0 * d * y * x * x + 2.0 * e * x * z * t,
            4.0 * a * z.powu(3) + 2.0 * b * z * y * y + 2.0 * c * z * x * x + 2.0 * d * z * t * t + 2.0 * e * x * y * t,
            4.0 * a * t.powu(3) + 2.0 * b * t * x * x + 2.0 * c * t * y * y + 2.0 * d * t * z * z + 2.0 * e * x * y * z,
        ]
    }

    /// Scale for relative gradient residuals: the sum of the moduli of all
    /// terms entering the gradient components.
    pub fn gradient_scale(&self, w: &Point4) -> f64 {
        let [a, b, c, d, e] = self.values().map(|v| v.norm());
        let [x, y, z, t] = w.map(|v| v.norm());
        4.0 * a * (x.powi(3) + y.powi(3) + z.powi(3) + t.powi(3))
            + 2.0 * b * (x * t * t + t * x * x + y * z * z + z * y * y)
            + 2.0 * c * (y * t * t + t * y * y + z * x * x + x * z * z)
            + 2.0 * d * (z * t * t + t * z * z + x * y * y + y * x * x)
            + 2.0 * e * (y * z * t + x * z * t + x * y * t + x * y * z)
    }
}

fn monomials(w: &Point4) -> [Complex64; 5] {
    let [x, y, z, t] = *w;
    let (x2, y2, z2, t2) = (x * x, y * y, z * z, t * t);
    [x2 * x2 + y2 * y2 + z2 * z2 + t2 * t2, x2 * t2 + y2 * z2, y2 * t2 + z2 * x2, z2 * t2 + x2 * y2, 2.0 * x * y * z * t]
}

/// `F(w, tau)`.
pub fn kummer_quartic_eval(w: &Point4, tau: &SiegelPoint, spec: &TruncationSpec) -> Result<CertifiedComplex> {
    check_nonzero(w)?;
    Ok(KummerCoeffs::new(tau, spec)?.eval(w))
}

fn check_nonzero(w: &Point4) -> Result<()> {
    if w.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
        return Err(Error::InvalidInput("projective point must be nonzero".into()));
    }
    Ok(())
}

/// The level-two map `z -> (theta_{1000} : theta_{1100} : theta_{0100} : theta_{0000})(2z, 2 tau)`.
pub fn level2_map(z: &[Complex64], tau: &SiegelPoint, spec: &TruncationSpec) -> Result<Point4> {
    check_genus2(tau)?;
    if z.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: z.len() });
    }
    let two_tau = tau.scaled(2.0)?;
    let two_z = [z[0] * 2.0, z[1] * 2.0];
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (o, c) in out.iter_mut().zip(level2_chars()) {
        *o = theta(&c, &two_z, &two_tau, spec)?.value;
    }
    Ok(out)
}

/// Scale so that the first coordinate of maximal modulus equals one.
pub fn normalize(w: &Point4) -> Point4 {
    let mut k = 0;
    for i in 1..4 {
        if w[i].norm() > w[k].norm() {
            k = i;
        }
    }
    let s = w[k];
    if s.norm() == 0.0 {
        return *w;
    }
    w.map(|v| v / s)
}

/// Projective equality: all 2x2 minors small relative to the sizes.
pub fn projectively_equal(w: &Point4, v: &Point4, tol: f64) -> bool {
    let a = normalize(w);
    let b = normalize(v);
    let scale = a.iter().map(|x| x.norm()).fold(0.0, f64::max) * b.iter().map(|x| x.norm()).fold(0.0, f64::max);
    for i in 0..4 {
        for j in (i + 1)..4 {
            if (a[i] * b[j] - a[j] * b[i]).norm() > tol * scale {
                return false;
            }
        }
    }
    true
}

/// An element `sigma_1^{e1} sigma_2^{e2} sigma_3^{e3} sigma_4^{e4}` of the
/// Heisenberg group, applied `sigma_1` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeisenbergElement {
    pub bits: [u8; 4],
}

impl HeisenbergElement {
    /// All sixteen elements in lexicographic order of their bit labels.
    pub fn all() -> Vec<Self> {
        (0u8..16).map(|k| Self { bits: [(k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1] }).collect()
    }

    pub fn generator(k: usize) -> Self {
        let mut bits = [0; 4];
        bits[k] = 1;
        Self { bits }
    }

    pub fn label(&self) -> String {
        self.bits.iter().map(|b| char::from(b'0' + b)).collect()
    }

    pub fn apply(&self, u: &Point4) -> Point4 {
        let mut w = *u;
        for (k, &e) in self.bits.iter().enumerate() {
            if e == 1 {
                w = apply_generator(k, &w);
            }
        }
        w
    }
}

fn apply_generator(k: usize, u: &Point4) -> Point4 {
    let [u0, u1, u2, u3] = *u;
    match k {
        0 => [u2, u3, u0, u1],
        1 => [u1, u0, u3, u2],
        2 => [u0, u1, -u2, -u3],
        _ => [u0, -u1, u2, -u3],
    }
}

/// The sixteen images of `seed`, in the canonical element order.
///
/// Fails with `DegenerateOrbit(i, j)` when two images coincide projectively
/// after normalization, within `1e-10`.
pub fn heisenberg_orbit(seed: &Point4) -> Result<Vec<Point4>> {
    check_nonzero(seed)?;
    let pts: Vec<Point4> = HeisenbergElement::all().iter().map(|s| s.apply(seed)).collect();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if projectively_equal(&pts[i], &pts[j], 1e-10) {
                return Err(Error::DegenerateOrbit(i, j));
            }
        }
    }
    Ok(pts)
}

/// `G(u, tau) = prod_sigma (alpha^sigma u0 + beta^sigma u1 + gamma^sigma u2 + delta^sigma u3)`.
pub fn dual_form_product(u: &Point4, tau: &SiegelPoint, spec: &TruncationSpec) -> Result<CertifiedComplex> {
    check_nonzero(u)?;
    Ok(dual_product_from(&ThetaFourTuple::new(tau, spec)?, u))
}

fn dual_product_from(four: &ThetaFourTuple, u: &Point4) -> CertifiedComplex {
    let vals = four.values();
    // each node coordinate is a signed permutation of the four constants
    let err_node: f64 = four.certified().iter().map(|c| c.err).fold(0.0, f64::max);
    let u_abs: f64 = u.iter().map(|v| v.norm()).sum();
    let factors = HeisenbergElement::all().into_iter().map(|s| {
        let n = s.apply(&vals);
        let v: Complex64 = n.iter().zip(u).map(|(a, b)| a * b).sum();
        CertifiedComplex::new(v, err_node * u_abs)
    });
    CertifiedComplex::product(factors)
}

/// A value of `Delta_{2,2}` together with the constant it was scaled by.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminantValue {
    pub u: Point4,
    pub tau: SiegelPoint,
    pub value: CertifiedComplex,
    pub constant_used: ExactConstant,
}

/// `Delta_{2,2}(u, tau) = C_{2,2} F(u, tau)^2 G(u, tau)`.
pub fn discriminant_2_2(u: &Point4, tau: &SiegelPoint, spec: &TruncationSpec) -> Result<DiscriminantValue> {
    let model = KummerModel::new(tau, spec)?;
    model.discriminant(u)
}

/// Coefficients, nodes and tropes of `K_tau` for one `tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct KummerModel {
    pub four: ThetaFourTuple,
    pub coeffs: KummerCoeffs,
    /// `sigma . (alpha, beta, gamma, delta)` in canonical element order.
    pub nodes: Vec<Point4>,
}

impl KummerModel {
    pub fn new(tau: &SiegelPoint, spec: &TruncationSpec) -> Result<Self> {
        let four = ThetaFourTuple::new(tau, spec)?;
        let coeffs = KummerCoeffs::from_four(&four);
        let seed = four.values();
        let nodes = HeisenbergElement::all().iter().map(|s| s.apply(&seed)).collect();
        Ok(Self { four, coeffs, nodes })
    }

    pub fn tau(&self) -> &SiegelPoint {
        &self.four.tau
    }

    /// The dual linear form of node `k`: `u -> node_k . u`.
    pub fn dual_form(&self, k: usize, u: &Point4) -> Complex64 {
        self.nodes[k].iter().zip(u).map(|(a, b)| a * b).sum()
    }

    pub fn eval(&self, w: &Point4) -> CertifiedComplex {
        self.coeffs.eval(w)
    }

    pub fn g_product(&self, u: &Point4) -> CertifiedComplex {
        dual_product_from(&self.four, u)
    }

    pub fn discriminant(&self, u: &Point4) -> Result<DiscriminantValue> {
        check_nonzero(u)?;
        let f = self.coeffs.eval(u);
        let g = self.g_product(u);
        let value = CertifiedComplex::product([f, f, g]).scale_real(C22.value());
        Ok(DiscriminantValue { u: *u, tau: self.tau().clone(), value, constant_used: C22 })
    }

    /// Tangent plane at a point of `K_tau`, as dual coordinates.
    pub fn tangent_plane(&self, p: &Point4) -> Point4 {
        self.coeffs.gradient(p)
    }

    /// Incidence matrix: entry `(i, j)` is true when node `j` lies on trope `i`.
    pub fn trope_incidence(&self, tol: f64) -> Vec<Vec<bool>> {
        let scale = |k: usize| self.nodes[k].iter().map(|v| v.norm()).fold(0.0, f64::max);
        (0..16)
            .map(|i| {
                (0..16)
                    .map(|j| {
                        let s: f64 = self.nodes[i].iter().zip(&self.nodes[j]).map(|(a, b)| (a * b).norm()).sum();
                        self.dual_form(i, &self.nodes[j]).norm() <= tol * s.max(scale(i) * scale(j))
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::rel_diff;
    use crate::modular_g1;
    use crate::siegel_forms::chi_g;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec() -> TruncationSpec {
        TruncationSpec::default()
    }

    fn taus() -> Vec<SiegelPoint> {
        vec![
            SiegelPoint::from_rows(&[&[c(0.0, 1.1), c(0.2, 0.1)], &[c(0.2, 0.1), c(0.0, 1.3)]]).unwrap(),
            SiegelPoint::from_rows(&[&[c(0.3, 1.0), c(-0.1, 0.3)], &[c(-0.1, 0.3), c(-0.2, 1.2)]]).unwrap(),
            SiegelPoint::from_rows(&[&[c(-0.4, 1.6), c(0.45, -0.2)], &[c(0.45, -0.2), c(0.1, 0.9)]]).unwrap(),
        ]
    }

    fn random_z(rng: &mut ChaCha8Rng) -> [Complex64; 2] {
        [c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.3..0.3)), c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.3..0.3))]
    }

    #[test]
    fn heisenberg_group_has_sixteen_projective_elements() {
        let probe = [c(1.0, 0.0), c(2.0, 0.3), c(-0.7, 1.1), c(0.4, -2.0)];
        let imgs: Vec<Point4> = HeisenbergElement::all().iter().map(|s| s.apply(&probe)).collect();
        for i in 0..16 {
            for j in (i + 1)..16 {
                assert!(!projectively_equal(&imgs[i], &imgs[j], 1e-12));
            }
        }
        // closure: every product of two elements is one of the sixteen up to sign
        for s in HeisenbergElement::all() {
            for t in HeisenbergElement::all() {
                let w = t.apply(&s.apply(&probe));
                assert!(imgs.iter().any(|v| projectively_equal(v, &w, 1e-12)));
            }
        }
    }

    #[test]
    fn coordinate_seed_is_degenerate() {
        let seed = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(matches!(heisenberg_orbit(&seed), Err(Error::DegenerateOrbit(_, _))));
    }

    #[test]
    fn node_orbit_is_generic() {
        for tau in taus() {
            let four = ThetaFourTuple::new(&tau, &spec()).unwrap();
            assert_eq!(heisenberg_orbit(&four.values()).unwrap().len(), 16);
        }
    }

    #[test]
    fn quartic_is_heisenberg_invariant() {
        let tau = &taus()[1];
        let k = KummerCoeffs::new(tau, &spec()).unwrap();
        let w = [c(0.3, 0.1), c(-1.0, 0.2), c(0.5, 0.5), c(0.9, -0.4)];
        let f = k.eval(&w).value;
        for s in HeisenbergElement::all() {
            assert!((k.eval(&s.apply(&w)).value - f).norm() <= 1e-13 * k.eval_scale(&w));
        }
    }

    #[test]
    fn quartic_vanishes_on_level2_image() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for tau in taus() {
            let k = KummerCoeffs::new(&tau, &spec()).unwrap();
            for _ in 0..50 {
                let p = normalize(&level2_map(&random_z(&mut rng), &tau, &spec()).unwrap());
                assert!(k.eval(&p).value.norm() <= 1e-8 * k.eval_scale(&p));
            }
        }
    }

    #[test]
    fn nodes_are_singular() {
        for tau in taus() {
            let m = KummerModel::new(&tau, &spec()).unwrap();
            for n in &m.nodes {
                let n = normalize(n);
                assert!(m.eval(&n).value.norm() <= 1e-8 * m.coeffs.eval_scale(&n));
                let g = m.coeffs.gradient(&n);
                let gmax = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
                assert!(gmax <= 1e-8 * m.coeffs.gradient_scale(&n));
            }
        }
    }

    #[test]
    fn printed_sign_pattern_misses_the_nodes() {
        // oracle for the correction: with the printed E the node gradient does not vanish
        let tau = &taus()[0];
        let four = ThetaFourTuple::new(tau, &spec()).unwrap();
        let mut k = KummerCoeffs::from_four(&four);
        let [al, be, ga, de] = four.values();
        let (a2, b2, g2, d2) = (al * al, be * be, ga * ga, de * de);
        let printed = al * be * ga * de * (d2 + a2 - b2 - g2) * (d2 + b2 - g2 - a2) * (d2 + g2 - a2 - b2) * (a2 + b2 - g2 - d2);
        k.e = CertifiedComplex::exact(printed);
        let n = normalize(&four.values());
        let g = k.gradient(&n);
        assert!(g.iter().map(|v| v.norm()).fold(0.0, f64::max) > 1e-4 * k.gradient_scale(&n));
    }

    #[test]
    fn coefficients_are_finite_and_nonzero() {
        let tau = SiegelPoint::from_rows(&[&[c(0.0, 1.1), c(0.2, 0.1)], &[c(0.2, 0.1), c(0.0, 1.3)]]).unwrap();
        let k = KummerCoeffs::new(&tau, &spec()).unwrap();
        for v in k.as_array() {
            assert!(v.value.re.is_finite() && v.value.im.is_finite());
        }
        assert!(k.as_array().iter().any(|v| v.value.norm() > 1e-6));
    }

    #[test]
    fn level2_map_is_even() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let tau = &taus()[2];
        for _ in 0..10 {
            let z = random_z(&mut rng);
            let a = level2_map(&z, tau, &spec()).unwrap();
            let b = level2_map(&[-z[0], -z[1]], tau, &spec()).unwrap();
            assert!(projectively_equal(&a, &b, 1e-12));
        }
    }

    #[test]
    fn diagonal_four_tuple_factorizes() {
        let t = c(0.1, 1.2);
        let tau = SiegelPoint::diagonal(&[t, t]).unwrap().scaled(0.5).unwrap();
        let four = ThetaFourTuple::new(&tau, &spec()).unwrap();
        let t00 = modular_g1::theta00(t, &spec()).unwrap().value;
        let t10 = modular_g1::theta10(t, &spec()).unwrap().value;
        let t01 = modular_g1::theta01(t, &spec()).unwrap().value;
        assert!(rel_diff(four.alpha.value, t00 * t10) < 1e-13);
        assert!(rel_diff(four.gamma.value, t00 * t10) < 1e-13);
        assert!(rel_diff(four.beta.value, t10 * t10) < 1e-13);
        assert!(rel_diff(four.delta.value, t00 * t00) < 1e-13);
        let [al, be, ga, de] = four.values();
        assert!((be * de - ga * al).norm() < 1e-13);
        let chi = modular_g1::chi1(t, &spec()).unwrap().value;
        let lhs = al * al * de * de - be * be * ga * ga;
        assert!(rel_diff(lhs, chi * chi * t01 * t01) < 1e-9);
        let lhs = ga * ga * de * de - be * be * al * al;
        assert!(rel_diff(lhs, chi * chi * t01 * t01) < 1e-9);
        assert!(rel_diff(be * de + ga * al, 2.0 * t00 * t00 * t10 * t10) < 1e-12);
        assert!(rel_diff(al * be * ga * de, t00.powu(4) * t10.powu(4)) < 1e-12);
    }

    #[test]
    fn unit_vector_identity_with_chi2() {
        let want_idx = crate::fixtures::fixtures().measured.unit_vector;
        for tau in taus() {
            let m = KummerModel::new(&tau, &spec()).unwrap();
            let chi = chi_g(&tau.scaled(2.0).unwrap(), &spec()).unwrap().value.powu(4);
            let passing: Vec<usize> = (0..4)
                .filter(|&k| {
                    let mut e = [c(0.0, 0.0); 4];
                    e[k] = c(1.0, 0.0);
                    let f = m.eval(&e).value;
                    rel_diff(f * f * m.g_product(&e).value, chi) < 1e-7
                })
                .collect();
            assert!(passing.contains(&want_idx), "{passing:?}");
        }
    }

    #[test]
    fn g_sign_table() {
        let tau = &taus()[1];
        let m = KummerModel::new(tau, &spec()).unwrap();
        let u = [c(0.3, 0.1), c(-1.0, 0.2), c(0.5, 0.5), c(0.9, -0.4)];
        let base = m.g_product(&u).value;
        let signs: Vec<i8> = (0..4)
            .map(|k| {
                let r = m.g_product(&HeisenbergElement::generator(k).apply(&u)).value / base;
                assert!((r.norm() - 1.0).abs() < 1e-10 && r.im.abs() < 1e-10);
                r.re.round() as i8
            })
            .collect();
        assert_eq!(signs, crate::fixtures::fixtures().measured.g_generator_signs);
    }

    #[test]
    fn g_vanishes_through_a_node() {
        let m = KummerModel::new(&taus()[0], &spec()).unwrap();
        // a plane through node 5: orthogonal complement of node 5 in the bilinear pairing
        let n = m.nodes[5];
        let u = [n[1], -n[0], c(0.0, 0.0), c(0.0, 0.0)];
        assert!(m.g_product(&u).value.norm() < 1e-12 * m.g_product(&[c(1.0, 0.0), c(0.3, 0.0), c(0.2, 0.0), c(0.1, 0.0)]).norm());
        assert!(m.dual_form(5, &u).norm() < 1e-15);
    }

    #[test]
    fn each_node_lies_on_six_tropes() {
        for tau in taus() {
            let m = KummerModel::new(&tau, &spec()).unwrap();
            let inc = m.trope_incidence(1e-10);
            for j in 0..16 {
                assert_eq!((0..16).filter(|&i| inc[i][j]).count(), 6, "node {j}");
            }
        }
    }

    #[test]
    fn self_duality_of_tangent_planes() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let tau = &taus()[0];
        let m = KummerModel::new(tau, &spec()).unwrap();
        for _ in 0..20 {
            let p = normalize(&level2_map(&random_z(&mut rng), tau, &spec()).unwrap());
            let u = normalize(&m.tangent_plane(&p));
            assert!(m.eval(&u).value.norm() <= 1e-6 * m.coeffs.eval_scale(&u));
            let d = m.discriminant(&u).unwrap();
            let generic = m.discriminant(&[c(1.0, 0.0), c(0.2, 0.1), c(-0.3, 0.0), c(0.5, 0.2)]).unwrap();
            assert!(d.value.value.norm() < 1e-10 * generic.value.value.norm());
        }
    }

    #[test]
    fn discriminant_is_homogeneous_of_degree_24() {
        let m = KummerModel::new(&taus()[1], &spec()).unwrap();
        let u = [c(1.0, 0.0), c(0.2, 0.1), c(-0.3, 0.0), c(0.5, 0.2)];
        let lam = c(1.3, -0.4);
        let a = m.discriminant(&u).unwrap().value.value;
        let b = m.discriminant(&u.map(|v| v * lam)).unwrap().value.value;
        assert!(rel_diff(b, a * lam.powu(24)) < 1e-12);
        assert_eq!(m.discriminant(&u).unwrap().constant_used, C22);
        assert!(m.discriminant(&[c(0.0, 0.0); 4]).is_err());
    }

    #[test]
    fn c22_is_2_8_c2_4() {
        let c2 = crate::siegel_forms::C2.value();
        assert!((C22.value() / (256.0 * c2.powi(4)) - 1.0).abs() < 1e-13);
    }
}
