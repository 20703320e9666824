//! Genus-g layer: the symplectic action, even characteristics, `chi_g`,
//! Petersson norms and the normalized discriminant forms `Delta_2`, `Delta_3`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::certified::CertifiedComplex;
use crate::characteristic::{Characteristic, Parity};
use crate::error::{Error, Result};
use crate::fixtures::zeta_prime_minus_one;
use crate::siegel::SiegelPoint;
use crate::theta::{theta_constant, TruncationSpec};

/// An integer `2g x 2g` matrix `(A, B; C, D)` with `M^t J M = J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticElement {
    g: usize,
    m: DMatrix<i64>,
}

impl SymplecticElement {
    pub fn new(m: DMatrix<i64>) -> Result<Self> {
        let n = m.nrows();
        if n == 0 || !n.is_multiple_of(2) || m.ncols() != n {
            return Err(Error::NotSymplectic(format!("shape {}x{}", m.nrows(), m.ncols())));
        }
        let g = n / 2;
        let j = Self::j_matrix(g);
        if m.transpose() * &j * &m != j {
            return Err(Error::NotSymplectic("M^t J M != J".into()));
        }
        Ok(Self { g, m })
    }

    pub fn from_blocks(a: &DMatrix<i64>, b: &DMatrix<i64>, c: &DMatrix<i64>, d: &DMatrix<i64>) -> Result<Self> {
        let g = a.nrows();
        for blk in [a, b, c, d] {
            if blk.nrows() != g || blk.ncols() != g {
                return Err(Error::DimensionMismatch { expected: g, got: blk.nrows().max(blk.ncols()) });
            }
        }
        let mut m = DMatrix::zeros(2 * g, 2 * g);
        m.view_mut((0, 0), (g, g)).copy_from(a);
        m.view_mut((0, g), (g, g)).copy_from(b);
        m.view_mut((g, 0), (g, g)).copy_from(c);
        m.view_mut((g, g), (g, g)).copy_from(d);
        Self::new(m)
    }

    fn j_matrix(g: usize) -> DMatrix<i64> {
        let mut j = DMatrix::zeros(2 * g, 2 * g);
        for i in 0..g {
            j[(i, g + i)] = -1;
            j[(g + i, i)] = 1;
        }
        j
    }

    pub fn identity(g: usize) -> Self {
        Self { g, m: DMatrix::identity(2 * g, 2 * g) }
    }

    /// `J = (0, -I; I, 0)`.
    pub fn j(g: usize) -> Self {
        Self { g, m: Self::j_matrix(g) }
    }

    /// `(I, B; 0, I)` for a symmetric integer `B`.
    pub fn translation(b: &DMatrix<i64>) -> Result<Self> {
        let g = b.nrows();
        if b != &b.transpose() {
            return Err(Error::NotSymplectic("translation block must be symmetric".into()));
        }
        let id = DMatrix::identity(g, g);
        Self::from_blocks(&id, b, &DMatrix::zeros(g, g), &id)
    }

    /// `J` and the translations by the elementary symmetric matrices
    /// `E_ii` and `E_ij + E_ji`.
    pub fn generators(g: usize) -> Vec<Self> {
        let mut out = vec![Self::j(g)];
        for i in 0..g {
            for k in i..g {
                let mut b = DMatrix::zeros(g, g);
                b[(i, k)] = 1;
                b[(k, i)] = 1;
                out.push(Self::translation(&b).expect("elementary symmetric block"));
            }
        }
        out
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn matrix(&self) -> &DMatrix<i64> {
        &self.m
    }

    fn block(&self, r: usize, c: usize) -> DMatrix<i64> {
        self.m.view((r * self.g, c * self.g), (self.g, self.g)).into_owned()
    }

    pub fn a(&self) -> DMatrix<i64> {
        self.block(0, 0)
    }
    pub fn b(&self) -> DMatrix<i64> {
        self.block(0, 1)
    }
    pub fn c(&self) -> DMatrix<i64> {
        self.block(1, 0)
    }
    pub fn d(&self) -> DMatrix<i64> {
        self.block(1, 1)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.g != other.g {
            return Err(Error::DimensionMismatch { expected: self.g, got: other.g });
        }
        Ok(Self { g: self.g, m: &self.m * &other.m })
    }

    /// Inverse `(D^t, -B^t; -C^t, A^t)`.
    pub fn inverse(&self) -> Self {
        let (a, b, c, d) = (self.a(), self.b(), self.c(), self.d());
        Self::from_blocks(&d.transpose(), &(-b.transpose()), &(-c.transpose()), &a.transpose()).expect("inverse of a symplectic matrix is symplectic")
    }

    /// Membership in the theta group: the diagonals of `A^t C` and `B^t D` are even.
    pub fn in_gamma12(&self) -> bool {
        let ac = self.a().transpose() * self.c();
        let bd = self.b().transpose() * self.d();
        (0..self.g).all(|i| ac[(i, i)].rem_euclid(2) == 0 && bd[(i, i)].rem_euclid(2) == 0)
    }

    fn complex_block(&self, r: usize, c: usize) -> DMatrix<Complex64> {
        self.block(r, c).map(|v| Complex64::new(v as f64, 0.0))
    }

    /// Automorphy factor `j(tau, gamma) = det(C tau + D)`.
    pub fn automorphy(&self, tau: &SiegelPoint) -> Result<Complex64> {
        self.check_genus(tau)?;
        Ok((self.complex_block(1, 0) * tau.matrix() + self.complex_block(1, 1)).determinant())
    }

    fn check_genus(&self, tau: &SiegelPoint) -> Result<()> {
        if tau.genus() != self.g {
            return Err(Error::DimensionMismatch { expected: self.g, got: tau.genus() });
        }
        Ok(())
    }
}

impl fmt::Display for SymplecticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.m.row_iter().map(|r| format!("[{}]", r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))).collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// `gamma . (z, tau) = ((C tau + D)^{-t} z, (A tau + B)(C tau + D)^{-1})`.
pub fn sympl_act(gamma: &SymplecticElement, z: &[Complex64], tau: &SiegelPoint) -> Result<(Vec<Complex64>, SiegelPoint)> {
    gamma.check_genus(tau)?;
    let g = tau.genus();
    if z.len() != g {
        return Err(Error::DimensionMismatch { expected: g, got: z.len() });
    }
    let t = tau.matrix();
    let ctd = gamma.complex_block(1, 0) * t + gamma.complex_block(1, 1);
    let det = ctd.determinant();
    if det.norm() < 1e-12 {
        return Err(Error::SingularFactor(det.norm()));
    }
    let inv = ctd.clone().try_inverse().ok_or(Error::SingularFactor(det.norm()))?;
    let num = gamma.complex_block(0, 0) * t + gamma.complex_block(0, 1);
    let image = num * &inv;
    // symmetric in exact arithmetic; remove the round-off asymmetry
    let image = (&image + image.transpose()) * Complex64::new(0.5, 0.0);
    let zv = DMatrix::from_column_slice(g, 1, z);
    let z_new = inv.transpose() * zv;
    Ok((z_new.iter().copied().collect(), SiegelPoint::new(image)?))
}

/// The even half-integer characteristics of genus `g`, ordered by label.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicTable {
    pub g: usize,
    pub evens: Vec<Characteristic>,
}

impl CharacteristicTable {
    pub fn new(g: usize) -> Result<Self> {
        if g == 0 || g > 8 {
            return Err(Error::UnsupportedGenus(g));
        }
        let mut evens = Vec::new();
        for bits in 0u32..(1 << (2 * g)) {
            let v: Vec<u8> = (0..2 * g).map(|k| ((bits >> (2 * g - 1 - k)) & 1) as u8).collect();
            let chr = Characteristic::from_half_bits(&v[..g], &v[g..])?;
            if chr.parity() == Some(Parity::Even) {
                evens.push(chr);
            }
        }
        Ok(Self { g, evens })
    }

    pub fn expected_count(g: usize) -> usize {
        (1usize << (g - 1)) * ((1usize << g) + 1)
    }
}

/// Product of the even theta constants.
pub fn chi_g(tau: &SiegelPoint, spec: &TruncationSpec) -> Result<CertifiedComplex> {
    let table = CharacteristicTable::new(tau.genus())?;
    let factors = table.evens.iter().map(|chr| theta_constant(chr, tau, spec)).collect::<Result<Vec<_>>>()?;
    Ok(CertifiedComplex::product(factors))
}

/// `(det Im tau)^weight |value|^2`.
pub fn petersson_norm_sq(value: Complex64, weight: Ratio<i64>, tau: &SiegelPoint) -> f64 {
    let w = weight.to_f64().unwrap_or(f64::NAN);
    tau.det_imag().powf(w) * value.norm_sqr()
}

/// A constant `2^p2 pi^ppi exp(k zeta'(-1))`, kept in symbolic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactConstant {
    pub pow2: i32,
    pub pow_pi: i32,
    pub zeta_prime_coeff: i32,
}

impl ExactConstant {
    pub fn value(&self) -> f64 {
        self.ln().exp()
    }

    pub fn ln(&self) -> f64 {
        self.pow2 as f64 * 2f64.ln() + self.pow_pi as f64 * PI.ln() + self.zeta_prime_coeff as f64 * zeta_prime_minus_one()
    }
}

impl fmt::Display for ExactConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{} pi^{} exp({} zeta'(-1))", self.pow2, self.pow_pi, self.zeta_prime_coeff)
    }
}

/// `C_2 = 2^-22 pi^-14 e^{12 zeta'(-1)}`.
pub const C2: ExactConstant = ExactConstant { pow2: -22, pow_pi: -14, zeta_prime_coeff: 12 };

/// Whether the overall scale of a normalized value is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Exact(ExactConstant),
    /// Defined only up to an undetermined positive constant.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaG {
    pub value: CertifiedComplex,
    pub scale: Scale,
}

/// `Delta_2 = C_2 chi_2` exactly; for genus 3 `chi_3` up to an unknown constant.
pub fn delta_g_normalized(tau: &SiegelPoint, spec: &TruncationSpec) -> Result<DeltaG> {
    match tau.genus() {
        2 => Ok(DeltaG { value: chi_g(tau, spec)?.scale_real(C2.value()), scale: Scale::Exact(C2) }),
        3 => Ok(DeltaG { value: chi_g(tau, spec)?, scale: Scale::Unknown }),
        g => Err(Error::UnsupportedGenus(g)),
    }
}

/// Petersson weight of `Delta_g`: `(g + 3) g! / 2`.
pub fn delta_g_weight(g: usize) -> Ratio<i64> {
    let fact: i64 = (1..=g as i64).product();
    Ratio::new((g as i64 + 3) * fact, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::rel_diff;
    use crate::modular_g1;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec() -> TruncationSpec {
        TruncationSpec::default()
    }

    fn sample_tau2() -> SiegelPoint {
        SiegelPoint::from_rows(&[&[c(0.1, 1.1), c(0.2, 0.1)], &[c(0.2, 0.1), c(-0.3, 1.3)]]).unwrap()
    }

    #[test]
    fn even_counts() {
        for g in 1..=3 {
            let t = CharacteristicTable::new(g).unwrap();
            assert_eq!(t.evens.len(), CharacteristicTable::expected_count(g));
        }
        assert_eq!(CharacteristicTable::expected_count(3), 36);
    }

    #[test]
    fn genus_two_even_set() {
        let labels: Vec<String> = CharacteristicTable::new(2).unwrap().evens.iter().map(|c| c.label().unwrap()).collect();
        let mut want = vec!["0000", "0001", "0010", "0011", "0100", "0110", "1000", "1001", "1100", "1111"];
        want.sort();
        assert_eq!(labels, want);
    }

    #[test]
    fn generators_are_symplectic() {
        for g in 1..=3 {
            for gen in SymplecticElement::generators(g) {
                assert!(SymplecticElement::new(gen.matrix().clone()).is_ok());
                assert_eq!(gen.mul(&gen.inverse()).unwrap(), SymplecticElement::identity(g));
            }
        }
        let mut bad = DMatrix::identity(4, 4);
        bad[(0, 1)] = 1;
        assert!(SymplecticElement::new(bad).is_err());
    }

    #[test]
    fn identity_and_translation_actions() {
        let tau = sample_tau2();
        let z = [c(0.1, 0.2), c(-0.3, 0.05)];
        let (z1, t1) = sympl_act(&SymplecticElement::identity(2), &z, &tau).unwrap();
        assert_eq!(z1, z.to_vec());
        assert!((t1.matrix() - tau.matrix()).norm() < 1e-15);
        let b = DMatrix::from_row_slice(2, 2, &[1, -2, -2, 3]);
        let (_, t2) = sympl_act(&SymplecticElement::translation(&b).unwrap(), &z, &tau).unwrap();
        let want = tau.matrix() + b.map(|v| c(v as f64, 0.0));
        assert!((t2.matrix() - want).norm() < 1e-14);
    }

    #[test]
    fn j_action_is_minus_inverse() {
        let tau = sample_tau2();
        let (_, t) = sympl_act(&SymplecticElement::j(2), &[c(0.0, 0.0); 2], &tau).unwrap();
        let want = -tau.matrix().clone().try_inverse().unwrap();
        assert!((t.matrix() - want).norm() < 1e-14);
    }

    fn random_word(rng: &mut ChaCha8Rng, g: usize, len: usize) -> SymplecticElement {
        let gens = SymplecticElement::generators(g);
        let mut w = SymplecticElement::identity(g);
        for _ in 0..len {
            let k = rng.gen_range(0..gens.len());
            let s = if rng.gen_bool(0.5) { gens[k].clone() } else { gens[k].inverse() };
            w = w.mul(&s).unwrap();
        }
        w
    }

    #[test]
    fn det_imag_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tau = sample_tau2();
        for _ in 0..20 {
            let gamma = random_word(&mut rng, 2, 6);
            let (_, t) = sympl_act(&gamma, &[c(0.0, 0.0); 2], &tau).unwrap();
            let j = gamma.automorphy(&tau).unwrap();
            let want = tau.det_imag() / j.norm_sqr();
            assert!((t.det_imag() - want).abs() / want < 1e-10);
        }
    }

    #[test]
    fn gamma12_closed_under_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let two = |i: usize, k: usize| {
            let mut b = DMatrix::zeros(2, 2);
            b[(i, k)] += 1;
            b[(k, i)] += 1;
            SymplecticElement::translation(&b).unwrap()
        };
        let members = vec![SymplecticElement::j(2), two(0, 1), two(0, 0).mul(&two(0, 0)).unwrap(), two(1, 1).mul(&two(1, 1)).unwrap()];
        for m in &members {
            assert!(m.in_gamma12());
        }
        assert!(!SymplecticElement::generators(2)[1].in_gamma12());
        for _ in 0..200 {
            let mut w = SymplecticElement::identity(2);
            for _ in 0..rng.gen_range(1..8) {
                let m = &members[rng.gen_range(0..members.len())];
                w = w.mul(if rng.gen_bool(0.5) { m } else { &members[0] }).unwrap();
            }
            assert!(w.in_gamma12());
        }
    }

    #[test]
    fn chi_1_matches_genus_one_layer() {
        let t = c(0.2, 1.3);
        let a = chi_g(&SiegelPoint::genus1(t).unwrap(), &spec()).unwrap();
        let b = modular_g1::chi1(t, &spec()).unwrap();
        assert!(rel_diff(a.value, b.value) < 1e-14);
    }

    #[test]
    fn chi_2_vanishes_on_diagonal() {
        let tau = SiegelPoint::diagonal(&[c(0.1, 1.2), c(0.0, 0.9)]).unwrap();
        let v = chi_g(&tau, &spec()).unwrap();
        // the odd factor cancels pairwise, so only round-off survives
        assert!(v.value.norm() < 1e-15);
        let d = delta_g_normalized(&tau, &spec()).unwrap();
        assert!(d.value.value.norm() < 1e-15 * C2.value());
    }

    #[test]
    fn chi_2_character_on_generators() {
        let tau = sample_tau2();
        let chi = chi_g(&tau, &spec()).unwrap().value;
        let measured: Vec<i64> = SymplecticElement::generators(2)
            .iter()
            .map(|gamma| {
                let (_, t) = sympl_act(gamma, &[c(0.0, 0.0); 2], &tau).unwrap();
                let lhs = chi_g(&t, &spec()).unwrap().value;
                let ratio = lhs / (gamma.automorphy(&tau).unwrap().powu(5) * chi);
                assert!((ratio.norm() - 1.0).abs() < 1e-10, "{ratio}");
                assert!(ratio.im.abs() < 1e-10);
                ratio.re.round() as i64
            })
            .collect();
        // generator order: J, T(E11), T(E12 + E21), T(E22)
        let f = &crate::fixtures::fixtures().measured.chi2_generator_characters;
        assert_eq!(measured, vec![f[0] as i64, f[1] as i64, f[3] as i64, f[2] as i64]);
    }

    #[test]
    fn chi_2_petersson_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let tau = sample_tau2();
        let w = Ratio::from_integer(5);
        let base = petersson_norm_sq(chi_g(&tau, &spec()).unwrap().value, w, &tau);
        for _ in 0..10 {
            let gamma = random_word(&mut rng, 2, 4);
            let (_, t) = sympl_act(&gamma, &[c(0.0, 0.0); 2], &tau).unwrap();
            let n = petersson_norm_sq(chi_g(&t, &spec()).unwrap().value, w, &t);
            assert!((n - base).abs() / base < 1e-8);
        }
    }

    #[test]
    fn delta_petersson_invariance_genus_one() {
        let tau = SiegelPoint::genus1(c(0.0, 2.0)).unwrap();
        let (_, t) = sympl_act(&SymplecticElement::j(1), &[c(0.0, 0.0)], &tau).unwrap();
        let w = Ratio::from_integer(12);
        let a = petersson_norm_sq(modular_g1::delta(tau.get(0, 0)).unwrap().value, w, &tau);
        let b = petersson_norm_sq(modular_g1::delta(t.get(0, 0)).unwrap().value, w, &t);
        assert!((a - b).abs() / a < 1e-10);
        assert_eq!(petersson_norm_sq(c(3.0, 4.0), Ratio::from_integer(0), &tau), 25.0);
    }

    #[test]
    fn normalized_delta_scale() {
        let tau = sample_tau2();
        let d = delta_g_normalized(&tau, &spec()).unwrap();
        let chi = chi_g(&tau, &spec()).unwrap();
        let want = 2f64.powi(-22) * PI.powi(-14) * (12.0 * -0.165_421_143_700_450_93f64).exp();
        assert!(((d.value.value / chi.value).re - want).abs() / want < 1e-14);
        assert_eq!(d.scale, Scale::Exact(C2));
        let t3 = SiegelPoint::diagonal(&[c(0.0, 1.0), c(0.0, 1.1), c(0.0, 1.2)]).unwrap();
        assert_eq!(delta_g_normalized(&t3, &spec()).unwrap().scale, Scale::Unknown);
        let t1 = SiegelPoint::genus1(c(0.0, 1.0)).unwrap();
        assert!(matches!(delta_g_normalized(&t1, &spec()), Err(Error::UnsupportedGenus(1))));
        assert_eq!(delta_g_weight(2), Ratio::from_integer(5));
        assert_eq!(delta_g_weight(3), Ratio::from_integer(18));
    }
}
