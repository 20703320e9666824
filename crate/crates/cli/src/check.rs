use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use siegel_theta::certified::rel_diff;
use siegel_theta::characteristic::Rational;
use siegel_theta::degeneration::{appendix_battery, check_divergence_exponent, DegenerationFamily, ResidualReport};
use siegel_theta::fixtures::{fixtures, tolerances};
use siegel_theta::kummer::{discriminant_2_2, level2_map, normalize, HeisenbergElement, KummerModel};
use siegel_theta::modular_g1::{chi1, delta, eisenstein_g2_g3, epstein_zeta_deriv0};
use siegel_theta::siegel_forms::{chi_g, delta_g_normalized, petersson_norm_sq, sympl_act, SymplecticElement};
use siegel_theta::torsion::{gram_diagonal_exact, l2_gram_quadrature, torsion_theta_divisor};
use siegel_theta::{theta, Characteristic, Error, SiegelPoint, TruncationSpec};

use crate::report::CheckRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    #[value(name = "g1-identities")]
    G1Identities,
    #[value(name = "siegel-covariance")]
    SiegelCovariance,
    #[value(name = "kummer")]
    Kummer,
    #[value(name = "degeneration")]
    Degeneration,
    #[value(name = "torsion")]
    Torsion,
    #[value(name = "all")]
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::G1Identities => "g1-identities",
            Suite::SiegelCovariance => "siegel-covariance",
            Suite::Kummer => "kummer",
            Suite::Degeneration => "degeneration",
            Suite::Torsion => "torsion",
            Suite::All => "all",
        }
    }

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::G1Identities, Suite::SiegelCovariance, Suite::Kummer, Suite::Degeneration, Suite::Torsion],
            s => vec![s],
        }
    }

    /// Each suite draws from its own stream so a suite run alone matches its
    /// part of `all`.
    fn rng(self, seed: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        r.set_stream(self as u64 + 1);
        r
    }
}

pub struct CheckConfig {
    pub seed: u64,
    pub spec: TruncationSpec,
    /// Genus-one base points for the degeneration suite.
    pub degeneration_taus: Vec<(String, Complex64)>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Case `k` of the identity `tag`.
fn case(tag: &str, k: usize, residual: f64, tolerance: f64) -> CheckRecord {
    CheckRecord { id: format!("{tag}/{k}"), paper_ref: tag.into(), residual, tolerance, pass: residual <= tolerance }
}

fn from_report(r: &ResidualReport, base: &str) -> CheckRecord {
    CheckRecord { id: format!("{}@{base}", r.id), paper_ref: r.id.clone(), residual: r.residual, tolerance: r.tolerance, pass: r.pass }
}

fn random_tau1(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..2.5))
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> SymplecticElement {
    let gens = SymplecticElement::generators(2);
    let mut w = SymplecticElement::identity(2);
    for _ in 0..len {
        let g = &gens[rng.gen_range(0..gens.len())];
        let s = if rng.gen_bool(0.5) { g.clone() } else { g.inverse() };
        w = w.mul(&s).expect("generators share a genus");
    }
    w
}

fn g1_identities(rng: &mut ChaCha8Rng, spec: &TruncationSpec) -> Result<Vec<CheckRecord>, Error> {
    let tol = tolerances();
    let mut out = Vec::new();
    let mut k = 0;
    for x in [-0.4, 0.0, 0.4] {
        for y in [0.8, 1.2, 2.0] {
            let t = c(x, y);
            let (g2, g3) = eisenstein_g2_g3(t)?;
            let lhs = g2.value.powu(3) - 27.0 * g3.value.powu(2);
            let rhs = (2.0 * PI).powi(12) * delta(t)?.value;
            out.push(case("jacobi-discriminant", k, rel_diff(lhs, rhs), tol.jacobi_discriminant));
            k += 1;
        }
    }
    for k in 0..20 {
        let t = random_tau1(rng);
        let lhs = chi1(t, spec)?.value.powu(8);
        out.push(case("chi1-eighth-power", k, rel_diff(lhs, 256.0 * delta(t)?.value), tol.chi1_eighth_power));
    }
    for (k, t) in [c(0.0, 1.0), c(1.0, 2.0), c(0.4, 1.1)].into_iter().enumerate() {
        let lhs = epstein_zeta_deriv0(t)?.value.re.exp();
        let norm = (t.im.powi(12) * delta(t)?.value.norm_sqr()).powf(-1.0 / 12.0);
        let stated = (2.0 * PI).powi(2) * norm;
        out.push(case("kronecker-limit", k, (lhs - stated).abs() / stated, tol.kronecker_limit));
        out.push(case("kronecker-limit-normalized", k, (lhs - norm).abs() / norm, tol.kronecker_limit));
    }
    Ok(out)
}

fn siegel_covariance(rng: &mut ChaCha8Rng, spec: &TruncationSpec) -> Result<Vec<CheckRecord>, Error> {
    let tol = tolerances();
    let mut out = Vec::new();
    let tau = SiegelPoint::random(rng, 2)?;
    let w5 = Ratio::from_integer(5);
    let chi = chi_g(&tau, spec)?.value;
    let base = petersson_norm_sq(chi, w5, &tau);
    for k in 0..10 {
        let gamma = random_word(rng, 6);
        let (_, t) = sympl_act(&gamma, &[c(0.0, 0.0); 2], &tau)?;
        let j = gamma.automorphy(&tau)?;
        let want = tau.det_imag() / j.norm_sqr();
        out.push(case("det-imag-covariance", k, (t.det_imag() - want).abs() / want, tol.det_imag_covariance));
        let n = petersson_norm_sq(chi_g(&t, spec)?.value, w5, &t);
        out.push(case("chi2-petersson-invariance", k, (n - base).abs() / base, tol.petersson_invariance));
    }
    // generator order J, T(E11), T(E12+E21), T(E22); fixture order J, T(E11), T(E22), T(E12+E21)
    let chars = fixtures().measured.chi2_generator_characters;
    let expected = [chars[0], chars[1], chars[3], chars[2]];
    for (k, gamma) in SymplecticElement::generators(2).iter().enumerate() {
        let (_, t) = sympl_act(gamma, &[c(0.0, 0.0); 2], &tau)?;
        let ratio = chi_g(&t, spec)?.value / (gamma.automorphy(&tau)?.powu(5) * chi);
        out.push(case("chi2-generator-character", k, (ratio - expected[k] as f64).norm(), 1e-10));
    }
    for k in 0..100 {
        let g = rng.gen_range(1..=3);
        let t = SiegelPoint::random(rng, g)?;
        let mut entry = || {
            let d = rng.gen_range(1..=4i64);
            Rational::new(rng.gen_range(0..d), d)
        };
        let a: Vec<Rational> = (0..g).map(|_| entry()).collect();
        let b: Vec<Rational> = (0..g).map(|_| entry()).collect();
        let chr = Characteristic::new(a, b)?;
        let z: Vec<Complex64> = (0..g).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5))).collect();
        let loose = theta(&chr, &z, &t, &TruncationSpec { target_abs_tol: 1e-8, ..*spec })?;
        let tight = theta(&chr, &z, &t, &TruncationSpec { target_abs_tol: 1e-14, ..*spec })?;
        out.push(case("certified-truncation", k, (loose.value - tight.value).norm(), 1e-8 + tol.certification_slack));
    }
    Ok(out)
}

fn kummer(rng: &mut ChaCha8Rng, spec: &TruncationSpec) -> Result<Vec<CheckRecord>, Error> {
    let tol = tolerances();
    let mut out = Vec::new();
    let mut e = [c(0.0, 0.0); 4];
    e[fixtures().measured.unit_vector] = c(1.0, 0.0);
    for k in 0..3 {
        let tau = SiegelPoint::random(rng, 2)?;
        let model = KummerModel::new(&tau, spec)?;
        let (mut image, mut heis): (f64, f64) = (0.0, 0.0);
        for _ in 0..50 {
            let z = [c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.3..0.3)), c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.3..0.3))];
            let p = normalize(&level2_map(&z, &tau, spec)?);
            image = image.max(model.eval(&p).value.norm() / model.coeffs.eval_scale(&p));
            let w = [c(rng.gen_range(-1.0..1.0), 0.0), c(rng.gen_range(-1.0..1.0), 0.0), c(0.0, rng.gen_range(-1.0..1.0)), c(1.0, 0.0)];
            let f = model.eval(&w).value;
            for s in HeisenbergElement::all() {
                heis = heis.max((model.eval(&s.apply(&w)).value - f).norm() / model.coeffs.eval_scale(&w));
            }
        }
        let (mut node_f, mut node_grad): (f64, f64) = (0.0, 0.0);
        for n in &model.nodes {
            let n = normalize(n);
            node_f = node_f.max(model.eval(&n).value.norm() / model.coeffs.eval_scale(&n));
            let g = model.coeffs.gradient(&n).iter().map(|v| v.norm()).fold(0.0, f64::max);
            node_grad = node_grad.max(g / model.coeffs.gradient_scale(&n));
        }
        out.push(case("kummer-on-image", k, image, tol.kummer_vanishing));
        out.push(case("kummer-node-value", k, node_f, tol.kummer_vanishing));
        out.push(case("kummer-node-gradient", k, node_grad, tol.kummer_vanishing));
        out.push(case("heisenberg-invariance", k, heis, 1e-12));
    }
    for k in 0..5 {
        let tau = SiegelPoint::random(rng, 2)?;
        let model = KummerModel::new(&tau, spec)?;
        let f = model.eval(&e).value;
        let lhs = f * f * model.g_product(&e).value;
        let rhs = chi_g(&tau.scaled(2.0)?, spec)?.value.powu(4);
        out.push(case("f2g-unit-vector", k, rel_diff(lhs, rhs), tol.f2g_unit_vector));
    }
    for k in 0..3 {
        let tau = SiegelPoint::random(rng, 2)?;
        let lhs = discriminant_2_2(&e, &tau, spec)?.value.value;
        let d2 = delta_g_normalized(&tau.scaled(2.0)?, spec)?.value.value;
        out.push(case("discriminant-consistency", k, rel_diff(lhs, 256.0 * d2.powu(4)), tol.discriminant_consistency));
    }
    Ok(out)
}

fn degeneration(cfg: &CheckConfig) -> Result<Vec<CheckRecord>, Error> {
    let mut out = Vec::new();
    for (text, base) in &cfg.degeneration_taus {
        for r in appendix_battery(*base, &cfg.spec)? {
            out.push(from_report(&r, text));
        }
        let fam = DegenerationFamily::with_default_samples(*base)?;
        out.push(from_report(&check_divergence_exponent(&fam, &cfg.spec)?, text));
    }
    Ok(out)
}

fn torsion(rng: &mut ChaCha8Rng, spec: &TruncationSpec) -> Result<Vec<CheckRecord>, Error> {
    let tol = tolerances();
    let mut out = Vec::new();
    let tau = c(0.0, 1.0);
    for m in [1, 2] {
        let g = l2_gram_quadrature(m, tau, 800)?.matrix;
        let want = gram_diagonal_exact(m, tau);
        for a in 0..m {
            for b in 0..m {
                if a == b {
                    out.push(case(&format!("gram-diagonal-m{m}"), a, (g[(a, b)] - want).norm(), tol.gram_diagonal));
                } else {
                    out.push(case(&format!("gram-offdiagonal-m{m}"), a * m + b, g[(a, b)].norm(), tol.gram_offdiagonal));
                }
            }
        }
    }
    let t0 = SiegelPoint::random(rng, 2)?;
    let base = torsion_theta_divisor(&t0, spec)?.value;
    for k in 0..10 {
        let gamma = random_word(rng, 6);
        let (_, t) = sympl_act(&gamma, &[c(0.0, 0.0); 2], &t0)?;
        let v = torsion_theta_divisor(&t, spec)?.value;
        out.push(case("theta-divisor-torsion-invariance", k, (v - base).abs() / base, tol.torsion_invariance));
    }
    Ok(out)
}

pub fn run(suite: Suite, cfg: &CheckConfig) -> Result<Vec<CheckRecord>, Error> {
    let mut out = Vec::new();
    for s in suite.expand() {
        let mut rng = s.rng(cfg.seed);
        out.extend(match s {
            Suite::G1Identities => g1_identities(&mut rng, &cfg.spec)?,
            Suite::SiegelCovariance => siegel_covariance(&mut rng, &cfg.spec)?,
            Suite::Kummer => kummer(&mut rng, &cfg.spec)?,
            Suite::Degeneration => degeneration(cfg)?,
            Suite::Torsion => torsion(&mut rng, &cfg.spec)?,
            Suite::All => unreachable!("expanded above"),
        });
    }
    Ok(out)
}
