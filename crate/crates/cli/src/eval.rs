use num_complex::Complex64;
use siegel_theta::kummer::{discriminant_2_2, KummerModel};
use siegel_theta::modular_g1::{delta, eisenstein_g2_g3, epstein_zeta, epstein_zeta_deriv0};
use siegel_theta::siegel_forms::{chi_g, delta_g_normalized, Scale};
use siegel_theta::torsion::{torsion_abelian, torsion_theta_divisor, PolarizedTorus};
use siegel_theta::{theta, CertifiedComplex, Characteristic, Error, SiegelPoint, TruncationSpec};

use crate::report::EvalRecord;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Quantity {
    #[value(name = "theta")]
    Theta,
    #[value(name = "chi_g")]
    ChiG,
    #[value(name = "delta")]
    Delta,
    #[value(name = "g2g3")]
    G2G3,
    #[value(name = "epstein")]
    Epstein,
    #[value(name = "kummer_coeffs")]
    KummerCoeffs,
    #[value(name = "G")]
    G,
    #[value(name = "Delta_2_2")]
    Delta22,
    #[value(name = "torsion_elliptic")]
    TorsionElliptic,
    #[value(name = "torsion_abelian")]
    TorsionAbelian,
    #[value(name = "torsion_theta_divisor")]
    TorsionThetaDivisor,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Theta => "theta",
            Quantity::ChiG => "chi_g",
            Quantity::Delta => "delta",
            Quantity::G2G3 => "g2g3",
            Quantity::Epstein => "epstein",
            Quantity::KummerCoeffs => "kummer_coeffs",
            Quantity::G => "G",
            Quantity::Delta22 => "Delta_2_2",
            Quantity::TorsionElliptic => "torsion_elliptic",
            Quantity::TorsionAbelian => "torsion_abelian",
            Quantity::TorsionThetaDivisor => "torsion_theta_divisor",
        }
    }

    fn needs_u(self) -> bool {
        matches!(self, Quantity::G | Quantity::Delta22)
    }
}

/// A validated input literal together with the text it came from.
#[derive(Debug, Clone)]
pub struct Labeled<T> {
    pub text: String,
    pub value: T,
}

#[derive(Debug, Clone)]
pub struct EvalInputs {
    pub quantities: Vec<Quantity>,
    pub taus: Vec<Labeled<SiegelPoint>>,
    pub us: Vec<Labeled<[Complex64; 4]>>,
    pub zs: Vec<Labeled<Vec<Complex64>>>,
    pub chars: Vec<Labeled<Characteristic>>,
    pub ss: Vec<Labeled<Complex64>>,
    pub ms: Vec<i64>,
}

fn genus1(tau: &SiegelPoint) -> Result<Complex64, Error> {
    if tau.genus() != 1 {
        return Err(Error::WrongGenus { expected: 1, got: tau.genus() });
    }
    Ok(tau.get(0, 0))
}

fn record(q: Quantity, inputs: Vec<(String, String)>, v: CertifiedComplex) -> EvalRecord {
    EvalRecord { quantity: q.name().into(), inputs, value_re: v.value.re, value_im: v.value.im, err: Some(v.err) }
}

fn real_record(q: Quantity, inputs: Vec<(String, String)>, v: f64, err: Option<f64>) -> EvalRecord {
    EvalRecord { quantity: q.name().into(), inputs, value_re: v, value_im: 0.0, err }
}

fn with(base: &[(String, String)], k: &str, v: &str) -> Vec<(String, String)> {
    let mut out = base.to_vec();
    out.push((k.into(), v.into()));
    out
}

fn scale_tag(s: Scale) -> &'static str {
    match s {
        Scale::Exact(_) => "exact",
        Scale::Unknown => "unknown",
    }
}

fn eval_one(q: Quantity, tau: &Labeled<SiegelPoint>, inp: &EvalInputs, spec: &TruncationSpec, out: &mut Vec<EvalRecord>) -> Result<(), Error> {
    let base = vec![("tau".to_string(), tau.text.clone())];
    let t = &tau.value;
    match q {
        Quantity::Theta => {
            let default_char = [Labeled { text: "0".repeat(2 * t.genus()), value: Characteristic::zero(t.genus()) }];
            let default_z = [Labeled { text: "0".into(), value: vec![Complex64::new(0.0, 0.0); t.genus()] }];
            let chars = if inp.chars.is_empty() { &default_char[..] } else { &inp.chars[..] };
            let zs = if inp.zs.is_empty() { &default_z[..] } else { &inp.zs[..] };
            for c in chars {
                for z in zs {
                    let v = theta(&c.value, &z.value, t, spec)?;
                    out.push(record(q, with(&with(&base, "char", &c.text), "z", &z.text), v));
                }
            }
        }
        Quantity::ChiG => out.push(record(q, base, chi_g(t, spec)?)),
        Quantity::Delta => {
            if t.genus() == 1 {
                out.push(record(q, base, delta(t.get(0, 0))?));
            } else {
                let d = delta_g_normalized(t, spec)?;
                out.push(record(q, with(&base, "scale", scale_tag(d.scale)), d.value));
            }
        }
        Quantity::G2G3 => {
            let (g2, g3) = eisenstein_g2_g3(genus1(t)?)?;
            out.push(record(q, with(&base, "component", "g2"), g2));
            out.push(record(q, with(&base, "component", "g3"), g3));
        }
        Quantity::Epstein => {
            let tau1 = genus1(t)?;
            if inp.ss.is_empty() {
                let d = epstein_zeta_deriv0(tau1)?;
                out.push(record(q, with(&base, "component", "derivative at s=0"), d));
            }
            for s in &inp.ss {
                out.push(record(q, with(&base, "s", &s.text), epstein_zeta(tau1, s.value)?));
            }
        }
        Quantity::KummerCoeffs => {
            let model = KummerModel::new(t, spec)?;
            for (name, v) in ["A", "B", "C", "D", "E"].iter().zip(model.coeffs.as_array()) {
                out.push(record(q, with(&base, "component", name), v));
            }
        }
        Quantity::G | Quantity::Delta22 => {
            let model = KummerModel::new(t, spec)?;
            for u in &inp.us {
                let v = if q == Quantity::G { model.g_product(&u.value) } else { discriminant_2_2(&u.value, t, spec)?.value };
                out.push(record(q, with(&base, "u", &u.text), v));
            }
        }
        Quantity::TorsionElliptic => {
            let d = epstein_zeta_deriv0(genus1(t)?)?;
            let v = d.value.re.exp();
            out.push(real_record(q, base, v, Some(v * d.err.exp_m1())));
        }
        Quantity::TorsionAbelian => {
            for &m in &inp.ms {
                let v = torsion_abelian(&PolarizedTorus::new(t.clone(), m));
                out.push(real_record(q, with(&with(&base, "m", &m.to_string()), "component", "log"), v, None));
            }
        }
        Quantity::TorsionThetaDivisor => {
            let v = torsion_theta_divisor(t, spec)?;
            out.push(real_record(q, with(&base, "scale", scale_tag(v.scale)), v.value, None));
        }
    }
    Ok(())
}

pub fn run(inp: &EvalInputs, spec: &TruncationSpec) -> Result<Vec<EvalRecord>, CliError> {
    if inp.quantities.iter().any(|q| q.needs_u()) && inp.us.is_empty() {
        return Err(CliError::Usage("quantities G and Delta_2_2 need at least one --u".into()));
    }
    let mut out = Vec::new();
    for &q in &inp.quantities {
        for tau in &inp.taus {
            eval_one(q, tau, inp, spec, &mut out).map_err(CliError::from)?;
        }
    }
    if spec.strict {
        if let Some(r) = out.iter().find(|r| r.err.is_some_and(|e| !(e <= spec.target_abs_tol * r.value_re.hypot(r.value_im).max(1.0)))) {
            return Err(CliError::Strict(format!(
                "{} at {:?}: error bound {:e} exceeds tolerance {:e}",
                r.quantity,
                r.inputs,
                r.err.unwrap_or(f64::NAN),
                spec.target_abs_tol
            )));
        }
    }
    Ok(out)
}
