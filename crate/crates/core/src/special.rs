//! Complex Gamma, upper incomplete Gamma and the exponential integral.

use std::f64::consts::PI;

use num_complex::Complex64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Gamma function on the complex plane (Lanczos, reflection for `Re z < 1/2`).
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        PI / ((z * PI).sin() * gamma(1.0 - z))
    } else {
        let z = z - 1.0;
        let mut x = c(LANCZOS[0], 0.0);
        for (i, p) in LANCZOS.iter().enumerate().skip(1) {
            x += *p / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
    }
}

/// `1 / Gamma(z)`, entire; exact zeros at the nonpositive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        (z * PI).sin() * gamma(1.0 - z) / PI
    } else {
        1.0 / gamma(z)
    }
}

/// Exponential integral `E1(x) = Gamma(0, x)` for `x > 0`.
pub fn expint_e1(x: f64) -> f64 {
    assert!(x > 0.0, "E1 needs x > 0");
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            term *= -x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() - sum
    } else {
        // modified Lentz on the continued fraction
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut cc = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            cc = b + an / cc;
            let del = cc * d;
            h *= del;
            if (del - 1.0).abs() < 1e-17 {
                break;
            }
        }
        h * (-x).exp()
    }
}

fn gamma_upper_cf(a: Complex64, x: f64) -> Complex64 {
    // complex division squares the modulus, keep the floor well above 1e-154
    let tiny = c(1e-100, 0.0);
    let mut b = c(x + 1.0, 0.0) - a;
    let mut cc = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..20_000 {
        let fi = i as f64;
        let an = -fi * (c(fi, 0.0) - a);
        b += 2.0;
        d = an * d + b;
        if d.norm() < 1e-100 {
            d = tiny;
        }
        cc = b + an / cc;
        if cc.norm() < 1e-100 {
            cc = tiny;
        }
        d = 1.0 / d;
        let del = d * cc;
        h *= del;
        if (del - 1.0).norm() < 1e-17 {
            break;
        }
    }
    (-x).exp() * c(x, 0.0).powc(a) * h
}

fn gamma_lower_series(a: Complex64, x: f64) -> Complex64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..10_000 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.norm() < sum.norm() * 1e-17 {
            break;
        }
    }
    sum * (-x).exp() * c(x, 0.0).powc(a)
}

/// Upper incomplete Gamma `Gamma(s, x) = int_x^inf t^(s-1) e^(-t) dt`, `x > 0`.
pub fn gamma_upper(s: Complex64, x: f64) -> Complex64 {
    assert!(x > 0.0, "incomplete gamma needs x > 0");
    let nonpos_int = s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0;
    if nonpos_int {
        let k = (-s.re) as i64;
        let mut g = c(expint_e1(x), 0.0);
        for j in 1..=k {
            let a = -(j as f64);
            g = (g - x.powf(a) * (-x).exp()) / a;
        }
        return g;
    }
    if x > 1.0 + s.re.max(0.0) {
        return gamma_upper_cf(s, x);
    }
    let shift = if s.re < 0.5 { (0.5 - s.re).ceil() as usize } else { 0 };
    let top = s + shift as f64;
    let mut g = gamma(top) - gamma_lower_series(top, x);
    for j in (0..shift).rev() {
        let a = s + j as f64;
        g = (g - c(x, 0.0).powc(a) * (-x).exp()) / a;
    }
    g
}
