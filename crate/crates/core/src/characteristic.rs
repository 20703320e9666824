//! Theta characteristics `(a, b)` stored as exact rationals reduced mod 1.

use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// A pair of rational `g`-vectors, each entry reduced to `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Characteristic {
    a: Vec<Rational>,
    b: Vec<Rational>,
}

fn reduce(r: Rational) -> Rational {
    r - r.floor()
}

impl Characteristic {
    pub fn new(a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
        }
        if a.is_empty() {
            return Err(Error::InvalidInput("characteristic of genus 0".into()));
        }
        Ok(Self { a: a.into_iter().map(reduce).collect(), b: b.into_iter().map(reduce).collect() })
    }

    pub fn zero(g: usize) -> Self {
        Self { a: vec![Rational::zero(); g], b: vec![Rational::zero(); g] }
    }

    /// Half-integer characteristic from bits: `a_i = a_bits[i]/2`, `b_i = b_bits[i]/2`.
    pub fn from_half_bits(a_bits: &[u8], b_bits: &[u8]) -> Result<Self> {
        let to = |v: &[u8]| v.iter().map(|&x| Rational::new(x as i64, 2)).collect::<Vec<_>>();
        Self::new(to(a_bits), to(b_bits))
    }

    /// Parse the compact label `a_1..a_g b_1..b_g` of half-integer bits,
    /// e.g. `"1100"` is `a = (1/2, 1/2), b = (0, 0)`.
    pub fn from_label(label: &str) -> Result<Self> {
        let bits: Vec<u8> = label
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidInput(format!("bad characteristic digit {other:?}"))),
            })
            .collect::<Result<_>>()?;
        if bits.is_empty() || !bits.len().is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("characteristic label {label:?} must have even length")));
        }
        let g = bits.len() / 2;
        Self::from_half_bits(&bits[..g], &bits[g..])
    }

    pub fn genus(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn a_f64(&self) -> Vec<f64> {
        self.a.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn b_f64(&self) -> Vec<f64> {
        self.b.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn is_half_integer(&self) -> bool {
        self.a.iter().chain(self.b.iter()).all(|r| 2 % r.denom() == 0)
    }

    /// `4 a.b mod 2`; defined only for half-integer characteristics.
    pub fn parity(&self) -> Option<Parity> {
        if !self.is_half_integer() {
            return None;
        }
        let four_ab: Rational = self.a.iter().zip(&self.b).map(|(x, y)| x * y).sum::<Rational>() * Rational::from_integer(4);
        debug_assert!(four_ab.is_integer());
        Some(if four_ab.to_integer().rem_euclid(2) == 0 { Parity::Even } else { Parity::Odd })
    }

    /// Compact bit label for half-integer characteristics.
    pub fn label(&self) -> Option<String> {
        if !self.is_half_integer() {
            return None;
        }
        Some(self.a.iter().chain(self.b.iter()).map(|r| if r.is_zero() { '0' } else { '1' }).collect())
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = self.label() {
            return write!(f, "[{l}]");
        }
        let show = |v: &[Rational]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "[({});({})]", show(&self.a), show(&self.b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn label_round_trip_and_parity() {
        let c = Characteristic::from_label("1111").unwrap();
        assert_eq!(c.label().unwrap(), "1111");
        assert_eq!(c.parity(), Some(Parity::Even));
        assert_eq!(Characteristic::from_label("11").unwrap().parity(), Some(Parity::Odd));
        assert_eq!(Characteristic::from_label("1001").unwrap().parity(), Some(Parity::Even));
        assert_eq!(Characteristic::from_label("1010").unwrap().parity(), Some(Parity::Odd));
    }

    #[test]
    fn reduces_mod_one() {
        let c = Characteristic::new(vec![Rational::new(-1, 3)], vec![Rational::new(7, 4)]).unwrap();
        assert_eq!(c.a()[0], Rational::new(2, 3));
        assert_eq!(c.b()[0], Rational::new(3, 4));
        assert_eq!(c.parity(), None);
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(Characteristic::from_label("101").is_err());
        assert!(Characteristic::from_label("12").is_err());
        assert!(Characteristic::new(vec![Rational::zero()], vec![]).is_err());
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent(n in -50i64..50, d in 1i64..9, m in -50i64..50, e in 1i64..9) {
            let c = Characteristic::new(vec![Rational::new(n, d)], vec![Rational::new(m, e)]).unwrap();
            let again = Characteristic::new(c.a().to_vec(), c.b().to_vec()).unwrap();
            prop_assert_eq!(&c, &again);
            prop_assert!(c.a()[0] >= Rational::zero() && c.a()[0] < Rational::from_integer(1));
        }
    }
}
