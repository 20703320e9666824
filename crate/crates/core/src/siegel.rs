//! Points of the Siegel upper half space.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// A symmetric complex `g x g` matrix with positive-definite imaginary part.
///
/// Construction validates both conditions; symmetry is checked exactly as
/// stored. The smallest eigenvalue of `Im tau` is cached because every
/// truncation bound depends on it.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    tau: DMatrix<Complex64>,
    lambda_min: f64,
}

impl SiegelPoint {
    pub fn new(tau: DMatrix<Complex64>) -> Result<Self> {
        let g = tau.nrows();
        if g == 0 {
            return Err(Error::InvalidInput("genus must be positive".into()));
        }
        if tau.ncols() != g {
            return Err(Error::DimensionMismatch { expected: g, got: tau.ncols() });
        }
        for i in 0..g {
            for j in (i + 1)..g {
                let gap = (tau[(i, j)] - tau[(j, i)]).norm();
                if gap != 0.0 {
                    return Err(Error::NotSymmetric { i, j, gap });
                }
            }
        }
        for v in tau.iter() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::InvalidInput("non-finite entry in tau".into()));
            }
        }
        let im = tau.map(|z| z.im);
        check_positive_definite(&im)?;
        let lambda_min = SymmetricEigen::new(im).eigenvalues.min();
        if lambda_min <= 0.0 {
            return Err(Error::NonPositiveDefinite { pivot: lambda_min, threshold: 0.0 });
        }
        Ok(Self { tau, lambda_min })
    }

    /// Build from row slices, e.g. `&[&[a, b], &[b, c]]`.
    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let g = rows.len();
        for r in rows {
            if r.len() != g {
                return Err(Error::DimensionMismatch { expected: g, got: r.len() });
            }
        }
        Self::new(DMatrix::from_fn(g, g, |i, j| rows[i][j]))
    }

    pub fn genus1(tau: Complex64) -> Result<Self> {
        Self::new(DMatrix::from_element(1, 1, tau))
    }

    /// Block-diagonal point `diag(tau_1, ..., tau_g)`.
    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        let g = entries.len();
        Self::new(DMatrix::from_fn(g, g, |i, j| if i == j { entries[i] } else { Complex64::new(0.0, 0.0) }))
    }

    pub fn genus(&self) -> usize {
        self.tau.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.tau
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.tau[(i, j)]
    }

    pub fn imag(&self) -> DMatrix<f64> {
        self.tau.map(|z| z.im)
    }

    /// Smallest eigenvalue of `Im tau`.
    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn det_imag(&self) -> f64 {
        self.imag().determinant()
    }

    /// `c * tau` for a positive real scale.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.tau.map(|z| z * c))
    }

    /// Rejection sample: `Im tau` symmetric with all eigenvalues in
    /// `[0.8, 2.5]`, real parts uniform in `[-0.5, 0.5]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, g: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidInput("genus must be positive".into()));
        }
        loop {
            let mut im = DMatrix::<f64>::zeros(g, g);
            let mut re = DMatrix::<f64>::zeros(g, g);
            for i in 0..g {
                im[(i, i)] = rng.gen_range(0.8..2.5);
                re[(i, i)] = rng.gen_range(-0.5..0.5);
                for j in (i + 1)..g {
                    let v = rng.gen_range(-0.6..0.6);
                    im[(i, j)] = v;
                    im[(j, i)] = v;
                    let r = rng.gen_range(-0.5..0.5);
                    re[(i, j)] = r;
                    re[(j, i)] = r;
                }
            }
            let eig = SymmetricEigen::new(im.clone()).eigenvalues;
            if eig.min() >= 0.8 && eig.max() <= 2.5 {
                return Self::new(DMatrix::from_fn(g, g, |i, j| Complex64::new(re[(i, j)], im[(i, j)])));
            }
        }
    }
}

/// Cholesky-style elimination with pivot tolerance `1e-12 * max|m_ij|`.
fn check_positive_definite(m: &DMatrix<f64>) -> Result<()> {
    let n = m.nrows();
    let scale = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let threshold = 1e-12 * scale;
    if scale == 0.0 {
        return Err(Error::NonPositiveDefinite { pivot: 0.0, threshold });
    }
    let mut l = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > threshold) {
            return Err(Error::NonPositiveDefinite { pivot: d, threshold });
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(())
}
