use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric: |tau[{i}][{j}] - tau[{j}][{i}]| = {gap:e}")]
    NotSymmetric { i: usize, j: usize, gap: f64 },

    #[error("imaginary part is not positive definite (pivot {pivot:e} <= {threshold:e})")]
    NonPositiveDefinite { pivot: f64, threshold: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("truncation radius cap {max_radius} reached with tail bound {tail:e} > target {target:e}")]
    ToleranceUnreachable { max_radius: usize, tail: f64, target: f64 },

    #[error("operation requires genus {expected}, got genus {got}")]
    WrongGenus { expected: usize, got: usize },

    #[error("genus {0} is not supported by this operation")]
    UnsupportedGenus(usize),

    #[error("Epstein zeta has a pole at s = 1 (|s - 1| = {0:e})")]
    PoleAt1(f64),

    #[error("automorphy factor is singular: |det(C tau + D)| = {0:e}")]
    SingularFactor(f64),

    #[error("point lies on the discriminant locus: |chi_g| = {value:e} below {threshold:e}")]
    OnDiscriminantLocus { value: f64, threshold: f64 },

    #[error("orbit is degenerate: elements {0} and {1} coincide projectively")]
    DegenerateOrbit(usize, usize),

    #[error("matrix is not symplectic: {0}")]
    NotSymplectic(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
