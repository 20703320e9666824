//! Certified Riemann theta functions, genus-one and genus-two modular forms,
//! Kummer surface discriminants and analytic torsion of principally
//! polarized abelian varieties.
//!
//! Every series value is returned as a [`CertifiedComplex`]: the truncated
//! sum plus a rigorous bound on the omitted tail. Round-off is not tracked.

pub mod certified;
pub mod characteristic;
pub mod degeneration;
pub mod error;
pub mod fixtures;
pub mod kummer;
pub mod modular_g1;
pub mod siegel;
pub mod siegel_forms;
pub mod special;
pub mod theta;
pub mod torsion;

pub use certified::CertifiedComplex;
pub use characteristic::{Characteristic, Parity, Rational};
pub use error::{Error, Result};
pub use siegel::SiegelPoint;
pub use theta::{theta, theta_constant, theta_offdiag_deriv, theta_z_grad, TruncationSpec};
