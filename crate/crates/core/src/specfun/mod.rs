//! Special functions and integrals of the Kuznetsov kernel.

pub mod bessel;
pub mod gamma;
pub mod mellin;
pub mod ode;
pub mod oscillatory;
pub mod quad;
pub mod whittaker;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use bessel::bessel_j_imag_order;
pub use gamma::{digamma, log_gamma};
pub use mellin::{mellin_barnes_direct, mellin_barnes_g};
pub use oscillatory::{g_kappa, g_kappa_xi, i_kappa, i_kappa_contour};
pub use whittaker::{
    whittaker_lower_bound_check, whittaker_norm_closed_form, whittaker_norm_quadrature, whittaker_uniform_ratio,
    whittaker_w, WhittakerSolver, WhittakerValue,
};

/// Tolerances shared by every numerical integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Decades of decay past the natural scale before an integrand is cut.
    pub truncation_decades: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-13, rel_tol: 1e-10, max_subdivisions: 4000, truncation_decades: 18 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return domain("quadrature tolerances must be positive");
        }
        if self.max_subdivisions < 1 {
            return domain("max_subdivisions must be at least 1");
        }
        Ok(())
    }

    /// `truncation_decades·ln 10`.
    pub fn decay_length(&self) -> f64 {
        self.truncation_decades as f64 * std::f64::consts::LN_10
    }
}

/// Parameters of `W_{η,μ}(y)` with μ real or purely imaginary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittakerParams {
    pub eta: f64,
    pub mu: Complex64,
    pub y: f64,
}

impl WhittakerParams {
    pub fn new(eta: f64, mu: Complex64, y: f64) -> Result<Self> {
        let p = WhittakerParams { eta, mu, y };
        p.validate()?;
        Ok(p)
    }

    pub fn imaginary(eta: f64, t: f64, y: f64) -> Result<Self> {
        Self::new(eta, Complex64::new(0.0, t), y)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu.re != 0.0 && self.mu.im != 0.0 {
            return domain(format!("μ = {} must be real or purely imaginary", self.mu));
        }
        if !(self.y > 0.0) {
            return domain(format!("Whittaker argument must be positive, got {}", self.y));
        }
        Ok(())
    }
}
