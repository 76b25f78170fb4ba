//! Tube-packing estimates: the visual-area floor, the ellipse
//! semi-axes behind it, and the boundary injectivity-radius bound.
//!
//! The coefficients are kept as the truncated decimals under which the
//! bounds are stated; [`PackingConstants::standard`] exposes them together
//! with the exact quantities they approximate.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Coefficient of `area_floor(r) = 3.3957 · tanh r / cosh 2r`.
pub const AREA_FLOOR_COEFFICIENT: f64 = 3.3957;

/// Ellipse semi-axis coefficient, a truncation of `1/S`.
pub const AXIS_COEFFICIENT: f64 = 0.980258;

/// `R₀ = arctanh(1/√3)`, the smallest tube radius the certification allows.
pub fn min_tube_radius() -> f64 {
    (1.0 / 3f64.sqrt()).atanh()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackingConstants {
    /// Maximal packing density of congruent ellipses, `π/(2√3)`.
    pub density_ratio: f64,
    /// `S = (1/(2√2)) / arcsinh(1/(2√2))`.
    pub s_constant: f64,
    pub area_floor_coefficient: f64,
    pub axis_coefficient: f64,
}

impl PackingConstants {
    pub fn standard() -> Self {
        let s = 1.0 / (2.0 * 2f64.sqrt());
        PackingConstants {
            density_ratio: std::f64::consts::PI / (2.0 * 3f64.sqrt()),
            s_constant: s / s.asinh(),
            area_floor_coefficient: AREA_FLOOR_COEFFICIENT,
            axis_coefficient: AXIS_COEFFICIENT,
        }
    }
}

/// `area_floor(r) = 3.3957 · tanh r / cosh(2r)`: a lower bound for the total visual
/// area when the filled manifold has tube radius `r`.
pub fn area_floor(r: f64) -> Result<f64> {
    if !(r > 0.0) || r.is_nan() {
        return Err(domain(format!("area floor needs r > 0, got {r}")));
    }
    if r.is_infinite() {
        return Ok(0.0);
    }
    // cosh overflows past r ≈ 355; the value is 0 to machine precision there
    let c = (2.0 * r).cosh();
    Ok(if c.is_finite() {
        AREA_FLOOR_COEFFICIENT * r.tanh() / c
    } else {
        0.0
    })
}

/// Derivative of the area floor, used for the monotonicity checks.
pub fn area_floor_derivative(r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(domain(format!(
            "area floor derivative needs finite r > 0, got {r}"
        )));
    }
    let (t, c2, s2) = (r.tanh(), (2.0 * r).cosh(), (2.0 * r).sinh());
    let sech2 = 1.0 - t * t;
    Ok(AREA_FLOOR_COEFFICIENT * (sech2 * c2 - 2.0 * t * s2) / (c2 * c2))
}

/// Semi-axes of the packing ellipse on a torus of radius `r_i` around a
/// ball of radius `r`, requiring `0 < r ≤ r_i`.
pub fn ellipse_axes(r_i: f64, r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0 && r <= r_i && r_i.is_finite()) {
        return Err(domain(format!(
            "ellipse axes need 0 < R ≤ R_i, got R = {r}, R_i = {r_i}"
        )));
    }
    let a = AXIS_COEFFICIENT * r.sinh() * r_i.cosh() / (r_i + r).cosh();
    let b = r.sinh() * r_i.sinh() / (r_i + r).sinh();
    Ok((a, b))
}

/// Euclidean injectivity-radius floor `c(R) = 0.980258 / (coth R + 1)` for
/// boundary tori of tube radius at least `R`.
pub fn boundary_injectivity_bound(r: f64) -> Result<f64> {
    if !(r > 0.0) || r.is_nan() {
        return Err(domain(format!("injectivity bound needs R > 0, got {r}")));
    }
    Ok(AXIS_COEFFICIENT / (1.0 / r.tanh() + 1.0))
}
