//! Boundary term of the Weitzenböck formula on a tubular torus, evaluated
//! spectrally on the unit-area square torus, together with the coefficient
//! record of the boundary quadratic form and the principal-symbol checks.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

const CURVATURE_PRODUCT_TOL: f64 = 1e-9;

/// Principal curvatures of a tubular boundary torus and the deformation
/// parameter `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurvature {
    k1: f64,
    k2: f64,
    epsilon: f64,
}

impl BoundaryCurvature {
    pub fn new(k1: f64, k2: f64, epsilon: f64) -> Result<Self> {
        if !(k1 > 0.0 && k2 > 0.0 && k1.is_finite() && k2.is_finite()) {
            return Err(domain(format!(
                "curvatures must be positive, got k1 = {k1}, k2 = {k2}"
            )));
        }
        if (k1 * k2 - 1.0).abs() > CURVATURE_PRODUCT_TOL {
            return Err(domain(format!(
                "tubular boundary needs k1·k2 = 1, got {}",
                k1 * k2
            )));
        }
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(domain(format!(
                "epsilon must be non-negative, got {epsilon}"
            )));
        }
        Ok(BoundaryCurvature { k1, k2, epsilon })
    }

    /// `k1 = tanh R`, `k2 = coth R`.
    pub fn from_tube_radius(r: f64, epsilon: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(domain(format!(
                "tube radius must be finite and positive, got {r}"
            )));
        }
        BoundaryCurvature::new(r.tanh(), 1.0 / r.tanh(), epsilon)
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn k2(&self) -> f64 {
        self.k2
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `1/√3 ≤ k1, k2 ≤ √3` and `ε ≤ 2 min(k1, k2)`.
    pub fn in_positive_range(&self) -> bool {
        let (lo, hi) = (1.0 / 3f64.sqrt(), 3f64.sqrt());
        let kmin = self.k1.min(self.k2);
        kmin >= lo && self.k1.max(self.k2) <= hi && self.epsilon <= 2.0 * kmin
    }
}

/// A real 1-form `σ = σ₁θ₁ + σ₂θ₂` on the unit square torus, stored by its
/// Fourier coefficients `(c₁, c₂)` on `exp(2πi(m x₁ + n x₂))`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierMode1Form {
    modes: BTreeMap<(i32, i32), [Complex64; 2]>,
}

fn is_real_pair(c: &[Complex64; 2], d: &[Complex64; 2], tol: f64) -> bool {
    (c[0] - d[0].conj()).norm() <= tol && (c[1] - d[1].conj()).norm() <= tol
}

impl FourierMode1Form {
    pub fn zero() -> Self {
        FourierMode1Form::default()
    }

    /// Takes a full coefficient map and checks that it describes a real form.
    pub fn from_modes(modes: BTreeMap<(i32, i32), [Complex64; 2]>) -> Result<Self> {
        for (&(m, n), c) in &modes {
            let scale = c[0].norm().max(c[1].norm()).max(1.0);
            let partner = modes.get(&(-m, -n)).copied().unwrap_or_default();
            if !is_real_pair(c, &partner, 1e-12 * scale) {
                return Err(domain(format!(
                    "coefficient at ({}, {}) is not the conjugate of the one at ({m}, {n})",
                    -m, -n
                )));
            }
        }
        Ok(FourierMode1Form { modes })
    }

    /// Adds `c` at `(m, n)` and its conjugate at `(−m, −n)`.
    pub fn add_mode(&mut self, m: i32, n: i32, c: [Complex64; 2]) -> Result<()> {
        if m == 0 && n == 0 {
            if c[0].im != 0.0 || c[1].im != 0.0 {
                return Err(domain("the constant mode must have real coefficients"));
            }
            let e = self.modes.entry((0, 0)).or_default();
            e[0] += c[0];
            e[1] += c[1];
            return Ok(());
        }
        let e = self.modes.entry((m, n)).or_default();
        e[0] += c[0];
        e[1] += c[1];
        let e = self.modes.entry((-m, -n)).or_default();
        e[0] += c[0].conj();
        e[1] += c[1].conj();
        Ok(())
    }

    /// `amplitude · sin(2π(m x₁ + n x₂))` in component `component` (0 or 1).
    pub fn sin_mode(component: usize, m: i32, n: i32, amplitude: f64) -> Result<Self> {
        let mut c = [Complex64::default(); 2];
        *c.get_mut(component)
            .ok_or_else(|| domain("component must be 0 or 1"))? =
            Complex64::new(0.0, -amplitude / 2.0);
        let mut form = FourierMode1Form::zero();
        if m != 0 || n != 0 {
            form.add_mode(m, n, c)?;
        }
        Ok(form)
    }

    /// `amplitude · cos(2π(m x₁ + n x₂))` in component `component`.
    pub fn cos_mode(component: usize, m: i32, n: i32, amplitude: f64) -> Result<Self> {
        let mut c = [Complex64::default(); 2];
        if component > 1 {
            return Err(domain("component must be 0 or 1"));
        }
        let mut form = FourierMode1Form::zero();
        if m == 0 && n == 0 {
            c[component] = Complex64::new(amplitude, 0.0);
        } else {
            c[component] = Complex64::new(amplitude / 2.0, 0.0);
        }
        form.add_mode(m, n, c)?;
        Ok(form)
    }

    /// `pairs` conjugate pairs of distinct non-zero frequencies with
    /// `|m|, |n| ≤ max_freq`, random coefficients, scaled so that the total
    /// squared coefficient norm is 1.
    pub fn random<R: Rng>(rng: &mut R, pairs: usize, max_freq: i32) -> Result<Self> {
        let side = 2 * max_freq as i64 + 1;
        if max_freq < 1 || (pairs as i64) > (side * side - 1) / 2 {
            return Err(domain(format!(
                "cannot draw {pairs} pairs with |freq| ≤ {max_freq}"
            )));
        }
        let mut form = FourierMode1Form::zero();
        while form.modes.len() < 2 * pairs {
            let (m, n) = (
                rng.gen_range(-max_freq..=max_freq),
                rng.gen_range(-max_freq..=max_freq),
            );
            if (m == 0 && n == 0) || form.modes.contains_key(&(m, n)) {
                continue;
            }
            let mut coeff = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let c = [coeff(), coeff()];
            form.add_mode(m, n, c)?;
        }
        let norm = form.coefficient_norm_sq().sqrt();
        if norm == 0.0 {
            return Ok(form);
        }
        for c in form.modes.values_mut() {
            c[0] /= norm;
            c[1] /= norm;
        }
        Ok(form)
    }

    pub fn modes(&self) -> &BTreeMap<(i32, i32), [Complex64; 2]> {
        &self.modes
    }

    /// `Σ |c₁|² + |c₂|²` over all stored modes; equals `∫|σ|² dA`.
    pub fn coefficient_norm_sq(&self) -> f64 {
        self.modes
            .values()
            .map(|c| c[0].norm_sqr() + c[1].norm_sqr())
            .sum()
    }

    /// Point value `(σ₁, σ₂)` at `(x₁, x₂)`.
    pub fn eval(&self, x1: f64, x2: f64) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (&(m, n), c) in &self.modes {
            let phase = Complex64::from_polar(1.0, TAU * (m as f64 * x1 + n as f64 * x2));
            out[0] += (c[0] * phase).re;
            out[1] += (c[1] * phase).re;
        }
        out
    }
}

/// `b(σ, σ) = ¼ Σᵢⱼ (3 − kᵢ²) kⱼ ‖∇ᵢσⱼ‖² + (ε/2) ∫ ((k₂ − ε/2) a₁² + (k₁ − ε/2) a₂²)`
/// where `a = δdσ`. Each mode contributes exactly; no quadrature is involved.
pub fn boundary_form_b(curv: &BoundaryCurvature, sigma: &FourierMode1Form) -> Result<f64> {
    // revalidate in case the fields were built by deserialization
    let curv = BoundaryCurvature::new(curv.k1, curv.k2, curv.epsilon)?;
    let k = [curv.k1, curv.k2];
    let eps = curv.epsilon;
    let mut grad = [[0.0f64; 2]; 2];
    let (mut a1_sq, mut a2_sq) = (0.0, 0.0);
    for (&(m, n), c) in sigma.modes() {
        let freq = [TAU * m as f64, TAU * n as f64];
        for i in 0..2 {
            for j in 0..2 {
                grad[i][j] += freq[i] * freq[i] * c[j].norm_sqr();
            }
        }
        // dσ = φ dx₁∧dx₂ with φ̂ = 2πi(m c₂ − n c₁); δ(φ dx₁∧dx₂) = (∂₂φ, −∂₁φ)
        let phi = Complex64::i() * (c[1] * freq[0] - c[0] * freq[1]);
        a1_sq += (phi * freq[1]).norm_sqr();
        a2_sq += (phi * freq[0]).norm_sqr();
    }
    let mut b = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            b += 0.25 * (3.0 - k[i] * k[i]) * k[j] * grad[i][j];
        }
    }
    b += 0.5 * eps * ((k[1] - 0.5 * eps) * a1_sq + (k[0] - 0.5 * eps) * a2_sq);
    Ok(b)
}

/// Smallest `b` over `trials` random unit-norm 8-pair forms.
pub fn min_boundary_form<R: Rng>(
    curv: &BoundaryCurvature,
    rng: &mut R,
    trials: usize,
) -> Result<f64> {
    let mut min = f64::INFINITY;
    for _ in 0..trials {
        let sigma = FourierMode1Form::random(rng, 8, 4)?;
        min = min.min(boundary_form_b(curv, &sigma)?);
    }
    Ok(min)
}

/// Coefficients of the quadratic `a X² + b X + c` governing the boundary
/// term of the tube, in the normalized form `a((X + ξ)² − w²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardFormCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub xi: f64,
    pub w: f64,
    /// `(−w − ξ, w − ξ)`: the range of the weighted ratio `Σ (vⱼ/v) Xⱼ`.
    pub x_ratio_bounds: (f64, f64),
}

pub fn standard_form_coeffs(r: f64) -> Result<StandardFormCoefficients> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(domain(format!(
            "tube radius must be finite and positive, got {r}"
        )));
    }
    let (s2, c2) = (r.sinh().powi(2), r.cosh().powi(2));
    let a = -(s2 / c2) * (2.0 * c2 + 1.0);
    let b = -2.0 / c2;
    let c = (2.0 * c2 - 1.0) / (s2 * c2);
    let xi = 1.0 / (s2 * (2.0 * c2 + 1.0));
    let w = 2.0 * c2 / (s2 * (2.0 * c2 + 1.0));
    Ok(StandardFormCoefficients {
        a,
        b,
        c,
        xi,
        w,
        x_ratio_bounds: (-w - xi, w - xi),
    })
}

/// Principal symbol of the linearized operator for curvature ratio `k`
/// at covector `ζ = (ζ₁, ζ₂)`: the matrix and its determinant.
pub fn symbol_matrix_ls(k: f64, zeta: (f64, f64)) -> ([[f64; 2]; 2], f64) {
    let (a, b) = zeta;
    let d1 = k * k * a * a + b * b;
    let d2 = a * a + b * b / (k * k);
    ([[d1, 0.0], [0.0, d2]], d1 * d2)
}

/// Kernel of the symbol at `ε = 0`, with the residuals of both equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolKernel {
    pub h0: f64,
    pub sigma0: [Complex64; 2],
    /// `|h|ζ| − iζ·σ|` and `‖σ|ζ| + ihζ‖`.
    pub residuals: [f64; 2],
}

pub fn epsilon_zero_kernel(zeta: (f64, f64)) -> Result<SymbolKernel> {
    let z = [zeta.0, zeta.1];
    let norm = zeta.0.hypot(zeta.1);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(domain("the covector must be non-zero and finite"));
    }
    let h0 = 1.0;
    let i = Complex64::i();
    let sigma0 = [-i * (z[0] / norm), -i * (z[1] / norm)];
    let first = h0 * norm - i * (sigma0[0] * z[0] + sigma0[1] * z[1]);
    let second = [
        sigma0[0] * norm + i * h0 * z[0],
        sigma0[1] * norm + i * h0 * z[1],
    ];
    Ok(SymbolKernel {
        h0,
        sigma0,
        residuals: [first.norm(), second[0].norm().hypot(second[1].norm())],
    })
}
