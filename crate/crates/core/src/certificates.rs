//! The normalized-length certification test and the bounds it unlocks:
//! volume drop, visual area and core-geodesic length of the filled manifold.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::envelope::{area_at, growth_rate, inverse_area, volume_integrand, Branch, Envelope};
use crate::error::{domain, Error, Result};
use crate::numeric::integrate;
use crate::packing::min_tube_radius;

/// Universal threshold: fillings whose combined normalized length exceeds
/// it are hyperbolic. Decisions use this stored decimal.
pub const THRESHOLD: f64 = 7.5832;

/// `√((2π)²/f(1/√3))` to the precision it is quoted at.
pub const DERIVED_THRESHOLD: f64 = 7.58315;

/// `(2π)²/f(1/√3)` as quoted.
pub const DERIVED_THRESHOLD_SQUARED: f64 = 57.5041;

pub const BOUND_QUAD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FillingCertificate {
    pub per_cusp_lhat: Vec<f64>,
    pub combined_lhat: f64,
    pub certified: bool,
    pub margin: f64,
    /// `R₀` when certified.
    pub tube_radius_floor: Option<f64>,
    pub volume_drop: Option<Interval>,
    pub visual_area: Option<Interval>,
    pub core_length_hi: Option<f64>,
    pub z_hat: Option<f64>,
    pub z_tilde: Option<f64>,
}

/// Everything the envelope yields at one value of `x̂ = (2π)²/L̂²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FillingBounds {
    pub x_hat: f64,
    pub z_hat: f64,
    pub z_tilde: f64,
    pub volume_drop: Interval,
    pub visual_area: Interval,
    pub core_length_hi: f64,
}

fn check_lhats(lhats: &[f64]) -> Result<()> {
    if lhats.is_empty() {
        return Err(domain("at least one normalized length is required"));
    }
    if let Some(bad) = lhats.iter().find(|&&l| !(l > 0.0)) {
        return Err(domain(format!(
            "normalized lengths must be positive, got {bad}"
        )));
    }
    Ok(())
}

fn inverse_square_sum(lhats: &[f64]) -> f64 {
    lhats.iter().map(|l| 1.0 / (l * l)).sum()
}

/// `L̂` with `1/L̂² = Σ 1/L̂ᵢ²`.
pub fn combine_normalized_lengths(lhats: &[f64]) -> Result<f64> {
    check_lhats(lhats)?;
    Ok(1.0 / inverse_square_sum(lhats).sqrt())
}

/// Decision only: certified iff `Σ 1/L̂ᵢ² < 1/C²`. Bound fields are left empty.
pub fn certify(lhats: &[f64]) -> Result<FillingCertificate> {
    check_lhats(lhats)?;
    let margin = 1.0 / (THRESHOLD * THRESHOLD) - inverse_square_sum(lhats);
    let certified = margin > 0.0;
    Ok(FillingCertificate {
        per_cusp_lhat: lhats.to_vec(),
        combined_lhat: combine_normalized_lengths(lhats)?,
        certified,
        margin,
        tube_radius_floor: certified.then(min_tube_radius),
        volume_drop: None,
        visual_area: None,
        core_length_hi: None,
        z_hat: None,
        z_tilde: None,
    })
}

/// [`certify`], plus the geometric bounds at the combined length when certified.
pub fn certify_with_bounds(env: &Envelope, lhats: &[f64]) -> Result<FillingCertificate> {
    let mut cert = certify(lhats)?;
    if cert.certified {
        let b = filling_bounds(env, cert.combined_lhat)?;
        cert.volume_drop = Some(b.volume_drop);
        cert.visual_area = Some(b.visual_area);
        cert.core_length_hi = Some(b.core_length_hi);
        cert.z_hat = Some(b.z_hat);
        cert.z_tilde = Some(b.z_tilde);
    }
    Ok(cert)
}

/// `x̂ = (2π)²/L̂²`.
pub fn x_hat(lhat: f64) -> f64 {
    TAU * TAU / (lhat * lhat)
}

fn check_certifiable(lhat: f64) -> Result<()> {
    if lhat.is_nan() || lhat <= 0.0 {
        return Err(domain(format!(
            "normalized length must be positive, got {lhat}"
        )));
    }
    if lhat < THRESHOLD {
        return Err(Error::Uncertifiable(format!(
            "normalized length {lhat} is below the threshold {THRESHOLD}"
        )));
    }
    Ok(())
}

fn quarter_integral(branch: Branch, z: f64) -> Result<f64> {
    let r = integrate(
        |w| volume_integrand(branch, w).unwrap_or(f64::NAN),
        z,
        1.0,
        BOUND_QUAD_TOLERANCE,
    )?;
    Ok(0.25 * r.value)
}

/// Bounds at a given `x̂`, without the threshold check; used for plotting.
pub fn bounds_at_x_hat(env: &Envelope, x_hat: f64) -> Result<FillingBounds> {
    let z_hat = env.invert(Branch::Upper, x_hat)?;
    let z_tilde = env.invert(Branch::Lower, x_hat)?;
    // 6z² − z⁴ − 1 grows on (0, √3), so H > G̃ at z̃ holds on all of [z̃, 1)
    if z_tilde < 1.0 && inverse_area(z_tilde)? <= growth_rate(z_tilde)? {
        return Err(Error::Degenerate(format!("H ≤ G̃ at z̃ = {z_tilde}")));
    }
    let volume_drop = Interval {
        lo: quarter_integral(Branch::Lower, z_tilde)?,
        hi: quarter_integral(Branch::Upper, z_hat)?,
    };
    let visual_area = Interval {
        lo: area_at(z_tilde)?,
        hi: area_at(z_hat)?,
    };
    Ok(FillingBounds {
        x_hat,
        z_hat,
        z_tilde,
        volume_drop,
        visual_area,
        core_length_hi: visual_area.hi / TAU,
    })
}

/// All bounds for a normalized length at or above the threshold.
pub fn filling_bounds(env: &Envelope, lhat: f64) -> Result<FillingBounds> {
    check_certifiable(lhat)?;
    bounds_at_x_hat(env, x_hat(lhat))
}

pub fn volume_drop_bounds(env: &Envelope, lhat: f64) -> Result<Interval> {
    Ok(filling_bounds(env, lhat)?.volume_drop)
}

pub fn visual_area_bounds(env: &Envelope, lhat: f64) -> Result<Interval> {
    check_certifiable(lhat)?;
    let x = x_hat(lhat);
    Ok(Interval {
        lo: area_at(env.invert(Branch::Lower, x)?)?,
        hi: area_at(env.invert(Branch::Upper, x)?)?,
    })
}

/// Upper bound on the core geodesic length, `𝒜_hi / 2π`.
pub fn core_length_bound(env: &Envelope, lhat: f64) -> Result<f64> {
    Ok(visual_area_bounds(env, lhat)?.hi / TAU)
}

/// One step of a radial deformation: cone angle `alpha` changing by `d_alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchlafliStep {
    pub visual_area: f64,
    pub alpha: f64,
    pub d_alpha: f64,
}

/// `dV = −(𝒜 / 2α) dα`.
pub fn schlafli_dv(step: SchlafliStep) -> Result<f64> {
    if !(step.alpha > 0.0) || !(step.visual_area > 0.0) {
        return Err(domain(format!(
            "Schläfli step needs alpha > 0 and visual area > 0, got alpha = {}, area = {}",
            step.alpha, step.visual_area
        )));
    }
    Ok(-step.visual_area / (2.0 * step.alpha) * step.d_alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Figure {
    /// Visual area against `x` over the whole invertible range.
    AreaEnvelope,
    /// Volume-drop bounds against `x̂`, with the `x̂/4` asymptote.
    VolumeDrop,
    /// Visual-area bounds against `x̂`, with the `x̂` asymptote.
    VisualArea,
}

impl TryFrom<u32> for Figure {
    type Error = Error;

    fn try_from(which: u32) -> Result<Self> {
        match which {
            1 => Ok(Figure::AreaEnvelope),
            2 => Ok(Figure::VolumeDrop),
            3 => Ok(Figure::VisualArea),
            _ => Err(domain(format!("figure must be 1, 2 or 3, got {which}"))),
        }
    }
}

impl Figure {
    pub fn header(self) -> &'static [&'static str] {
        match self {
            Figure::AreaEnvelope => &["x", "area_lower", "area_upper"],
            Figure::VolumeDrop => &[
                "x_hat",
                "volume_drop_lower",
                "volume_drop_upper",
                "asymptote",
            ],
            Figure::VisualArea => &["x_hat", "area_lower", "area_upper", "asymptote"],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    pub figure: Figure,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Samples a figure on an even grid in `x`, starting at 0.
///
/// The area envelope runs up to the largest `x` that `f` reaches; the volume
/// and visual-area tables stop at `x̂ = f(1/√3)`, which is the certification threshold.
pub fn figure_data(env: &Envelope, figure: Figure, samples: usize) -> Result<FigureTable> {
    if samples < 2 {
        return Err(domain(format!(
            "figures need at least 2 samples, got {samples}"
        )));
    }
    let x_max = match figure {
        Figure::AreaEnvelope => env.max_invertible(Branch::Upper),
        _ => env.profile(Branch::Upper, crate::envelope::min_tube_z())?,
    };
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let x = if i + 1 == samples {
            x_max
        } else {
            x_max * i as f64 / (samples - 1) as f64
        };
        let row = match figure {
            Figure::AreaEnvelope => vec![
                x,
                area_at(env.invert(Branch::Lower, x)?)?,
                area_at(env.invert(Branch::Upper, x)?)?,
            ],
            Figure::VolumeDrop => {
                let b = bounds_at_x_hat(env, x)?;
                // π²/L̂² = x̂/4
                vec![x, b.volume_drop.lo, b.volume_drop.hi, x / 4.0]
            }
            Figure::VisualArea => {
                let b = bounds_at_x_hat(env, x)?;
                vec![x, b.visual_area.lo, b.visual_area.hi, x]
            }
        };
        rows.push(row);
    }
    Ok(FigureTable {
        figure,
        header: figure.header().iter().map(|s| s.to_string()).collect(),
        rows,
    })
}
