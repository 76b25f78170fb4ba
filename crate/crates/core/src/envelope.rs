//! Deformation envelope for the visual area during radial Dehn filling.
//!
//! With `z = tanh ρ` where `area_floor(ρ)` equals the total visual area `𝒜`, the
//! differential inequalities for `u = 1/v = α²/𝒜` integrate to a pair of
//! profiles bounding `x = α²/L̂²`:
//!
//! ```text
//! f̃(z) ≥ x ≥ f(z),   f(z)  = 3.3957 (1 − z) exp(∫_z^1 F(w) dw)
//!                     f̃(z) = 3.3957 (1 − z) exp(∫_z^1 F̃(w) dw)
//! ```
//!
//! [`Branch::Upper`] selects `(f, F, G)`, the branch whose inversion gives
//! the upper bounds on area and volume change; [`Branch::Lower`] selects
//! `(f̃, F̃, G̃)`.
//!
//! Both profiles rise on `(√2 − 1, z*]` and fall on `[z*, 1]`, where
//! `z* = √(√5 − 2)` is the minimum of `H`. Inversion only uses the
//! decreasing part.

use std::sync::OnceLock;

use crate::error::{domain, Error, Result};
use crate::numeric::{bisect_decreasing, integrate};
use crate::packing::AREA_FLOOR_COEFFICIENT;

/// Singularity of `F̃` and of `1/(H − G̃)`.
pub const POLE: f64 = std::f64::consts::SQRT_2 - 1.0;

pub const DEFAULT_Z_MIN: f64 = 0.45;

/// Absolute tolerance for the integral inside `f` and `f̃`.
pub const DEFAULT_QUAD_TOLERANCE: f64 = 1e-10;

/// Relative residual target `|f(z) − x| ≤ 1e-12·max(1, x)` for inversion.
pub const INVERT_TOLERANCE: f64 = 1e-12;

pub const DEFAULT_TABLE_SAMPLES: usize = 129;

/// Where `H' = 0`: the root of `z⁴ + 4z² − 1`.
pub fn peak_z() -> f64 {
    (5f64.sqrt() - 2.0).sqrt()
}

/// `z₀ = tanh R₀ = 1/√3`.
pub fn min_tube_z() -> f64 {
    1.0 / 3f64.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `f`, `F`, `G`.
    Upper,
    /// `f̃`, `F̃`, `G̃`.
    Lower,
}

fn open_unit(z: f64, what: &str) -> Result<()> {
    if z > 0.0 && z < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("{what} needs 0 < z < 1, got {z}")))
    }
}

/// `H(z) = (1 + z²) / (3.3957 z (1 − z²)) = 1/area_floor(arctanh z)`.
pub fn inverse_area(z: f64) -> Result<f64> {
    open_unit(z, "H")?;
    // (1 − z)(1 + z) keeps full relative accuracy near z = 1
    Ok((1.0 + z * z) / (AREA_FLOOR_COEFFICIENT * z * ((1.0 - z) * (1.0 + z))))
}

/// `1/H(z) = area_floor(arctanh z)` on `(0, 1]`, zero at `z = 1`.
pub fn area_at(z: f64) -> Result<f64> {
    if !(z > 0.0 && z <= 1.0) {
        return Err(domain(format!("area needs 0 < z ≤ 1, got {z}")));
    }
    Ok(AREA_FLOOR_COEFFICIENT * z * ((1.0 - z) * (1.0 + z)) / (1.0 + z * z))
}

/// `H'(z) = (z⁴ + 4z² − 1) / (3.3957 z² (1 − z²)²)`.
pub fn inverse_area_derivative(z: f64) -> Result<f64> {
    open_unit(z, "H'")?;
    let z2 = z * z;
    let one_minus = (1.0 - z) * (1.0 + z);
    Ok((z2 * z2 + 4.0 * z2 - 1.0) / (AREA_FLOOR_COEFFICIENT * z2 * one_minus * one_minus))
}

/// `G(z) = (1 + z²) / (6.7914 z³)`.
pub fn shrink_rate(z: f64) -> Result<f64> {
    if !(z > 0.0 && z <= 1.0) {
        return Err(domain(format!("G needs 0 < z ≤ 1, got {z}")));
    }
    Ok((1.0 + z * z) / (2.0 * AREA_FLOOR_COEFFICIENT * z * z * z))
}

/// `G̃(z) = (1 + z²)² / (6.7914 z³ (3 − z²))`.
pub fn growth_rate(z: f64) -> Result<f64> {
    if !(z > 0.0 && z <= 1.0) {
        return Err(domain(format!("G̃ needs 0 < z ≤ 1, got {z}")));
    }
    let p = 1.0 + z * z;
    Ok(p * p / (2.0 * AREA_FLOOR_COEFFICIENT * z * z * z * (3.0 - z * z)))
}

/// `G` for [`Branch::Upper`], `G̃` for [`Branch::Lower`].
pub fn rate(branch: Branch, z: f64) -> Result<f64> {
    match branch {
        Branch::Upper => shrink_rate(z),
        Branch::Lower => growth_rate(z),
    }
}

/// `F(z) = −(1 + 4z + 6z² + z⁴) / ((z + 1)(1 + z²)²)` on `[0, 1]`.
pub fn upper_kernel(z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(domain(format!("F needs 0 ≤ z ≤ 1, got {z}")));
    }
    let z2 = z * z;
    let p = 1.0 + z2;
    Ok(-(1.0 + 4.0 * z + 6.0 * z2 + z2 * z2) / ((z + 1.0) * p * p))
}

/// `F̃(z)` on `(√2 − 1, 1]`.
pub fn lower_kernel(z: f64) -> Result<f64> {
    if !(z > POLE && z <= 1.0) {
        return Err(domain(format!("F̃ needs √2 − 1 < z ≤ 1, got {z}")));
    }
    let z2 = z * z;
    let num = z2 * z2 * z2 + 7.0 * z2 * z2 + 12.0 * z2 * z - 9.0 * z2 - 4.0 * z + 1.0;
    let den = (z + 1.0) * (z2 + 1.0) * (z2 - 2.0 * z - 1.0) * (z2 + 2.0 * z - 1.0);
    Ok(-num / den)
}

pub fn kernel(branch: Branch, z: f64) -> Result<f64> {
    match branch {
        Branch::Upper => upper_kernel(z),
        Branch::Lower => lower_kernel(z),
    }
}

/// `H'/(H(H + G))` (upper) or `H'/(H(H − G̃))` (lower), in a cancellation-free
/// closed form. Integrating a quarter of it over `[ẑ, 1]` bounds the volume drop.
pub fn volume_integrand(branch: Branch, z: f64) -> Result<f64> {
    if !(z > 0.0 && z <= 1.0) {
        return Err(domain(format!("volume integrand needs 0 < z ≤ 1, got {z}")));
    }
    let z2 = z * z;
    let p = 1.0 + z2;
    let common = 2.0 * AREA_FLOOR_COEFFICIENT * z2 * (z2 * z2 + 4.0 * z2 - 1.0);
    match branch {
        Branch::Upper => Ok(common / (p * p * p)),
        Branch::Lower => {
            let gap = 6.0 * z2 - z2 * z2 - 1.0;
            if gap <= 0.0 {
                return Err(domain(format!("H − G̃ ≤ 0 at z = {z}")));
            }
            Ok(common * (3.0 - z2) / (p * p * gap))
        }
    }
}

/// `f(z)` or `f̃(z)` with the quadrature error propagated to the value.
///
/// Returns `(value, abs_error)`. Valid for `z` in `(√2 − 1, 1]`; callers
/// apply their own lower limit.
pub fn profile_with_error(branch: Branch, z: f64, tol: f64) -> Result<(f64, f64)> {
    if !(z > POLE && z <= 1.0) {
        return Err(domain(format!("profile needs √2 − 1 < z ≤ 1, got {z}")));
    }
    if z == 1.0 {
        return Ok((0.0, 0.0));
    }
    let integral = integrate(|w| kernel(branch, w).unwrap_or(f64::NAN), z, 1.0, tol)?;
    let value = AREA_FLOOR_COEFFICIENT * (1.0 - z) * integral.value.exp();
    Ok((value, value * integral.abs_error.exp_m1()))
}

/// The `z`-window on which the envelope is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeDomain {
    z_min: f64,
}

impl Default for EnvelopeDomain {
    fn default() -> Self {
        EnvelopeDomain {
            z_min: DEFAULT_Z_MIN,
        }
    }
}

impl EnvelopeDomain {
    pub fn new(z_min: f64) -> Result<Self> {
        if !(z_min > POLE && z_min < 1.0) {
            return Err(domain(format!(
                "z_min must lie in (√2 − 1, 1), got {z_min}"
            )));
        }
        Ok(EnvelopeDomain { z_min })
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }

    pub fn pole(&self) -> f64 {
        POLE
    }

    /// Start of the strictly decreasing part, `max(z_min, z*)`.
    pub fn monotone_start(&self) -> f64 {
        self.z_min.max(peak_z())
    }
}

/// Sampled profiles on the decreasing part of the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeTable {
    pub z_grid: Vec<f64>,
    pub f_values: Vec<f64>,
    pub ftilde_values: Vec<f64>,
    /// `H` at each grid point; `+∞` at `z = 1`.
    pub h_values: Vec<f64>,
    pub quad_tolerance: f64,
}

impl EnvelopeTable {
    /// Samples `samples` evenly spaced points of `[start, 1]` and checks the
    /// table invariants.
    pub fn build(start: f64, samples: usize, quad_tolerance: f64) -> Result<Self> {
        if samples < 2 {
            return Err(domain("envelope table needs at least 2 samples"));
        }
        let n = samples - 1;
        let z_grid: Vec<f64> = (0..=n)
            .map(|i| {
                if i == n {
                    1.0
                } else {
                    start + (1.0 - start) * i as f64 / n as f64
                }
            })
            .collect();
        let mut f_values = Vec::with_capacity(samples);
        let mut ftilde_values = Vec::with_capacity(samples);
        let mut h_values = Vec::with_capacity(samples);
        for &z in &z_grid {
            f_values.push(profile_with_error(Branch::Upper, z, quad_tolerance)?.0);
            ftilde_values.push(profile_with_error(Branch::Lower, z, quad_tolerance)?.0);
            h_values.push(if z < 1.0 {
                inverse_area(z)?
            } else {
                f64::INFINITY
            });
        }
        let table = EnvelopeTable {
            z_grid,
            f_values,
            ftilde_values,
            h_values,
            quad_tolerance,
        };
        table.check()?;
        Ok(table)
    }

    fn check(&self) -> Result<()> {
        let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
        if !decreasing(&self.f_values) || !decreasing(&self.ftilde_values) {
            return Err(domain(
                "envelope profiles are not strictly decreasing on the table grid",
            ));
        }
        if self
            .f_values
            .iter()
            .zip(&self.ftilde_values)
            .any(|(f, ft)| f > ft)
        {
            return Err(domain("f exceeds f̃ on the table grid"));
        }
        if self.f_values.last() != Some(&0.0) {
            return Err(domain("f(1) must vanish"));
        }
        Ok(())
    }

    pub fn values(&self, branch: Branch) -> &[f64] {
        match branch {
            Branch::Upper => &self.f_values,
            Branch::Lower => &self.ftilde_values,
        }
    }

    pub fn len(&self) -> usize {
        self.z_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_grid.is_empty()
    }
}

/// Evaluator for `f`, `f̃` and their inverses over a fixed domain.
///
/// Immutable once built; share one instance across threads.
#[derive(Debug, Clone)]
pub struct Envelope {
    domain: EnvelopeDomain,
    quad_tolerance: f64,
    table: EnvelopeTable,
}

impl Envelope {
    pub fn new(domain: EnvelopeDomain, samples: usize, quad_tolerance: f64) -> Result<Self> {
        if !(quad_tolerance > 0.0) {
            return Err(domain_err(quad_tolerance));
        }
        let table = EnvelopeTable::build(domain.monotone_start(), samples, quad_tolerance)?;
        Ok(Envelope {
            domain,
            quad_tolerance,
            table,
        })
    }

    pub fn standard() -> Result<Self> {
        Envelope::new(
            EnvelopeDomain::default(),
            DEFAULT_TABLE_SAMPLES,
            DEFAULT_QUAD_TOLERANCE,
        )
    }

    pub fn domain(&self) -> EnvelopeDomain {
        self.domain
    }

    pub fn table(&self) -> &EnvelopeTable {
        &self.table
    }

    pub fn quad_tolerance(&self) -> f64 {
        self.quad_tolerance
    }

    /// `f(z)` or `f̃(z)` for `z` in `[z_min, 1]`.
    pub fn profile(&self, branch: Branch, z: f64) -> Result<f64> {
        Ok(self.profile_with_error(branch, z)?.0)
    }

    pub fn profile_with_error(&self, branch: Branch, z: f64) -> Result<(f64, f64)> {
        if !(z >= self.domain.z_min && z <= 1.0) {
            return Err(domain(format!(
                "z = {z} outside the envelope domain [{}, 1]",
                self.domain.z_min
            )));
        }
        profile_with_error(branch, z, self.quad_tolerance)
    }

    /// Largest `x` the branch can invert, attained at the monotone start.
    pub fn max_invertible(&self, branch: Branch) -> f64 {
        self.table.values(branch)[0]
    }

    /// Solves `profile(z) = x` for `z` in `[monotone_start, 1]`.
    ///
    /// `x = 0` maps to `z = 1`. An `x` above the attainable range means the
    /// normalized length is too small to certify.
    pub fn invert(&self, branch: Branch, x: f64) -> Result<f64> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(domain(format!("cannot invert at x = {x}")));
        }
        if x == 0.0 {
            return Ok(1.0);
        }
        let values = self.table.values(branch);
        if x > values[0] {
            return Err(Error::Uncertifiable(format!(
                "normalized length too small: x = {x} exceeds the attainable maximum {}",
                values[0]
            )));
        }
        // values are strictly decreasing, ending at 0 < x
        let hi_idx = values
            .partition_point(|&v| v >= x)
            .clamp(1, values.len() - 1);
        let (lo, hi) = (self.table.z_grid[hi_idx - 1], self.table.z_grid[hi_idx]);
        bisect_decreasing(
            |z| self.profile(branch, z),
            x,
            lo,
            hi,
            INVERT_TOLERANCE * x.max(1.0),
        )
    }
}

/// Process-wide envelope with the default domain, table and tolerance.
pub fn standard_envelope() -> &'static Envelope {
    static ENVELOPE: OnceLock<Envelope> = OnceLock::new();
    ENVELOPE.get_or_init(|| Envelope::standard().expect("default envelope parameters are valid"))
}

fn domain_err(tol: f64) -> Error {
    domain(format!("quadrature tolerance must be positive, got {tol}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn env() -> Envelope {
        Envelope::standard().unwrap()
    }

    #[test]
    fn inverse_area_at_min_tube_z_is_floor() {
        let v = 1.0 / inverse_area(min_tube_z()).unwrap();
        assert!((v - 0.980254).abs() < 1e-6);
        assert!((area_at(min_tube_z()).unwrap() - v).abs() < 1e-15);
        assert_eq!(area_at(1.0).unwrap(), 0.0);
    }

    #[test]
    fn rate_values() {
        assert!((shrink_rate(1.0).unwrap() - 2.0 / 6.7914).abs() < 1e-15);
        assert!((growth_rate(1.0).unwrap() - 4.0 / (6.7914 * 2.0)).abs() < 1e-15);
    }

    #[test]
    fn inverse_area_blows_up_at_one() {
        assert!(inverse_area(1.0 - 1e-9).unwrap() > 1e8);
        assert!(inverse_area(1.0).is_err());
        assert!(inverse_area(0.0).is_err());
        assert!(inverse_area(-0.5).is_err());
    }

    #[test]
    fn kernel_endpoint_values() {
        assert_eq!(upper_kernel(0.0).unwrap(), -1.0);
        assert!((upper_kernel(1.0).unwrap() + 1.5).abs() < 1e-15);
        assert!(upper_kernel(1.1).is_err());
        assert!(lower_kernel(POLE).is_err());
        assert!(lower_kernel(0.3).is_err());
        assert!(lower_kernel(0.45).is_ok());
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        for i in 0..50 {
            let z = 0.2 + 0.75 * i as f64 / 49.0;
            let h = 1e-6;
            let fd = (inverse_area(z + h).unwrap() - inverse_area(z - h).unwrap()) / (2.0 * h);
            let an = inverse_area_derivative(z).unwrap();
            assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0), "z = {z}");
        }
        assert!(inverse_area_derivative(peak_z()).unwrap().abs() < 1e-13);
    }

    #[test]
    fn identity_with_area_floor_of_arctanh() {
        for i in 0..200 {
            let r = crate::packing::min_tube_radius()
                + (5.0 - crate::packing::min_tube_radius()) * i as f64 / 199.0;
            let lhs = inverse_area(r.tanh()).unwrap();
            let rhs = 1.0 / crate::packing::area_floor(r).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs, "r = {r}");
        }
    }

    #[test]
    fn volume_integrands_match_composed_form() {
        for i in 0..40 {
            let z = 0.46 + 0.53 * i as f64 / 39.0;
            let (h, hp) = (
                inverse_area(z).unwrap(),
                inverse_area_derivative(z).unwrap(),
            );
            let up = hp / (h * (h + shrink_rate(z).unwrap()));
            let lo = hp / (h * (h - growth_rate(z).unwrap()));
            assert!(
                (volume_integrand(Branch::Upper, z).unwrap() - up).abs()
                    < 1e-10 * up.abs().max(1.0)
            );
            assert!(
                (volume_integrand(Branch::Lower, z).unwrap() - lo).abs()
                    < 1e-10 * lo.abs().max(1.0)
            );
        }
        assert!(volume_integrand(Branch::Lower, 0.4).is_err());
    }

    #[test]
    fn profiles_vanish_at_one() {
        let e = env();
        assert_eq!(e.profile(Branch::Upper, 1.0).unwrap(), 0.0);
        assert_eq!(e.profile(Branch::Lower, 1.0).unwrap(), 0.0);
        assert!(e.profile(Branch::Upper, 0.44).is_err());
    }

    #[test]
    fn threshold_constant() {
        let e = env();
        let c2 = TAU * TAU / e.profile(Branch::Upper, min_tube_z()).unwrap();
        assert!((c2 - 57.5041).abs() < 5e-3, "{c2}");
        assert!((c2.sqrt() - 7.58315).abs() < 5e-4);
    }

    #[test]
    fn invert_examples() {
        let e = env();
        assert_eq!(e.invert(Branch::Upper, 0.0).unwrap(), 1.0);
        let z = e.invert(Branch::Upper, TAU * TAU / 57.5041).unwrap();
        assert!((z - min_tube_z()).abs() < 1e-5, "{z}");
        assert!(matches!(
            e.invert(Branch::Upper, 0.8),
            Err(Error::Uncertifiable(_))
        ));
        assert!(e.invert(Branch::Lower, -1.0).is_err());
    }

    #[test]
    fn invert_round_trip() {
        let e = env();
        for branch in [Branch::Upper, Branch::Lower] {
            let max = e.max_invertible(branch);
            for i in 0..100 {
                let x = max * (i as f64 + 0.5) / 100.0;
                let z = e.invert(branch, x).unwrap();
                let back = e.profile(branch, z).unwrap();
                assert!(
                    (back - x).abs() <= 1e-10,
                    "{branch:?} x = {x}, back = {back}"
                );
            }
        }
    }

    #[test]
    fn table_starts_at_the_peak() {
        let e = env();
        let t = e.table();
        assert_eq!(t.z_grid[0], peak_z());
        assert_eq!(*t.z_grid.last().unwrap(), 1.0);
        assert_eq!(*t.h_values.last().unwrap(), f64::INFINITY);
        assert_eq!(t.len(), DEFAULT_TABLE_SAMPLES);
        // a later z_min moves the start
        let late = Envelope::new(EnvelopeDomain::new(0.6).unwrap(), 33, 1e-10).unwrap();
        assert_eq!(late.table().z_grid[0], 0.6);
    }

    #[test]
    fn profiles_rise_below_the_peak() {
        let e = env();
        for branch in [Branch::Upper, Branch::Lower] {
            let below = e.profile(branch, 0.45).unwrap();
            let at = e.profile(branch, peak_z()).unwrap();
            assert!(below < at);
        }
    }

    #[test]
    fn domain_validation() {
        assert!(EnvelopeDomain::new(POLE).is_err());
        assert!(EnvelopeDomain::new(1.0).is_err());
        assert!(EnvelopeDomain::new(0.42).is_ok());
        assert!(Envelope::new(EnvelopeDomain::default(), 1, 1e-10).is_err());
        assert!(Envelope::new(EnvelopeDomain::default(), 10, 0.0).is_err());
    }

    #[test]
    fn quadrature_error_bound_is_honest() {
        for &z in &[0.5, min_tube_z(), 0.8, 0.99] {
            for branch in [Branch::Upper, Branch::Lower] {
                let (coarse, err) = profile_with_error(branch, z, 1e-10).unwrap();
                let (fine, _) = profile_with_error(branch, z, 5e-11).unwrap();
                assert!((coarse - fine).abs() <= err, "{branch:?} z = {z}");
            }
        }
    }
}
