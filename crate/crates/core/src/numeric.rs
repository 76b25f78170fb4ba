//! Adaptive Gauss–Kronrod quadrature and bracketed bisection.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1] (non-negative half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// 7-point Gauss weights, at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_SUBINTERVALS: usize = 500;

/// Result of a quadrature: the value and an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    // |K15 - G7| overestimates the K15 error for smooth integrands; keep it
    // as the reported bound rather than the QUADPACK rescaling.
    let error = ((kronrod - gauss) * half)
        .abs()
        .max(50.0 * f64::EPSILON * value.abs());
    Panel { a, b, value, error }
}

/// Integrates `f` over `[a, b]` to an absolute tolerance `tol`.
///
/// Globally adaptive: the panel with the largest error estimate is bisected
/// until the summed estimate drops below `tol`. `a > b` yields the negated
/// integral; `a == b` yields zero.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integration bounds must be finite, got [{a}, {b}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
        });
    }
    if a > b {
        let r = integrate(f, b, a, tol)?;
        return Ok(Integral {
            value: -r.value,
            abs_error: r.abs_error,
        });
    }

    let mut panels = vec![kronrod15(&f, a, b)];
    loop {
        let total_err: f64 = panels.iter().map(|p| p.error).sum();
        let total: f64 = panels.iter().map(|p| p.value).sum();
        if !total.is_finite() {
            return Err(Error::Quadrature(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        if total_err <= tol {
            return Ok(Integral {
                value: total,
                abs_error: total_err,
            });
        }
        if panels.len() >= MAX_SUBINTERVALS {
            return Err(Error::Quadrature(format!(
                "error estimate {total_err:e} above tolerance {tol:e} after {MAX_SUBINTERVALS} panels"
            )));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::Quadrature(format!(
                "panel [{}, {}] cannot be split",
                p.a, p.b
            )));
        }
        panels.push(kronrod15(&f, p.a, mid));
        panels.push(kronrod15(&f, mid, p.b));
    }
}

/// Solves `f(z) = target` for a strictly decreasing `f` on `[lo, hi]`.
///
/// Stops when `|f(z) - target| <= tol` or the bracket has collapsed to
/// adjacent floats, in which case the endpoint with the smaller residual is
/// returned.
pub fn bisect_decreasing<F>(f: F, target: f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if (f_lo - target).abs() <= tol {
        return Ok(lo);
    }
    if (f_hi - target).abs() <= tol {
        return Ok(hi);
    }
    if !(f_lo >= target && target >= f_hi) {
        return Err(Error::Domain(format!(
            "target {target} not bracketed by f({lo}) = {f_lo} and f({hi}) = {f_hi}"
        )));
    }
    let (mut r_lo, mut r_hi) = (f_lo - target, f_hi - target);
    // 200 halvings exhaust any f64 bracket.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r = f(mid)? - target;
        if r.abs() <= tol {
            return Ok(mid);
        }
        if r > 0.0 {
            lo = mid;
            r_lo = r;
        } else {
            hi = mid;
            r_hi = r;
        }
    }
    Ok(if r_lo.abs() <= r_hi.abs() { lo } else { hi })
}
