//! Cusp-shape lattices: normalized slope lengths, Gauss reduction and
//! complete enumeration of short primitive slopes.
//!
//! A cusp shape is the modulus `τ` (with `Im τ > 0`) of the lattice spanned
//! by `1` and `τ`. The slope `(p, q)` is the lattice vector `p + qτ`; after
//! rescaling to unit area its length is `|p + qτ| / √Im τ`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Lattice modulus `τ = re + i·im`, `im > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspShape {
    re: f64,
    im: f64,
}

impl CuspShape {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(domain(format!(
                "cusp shape must be finite, got {re} + {im}i"
            )));
        }
        if im <= 0.0 {
            return Err(domain(format!(
                "cusp shape needs positive imaginary part, got {im}"
            )));
        }
        Ok(CuspShape { re, im })
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    /// `|p + qτ| / √Im τ`.
    pub fn normalized_length(&self, p: f64, q: f64) -> Result<f64> {
        if p == 0.0 && q == 0.0 {
            return Err(domain("slope must be nonzero"));
        }
        Ok((p + q * self.re).hypot(q * self.im) / self.im.sqrt())
    }

    /// Normalized length of an integral slope.
    pub fn slope_length(&self, p: i64, q: i64) -> Result<f64> {
        self.normalized_length(p as f64, q as f64)
    }
}

impl FromStr for CuspShape {
    type Err = Error;

    /// Parses `"re,im"`.
    fn from_str(s: &str) -> Result<Self> {
        let (re, im) = s
            .split_once(',')
            .ok_or_else(|| domain(format!("expected \"re,im\", got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| domain(format!("malformed number {t:?} in shape {s:?}")))
        };
        CuspShape::new(parse(re)?, parse(im)?)
    }
}

impl fmt::Display for CuspShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.re, self.im)
    }
}

/// Integer 2×2 matrix, row-major, acting on column slope vectors.
pub type SlopeMap = [[i64; 2]; 2];

fn apply(m: &SlopeMap, p: i64, q: i64) -> (i64, i64) {
    (m[0][0] * p + m[0][1] * q, m[1][0] * p + m[1][1] * q)
}

/// A Gauss-reduced modulus together with the slope change of basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedShape {
    pub shape: CuspShape,
    /// Maps slopes in the original basis to slopes in the reduced basis.
    pub slope_map: SlopeMap,
}

impl ReducedShape {
    pub fn to_reduced(&self, p: i64, q: i64) -> (i64, i64) {
        apply(&self.slope_map, p, q)
    }

    /// Inverse of [`ReducedShape::to_reduced`] (the map has determinant 1).
    pub fn to_original(&self, p: i64, q: i64) -> (i64, i64) {
        let [[a, b], [c, d]] = self.slope_map;
        apply(&[[d, -b], [-c, a]], p, q)
    }
}

/// Gauss reduction: returns `τ'` with `|Re τ'| ≤ 1/2` and `|τ'| ≥ 1`.
pub fn lattice_reduce(shape: CuspShape) -> ReducedShape {
    // Rows of `basis` express the current basis (ω1', ω2') in the original
    // (1, τ); the current modulus is ω2'/ω1'.
    let mut basis: SlopeMap = [[1, 0], [0, 1]];
    let (mut re, mut im) = (shape.re, shape.im);
    for _ in 0..10_000 {
        let n = re.round();
        if n != 0.0 {
            re -= n;
            let n = n as i64;
            basis[1][0] -= n * basis[0][0];
            basis[1][1] -= n * basis[0][1];
        }
        let norm2 = re * re + im * im;
        if norm2 >= 1.0 {
            break;
        }
        // τ ↦ −1/τ, basis (ω1, ω2) ↦ (ω2, −ω1)
        re = -re / norm2;
        im /= norm2;
        basis = [basis[1], [-basis[0][0], -basis[0][1]]];
    }
    // Slopes transform by the inverse transpose of the basis change.
    let [[a, b], [c, d]] = basis;
    ReducedShape {
        shape: CuspShape { re, im },
        slope_map: [[d, -c], [-b, a]],
    }
}

/// A primitive slope together with its normalized length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShortSlope {
    pub p: i64,
    pub q: i64,
    pub lhat: f64,
}

/// Representative of `±(p, q)` with `p > 0`, or `p = 0` and `q > 0`.
pub fn canonical_sign(p: i64, q: i64) -> (i64, i64) {
    if p < 0 || (p == 0 && q < 0) {
        (-p, -q)
    } else {
        (p, q)
    }
}

/// Coordinate bound for slopes of normalized length at most `cutoff` in a
/// Gauss-reduced basis.
///
/// For `|Re τ| ≤ 1/2`, `|τ| ≥ 1`:
/// `|p + qτ|² ≥ p² − |pq| + q² ≥ (3/4)·max(|p|, |q|)²`,
/// so `max(|p|, |q|) ≤ (2/√3)·cutoff·√Im τ`.
pub fn reduced_window(reduced: &CuspShape, cutoff: f64) -> i64 {
    let bound = 2.0 / 3f64.sqrt() * cutoff * reduced.im.sqrt();
    // absorb rounding in the comparison against cutoff
    (bound * (1.0 + 1e-12)).floor() as i64
}

/// All primitive slopes with `L̂ ≤ cutoff`, one per `±` pair, sorted by
/// `(L̂, p, q)`. Slopes are expressed in the basis of `shape`.
pub fn enumerate_short_slopes(shape: CuspShape, cutoff: f64) -> Result<Vec<ShortSlope>> {
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(domain(format!(
            "cutoff must be positive and finite, got {cutoff}"
        )));
    }
    let reduced = lattice_reduce(shape);
    let n = reduced_window(&reduced.shape, cutoff);
    let mut out = Vec::new();
    for q in 0..=n {
        for p in -n..=n {
            if q == 0 && p <= 0 {
                continue;
            }
            if p.gcd(&q) != 1 {
                continue;
            }
            let (op, oq) = reduced.to_original(p, q);
            let (op, oq) = canonical_sign(op, oq);
            let lhat = shape.slope_length(op, oq)?;
            if lhat <= cutoff {
                out.push(ShortSlope { p: op, q: oq, lhat });
            }
        }
    }
    out.sort_by(|a, b| {
        a.lhat
            .total_cmp(&b.lhat)
            .then(a.p.cmp(&b.p))
            .then(a.q.cmp(&b.q))
    });
    Ok(out)
}
