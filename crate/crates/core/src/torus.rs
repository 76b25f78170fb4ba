//! Flat geometry of tubular boundary tori.
//!
//! A torus at tube radius `R` around a geodesic is stored through the
//! Euclidean holonomy of a homology basis, written in the principal-curvature
//! frame: `x1` runs along the `coth R` direction (around the core) and `x2`
//! along the `tanh R` direction (parallel to the core). With that frame the
//! complex length of a class with holonomy `(x1, x2)` is
//!
//! ```text
//! L = x2 / cosh R + i · x1 / sinh R
//! ```
//!
//! The sign of `L` is fixed by the stored basis; callers must pass a
//! positively oriented basis (`x1(a)·x2(b) − x1(b)·x2(a) > 0`) for the
//! area-type quantities.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Tube radius of a boundary torus. `Infinite` is the horospherical limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TubeRadius {
    Finite(f64),
    Infinite,
}

impl TubeRadius {
    pub fn finite(r: f64) -> Result<Self> {
        if r.is_finite() && r > 0.0 {
            Ok(TubeRadius::Finite(r))
        } else if r == f64::INFINITY {
            Ok(TubeRadius::Infinite)
        } else {
            Err(domain(format!("tube radius must be positive, got {r}")))
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            TubeRadius::Finite(r) => Some(r),
            TubeRadius::Infinite => None,
        }
    }
}

/// Translation vector of the Euclidean holonomy in the principal frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Holonomy {
    pub x1: f64,
    pub x2: f64,
}

impl Holonomy {
    pub fn new(x1: f64, x2: f64) -> Self {
        Holonomy { x1, x2 }
    }

    pub fn norm(self) -> f64 {
        self.x1.hypot(self.x2)
    }
}

/// A real homology class `p·a + q·b` relative to a torus's stored basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeClass {
    pub p: f64,
    pub q: f64,
}

impl SlopeClass {
    pub fn new(p: f64, q: f64) -> Self {
        SlopeClass { p, q }
    }

    pub fn is_zero(self) -> bool {
        self.p == 0.0 && self.q == 0.0
    }

    pub fn scale(self, s: f64) -> Self {
        SlopeClass::new(s * self.p, s * self.q)
    }
}

/// Signed translation length plus total rotation angle (radians, not reduced mod 2π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexLength {
    pub trans: f64,
    pub rot: f64,
}

impl ComplexLength {
    pub fn new(trans: f64, rot: f64) -> Self {
        ComplexLength { trans, rot }
    }
}

/// Principal curvatures `(coth R, tanh R)` of a tube of radius `R`; `(1, 1)` at infinity.
pub fn principal_curvatures(radius: TubeRadius) -> Result<(f64, f64)> {
    match radius {
        TubeRadius::Infinite => Ok((1.0, 1.0)),
        TubeRadius::Finite(r) if r.is_finite() && r > 0.0 => {
            let t = r.tanh();
            Ok((1.0 / t, t))
        }
        TubeRadius::Finite(r) => Err(domain(format!("tube radius must be positive, got {r}"))),
    }
}

/// A flat boundary torus: tube radius and the holonomy of a basis `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubularTorus {
    radius: TubeRadius,
    basis: [Holonomy; 2],
}

impl TubularTorus {
    /// Fails on a non-positive radius or linearly dependent holonomy.
    pub fn new(radius: TubeRadius, a: Holonomy, b: Holonomy) -> Result<Self> {
        if let TubeRadius::Finite(r) = radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(domain(format!("tube radius must be positive, got {r}")));
            }
        }
        if ![a.x1, a.x2, b.x1, b.x2].iter().all(|v| v.is_finite()) {
            return Err(domain("holonomy components must be finite"));
        }
        let torus = TubularTorus {
            radius,
            basis: [a, b],
        };
        let det = torus.basis_determinant();
        let scale = a.norm() * b.norm();
        if det.abs() <= 1e-14 * scale || scale == 0.0 {
            return Err(Error::Degenerate(format!(
                "basis holonomy is linearly dependent (det {det})"
            )));
        }
        Ok(torus)
    }

    /// Builds the torus at radius `R` whose basis has the given complex lengths.
    ///
    /// The same complex lengths at two radii describe parallel tori of one end.
    pub fn from_complex_lengths(radius: f64, a: ComplexLength, b: ComplexLength) -> Result<Self> {
        let r = TubeRadius::finite(radius)?;
        let Some(r_val) = r.value() else {
            return Err(domain(
                "complex lengths determine holonomy only at finite radius",
            ));
        };
        let (s, c) = (r_val.sinh(), r_val.cosh());
        TubularTorus::new(
            r,
            Holonomy::new(a.rot * s, a.trans * c),
            Holonomy::new(b.rot * s, b.trans * c),
        )
    }

    pub fn radius(&self) -> TubeRadius {
        self.radius
    }

    pub fn basis(&self) -> [Holonomy; 2] {
        self.basis
    }

    /// `x1(a)·x2(b) − x1(b)·x2(a)`; positive for a positively oriented basis.
    pub fn basis_determinant(&self) -> f64 {
        let [a, b] = self.basis;
        a.x1 * b.x2 - b.x1 * a.x2
    }

    pub fn is_positively_oriented(&self) -> bool {
        self.basis_determinant() > 0.0
    }

    /// Euclidean area of the torus.
    pub fn area(&self) -> f64 {
        self.basis_determinant().abs()
    }

    /// Holonomy of `p·a + q·b`, extended real-linearly.
    pub fn holonomy(&self, slope: SlopeClass) -> Holonomy {
        let [a, b] = self.basis;
        Holonomy::new(
            slope.p * a.x1 + slope.q * b.x1,
            slope.p * a.x2 + slope.q * b.x2,
        )
    }

    pub fn principal_curvatures(&self) -> (f64, f64) {
        principal_curvatures(self.radius).expect("radius validated at construction")
    }

    /// Complex length of a class; identically zero on a horospherical torus.
    pub fn complex_length(&self, slope: SlopeClass) -> ComplexLength {
        match self.radius {
            TubeRadius::Infinite => ComplexLength::new(0.0, 0.0),
            TubeRadius::Finite(r) => {
                let h = self.holonomy(slope);
                ComplexLength::new(h.x2 / r.cosh(), h.x1 / r.sinh())
            }
        }
    }

    /// Euclidean length of the geodesic representative of a class.
    pub fn euclidean_length(&self, slope: SlopeClass) -> Result<f64> {
        if slope.is_zero() {
            return Err(domain("slope must be nonzero"));
        }
        Ok(self.holonomy(slope).norm())
    }

    /// Euclidean length recomputed from the complex length,
    /// `L² = (cosh R · Re L)² + (sinh R · Im L)²`. Finite radius only.
    pub fn euclidean_length_from_complex(&self, slope: SlopeClass) -> Result<f64> {
        if slope.is_zero() {
            return Err(domain("slope must be nonzero"));
        }
        let TubeRadius::Finite(r) = self.radius else {
            return Err(domain("complex length vanishes on a horospherical torus"));
        };
        let cl = self.complex_length(slope);
        Ok((r.cosh() * cl.trans).hypot(r.sinh() * cl.rot))
    }

    /// Visual area `area / (sinh R cosh R) = l_b·θ_a − l_a·θ_b`.
    pub fn visual_area(&self) -> Result<f64> {
        let TubeRadius::Finite(r) = self.radius else {
            return Err(domain("visual area needs a finite tube radius"));
        };
        let det = self.basis_determinant();
        if det <= 0.0 {
            return Err(Error::Orientation(det));
        }
        Ok(det / (r.sinh() * r.cosh()))
    }

    /// Visual area evaluated from the complex lengths of the basis.
    pub fn visual_area_from_complex_lengths(&self) -> Result<f64> {
        if matches!(self.radius, TubeRadius::Infinite) {
            return Err(domain("visual area needs a finite tube radius"));
        }
        let det = self.basis_determinant();
        if det <= 0.0 {
            return Err(Error::Orientation(det));
        }
        let la = self.complex_length(SlopeClass::new(1.0, 0.0));
        let lb = self.complex_length(SlopeClass::new(0.0, 1.0));
        Ok(lb.trans * la.rot - la.trans * lb.rot)
    }

    /// Length after rescaling the torus to unit area.
    pub fn normalized_length(&self, slope: SlopeClass) -> Result<f64> {
        Ok(self.euclidean_length(slope)? / self.area().sqrt())
    }

    /// The real class `c` with complex length `2πi`.
    pub fn surgery_coefficient(&self) -> Result<SlopeClass> {
        if matches!(self.radius, TubeRadius::Infinite) {
            return Err(Error::InfiniteCoefficient);
        }
        let la = self.complex_length(SlopeClass::new(1.0, 0.0));
        let lb = self.complex_length(SlopeClass::new(0.0, 1.0));
        // [la.trans lb.trans; la.rot lb.rot] · (p, q)ᵀ = (0, 2π)ᵀ
        let det = la.trans * lb.rot - lb.trans * la.rot;
        let scale = la.trans.hypot(la.rot) * lb.trans.hypot(lb.rot);
        if det.abs() <= 1e-14 * scale || scale == 0.0 {
            return Err(Error::Degenerate(format!(
                "complex-length matrix is singular (det {det})"
            )));
        }
        let two_pi = std::f64::consts::TAU;
        Ok(SlopeClass::new(
            -lb.trans * two_pi / det,
            la.trans * two_pi / det,
        ))
    }
}
