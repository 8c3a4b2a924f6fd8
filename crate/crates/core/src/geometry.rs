//! The circular double cone: embedding in R³, the surface constraint and
//! the measure weight `|l|` of the surface element.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{ensure_finite, Error, Result};

/// Half-opening angle `α ∈ (0, π/2)` with cached trigonometric values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeGeometry {
    alpha: f64,
    sin_alpha: f64,
    tan_alpha: f64,
}

impl ConeGeometry {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < FRAC_PI_2) {
            return Err(Error::Domain {
                what: "half-opening angle alpha",
                value: alpha,
            });
        }
        Ok(Self {
            alpha,
            sin_alpha: alpha.sin(),
            tan_alpha: alpha.tan(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sin_alpha(&self) -> f64 {
        self.sin_alpha
    }

    pub fn tan_alpha(&self) -> f64 {
        self.tan_alpha
    }

    pub fn sin2_alpha(&self) -> f64 {
        self.sin_alpha * self.sin_alpha
    }
}

/// A point of R³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl EmbeddingPoint {
    pub fn norm(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }
}

/// Maps the meridian coordinate `l` and angle `phi` onto the cone.
/// Negative `l` lands on the lower nappe.
pub fn embed(l: f64, phi: f64, geom: &ConeGeometry) -> Result<EmbeddingPoint> {
    ensure_finite("meridian coordinate l", l)?;
    ensure_finite("angle phi", phi)?;
    let rho = l * geom.sin_alpha;
    Ok(EmbeddingPoint {
        x1: rho * phi.cos(),
        x2: rho * phi.sin(),
        x3: l * geom.alpha.cos(),
    })
}

/// `x1² + x2² − tan²α·x3²`, zero on the surface.
pub fn surface_residual(p: &EmbeddingPoint, geom: &ConeGeometry) -> f64 {
    let t = geom.tan_alpha;
    p.x1 * p.x1 + p.x2 * p.x2 - t * t * p.x3 * p.x3
}

/// Weight of the invariant measure `|l| dl dφ`.
pub fn measure_weight(l: f64) -> f64 {
    l.abs()
}

/// Reduces an accumulated angle into `[0, 2π)`.
pub fn reduce_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn quarter() -> ConeGeometry {
        ConeGeometry::new(FRAC_PI_4).unwrap()
    }

    #[test]
    fn rejects_degenerate_angles() {
        assert!(ConeGeometry::new(0.0).is_err());
        assert!(ConeGeometry::new(FRAC_PI_2).is_err());
        assert!(ConeGeometry::new(2.0).is_err());
        assert!(ConeGeometry::new(f64::NAN).is_err());
    }

    #[test]
    fn embed_examples() {
        let g = quarter();
        let apex = embed(0.0, 1.0, &g).unwrap();
        assert_eq!(apex.norm(), 0.0);

        let up = embed(5.0, PI / 2.0, &g).unwrap();
        assert!(up.x1.abs() < 1e-12);
        assert!((up.x2 - 3.535534).abs() < 1e-6);
        assert!((up.x3 - 3.535534).abs() < 1e-6);

        let down = embed(-5.0, PI / 2.0, &g).unwrap();
        assert!((down.x2 + 3.535534).abs() < 1e-6);
        assert!((down.x3 + 3.535534).abs() < 1e-6);

        assert!(embed(f64::INFINITY, 0.0, &g).is_err());
        assert!(embed(1.0, f64::NAN, &g).is_err());
    }

    #[test]
    fn residual_examples() {
        let g = quarter();
        let p = embed(3.0, 0.7, &g).unwrap();
        assert!(surface_residual(&p, &g).abs() < 1e-12);
        let e1 = EmbeddingPoint {
            x1: 1.0,
            x2: 0.0,
            x3: 0.0,
        };
        assert!((surface_residual(&e1, &g) - 1.0).abs() < 1e-12);
        let e3 = EmbeddingPoint {
            x1: 0.0,
            x2: 0.0,
            x3: 1.0,
        };
        assert!((surface_residual(&e3, &g) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn measure_weight_is_abs() {
        assert_eq!(measure_weight(0.0), 0.0);
        assert_eq!(measure_weight(-2.5), 2.5);
        assert_eq!(measure_weight(7.0), 7.0);
    }

    #[test]
    fn reduce_angle_keeps_range() {
        assert!((reduce_angle(-0.5) - (TAU - 0.5)).abs() < 1e-12);
        assert!((reduce_angle(7.0) - (7.0 - TAU)).abs() < 1e-12);
        assert_eq!(reduce_angle(-1e-300), 0.0);
    }
}
