//! Geodesics: closed-form free motion with `J ≠ 0`.

use std::f64::consts::PI;

use super::{eps, ClosedFormOrbit, OrbitKind};
use crate::error::{Error, Result};
use crate::geometry::ConeGeometry;

/// `(2E/m)τ² + J²/(2mE sin²α)`, the square of the radial distance.
fn radius_squared(orbit: &ClosedFormOrbit, tau: f64) -> f64 {
    let m = orbit.params.mass();
    let e = orbit.energy;
    let j = orbit.angular_momentum;
    2.0 * e / m * tau * tau + j * j / (2.0 * m * e * orbit.geom.sin2_alpha())
}

pub(super) fn radial(orbit: &ClosedFormOrbit, t: f64) -> f64 {
    orbit.nappe * radius_squared(orbit, t + orbit.shift).sqrt()
}

pub(super) fn momentum(orbit: &ClosedFormOrbit, t: f64) -> f64 {
    let tau = t + orbit.shift;
    orbit.nappe * 2.0 * orbit.energy * tau / radius_squared(orbit, tau).sqrt()
}

/// `φ₀ + (ε(J)/sinα)[arctan(κ(t+C)) − arctan(κ(t₀+C))]`, `κ = 2E sinα/|J|`.
pub(super) fn angle(orbit: &ClosedFormOrbit, t: f64) -> f64 {
    let s = orbit.geom.sin_alpha();
    let j = orbit.angular_momentum;
    let kappa = 2.0 * orbit.energy * s / j.abs();
    let a = (kappa * (t + orbit.shift)).atan();
    let a0 = (kappa * (orbit.t0 + orbit.shift)).atan();
    orbit.phi0 + eps(j) / s * (a - a0)
}

pub fn free_radial(t: f64, orbit: &ClosedFormOrbit) -> Result<f64> {
    orbit.require(OrbitKind::Free)?;
    Ok(radial(orbit, t))
}

pub fn free_momentum(t: f64, orbit: &ClosedFormOrbit) -> Result<f64> {
    orbit.require(OrbitKind::Free)?;
    Ok(momentum(orbit, t))
}

/// Angle along a free orbit; constant on a meridian line.
pub fn free_angle(t: f64, orbit: &ClosedFormOrbit) -> Result<f64> {
    match orbit.kind {
        OrbitKind::Free => Ok(angle(orbit, t)),
        OrbitKind::MeridianLine => Ok(orbit.phi0),
        other => Err(Error::OrbitKind {
            expected: OrbitKind::Free.name(),
            actual: other.name(),
        }),
    }
}

/// Distance of closest approach to the apex, `|J|/(√(2mE) sinα)`.
pub fn free_bound(energy: f64, angular_momentum: f64, mass: f64, geom: &ConeGeometry) -> Result<f64> {
    if !(energy > 0.0) {
        return Err(Error::Domain {
            what: "energy (must be > 0)",
            value: energy,
        });
    }
    Ok(angular_momentum.abs() / ((2.0 * mass * energy).sqrt() * geom.sin_alpha()))
}

/// Total angular swing of a geodesic over `t ∈ (−∞, ∞)`: `π/sinα`.
pub fn free_scattering_angle(geom: &ConeGeometry) -> f64 {
    PI / geom.sin_alpha()
}
