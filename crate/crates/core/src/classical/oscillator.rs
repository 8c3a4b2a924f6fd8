//! Closed-form motion in the harmonic potential.

use super::{eps, ClosedFormOrbit, OrbitKind};
use crate::error::{Error, Result};
use crate::geometry::ConeGeometry;

/// `sqrt(E² − J²ω²/sin²α)`. Round-off below zero is clamped for
/// near-circular orbits; a clearly negative discriminant is an error.
pub(super) fn discriminant_root(energy: f64, j: f64, omega: f64, geom: &ConeGeometry) -> Result<f64> {
    let w2 = j * j * omega * omega / geom.sin2_alpha();
    let disc = energy * energy - w2;
    if disc >= 0.0 {
        Ok(disc.sqrt())
    } else if -disc <= 1e-12 * energy * energy {
        Ok(0.0)
    } else {
        Err(Error::Infeasible { discriminant: disc })
    }
}

fn theta(orbit: &ClosedFormOrbit, t: f64) -> f64 {
    2.0 * orbit.params.omega() * (t + orbit.shift)
}

pub(super) fn radial(orbit: &ClosedFormOrbit, t: f64) -> f64 {
    let m = orbit.params.mass();
    let w = orbit.params.omega();
    let num = orbit.energy + orbit.discriminant_root * theta(orbit, t).sin();
    orbit.nappe * (num.max(0.0) / (m * w * w)).sqrt()
}

pub(super) fn momentum(orbit: &ClosedFormOrbit, t: f64) -> f64 {
    let th = theta(orbit, t);
    let d = orbit.discriminant_root;
    let den = (orbit.energy + d * th.sin()).max(0.0).sqrt();
    if d == 0.0 {
        return 0.0;
    }
    orbit.nappe * orbit.params.mass().sqrt() * d * th.cos() / den
}

/// Continuous branch of `arctan((E tan x + D)/W)` with `W = |J|ω/sinα`.
///
/// Written as `x + atan2(..)`: the bracketed difference `ψ − x` stays in
/// `(−π, π)` because `ψ` and `x` always share a branch cell, so no explicit
/// counting of tangent poles is needed.
fn unwrapped_phase(x: f64, e: f64, d: f64, w: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let num = (e - w) * s * c + d * c * c;
    let den = w * c * c + d * s * c + e * s * s;
    x + num.atan2(den)
}

pub(super) fn angle(orbit: &ClosedFormOrbit, t: f64) -> f64 {
    let s = orbit.geom.sin_alpha();
    let j = orbit.angular_momentum;
    let w = orbit.params.omega();
    let big_w = j.abs() * w / s;
    let e = orbit.energy;
    let d = orbit.discriminant_root;
    let psi = unwrapped_phase(w * (t + orbit.shift), e, d, big_w);
    let psi0 = unwrapped_phase(w * (orbit.t0 + orbit.shift), e, d, big_w);
    orbit.phi0 + eps(j) / s * (psi - psi0)
}

/// `J = 0` harmonic motion along a generator: returns `(l, p_l)` at elapsed time `t`.
pub fn osc_meridian(t: f64, l0: f64, p_l0: f64, mass: f64, omega: f64) -> (f64, f64) {
    let (s, c) = (omega * t).sin_cos();
    (l0 * c + p_l0 / (mass * omega) * s, p_l0 * c - omega * mass * l0 * s)
}

pub fn osc_radial(t: f64, orbit: &ClosedFormOrbit) -> Result<f64> {
    orbit.require(OrbitKind::Oscillator)?;
    Ok(radial(orbit, t))
}

pub fn osc_momentum(t: f64, orbit: &ClosedFormOrbit) -> Result<f64> {
    orbit.require(OrbitKind::Oscillator)?;
    Ok(momentum(orbit, t))
}

/// Angle along an oscillator orbit; constant for `J = 0`.
pub fn osc_angle(t: f64, orbit: &ClosedFormOrbit) -> Result<f64> {
    match orbit.kind {
        OrbitKind::Oscillator => Ok(angle(orbit, t)),
        OrbitKind::MeridianOscillation => Ok(orbit.phi0),
        other => Err(Error::OrbitKind {
            expected: OrbitKind::Oscillator.name(),
            actual: other.name(),
        }),
    }
}

/// Turning radii `(l_min, l_max)` of `|l|`.
pub fn osc_bounds(
    energy: f64,
    angular_momentum: f64,
    mass: f64,
    omega: f64,
    geom: &ConeGeometry,
) -> Result<(f64, f64)> {
    if !(omega > 0.0) {
        return Err(Error::Domain {
            what: "omega (must be > 0)",
            value: omega,
        });
    }
    let d = discriminant_root(energy, angular_momentum, omega, geom)?;
    let k = mass * omega * omega;
    Ok((((energy - d).max(0.0) / k).sqrt(), ((energy + d) / k).sqrt()))
}
