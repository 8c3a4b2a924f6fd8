//! Shared fixtures for the benchmarks.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use cone_core::{ConeGeometry, ParticleParams, PhasePoint};

pub const OMEGA: f64 = SQRT_2;

pub fn cone() -> ConeGeometry {
    ConeGeometry::new(FRAC_PI_4).expect("valid opening angle")
}

pub fn free_params() -> ParticleParams {
    ParticleParams::free(1.0).expect("positive mass")
}

pub fn oscillator_params() -> ParticleParams {
    ParticleParams::new(1.0, OMEGA).expect("positive mass and frequency")
}

/// Reference geodesic: l = 5, φ = π/2, p_l = −1, J = 1.
pub fn geodesic_start() -> PhasePoint {
    PhasePoint::new(0.0, 5.0, FRAC_PI_2, -1.0, 1.0)
}

/// Reference oscillator orbit: l = 9, φ = 0.1, p_l = −1, J = 20.
pub fn oscillator_start() -> PhasePoint {
    PhasePoint::new(0.0, 9.0, 0.1, -1.0, 20.0)
}

/// Meridian start used by the instability sweep.
pub fn meridian_start() -> PhasePoint {
    PhasePoint {
        p_phi: 0.0,
        ..geodesic_start()
    }
}
