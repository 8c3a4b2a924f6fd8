//! Classical and quantum mechanics of a particle on a circular double cone.
//!
//! - [`geometry`]: the cone surface and its measure.
//! - [`classical`]: Hamiltonians, Hamilton's equations and closed-form orbits
//!   for free motion and for the harmonic potential.
//! - [`integrate`]: adaptive Dormand–Prince integration of those flows with
//!   conservation audits, turning-point detection and the perturbation
//!   experiment showing that motion through the apex is unstable.
//! - [`specfun`]: Gamma, Bessel, Laguerre, Hermite, Kummer U and quadrature.
//! - [`qfree`]: free quantum particle (Bessel continuum states).
//! - [`qosc`]: quantum oscillator (Laguerre / Hermite bound states).
//!
//! Units have ħ = 1.

pub mod classical;
pub mod error;
pub mod geometry;
pub mod integrate;
pub mod qfree;
pub mod qosc;
pub mod specfun;

pub use classical::{fit_orbit, ClosedFormOrbit, OrbitKind, ParticleParams, PhasePoint};
pub use error::{Error, Result};
pub use geometry::{ConeGeometry, EmbeddingPoint};
pub use integrate::{ConservationReport, DivergenceReport, Trajectory};
pub use qfree::FreeEigenstate;
pub use qosc::{OscillatorLevel, RadialFunction};
