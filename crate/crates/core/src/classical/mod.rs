//! Classical dynamics on the double cone: the Hamiltonian, Hamilton's
//! equations and the closed-form orbits of the free particle and of the
//! particle bound to the apex by a harmonic potential.

mod free;
mod limits;
mod oscillator;

pub use free::{free_angle, free_bound, free_momentum, free_radial, free_scattering_angle};
pub use limits::{limit_j_to_zero, LimitKind, MeridianData};
pub use oscillator::{osc_angle, osc_bounds, osc_meridian, osc_momentum, osc_radial};

use crate::error::{Error, Result};
use crate::geometry::ConeGeometry;
use crate::specfun::sign;

/// Mass and oscillator frequency; `omega = 0` selects free motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleParams {
    mass: f64,
    omega: f64,
}

impl ParticleParams {
    pub fn new(mass: f64, omega: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Domain {
                what: "mass",
                value: mass,
            });
        }
        if !(omega >= 0.0) || !omega.is_finite() {
            return Err(Error::Domain {
                what: "omega",
                value: omega,
            });
        }
        Ok(Self { mass, omega })
    }

    pub fn free(mass: f64) -> Result<Self> {
        Self::new(mass, 0.0)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn is_free(&self) -> bool {
        self.omega == 0.0
    }
}

/// Canonical state. `phi` is kept unreduced so winding is preserved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub t: f64,
    pub l: f64,
    pub phi: f64,
    pub p_l: f64,
    /// Angular momentum `J`.
    pub p_phi: f64,
}

impl PhasePoint {
    pub fn new(t: f64, l: f64, phi: f64, p_l: f64, p_phi: f64) -> Self {
        Self { t, l, phi, p_l, p_phi }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite()
            && self.l.is_finite()
            && self.phi.is_finite()
            && self.p_l.is_finite()
            && self.p_phi.is_finite()
    }
}

/// Time derivatives `(dl/dt, dφ/dt, dp_l/dt, dp_φ/dt)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub l: f64,
    pub phi: f64,
    pub p_l: f64,
    pub p_phi: f64,
}

fn check_apex(state: &PhasePoint) -> Result<()> {
    if state.l == 0.0 && state.p_phi != 0.0 {
        return Err(Error::Singularity {
            l: state.l,
            angular_momentum: state.p_phi,
        });
    }
    Ok(())
}

/// `H = p_l²/2m + J²/(2m l² sin²α) + mω²l²/2`.
pub fn energy(state: &PhasePoint, params: &ParticleParams, geom: &ConeGeometry) -> Result<f64> {
    check_apex(state)?;
    let m = params.mass;
    let l2 = state.l * state.l;
    let centrifugal = if state.p_phi == 0.0 {
        0.0
    } else {
        state.p_phi * state.p_phi / (2.0 * m * l2 * geom.sin2_alpha())
    };
    Ok(state.p_l * state.p_l / (2.0 * m) + centrifugal + 0.5 * m * params.omega * params.omega * l2)
}

/// Hamilton's equations.
pub fn rhs(state: &PhasePoint, params: &ParticleParams, geom: &ConeGeometry) -> Result<Derivative> {
    check_apex(state)?;
    let m = params.mass;
    let j = state.p_phi;
    let restoring = -m * params.omega * params.omega * state.l;
    if j == 0.0 {
        return Ok(Derivative {
            l: state.p_l / m,
            phi: 0.0,
            p_l: restoring,
            p_phi: 0.0,
        });
    }
    let s2 = geom.sin2_alpha();
    let l2 = state.l * state.l;
    Ok(Derivative {
        l: state.p_l / m,
        phi: j / (m * l2 * s2),
        p_l: j * j / (m * l2 * state.l * s2) + restoring,
        p_phi: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    /// Free motion with `J ≠ 0`.
    Free,
    /// Harmonic motion with `J ≠ 0`.
    Oscillator,
    /// `J = 0`, `ω = 0`: uniform motion along a generator through the apex.
    MeridianLine,
    /// `J = 0`, `ω > 0`: harmonic oscillation along a generator through the apex.
    MeridianOscillation,
}

impl OrbitKind {
    pub fn name(&self) -> &'static str {
        match self {
            OrbitKind::Free => "free",
            OrbitKind::Oscillator => "oscillator",
            OrbitKind::MeridianLine => "meridian-line",
            OrbitKind::MeridianOscillation => "meridian-oscillation",
        }
    }
}

/// Integration constants of an exact orbit, fixed from one phase point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormOrbit {
    kind: OrbitKind,
    energy: f64,
    angular_momentum: f64,
    /// Time shift `C`: the orbit depends on `t + C`.
    shift: f64,
    nappe: f64,
    phi0: f64,
    t0: f64,
    l0: f64,
    p_l0: f64,
    /// `sqrt(E² − J²ω²/sin²α)` for oscillator orbits, 0 otherwise.
    discriminant_root: f64,
    params: ParticleParams,
    geom: ConeGeometry,
}

impl ClosedFormOrbit {
    pub fn kind(&self) -> OrbitKind {
        self.kind
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn angular_momentum(&self) -> f64 {
        self.angular_momentum
    }

    /// The integration constant `C`.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// +1 on the upper nappe, −1 on the lower one.
    pub fn nappe(&self) -> f64 {
        self.nappe
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn params(&self) -> &ParticleParams {
        &self.params
    }

    pub fn geometry(&self) -> &ConeGeometry {
        &self.geom
    }

    /// `sqrt(E² − J²ω²/sin²α)`, the amplitude of the oscillating part of `l²`.
    /// Zero for free orbits.
    pub fn discriminant_root(&self) -> f64 {
        self.discriminant_root
    }

    fn require(&self, expected: OrbitKind) -> Result<()> {
        if self.kind == expected {
            Ok(())
        } else {
            Err(Error::OrbitKind {
                expected: expected.name(),
                actual: self.kind.name(),
            })
        }
    }

    /// Meridian coordinate at time `t`.
    pub fn radial(&self, t: f64) -> f64 {
        match self.kind {
            OrbitKind::Free => free::radial(self, t),
            OrbitKind::Oscillator => oscillator::radial(self, t),
            OrbitKind::MeridianLine => self.l0 + self.p_l0 * (t - self.t0) / self.params.mass,
            OrbitKind::MeridianOscillation => {
                osc_meridian(t - self.t0, self.l0, self.p_l0, self.params.mass, self.params.omega).0
            }
        }
    }

    /// Accumulated (unreduced) angle at time `t`.
    pub fn angle(&self, t: f64) -> f64 {
        match self.kind {
            OrbitKind::Free => free::angle(self, t),
            OrbitKind::Oscillator => oscillator::angle(self, t),
            OrbitKind::MeridianLine | OrbitKind::MeridianOscillation => self.phi0,
        }
    }

    pub fn momentum(&self, t: f64) -> f64 {
        match self.kind {
            OrbitKind::Free => free::momentum(self, t),
            OrbitKind::Oscillator => oscillator::momentum(self, t),
            OrbitKind::MeridianLine => self.p_l0,
            OrbitKind::MeridianOscillation => {
                osc_meridian(t - self.t0, self.l0, self.p_l0, self.params.mass, self.params.omega).1
            }
        }
    }

    pub fn state(&self, t: f64) -> PhasePoint {
        PhasePoint {
            t,
            l: self.radial(t),
            phi: self.angle(t),
            p_l: self.momentum(t),
            p_phi: self.angular_momentum,
        }
    }
}

/// Fixes the closed-form orbit through `initial`.
///
/// The time shift is obtained by inverting the closed form at `t₀`, with
/// the branch selected by the sign of `p_l(t₀)`.
pub fn fit_orbit(initial: &PhasePoint, params: &ParticleParams, geom: &ConeGeometry) -> Result<ClosedFormOrbit> {
    if !initial.is_finite() {
        return Err(Error::Domain {
            what: "initial state",
            value: f64::NAN,
        });
    }
    check_apex(initial)?;
    let e = energy(initial, params, geom)?;
    let j = initial.p_phi;
    let m = params.mass;
    let w = params.omega;
    let mut orbit = ClosedFormOrbit {
        kind: OrbitKind::MeridianLine,
        energy: e,
        angular_momentum: j,
        shift: 0.0,
        nappe: if initial.l < 0.0 { -1.0 } else { 1.0 },
        phi0: initial.phi,
        t0: initial.t,
        l0: initial.l,
        p_l0: initial.p_l,
        discriminant_root: 0.0,
        params: *params,
        geom: *geom,
    };
    match (j == 0.0, params.is_free()) {
        (true, true) => {}
        (true, false) => orbit.kind = OrbitKind::MeridianOscillation,
        (false, true) => {
            orbit.kind = OrbitKind::Free;
            // p_l = nappe·2E(t+C)/|l|  ⇒  t₀ + C = p_l0·l0 / 2E
            orbit.shift = initial.p_l * initial.l / (2.0 * e) - initial.t;
        }
        (false, false) => {
            orbit.kind = OrbitKind::Oscillator;
            let d = oscillator::discriminant_root(e, j, w, geom)?;
            orbit.discriminant_root = d;
            if d > 0.0 {
                // sin θ₀ and cos θ₀ of θ₀ = 2ω(t₀ + C)
                let sin0 = (m * w * w * initial.l * initial.l - e) / d;
                let cos0 = initial.p_l * w * initial.l / d;
                let theta0 = sin0.atan2(cos0);
                orbit.shift = theta0 / (2.0 * w) - initial.t;
            } else {
                // circular orbit: the phase is immaterial
                orbit.shift = -initial.t;
            }
        }
    }
    Ok(orbit)
}

/// `ε(J)` with the convention `ε(0) = 0`.
pub(crate) fn eps(j: f64) -> f64 {
    sign(j)
}
