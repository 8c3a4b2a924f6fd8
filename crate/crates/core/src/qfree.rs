//! Free quantum particle on the double cone.
//!
//! Stationary states are `e^{ijφ} u(l)` where `u` solves
//! `u'' + u'/l + (2mE − ν²/l²) u = 0` with `ν² = 1/4 + j²/sin²α`.
//! For `j ≠ 0` the regular solution is `J_ν(√(2mE)|l|)` on each nappe
//! separately; for `j = 0` both `sin` and `cos` branches over `√|l|` survive.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::ConeGeometry;
use crate::specfun::{bessel_j_unchecked, AdaptiveQuad};

/// Bessel order `sqrt(1/4 + j²/sin²α)`.
pub fn nu_order(j: f64, geom: &ConeGeometry) -> f64 {
    (0.25 + j * j / geom.sin2_alpha()).sqrt()
}

/// A continuum eigenstate with amplitudes `A` (upper nappe, `l > 0`) and
/// `B` (lower nappe, `l < 0`). For `j = 0` the amplitudes multiply the
/// `sin` and `cos` branches instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEigenstate {
    j: f64,
    energy: f64,
    upper: Complex64,
    lower: Complex64,
    nu: f64,
}

impl FreeEigenstate {
    pub fn new(j: f64, energy: f64, upper: Complex64, lower: Complex64, geom: &ConeGeometry) -> Result<Self> {
        if !j.is_finite() {
            return Err(Error::Domain { what: "j", value: j });
        }
        if !(energy >= 0.0) || !energy.is_finite() {
            return Err(Error::Domain {
                what: "energy",
                value: energy,
            });
        }
        Ok(Self {
            j,
            energy,
            upper,
            lower,
            nu: nu_order(j, geom),
        })
    }

    /// Delta-normalized state with real non-negative amplitudes and a share
    /// `upper_weight ∈ [0, 1]` of `|A|² + |B|²` on the first amplitude.
    pub fn normalized(j: f64, energy: f64, mass: f64, upper_weight: f64, geom: &ConeGeometry) -> Result<Self> {
        if !(0.0..=1.0).contains(&upper_weight) {
            return Err(Error::Domain {
                what: "upper_weight",
                value: upper_weight,
            });
        }
        let total = normalization_target(j, energy, mass);
        let a = (upper_weight * total).sqrt();
        let b = ((1.0 - upper_weight) * total).sqrt();
        Self::new(j, energy, Complex64::new(a, 0.0), Complex64::new(b, 0.0), geom)
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn upper(&self) -> Complex64 {
        self.upper
    }

    pub fn lower(&self) -> Complex64 {
        self.lower
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `f(l, φ) = e^{ijφ} u(l)`.
    pub fn evaluate(&self, l: f64, phi: f64, mass: f64) -> Result<Complex64> {
        Ok(Complex64::from_polar(1.0, self.j * phi) * radial_free(self, l, mass)?)
    }
}

/// Radial profile. For `j ≠ 0`: `A·J_ν(k l)` for `l > 0`, `B·J_ν(k|l|)` for
/// `l < 0` and `0` at the apex, with `k = √(2mE)`. A `j = 0` state is
/// evaluated through [`j0_free`] and is singular at `l = 0`.
pub fn radial_free(state: &FreeEigenstate, l: f64, mass: f64) -> Result<Complex64> {
    if state.j == 0.0 {
        return j0_free(state.energy, l, state.upper, state.lower, mass);
    }
    let k = (2.0 * mass * state.energy).sqrt();
    if l == 0.0 || k == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let amp = if l > 0.0 { state.upper } else { state.lower };
    if amp == Complex64::new(0.0, 0.0) {
        return Ok(amp);
    }
    Ok(amp * bessel_j_unchecked(state.nu, k * l.abs()))
}

/// `j = 0` profile `(A sin(kl) + B cos(kl))/√|l|`.
pub fn j0_free(energy: f64, l: f64, a: Complex64, b: Complex64, mass: f64) -> Result<Complex64> {
    if !(energy >= 0.0) {
        return Err(Error::Domain {
            what: "energy",
            value: energy,
        });
    }
    if l == 0.0 {
        return Err(Error::Singularity {
            l,
            angular_momentum: 0.0,
        });
    }
    let kl = (2.0 * mass * energy).sqrt() * l;
    Ok((a * kl.sin() + b * kl.cos()) / l.abs().sqrt())
}

/// Required `|A|² + |B|²`: `m√E/π` for `j ≠ 0`, `√(2m)/(2π²)` for `j = 0`,
/// and `|B|² = 1/(4π²)` for the zero-energy `j = 0` state.
fn normalization_target(j: f64, energy: f64, mass: f64) -> f64 {
    if j != 0.0 {
        mass * energy.sqrt() / PI
    } else if energy > 0.0 {
        (2.0 * mass).sqrt() / (2.0 * PI * PI)
    } else {
        1.0 / (4.0 * PI * PI)
    }
}

/// `|A|² + |B|²` minus the sector's required value (only `|B|²` counts for
/// the zero-energy `j = 0` state, whose `sin` branch vanishes).
pub fn check_normalization(state: &FreeEigenstate, mass: f64) -> f64 {
    let target = normalization_target(state.j, state.energy, mass);
    if state.j == 0.0 && state.energy == 0.0 {
        state.lower.norm_sqr() - target
    } else {
        state.upper.norm_sqr() + state.lower.norm_sqr() - target
    }
}

pub(crate) const FD_STEP: f64 = 1e-3;

/// `(u, u', u'')` by fourth-order central differences.
pub(crate) fn central_differences<F: Fn(f64) -> f64>(u: &F, l: f64, h: f64) -> (f64, f64, f64) {
    let (m2, m1, c, p1, p2) = (u(l - 2.0 * h), u(l - h), u(l), u(l + h), u(l + 2.0 * h));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
    (c, d1, d2)
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    match grid.iter().find(|l| !(l.abs() > 2.0 * FD_STEP) || !l.is_finite()) {
        Some(&l) => Err(Error::Domain {
            what: "residual grid point (too close to the apex)",
            value: l,
        }),
        None if grid.is_empty() => Err(Error::Domain {
            what: "residual grid length",
            value: 0.0,
        }),
        None => Ok(()),
    }
}

/// `max |u'' + u'/l + (2mE − ν²/l²) u|` over the grid, divided by `max|u|·2mE`.
pub fn ode_residual_free<F: Fn(f64) -> f64>(
    profile: F,
    j: f64,
    energy: f64,
    mass: f64,
    geom: &ConeGeometry,
    grid: &[f64],
) -> Result<f64> {
    check_grid(grid)?;
    let nu2 = 0.25 + j * j / geom.sin2_alpha();
    let k2 = 2.0 * mass * energy;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &l in grid {
        let (u, d1, d2) = central_differences(&profile, l, FD_STEP);
        worst = worst.max((d2 + d1 / l + (k2 - nu2 / (l * l)) * u).abs());
        scale = scale.max(u.abs());
    }
    Ok(worst / (scale * k2))
}

fn closure_integrand(nu: f64, a: f64, b: f64) -> impl Fn(f64) -> f64 {
    move |x| x * bessel_j_unchecked(nu, a * x) * bessel_j_unchecked(nu, b * x)
}

fn closure_args(nu: f64, a: f64, b: f64) -> Result<()> {
    if !(nu > -0.5) {
        return Err(Error::Domain {
            what: "Bessel order (must exceed -1/2)",
            value: nu,
        });
    }
    for v in [a, b] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain {
                what: "closure scale",
                value: v,
            });
        }
    }
    Ok(())
}

const CLOSURE_TOL: f64 = 1e-11;
const CLOSURE_PIECE: f64 = 0.25;

/// `∫₀^L x J_ν(ax) J_ν(bx) dx`.
pub fn closure_finite(nu: f64, a: f64, b: f64, upper: f64) -> Result<f64> {
    closure_args(nu, a, b)?;
    if !(upper >= 0.0) {
        return Err(Error::Domain {
            what: "upper limit",
            value: upper,
        });
    }
    let f = closure_integrand(nu, a, b);
    let quad = AdaptiveQuad::new(CLOSURE_TOL);
    let pieces = (upper / CLOSURE_PIECE).ceil().max(1.0) as usize;
    let mut total = 0.0;
    for i in 0..pieces {
        let x0 = upper * i as f64 / pieces as f64;
        let x1 = upper * (i + 1) as f64 / pieces as f64;
        total += quad.integrate(&f, x0, x1)?;
    }
    Ok(total)
}

/// Running average `(1/(L₂−L₁)) ∫_{L₁}^{L₂} F(L) dL` of the finite closure
/// integral `F`. For `a ≠ b` this tends to zero as the window moves out.
pub fn closure_cesaro_mean(nu: f64, a: f64, b: f64, from: f64, to: f64) -> Result<f64> {
    if !(to > from) || !(from >= 0.0) {
        return Err(Error::Domain {
            what: "averaging window",
            value: to - from,
        });
    }
    let mut n = ((to - from) / CLOSURE_PIECE).ceil() as usize;
    n += n % 2;
    let h = (to - from) / n as f64;
    let f = closure_integrand(nu, a, b);
    let quad = AdaptiveQuad::new(CLOSURE_TOL);
    let mut value = closure_finite(nu, a, b, from)?;
    // composite Simpson over the window
    let mut acc = value;
    for i in 1..=n {
        let x0 = from + (i - 1) as f64 * h;
        let x1 = if i == n { to } else { from + i as f64 * h };
        value += quad.integrate(&f, x0, x1)?;
        let w = if i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * value;
    }
    Ok(acc * h / 3.0 / (to - from))
}

/// `(1/2π) ∫₀^{2π} e^{−ijφ} e^{ij'φ} dφ` by quadrature.
pub fn angular_overlap(j: f64, j_prime: f64) -> Result<Complex64> {
    let dj = j_prime - j;
    let quad = AdaptiveQuad::new(1e-14);
    let re = quad.integrate(|p| (dj * p).cos(), 0.0, 2.0 * PI)?;
    let im = quad.integrate(|p| (dj * p).sin(), 0.0, 2.0 * PI)?;
    Ok(Complex64::new(re, im) / (2.0 * PI))
}
