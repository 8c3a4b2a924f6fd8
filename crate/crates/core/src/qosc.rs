//! Quantum harmonic oscillator on the double cone.
//!
//! With `f = e^{ijφ} ũ(l)/√(2π|l|)` the radial equation becomes
//! `ũ'' + (2mE − j²/(l² sin²α) − (mω)² l²) ũ = 0` on the whole line.
//! For `j ≠ 0` the normalizable solutions are
//! `ũ = (−1)^n C |l|^s e^{−x/2} L_n^k(x)` with `x = mωl²`, `s(s−1) = j²/sin²α`
//! (larger root) and `k = s − 1/2`. The `j = 0` sector is the ordinary
//! oscillator on a meridian, with Hermite eigenfunctions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::ConeGeometry;
use crate::qfree::{central_differences, check_grid, FD_STEP};
use crate::specfun::{hermite, kummer_u_poly, laguerre, ln_gamma_unchecked, AdaptiveQuad};

const MAX_GRAM_LEVEL: u32 = 10;

/// Larger root of `s(s−1) = j²/sin²α`.
pub fn s_exponent(j: f64, geom: &ConeGeometry) -> Result<f64> {
    if j == 0.0 {
        return Err(Error::Sector);
    }
    Ok(0.5 * (1.0 + (1.0 + 4.0 * j * j / geom.sin2_alpha()).sqrt()))
}

/// Laguerre parameter `k = s − 1/2 = √(1 + 4j²/sin²α)/2`.
pub fn lag_order(j: f64, geom: &ConeGeometry) -> Result<f64> {
    if j == 0.0 {
        return Err(Error::Sector);
    }
    Ok(0.5 * (1.0 + 4.0 * j * j / geom.sin2_alpha()).sqrt())
}

/// `E_{j,n} = 2ω(n + 1/2 + √(1 + 4j²/sin²α)/4)` for `j ≠ 0`, `ω(n + 1/2)` for `j = 0`.
pub fn energy_osc(j: f64, n: u32, omega: f64, geom: &ConeGeometry) -> f64 {
    let n = n as f64;
    if j == 0.0 {
        omega * (n + 0.5)
    } else {
        2.0 * omega * (n + 0.5 + 0.25 * (1.0 + 4.0 * j * j / geom.sin2_alpha()).sqrt())
    }
}

/// `lim_{j→0} E_{j,n} = ω(2n + 3/2)`.
pub fn limit_energy_osc(n: u32, omega: f64) -> f64 {
    omega * (2.0 * n as f64 + 1.5)
}

/// Quantum numbers and energy of a bound state.
///
/// For `j = 0`, `n` is the Hermite index. Such a level is still written in
/// the Laguerre form, with `s = n mod 2`, `k = s − 1/2` and radial index
/// `⌊n/2⌋`, so that `energy = 2ω(n_r + s/2 + 1/4)` holds in both sectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorLevel {
    j: f64,
    n: u32,
    s: f64,
    lag_order: f64,
    energy: f64,
    omega: f64,
}

impl OscillatorLevel {
    pub fn new(j: f64, n: u32, omega: f64, geom: &ConeGeometry) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::Domain {
                what: "omega",
                value: omega,
            });
        }
        if !j.is_finite() {
            return Err(Error::Domain { what: "j", value: j });
        }
        let (s, k) = if j == 0.0 {
            let s = (n % 2) as f64;
            (s, s - 0.5)
        } else {
            (s_exponent(j, geom)?, lag_order(j, geom)?)
        };
        Ok(Self {
            j,
            n,
            s,
            lag_order: k,
            energy: energy_osc(j, n, omega, geom),
            omega,
        })
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn lag_order(&self) -> f64 {
        self.lag_order
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Level of the `j = 0` (meridian) sector.
    pub fn is_meridian(&self) -> bool {
        self.j == 0.0
    }

    /// Degree of the Laguerre polynomial.
    pub fn radial_index(&self) -> u32 {
        if self.is_meridian() {
            self.n / 2
        } else {
            self.n
        }
    }
}

/// Normalized radial function `ũ` of a level, unit norm in `L²(ℝ, dl)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialFunction {
    level: OscillatorLevel,
    mass: f64,
    ln_norm: f64,
}

impl RadialFunction {
    pub fn new(level: OscillatorLevel, mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Domain {
                what: "mass",
                value: mass,
            });
        }
        let nr = level.radial_index() as f64;
        let k = level.lag_order;
        let mw = mass * level.omega;
        let ln_norm = 0.5 * ((1.0 + k) * mw.ln() + ln_gamma_unchecked(nr + 1.0) - ln_gamma_unchecked(nr + 1.0 + k));
        Ok(Self { level, mass, ln_norm })
    }

    pub fn level(&self) -> &OscillatorLevel {
        &self.level
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    fn mw(&self) -> f64 {
        self.mass * self.level.omega
    }

    /// `C |l|^s e^{−x/2}` times the parity factor of odd meridian levels.
    fn envelope(&self, l: f64) -> f64 {
        let x = self.mw() * l * l;
        let a = l.abs();
        let base = if a == 0.0 {
            if self.level.s == 0.0 {
                self.ln_norm.exp()
            } else {
                0.0
            }
        } else {
            (self.ln_norm + self.level.s * a.ln() - 0.5 * x).exp()
        };
        if self.level.is_meridian() && self.level.n % 2 == 1 && l < 0.0 {
            -base
        } else {
            base
        }
    }

    /// `ũ(l)`: Laguerre form for `j ≠ 0`, Hermite form on the meridian.
    pub fn value(&self, l: f64) -> f64 {
        let mw = self.mw();
        if self.level.is_meridian() {
            return hermite_profile(self.level.n, l, mw);
        }
        let nr = self.level.radial_index();
        let sign = if nr % 2 == 0 { 1.0 } else { -1.0 };
        sign * self.envelope(l) * laguerre(nr, self.level.lag_order, mw * l * l)
    }

    /// `ũ(l)` built from the Kummer function `U(−n, k+1, x) = (−1)^n n! L_n^k(x)`.
    pub fn value_via_kummer(&self, l: f64) -> f64 {
        let nr = self.level.radial_index();
        let x = self.mw() * l * l;
        let fact = (ln_gamma_unchecked(nr as f64 + 1.0)).exp();
        self.envelope(l) * kummer_u_poly(nr, self.level.lag_order + 1.0, x) / fact
    }
}

/// `(mω/π)^{1/4} (2^n n!)^{−1/2} e^{−y²/2} H_n(y)` with `y = √(mω) l`.
fn hermite_profile(n: u32, l: f64, mw: f64) -> f64 {
    let y = mw.sqrt() * l;
    let ln_c = 0.25 * (mw / PI).ln() - 0.5 * (n as f64 * 2f64.ln() + ln_gamma_unchecked(n as f64 + 1.0));
    (ln_c - 0.5 * y * y).exp() * hermite(n, y)
}

fn apex_error(l: f64) -> Error {
    Error::Singularity {
        l,
        angular_momentum: 0.0,
    }
}

fn prefactor(l: f64) -> f64 {
    1.0 / (2.0 * PI * l.abs()).sqrt()
}

/// `ũ_{j,n}(l)` for the level.
pub fn radial_osc(level: &OscillatorLevel, l: f64, mass: f64) -> Result<f64> {
    Ok(RadialFunction::new(*level, mass)?.value(l))
}

/// `f_{j,n}(l, φ) = e^{ijφ} ũ(l)/√(2π|l|)`, normalized with weight `|l|`.
pub fn eigenfunction_osc(level: &OscillatorLevel, l: f64, phi: f64, mass: f64) -> Result<Complex64> {
    if l == 0.0 {
        return Err(apex_error(l));
    }
    let u = radial_osc(level, l, mass)?;
    Ok(Complex64::from_polar(prefactor(l) * u, level.j * phi))
}

/// Meridian eigenfunction `f_{0,n}(l) = H_n-profile/√(2π|l|)` with energy `ω(n + 1/2)`.
pub fn j0_osc(n: u32, l: f64, mass: f64, omega: f64) -> Result<(f64, f64)> {
    if l == 0.0 {
        return Err(apex_error(l));
    }
    Ok((
        prefactor(l) * hermite_profile(n, l, mass * omega),
        omega * (n as f64 + 0.5),
    ))
}

/// `lim_{j→0} f_{j,n}(l)`: the odd Hermite profile `H_{2n+1}(√(mω)|l|)`,
/// with limiting energy `ω(2n + 3/2)`. The value at the apex is its limit, 0.
pub fn limit_j0_osc(n: u32, l: f64, mass: f64, omega: f64) -> (f64, f64) {
    let energy = limit_energy_osc(n, omega);
    if l == 0.0 {
        return (0.0, energy);
    }
    (prefactor(l) * hermite_profile(2 * n + 1, l.abs(), mass * omega), energy)
}

/// `max |ũ'' + (2mE − j²/(l² sin²α) − (mω)² l²) ũ|` over the grid, divided by `max|ũ|·2mE`.
#[allow(clippy::too_many_arguments)]
pub fn ode_residual_osc<F: Fn(f64) -> f64>(
    profile: F,
    j: f64,
    energy: f64,
    mass: f64,
    omega: f64,
    geom: &ConeGeometry,
    grid: &[f64],
) -> Result<f64> {
    check_grid(grid)?;
    let c = j * j / geom.sin2_alpha();
    let mw2 = (mass * omega).powi(2);
    let k2 = 2.0 * mass * energy;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &l in grid {
        let (u, _, d2) = central_differences(&profile, l, FD_STEP);
        worst = worst.max((d2 + (k2 - c / (l * l) - mw2 * l * l) * u).abs());
        scale = scale.max(u.abs());
    }
    Ok(worst / (scale * k2))
}

/// `∫_ℝ ũ_a ũ_b dl`, the weight-`|l|` overlap of the two eigenfunctions
/// (the angular integral contributes exactly 1 for equal `j`).
pub fn radial_overlap(a: &RadialFunction, b: &RadialFunction, tol: f64) -> Result<f64> {
    let odd = |r: &RadialFunction| r.level.is_meridian() && r.level.n % 2 == 1;
    if odd(a) != odd(b) {
        // odd integrand over a symmetric domain
        return Ok(0.0);
    }
    let half = AdaptiveQuad::new(tol).integrate(|l| a.value(l) * b.value(l), 0.0, f64::INFINITY)?;
    Ok(2.0 * half)
}

/// Gram matrix of `{f_{j,n}}_{n ≤ n_max}` under the weight-`|l|` inner product.
pub fn gram_osc(j: f64, n_max: u32, mass: f64, omega: f64, geom: &ConeGeometry) -> Result<Vec<Vec<f64>>> {
    if n_max > MAX_GRAM_LEVEL {
        return Err(Error::Domain {
            what: "n_max (at most 10)",
            value: n_max as f64,
        });
    }
    let funcs = (0..=n_max)
        .map(|n| RadialFunction::new(OscillatorLevel::new(j, n, omega, geom)?, mass))
        .collect::<Result<Vec<_>>>()?;
    let size = funcs.len();
    let mut gram = vec![vec![0.0; size]; size];
    for a in 0..size {
        for b in a..size {
            let v = radial_overlap(&funcs[a], &funcs[b], 1e-13)?;
            gram[a][b] = v;
            gram[b][a] = v;
        }
    }
    Ok(gram)
}
