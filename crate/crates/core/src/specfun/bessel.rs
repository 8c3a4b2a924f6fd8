//! Bessel function of the first kind `J_ν(x)` for real order `ν ≥ −1/2`
//! and non-negative argument.
//!
//! Three regimes:
//! - ascending power series for small `x` (no significant cancellation),
//! - Miller backward recurrence normalized with the Neumann sum
//!   `(x/2)^μ = Σ_k (μ+2k) Γ(μ+k)/k! · J_{μ+2k}(x)`,
//! - Hankel asymptotic expansion for large `x`.

use std::f64::consts::PI;

use super::gamma::{gamma_unchecked, ln_gamma_unchecked};
use crate::error::{Error, Result};

const SERIES_SPAN: f64 = 4.0;
const ASYMPTOTIC_MIN: f64 = 25.0;

pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !nu.is_finite() || nu < -0.5 {
        return Err(Error::Domain {
            what: "Bessel order (must be >= -1/2)",
            value: nu,
        });
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain {
            what: "Bessel argument (must be >= 0)",
            value: x,
        });
    }
    Ok(bessel_j_unchecked(nu, x))
}

pub(crate) fn bessel_j_unchecked(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    if x <= series_limit(nu) {
        series(nu, x)
    } else if x >= asymptotic_limit(nu) {
        hankel(nu, x)
    } else {
        miller(nu, x)
    }
}

pub(crate) fn series_limit(nu: f64) -> f64 {
    SERIES_SPAN + nu.max(0.0)
}

pub(crate) fn asymptotic_limit(nu: f64) -> f64 {
    ASYMPTOTIC_MIN.max(nu * nu)
}

pub(crate) fn series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = (nu * half.ln() - ln_gamma_unchecked(nu + 1.0)).exp();
    let q = -half * half;
    let mut sum = term;
    for k in 1..500 {
        let k = k as f64;
        term *= q / (k * (k + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

pub(crate) fn hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let inv8x = 1.0 / (8.0 * x);
    // a_k / x^k accumulated as one running term
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) * inv8x / k as f64;
        let mag = term.abs();
        if mag > last {
            break;
        }
        // k = 1, 3, 5, ... feed Q with alternating signs; k = 2, 4, ... feed P.
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if mag < 1e-17 {
            break;
        }
        last = mag;
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

pub(crate) fn miller(nu: f64, x: f64) -> f64 {
    // ν = μ + n with μ ∈ [0, 1) (or μ = ν ∈ [−1/2, 0) for negative orders)
    let n = if nu >= 0.0 { nu.floor() as usize } else { 0 };
    let mu = nu - n as f64;
    let big = (n as f64).max(x);
    let top = (big + 20.0 + (40.0 * big).sqrt()).ceil() as usize + n;

    // c_k = (μ+2k) Γ(μ+k) / k!, with c_0 = Γ(μ+1)
    let kmax = top / 2 + 1;
    let mut coef = Vec::with_capacity(kmax + 1);
    let g1 = gamma_unchecked(mu + 1.0);
    coef.push(g1);
    let mut g = g1; // Γ(μ+k)/k! at k = 1
    for k in 1..=kmax {
        let kf = k as f64;
        coef.push((mu + 2.0 * kf) * g);
        g *= (mu + kf) / (kf + 1.0);
    }

    let mut f_next = 0.0;
    let mut f = 1e-30;
    let mut sum = 0.0;
    let mut target = 0.0;
    for i in (0..=top).rev() {
        if i == n {
            target = f;
        }
        if i % 2 == 0 {
            sum += coef[i / 2] * f;
        }
        if i > 0 {
            let prev = 2.0 * (mu + i as f64) / x * f - f_next;
            f_next = f;
            f = prev;
            if f.abs() > 1e250 {
                f *= 1e-250;
                f_next *= 1e-250;
                sum *= 1e-250;
                target *= 1e-250;
            }
        }
    }
    target * (0.5 * x).powf(mu) / sum
}
