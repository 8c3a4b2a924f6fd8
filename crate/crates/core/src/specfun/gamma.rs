use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    // z is the shifted argument x - 1
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "gamma argument",
            value: x,
        });
    }
    Ok(gamma_unchecked(x))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "ln_gamma argument",
            value: x,
        });
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    if x == x.floor() && x <= 23.0 {
        // exact factorials
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return f;
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power to delay overflow near the top of the range
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(z)
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma_unchecked(1.0 - x);
    }
    if x < 30.0 {
        return gamma_unchecked(x).ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn factorials() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert_eq!(gamma(11.0).unwrap(), 3_628_800.0);
    }

    #[test]
    fn half_integer() {
        // sqrt(pi) to 20 digits: 1.7724538509055160273
        assert!(rel(gamma(0.5).unwrap(), 1.772_453_850_905_516) < 1e-12);
        // Γ(5/2) = 3√π/4
        assert!(rel(gamma(2.5).unwrap(), 0.75 * PI.sqrt()) < 1e-12);
    }

    #[test]
    fn recurrence() {
        for &x in &[0.1, 0.7, 2.37, 9.3, 40.2] {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.3, 1.5, 12.25, 29.9, 30.1, 80.0] {
            assert!(
                (ln_gamma(x).unwrap() - gamma(x).unwrap().ln()).abs() < 1e-11 * (1.0 + gamma(x).unwrap().ln().abs())
            );
        }
        // ln Γ(200) from Stirling with enough terms
        let x: f64 = 200.0;
        let stirling = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3));
        assert!((ln_gamma(x).unwrap() - stirling).abs() < 1e-10);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
    }
}
