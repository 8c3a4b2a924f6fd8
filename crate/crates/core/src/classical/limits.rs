//! Pointwise `J → 0` limits of the closed-form orbits.
//!
//! These are the curves the `J ≠ 0` orbits collapse onto: the particle
//! folds back at the apex instead of crossing it. They are *not* solutions
//! of the `J = 0` equations of motion.

use crate::specfun::sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    FreeRadial,
    FreeMomentum,
    OscRadial,
    OscMomentum,
}

/// Initial data on a generator; `t` in [`limit_j_to_zero`] is measured from this instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeridianData {
    pub l0: f64,
    pub p_l0: f64,
    pub mass: f64,
    pub omega: f64,
}

/// Evaluates the limit at elapsed time `t`.
///
/// The formulas are the upper-nappe forms; data with `l0 < 0` is handled by
/// the reflection `l → −l`, `p_l → −p_l`.
pub fn limit_j_to_zero(kind: LimitKind, t: f64, data: &MeridianData) -> f64 {
    if data.l0 < 0.0 {
        let mirrored = MeridianData {
            l0: -data.l0,
            p_l0: -data.p_l0,
            ..*data
        };
        return -limit_j_to_zero(kind, t, &mirrored);
    }
    let MeridianData {
        l0,
        p_l0,
        mass: m,
        omega: w,
    } = *data;
    match kind {
        LimitKind::FreeRadial => (p_l0 / m * t + l0).abs(),
        LimitKind::FreeMomentum => {
            if p_l0 == 0.0 {
                0.0
            } else {
                p_l0.abs() * sign(t + m * l0 / p_l0)
            }
        }
        LimitKind::OscRadial | LimitKind::OscMomentum => {
            let e = 0.5 * p_l0 * p_l0 / m + 0.5 * m * w * w * l0 * l0;
            if e == 0.0 {
                return 0.0;
            }
            // coefficient of sin 2ωt carries the sign of p_l0
            let a = l0 * w * p_l0 / e;
            let b = l0 * l0 * m * w * w / e - 1.0;
            let (s, c) = (2.0 * w * t).sin_cos();
            let inner = (1.0 + a * s + b * c).max(0.0).sqrt();
            if kind == LimitKind::OscRadial {
                (e / (m * w * w)).sqrt() * inner
            } else if inner == 0.0 {
                0.0
            } else {
                (m * e).sqrt() * (a * c - b * s) / inner
            }
        }
    }
}
