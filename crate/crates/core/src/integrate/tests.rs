use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use super::*;
use crate::classical::fit_orbit;

fn cone() -> ConeGeometry {
    ConeGeometry::new(FRAC_PI_4).unwrap()
}

fn reference_geodesic() -> (PhasePoint, ParticleParams) {
    (
        PhasePoint::new(0.0, 5.0, FRAC_PI_2, -1.0, 1.0),
        ParticleParams::free(1.0).unwrap(),
    )
}

fn reference_oscillator(j: f64) -> (PhasePoint, ParticleParams) {
    (
        PhasePoint::new(0.0, 9.0, 0.1, -1.0, j),
        ParticleParams::new(1.0, SQRT_2).unwrap(),
    )
}

#[test]
fn geodesic_matches_closed_form() {
    let (init, params) = reference_geodesic();
    let g = cone();
    let traj = integrate(&init, &params, &g, 10.0, 1e-10, 0.01).unwrap();
    let orbit = fit_orbit(&init, &params, &g).unwrap();
    let (mut dl, mut dp, mut dphi) = (0.0f64, 0.0f64, 0.0f64);
    for s in traj.samples() {
        dl = dl.max((s.l - orbit.radial(s.t)).abs());
        dp = dp.max((s.p_l - orbit.momentum(s.t)).abs());
        dphi = dphi.max((s.phi - orbit.angle(s.t)).abs());
    }
    assert!(dl <= 1e-6 && dp <= 1e-6 && dphi <= 1e-6, "{dl} {dp} {dphi}");
    assert_eq!(traj.last().unwrap().t, 10.0);
    assert!(traj.samples().iter().all(|s| s.p_phi == 1.0));
}

#[test]
fn samples_are_strictly_increasing_and_include_cadence() {
    let (init, params) = reference_geodesic();
    let traj = integrate(&init, &params, &cone(), 10.0, 1e-9, 0.5).unwrap();
    assert!(traj.samples().windows(2).all(|w| w[1].t > w[0].t));
    for k in 0..=20 {
        let t = 0.5 * k as f64;
        assert!(
            traj.samples().iter().any(|s| (s.t - t).abs() < 1e-12),
            "missing t = {t}"
        );
    }
    assert_eq!(traj.samples().len(), traj.embedding().len());
    assert_eq!(traj.samples().len(), traj.energy_series().len());
}

#[test]
fn conservation_on_reference_orbits() {
    let g = cone();
    let (init, params) = reference_geodesic();
    let traj = integrate(&init, &params, &g, 10.0, 1e-10, 0.01).unwrap();
    let r = conservation_report(&traj, &params, &g).unwrap();
    assert!(r.max_rel_energy_drift <= 1e-8, "{}", r.max_rel_energy_drift);
    assert!(r.max_abs_j_drift <= 1e-12);
    assert!(r.steps > 0);

    let (init, params) = reference_oscillator(20.0);
    let traj = integrate(&init, &params, &g, 10.0, 1e-10, 0.01).unwrap();
    let r = conservation_report(&traj, &params, &g).unwrap();
    assert!(r.max_rel_energy_drift <= 1e-8, "{}", r.max_rel_energy_drift);
}

#[test]
fn analytic_meridian_line_has_zero_drift() {
    let params = ParticleParams::free(1.0).unwrap();
    let g = cone();
    let samples = (0..=40)
        .map(|i| {
            let t = 0.25 * i as f64 + 0.1;
            PhasePoint::new(t, 5.0 - t, 0.3, -1.0, 0.0)
        })
        .collect();
    let traj = Trajectory::from_samples(samples, &params, &g).unwrap();
    let r = conservation_report(&traj, &params, &g).unwrap();
    assert_eq!(r.max_rel_energy_drift, 0.0);
    assert_eq!(r.max_abs_j_drift, 0.0);
}

#[test]
fn closest_approach_matches_bounds() {
    let g = cone();
    let (init, params) = reference_geodesic();
    let traj = integrate(&init, &params, &g, 10.0, 1e-10, 0.01).unwrap();
    let ca = closest_approach(&traj).unwrap();
    assert!(ca.at_turning_point);
    assert!((ca.distance - 1.360828).abs() < 1e-6, "{}", ca.distance);
    // p_l vanishes where t + C = 0
    let orbit = fit_orbit(&init, &params, &g).unwrap();
    assert!((ca.t + orbit.shift()).abs() < 1e-6, "{}", ca.t);

    let (init, params) = reference_oscillator(20.0);
    let traj = integrate(&init, &params, &g, 10.0, 1e-10, 0.01).unwrap();
    let (lo, hi) = osc_bounds(energy(&init, &params, &g).unwrap(), 20.0, 1.0, SQRT_2, &g).unwrap();
    let ca = closest_approach(&traj).unwrap();
    assert!((ca.distance - 2.2150).abs() < 1e-4);
    assert!((ca.distance - lo).abs() < 1e-8);
    for s in traj.samples() {
        assert!(s.l.abs() >= lo - 1e-9 && s.l.abs() <= hi + 1e-9);
    }
}

#[test]
fn oscillator_periods() {
    let g = cone();
    let (init, params) = reference_oscillator(20.0);
    let traj = integrate(&init, &params, &g, 20.0, 1e-11, 0.05).unwrap();
    let period = radial_period(&traj).unwrap();
    assert!((period - PI / SQRT_2).abs() < 1e-6, "{period}");

    let (init, params) = reference_oscillator(0.0);
    let traj = integrate(&init, &params, &g, 20.0, 1e-11, 0.05).unwrap();
    let period = radial_period(&traj).unwrap();
    assert!((period - 2.0 * PI / SQRT_2).abs() < 1e-6, "{period}");
    assert!(traj.samples().iter().any(|s| s.l < 0.0));
}

#[test]
fn nappe_is_preserved_when_j_nonzero() {
    let g = cone();
    for (init, params) in [
        reference_geodesic(),
        reference_oscillator(20.0),
        reference_oscillator(0.5),
    ] {
        let traj = integrate(&init, &params, &g, 10.0, 1e-10, 0.1).unwrap();
        assert!(traj.samples().iter().all(|s| s.l > 0.0));
    }
}

#[test]
fn time_reversal_recovers_initial_radius() {
    let g = cone();
    for (init, params) in [reference_geodesic(), reference_oscillator(20.0)] {
        let fwd = integrate(&init, &params, &g, 10.0, 1e-10, 1.0).unwrap();
        let end = *fwd.last().unwrap();
        let back_start = PhasePoint::new(0.0, end.l, end.phi, -end.p_l, -end.p_phi);
        let back = integrate(&back_start, &params, &g, 10.0, 1e-10, 1.0).unwrap();
        let fin = back.last().unwrap();
        assert!((fin.l - init.l).abs() < 1e-6, "{}", fin.l);
        assert!((fin.p_l + init.p_l).abs() < 1e-6);
        assert!((fin.phi - init.phi).abs() < 1e-6);
    }
}

#[test]
fn halving_tolerance_does_not_worsen_drift() {
    let g = cone();
    for (init, params) in [reference_geodesic(), reference_oscillator(20.0)] {
        let drift = |tol: f64| {
            let traj = integrate(&init, &params, &g, 10.0, tol, 0.05).unwrap();
            conservation_report(&traj, &params, &g).unwrap().max_rel_energy_drift
        };
        let mut tol = 1e-5;
        let mut prev = drift(tol);
        while tol > 1e-11 {
            tol *= 0.5;
            let d = drift(tol);
            assert!(d <= 2.0 * prev + 1e-15, "tol {tol}: {d} vs {prev}");
            prev = d;
        }
    }
}

#[test]
fn instability_of_meridian_motion() {
    let g = cone();
    let (mut base, params) = reference_geodesic();
    base.p_phi = 0.0;
    let reports = perturbation_divergence(&base, &[0.1, 0.0], &params, &g, 10.0).unwrap();
    assert!(reports[0].crossing_detected);
    assert!(!reports[0].perturbed_changes_nappe);
    assert!(reports[0].sup_l_deviation >= 5.0, "{}", reports[0].sup_l_deviation);
    assert_eq!(reports[1].sup_l_deviation, 0.0);

    let early = perturbation_divergence(&base, &[1e-6], &params, &g, 4.0).unwrap();
    assert!(!early[0].crossing_detected);
    assert!(early[0].sup_l_deviation <= 1e-3, "{}", early[0].sup_l_deviation);
}

#[test]
fn deviation_grows_to_the_fold_limit() {
    let g = cone();
    let (mut base, params) = reference_geodesic();
    base.p_phi = 0.0;
    let reports = perturbation_divergence(&base, &[1e-2, 1e-4], &params, &g, 10.0).unwrap();
    // |l_ε(10)| → 5 while l_0(10) = −5
    for r in reports {
        assert!((r.sup_l_deviation - 10.0).abs() < 0.05, "{r:?}");
    }
}

#[test]
fn integrate_at_matches_trajectory() {
    let g = cone();
    let (init, params) = reference_oscillator(20.0);
    let times = [0.0, 0.5, 1.25, 3.0, 3.0, 7.5];
    let pts = integrate_at(&init, &params, &g, &times, 1e-11).unwrap();
    let orbit = fit_orbit(&init, &params, &g).unwrap();
    assert_eq!(pts.len(), times.len());
    for p in pts {
        assert!((p.l - orbit.radial(p.t)).abs() < 1e-7);
    }
}

#[test]
fn rejects_bad_arguments() {
    let g = cone();
    let (init, params) = reference_geodesic();
    assert!(integrate(&init, &params, &g, -1.0, 1e-8, 0.1).is_err());
    assert!(integrate(&init, &params, &g, 1.0, 0.0, 0.1).is_err());
    assert!(integrate(&init, &params, &g, 1.0, 1e-8, 0.0).is_err());
    let mut apex = init;
    apex.l = 0.0;
    assert!(matches!(
        integrate(&apex, &params, &g, 1.0, 1e-8, 0.1),
        Err(Error::Singularity { .. })
    ));
}

#[test]
fn loose_tolerance_is_caught_near_the_apex() {
    let g = cone();
    let params = ParticleParams::free(1.0).unwrap();
    let init = PhasePoint::new(0.0, 5.0, 0.0, -1.0, 1e-9);
    // either the run is flagged or it stays on its nappe; it never silently crosses
    match integrate(&init, &params, &g, 10.0, 1e-3, 0.1) {
        Ok(traj) => assert!(traj.samples().iter().all(|s| s.l > 0.0)),
        Err(e) => assert!(
            matches!(e, Error::SingularityApproach { .. } | Error::StepUnderflow { .. }),
            "{e:?}"
        ),
    }
}
