//! Adaptive numerical integration of Hamilton's equations on the cone.

mod dopri;

use dopri::{Dopri5, State, Step, StepFailure};

use crate::classical::{energy, free_bound, osc_bounds, rhs, ParticleParams, PhasePoint};
use crate::error::{Error, Result};
use crate::geometry::{embed, ConeGeometry, EmbeddingPoint};

/// Fraction of the analytic closest approach below which a `J ≠ 0` run is
/// declared to have hit the apex.
pub const APEX_GUARD_FRACTION: f64 = 1e-3;

const DEFAULT_MAX_STEPS: usize = 5_000_000;

/// Knobs for [`integrate_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationOptions {
    /// Per-step local error target, used as both absolute and relative tolerance.
    pub tol: f64,
    /// Spacing of the uniform output cadence measured from the initial time.
    pub sample_interval: f64,
    /// Also emit every accepted step endpoint.
    pub record_steps: bool,
    pub max_steps: usize,
}

impl IntegrationOptions {
    pub fn new(tol: f64, sample_interval: f64) -> Self {
        Self {
            tol,
            sample_interval,
            record_steps: true,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

/// Whether a turning point is a maximum or a minimum of the signed radial coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Maximum,
    Minimum,
}

/// A zero of `p_l`, located on the dense output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoint {
    pub state: PhasePoint,
    pub extremum: Extremum,
}

impl TurningPoint {
    /// Local minimum of `|l|`, i.e. a closest approach to the apex.
    pub fn is_closest_approach(&self) -> bool {
        match self.extremum {
            Extremum::Maximum => self.state.l < 0.0,
            Extremum::Minimum => self.state.l > 0.0,
        }
    }
}

/// Time-ordered samples of a numerical (or analytic) trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    samples: Vec<PhasePoint>,
    embedding: Vec<EmbeddingPoint>,
    energy_series: Vec<f64>,
    turning_points: Vec<TurningPoint>,
    accepted_steps: usize,
    rejected_steps: usize,
}

impl Trajectory {
    /// Wraps externally produced samples, e.g. a closed-form orbit on a grid.
    pub fn from_samples(samples: Vec<PhasePoint>, params: &ParticleParams, geom: &ConeGeometry) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::Domain {
                what: "sample times (must be strictly increasing)",
                value: f64::NAN,
            });
        }
        let mut traj = Self::empty();
        for s in samples {
            traj.push(s, params, geom)?;
        }
        Ok(traj)
    }

    fn empty() -> Self {
        Self {
            samples: Vec::new(),
            embedding: Vec::new(),
            energy_series: Vec::new(),
            turning_points: Vec::new(),
            accepted_steps: 0,
            rejected_steps: 0,
        }
    }

    fn push(&mut self, s: PhasePoint, params: &ParticleParams, geom: &ConeGeometry) -> Result<()> {
        self.energy_series.push(energy(&s, params, geom)?);
        self.embedding.push(embed(s.l, s.phi, geom)?);
        self.samples.push(s);
        Ok(())
    }

    pub fn samples(&self) -> &[PhasePoint] {
        &self.samples
    }

    pub fn embedding(&self) -> &[EmbeddingPoint] {
        &self.embedding
    }

    pub fn energy_series(&self) -> &[f64] {
        &self.energy_series
    }

    pub fn turning_points(&self) -> &[TurningPoint] {
        &self.turning_points
    }

    pub fn accepted_steps(&self) -> usize {
        self.accepted_steps
    }

    pub fn rejected_steps(&self) -> usize {
        self.rejected_steps
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&PhasePoint> {
        self.samples.last()
    }
}

fn to_state(p: &PhasePoint) -> State {
    [p.l, p.phi, p.p_l, p.p_phi]
}

fn to_point(t: f64, y: &State) -> PhasePoint {
    PhasePoint::new(t, y[0], y[1], y[2], y[3])
}

/// Analytic closest approach `|l|min` for the initial state, if `J ≠ 0`.
fn apex_bound(initial: &PhasePoint, params: &ParticleParams, geom: &ConeGeometry) -> Result<Option<f64>> {
    if initial.p_phi == 0.0 {
        return Ok(None);
    }
    let e = energy(initial, params, geom)?;
    let bound = if params.is_free() {
        free_bound(e, initial.p_phi, params.mass(), geom)?
    } else {
        osc_bounds(e, initial.p_phi, params.mass(), params.omega(), geom)?.0
    };
    Ok(Some(bound))
}

/// Drives the stepper from `initial.t` to `t_end`, handing each accepted step to `visit`.
fn drive<V>(
    initial: &PhasePoint,
    params: &ParticleParams,
    geom: &ConeGeometry,
    t_end: f64,
    tol: f64,
    max_steps: usize,
    mut visit: V,
) -> Result<(usize, usize)>
where
    V: FnMut(&Step) -> Result<()>,
{
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain {
            what: "tol",
            value: tol,
        });
    }
    if !t_end.is_finite() || t_end < initial.t {
        return Err(Error::Domain {
            what: "t_end",
            value: t_end,
        });
    }
    if !initial.is_finite() {
        return Err(Error::Domain {
            what: "initial state",
            value: f64::NAN,
        });
    }
    let guard = apex_bound(initial, params, geom)?.map(|b| APEX_GUARD_FRACTION * b);
    let field = |y: &State| {
        let d = rhs(&to_point(0.0, y), params, geom).ok()?;
        let out = [d.l, d.phi, d.p_l, d.p_phi];
        out.iter().all(|v| v.is_finite()).then_some(out)
    };
    // a J ≠ 0 orbit never crosses the apex
    let admissible = |y0: &State, y1: &State| y0[3] == 0.0 || y0[0] * y1[0] > 0.0;
    let mut stepper =
        Dopri5::new(field, admissible, initial.t, to_state(initial), tol, max_steps).ok_or(Error::Singularity {
            l: initial.l,
            angular_momentum: initial.p_phi,
        })?;
    while stepper.t() < t_end {
        let step = stepper.step(t_end).map_err(|e| {
            let state = to_point(stepper.t(), stepper.y());
            match e {
                StepFailure::Underflow { h } => Error::StepUnderflow { state, step: h },
                StepFailure::Budget => Error::StepBudget { state, max_steps },
            }
        })?;
        if let Some(g) = guard {
            if step.y1[0].abs() < g {
                return Err(Error::SingularityApproach {
                    state: to_point(step.t1(), &step.y1),
                    guard: g,
                });
            }
        }
        visit(&step)?;
    }
    Ok((stepper.accepted, stepper.rejected))
}

/// Zero of `p_l` inside the step by the Illinois variant of regula falsi.
fn locate_turning_point(step: &Step) -> f64 {
    let (mut a, mut b) = (step.t0, step.t1());
    let (mut fa, mut fb) = (step.y0[2], step.y1[2]);
    let mut side = 0;
    for _ in 0..100 {
        if fb == 0.0 {
            return b;
        }
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = step.eval_component(c, 2);
        if fc == 0.0 {
            return c;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() <= 4.0 * f64::EPSILON * b.abs().max(1.0) {
            break;
        }
    }
    if fa.abs() < fb.abs() {
        a
    } else {
        b
    }
}

/// Integrates from `initial` to `t_end` with the default options.
pub fn integrate(
    initial: &PhasePoint,
    params: &ParticleParams,
    geom: &ConeGeometry,
    t_end: f64,
    tol: f64,
    sample_interval: f64,
) -> Result<Trajectory> {
    integrate_with(
        initial,
        params,
        geom,
        t_end,
        &IntegrationOptions::new(tol, sample_interval),
    )
}

/// Integrates from `initial` to `t_end`. The output holds the initial state,
/// the uniform cadence, step endpoints (if requested), turning points and the
/// final state, strictly increasing in time.
pub fn integrate_with(
    initial: &PhasePoint,
    params: &ParticleParams,
    geom: &ConeGeometry,
    t_end: f64,
    opts: &IntegrationOptions,
) -> Result<Trajectory> {
    let dt = opts.sample_interval;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Domain {
            what: "sample_interval",
            value: dt,
        });
    }
    let t0 = initial.t;
    let e0 = energy(initial, params, geom)?;
    let noise = 1e-10 * (2.0 * params.mass() * e0.abs()).sqrt().max(f64::MIN_POSITIVE);

    let mut traj = Trajectory::empty();
    traj.push(*initial, params, geom)?;
    let mut next_sample = 1u64;
    let mut pending: Vec<(PhasePoint, Option<Extremum>)> = Vec::new();

    let (accepted, rejected) = drive(initial, params, geom, t_end, opts.tol, opts.max_steps, |step| {
        pending.clear();
        let t1 = step.t1();
        loop {
            let tc = t0 + next_sample as f64 * dt;
            if tc > t1 {
                break;
            }
            pending.push((to_point(tc, &step.eval(tc)), None));
            next_sample += 1;
        }
        let (p0, p1) = (step.y0[2], step.y1[2]);
        if p0 * p1 < 0.0 && p0.abs().max(p1.abs()) > noise {
            let te = locate_turning_point(step);
            let state = to_point(te, &step.eval(te));
            // p_l falling through zero marks a maximum of l
            let kind = if p0 > 0.0 { Extremum::Maximum } else { Extremum::Minimum };
            pending.push((state, Some(kind)));
        }
        if opts.record_steps || t1 == t_end {
            pending.push((to_point(t1, &step.y1), None));
        }
        pending.sort_by(|a, b| a.0.t.total_cmp(&b.0.t));
        for &(s, kind) in &pending {
            if let Some(extremum) = kind {
                traj.turning_points.push(TurningPoint { state: s, extremum });
            }
            let last = traj.samples.last().map_or(f64::NEG_INFINITY, |p| p.t);
            if s.t - last > 1e-12 * s.t.abs().max(1.0) {
                traj.push(s, params, geom)?;
            }
        }
        Ok(())
    })?;
    traj.accepted_steps = accepted;
    traj.rejected_steps = rejected;
    Ok(traj)
}

/// States at the requested (non-decreasing, `≥ initial.t`) times from dense output.
pub fn integrate_at(
    initial: &PhasePoint,
    params: &ParticleParams,
    geom: &ConeGeometry,
    times: &[f64],
    tol: f64,
) -> Result<Vec<PhasePoint>> {
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < initial.t) {
        return Err(Error::Domain {
            what: "output times (must be sorted and not before the initial time)",
            value: f64::NAN,
        });
    }
    let Some(&t_end) = times.last() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::with_capacity(times.len());
    let mut idx = 0;
    while idx < times.len() && times[idx] == initial.t {
        out.push(PhasePoint {
            t: times[idx],
            ..*initial
        });
        idx += 1;
    }
    drive(initial, params, geom, t_end, tol, DEFAULT_MAX_STEPS, |step| {
        let t1 = step.t1();
        while idx < times.len() && times[idx] <= t1 {
            let t = times[idx];
            let y = if t == t1 { step.y1 } else { step.eval(t) };
            out.push(to_point(t, &y));
            idx += 1;
        }
        Ok(())
    })?;
    Ok(out)
}

/// Invariant drift over a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationReport {
    /// `max |E(t) − E(t₀)| / |E(t₀)|`, absolute when `E(t₀) = 0`.
    pub max_rel_energy_drift: f64,
    pub max_abs_j_drift: f64,
    /// Accepted integrator steps.
    pub steps: usize,
    pub rejected_steps: usize,
}

pub fn conservation_report(
    traj: &Trajectory,
    params: &ParticleParams,
    geom: &ConeGeometry,
) -> Result<ConservationReport> {
    let first = traj.samples.first().ok_or(Error::Domain {
        what: "trajectory length",
        value: 0.0,
    })?;
    let e0 = energy(first, params, geom)?;
    let scale = if e0 == 0.0 { 1.0 } else { e0.abs() };
    let mut de: f64 = 0.0;
    let mut dj: f64 = 0.0;
    for s in &traj.samples {
        de = de.max((energy(s, params, geom)? - e0).abs() / scale);
        dj = dj.max((s.p_phi - first.p_phi).abs());
    }
    Ok(ConservationReport {
        max_rel_energy_drift: de,
        max_abs_j_drift: dj,
        steps: traj.accepted_steps,
        rejected_steps: traj.rejected_steps,
    })
}

/// Smallest distance to the apex along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosestApproach {
    pub t: f64,
    pub distance: f64,
    /// Located as a turning point rather than read off the samples.
    pub at_turning_point: bool,
}

pub fn closest_approach(traj: &Trajectory) -> Option<ClosestApproach> {
    let from_events = traj
        .turning_points
        .iter()
        .filter(|tp| tp.is_closest_approach())
        .min_by(|a, b| a.state.l.abs().total_cmp(&b.state.l.abs()));
    let from_samples = traj.samples.iter().min_by(|a, b| a.l.abs().total_cmp(&b.l.abs()));
    match (from_events, from_samples) {
        (Some(tp), Some(s)) if tp.state.l.abs() <= s.l.abs() => Some(ClosestApproach {
            t: tp.state.t,
            distance: tp.state.l.abs(),
            at_turning_point: true,
        }),
        (_, Some(s)) => Some(ClosestApproach {
            t: s.t,
            distance: s.l.abs(),
            at_turning_point: false,
        }),
        _ => None,
    }
}

/// Mean spacing of successive maxima of the signed radial coordinate.
/// For `J ≠ 0` this is `π/ω`; a meridian oscillation through the apex has
/// `2π/ω` because `l` alternates sign.
pub fn radial_period(traj: &Trajectory) -> Option<f64> {
    let maxima: Vec<f64> = traj
        .turning_points
        .iter()
        .filter(|tp| tp.extremum == Extremum::Maximum)
        .map(|tp| tp.state.t)
        .collect();
    if maxima.len() < 2 {
        return None;
    }
    Some((maxima[maxima.len() - 1] - maxima[0]) / (maxima.len() - 1) as f64)
}

/// Response of a meridian (`J = 0`) trajectory to a small angular momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceReport {
    pub eps_j: f64,
    /// `sup_t |l_ε(t) − l_0(t)|` on the comparison grid.
    pub sup_l_deviation: f64,
    /// The unperturbed trajectory passes through the apex.
    pub crossing_detected: bool,
    /// The perturbed trajectory changes nappe (never true for `ε ≠ 0`).
    pub perturbed_changes_nappe: bool,
}

/// Knobs for [`perturbation_divergence_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceOptions {
    pub tol: f64,
    pub grid_points: usize,
}

impl Default for DivergenceOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            grid_points: 4001,
        }
    }
}

pub fn perturbation_divergence(
    base: &PhasePoint,
    eps_list: &[f64],
    params: &ParticleParams,
    geom: &ConeGeometry,
    t_end: f64,
) -> Result<Vec<DivergenceReport>> {
    perturbation_divergence_with(base, eps_list, params, geom, t_end, &DivergenceOptions::default())
}

fn changes_sign(path: &[PhasePoint]) -> bool {
    path.windows(2).any(|w| w[0].l * w[1].l < 0.0)
        || path.len() > 2 && path[1..path.len() - 1].iter().any(|p| p.l == 0.0)
}

pub fn perturbation_divergence_with(
    base: &PhasePoint,
    eps_list: &[f64],
    params: &ParticleParams,
    geom: &ConeGeometry,
    t_end: f64,
    opts: &DivergenceOptions,
) -> Result<Vec<DivergenceReport>> {
    if base.p_phi != 0.0 {
        return Err(Error::Domain {
            what: "base angular momentum (must be 0)",
            value: base.p_phi,
        });
    }
    if opts.grid_points < 2 {
        return Err(Error::Domain {
            what: "grid_points",
            value: opts.grid_points as f64,
        });
    }
    let n = opts.grid_points - 1;
    let times: Vec<f64> = (0..=n)
        .map(|i| {
            if i == n {
                t_end
            } else {
                base.t + (t_end - base.t) * i as f64 / n as f64
            }
        })
        .collect();
    let reference = integrate_at(base, params, geom, &times, opts.tol)?;
    let crossing = changes_sign(&reference);
    eps_list
        .iter()
        .map(|&eps| {
            let start = PhasePoint { p_phi: eps, ..*base };
            let path = integrate_at(&start, params, geom, &times, opts.tol)?;
            let sup = path
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a.l - b.l).abs())
                .fold(0.0, f64::max);
            Ok(DivergenceReport {
                eps_j: eps,
                sup_l_deviation: sup,
                crossing_detected: crossing,
                perturbed_changes_nappe: changes_sign(&path),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests;
