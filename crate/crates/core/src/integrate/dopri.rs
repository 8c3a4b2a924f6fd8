//! Dormand–Prince 5(4) with the Hairer 4th-order continuous extension.
//! The vector field is autonomous, so the stage nodes never appear.

pub(crate) const DIM: usize = 4;
pub(crate) type State = [f64; DIM];

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Why a step attempt could not be completed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum StepFailure {
    Underflow { h: f64 },
    Budget,
}

/// One accepted step with its interpolant.
#[derive(Debug, Clone)]
pub(crate) struct Step {
    pub t0: f64,
    pub h: f64,
    pub y0: State,
    pub y1: State,
    cont: [State; 5],
}

impl Step {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn eval(&self, t: f64) -> State {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let mut y = [0.0; DIM];
        for (i, yi) in y.iter_mut().enumerate() {
            let c = &self.cont;
            *yi = c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * c[4][i])));
        }
        y
    }

    /// Single component of the interpolant.
    pub fn eval_component(&self, t: f64, i: usize) -> f64 {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let c = &self.cont;
        c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * c[4][i])))
    }
}

/// Adaptive stepper. The right-hand side returns `None` at points where the
/// vector field is undefined; the step is then retried with a smaller size.
/// `admissible` may veto an otherwise accepted step.
pub(crate) struct Dopri5<F, A>
where
    F: Fn(&State) -> Option<State>,
    A: Fn(&State, &State) -> bool,
{
    f: F,
    admissible: A,
    tol: f64,
    t: f64,
    y: State,
    k1: State,
    h: f64,
    pub accepted: usize,
    pub rejected: usize,
    max_steps: usize,
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

impl<F, A> Dopri5<F, A>
where
    F: Fn(&State) -> Option<State>,
    A: Fn(&State, &State) -> bool,
{
    pub fn new(f: F, admissible: A, t0: f64, y0: State, tol: f64, max_steps: usize) -> Option<Self> {
        let k1 = f(&y0)?;
        let mut s = Self {
            f,
            admissible,
            tol,
            t: t0,
            y: y0,
            k1,
            h: 0.0,
            accepted: 0,
            rejected: 0,
            max_steps,
        };
        s.h = s.initial_step();
        Some(s)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &State {
        &self.y
    }

    fn scaled_norm(&self, v: &State, y: &State) -> f64 {
        let mut acc = 0.0;
        for i in 0..DIM {
            let sc = self.tol + self.tol * y[i].abs();
            acc += (v[i] / sc).powi(2);
        }
        (acc / DIM as f64).sqrt()
    }

    fn initial_step(&self) -> f64 {
        let d0 = self.scaled_norm(&self.y, &self.y);
        let d1 = self.scaled_norm(&self.k1, &self.y);
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1 = axpy(&self.y, h0, &[(1.0, &self.k1)]);
        let d2 = match (self.f)(&y1) {
            Some(f1) => {
                let mut diff = [0.0; DIM];
                for i in 0..DIM {
                    diff[i] = f1[i] - self.k1[i];
                }
                self.scaled_norm(&diff, &self.y) / h0
            }
            None => {
                h0 *= 1e-3;
                0.0
            }
        };
        let dm = d1.max(d2);
        let h1 = if dm <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / dm).powf(0.2)
        };
        (100.0 * h0).min(h1)
    }

    /// Advances by one accepted step without passing `t_end`.
    pub fn step(&mut self, t_end: f64) -> Result<Step, StepFailure> {
        let mut reject_streak = false;
        loop {
            if self.accepted + self.rejected >= self.max_steps {
                return Err(StepFailure::Budget);
            }
            let remaining = t_end - self.t;
            let mut h = self.h.min(remaining);
            // avoid a sliver final step
            if remaining - h < 1e-3 * h {
                h = remaining;
            }
            if h <= 16.0 * f64::EPSILON * self.t.abs().max(1.0) {
                return Err(StepFailure::Underflow { h });
            }
            match self.attempt(h) {
                Some((y1, k7, err, ks)) if err <= 1.0 && (self.admissible)(&self.y, &y1) => {
                    let fac = if err == 0.0 {
                        FAC_MAX
                    } else {
                        (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
                    };
                    let fac = if reject_streak { fac.min(1.0) } else { fac };
                    let step = self.build_step(h, y1, &k7, &ks);
                    self.t = if h == remaining { t_end } else { self.t + h };
                    self.y = y1;
                    self.k1 = k7;
                    self.h = h * fac;
                    self.accepted += 1;
                    return Ok(step);
                }
                Some((_, _, err, _)) if err.is_finite() && err > 1.0 => {
                    self.rejected += 1;
                    reject_streak = true;
                    self.h = h * (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 1.0);
                }
                _ => {
                    self.rejected += 1;
                    reject_streak = true;
                    self.h = h * 0.25;
                }
            }
        }
    }

    #[allow(clippy::type_complexity)]
    fn attempt(&self, h: f64) -> Option<(State, State, f64, [State; 5])> {
        let y = &self.y;
        let k1 = &self.k1;
        let k2 = (self.f)(&axpy(y, h, &[(A21, k1)]))?;
        let k3 = (self.f)(&axpy(y, h, &[(A31, k1), (A32, &k2)]))?;
        let k4 = (self.f)(&axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
        let k5 = (self.f)(&axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
        let k6 = (self.f)(&axpy(
            y,
            h,
            &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ))?;
        let y1 = axpy(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        if y1.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let k7 = (self.f)(&y1)?;
        let mut e = [0.0; DIM];
        for i in 0..DIM {
            e[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let mut acc = 0.0;
        for i in 0..DIM {
            let sc = self.tol + self.tol * y[i].abs().max(y1[i].abs());
            acc += (e[i] / sc).powi(2);
        }
        let err = (acc / DIM as f64).sqrt();
        Some((y1, k7, err, [k3, k4, k5, k6, k2]))
    }

    fn build_step(&self, h: f64, y1: State, k7: &State, ks: &[State; 5]) -> Step {
        let y0 = self.y;
        let k1 = &self.k1;
        let [k3, k4, k5, k6, _] = ks;
        let mut cont = [[0.0; DIM]; 5];
        for i in 0..DIM {
            let ydiff = y1[i] - y0[i];
            let bspl = h * k1[i] - ydiff;
            cont[0][i] = y0[i];
            cont[1][i] = ydiff;
            cont[2][i] = bspl;
            cont[3][i] = ydiff - h * k7[i] - bspl;
            cont[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        Step {
            t0: self.t,
            h,
            y0,
            y1,
            cont,
        }
    }
}
