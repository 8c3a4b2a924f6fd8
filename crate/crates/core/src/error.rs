use thiserror::Error;

use crate::classical::PhasePoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    /// Evaluation at the apex `l = 0` where the expression is singular.
    #[error("singular point at the apex (l = {l}, J = {angular_momentum})")]
    Singularity { l: f64, angular_momentum: f64 },

    /// Negative discriminant `E² − J²ω²/sin²α`; the state is not a valid oscillator state.
    #[error("infeasible oscillator orbit: discriminant {discriminant} < 0")]
    Infeasible { discriminant: f64 },

    /// The `j = 0` sector has its own (Hermite / trigonometric) solutions.
    #[error("operation undefined in the j = 0 sector")]
    Sector,

    #[error("closed-form orbit of kind {actual} used where {expected} was required")]
    OrbitKind {
        expected: &'static str,
        actual: &'static str,
    },

    /// The integrator came within the apex guard radius on a `J ≠ 0` run.
    /// The exact flow never does this, so the tolerance is too loose.
    #[error("trajectory approached the apex (|l| = {}, guard {guard}) at t = {}", .state.l.abs(), .state.t)]
    SingularityApproach { state: PhasePoint, guard: f64 },

    #[error("step size underflow (h = {step}) at t = {}", .state.t)]
    StepUnderflow { state: PhasePoint, step: f64 },

    #[error("step budget of {max_steps} exhausted at t = {}", .state.t)]
    StepBudget { state: PhasePoint, max_steps: usize },

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge: estimate {estimate}, error {error_estimate}")]
    Accuracy { estimate: f64, error_estimate: f64 },
}

pub(crate) fn ensure_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}
