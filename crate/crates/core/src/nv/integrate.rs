//! Fixed-step L-stable integrators for `x' = M x`.
//!
//! Because the generator is constant, each scheme reduces to a one-step
//! propagator matrix `P(h)` that is factorised once and then applied
//! repeatedly. Linear invariants of `M` (the trace) are preserved by every
//! Runge–Kutta propagator up to rounding.

use std::sync::{Arc, OnceLock};

use nalgebra::FullPivLU;

use super::system::{Generator, LinearDynamics, NvState, StateVector};
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

/// Upper bound on the number of steps a single call may take.
pub const MAX_STEPS: usize = 200_000_000;

pub trait Integrator: Named + Send + Sync {
    /// One-step propagator for step `h`.
    fn propagator(&self, generator: &Generator, h: f64) -> Result<Generator>;
}

fn inverse(a: Generator) -> Result<Generator> {
    FullPivLU::new(a)
        .try_inverse()
        .ok_or_else(|| Error::Singular("implicit stage matrix is not invertible".into()))
}

/// First-order backward Euler: `P = (I - hM)^-1`.
pub struct BackwardEuler;

impl Named for BackwardEuler {
    fn name(&self) -> &'static str {
        "backward-euler"
    }
}

impl Integrator for BackwardEuler {
    fn propagator(&self, generator: &Generator, h: f64) -> Result<Generator> {
        inverse(Generator::identity() - generator * h)
    }
}

/// Second-order TR-BDF2 with `γ = 2 - √2`; both implicit stages share the
/// same matrix `I - (γ/2) h M`.
pub struct TrBdf2;

impl Named for TrBdf2 {
    fn name(&self) -> &'static str {
        "tr-bdf2"
    }
}

impl Integrator for TrBdf2 {
    fn propagator(&self, generator: &Generator, h: f64) -> Result<Generator> {
        let gamma = 2.0 - std::f64::consts::SQRT_2;
        let id = Generator::identity();
        let stage_inv = inverse(id - generator * (0.5 * gamma * h))?;
        // trapezoidal stage to t + γh
        let trapezoid = stage_inv * (id + generator * (0.5 * gamma * h));
        // BDF2 stage from t and t + γh
        let w_mid = 1.0 / (gamma * (2.0 - gamma));
        let w_start = (1.0 - gamma).powi(2) / (gamma * (2.0 - gamma));
        Ok(stage_inv * (trapezoid * w_mid - id * w_start))
    }
}

pub fn integrator_registry() -> &'static Registry<dyn Integrator> {
    static REGISTRY: OnceLock<Registry<dyn Integrator>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut r: Registry<dyn Integrator> = Registry::new("integrator", "tr-bdf2");
        r.register(Arc::new(BackwardEuler))
            .register(Arc::new(TrBdf2));
        r
    })
}

/// Integrates from `initial` to `t_final` with the default integrator.
pub fn time_evolve(
    system: &LinearDynamics,
    initial: &NvState,
    t_final: f64,
    dt: f64,
) -> Result<NvState> {
    time_evolve_with(
        integrator_registry().default_entry().as_ref(),
        system,
        initial,
        t_final,
        dt,
    )
}

/// Integrates with uniform steps no larger than `dt`; the step is shrunk
/// so that an integer number of steps lands exactly on `t_final`.
pub fn time_evolve_with(
    integrator: &dyn Integrator,
    system: &LinearDynamics,
    initial: &NvState,
    t_final: f64,
    dt: f64,
) -> Result<NvState> {
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(Error::invalid(
            "t_final",
            format!("{t_final:e} must be >= 0"),
        ));
    }
    if t_final == 0.0 {
        return Ok(*initial);
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("dt", format!("{dt:e} must be > 0")));
    }
    if dt > t_final {
        return Err(Error::invalid(
            "dt",
            format!("{dt:e} exceeds t_final {t_final:e}"),
        ));
    }
    let steps_f = (t_final / dt).ceil();
    if steps_f > MAX_STEPS as f64 {
        return Err(Error::StepUnderflow { t: t_final, dt });
    }
    let steps = steps_f as usize;
    let h = t_final / steps as f64;
    if t_final + h == t_final {
        return Err(Error::StepUnderflow { t: t_final, dt: h });
    }

    let propagator = integrator.propagator(&system.matrix, h)?;
    let mut x: StateVector = initial.to_vector();
    for _ in 0..steps {
        x = propagator * x;
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::StepUnderflow { t: t_final, dt: h });
    }
    Ok(NvState::from_vector(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nv::{build_system, NvModelParams};

    #[test]
    fn zero_horizon_is_identity() {
        let sys = build_system(&NvModelParams::default()).unwrap();
        let s = NvState::pure(1);
        assert_eq!(time_evolve(&sys, &s, 0.0, 1e-9).unwrap(), s);
    }

    #[test]
    fn frozen_dynamics_are_constant() {
        let mut p = NvModelParams::with_pump_rate(0.0);
        p.dephasing_rate = 0.0;
        p.gamma_sp = 0.0;
        p.gamma_sp0 = 0.0;
        p.gamma_74 = 0.0;
        p.gamma_75 = 0.0;
        p.gamma_76 = 0.0;
        p.gamma_17 = 0.0;
        p.gamma_27 = 0.0;
        p.gamma_37 = 0.0;
        p.gamma_12 = 0.0;
        p.gamma_21 = 0.0;
        let sys = build_system(&p).unwrap();
        let mut s = NvState::pure(5);
        s.populations = [0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1];
        let out = time_evolve(&sys, &s, 1e-3, 1e-5).unwrap();
        let drift = (out.to_vector() - s.to_vector()).amax();
        assert!(drift < 1e-13, "{drift:e}");
    }

    #[test]
    fn bad_steps_rejected() {
        let sys = build_system(&NvModelParams::default()).unwrap();
        let s = NvState::pure(1);
        assert!(time_evolve(&sys, &s, 1e-6, 0.0).is_err());
        assert!(time_evolve(&sys, &s, 1e-6, 1e-5).is_err());
        assert!(matches!(
            time_evolve(&sys, &s, 1.0, 1e-12),
            Err(Error::StepUnderflow { .. })
        ));
    }

    #[test]
    fn registry_names() {
        assert_eq!(
            integrator_registry().names(),
            vec!["backward-euler", "tr-bdf2"]
        );
        assert_eq!(integrator_registry().default_name(), "tr-bdf2");
    }

    #[test]
    fn schemes_agree_on_short_horizon() {
        let sys = build_system(&NvModelParams::default().with_coupling(TWO_PI_MHZ)).unwrap();
        let s = NvState::pure(1);
        let a = time_evolve_with(&TrBdf2, &sys, &s, 2e-6, 1e-10).unwrap();
        let b = time_evolve_with(&BackwardEuler, &sys, &s, 2e-6, 1e-11).unwrap();
        let diff = (a.to_vector() - b.to_vector()).amax();
        assert!(diff < 1e-3, "{diff:e}");
    }

    const TWO_PI_MHZ: f64 = crate::nv::TWO_PI * 1e6;
}
