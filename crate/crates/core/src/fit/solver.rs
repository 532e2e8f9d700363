//! Small dense nonlinear least-squares solvers.

use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};

use crate::registry::{Named, Registry};

/// Residual model `r(p)` with analytic Jacobian `∂r/∂p`.
pub trait LeastSquaresProblem {
    fn residuals(&self, p: &DVector<f64>) -> DVector<f64>;
    fn jacobian(&self, p: &DVector<f64>) -> DMatrix<f64>;
    /// Parameters outside the model's domain are never accepted.
    fn admissible(&self, _p: &DVector<f64>) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub max_iterations: usize,
    /// Relative RSS decrease below which an accepted step counts as stalled.
    pub rss_rtol: f64,
    /// Largest parameter update (∞-norm) allowed alongside a stalled RSS.
    pub step_tol: f64,
    /// RSS at or below which the fit is exact to rounding.
    pub rss_atol: f64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            rss_rtol: 1e-10,
            step_tol: 1e-8,
            rss_atol: 1e-28,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverReport {
    pub params: DVector<f64>,
    pub rss: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub trait LeastSquaresSolver: Named + Send + Sync {
    fn solve(
        &self,
        problem: &dyn LeastSquaresProblem,
        start: DVector<f64>,
        rule: &StopRule,
    ) -> SolverReport;
}

fn rss_at(problem: &dyn LeastSquaresProblem, p: &DVector<f64>) -> f64 {
    let r = problem.residuals(p);
    let s = r.norm_squared();
    if s.is_finite() {
        s
    } else {
        f64::INFINITY
    }
}

/// Solves `(JᵀJ + λ diag(JᵀJ)) δ = −Jᵀr`.
fn damped_step(jtj: &DMatrix<f64>, grad: &DVector<f64>, lambda: f64) -> Option<DVector<f64>> {
    let mut a = jtj.clone();
    let floor = jtj.diagonal().max() * 1e-15;
    for i in 0..a.nrows() {
        a[(i, i)] += lambda * jtj[(i, i)].max(floor);
    }
    match a.clone().cholesky() {
        Some(c) => Some(-c.solve(grad)),
        None => a.lu().solve(&(-grad)),
    }
}

/// Levenberg–Marquardt with Marquardt diagonal scaling.
pub struct LevenbergMarquardt;

impl Named for LevenbergMarquardt {
    fn name(&self) -> &'static str {
        "levenberg-marquardt"
    }
}

impl LeastSquaresSolver for LevenbergMarquardt {
    fn solve(
        &self,
        problem: &dyn LeastSquaresProblem,
        start: DVector<f64>,
        rule: &StopRule,
    ) -> SolverReport {
        let mut p = start;
        let mut rss = rss_at(problem, &p);
        let mut lambda = 1e-3;
        let mut iterations = 0;
        let mut converged = rss <= rule.rss_atol;
        while !converged && iterations < rule.max_iterations {
            iterations += 1;
            let r = problem.residuals(&p);
            let jac = problem.jacobian(&p);
            let jtj = jac.tr_mul(&jac);
            let grad = jac.tr_mul(&r);
            let mut accepted = false;
            while lambda < 1e20 {
                let Some(step) = damped_step(&jtj, &grad, lambda) else {
                    lambda *= 10.0;
                    continue;
                };
                let trial = &p + &step;
                let trial_rss = if problem.admissible(&trial) {
                    rss_at(problem, &trial)
                } else {
                    f64::INFINITY
                };
                if trial_rss <= rss {
                    let drop = (rss - trial_rss) / rss.max(f64::MIN_POSITIVE);
                    let step_size = step.amax();
                    p = trial;
                    rss = trial_rss;
                    lambda = (lambda / 3.0).max(1e-15);
                    accepted = true;
                    converged =
                        rss <= rule.rss_atol || (drop < rule.rss_rtol && step_size < rule.step_tol);
                    break;
                }
                lambda *= 4.0;
            }
            if !accepted {
                // no descent direction left at working precision
                converged = true;
            }
        }
        SolverReport {
            params: p,
            rss,
            iterations,
            converged,
        }
    }
}

/// Gauss–Newton with step halving.
pub struct GaussNewton;

impl Named for GaussNewton {
    fn name(&self) -> &'static str {
        "gauss-newton"
    }
}

impl LeastSquaresSolver for GaussNewton {
    fn solve(
        &self,
        problem: &dyn LeastSquaresProblem,
        start: DVector<f64>,
        rule: &StopRule,
    ) -> SolverReport {
        let mut p = start;
        let mut rss = rss_at(problem, &p);
        let mut iterations = 0;
        let mut converged = rss <= rule.rss_atol;
        while !converged && iterations < rule.max_iterations {
            iterations += 1;
            let r = problem.residuals(&p);
            let jac = problem.jacobian(&p);
            let Some(step) = damped_step(&jac.tr_mul(&jac), &jac.tr_mul(&r), 0.0) else {
                break;
            };
            let mut scale = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let trial = &p + &step * scale;
                if problem.admissible(&trial) {
                    let trial_rss = rss_at(problem, &trial);
                    if trial_rss <= rss {
                        let drop = (rss - trial_rss) / rss.max(f64::MIN_POSITIVE);
                        p = trial;
                        rss = trial_rss;
                        accepted = true;
                        converged = rss <= rule.rss_atol
                            || (drop < rule.rss_rtol && scale * step.amax() < rule.step_tol);
                        break;
                    }
                }
                scale *= 0.5;
            }
            if !accepted {
                converged = true;
            }
        }
        SolverReport {
            params: p,
            rss,
            iterations,
            converged,
        }
    }
}

pub fn solver_registry() -> &'static Registry<dyn LeastSquaresSolver> {
    static REGISTRY: OnceLock<Registry<dyn LeastSquaresSolver>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut r: Registry<dyn LeastSquaresSolver> =
            Registry::new("least-squares solver", "levenberg-marquardt");
        r.register(Arc::new(LevenbergMarquardt))
            .register(Arc::new(GaussNewton));
        r
    })
}
