use nalgebra::FullPivLU;

use super::system::{Generator, LinearDynamics, NvState, StateVector};
use crate::error::{Error, Result};

/// Populations below zero by at most this much are rounding noise.
const NEGATIVE_TOLERANCE: f64 = 1e-10;
/// Relative pivot size below which the constrained matrix is singular.
const RANK_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct SteadySolution {
    pub state: NvState,
    /// `‖M x‖∞ / ‖M‖∞` after normalisation.
    pub residual: f64,
    /// Some population was in `[-1e-10, 0)` and was set to zero.
    pub clamped: bool,
}

/// Null vector of the generator with unit trace.
pub fn steady_state(system: &LinearDynamics) -> Result<NvState> {
    solve_steady_state(system).map(|s| s.state)
}

/// Solves `M x = 0, Σp = 1` by replacing the p1 row of `M` with the
/// normalisation row, followed by one round of iterative refinement.
pub fn solve_steady_state(system: &LinearDynamics) -> Result<SteadySolution> {
    let m = &system.matrix;
    let scale = m.abs().row_sum().max();
    if scale == 0.0 {
        return Err(Error::Singular("generator is identically zero".into()));
    }

    // Scale the normalisation row to the size of the other entries.
    let mut a: Generator = *m;
    for j in 0..a.ncols() {
        a[(0, j)] = if j < 9 { scale } else { 0.0 };
    }
    let mut rhs = StateVector::zeros();
    rhs[0] = scale;

    let lu = FullPivLU::new(a);
    let u = lu.u();
    let pivots: Vec<f64> = (0..u.nrows()).map(|i| u[(i, i)].abs()).collect();
    let max_pivot = pivots.iter().cloned().fold(0.0, f64::max);
    let min_pivot = pivots.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min_pivot > RANK_TOLERANCE * max_pivot) {
        return Err(Error::Singular(format!(
            "constrained generator is rank deficient (pivot ratio {:e})",
            min_pivot / max_pivot
        )));
    }
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("LU solve failed".into()))?;
    let correction = lu
        .solve(&(rhs - a * x))
        .ok_or_else(|| Error::Singular("LU solve failed".into()))?;
    x += correction;

    let mut clamped = false;
    for i in 0..9 {
        if x[i] < 0.0 {
            if x[i] < -NEGATIVE_TOLERANCE {
                return Err(Error::NegativePopulation {
                    index: i + 1,
                    value: x[i],
                });
            }
            x[i] = 0.0;
            clamped = true;
        }
    }
    let total: f64 = x.rows(0, 9).sum();
    x /= total;

    let residual = (m * x).amax() / scale;
    Ok(SteadySolution {
        state: NvState::from_vector(&x),
        residual,
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nv::{build_system, NvModelParams, TWO_PI};

    #[test]
    fn default_params_residual_and_trace() {
        let params = NvModelParams::default().with_coupling(TWO_PI * 1e6);
        let sol = solve_steady_state(&build_system(&params).unwrap()).unwrap();
        assert!(sol.residual < 1e-9, "residual {:e}", sol.residual);
        assert!((sol.state.total_population() - 1.0).abs() < 1e-15);
        sol.state.validate(1e-10).unwrap();
    }

    #[test]
    fn no_pump_relaxes_into_ground_triplet() {
        // NV0 and recombination rates stay active so the NV0 levels are not a trap.
        let params = NvModelParams {
            pump_rate: 0.0,
            ..NvModelParams::default()
        };
        let sol = steady_state(&build_system(&params).unwrap()).unwrap();
        let p = sol.populations;
        for (i, pi) in p.iter().enumerate().skip(3) {
            assert!(pi.abs() < 1e-12, "p{} = {pi:e}", i + 1);
        }
        // thermal balance between m_s = 0 and ±1
        let ratio = p[1] / p[0];
        assert!((ratio - params.gamma_21 / params.gamma_12).abs() < 1e-9);
    }

    #[test]
    fn all_rates_zero_is_singular() {
        let mut params = NvModelParams::with_pump_rate(0.0);
        params.gamma_sp = 0.0;
        params.gamma_sp0 = 0.0;
        params.dephasing_rate = 0.0;
        params.gamma_74 = 0.0;
        params.gamma_75 = 0.0;
        params.gamma_76 = 0.0;
        params.gamma_17 = 0.0;
        params.gamma_27 = 0.0;
        params.gamma_37 = 0.0;
        params.gamma_12 = 0.0;
        params.gamma_21 = 0.0;
        let sys = build_system(&params).unwrap();
        assert!(matches!(steady_state(&sys), Err(Error::Singular(_))));
    }

    #[test]
    fn resonant_drive_moves_population_to_minus_one() {
        let base = NvModelParams::default();
        let undriven = steady_state(&build_system(&base).unwrap()).unwrap();
        let driven =
            steady_state(&build_system(&base.with_coupling(TWO_PI * 1e6)).unwrap()).unwrap();
        assert!(driven.populations[1] > undriven.populations[1]);
    }
}
