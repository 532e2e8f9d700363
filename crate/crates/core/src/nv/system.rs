use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use super::params::NvModelParams;
use crate::error::{Error, Result};

/// 9 populations plus real and imaginary parts of ⟨σ12⟩, ⟨σ13⟩, ⟨σ23⟩.
pub const STATE_DIM: usize = 15;

pub type StateVector = SVector<f64, STATE_DIM>;
pub type Generator = SMatrix<f64, STATE_DIM, STATE_DIM>;

const P1: usize = 0;
const P2: usize = 1;
const P3: usize = 2;
const P4: usize = 3;
const P5: usize = 4;
const P6: usize = 5;
const P7: usize = 6;
const P8: usize = 7;
const P9: usize = 8;
const RE12: usize = 9;
const IM12: usize = 10;
const RE13: usize = 11;
const IM13: usize = 12;
const RE23: usize = 13;
const IM23: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NvState {
    /// p1..p9.
    pub populations: [f64; 9],
    /// ⟨σ12⟩, ⟨σ13⟩, ⟨σ23⟩.
    pub coherences: [Complex64; 3],
}

impl NvState {
    /// All population in level `level` (1-based).
    pub fn pure(level: usize) -> Self {
        assert!((1..=9).contains(&level), "level must be 1..=9");
        let mut populations = [0.0; 9];
        populations[level - 1] = 1.0;
        Self {
            populations,
            coherences: [Complex64::new(0.0, 0.0); 3],
        }
    }

    pub fn total_population(&self) -> f64 {
        self.populations.iter().sum()
    }

    pub fn to_vector(&self) -> StateVector {
        let mut v = StateVector::zeros();
        for (i, p) in self.populations.iter().enumerate() {
            v[i] = *p;
        }
        for (k, c) in self.coherences.iter().enumerate() {
            v[RE12 + 2 * k] = c.re;
            v[RE12 + 2 * k + 1] = c.im;
        }
        v
    }

    pub fn from_vector(v: &StateVector) -> Self {
        let mut populations = [0.0; 9];
        populations.copy_from_slice(&v.as_slice()[..9]);
        let coherences = [
            Complex64::new(v[RE12], v[IM12]),
            Complex64::new(v[RE13], v[IM13]),
            Complex64::new(v[RE23], v[IM23]),
        ];
        Self {
            populations,
            coherences,
        }
    }

    /// Checks `Σp = 1`, `p ∈ [0, 1]` and `|c| ≤ 1` to within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let v = self.to_vector();
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("state", "non-finite component"));
        }
        let total = self.total_population();
        if (total - 1.0).abs() > tol {
            return Err(Error::invalid(
                "state",
                format!("populations sum to {total}, expected 1"),
            ));
        }
        if let Some(i) = self
            .populations
            .iter()
            .position(|p| *p < -tol || *p > 1.0 + tol)
        {
            return Err(Error::invalid(
                "state",
                format!("p{} = {} outside [0, 1]", i + 1, self.populations[i]),
            ));
        }
        if self.coherences.iter().any(|c| c.norm() > 1.0 + tol) {
            return Err(Error::invalid("state", "coherence modulus exceeds 1"));
        }
        Ok(())
    }
}

/// The linear map `state' = M state` of the nine-level model.
#[derive(Debug, Clone)]
pub struct LinearDynamics {
    pub matrix: Generator,
    pub params: NvModelParams,
}

impl LinearDynamics {
    pub fn apply(&self, state: &StateVector) -> StateVector {
        self.matrix * state
    }

    pub fn derivative(&self, state: &NvState) -> NvState {
        NvState::from_vector(&self.apply(&state.to_vector()))
    }
}

/// Writes the Heisenberg–Lindblad equations of motion for the level
/// populations and the three ground-state coherences as a real 15×15
/// generator. The decay bracket of each coherence equation multiplies that
/// coherence, and `⟨σ21⟩ = ⟨σ12⟩*` etc. are eliminated.
pub fn build_system(params: &NvModelParams) -> Result<LinearDynamics> {
    params.validate()?;
    let p = params;
    let (g12, g21, g13, g31) = p.thermal_rates();
    let pump = p.pump_rate;
    let omega = p.coupling;
    let d12 = p.detuning_12();
    let d13 = p.detuning_13();

    let decay_12 = 0.5 * (p.dephasing_rate + g12 + g21 + 2.0 * pump);
    let decay_13 = 0.5 * (p.dephasing_rate + g13 + g31 + 2.0 * pump);
    let decay_23 = 0.5 * (2.0 * p.dephasing_rate + g12 + g13 + 2.0 * pump);

    let mut m = Generator::zeros();

    // ground triplet
    m[(P1, P1)] = -(pump + g21 + g31);
    m[(P1, P2)] = g12;
    m[(P1, P3)] = g13;
    m[(P1, P4)] = p.gamma_sp;
    m[(P1, P7)] = p.gamma_17;
    m[(P1, P9)] = p.gamma_19;
    m[(P1, IM12)] = 2.0 * omega;
    m[(P1, IM13)] = 2.0 * omega;

    m[(P2, P1)] = g21;
    m[(P2, P2)] = -(pump + g12);
    m[(P2, P5)] = p.gamma_sp;
    m[(P2, P7)] = p.gamma_27;
    m[(P2, P9)] = p.gamma_29;
    m[(P2, IM12)] = -2.0 * omega;

    m[(P3, P1)] = g31;
    m[(P3, P3)] = -(pump + g13);
    m[(P3, P6)] = p.gamma_sp;
    m[(P3, P7)] = p.gamma_37;
    m[(P3, P9)] = p.gamma_39;
    m[(P3, IM13)] = -2.0 * omega;

    // excited triplet
    m[(P4, P1)] = pump;
    m[(P4, P4)] = -(p.gamma_sp + p.gamma_74 + p.gamma_84);
    m[(P5, P2)] = pump;
    m[(P5, P5)] = -(p.gamma_sp + p.gamma_75 + p.gamma_85);
    m[(P6, P3)] = pump;
    m[(P6, P6)] = -(p.gamma_sp + p.gamma_76 + p.gamma_86);

    // singlet
    m[(P7, P4)] = p.gamma_74;
    m[(P7, P5)] = p.gamma_75;
    m[(P7, P6)] = p.gamma_76;
    m[(P7, P7)] = -(p.gamma_17 + p.gamma_27 + p.gamma_37);

    // NV0
    m[(P8, P4)] = p.gamma_84;
    m[(P8, P5)] = p.gamma_85;
    m[(P8, P6)] = p.gamma_86;
    m[(P8, P8)] = -p.lambda_0;
    m[(P8, P9)] = p.gamma_sp0;
    m[(P9, P8)] = p.lambda_0;
    m[(P9, P9)] = -(p.gamma_sp0 + p.gamma_19 + p.gamma_29 + p.gamma_39);

    // ⟨σ12⟩' = iΩ(⟨σ32⟩ + p2 - p1) - (iΔ12 + decay_12)⟨σ12⟩
    m[(RE12, IM23)] = omega;
    m[(RE12, RE12)] = -decay_12;
    m[(RE12, IM12)] = d12;
    m[(IM12, RE23)] = omega;
    m[(IM12, P2)] = omega;
    m[(IM12, P1)] = -omega;
    m[(IM12, RE12)] = -d12;
    m[(IM12, IM12)] = -decay_12;

    // ⟨σ13⟩' = iΩ(⟨σ23⟩ + p3 - p1) - (iΔ13 + decay_13)⟨σ13⟩
    m[(RE13, IM23)] = -omega;
    m[(RE13, RE13)] = -decay_13;
    m[(RE13, IM13)] = d13;
    m[(IM13, RE23)] = omega;
    m[(IM13, P3)] = omega;
    m[(IM13, P1)] = -omega;
    m[(IM13, RE13)] = -d13;
    m[(IM13, IM13)] = -decay_13;

    // ⟨σ23⟩' = iΩ(⟨σ13⟩ - ⟨σ21⟩) + (i(Δ12 - Δ13) - decay_23)⟨σ23⟩
    let d23 = d12 - d13;
    m[(RE23, IM13)] = -omega;
    m[(RE23, IM12)] = -omega;
    m[(RE23, RE23)] = -decay_23;
    m[(RE23, IM23)] = -d23;
    m[(IM23, RE13)] = omega;
    m[(IM23, RE12)] = -omega;
    m[(IM23, RE23)] = d23;
    m[(IM23, IM23)] = -decay_23;

    Ok(LinearDynamics {
        matrix: m,
        params: params.clone(),
    })
}
