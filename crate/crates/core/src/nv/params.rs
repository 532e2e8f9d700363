use serde::{Deserialize, Serialize};

use crate::error::{check_positive, check_rate, Result};

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

const HBAR: f64 = 1.054_571_817e-34;
const BOLTZMANN: f64 = 1.380_649e-23;

// Rates tied to the optical pump, as fractions of it.
const NV0_PUMP_RATIO: f64 = 1.3;
const IONISATION_RATIO: f64 = 0.037;
const RECOMBINATION_RATIO: f64 = 0.08;

/// Parameters of the nine-level model. Every rate is angular (rad/s).
///
/// `Default` gives the literature rate set with a pump of 2π × 1 MHz,
/// dephasing 2π × 1 MHz, ground-state transitions at 2.865 / 2.875 GHz,
/// the drive on the lower transition and no coupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NvModelParams {
    /// Optical pump GS → ES (Λ).
    pub pump_rate: f64,
    /// Pure dephasing of the m_s = ±1 levels (Γ_d).
    pub dephasing_rate: f64,
    /// Transition m_s = 0 → -1.
    pub omega_12: f64,
    /// Transition m_s = 0 → +1.
    pub omega_13: f64,
    /// Microwave drive.
    pub omega_mw: f64,
    /// Drive strength Ω = γ_e |B| / 2.
    pub coupling: f64,
    /// NV⁻ excited-state radiative decay (Γ_sp).
    pub gamma_sp: f64,
    /// NV⁰ excited-state radiative decay (Γ_sp0).
    pub gamma_sp0: f64,
    /// NV⁰ pump (Λ_0).
    pub lambda_0: f64,
    pub gamma_74: f64,
    pub gamma_75: f64,
    pub gamma_76: f64,
    pub gamma_17: f64,
    pub gamma_27: f64,
    pub gamma_37: f64,
    pub gamma_84: f64,
    pub gamma_85: f64,
    pub gamma_86: f64,
    pub gamma_19: f64,
    pub gamma_29: f64,
    pub gamma_39: f64,
    /// Longitudinal relaxation m_s = -1 → 0.
    pub gamma_12: f64,
    /// Longitudinal relaxation m_s = 0 → -1.
    pub gamma_21: f64,
    /// Defaults to `gamma_12` when unset.
    pub gamma_13: Option<f64>,
    /// Defaults to `gamma_21` when unset.
    pub gamma_31: Option<f64>,
    /// Bare spin relaxation rate γ_s used with `temperature`.
    pub gamma_s: f64,
    /// Kelvin. When set, the longitudinal rates are recomputed from the
    /// thermal occupancy instead of using the fixed 300 K values.
    pub temperature: Option<f64>,
    /// Count NV⁰ emission (Γ_sp0 · p9) in the photoluminescence signal.
    pub include_nv0_emission: bool,
}

impl Default for NvModelParams {
    fn default() -> Self {
        Self::with_pump_rate(TWO_PI * 1e6)
    }
}

impl NvModelParams {
    /// Literature defaults with the pump-proportional rates set from `pump_rate`.
    pub fn with_pump_rate(pump_rate: f64) -> Self {
        Self {
            pump_rate,
            dephasing_rate: TWO_PI * 1e6,
            omega_12: TWO_PI * 2.865e9,
            omega_13: TWO_PI * 2.875e9,
            omega_mw: TWO_PI * 2.865e9,
            coupling: 0.0,
            gamma_sp: TWO_PI * 66.16e6,
            gamma_sp0: TWO_PI * 50e6,
            lambda_0: NV0_PUMP_RATIO * pump_rate,
            gamma_74: TWO_PI * 11.1e6,
            gamma_75: TWO_PI * 91.8e6,
            gamma_76: TWO_PI * 91.8e6,
            gamma_17: TWO_PI * 4.87e6,
            gamma_27: TWO_PI * 2.04e6,
            gamma_37: TWO_PI * 2.04e6,
            gamma_84: IONISATION_RATIO * pump_rate,
            gamma_85: IONISATION_RATIO * pump_rate,
            gamma_86: IONISATION_RATIO * pump_rate,
            gamma_19: RECOMBINATION_RATIO * pump_rate,
            gamma_29: RECOMBINATION_RATIO * pump_rate,
            gamma_39: RECOMBINATION_RATIO * pump_rate,
            gamma_12: TWO_PI * 344.96,
            gamma_21: TWO_PI * 343.8,
            gamma_13: None,
            gamma_31: None,
            gamma_s: TWO_PI * 0.157,
            temperature: None,
            include_nv0_emission: false,
        }
    }

    /// Changes the pump rate and rescales Λ_0, the ionisation and the
    /// recombination rates with it. When the current pump is zero the
    /// default proportionality constants are used.
    pub fn rescale_pump(&self, pump_rate: f64) -> Self {
        let mut out = self.clone();
        out.pump_rate = pump_rate;
        if self.pump_rate > 0.0 {
            let s = pump_rate / self.pump_rate;
            out.lambda_0 *= s;
            for g in [
                &mut out.gamma_84,
                &mut out.gamma_85,
                &mut out.gamma_86,
                &mut out.gamma_19,
                &mut out.gamma_29,
                &mut out.gamma_39,
            ] {
                *g *= s;
            }
        } else {
            out.lambda_0 = NV0_PUMP_RATIO * pump_rate;
            out.gamma_84 = IONISATION_RATIO * pump_rate;
            out.gamma_85 = IONISATION_RATIO * pump_rate;
            out.gamma_86 = IONISATION_RATIO * pump_rate;
            out.gamma_19 = RECOMBINATION_RATIO * pump_rate;
            out.gamma_29 = RECOMBINATION_RATIO * pump_rate;
            out.gamma_39 = RECOMBINATION_RATIO * pump_rate;
        }
        out
    }

    /// Copy with the drive set to `frequency_hz` (ω_mw = 2πf).
    pub fn at_drive_frequency(&self, frequency_hz: f64) -> Self {
        Self {
            omega_mw: TWO_PI * frequency_hz,
            ..self.clone()
        }
    }

    pub fn with_coupling(&self, coupling: f64) -> Self {
        Self {
            coupling,
            ..self.clone()
        }
    }

    pub fn detuning_12(&self) -> f64 {
        self.omega_12 - self.omega_mw
    }

    pub fn detuning_13(&self) -> f64 {
        self.omega_13 - self.omega_mw
    }

    /// Longitudinal rates `(γ12, γ21, γ13, γ31)` after applying the
    /// temperature and mirroring rules.
    pub fn thermal_rates(&self) -> (f64, f64, f64, f64) {
        match self.temperature {
            Some(t) => {
                let occupancy = |omega: f64| 1.0 / ((HBAR * omega / (BOLTZMANN * t)).exp_m1());
                let n12 = occupancy(self.omega_12);
                let n13 = occupancy(self.omega_13);
                (
                    self.gamma_s * (1.0 + n12),
                    self.gamma_s * n12,
                    self.gamma_s * (1.0 + n13),
                    self.gamma_s * n13,
                )
            }
            None => (
                self.gamma_12,
                self.gamma_21,
                self.gamma_13.unwrap_or(self.gamma_12),
                self.gamma_31.unwrap_or(self.gamma_21),
            ),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rates: [(&'static str, f64); 23] = [
            ("pump_rate", self.pump_rate),
            ("dephasing_rate", self.dephasing_rate),
            ("coupling", self.coupling),
            ("gamma_sp", self.gamma_sp),
            ("gamma_sp0", self.gamma_sp0),
            ("lambda_0", self.lambda_0),
            ("gamma_74", self.gamma_74),
            ("gamma_75", self.gamma_75),
            ("gamma_76", self.gamma_76),
            ("gamma_17", self.gamma_17),
            ("gamma_27", self.gamma_27),
            ("gamma_37", self.gamma_37),
            ("gamma_84", self.gamma_84),
            ("gamma_85", self.gamma_85),
            ("gamma_86", self.gamma_86),
            ("gamma_19", self.gamma_19),
            ("gamma_29", self.gamma_29),
            ("gamma_39", self.gamma_39),
            ("gamma_12", self.gamma_12),
            ("gamma_21", self.gamma_21),
            ("gamma_13", self.gamma_13.unwrap_or(0.0)),
            ("gamma_31", self.gamma_31.unwrap_or(0.0)),
            ("gamma_s", self.gamma_s),
        ];
        for (name, value) in rates {
            check_rate(name, value)?;
        }
        check_positive("omega_12", self.omega_12)?;
        check_positive("omega_13", self.omega_13)?;
        check_positive("omega_mw", self.omega_mw)?;
        if let Some(t) = self.temperature {
            check_positive("temperature", t)?;
        }
        Ok(())
    }
}
