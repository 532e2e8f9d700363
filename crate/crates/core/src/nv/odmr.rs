use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use super::params::NvModelParams;
use super::steady::steady_state;
use super::system::{build_system, NvState};
use crate::error::{check_positive, check_rate, Error, Result};

/// Detected red-light rate: Γ_sp (p4 + p5 + p6), plus Γ_sp0 p9 when NV⁰
/// emission is included.
pub fn photoluminescence(state: &NvState, params: &NvModelParams) -> f64 {
    let p = &state.populations;
    let mut pl = params.gamma_sp * (p[3] + p[4] + p[5]);
    if params.include_nv0_emission {
        pl += params.gamma_sp0 * p[8];
    }
    pl
}

fn steady_pl(params: &NvModelParams) -> Result<f64> {
    let state = steady_state(&build_system(params)?)?;
    Ok(photoluminescence(&state, params))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdmrSpectrum {
    /// Drive frequencies in Hz, strictly increasing.
    pub frequencies: Vec<f64>,
    /// Photoluminescence, arbitrary units, strictly positive.
    pub pl: Vec<f64>,
    /// Model parameters for simulated spectra; `None` for loaded data.
    pub params_snapshot: Option<NvModelParams>,
}

impl OdmrSpectrum {
    pub fn new(frequencies: Vec<f64>, pl: Vec<f64>) -> Result<Self> {
        let s = Self {
            frequencies,
            pl,
            params_snapshot: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.frequencies.len() != self.pl.len() {
            return Err(Error::invalid(
                "spectrum",
                format!(
                    "{} frequencies but {} PL values",
                    self.frequencies.len(),
                    self.pl.len()
                ),
            ));
        }
        if let Some(i) = self.frequencies.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(
                "frequencies",
                format!("not strictly increasing at index {}", i + 1),
            ));
        }
        if let Some(i) = self.pl.iter().position(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::invalid(
                "pl",
                format!("value {} at index {i} is not strictly positive", self.pl[i]),
            ));
        }
        Ok(())
    }

    /// Smallest frequency spacing of the grid.
    pub fn grid_step(&self) -> f64 {
        self.frequencies
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Steady-state PL on a uniform grid of `n_points` drive frequencies from
/// `f_start` to `f_stop` (Hz). With `normalize`, the curve is divided by its
/// maximum.
pub fn odmr_spectrum(
    params: &NvModelParams,
    f_start: f64,
    f_stop: f64,
    n_points: usize,
    normalize: bool,
) -> Result<OdmrSpectrum> {
    params.validate()?;
    check_positive("f_start", f_start)?;
    if !(f_stop > f_start) || !f_stop.is_finite() {
        return Err(Error::invalid("f_stop", "must exceed f_start"));
    }
    if n_points < 2 {
        return Err(Error::invalid(
            "n_points",
            "at least two points are required",
        ));
    }
    let span = f_stop - f_start;
    let last = (n_points - 1) as f64;
    let frequencies: Vec<f64> = (0..n_points)
        .map(|i| f_start + span * i as f64 / last)
        .collect();

    let mut pl = frequencies
        .par_iter()
        .map(|&f| {
            steady_pl(&params.at_drive_frequency(f)).map_err(|e| Error::AtFrequency {
                frequency_hz: f,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<f64>>>()?;

    if normalize {
        let max = pl.iter().cloned().fold(f64::MIN, f64::max);
        if max > 0.0 {
            pl.iter_mut().for_each(|p| *p /= max);
        }
    }
    let spectrum = OdmrSpectrum {
        frequencies,
        pl,
        params_snapshot: Some(params.clone()),
    };
    spectrum.validate()?;
    Ok(spectrum)
}

/// Writes `frequency_hz,pl` with shortest round-trip float formatting.
pub fn write_spectrum_csv(spectrum: &OdmrSpectrum, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "frequency_hz,pl")?;
    for (f, p) in spectrum.frequencies.iter().zip(&spectrum.pl) {
        writeln!(out, "{f:e},{p:e}")?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContrastRow {
    pub pump_rate: f64,
    pub coupling: f64,
    /// `1 - PL(on resonance) / PL(Ω = 0)`.
    pub contrast: f64,
    pub pl_driven: f64,
    pub pl_reference: f64,
}

/// Contrast of the lower (ω_mw = ω12) resonance for every (Λ, Ω) pair,
/// ordered by pump rate and then coupling. Λ-proportional rates are rescaled
/// with each pump rate.
pub fn contrast_vs_coupling(
    params: &NvModelParams,
    couplings: &[f64],
    pump_rates: &[f64],
) -> Result<Vec<ContrastRow>> {
    if couplings.is_empty() || pump_rates.is_empty() {
        return Err(Error::invalid(
            "couplings",
            "coupling and pump lists must be non-empty",
        ));
    }
    for &c in couplings {
        check_rate("coupling", c)?;
    }
    for &p in pump_rates {
        check_positive("pump_rate", p)?;
    }
    let jobs: Vec<(f64, f64)> = pump_rates
        .iter()
        .flat_map(|&p| couplings.iter().map(move |&c| (p, c)))
        .collect();
    let references = pump_rates
        .par_iter()
        .map(|&pump| {
            let mut p = params.rescale_pump(pump).with_coupling(0.0);
            p.omega_mw = p.omega_12;
            steady_pl(&p)
        })
        .collect::<Result<Vec<f64>>>()?;

    jobs.par_iter()
        .enumerate()
        .map(|(k, &(pump, coupling))| {
            let mut p = params.rescale_pump(pump).with_coupling(coupling);
            p.omega_mw = p.omega_12;
            let pl_driven = steady_pl(&p)?;
            let pl_reference = references[k / couplings.len()];
            Ok(ContrastRow {
                pump_rate: pump,
                coupling,
                contrast: 1.0 - pl_driven / pl_reference,
                pl_driven,
                pl_reference,
            })
        })
        .collect()
}

/// Full width at half depth (Hz) of the dip centred at `center_hz`, where
/// depth is measured from the undriven PL. The edges are bracketed by
/// stepping outward and refined by bisection.
pub fn resonance_fwhm(
    params: &NvModelParams,
    center_hz: f64,
    max_halfwidth_hz: f64,
) -> Result<f64> {
    let pl_at = |f: f64| steady_pl(&params.at_drive_frequency(f));
    let baseline = steady_pl(&params.with_coupling(0.0))?;
    let bottom = pl_at(center_hz)?;
    if !(bottom < baseline) {
        return Err(Error::invalid("coupling", "no dip at the requested centre"));
    }
    let half = 0.5 * (bottom + baseline);

    let edge = |direction: f64| -> Result<f64> {
        let mut inner = 0.0;
        let mut outer = 1e3;
        loop {
            if outer > max_halfwidth_hz {
                return Err(Error::invalid(
                    "max_halfwidth_hz",
                    "half-depth edge not found within the search window",
                ));
            }
            if pl_at(center_hz + direction * outer)? >= half {
                break;
            }
            inner = outer;
            outer *= 2.0;
        }
        for _ in 0..80 {
            let mid = 0.5 * (inner + outer);
            if pl_at(center_hz + direction * mid)? >= half {
                outer = mid;
            } else {
                inner = mid;
            }
            if outer - inner < 1e-3 {
                break;
            }
        }
        Ok(0.5 * (inner + outer))
    };
    Ok(edge(1.0)? + edge(-1.0)?)
}
