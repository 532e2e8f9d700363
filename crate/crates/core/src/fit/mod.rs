//! Double-Lorentzian fits of ODMR spectra and contrast extraction.
//!
//! Fits run in normalised coordinates: frequency mapped onto `[-1, 1]` across
//! the data window and PL divided by its maximum. Results are mapped back to
//! Hz and the input PL units.

mod init;
mod io;
mod solver;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::nv::OdmrSpectrum;

pub use init::{auto_initialize, DEFAULT_HWHM_HZ};
pub use io::load_spectrum_csv;
pub use solver::{
    solver_registry, GaussNewton, LeastSquaresProblem, LeastSquaresSolver, LevenbergMarquardt,
    SolverReport, StopRule,
};

/// Free parameters of the double-Lorentzian model.
pub const PARAM_COUNT: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dip {
    /// Depth below the baseline, PL units.
    pub amplitude: f64,
    /// Hz.
    pub center: f64,
    /// Half width at half depth, Hz.
    pub hwhm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianParams {
    pub baseline: f64,
    pub dips: [Dip; 2],
}

impl LorentzianParams {
    /// `[B, A1, c1, w1, A2, c2, w2]`.
    pub fn to_array(&self) -> [f64; PARAM_COUNT] {
        let [d1, d2] = self.dips;
        [
            self.baseline,
            d1.amplitude,
            d1.center,
            d1.hwhm,
            d2.amplitude,
            d2.center,
            d2.hwhm,
        ]
    }

    pub fn from_array(p: &[f64; PARAM_COUNT]) -> Self {
        Self {
            baseline: p[0],
            dips: [
                Dip {
                    amplitude: p[1],
                    center: p[2],
                    hwhm: p[3],
                },
                Dip {
                    amplitude: p[4],
                    center: p[5],
                    hwhm: p[6],
                },
            ],
        }
    }
}

/// `B − Σ A_k w_k² / ((f − c_k)² + w_k²)`.
pub fn double_lorentzian(f: f64, p: &LorentzianParams) -> f64 {
    p.baseline
        - p.dips
            .iter()
            .map(|d| {
                let w2 = d.hwhm * d.hwhm;
                d.amplitude * w2 / ((f - d.center).powi(2) + w2)
            })
            .sum::<f64>()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LorentzianFit {
    /// Dips ordered by ascending centre.
    pub params: LorentzianParams,
    /// Residual sum of squares in PL units squared.
    pub rss: f64,
    /// `amplitude / baseline` per dip.
    pub contrasts: [f64; 2],
    pub converged: bool,
    pub iterations: usize,
    /// The input had no measurable variation; amplitudes are zero.
    pub flat: bool,
}

impl LorentzianFit {
    pub fn baseline(&self) -> f64 {
        self.params.baseline
    }

    pub fn centers(&self) -> [f64; 2] {
        self.params.dips.map(|d| d.center)
    }

    pub fn splitting(&self) -> f64 {
        self.params.dips[1].center - self.params.dips[0].center
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContrastReport {
    /// Larger of the two dip contrasts.
    pub deeper: f64,
    pub mean: f64,
    pub sum: f64,
    pub per_dip: [f64; 2],
}

/// Contrast of a fit. Unconverged fits are refused unless `force` is set.
pub fn extract_contrast(fit: &LorentzianFit, force: bool) -> Result<ContrastReport> {
    if !fit.converged && !force {
        return Err(Error::NotConverged {
            iterations: fit.iterations,
        });
    }
    let [c1, c2] = fit.contrasts;
    Ok(ContrastReport {
        deeper: c1.max(c2),
        mean: 0.5 * (c1 + c2),
        sum: c1 + c2,
        per_dip: fit.contrasts,
    })
}

/// Affine map between data units and the unit window.
#[derive(Debug, Clone, Copy)]
struct Normalisation {
    mid: f64,
    half_span: f64,
    pl_scale: f64,
}

impl Normalisation {
    fn new(spectrum: &OdmrSpectrum) -> Self {
        let first = spectrum.frequencies[0];
        let last = *spectrum.frequencies.last().unwrap();
        Self {
            mid: 0.5 * (first + last),
            half_span: 0.5 * (last - first),
            pl_scale: spectrum.pl.iter().cloned().fold(f64::MIN, f64::max),
        }
    }

    fn normalise(&self, p: &LorentzianParams) -> DVector<f64> {
        let s = self;
        let [b, a1, c1, w1, a2, c2, w2] = p.to_array();
        DVector::from_vec(vec![
            b / s.pl_scale,
            a1 / s.pl_scale,
            (c1 - s.mid) / s.half_span,
            w1 / s.half_span,
            a2 / s.pl_scale,
            (c2 - s.mid) / s.half_span,
            w2 / s.half_span,
        ])
    }

    fn restore(&self, u: &DVector<f64>) -> LorentzianParams {
        let s = self;
        LorentzianParams::from_array(&[
            u[0] * s.pl_scale,
            u[1] * s.pl_scale,
            s.mid + u[2] * s.half_span,
            u[3] * s.half_span,
            u[4] * s.pl_scale,
            s.mid + u[5] * s.half_span,
            u[6] * s.half_span,
        ])
    }
}

struct DoubleLorentzianProblem {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl LeastSquaresProblem for DoubleLorentzianProblem {
    fn residuals(&self, p: &DVector<f64>) -> DVector<f64> {
        let params = LorentzianParams::from_array(&[p[0], p[1], p[2], p[3], p[4], p[5], p[6]]);
        DVector::from_iterator(
            self.x.len(),
            self.x
                .iter()
                .zip(&self.y)
                .map(|(&x, &y)| double_lorentzian(x, &params) - y),
        )
    }

    fn jacobian(&self, p: &DVector<f64>) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(self.x.len(), PARAM_COUNT);
        for (i, &x) in self.x.iter().enumerate() {
            jac[(i, 0)] = 1.0;
            for k in 0..2 {
                let (a, c, w) = (p[1 + 3 * k], p[2 + 3 * k], p[3 + 3 * k]);
                let d = x - c;
                let q = d * d + w * w;
                jac[(i, 1 + 3 * k)] = -w * w / q;
                jac[(i, 2 + 3 * k)] = -a * 2.0 * w * w * d / (q * q);
                jac[(i, 3 + 3 * k)] = -a * 2.0 * w * d * d / (q * q);
            }
        }
        jac
    }

    fn admissible(&self, p: &DVector<f64>) -> bool {
        p.iter().all(|v| v.is_finite()) && p[3] > 0.0 && p[6] > 0.0
    }
}

/// Fits with the default solver.
pub fn fit_spectrum(
    spectrum: &OdmrSpectrum,
    init: Option<&LorentzianParams>,
) -> Result<LorentzianFit> {
    let solver = solver_registry().default_entry();
    fit_spectrum_with(solver.as_ref(), spectrum, init, &StopRule::default())
}

pub fn fit_spectrum_with(
    solver: &dyn LeastSquaresSolver,
    spectrum: &OdmrSpectrum,
    init: Option<&LorentzianParams>,
    rule: &StopRule,
) -> Result<LorentzianFit> {
    spectrum.validate()?;
    if spectrum.len() < PARAM_COUNT {
        return Err(Error::invalid(
            "spectrum",
            format!(
                "{} points cannot constrain {PARAM_COUNT} parameters",
                spectrum.len()
            ),
        ));
    }
    let (start, flat) = match init {
        Some(p) => {
            if !(p.dips[0].hwhm > 0.0 && p.dips[1].hwhm > 0.0) {
                return Err(Error::invalid("hwhm", "initial half widths must be > 0"));
            }
            (*p, false)
        }
        None => auto_initialize(&spectrum.frequencies, &spectrum.pl),
    };
    if flat {
        return Ok(finish(start, spectrum, true, 0, true));
    }

    let norm = Normalisation::new(spectrum);
    let problem = DoubleLorentzianProblem {
        x: spectrum
            .frequencies
            .iter()
            .map(|f| (f - norm.mid) / norm.half_span)
            .collect(),
        y: spectrum.pl.iter().map(|p| p / norm.pl_scale).collect(),
    };
    let report = solver.solve(&problem, norm.normalise(&start), rule);
    Ok(finish(
        norm.restore(&report.params),
        spectrum,
        report.converged,
        report.iterations,
        false,
    ))
}

fn finish(
    mut params: LorentzianParams,
    spectrum: &OdmrSpectrum,
    converged: bool,
    iterations: usize,
    flat: bool,
) -> LorentzianFit {
    if params.dips[1].center < params.dips[0].center {
        params.dips.swap(0, 1);
    }
    let rss = spectrum
        .frequencies
        .iter()
        .zip(&spectrum.pl)
        .map(|(&f, &y)| (double_lorentzian(f, &params) - y).powi(2))
        .sum();
    LorentzianFit {
        params,
        rss,
        contrasts: params.dips.map(|d| d.amplitude / params.baseline),
        converged,
        iterations,
        flat,
    }
}
