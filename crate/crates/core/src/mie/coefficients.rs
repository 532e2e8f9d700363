use num_complex::Complex64;

use super::MieConfig;
use crate::error::{check_positive, Error, Result};
use crate::special::{BesselKind, RiccatiSequence};

/// Relative size of a denominator below which a coefficient is treated as a pole.
const POLE_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MieCoefficients {
    pub order: usize,
    /// Internal magnetic-mode amplitude, denominator `D_n`.
    pub a_int: Complex64,
    /// Internal electric-mode amplitude.
    pub b_int: Complex64,
    /// Scattered amplitude sharing the denominator `D_n`.
    pub a_ext: Complex64,
    /// Scattered amplitude sharing the electric-mode denominator.
    pub b_ext: Complex64,
}

/// Bessel data shared by all coefficients of one size parameter.
struct Radial {
    /// `j_n(ρ)`, `[ρ j_n(ρ)]'`.
    outer_j: RiccatiSequence,
    /// `h_n(ρ)`, `[ρ h_n(ρ)]'`.
    outer_h: RiccatiSequence,
    /// `j_n(Nρ)`, `[Nρ j_n(Nρ)]'`.
    inner_j: RiccatiSequence,
}

impl Radial {
    fn new(nmax: usize, rho: f64, index: Complex64) -> Result<Self> {
        let x = Complex64::new(rho, 0.0);
        Ok(Self {
            outer_j: RiccatiSequence::new(BesselKind::J, nmax, x)?,
            outer_h: RiccatiSequence::new(BesselKind::H1, nmax, x)?,
            inner_j: RiccatiSequence::new(BesselKind::J, nmax, index * rho)?,
        })
    }

    fn characteristic(&self, n: usize, mu1: f64, mu2: f64) -> Complex64 {
        mu1 * self.inner_j.values[n] * self.outer_h.derivatives[n]
            - mu2 * self.outer_h.values[n] * self.inner_j.derivatives[n]
    }
}

fn ratio(order: usize, num: Complex64, den: Complex64) -> Result<Complex64> {
    if !(den.norm() >= POLE_RATIO * num.norm()) || den.norm() == 0.0 {
        return Err(Error::ResonancePole {
            order,
            numerator: num.norm(),
            denominator: den.norm(),
        });
    }
    Ok(num / den)
}

fn coefficients_from(
    radial: &Radial,
    n: usize,
    index: Complex64,
    mu1: f64,
    mu2: f64,
) -> Result<MieCoefficients> {
    let (jo, djo) = (radial.outer_j.values[n], radial.outer_j.derivatives[n]);
    let (ho, dho) = (radial.outer_h.values[n], radial.outer_h.derivatives[n]);
    let (ji, dji) = (radial.inner_j.values[n], radial.inner_j.derivatives[n]);
    let m2 = index * index;

    let wronskian = jo * dho - ho * djo;
    let magnetic_den = radial.characteristic(n, mu1, mu2);
    let electric_den = mu2 * m2 * ji * dho - mu1 * ho * dji;

    let a_int = ratio(n, mu1 * wronskian, magnetic_den)?;
    let b_int = ratio(n, mu1 * index * wronskian, electric_den)?;
    let a_ext = -ratio(n, mu1 * ji * djo - mu2 * jo * dji, magnetic_den)?;
    let b_ext = -ratio(n, mu2 * m2 * ji * djo - mu1 * jo * dji, electric_den)?;
    Ok(MieCoefficients {
        order: n,
        a_int,
        b_int,
        a_ext,
        b_ext,
    })
}

/// Coefficients of order `n` at the configured size parameter.
pub fn mie_coefficients(n: usize, cfg: &MieConfig) -> Result<MieCoefficients> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::invalid("order", "multipole order starts at 1"));
    }
    let index = cfg.relative_index();
    let radial = Radial::new(n, cfg.size_parameter(), index)?;
    coefficients_from(&radial, n, index, cfg.mu1, cfg.mu2)
}

/// `D_n(ρ) = μ1 j_n(Nρ)[ρ h_n(ρ)]' − μ2 h_n(ρ)[Nρ j_n(Nρ)]'`.
pub fn characteristic_fn(n: usize, rho: f64, cfg: &MieConfig) -> Result<Complex64> {
    check_positive("rho", rho)?;
    if n == 0 {
        return Err(Error::invalid("order", "multipole order starts at 1"));
    }
    let radial = Radial::new(n, rho, cfg.relative_index())?;
    Ok(radial.characteristic(n, cfg.mu1, cfg.mu2))
}

/// Configuration together with all coefficients up to the truncation order.
#[derive(Debug, Clone)]
pub struct MieSolution {
    pub config: MieConfig,
    /// Entry `k` holds order `k + 1`.
    pub coefficients: Vec<MieCoefficients>,
}

impl MieSolution {
    pub fn new(cfg: &MieConfig) -> Result<Self> {
        cfg.validate()?;
        let nmax = cfg.truncation();
        let index = cfg.relative_index();
        let radial = Radial::new(nmax, cfg.size_parameter(), index)?;
        let coefficients = (1..=nmax)
            .map(|n| coefficients_from(&radial, n, index, cfg.mu1, cfg.mu2))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            config: cfg.clone(),
            coefficients,
        })
    }

    pub fn n_max(&self) -> usize {
        self.coefficients.len()
    }
}
