//! Mie solution for a homogeneous sphere under plane-wave illumination,
//! magnetic-mode resonance search and perimeter-based ellipsoid sizing.
//!
//! Sign and normalisation conventions follow Bohren and Huffman: the incident
//! field is `E = x̂ e^{i k2 z}`, time dependence `e^{-iωt}`, outgoing waves use
//! `h_n^(1)`. The amplitudes are labelled so that `a_int`, `a_ext` share the
//! magnetic-mode denominator `D_n`.

mod coefficients;
mod ellipse;
mod fields;
mod resonance;

use num_complex::Complex64;

use crate::error::{check_positive, Error, Result};

pub use coefficients::{characteristic_fn, mie_coefficients, MieCoefficients, MieSolution};
pub use ellipse::{ellipse_perimeter, size_ellipsoid};
pub use fields::{
    circle_profile, count_cyclic_peaks, field_at_point, field_map, incident_field,
    write_field_map_csv, FieldMap, FieldSample, Plane,
};
pub use resonance::{
    find_resonances, find_resonances_with, refiner_registry, Brent, GoldenSection, MinimumRefiner,
    ResonanceResult, MIN_SCAN_POINTS, REFINE_TOLERANCE,
};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permeability, H/m.
pub const MU_0: f64 = 1.256_637_062_12e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct MieConfig {
    /// Complex refractive index of the sphere.
    pub n1: Complex64,
    /// Refractive index of the surrounding medium.
    pub n2: f64,
    /// Relative permeability of the sphere.
    pub mu1: f64,
    /// Relative permeability of the medium.
    pub mu2: f64,
    /// Sphere radius, m.
    pub radius: f64,
    /// Wave frequency, Hz.
    pub frequency: f64,
    /// Series truncation order; `None` selects [`MieConfig::default_truncation`].
    pub n_max: Option<usize>,
}

impl MieConfig {
    /// Non-magnetic sphere of real index `n1` in a medium of index `n2`.
    pub fn new(n1: f64, n2: f64, radius: f64, frequency: f64) -> Self {
        Self {
            n1: Complex64::new(n1, 0.0),
            n2,
            mu1: 1.0,
            mu2: 1.0,
            radius,
            frequency,
            n_max: None,
        }
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = Some(n_max);
        self
    }

    /// Radius giving size parameter `rho` at the configured frequency.
    pub fn with_size_parameter(mut self, rho: f64) -> Self {
        self.radius = rho / self.k2();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n1.re.is_finite() && self.n1.im.is_finite() && self.n1.re > 0.0) {
            return Err(Error::invalid(
                "n1",
                format!("{} must have Re > 0", self.n1),
            ));
        }
        check_positive("n2", self.n2)?;
        check_positive("mu1", self.mu1)?;
        check_positive("mu2", self.mu2)?;
        check_positive("radius", self.radius)?;
        check_positive("frequency", self.frequency)?;
        if self.n_max == Some(0) {
            return Err(Error::invalid("n_max", "must be at least 1"));
        }
        Ok(())
    }

    /// Vacuum wavelength `c / f`.
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency
    }

    pub fn angular_frequency(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.frequency
    }

    /// Wavenumber in the medium.
    pub fn k2(&self) -> f64 {
        self.angular_frequency() * self.n2 / SPEED_OF_LIGHT
    }

    /// Wavenumber inside the sphere.
    pub fn k1(&self) -> Complex64 {
        self.n1 * (self.angular_frequency() / SPEED_OF_LIGHT)
    }

    /// `ρ = k2 R`.
    pub fn size_parameter(&self) -> f64 {
        self.k2() * self.radius
    }

    /// `N = n1 / n2`.
    pub fn relative_index(&self) -> Complex64 {
        self.n1 / self.n2
    }

    /// `⌈ρ + 4ρ^{1/3} + 2⌉`, at least 10.
    pub fn default_truncation(&self) -> usize {
        let rho = self.size_parameter();
        ((rho + 4.0 * rho.cbrt() + 2.0).ceil() as usize).max(10)
    }

    pub fn truncation(&self) -> usize {
        self.n_max.unwrap_or_else(|| self.default_truncation())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let cfg = MieConfig::new(8.9, 1.0, 10.7e-3, 2.87e9);
        assert!((cfg.wavelength() - 0.104457).abs() < 1e-6);
        assert!((cfg.size_parameter() - 0.6436).abs() < 1e-3);
        assert_eq!(cfg.relative_index(), Complex64::new(8.9, 0.0));
        assert_eq!(cfg.truncation(), 10);
        let big = MieConfig::new(1.5, 1.0, 1.0, 2.87e9);
        let rho = big.size_parameter();
        assert_eq!(
            big.truncation(),
            (rho + 4.0 * rho.cbrt() + 2.0).ceil() as usize
        );
    }

    #[test]
    fn size_parameter_round_trip() {
        let cfg = MieConfig::new(8.9, 1.3, 1.0, 2.87e9).with_size_parameter(0.645);
        assert!((cfg.size_parameter() - 0.645).abs() < 1e-14);
    }

    #[test]
    fn validation() {
        assert!(MieConfig::new(8.9, 1.0, 0.01, 2.87e9).validate().is_ok());
        assert!(MieConfig::new(-1.0, 1.0, 0.01, 2.87e9).validate().is_err());
        assert!(MieConfig::new(8.9, 0.0, 0.01, 2.87e9).validate().is_err());
        assert!(MieConfig::new(8.9, 1.0, 0.0, 2.87e9).validate().is_err());
        assert!(MieConfig::new(8.9, 1.0, 0.01, 2.87e9)
            .with_n_max(0)
            .validate()
            .is_err());
    }
}
