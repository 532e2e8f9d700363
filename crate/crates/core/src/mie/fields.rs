use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use super::coefficients::MieSolution;
use super::{MieConfig, MU_0};
use crate::error::{check_positive, Error, Result};
use crate::special::{BesselKind, RiccatiSequence};

pub type Vector3 = [Complex64; 3];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Field at one point in the spherical basis (r̂, θ̂, φ̂), per unit incident
/// amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    /// V/m.
    pub e: Vector3,
    /// A/m.
    pub h: Vector3,
}

fn norm(v: &Vector3) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn add(a: Vector3, b: Vector3) -> Vector3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

impl FieldSample {
    pub fn abs_e(&self) -> f64 {
        norm(&self.e)
    }

    pub fn abs_h(&self) -> f64 {
        norm(&self.h)
    }
}

/// `π_n(cos θ)` and `τ_n(cos θ)` for `n = 0..=nmax`; finite at the poles.
fn angular(nmax: usize, theta: f64) -> (Vec<f64>, Vec<f64>) {
    let mu = theta.cos();
    let mut pi = vec![0.0; nmax + 1];
    let mut tau = vec![0.0; nmax + 1];
    if nmax >= 1 {
        pi[1] = 1.0;
        tau[1] = mu;
    }
    for n in 2..=nmax {
        let nf = n as f64;
        pi[n] = (2.0 * nf - 1.0) / (nf - 1.0) * mu * pi[n - 1] - nf / (nf - 1.0) * pi[n - 2];
        tau[n] = nf * mu * pi[n] - (nf + 1.0) * pi[n - 1];
    }
    (pi, tau)
}

fn i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `z_n(x)/x` and `[x z_n(x)]'/x`, with their limits at `x = 0`.
fn radial_terms(
    kind: BesselKind,
    nmax: usize,
    x: Complex64,
) -> Result<(Vec<Complex64>, Vec<Complex64>, Vec<Complex64>)> {
    if x.norm() == 0.0 {
        let mut value = vec![ZERO; nmax + 1];
        let mut over_x = vec![ZERO; nmax + 1];
        let mut deriv_over_x = vec![ZERO; nmax + 1];
        value[0] = Complex64::new(1.0, 0.0);
        if nmax >= 1 {
            over_x[1] = Complex64::new(1.0 / 3.0, 0.0);
            deriv_over_x[1] = Complex64::new(2.0 / 3.0, 0.0);
        }
        return Ok((value, over_x, deriv_over_x));
    }
    let seq = RiccatiSequence::new(kind, nmax, x)?;
    let over_x = seq.values.iter().map(|v| v / x).collect();
    let deriv_over_x = seq.derivatives.iter().map(|v| v / x).collect();
    Ok((seq.values, over_x, deriv_over_x))
}

/// Multipole sum `Σ E_n (p_n M_o1n − i q_n N_e1n)` and its partner
/// `Σ E_n (q_n M_e1n + i p_n N_o1n)` for radial function `kind` at `x`.
fn series(
    kind: BesselKind,
    x: Complex64,
    theta: f64,
    phi: f64,
    amplitudes: impl Iterator<Item = (usize, Complex64, Complex64)> + Clone,
    nmax: usize,
) -> Result<(Vector3, Vector3)> {
    let (z, z_over_x, dz_over_x) = radial_terms(kind, nmax, x)?;
    let (pi, tau) = angular(nmax, theta);
    let (sin_t, (sin_p, cos_p)) = (theta.sin(), phi.sin_cos());
    let i = Complex64::i();
    let mut e = [ZERO; 3];
    let mut h = [ZERO; 3];
    for (n, p, q) in amplitudes {
        let en = i_pow(n) * ((2 * n + 1) as f64 / (n * (n + 1)) as f64);
        let nn = (n * (n + 1)) as f64;
        let radial_n = nn * sin_t * pi[n] * z_over_x[n];
        let m_odd = [ZERO, cos_p * pi[n] * z[n], -sin_p * tau[n] * z[n]];
        let m_even = [ZERO, -sin_p * pi[n] * z[n], -cos_p * tau[n] * z[n]];
        let n_even = [
            cos_p * radial_n,
            cos_p * tau[n] * dz_over_x[n],
            -sin_p * pi[n] * dz_over_x[n],
        ];
        let n_odd = [
            sin_p * radial_n,
            sin_p * tau[n] * dz_over_x[n],
            cos_p * pi[n] * dz_over_x[n],
        ];
        for k in 0..3 {
            e[k] += en * (p * m_odd[k] - i * q * n_even[k]);
            h[k] += en * (q * m_even[k] + i * p * n_odd[k]);
        }
    }
    Ok((e, h))
}

/// Exact incident plane wave `x̂ e^{i k2 z}` and its magnetic field.
pub fn incident_field(cfg: &MieConfig, r: f64, theta: f64, phi: f64) -> FieldSample {
    let k2 = cfg.k2();
    let phase = Complex64::new(0.0, k2 * r * theta.cos()).exp();
    let h0 = phase * (k2 / (cfg.mu2 * MU_0 * cfg.angular_frequency()));
    let (sin_t, cos_t) = theta.sin_cos();
    let (sin_p, cos_p) = phi.sin_cos();
    FieldSample {
        r,
        theta,
        phi,
        e: [phase * sin_t * cos_p, phase * cos_t * cos_p, -phase * sin_p],
        h: [h0 * sin_t * sin_p, h0 * cos_t * sin_p, h0 * cos_p],
    }
}

impl MieSolution {
    /// Internal series, valid for `r ≤ R`.
    pub fn internal_field(&self, r: f64, theta: f64, phi: f64) -> Result<FieldSample> {
        let cfg = &self.config;
        let k1 = cfg.k1();
        let amplitudes = self
            .coefficients
            .iter()
            .map(|c| (c.order, c.a_int, c.b_int));
        let (e, h) = series(BesselKind::J, k1 * r, theta, phi, amplitudes, self.n_max())?;
        let scale = -k1 / (cfg.mu1 * MU_0 * cfg.angular_frequency());
        Ok(FieldSample {
            r,
            theta,
            phi,
            e,
            h: h.map(|c| c * scale),
        })
    }

    /// Scattered series, valid for `r ≥ R`.
    pub fn scattered_field(&self, r: f64, theta: f64, phi: f64) -> Result<FieldSample> {
        let cfg = &self.config;
        let k2 = cfg.k2();
        let amplitudes = self
            .coefficients
            .iter()
            .map(|c| (c.order, c.a_ext, c.b_ext));
        let x = Complex64::new(k2 * r, 0.0);
        let (e, h) = series(BesselKind::H1, x, theta, phi, amplitudes, self.n_max())?;
        let scale = -k2 / (cfg.mu2 * MU_0 * cfg.angular_frequency());
        Ok(FieldSample {
            r,
            theta,
            phi,
            e,
            h: h.map(|c| c * scale),
        })
    }

    /// Incident plus scattered field, valid for `r ≥ R`.
    pub fn external_field(&self, r: f64, theta: f64, phi: f64) -> Result<FieldSample> {
        let s = self.scattered_field(r, theta, phi)?;
        let inc = incident_field(&self.config, r, theta, phi);
        Ok(FieldSample {
            e: add(s.e, inc.e),
            h: add(s.h, inc.h),
            ..s
        })
    }

    /// Total field: internal series for `r < R`, external otherwise.
    pub fn field(&self, r: f64, theta: f64, phi: f64) -> Result<FieldSample> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::invalid("r", format!("{r:e} must be >= 0")));
        }
        if r < self.config.radius {
            self.internal_field(r, theta, phi)
        } else {
            self.external_field(r, theta, phi)
        }
    }

    /// Field at Cartesian coordinates.
    pub fn field_cartesian(&self, x: f64, y: f64, z: f64) -> Result<FieldSample> {
        let (r, theta, phi) = to_spherical(x, y, z);
        self.field(r, theta, phi)
    }
}

fn to_spherical(x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let r = (x * x + y * y + z * z).sqrt();
    let theta = if r == 0.0 {
        0.0
    } else {
        (z / r).clamp(-1.0, 1.0).acos()
    };
    (r, theta, y.atan2(x))
}

pub fn field_at_point(cfg: &MieConfig, r: f64, theta: f64, phi: f64) -> Result<FieldSample> {
    MieSolution::new(cfg)?.field(r, theta, phi)
}

/// Axis-aligned plane through the origin. Map coordinates `(u, v)` are the
/// two in-plane axes in the order of the name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    Xy,
    Xz,
    Yz,
}

impl Plane {
    pub fn point(self, u: f64, v: f64) -> (f64, f64, f64) {
        match self {
            Plane::Xy => (u, v, 0.0),
            Plane::Xz => (u, 0.0, v),
            Plane::Yz => (0.0, u, v),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Plane::Xy => "xy",
            Plane::Xz => "xz",
            Plane::Yz => "yz",
        }
    }
}

impl FromStr for Plane {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xy" => Ok(Plane::Xy),
            "xz" => Ok(Plane::Xz),
            "yz" => Ok(Plane::Yz),
            _ => Err(Error::invalid(
                "plane",
                format!("`{s}` is not one of xy, xz, yz"),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FieldMap {
    pub plane: Plane,
    /// Grid coordinates along each in-plane axis, m.
    pub coords: Vec<f64>,
    /// Row-major, `v` outer and `u` inner.
    pub abs_e: Vec<f64>,
    pub abs_h: Vec<f64>,
}

impl FieldMap {
    pub fn resolution(&self) -> usize {
        self.coords.len()
    }

    /// `|H|` at grid indices `(iu, iv)`.
    pub fn h_at(&self, iu: usize, iv: usize) -> f64 {
        self.abs_h[iv * self.resolution() + iu]
    }

    pub fn e_at(&self, iu: usize, iv: usize) -> f64 {
        self.abs_e[iv * self.resolution() + iu]
    }
}

/// `|E|` and `|H|` on a `resolution × resolution` grid spanning
/// `[-extent, extent]` in both in-plane coordinates.
pub fn field_map(
    cfg: &MieConfig,
    plane: Plane,
    extent: f64,
    resolution: usize,
) -> Result<FieldMap> {
    check_positive("extent", extent)?;
    if resolution < 16 {
        return Err(Error::invalid("resolution", "at least 16 points per axis"));
    }
    let solution = MieSolution::new(cfg)?;
    let coords: Vec<f64> = (0..resolution)
        .map(|i| -extent + 2.0 * extent * i as f64 / (resolution - 1) as f64)
        .collect();
    let cells: Vec<(f64, f64)> = coords
        .iter()
        .flat_map(|&v| coords.iter().map(move |&u| (u, v)))
        .collect();
    let values = cells
        .par_iter()
        .map(|&(u, v)| {
            let (x, y, z) = plane.point(u, v);
            solution
                .field_cartesian(x, y, z)
                .map(|s| (s.abs_e(), s.abs_h()))
                .map_err(|e| Error::AtCell {
                    u,
                    v,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let (abs_e, abs_h) = values.into_iter().unzip();
    Ok(FieldMap {
        plane,
        coords,
        abs_e,
        abs_h,
    })
}

/// Writes `x,y,abs_E,abs_H` rows, where `x`, `y` are the in-plane coordinates.
pub fn write_field_map_csv(map: &FieldMap, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "x,y,abs_E,abs_H")?;
    let n = map.resolution();
    for iv in 0..n {
        for iu in 0..n {
            writeln!(
                out,
                "{:e},{:e},{:e},{:e}",
                map.coords[iu],
                map.coords[iv],
                map.e_at(iu, iv),
                map.h_at(iu, iv)
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

/// `|H|` at `samples` equally spaced angles on a circle of radius `radius`
/// in `plane`, starting on the second in-plane axis.
pub fn circle_profile(
    solution: &MieSolution,
    plane: Plane,
    radius: f64,
    samples: usize,
) -> Result<Vec<f64>> {
    (0..samples)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            let (x, y, z) = plane.point(radius * t.sin(), radius * t.cos());
            solution.field_cartesian(x, y, z).map(|s| s.abs_h())
        })
        .collect()
}

/// Strict local maxima of a periodic sequence.
pub fn count_cyclic_peaks(values: &[f64]) -> usize {
    let n = values.len();
    if n < 3 {
        return 0;
    }
    (0..n)
        .filter(|&i| {
            let prev = values[(i + n - 1) % n];
            let next = values[(i + 1) % n];
            values[i] > prev && values[i] > next
        })
        .count()
}
