use std::sync::{Arc, OnceLock};

use super::coefficients::characteristic_fn;
use super::MieConfig;
use crate::error::{check_positive, Error, Result};
use crate::registry::{Named, Registry};

/// Minimum number of grid points used to bracket minima of `|D_n|`.
pub const MIN_SCAN_POINTS: usize = 4000;
/// Bracket width at which refinement stops.
pub const REFINE_TOLERANCE: f64 = 1e-8;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceResult {
    pub order: usize,
    /// 1-based position among the minima in ascending `ρ`.
    pub mode_index: usize,
    pub rho_res: f64,
    /// Sphere radius resonant at the configured frequency, m.
    pub radius: f64,
    /// Design constant: resonant perimeter over wavelength, equal to `rho_res`.
    pub alpha: f64,
    /// `|D_n(rho_res)|`.
    pub residual: f64,
}

/// Locates a minimum of a unimodal function inside `[lo, hi]`.
pub trait MinimumRefiner: Named + Send + Sync {
    fn minimize(
        &self,
        f: &mut dyn FnMut(f64) -> Result<f64>,
        lo: f64,
        hi: f64,
        tol: f64,
    ) -> Result<(f64, f64)>;
}

pub struct GoldenSection;

impl Named for GoldenSection {
    fn name(&self) -> &'static str {
        "golden-section"
    }
}

impl MinimumRefiner for GoldenSection {
    fn minimize(
        &self,
        f: &mut dyn FnMut(f64) -> Result<f64>,
        mut lo: f64,
        mut hi: f64,
        tol: f64,
    ) -> Result<(f64, f64)> {
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let mut f1 = f(x1)?;
        let mut f2 = f(x2)?;
        while hi - lo > tol {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - INV_PHI * (hi - lo);
                f1 = f(x1)?;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + INV_PHI * (hi - lo);
                f2 = f(x2)?;
            }
        }
        Ok(if f1 < f2 { (x1, f1) } else { (x2, f2) })
    }
}

/// Brent's method: parabolic steps with golden-section fallback.
pub struct Brent;

impl Named for Brent {
    fn name(&self) -> &'static str {
        "brent"
    }
}

impl MinimumRefiner for Brent {
    fn minimize(
        &self,
        f: &mut dyn FnMut(f64) -> Result<f64>,
        mut a: f64,
        mut b: f64,
        tol: f64,
    ) -> Result<(f64, f64)> {
        let golden = 1.0 - INV_PHI;
        let mut x = a + golden * (b - a);
        let (mut w, mut v) = (x, x);
        let mut fx = f(x)?;
        let (mut fw, mut fv) = (fx, fx);
        let (mut d, mut e) = (0.0f64, 0.0f64);
        for _ in 0..500 {
            let mid = 0.5 * (a + b);
            let tol1 = 0.25 * tol + 1e-15 * x.abs();
            let tol2 = 2.0 * tol1;
            if b - a <= tol {
                break;
            }
            let mut golden_step = true;
            if e.abs() > tol1 {
                let r = (x - w) * (fx - fv);
                let mut q = (x - v) * (fx - fw);
                let mut p = (x - v) * q - (x - w) * r;
                q = 2.0 * (q - r);
                if q > 0.0 {
                    p = -p;
                }
                q = q.abs();
                if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                    e = d;
                    d = p / q;
                    let u = x + d;
                    if u - a < tol2 || b - u < tol2 {
                        d = tol1.copysign(mid - x);
                    }
                    golden_step = false;
                }
            }
            if golden_step {
                e = if x >= mid { a - x } else { b - x };
                d = golden * e;
            }
            let u = if d.abs() >= tol1 {
                x + d
            } else {
                x + tol1.copysign(d)
            };
            let fu = f(u)?;
            if fu <= fx {
                if u >= x {
                    a = x;
                } else {
                    b = x;
                }
                v = w;
                fv = fw;
                w = x;
                fw = fx;
                x = u;
                fx = fu;
            } else {
                if u < x {
                    a = u;
                } else {
                    b = u;
                }
                if fu <= fw || w == x {
                    v = w;
                    fv = fw;
                    w = u;
                    fw = fu;
                } else if fu <= fv || v == x || v == w {
                    v = u;
                    fv = fu;
                }
            }
        }
        Ok((x, fx))
    }
}

pub fn refiner_registry() -> &'static Registry<dyn MinimumRefiner> {
    static REGISTRY: OnceLock<Registry<dyn MinimumRefiner>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut r: Registry<dyn MinimumRefiner> =
            Registry::new("minimum refiner", "golden-section");
        r.register(Arc::new(GoldenSection))
            .register(Arc::new(Brent));
        r
    })
}

/// First `mode_count` local minima of `|D_n(ρ)|` in `[rho_min, rho_max]`,
/// ascending in `ρ`, using the default refiner.
pub fn find_resonances(
    n: usize,
    cfg: &MieConfig,
    rho_min: f64,
    rho_max: f64,
    mode_count: usize,
) -> Result<Vec<ResonanceResult>> {
    let refiner = refiner_registry().default_entry();
    find_resonances_with(refiner.as_ref(), n, cfg, rho_min, rho_max, mode_count)
}

pub fn find_resonances_with(
    refiner: &dyn MinimumRefiner,
    n: usize,
    cfg: &MieConfig,
    rho_min: f64,
    rho_max: f64,
    mode_count: usize,
) -> Result<Vec<ResonanceResult>> {
    check_positive("rho_min", rho_min)?;
    if !(rho_max > rho_min && rho_max.is_finite()) {
        return Err(Error::invalid("rho_max", "must exceed rho_min"));
    }
    if mode_count == 0 {
        return Err(Error::invalid(
            "mode_count",
            "at least one mode must be requested",
        ));
    }
    check_positive("frequency", cfg.frequency)?;
    check_positive("n2", cfg.n2)?;

    let modulus = |rho: f64| characteristic_fn(n, rho, cfg).map(|d| d.norm());
    let last = (MIN_SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..MIN_SCAN_POINTS)
        .map(|i| rho_min + (rho_max - rho_min) * i as f64 / last)
        .collect();
    let values = grid
        .iter()
        .map(|&r| modulus(r))
        .collect::<Result<Vec<f64>>>()?;

    let mut found = Vec::new();
    for i in 1..grid.len() - 1 {
        if found.len() == mode_count {
            break;
        }
        if values[i] < values[i - 1] && values[i] <= values[i + 1] {
            let mut f = |r: f64| modulus(r);
            let (rho, residual) =
                refiner.minimize(&mut f, grid[i - 1], grid[i + 1], REFINE_TOLERANCE)?;
            found.push((rho, residual));
        }
    }
    if found.len() < mode_count {
        return Err(Error::InsufficientMinima {
            order: n,
            requested: mode_count,
            found: found.iter().map(|m| m.0).collect(),
        });
    }
    let per_rho = cfg.wavelength() / (2.0 * std::f64::consts::PI * cfg.n2);
    Ok(found
        .into_iter()
        .enumerate()
        .map(|(k, (rho, residual))| ResonanceResult {
            order: n,
            mode_index: k + 1,
            rho_res: rho,
            radius: rho * per_rho,
            alpha: rho,
            residual,
        })
        .collect())
}
