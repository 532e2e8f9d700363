use super::SPEED_OF_LIGHT;
use crate::error::{check_positive, Error, Result};

/// Ramanujan's second approximation to the perimeter of an ellipse with
/// semi-axes `a`, `b` (symmetric in its arguments; `b = 0` is allowed).
pub fn ellipse_perimeter(a: f64, b: f64) -> Result<f64> {
    check_positive("a", a)?;
    if !(b.is_finite() && b >= 0.0) {
        return Err(Error::invalid(
            "b",
            format!("{b:e} must be finite and >= 0"),
        ));
    }
    let h = ((a - b) / (a + b)).powi(2);
    Ok(std::f64::consts::PI * (a + b) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt())))
}

/// Semi-axis `b ≤ a` whose perimeter equals `alpha` vacuum wavelengths at
/// frequency `f`, found by bisection.
pub fn size_ellipsoid(a: f64, alpha: f64, f: f64) -> Result<f64> {
    check_positive("a", a)?;
    check_positive("alpha", alpha)?;
    check_positive("frequency", f)?;
    let target = alpha * SPEED_OF_LIGHT / f;
    let min = ellipse_perimeter(a, 0.0)?;
    let max = ellipse_perimeter(a, a)?;
    if !(min..=max).contains(&target) {
        return Err(Error::NoSolution { target, min, max });
    }
    let (mut lo, mut hi) = (0.0, a);
    // perimeter increases with b on [0, a]
    for _ in 0..200 {
        if hi - lo <= 1e-15 * a {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if ellipse_perimeter(a, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_limit() {
        let c = ellipse_perimeter(0.0135, 0.0135).unwrap();
        assert!((c - 2.0 * PI * 0.0135).abs() < 1e-15);
        let b =
            size_ellipsoid(0.0135, 2.0 * PI * 0.0135 * 2.87e9 / SPEED_OF_LIGHT, 2.87e9).unwrap();
        assert!((b - 0.0135).abs() < 1e-12);
    }

    #[test]
    fn grape_sizing() {
        let b = size_ellipsoid(13.5e-3, 0.645, 2.87e9).unwrap();
        let target = 0.645 * SPEED_OF_LIGHT / 2.87e9;
        assert!((ellipse_perimeter(13.5e-3, b).unwrap() - target).abs() < 1e-12);
        assert!((b - 7.518e-3).abs() < 1e-6, "{b}");
    }

    #[test]
    fn degenerate_ellipse() {
        let c = ellipse_perimeter(1.0, 0.0).unwrap();
        assert!((c - 4.0).abs() / 4.0 < 5e-4);
    }

    #[test]
    fn unreachable_target() {
        assert!(matches!(
            size_ellipsoid(1e-3, 0.645, 2.87e9),
            Err(Error::NoSolution { .. })
        ));
        assert!(ellipse_perimeter(1.0, -0.1).is_err());
    }
}
