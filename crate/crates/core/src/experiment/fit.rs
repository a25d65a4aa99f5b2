//! Log-log least squares for power-law exponents.

use crate::error::{Error, Result};

/// `y ≈ exp(intercept) * x^slope`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

impl PowerFit {
    pub fn predict(&self, x: f64) -> f64 {
        (self.intercept + self.slope * x.ln()).exp()
    }
}

/// Ordinary least squares of `ln y` on `ln x`.
///
/// Needs at least two distinct positive abscissae and positive ordinates.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerFit> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "a power-law fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    let mut logs = Vec::with_capacity(points.len());
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "power-law fit needs positive finite data, got ({x}, {y})"
            )));
        }
        logs.push((x.ln(), y.ln()));
    }
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    // centred sums keep exact power laws exact to rounding
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter(
            "power-law fit needs at least two distinct x values".into(),
        ));
    }
    let slope = sxy / sxx;
    Ok(PowerFit {
        slope,
        intercept: my - slope * mx,
        points: points.len(),
    })
}

/// Reference bracket for `lim log_n E[ex(G(n, n^(x-r)), T)]`: the value is
/// `x` below 3/2, `x - 1` above 4, and in between lies in
/// `[max((x + 3r - 6)/(2r - 3), x - 1), (3x + 3)/5]`.
pub fn exponent_bracket(r: usize, x: f64) -> (f64, f64) {
    let r = r as f64;
    if x <= 1.5 {
        (x, x)
    } else if x > 4.0 {
        (x - 1.0, x - 1.0)
    } else {
        let lo = ((x + 3.0 * r - 6.0) / (2.0 * r - 3.0)).max(x - 1.0);
        (lo, (3.0 * x + 3.0) / 5.0)
    }
}
