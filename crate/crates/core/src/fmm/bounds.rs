//! Truncation error bounds for the log-kernel expansions.

use crate::{Error, Result};

/// Error of a `p`-term multipole expansion of sources within radius `r`,
/// evaluated at distance `big_r > r`: `A / (R - r) * (r / R)^(p + 1)`.
pub fn mp_error_bound(sum_abs_u: f64, r: f64, big_r: f64, p: usize) -> Result<f64> {
    if !(r > 0.0 && r < big_r) {
        return Err(Error::InvalidArgument(format!(
            "multipole bound needs 0 < r < R, got r = {r}, R = {big_r}"
        )));
    }
    Ok(sum_abs_u / (big_r - r) * (r / big_r).powi(p as i32 + 1))
}

/// Error of a `p`-term local expansion obtained by M2L across a gap `rho`
/// between two cells of radius `r`: `A / rho * (1 / (1 + rho / r))^(p + 1)`.
pub fn m2l_error_bound(sum_abs_u: f64, rho: f64, r: f64, p: usize) -> Result<f64> {
    if !(rho > 0.0) || !(r > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "M2L bound needs rho > 0 and r > 0, got rho = {rho}, r = {r}"
        )));
    }
    Ok(sum_abs_u / rho * (1.0 / (1.0 + rho / r)).powi(p as i32 + 1))
}
