use serde::Serialize;

use crate::stats::{normal_quantile, StatsError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSize {
    /// Case-solves per group, rounded up, never below 2.
    pub per_group: u32,
    /// Unrounded formula value.
    pub exact: f64,
    pub z_alpha: f64,
    pub z_power: f64,
    /// Set when the inputs match a design whose published size differs
    /// from the formula.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Design value the trial protocol states for alpha 0.05, power 0.8,
/// a 2-point difference and a 4-point SD.
const REPORTED_DESIGN: (f64, f64, f64, f64, u32) = (0.05, 0.8, 2.0, 4.0, 60);

/// Two-sample size for a two-sided test by the normal approximation:
/// `n = 2 (z_{1-alpha/2} + z_power)^2 sd^2 / delta^2`.
pub fn sample_size(alpha: f64, power: f64, delta: f64, sd: f64) -> Result<SampleSize, StatsError> {
    let in_unit = |v: f64| v > 0.0 && v < 1.0;
    if !in_unit(alpha) || !in_unit(power) || !(delta > 0.0) || !(sd > 0.0) {
        return Err(StatsError::Domain(format!(
            "alpha = {alpha}, power = {power}, delta = {delta}, sd = {sd}"
        )));
    }
    let z_alpha = normal_quantile(1.0 - alpha / 2.0);
    let z_power = normal_quantile(power);
    let exact = 2.0 * (z_alpha + z_power).powi(2) * sd * sd / (delta * delta);
    let per_group = (exact.ceil() as u32).max(2);
    let (a, p, d, s, reported) = REPORTED_DESIGN;
    let note = (alpha == a && power == p && delta == d && sd == s && per_group != reported).then(|| {
        format!(
            "the published design for these parameters states {reported} case-solves per group; \
             the normal approximation gives {per_group}"
        )
    });
    Ok(SampleSize {
        per_group,
        exact,
        z_alpha,
        z_power,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_design() {
        let s = sample_size(0.05, 0.8, 2.0, 4.0).unwrap();
        assert_eq!(s.per_group, 63);
        assert!((s.exact - 62.791_037_874_792_71).abs() < 1e-6);
        assert!(s.note.as_deref().unwrap().contains("60"));
    }

    #[test]
    fn doubling_sd_quadruples() {
        let s = sample_size(0.05, 0.8, 2.0, 8.0).unwrap();
        assert!((s.exact - 251.164_151_499_170_83).abs() < 1e-6);
        assert!((251..=252).contains(&s.per_group));
        assert!(s.note.is_none());
    }

    #[test]
    fn floor_of_two() {
        let s = sample_size(0.999, 0.5, 1.0, 1.0).unwrap();
        assert_eq!(s.per_group, 2);
    }

    #[test]
    fn domain() {
        assert!(sample_size(0.0, 0.8, 2.0, 4.0).is_err());
        assert!(sample_size(0.05, 1.0, 2.0, 4.0).is_err());
        assert!(sample_size(0.05, 0.8, 0.0, 4.0).is_err());
        assert!(sample_size(0.05, 0.8, 2.0, -1.0).is_err());
    }
}
