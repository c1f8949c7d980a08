use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;

/// `z_{1 - alpha/2}`.
pub fn two_sided_critical(alpha: f64) -> f64 {
    Normal::new(0.0, 1.0)
        .expect("standard normal")
        .inverse_cdf(1.0 - alpha / 2.0)
}

/// Two-sided p-value `2 * (1 - Phi(|z|))`.
pub fn two_sided_p(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    // Phi(-|z|) = erfc(|z| / sqrt 2) / 2
    erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_value_at_five_percent() {
        assert!((two_sided_critical(0.05) - 1.959_963_984_540_054).abs() < 1e-9);
        assert!((two_sided_critical(0.01) - 2.575_829_303_549).abs() < 1e-9);
    }

    #[test]
    fn p_values() {
        assert_eq!(two_sided_p(0.0), 1.0);
        assert!((two_sided_p(1.959_963_984_540_054) - 0.05).abs() < 1e-10);
        assert!((two_sided_p(-1.959_963_984_540_054) - 0.05).abs() < 1e-10);
        assert!(two_sided_p(40.0) < 1e-300);
    }
}
