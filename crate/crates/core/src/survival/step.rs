use serde::Serialize;

use crate::error::{Error, Result};

/// Right-continuous piecewise-constant function on `[0, inf)`.
///
/// `f(t)` is the value at the largest breakpoint `<= t`, or
/// `value_before_first` when `t` precedes every breakpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    value_before_first: f64,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>, value_before_first: f64) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "step function needs one value per breakpoint ({} vs {})",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite() || *b < 0.0) {
            return Err(Error::InvalidInput(
                "breakpoints must be finite and non-negative".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            breakpoints,
            values,
            value_before_first,
        })
    }

    /// Constant function.
    pub fn constant(value: f64) -> Self {
        Self {
            breakpoints: Vec::new(),
            values: Vec::new(),
            value_before_first: value,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_before_first(&self) -> f64 {
        self.value_before_first
    }

    pub fn eval(&self, t: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        if idx == 0 {
            self.value_before_first
        } else {
            self.values[idx - 1]
        }
    }

    /// Left limit `f(t-)`.
    pub fn eval_left(&self, t: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b < t);
        if idx == 0 {
            self.value_before_first
        } else {
            self.values[idx - 1]
        }
    }

    /// Exact integral over `[a, b]`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut total = 0.0;
        let mut left = a;
        let mut current = self.eval(a);
        let start = self.breakpoints.partition_point(|&x| x <= a);
        for (&bp, &v) in self.breakpoints[start..].iter().zip(&self.values[start..]) {
            if bp >= b {
                break;
            }
            total += current * (bp - left);
            left = bp;
            current = v;
        }
        total + current * (b - left)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stairs() -> StepFunction {
        StepFunction::new(vec![1.0, 2.0, 3.0], vec![2.0 / 3.0, 1.0 / 3.0, 0.0], 1.0).unwrap()
    }

    #[test]
    fn right_continuous_lookup() {
        let f = stairs();
        assert_eq!(f.eval(0.0), 1.0);
        assert_eq!(f.eval(0.999), 1.0);
        assert_eq!(f.eval(1.0), 2.0 / 3.0);
        assert_eq!(f.eval_left(1.0), 1.0);
        assert_eq!(f.eval(10.0), 0.0);
    }

    #[test]
    fn integral_of_stairs() {
        let f = stairs();
        assert!((f.integral(0.0, 3.0) - 2.0).abs() < 1e-15);
        assert!((f.integral(0.5, 1.5) - (0.5 + 0.5 * 2.0 / 3.0)).abs() < 1e-15);
        assert_eq!(f.integral(2.0, 2.0), 0.0);
        assert_eq!(StepFunction::constant(1.0).integral(0.0, 10.0), 10.0);
    }

    #[test]
    fn rejects_unsorted_breakpoints() {
        assert!(StepFunction::new(vec![2.0, 1.0], vec![0.5, 0.2], 1.0).is_err());
        assert!(StepFunction::new(vec![1.0, 1.0], vec![0.5, 0.2], 1.0).is_err());
        assert!(StepFunction::new(vec![1.0], vec![], 1.0).is_err());
    }
}
