//! Smooth maximum: the softmax-weighted mean that relaxes `max` with a
//! sharpness knob, plus its derivative coefficients.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Sharpness of the smooth maximum. `Finite(0.0)` is the arithmetic mean,
/// larger values approach the true maximum, `Exact` is the maximum itself
/// (with a first-argmax subgradient).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta {
    Finite(f64),
    Exact,
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Finite(b) => write!(f, "{b}"),
            Beta::Exact => write!(f, "exact"),
        }
    }
}

impl FromStr for Beta {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("exact") {
            return Ok(Beta::Exact);
        }
        let b: f64 = s
            .parse()
            .map_err(|_| format!("expected a number or `exact`, got `{s}`"))?;
        if !b.is_finite() {
            return Err(format!("sharpness must be finite, got `{s}`"));
        }
        Ok(Beta::Finite(b))
    }
}

/// Softmax-weighted mean of `values` with sharpness `beta`: always a convex
/// combination, so it never exceeds the true maximum, and it is nondecreasing
/// in `beta`.
pub fn smooth_max(values: &[f64], beta: Beta) -> Result<f64> {
    smooth_max_weights(values, beta).map(|(s, _)| s)
}

/// Smooth max plus the softmax weights that produced it. For `Exact` the
/// weights are one-hot at the first maximum, matching a strict fold.
pub(crate) fn smooth_max_weights(values: &[f64], beta: Beta) -> Result<(f64, Vec<f64>)> {
    if values.is_empty() {
        return Err(Error::EmptyValues);
    }
    match beta {
        Beta::Exact => {
            let mut best = 0usize;
            for (i, &v) in values.iter().enumerate().skip(1) {
                if v > values[best] {
                    best = i;
                }
            }
            let mut w = vec![0.0; values.len()];
            w[best] = 1.0;
            Ok((values[best], w))
        }
        Beta::Finite(b) => {
            if !b.is_finite() {
                return Err(Error::NonFinite {
                    context: "smooth max sharpness".to_string(),
                });
            }
            // Shift by the max so every exponent is <= 0.
            let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut norm = 0.0;
            let mut acc = 0.0;
            let mut w = Vec::with_capacity(values.len());
            for &v in values {
                let e = (b * (v - m)).exp();
                norm += e;
                acc += (v - m) * e;
                w.push(e);
            }
            for e in &mut w {
                *e /= norm;
            }
            Ok((acc / norm + m, w))
        }
    }
}

/// Coefficients `d smooth_max / d values[j]` given the forward results.
/// They sum to one but individual entries can be negative.
pub(crate) fn smax_arg_coeffs(s: f64, values: &[f64], weights: &[f64], beta: Beta) -> Vec<f64> {
    match beta {
        Beta::Exact => weights.to_vec(),
        Beta::Finite(b) => values
            .iter()
            .zip(weights)
            .map(|(&v, &w)| w * (1.0 + b * (v - s)))
            .collect(),
    }
}
