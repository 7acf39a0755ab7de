//! Differentiable sampling of near-one-hot device choices from a probability
//! row via Gumbel noise and a temperature.

use rand::Rng;

use crate::error::{Error, Result};

/// Floor applied to log-probabilities so zero-probability entries stay
/// representable instead of producing negative infinity.
pub const LOG_PROB_FLOOR: f64 = -30.0;

/// One standard Gumbel draw.
pub(crate) fn gumbel(rng: &mut impl Rng) -> f64 {
    // gen() is in [0, 1); bound it away from zero so both logs are finite.
    let u: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    -(-u.ln()).ln()
}

/// Samples a point on the simplex that concentrates on one coordinate as
/// `tau` shrinks: `softmax((log probs + gumbel) / tau)`. The argmax of the
/// sample is distributed exactly like `probs` at every temperature.
pub fn gumbel_softmax_sample(probs: &[f64], tau: f64, rng: &mut impl Rng) -> Result<Vec<f64>> {
    if probs.is_empty() {
        return Err(Error::EmptyValues);
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::Semantic {
            message: format!("temperature must be positive and finite, got {tau}"),
        });
    }
    let mut sum = 0.0;
    for &p in probs {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(Error::NonFinite {
                context: "gumbel softmax probabilities".to_string(),
            });
        }
        sum += p;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Semantic {
            message: format!("probabilities must sum to 1, got {sum}"),
        });
    }

    let scores: Vec<f64> = probs
        .iter()
        .map(|&p| (p.ln().max(LOG_PROB_FLOOR) + gumbel(rng)) / tau)
        .collect();
    Ok(softmax(&scores))
}

/// Numerically stable softmax.
pub(crate) fn softmax(scores: &[f64]) -> Vec<f64> {
    let m = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = scores.iter().map(|&s| (s - m).exp()).collect();
    let norm: f64 = out.iter().sum();
    for o in &mut out {
        *o /= norm;
    }
    out
}
