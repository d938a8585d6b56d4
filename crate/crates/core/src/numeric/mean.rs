use crate::error::{Error, Result};

/// Power mean `((1/n) Σ x_i^p)^(1/p)` with its limits at `p ∈ {0, ±∞}`.
///
/// Zeros are accepted only for `p > 0` (including `+∞`); `p ≤ 0` needs
/// strictly positive values.
pub fn generalized_mean(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::domain("generalized mean of an empty list"));
    }
    if p.is_nan() {
        return Err(Error::usage("power is NaN"));
    }
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() || v < 0.0 || (v == 0.0 && p <= 0.0) {
            return Err(Error::domain(format!(
                "value {i} = {v} is outside the domain of the power-{p} mean"
            )));
        }
    }

    let n = values.len() as f64;
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    if p == f64::INFINITY {
        return Ok(max);
    }
    if p == f64::NEG_INFINITY {
        return Ok(min);
    }
    if min == max {
        return Ok(max);
    }
    if p == 0.0 {
        let log_mean = values.iter().map(|v| v.ln()).sum::<f64>() / n;
        return Ok(log_mean.exp());
    }

    // Factor out the dominant magnitude so large |p| neither overflows nor underflows.
    let pivot = if p > 0.0 { max } else { min };
    let mean = values.iter().map(|v| (v / pivot).powf(p)).sum::<f64>() / n;
    Ok(pivot * mean.powf(1.0 / p))
}
