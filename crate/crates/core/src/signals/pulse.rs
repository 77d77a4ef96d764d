//! Root-raised-cosine pulse shaping.

use crate::error::{Error, Result};

/// A real, symmetric, unit-energy pulse shape sampled at `oversampling`
/// samples per symbol.
#[derive(Debug, Clone)]
pub struct PulseShape {
    pub taps: Vec<f64>,
    pub oversampling: usize,
    pub rolloff: f64,
    pub span: usize,
}

impl PulseShape {
    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// Index of the center (peak) tap.
    pub fn center(&self) -> usize {
        (self.taps.len() - 1) / 2
    }

    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|t| t * t).sum()
    }
}

/// Closed-form root-raised-cosine taps over `span` symbols at `p` samples per
/// symbol (span*p + 1 taps), singular points filled with their analytic
/// limits, renormalized to unit energy.
pub fn rrc_pulse(rolloff: f64, span: usize, p: usize) -> Result<PulseShape> {
    if !(0.0..=1.0).contains(&rolloff) {
        return Err(Error::InvalidConfig(format!("rolloff must be in [0,1], got {rolloff}")));
    }
    if span < 2 {
        return Err(Error::InvalidConfig(format!("span must be >= 2 symbols, got {span}")));
    }
    if p < 1 {
        return Err(Error::InvalidConfig("oversampling must be >= 1".into()));
    }
    let n_taps = span * p + 1;
    let mid = (n_taps - 1) as f64 / 2.0;
    let mut taps: Vec<f64> = (0..n_taps)
        .map(|i| rrc_value((i as f64 - mid) / p as f64, rolloff))
        .collect();
    let norm = taps.iter().map(|t| t * t).sum::<f64>().sqrt();
    for t in &mut taps {
        *t /= norm;
    }
    Ok(PulseShape { taps, oversampling: p, rolloff, span })
}

/// RRC impulse response at time `t` in symbol periods (unnormalized).
fn rrc_value(t: f64, a: f64) -> f64 {
    use std::f64::consts::PI;
    if t.abs() < 1e-9 {
        return 1.0 + a * (4.0 / PI - 1.0);
    }
    if a > 0.0 {
        let singular = 1.0 / (4.0 * a);
        if (t.abs() - singular).abs() < 1e-9 {
            return (a / 2f64.sqrt())
                * ((1.0 + 2.0 / PI) * (PI / (4.0 * a)).sin()
                    + (1.0 - 2.0 / PI) * (PI / (4.0 * a)).cos());
        }
    }
    let num = (PI * t * (1.0 - a)).sin() + 4.0 * a * t * (PI * t * (1.0 + a)).cos();
    let den = PI * t * (1.0 - (4.0 * a * t) * (4.0 * a * t));
    num / den
}
