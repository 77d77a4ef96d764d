//! Error-variance lower bounds used by the theory engine.

use crate::error::{Error, Result};
use crate::signals::PulseShape;

/// Bounds for joint amplitude/frequency/phase estimation of the modulated
/// carrier over an N-sample window at effective INR `inr_eff`.
///
/// The amplitude bound is returned normalized (sigma_A^2 / A^2), which is the
/// form the rejection-ratio formulas consume.
#[derive(Debug, Clone, Copy)]
pub struct CrlbSc {
    pub sigma_a2_over_a2: f64,
    pub sigma_omega2: f64,
    pub sigma_theta2: f64,
}

pub fn crlb_single_carrier(inr_eff: f64, n: usize) -> Result<CrlbSc> {
    if inr_eff <= 0.0 {
        return Err(Error::InvalidConfig("inr_eff must be > 0".into()));
    }
    if n < 2 {
        return Err(Error::InvalidConfig("need N >= 2".into()));
    }
    let nf = n as f64;
    Ok(CrlbSc {
        sigma_a2_over_a2: 1.0 / (2.0 * inr_eff * nf),
        sigma_omega2: 6.0 / (inr_eff * nf * (nf * nf - 1.0)),
        sigma_theta2: 1.0 / (2.0 * inr_eff * nf),
    })
}

/// Timing bound for joint estimation with known symbols, in symbol-period^2
/// units: 1 / (2 INR_eff N Ep'). A lower bound for blind timing estimators.
pub fn crlb_timing(inr_eff: f64, n: usize, ep_prime: f64) -> Result<f64> {
    if ep_prime <= 0.0 {
        return Err(Error::InvalidConfig("ep_prime must be > 0".into()));
    }
    if inr_eff <= 0.0 || n == 0 {
        return Err(Error::InvalidConfig("inr_eff and N must be positive".into()));
    }
    Ok(1.0 / (2.0 * inr_eff * n as f64 * ep_prime))
}

/// Frequency bound for an OFDM window of N samples with CP ratio kappa:
/// (1 + kappa)^3 / (INR_eff kappa N^3).
pub fn crlb_freq_ofdm(inr_eff: f64, n: usize, kappa: f64) -> Result<f64> {
    if kappa <= 0.0 {
        return Err(Error::InvalidConfig("kappa must be > 0".into()));
    }
    if inr_eff <= 0.0 || n == 0 {
        return Err(Error::InvalidConfig("inr_eff and N must be positive".into()));
    }
    let nf = n as f64;
    Ok((1.0 + kappa).powi(3) / (inr_eff * kappa * nf * nf * nf))
}

/// Energy of the differentiated pulse, E_p' = P^2 sum_n |p(n) - p(n-1)|^2,
/// with zero boundaries on both sides. In symbol-period units this is
/// independent of the oversampling factor up to discretization.
pub fn pulse_derivative_energy(pulse: &PulseShape) -> f64 {
    let p2 = (pulse.oversampling * pulse.oversampling) as f64;
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &t in &pulse.taps {
        let d = t - prev;
        acc += d * d;
        prev = t;
    }
    acc += prev * prev; // trailing edge back to zero
    p2 * acc
}
