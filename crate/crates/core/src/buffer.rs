//! Core domain types shared across the pipeline.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Supported linear modulation schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modulation {
    Bpsk,
    Qpsk,
    Psk8,
    Qam16,
    Qam64,
}

impl Modulation {
    /// All schemes the classifier can discriminate.
    pub const ALL: [Modulation; 5] = [
        Modulation::Bpsk,
        Modulation::Qpsk,
        Modulation::Psk8,
        Modulation::Qam16,
        Modulation::Qam64,
    ];

    /// Modulation order (number of constellation points).
    pub fn order(self) -> usize {
        match self {
            Modulation::Bpsk => 2,
            Modulation::Qpsk => 4,
            Modulation::Psk8 => 8,
            Modulation::Qam16 => 16,
            Modulation::Qam64 => 64,
        }
    }

    pub fn is_psk(self) -> bool {
        matches!(self, Modulation::Bpsk | Modulation::Qpsk | Modulation::Psk8)
    }

    /// Order of the rotational symmetry group of the point set.
    pub fn rotational_symmetry(self) -> usize {
        match self {
            Modulation::Bpsk => 2,
            Modulation::Qpsk => 4,
            Modulation::Psk8 => 8,
            Modulation::Qam16 | Modulation::Qam64 => 4,
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Qpsk => "qpsk",
            Modulation::Psk8 => "8psk",
            Modulation::Qam16 => "16qam",
            Modulation::Qam64 => "64qam",
        };
        f.write_str(s)
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Modulation::Bpsk),
            "qpsk" => Ok(Modulation::Qpsk),
            "8psk" | "psk8" => Ok(Modulation::Psk8),
            "16qam" | "qam16" => Ok(Modulation::Qam16),
            "64qam" | "qam64" => Ok(Modulation::Qam64),
            other => Err(Error::UnsupportedScheme(other.to_string())),
        }
    }
}

/// An ordered sequence of complex baseband samples.
///
/// The sample rate is carried as an annotation only; all processing works in
/// normalized (per-sample) units.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalBuffer {
    pub samples: Vec<Complex64>,
    pub sample_rate: f64,
}

impl SignalBuffer {
    pub fn new(samples: Vec<Complex64>, sample_rate: f64) -> Self {
        Self { samples, sample_rate }
    }

    pub fn zeros(n: usize, sample_rate: f64) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); n], sample_rate)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean power (energy per sample).
    pub fn power(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.energy() / self.samples.len() as f64
    }

    /// Total energy sum |x(n)|^2.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn check_finite(&self, what: &'static str) -> Result<()> {
        if self.samples.iter().all(|x| x.re.is_finite() && x.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite(what))
        }
    }
}

/// Ground-truth or estimated waveform parameters of the interferer:
/// amplitude, frequency offset (rad/sample), phase offset (rad) and timing
/// offset (samples, may be fractional).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveformParams {
    pub amplitude: f64,
    pub omega: f64,
    pub theta: f64,
    pub epsilon: f64,
    pub scheme: Modulation,
}

impl WaveformParams {
    pub fn new(amplitude: f64, omega: f64, theta: f64, epsilon: f64, scheme: Modulation) -> Result<Self> {
        if !(amplitude > 0.0) {
            return Err(Error::InvalidConfig(format!("amplitude must be > 0, got {amplitude}")));
        }
        if !(omega.abs() < PI) {
            return Err(Error::InvalidConfig(format!("|omega| must be < pi, got {omega}")));
        }
        if !theta.is_finite() || !epsilon.is_finite() {
            return Err(Error::InvalidConfig("theta/epsilon must be finite".into()));
        }
        Ok(Self { amplitude, omega, theta, epsilon, scheme })
    }

    /// Phase wrapped into (-pi, pi].
    pub fn wrapped_theta(&self) -> f64 {
        wrap_phase(self.theta)
    }
}

/// Wrap an angle into (-pi, pi].
pub fn wrap_phase(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_phase_range() {
        for k in -20..20 {
            let x = 0.3 + k as f64 * 2.0 * PI;
            assert!((wrap_phase(x) - 0.3).abs() < 1e-12);
        }
        assert!((wrap_phase(PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-12);
    }

    #[test]
    fn params_validation() {
        assert!(WaveformParams::new(0.0, 0.0, 0.0, 0.0, Modulation::Qpsk).is_err());
        assert!(WaveformParams::new(1.0, 4.0, 0.0, 0.0, Modulation::Qpsk).is_err());
        assert!(WaveformParams::new(1.0, 0.01, 0.3, 10.5, Modulation::Qpsk).is_ok());
    }

    #[test]
    fn modulation_round_trip() {
        for m in Modulation::ALL {
            assert_eq!(m.to_string().parse::<Modulation>().unwrap(), m);
        }
        assert!("qam128".parse::<Modulation>().is_err());
    }
}
