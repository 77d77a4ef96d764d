//! Empirical interference-rejection-ratio measurements and the closed-form
//! theory engine that predicts them from estimator error-variance bounds.

use num_complex::Complex64;

use crate::buffer::Modulation;
use crate::dsp::special::{erf, q_func};
use crate::dsp::to_db;
use crate::error::{Error, Result};
use crate::signals::make_constellation;

/// Ratio of interference power to residual interference power for one trial.
/// Returns `f64::INFINITY` when the residual is numerically exact zero
/// (denominator below 1e-30 of the numerator).
pub fn irr_sample(z: &[Complex64], z_hat: &[Complex64]) -> Result<f64> {
    if z.len() != z_hat.len() {
        return Err(Error::DimensionMismatch(format!(
            "irr_sample buffers: {} vs {}",
            z.len(),
            z_hat.len()
        )));
    }
    let num: f64 = z.iter().map(|v| v.norm_sqr()).sum();
    if num == 0.0 {
        return Err(Error::EmptyInput("interference buffer is all zero"));
    }
    let den: f64 = z.iter().zip(z_hat).map(|(a, b)| (a - b).norm_sqr()).sum();
    if den == 0.0 || den < num * 1e-30 {
        return Ok(f64::INFINITY);
    }
    Ok(num / den)
}

/// Accumulator for ratio-of-expectations metrics. Energies add as a
/// commutative monoid, so aggregation order cannot change the result beyond
/// floating-point reassociation.
#[derive(Debug, Clone, Copy, Default)]
pub struct EnergyAccumulator {
    pub num_energy: f64,
    pub den_energy: f64,
    pub trials: usize,
}

impl EnergyAccumulator {
    pub fn add(&mut self, num: f64, den: f64) {
        self.num_energy += num;
        self.den_energy += den;
        self.trials += 1;
    }

    pub fn merge(&mut self, other: &EnergyAccumulator) {
        self.num_energy += other.num_energy;
        self.den_energy += other.den_energy;
        self.trials += other.trials;
    }

    /// Ratio of summed energies with the same infinity sentinel as
    /// [`irr_sample`].
    pub fn ratio(&self) -> f64 {
        if self.den_energy == 0.0 || self.den_energy < self.num_energy * 1e-30 {
            f64::INFINITY
        } else {
            self.num_energy / self.den_energy
        }
    }
}

/// Interference rejection ratio averaged as a ratio of expectations (NOT the
/// expectation of per-trial ratios, which is heavy-tailed).
pub fn irr_bar_empirical(trials: &[(Vec<Complex64>, Vec<Complex64>)]) -> Result<f64> {
    if trials.is_empty() {
        return Err(Error::EmptyInput("irr_bar trials"));
    }
    let mut acc = EnergyAccumulator::default();
    for (z, z_hat) in trials {
        if z.len() != z_hat.len() {
            return Err(Error::DimensionMismatch("irr_bar trial lengths".into()));
        }
        let num: f64 = z.iter().map(|v| v.norm_sqr()).sum();
        let den: f64 = z.iter().zip(z_hat).map(|(a, b)| (a - b).norm_sqr()).sum();
        acc.add(num, den);
    }
    Ok(acc.ratio())
}

/// The collected-data variant: numerator and denominator include the noise,
/// E[sum |z+w|^2] / E[sum |z+w-zhat|^2]. The caller passes z+w in place of z;
/// the arithmetic is identical.
pub fn irr_c_empirical(trials: &[(Vec<Complex64>, Vec<Complex64>)]) -> Result<f64> {
    irr_bar_empirical(trials)
}

/// Effective INR when part of the SOI spectrum overlaps the interference
/// band: INR / (1 + alpha sigma_s^2 / sigma_n^2), with sigma_s^2 expressed
/// through the SIR. `sir` absent means the SOI is negligible.
pub fn inr_effective(inr: f64, sir: Option<f64>, alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidConfig(format!("alpha must be in [0,1], got {alpha}")));
    }
    match sir {
        None => Ok(inr),
        // sigma_s^2 = sir * sigma_z^2 = sir * inr * sigma_n^2
        Some(sir) => Ok(inr / (1.0 + alpha * sir * inr)),
    }
}

/// Inputs of the multiplicative demodulation-quality factor gamma.
///
/// `sigma_eps2` is the timing-error variance in symbol-period units for the
/// single-carrier factor, and in subcarrier-sample units (samples / P) for
/// the OFDM factor.
#[derive(Debug, Clone, Copy)]
pub struct GammaInputs {
    pub pc: f64,
    pub ps: f64,
    pub d1: f64,
    pub d2: f64,
    pub sigma_eps2: f64,
    pub ep_prime: f64,
}

impl GammaInputs {
    /// Error-free inputs (gamma = 1).
    pub fn perfect() -> Self {
        Self { pc: 1.0, ps: 0.0, d1: 0.0, d2: 0.0, sigma_eps2: 0.0, ep_prime: 0.0 }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.pc) || !(0.0..=1.0).contains(&self.ps) {
            return Err(Error::InvalidConfig("Pc and Ps must be in [0,1]".into()));
        }
        if self.d1 < 0.0 || self.d2 < 0.0 || self.sigma_eps2 < 0.0 || self.ep_prime < 0.0 {
            return Err(Error::InvalidConfig("gamma inputs must be non-negative".into()));
        }
        Ok(())
    }

    fn symbol_factor(&self) -> f64 {
        1.0 - (self.pc * self.d1 * self.d1 * self.ps + (1.0 - self.pc) * self.d2 * self.d2) / 2.0
    }
}

const GAMMA_FLOOR: f64 = 1e-12;

/// Single-carrier gamma:
/// (1 - (Pc d1^2 Ps + (1-Pc) d2^2)/2) (1 - sigma_eps^2 Ep' / 2), in (0, 1].
pub fn gamma_sc(inputs: &GammaInputs) -> Result<f64> {
    inputs.validate()?;
    let g = inputs.symbol_factor() * (1.0 - inputs.sigma_eps2 * inputs.ep_prime / 2.0);
    Ok(g.clamp(GAMMA_FLOOR, 1.0))
}

/// OFDM gamma: the timing term becomes erf(sqrt(2) pi s) / (2 sqrt(2 pi) s),
/// whose s -> 0 limit is exactly 1.
pub fn gamma_ofdm(inputs: &GammaInputs) -> Result<f64> {
    inputs.validate()?;
    let s = inputs.sigma_eps2.sqrt();
    let timing = if s < 1e-9 {
        1.0
    } else {
        let x = std::f64::consts::SQRT_2 * std::f64::consts::PI * s;
        erf(x) / (2.0 * (2.0 * std::f64::consts::PI).sqrt() * s)
    };
    let g = inputs.symbol_factor() * timing;
    Ok(g.clamp(GAMMA_FLOOR, 1.0))
}

/// Mean squared error of the interference replica over an N-sample window,
/// in both the exact finite-sum form and the erf approximation.
#[derive(Debug, Clone, Copy)]
pub struct XiValue {
    pub exact: f64,
    pub erf_approx: f64,
}

/// Closed-form replica MSE for the single-carrier canceler:
///
/// xi(N) = 2A^2/P + sigma_A^2/P
///         - gamma e^{-sigma_theta^2/2} (2A^2/(PN)) sum_n e^{-n^2 sigma_w^2/2}
///
/// with n running over the centered window; the erf form replaces the sum.
pub fn xi_theoretical_sc(
    amplitude: f64,
    p: usize,
    sigma_a2: f64,
    sigma_theta2: f64,
    sigma_omega2: f64,
    gamma: f64,
    n: usize,
) -> XiValue {
    let a2 = amplitude * amplitude;
    let pf = p as f64;
    let nf = n as f64;
    let base = 2.0 * a2 / pf + sigma_a2 / pf;
    let coupling = gamma * (-sigma_theta2 / 2.0).exp() * 2.0 * a2 / pf;

    let half = (n as i64 - 1) / 2;
    let sum: f64 = (-half..=half)
        .map(|k| {
            let t = k as f64;
            (-t * t * sigma_omega2 / 2.0).exp()
        })
        .sum();
    let exact = base - coupling * sum / nf;

    let sw = sigma_omega2.sqrt();
    let erf_term = if sw * nf < 1e-9 {
        1.0
    } else {
        (2.0 * std::f64::consts::PI).sqrt() / (nf * sw)
            * erf(nf * sw / (2.0 * std::f64::consts::SQRT_2))
    };
    let erf_approx = base - coupling * erf_term;
    XiValue { exact, erf_approx }
}

/// Closed-form IRR-bar for the single-carrier canceler with the estimator
/// variances replaced by their bounds in terms of INR_eff and N.
pub fn irr_bar_theory_sc(inr_eff: f64, n: usize, gamma: f64) -> f64 {
    let q = inr_eff * n as f64;
    let den = 2.0 + 1.0 / (2.0 * q)
        - gamma
            * (-1.0 / (4.0 * q)).exp()
            * (4.0 * q * std::f64::consts::PI / 3.0).sqrt()
            * erf((3.0 / (4.0 * q)).sqrt());
    if den <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / den
    }
}

/// The OFDM counterpart; kappa is the cyclic-prefix ratio L/M.
pub fn irr_bar_theory_ofdm(inr_eff: f64, n: usize, kappa: f64, gamma: f64) -> f64 {
    let q = inr_eff * n as f64;
    let den = 2.0 + 1.0 / (2.0 * q)
        - gamma
            * (-1.0 / (4.0 * q)).exp()
            * ((8.0 * q * kappa * std::f64::consts::PI).sqrt() / (1.0 + kappa))
            * erf((1.0 + kappa) / (8.0 * q * kappa).sqrt());
    if den <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / den
    }
}

/// Prediction of the collected-data ratio: noise appears in both numerator
/// and denominator; reduces to INR + 1 under perfect estimation.
///
/// `sigma_a2_over_a2` is the normalized amplitude-error variance; noise power
/// is taken as 1 (the scenario normalization).
pub fn irr_c_theory(
    inr: f64,
    n: usize,
    sigma_a2_over_a2: f64,
    sigma_theta2: f64,
    sigma_omega2: f64,
    gamma: f64,
) -> f64 {
    let sigma_z2 = inr; // sigma_n^2 = 1
    let nf = n as f64;
    let sw = sigma_omega2.sqrt();
    let erf_term = if sw * nf < 1e-9 {
        2.0
    } else {
        2.0 * (2.0 * std::f64::consts::PI).sqrt() / (nf * sw)
            * erf(nf * sw / (2.0 * std::f64::consts::SQRT_2))
    };
    let den =
        sigma_z2 * (2.0 + sigma_a2_over_a2 - gamma * (-sigma_theta2 / 2.0).exp() * erf_term) + 1.0;
    (sigma_z2 + 1.0) / den
}

/// Theoretical symbol error rate in AWGN for each scheme at symbol SNR
/// `esn0` (linear).
pub fn ser_theoretical(scheme: Modulation, esn0: f64) -> Result<f64> {
    if esn0 < 0.0 {
        return Err(Error::InvalidConfig("esn0 must be >= 0".into()));
    }
    let ps = match scheme {
        Modulation::Bpsk => q_func((2.0 * esn0).sqrt()),
        Modulation::Qpsk => {
            let q = q_func(esn0.sqrt());
            2.0 * q - q * q
        }
        Modulation::Psk8 => {
            // standard tight Q-function approximation for M-PSK
            2.0 * q_func((2.0 * esn0).sqrt() * (std::f64::consts::PI / 8.0).sin())
        }
        Modulation::Qam16 => square_qam_ser(16, esn0),
        Modulation::Qam64 => square_qam_ser(64, esn0),
    };
    Ok(ps.min(1.0))
}

fn square_qam_ser(m: usize, esn0: f64) -> f64 {
    let mf = m as f64;
    let side = mf.sqrt();
    let p_side = 2.0 * (1.0 - 1.0 / side) * q_func((3.0 * esn0 / (mf - 1.0)).sqrt());
    1.0 - (1.0 - p_side) * (1.0 - p_side)
}

/// d1: minimum distance of the true constellation. d2: RMS distance from the
/// true symbols to the nearest point of each alternative constellation,
/// averaged uniformly over the alternatives.
pub fn error_distances(scheme: Modulation, candidates: &[Modulation]) -> Result<(f64, f64)> {
    if !candidates.contains(&scheme) {
        return Err(Error::InvalidConfig(format!("scheme {scheme} not among the candidates")));
    }
    let own = make_constellation(scheme)?;
    let d1 = own.min_distance();
    let mut alt_means = Vec::new();
    for cand in candidates {
        if *cand == scheme {
            continue;
        }
        let alt = make_constellation(*cand)?;
        let mean: f64 = own
            .points
            .iter()
            .map(|s| alt.points.iter().map(|p| (s - p).norm_sqr()).fold(f64::INFINITY, f64::min))
            .sum::<f64>()
            / own.points.len() as f64;
        alt_means.push(mean);
    }
    let d2 = if alt_means.is_empty() {
        0.0
    } else {
        (alt_means.iter().sum::<f64>() / alt_means.len() as f64).sqrt()
    };
    Ok((d1, d2))
}

/// One row of the sweep report. dB fields may be the infinity sentinel,
/// rendered as `inf` in CSV.
#[derive(Debug, Clone)]
pub struct IrrReportRow {
    pub inr_db: f64,
    pub inr_eff_db: f64,
    pub irr_bar_meas_db: f64,
    pub irr_bar_theory_db: f64,
    pub irr_c_meas_db: f64,
    pub irr_c_theory_db: f64,
    pub ser_meas: f64,
    pub pc_used: f64,
    pub gamma: f64,
    pub trials: usize,
    pub seed: u64,
}

pub const IRR_CSV_HEADER: &str = "inr_db,inr_eff_db,irr_bar_meas_db,irr_bar_theory_db,irr_c_meas_db,irr_c_theory_db,ser_meas,pc_used,gamma,trials,seed";

fn fmt_db(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x:.6}")
    }
}

impl IrrReportRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{:.6},{},{},{},{},{},{:.6e},{:.6},{:.9},{},{}",
            self.inr_db,
            fmt_db(self.inr_eff_db),
            fmt_db(self.irr_bar_meas_db),
            fmt_db(self.irr_bar_theory_db),
            fmt_db(self.irr_c_meas_db),
            fmt_db(self.irr_c_theory_db),
            self.ser_meas,
            self.pc_used,
            self.gamma,
            self.trials,
            self.seed
        )
    }
}

/// Write a report table with the canonical header.
pub fn write_irr_csv<W: std::io::Write>(mut w: W, rows: &[IrrReportRow]) -> Result<()> {
    writeln!(w, "{IRR_CSV_HEADER}")?;
    for row in rows {
        writeln!(w, "{}", row.to_csv())?;
    }
    Ok(())
}

/// dB with the infinity sentinel preserved.
pub fn ratio_to_db(r: f64) -> f64 {
    to_db(r)
}
