//! Full received-signal scenario synthesis with known ground truth.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::ops::Range;

use crate::buffer::{Modulation, SignalBuffer, WaveformParams};
use crate::error::{Error, Result};
use crate::seeding::mix_seed;
use crate::signals::constellation::make_constellation;
use crate::signals::modulate::{
    apply_waveform_params, awgn, lfm_soi, modulate_ofdm, modulate_single_carrier, OfdmConfig,
};
use crate::signals::pulse::{rrc_pulse, PulseShape};

/// Interference waveform family and its per-window dimensioning.
#[derive(Debug, Clone, Copy)]
pub enum InterferenceKind {
    /// Linearly modulated single carrier: RRC pulse shaping, `k_symbols` per
    /// estimation window.
    SingleCarrier { rolloff: f64, span: usize, k_symbols: usize },
    /// Oversampled OFDM; one OFDM symbol per estimation window.
    Ofdm { m: usize, l: usize },
}

/// Signal-of-interest (LFM chirp) configuration.
#[derive(Debug, Clone, Copy)]
pub struct SoiConfig {
    pub sir_db: f64,
    /// Normalized start frequency; defaults to -0.12 so the sweep crosses the
    /// interference band.
    pub f0: Option<f64>,
    /// Chirp rate; defaults to a 0.24 normalized-bandwidth sweep across the
    /// analysis region.
    pub chirp_rate: Option<f64>,
    /// Fraction of the SOI bandwidth overlapping the interference band (the
    /// alpha of the effective-INR reduction).
    pub alpha: f64,
}

/// Complete experiment description for one synthesized trial.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub kind: InterferenceKind,
    pub scheme: Modulation,
    /// Oversampling factor P (samples per symbol / per subcarrier sample).
    pub oversampling: usize,
    /// Number of consecutive estimation windows in the burst.
    pub blocks: usize,
    pub inr_db: f64,
    pub soi: Option<SoiConfig>,
    /// Truth frequency offset drawn uniformly from +-omega_max; defaults to
    /// 10% of the symbol rate.
    pub omega_max: Option<f64>,
    pub seed: u64,
}

impl ScenarioConfig {
    /// The single-carrier setup of the reference experiments: QPSK, P = 82,
    /// RRC 0.4 spanning 21 symbols, K = 69 symbols per window.
    pub fn iridium_like(inr_db: f64, seed: u64) -> Self {
        Self {
            kind: InterferenceKind::SingleCarrier { rolloff: 0.4, span: 21, k_symbols: 69 },
            scheme: Modulation::Qpsk,
            oversampling: 82,
            blocks: 1,
            inr_db,
            soi: None,
            omega_max: None,
            seed,
        }
    }

    /// Matching OFDM setup: M = 64 subcarriers, cyclic prefix L = 5.
    pub fn ofdm_like(inr_db: f64, seed: u64) -> Self {
        Self {
            kind: InterferenceKind::Ofdm { m: 64, l: 5 },
            scheme: Modulation::Qpsk,
            oversampling: 82,
            blocks: 1,
            inr_db,
            soi: None,
            omega_max: None,
            seed,
        }
    }

    /// Samples per estimation window.
    pub fn window_len(&self) -> usize {
        match self.kind {
            InterferenceKind::SingleCarrier { k_symbols, .. } => k_symbols * self.oversampling,
            InterferenceKind::Ofdm { m, l } => (m + l) * self.oversampling,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks == 0 {
            return Err(Error::InvalidConfig("blocks must be >= 1".into()));
        }
        if self.oversampling == 0 {
            return Err(Error::InvalidConfig("oversampling must be >= 1".into()));
        }
        if !self.inr_db.is_finite() {
            return Err(Error::InvalidConfig("inr_db must be finite".into()));
        }
        match self.kind {
            InterferenceKind::SingleCarrier { k_symbols, span, rolloff } => {
                if k_symbols == 0 {
                    return Err(Error::InvalidConfig("k_symbols must be >= 1".into()));
                }
                if k_symbols < span {
                    return Err(Error::InvalidConfig(format!(
                        "window of {k_symbols} symbols is shorter than the {span}-symbol pulse"
                    )));
                }
                if !(0.0..=1.0).contains(&rolloff) {
                    return Err(Error::InvalidConfig("rolloff must be in [0,1]".into()));
                }
            }
            InterferenceKind::Ofdm { m, l } => {
                if m == 0 || l >= m {
                    return Err(Error::InvalidConfig("OFDM needs m >= 1 and l < m".into()));
                }
            }
        }
        if let Some(soi) = &self.soi {
            if !(0.0..=1.0).contains(&soi.alpha) {
                return Err(Error::InvalidConfig("soi.alpha must be in [0,1]".into()));
            }
        }
        Ok(())
    }
}

/// A composed trial: received signal and all ground-truth components.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub r: SignalBuffer,
    pub z: SignalBuffer,
    pub s: Option<SignalBuffer>,
    pub w: SignalBuffer,
    pub truth: WaveformParams,
    /// Single-carrier: the full transmitted symbol stream (windows plus
    /// margins). OFDM: the grid flattened column-major (block by block).
    pub truth_symbols: Vec<Complex64>,
    /// Nominal estimation windows in buffer sample indices (truth epsilon
    /// shifts the waveform inside them).
    pub windows: Vec<Range<usize>>,
    /// Single-carrier: index into `truth_symbols` of the first symbol whose
    /// peak lies in window 0.
    pub first_window_symbol: usize,
    pub noise_var: f64,
    /// The pulse used for synthesis (single-carrier only).
    pub pulse: Option<PulseShape>,
    pub ofdm: Option<OfdmConfig>,
    pub config: ScenarioConfig,
}

impl Scenario {
    /// Mean interferer power sigma_z^2 = A^2 / P.
    pub fn interference_power(&self) -> f64 {
        self.truth.amplitude * self.truth.amplitude / self.config.oversampling as f64
    }
}

/// Synthesize the scenario: sigma_n^2 = 1, interferer amplitude set so that
/// A^2 / P meets `inr_db`, SOI scaled per `sir_db` when present.
pub fn compose_scenario(cfg: &ScenarioConfig) -> Result<Scenario> {
    cfg.validate()?;
    let p = cfg.oversampling;
    let inr = crate::dsp::from_db(cfg.inr_db);
    let amplitude = (inr * p as f64).sqrt();
    let constellation = make_constellation(cfg.scheme)?;

    let mut truth_rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 0x7255_7468));
    let omega_max = cfg.omega_max.unwrap_or(0.1 * 2.0 * std::f64::consts::PI / p as f64);
    let omega = truth_rng.gen_range(-omega_max..=omega_max);
    let theta = truth_rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let epsilon = truth_rng.gen_range(0.0..p as f64);
    let truth = WaveformParams::new(amplitude, omega, theta, epsilon, cfg.scheme)?;

    let mut sym_rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, 0x7379_6d62));
    let draw = |rng: &mut ChaCha8Rng| constellation.points[rng.gen_range(0..constellation.points.len())];

    let (z_base, truth_symbols, windows, first_window_symbol, pulse, ofdm) = match cfg.kind {
        InterferenceKind::SingleCarrier { rolloff, span, k_symbols } => {
            let pulse = rrc_pulse(rolloff, span, p)?;
            // steady-state margin: half the pulse span plus room for the
            // fractional delay
            let margin = span / 2 + 3;
            let total = cfg.blocks * k_symbols + 2 * margin;
            let symbols: Vec<Complex64> = (0..total).map(|_| draw(&mut sym_rng)).collect();
            let base = modulate_single_carrier(&symbols, &pulse)?;
            let start = margin * p + pulse.center();
            let windows: Vec<Range<usize>> = (0..cfg.blocks)
                .map(|w| start + w * k_symbols * p..start + (w + 1) * k_symbols * p)
                .collect();
            (base, symbols, windows, margin, Some(pulse), None)
        }
        InterferenceKind::Ofdm { m, l } => {
            let ofdm = OfdmConfig::new(m, l, p)?;
            let grid: Vec<Vec<Complex64>> = (0..cfg.blocks)
                .map(|_| (0..m).map(|_| draw(&mut sym_rng)).collect())
                .collect();
            let body = modulate_ofdm(&grid, &ofdm)?;
            // zero guard so the fractional delay has room and the first CP
            // search is unambiguous
            let guard = 2 * p;
            let mut samples = vec![Complex64::new(0.0, 0.0); guard];
            samples.extend_from_slice(&body.samples);
            samples.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(guard));
            let sym_len = ofdm.symbol_len();
            let windows: Vec<Range<usize>> = (0..cfg.blocks)
                .map(|w| guard + w * sym_len..guard + (w + 1) * sym_len)
                .collect();
            let symbols = grid.iter().flatten().copied().collect();
            (SignalBuffer::new(samples, 1.0), symbols, windows, 0, None, Some(ofdm))
        }
    };

    let z = apply_waveform_params(&z_base, &truth);
    let n = z.len();
    let w = awgn(n, 1.0, mix_seed(cfg.seed, 0x6e6f_6973))?;

    let s = match &cfg.soi {
        Some(soi) => {
            let sigma_z2 = amplitude * amplitude / p as f64;
            let sigma_s2 = sigma_z2 * crate::dsp::from_db(soi.sir_db);
            let region: usize = windows.last().map(|w| w.end).unwrap_or(n);
            let c = soi.chirp_rate.unwrap_or(0.24 / region as f64);
            let f0 = soi.f0.unwrap_or(-0.12);
            Some(lfm_soi(sigma_s2.sqrt(), f0, c, n)?)
        }
        None => None,
    };

    let mut r = z.clone();
    for (rv, wv) in r.samples.iter_mut().zip(&w.samples) {
        *rv += wv;
    }
    if let Some(s) = &s {
        for (rv, sv) in r.samples.iter_mut().zip(&s.samples) {
            *rv += sv;
        }
    }

    Ok(Scenario {
        r,
        z,
        s,
        w,
        truth,
        truth_symbols,
        windows,
        first_window_symbol,
        noise_var: 1.0,
        pulse,
        ofdm,
        config: cfg.clone(),
    })
}
