//! Baseband waveform synthesis: single-carrier pulse shaping, oversampled
//! OFDM, the LFM signal of interest, AWGN, and waveform-parameter application.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::buffer::{SignalBuffer, WaveformParams};
use crate::dsp;
use crate::error::{Error, Result};
use crate::signals::pulse::PulseShape;

/// Pulse-shape a symbol sequence at the pulse's oversampling factor.
///
/// Output sample n carries sum_k s_k p(n - k P); the first symbol peaks at
/// sample index `pulse.center()` and the output carries the full pulse tails
/// (length `(K-1) P + taps`).
pub fn modulate_single_carrier(symbols: &[Complex64], pulse: &PulseShape) -> Result<SignalBuffer> {
    if symbols.is_empty() {
        return Err(Error::EmptyInput("symbol sequence"));
    }
    let p = pulse.oversampling;
    let mut up = vec![Complex64::new(0.0, 0.0); (symbols.len() - 1) * p + 1];
    for (k, s) in symbols.iter().enumerate() {
        up[k * p] = *s;
    }
    let taps: Vec<Complex64> = pulse.taps.iter().map(|t| Complex64::new(*t, 0.0)).collect();
    let out = dsp::fft_convolve(&up, &taps);
    Ok(SignalBuffer::new(out, 1.0))
}

/// Oversampled OFDM configuration. The cyclic prefix length `l` is counted in
/// subcarrier samples, so one OFDM symbol spans `p * (m + l)` output samples.
#[derive(Debug, Clone, Copy)]
pub struct OfdmConfig {
    pub m: usize,
    pub l: usize,
    pub p: usize,
}

impl OfdmConfig {
    pub fn new(m: usize, l: usize, p: usize) -> Result<Self> {
        if m == 0 || p == 0 {
            return Err(Error::InvalidConfig("OFDM m and p must be positive".into()));
        }
        if l >= m {
            return Err(Error::InvalidConfig(format!("cyclic prefix l={l} must be < m={m}")));
        }
        Ok(Self { m, l, p })
    }

    /// CP ratio kappa = l / m.
    pub fn kappa(&self) -> f64 {
        self.l as f64 / self.m as f64
    }

    /// Samples per OFDM symbol, p (m + l).
    pub fn symbol_len(&self) -> usize {
        self.p * (self.m + self.l)
    }

    pub fn body_len(&self) -> usize {
        self.p * self.m
    }

    pub fn cp_len(&self) -> usize {
        self.p * self.l
    }
}

/// Modulate a grid of subcarrier symbols (`m` rows, one column per OFDM
/// symbol). Each symbol is an inverse DFT with 1/sqrt(PM) scaling over bins
/// 0..m-1 of a PM-point transform, with the tail copied in front as cyclic
/// prefix.
pub fn modulate_ofdm(grid: &[Vec<Complex64>], cfg: &OfdmConfig) -> Result<SignalBuffer> {
    if grid.is_empty() {
        return Err(Error::EmptyInput("OFDM symbol grid"));
    }
    let pm = cfg.body_len();
    let cp = cfg.cp_len();
    let ifft = dsp::fft_inverse(pm);
    let scale = 1.0 / (pm as f64).sqrt();
    let mut out = Vec::with_capacity(grid.len() * cfg.symbol_len());
    for col in grid {
        if col.len() != cfg.m {
            return Err(Error::DimensionMismatch(format!(
                "OFDM column has {} subcarriers, config says {}",
                col.len(),
                cfg.m
            )));
        }
        let mut body = vec![Complex64::new(0.0, 0.0); pm];
        body[..cfg.m].copy_from_slice(col);
        ifft.process(&mut body);
        for v in &mut body {
            *v *= scale;
        }
        out.extend_from_slice(&body[pm - cp..]);
        out.extend_from_slice(&body);
    }
    Ok(SignalBuffer::new(out, 1.0))
}

/// Recover the subcarrier grid from a clean OFDM buffer (drop CP, forward DFT
/// with downsampling). Inverse of [`modulate_ofdm`] in the absence of channel
/// impairments.
pub fn demodulate_ofdm(buf: &SignalBuffer, cfg: &OfdmConfig) -> Result<Vec<Vec<Complex64>>> {
    let sym_len = cfg.symbol_len();
    if buf.len() % sym_len != 0 {
        return Err(Error::DimensionMismatch(format!(
            "buffer length {} is not a multiple of the OFDM symbol length {sym_len}",
            buf.len()
        )));
    }
    let pm = cfg.body_len();
    let fft = dsp::fft_forward(pm);
    let scale = 1.0 / (pm as f64).sqrt();
    let mut grid = Vec::with_capacity(buf.len() / sym_len);
    for chunk in buf.samples.chunks_exact(sym_len) {
        let mut body: Vec<Complex64> = chunk[cfg.cp_len()..].to_vec();
        fft.process(&mut body);
        grid.push(body[..cfg.m].iter().map(|v| v * scale).collect());
    }
    Ok(grid)
}

/// Linear FM chirp s(n) = A_s exp(j 2 pi (f0 n + c n^2 / 2)).
pub fn lfm_soi(a_s: f64, f0: f64, chirp_rate: f64, n: usize) -> Result<SignalBuffer> {
    if n == 0 {
        return Err(Error::EmptyInput("LFM length"));
    }
    let samples = (0..n)
        .map(|i| {
            let t = i as f64;
            a_s * dsp::cis(2.0 * std::f64::consts::PI * (f0 * t + 0.5 * chirp_rate * t * t))
        })
        .collect();
    Ok(SignalBuffer::new(samples, 1.0))
}

/// Circularly-symmetric complex Gaussian noise with total variance
/// `variance` (variance/2 per quadrature), deterministic under `seed`.
pub fn awgn(n: usize, variance: f64, seed: u64) -> Result<SignalBuffer> {
    if variance < 0.0 {
        return Err(Error::InvalidConfig(format!("noise variance must be >= 0, got {variance}")));
    }
    if variance == 0.0 {
        return Ok(SignalBuffer::zeros(n, 1.0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Normal::new(0.0, (variance / 2.0).sqrt()).expect("valid std");
    let samples = (0..n)
        .map(|_| Complex64::new(dist.sample(&mut rng), dist.sample(&mut rng)))
        .collect();
    Ok(SignalBuffer::new(samples, 1.0))
}

/// Apply amplitude, frequency/phase rotation, and fractional timing offset:
/// out(n) = A in(n - eps) e^{j (omega n + theta)}.
///
/// The delay uses a DFT phase ramp (exact for band-limited signals, circular
/// at the buffer edges).
pub fn apply_waveform_params(base: &SignalBuffer, params: &WaveformParams) -> SignalBuffer {
    let delayed = if params.epsilon == 0.0 {
        base.samples.clone()
    } else {
        dsp::fractional_delay(&base.samples, params.epsilon)
    };
    let samples = delayed
        .iter()
        .enumerate()
        .map(|(n, v)| params.amplitude * v * dsp::cis(params.omega * n as f64 + params.theta))
        .collect();
    SignalBuffer::new(samples, base.sample_rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buffer::Modulation;
    use crate::signals::constellation::make_constellation;
    use crate::signals::pulse::rrc_pulse;
    use rand::Rng;

    fn random_symbols(scheme: Modulation, k: usize, seed: u64) -> Vec<Complex64> {
        let c = make_constellation(scheme).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..k).map(|_| c.points[rng.gen_range(0..c.points.len())]).collect()
    }

    #[test]
    fn single_symbol_unit_pulse() {
        let pulse = PulseShape { taps: vec![1.0], oversampling: 1, rolloff: 0.0, span: 0 };
        let buf = modulate_single_carrier(&[Complex64::new(1.0, 0.0)], &pulse).unwrap();
        assert_eq!(buf.samples, vec![Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn sc_payload_power_near_one_over_p() {
        // K = 69 QPSK symbols at P = 82: steady-state power within 5% of 1/82
        let pulse = rrc_pulse(0.4, 21, 82).unwrap();
        let symbols = random_symbols(Modulation::Qpsk, 69, 7);
        let buf = modulate_single_carrier(&symbols, &pulse).unwrap();
        assert!(buf.len() >= 69 * 82);
        let lead = pulse.len(); // skip ramp-up/down tails
        let steady = &buf.samples[lead..buf.len() - lead];
        let power = steady.iter().map(|x| x.norm_sqr()).sum::<f64>() / steady.len() as f64;
        assert!(
            (power - 1.0 / 82.0).abs() < 0.05 / 82.0,
            "steady-state power {power} vs {}",
            1.0 / 82.0
        );
    }

    #[test]
    fn sc_deterministic() {
        let pulse = rrc_pulse(0.4, 9, 8).unwrap();
        let symbols = random_symbols(Modulation::Qpsk, 40, 3);
        let a = modulate_single_carrier(&symbols, &pulse).unwrap();
        let b = modulate_single_carrier(&symbols, &pulse).unwrap();
        assert_eq!(a.samples, b.samples);
    }

    #[test]
    fn ofdm_symbol_length_and_cp() {
        // M=64, L=5, P=82: 5658 samples, first P*L equal the last P*L body samples
        let cfg = OfdmConfig::new(64, 5, 82).unwrap();
        let grid = vec![random_symbols(Modulation::Qpsk, 64, 5)];
        let buf = modulate_ofdm(&grid, &cfg).unwrap();
        assert_eq!(buf.len(), 5658);
        let cp = cfg.cp_len();
        for i in 0..cp {
            assert_eq!(buf.samples[i], buf.samples[cfg.body_len() + i], "cp sample {i}");
        }
    }

    #[test]
    fn ofdm_zero_grid() {
        let cfg = OfdmConfig::new(16, 2, 4).unwrap();
        let grid = vec![vec![Complex64::new(0.0, 0.0); 16]; 3];
        let buf = modulate_ofdm(&grid, &cfg).unwrap();
        assert!(buf.samples.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn ofdm_round_trip() {
        let cfg = OfdmConfig::new(64, 5, 4).unwrap();
        let grid = vec![
            random_symbols(Modulation::Qam16, 64, 11),
            random_symbols(Modulation::Qpsk, 64, 12),
        ];
        let buf = modulate_ofdm(&grid, &cfg).unwrap();
        let back = demodulate_ofdm(&buf, &cfg).unwrap();
        for (col, orig) in back.iter().zip(&grid) {
            for (a, b) in col.iter().zip(orig) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn ofdm_dimension_mismatch() {
        let cfg = OfdmConfig::new(64, 5, 4).unwrap();
        let grid = vec![vec![Complex64::new(1.0, 0.0); 32]];
        assert!(modulate_ofdm(&grid, &cfg).is_err());
    }

    #[test]
    fn lfm_constant_modulus() {
        let s = lfm_soi(1.7, 0.05, 4e-5, 5000).unwrap();
        for v in &s.samples {
            assert!((v.norm() - 1.7).abs() < 1e-12);
        }
        // c = 0 -> pure tone: consecutive phase increments constant
        let tone = lfm_soi(1.0, 0.1, 0.0, 100).unwrap();
        for n in 1..100 {
            let d = (tone.samples[n] * tone.samples[n - 1].conj()).arg();
            assert!((d - 2.0 * std::f64::consts::PI * 0.1).abs() < 1e-10);
        }
    }

    #[test]
    fn awgn_statistics_and_determinism() {
        let n = 1_000_000;
        let w = awgn(n, 1.0, 42).unwrap();
        let var = w.power();
        assert!((0.99..=1.01).contains(&var), "sample variance {var}");
        let w2 = awgn(n, 1.0, 42).unwrap();
        assert_eq!(w.samples, w2.samples);
        let z = awgn(100, 0.0, 1).unwrap();
        assert!(z.samples.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn apply_params_identity_and_power() {
        let pulse = rrc_pulse(0.4, 9, 8).unwrap();
        let buf = modulate_single_carrier(&random_symbols(Modulation::Qpsk, 30, 9), &pulse).unwrap();
        let id = WaveformParams::new(1.0, 0.0, 0.0, 0.0, Modulation::Qpsk).unwrap();
        let out = apply_waveform_params(&buf, &id);
        for (a, b) in out.samples.iter().zip(&buf.samples) {
            assert!((a - b).norm() < 1e-12);
        }
        let double = WaveformParams::new(2.0, 0.001, 0.3, 0.0, Modulation::Qpsk).unwrap();
        let out2 = apply_waveform_params(&buf, &double);
        let r = out2.energy() / buf.energy();
        assert!((r - 4.0).abs() < 1e-10, "power ratio {r}");
    }

    #[test]
    fn integer_delay_matches_symbol_shift() {
        // delaying by one symbol period equals shifting the symbol indices,
        // away from the buffer edges
        let pulse = rrc_pulse(0.4, 9, 8).unwrap();
        let p = pulse.oversampling;
        let mut symbols = random_symbols(Modulation::Qpsk, 40, 17);
        let buf = modulate_single_carrier(&symbols, &pulse).unwrap();
        let shifted = apply_waveform_params(
            &buf,
            &WaveformParams::new(1.0, 0.0, 0.0, p as f64, Modulation::Qpsk).unwrap(),
        );
        symbols.rotate_right(1); // same as shifting the index by one for interior symbols
        let direct = modulate_single_carrier(&symbols, &pulse).unwrap();
        let guard = pulse.len() + 2 * p;
        for n in guard..buf.len() - guard {
            assert!(
                (shifted.samples[n] - direct.samples[n]).norm() < 1e-6,
                "sample {n}: {} vs {}",
                shifted.samples[n],
                direct.samples[n]
            );
        }
    }

    #[test]
    fn lfm_occupied_bandwidth() {
        // f0 = 0.05, c = 4e-5, N = 6000: sweep covers ~0.24 of normalized bandwidth
        let n = 6000;
        let s = lfm_soi(1.0, 0.05, 4e-5, n).unwrap();
        // measure the 99%-energy bandwidth from a coarse periodogram
        let m = 8192;
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        buf[..n].copy_from_slice(&s.samples);
        dsp::fft_forward(m).process(&mut buf);
        let psd: Vec<f64> = buf.iter().map(|v| v.norm_sqr()).collect();
        let total: f64 = psd.iter().sum();
        let mut sorted: Vec<f64> = psd.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut acc = 0.0;
        let mut bins = 0usize;
        for v in sorted {
            acc += v;
            bins += 1;
            if acc >= 0.99 * total {
                break;
            }
        }
        let bw = bins as f64 / m as f64;
        assert!((bw - 0.24).abs() < 0.03, "occupied bandwidth {bw}");
    }
}
