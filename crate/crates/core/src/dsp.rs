//! Shared DSP utilities: cached FFTs, band-limited fractional delay, and the
//! special functions used by the theory engine and classifier.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type FftMap = HashMap<(usize, bool), Arc<dyn Fft<f64>>>;

fn fft_cache() -> &'static Mutex<FftMap> {
    static CACHE: OnceLock<Mutex<FftMap>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Get a cached forward FFT of the given size.
pub fn fft_forward(n: usize) -> Arc<dyn Fft<f64>> {
    plan(n, true)
}

/// Get a cached inverse FFT of the given size (unnormalized, rustfft convention).
pub fn fft_inverse(n: usize) -> Arc<dyn Fft<f64>> {
    plan(n, false)
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut cache = fft_cache().lock().unwrap();
    cache
        .entry((n, forward))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if forward {
                planner.plan_fft_forward(n)
            } else {
                planner.plan_fft_inverse(n)
            }
        })
        .clone()
}

/// Smallest power of two >= n.
pub fn next_pow2(n: usize) -> usize {
    n.next_power_of_two()
}

/// e^{j x}
#[inline]
pub fn cis(x: f64) -> Complex64 {
    let (s, c) = x.sin_cos();
    Complex64::new(c, s)
}

/// Normalized DFT bin frequency in cycles/sample, wrapped to [-1/2, 1/2).
#[inline]
pub fn bin_freq(k: usize, n: usize) -> f64 {
    if 2 * k < n {
        k as f64 / n as f64
    } else {
        k as f64 / n as f64 - 1.0
    }
}

/// Delay a signal by a (possibly fractional) number of samples using a DFT
/// phase ramp. Exact for band-limited content; the shift is circular, so
/// callers must keep enough zero tail for the delay they apply.
pub fn fractional_delay(x: &[Complex64], delay: f64) -> Vec<Complex64> {
    if x.is_empty() || delay == 0.0 {
        return x.to_vec();
    }
    // pad past the shift so the circular wrap lands in zeros
    let guard = delay.abs().ceil() as usize + 8;
    let n = next_pow2(x.len() + guard);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    buf[..x.len()].copy_from_slice(x);
    fft_forward(n).process(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        let f = bin_freq(k, n);
        *v *= cis(-2.0 * std::f64::consts::PI * f * delay);
    }
    fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.truncate(x.len());
    for v in &mut buf {
        *v *= scale;
    }
    buf
}

/// Linear convolution via FFT. Output length is `x.len() + h.len() - 1`.
pub fn fft_convolve(x: &[Complex64], h: &[Complex64]) -> Vec<Complex64> {
    if x.is_empty() || h.is_empty() {
        return Vec::new();
    }
    let out_len = x.len() + h.len() - 1;
    let n = next_pow2(out_len);
    let mut a = vec![Complex64::new(0.0, 0.0); n];
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    a[..x.len()].copy_from_slice(x);
    b[..h.len()].copy_from_slice(h);
    let fwd = fft_forward(n);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (va, vb) in a.iter_mut().zip(&b) {
        *va *= vb;
    }
    fft_inverse(n).process(&mut a);
    let scale = 1.0 / n as f64;
    a.truncate(out_len);
    for v in &mut a {
        *v *= scale;
    }
    a
}

/// Power ratio to decibels; exact zeros map to -inf.
pub fn to_db(ratio: f64) -> f64 {
    if ratio == f64::INFINITY {
        f64::INFINITY
    } else if ratio <= 0.0 {
        f64::NEG_INFINITY
    } else {
        10.0 * ratio.log10()
    }
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub mod special {
    //! Special functions: erf family, Gaussian tails, Rice/Bessel helpers.

    use std::f64::consts::PI;

    pub fn erf(x: f64) -> f64 {
        libm::erf(x)
    }

    pub fn erfc(x: f64) -> f64 {
        libm::erfc(x)
    }

    /// Gaussian tail Q(x) = P(N(0,1) > x).
    pub fn q_func(x: f64) -> f64 {
        0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
    }

    /// Standard normal CDF.
    pub fn norm_cdf(x: f64) -> f64 {
        0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
    }

    /// Exponentially scaled modified Bessel function I0(x) e^{-|x|}.
    ///
    /// Abramowitz & Stegun 9.8.1 / 9.8.2 polynomial approximations
    /// (|rel err| < 2e-7 which is ample for CDF grids).
    pub fn i0e(x: f64) -> f64 {
        let ax = x.abs();
        if ax < 3.75 {
            let t = (x / 3.75) * (x / 3.75);
            let p = 1.0
                + t * (3.5156229
                    + t * (3.0899424
                        + t * (1.2067492 + t * (0.2659732 + t * (0.0360768 + t * 0.0045813)))));
            p * (-ax).exp()
        } else {
            let t = 3.75 / ax;
            let p = 0.39894228
                + t * (0.01328592
                    + t * (0.00225319
                        + t * (-0.00157565
                            + t * (0.00916281
                                + t * (-0.02057706
                                    + t * (0.02635537 + t * (-0.01647633 + t * 0.00392377)))))));
            p / ax.sqrt()
        }
    }

    /// Rice probability density of the magnitude |v + n| where |v| = nu and
    /// n is complex Gaussian with per-component standard deviation s.
    pub fn rice_pdf(u: f64, nu: f64, s: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let s2 = s * s;
        let z = u * nu / s2;
        (u / s2) * (-(u - nu) * (u - nu) / (2.0 * s2)).exp() * i0e(z)
    }

    /// Density of the phase of v + n where v = nu * e^{j0}, n complex Gaussian
    /// with per-component standard deviation s; evaluated at angle d from v.
    ///
    /// Standard closed form in terms of the normal CDF; reduces to the uniform
    /// density for nu = 0.
    pub fn phase_pdf(d: f64, nu: f64, s: f64) -> f64 {
        let rho = nu / s;
        let k = 0.5 * rho * rho;
        let c = d.cos();
        let a = rho * c;
        // e^{-k} [ 1/(2pi) + a/sqrt(2pi) e^{-k sin^2 - ... } Phi(a) ] rearranged
        // into the numerically safe scaled form.
        let base = (-k).exp() / (2.0 * PI);
        let tail = a / (2.0 * PI).sqrt() * (-0.5 * rho * rho * d.sin() * d.sin()).exp() * norm_cdf(a);
        base + tail
    }

    /// Inverse standard normal CDF (Acklam's rational approximation,
    /// |rel err| < 1.2e-9). Used for stratified Gaussian sampling.
    pub fn inv_norm_cdf(p: f64) -> f64 {
        assert!(p > 0.0 && p < 1.0, "inv_norm_cdf domain");
        const A: [f64; 6] = [
            -3.969683028665376e+01,
            2.209460984245205e+02,
            -2.759285104469687e+02,
            1.383577518672690e+02,
            -3.066479806614716e+01,
            2.506628277459239e+00,
        ];
        const B: [f64; 5] = [
            -5.447609879822406e+01,
            1.615858368580409e+02,
            -1.556989798598866e+02,
            6.680131188771972e+01,
            -1.328068155288572e+01,
        ];
        const C: [f64; 6] = [
            -7.784894002430293e-03,
            -3.223964580411365e-01,
            -2.400758277161838e+00,
            -2.549732539343734e+00,
            4.374664141464968e+00,
            2.938163982698783e+00,
        ];
        const D: [f64; 4] = [
            7.784695709041462e-03,
            3.224671290700398e-01,
            2.445134137142996e+00,
            3.754408661907416e+00,
        ];
        let p_low = 0.02425;
        if p < p_low {
            let q = (-2.0 * p.ln()).sqrt();
            (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
                / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
        } else if p <= 1.0 - p_low {
            let q = p - 0.5;
            let r = q * q;
            (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
                / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
        } else {
            let q = (-2.0 * (1.0 - p).ln()).sqrt();
            -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
                / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
        }
    }
}
