//! Constellation synthesis and hard-decision slicing.

use num_complex::Complex64;

use crate::buffer::Modulation;
use crate::error::Result;

/// A unit-average-energy constellation point set.
#[derive(Debug, Clone)]
pub struct Constellation {
    pub scheme: Modulation,
    pub points: Vec<Complex64>,
}

/// Build the Gray-mapped, unit-average-energy point set for a scheme.
///
/// PSK points are ordered so that symbol indices of adjacent points differ in
/// one bit; square QAM uses per-axis Gray coding.
pub fn make_constellation(scheme: Modulation) -> Result<Constellation> {
    let points = match scheme {
        Modulation::Bpsk => vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        Modulation::Qpsk => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            // Gray order: 00, 01, 11, 10 counter-clockwise from (1+j)/sqrt(2)
            vec![
                Complex64::new(s, s),
                Complex64::new(-s, s),
                Complex64::new(-s, -s),
                Complex64::new(s, -s),
            ]
        }
        Modulation::Psk8 => {
            let m = 8usize;
            (0..m)
                .map(|i| {
                    let k = gray_code(i);
                    let ang = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                    Complex64::new(ang.cos(), ang.sin())
                })
                .collect()
        }
        Modulation::Qam16 => square_qam(4),
        Modulation::Qam64 => square_qam(8),
    };
    Ok(Constellation { scheme, points })
}

fn gray_code(i: usize) -> usize {
    i ^ (i >> 1)
}

fn square_qam(side: usize) -> Vec<Complex64> {
    let levels: Vec<f64> = (0..side).map(|i| 2.0 * i as f64 - (side - 1) as f64).collect();
    let mut pts = Vec::with_capacity(side * side);
    for bi in 0..side {
        for bq in 0..side {
            let i = levels[gray_code(bi)];
            let q = levels[gray_code(bq)];
            pts.push(Complex64::new(i, q));
        }
    }
    let mean_e: f64 = pts.iter().map(|p| p.norm_sqr()).sum::<f64>() / pts.len() as f64;
    let scale = mean_e.sqrt().recip();
    pts.iter().map(|p| p * scale).collect()
}

impl Constellation {
    /// Index and value of the nearest constellation point.
    pub fn slice(&self, y: Complex64) -> (usize, Complex64) {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = (y - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        (best, self.points[best])
    }

    /// Minimum Euclidean distance between distinct points.
    pub fn min_distance(&self) -> f64 {
        let mut d = f64::INFINITY;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                d = d.min((a - b).norm());
            }
        }
        d
    }

    /// Nearest neighbours of each point (all points at the minimum distance).
    pub fn nearest_neighbors(&self) -> Vec<Vec<usize>> {
        let dmin = self.min_distance();
        self.points
            .iter()
            .map(|a| {
                self.points
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| {
                        let d = (a - *b).norm();
                        d > 1e-12 && d < dmin * (1.0 + 1e-9)
                    })
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect()
    }

    /// Distinct ring radii with their probability weights (for magnitude CDFs).
    pub fn rings(&self) -> Vec<(f64, f64)> {
        let mut radii: Vec<f64> = self.points.iter().map(|p| p.norm()).collect();
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut rings: Vec<(f64, usize)> = Vec::new();
        for r in radii {
            match rings.last_mut() {
                Some((r0, c)) if (r - *r0).abs() < 1e-9 => *c += 1,
                _ => rings.push((r, 1)),
            }
        }
        let n = self.points.len() as f64;
        rings.into_iter().map(|(r, c)| (r, c as f64 / n)).collect()
    }

    /// Fourth moment E|s|^4 (unit second moment), used by the moment-based
    /// SNR estimator.
    pub fn fourth_moment(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr() * p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }
}
