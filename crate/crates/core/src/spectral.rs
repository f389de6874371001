//! Discrete Fourier transforms on odd sample counts, Fourier time
//! differentiation and the Time-Spectral differentiation matrix.
//!
//! Samples sit at `t_n = n T / Nts`, `n = 0..Nts`, with `Nts = 2N + 1`.
//! Coefficients are stored for `k = -N..=N` at index `k + N`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Harmonic count for an odd sample count.
pub fn harmonics_for(nts: usize) -> Result<usize> {
    if nts.is_multiple_of(2) {
        return Err(Error::EvenSampleCount(nts));
    }
    Ok(nts / 2)
}

/// Precomputed transforms for one `(N, T)` pair.
#[derive(Debug, Clone)]
pub struct SpectralOperator {
    harmonics: usize,
    period: f64,
    /// `e^{-i 2π k n / Nts}`, row `k + N`, column `n`.
    forward: Vec<Complex64>,
    d_matrix: Vec<f64>,
}

impl SpectralOperator {
    pub fn new(harmonics: usize, period: f64) -> Result<Self> {
        if harmonics == 0 {
            return Err(Error::InvalidParameter("harmonic count must be at least 1".into()));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidParameter(format!("period must be positive, got {period}")));
        }
        let nts = 2 * harmonics + 1;
        let mut forward = Vec::with_capacity(nts * nts);
        for kk in 0..nts {
            let k = kk as i64 - harmonics as i64;
            for n in 0..nts {
                // reduce k·n modulo Nts before scaling to keep the angle exact
                let m = (k * n as i64).rem_euclid(nts as i64);
                let angle = -2.0 * PI * m as f64 / nts as f64;
                forward.push(Complex64::from_polar(1.0, angle));
            }
        }
        Ok(SpectralOperator {
            harmonics,
            period,
            forward,
            d_matrix: ts_matrix(harmonics, period)?,
        })
    }

    /// Build from a sample count, rejecting even values.
    pub fn from_samples(nts: usize, period: f64) -> Result<Self> {
        Self::new(harmonics_for(nts)?, period)
    }

    pub fn harmonics(&self) -> usize {
        self.harmonics
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn sample_count(&self) -> usize {
        2 * self.harmonics + 1
    }

    /// `t_n` for `n = 0..Nts` (the closing instant `T` is not included).
    pub fn instants(&self) -> Vec<f64> {
        let nts = self.sample_count();
        (0..nts).map(|n| n as f64 * self.period / nts as f64).collect()
    }

    /// `i 2π k / T` for each stored wavenumber.
    pub fn wavenumbers(&self) -> Vec<Complex64> {
        let n = self.harmonics as i64;
        (-n..=n)
            .map(|k| Complex64::new(0.0, 2.0 * PI * k as f64 / self.period))
            .collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        let nts = self.sample_count();
        if len != nts {
            return Err(Error::DimensionMismatch { expected: nts, actual: len });
        }
        Ok(())
    }

    pub fn dft(&self, samples: &[f64]) -> Result<Vec<Complex64>> {
        self.check_len(samples.len())?;
        let mut out = vec![Complex64::new(0.0, 0.0); samples.len()];
        self.dft_into(samples, &mut out);
        Ok(out)
    }

    /// Unchecked forward transform; lengths must equal `Nts`.
    pub fn dft_into(&self, samples: &[f64], out: &mut [Complex64]) {
        let nts = self.sample_count();
        let scale = 1.0 / nts as f64;
        for (kk, c) in out.iter_mut().enumerate() {
            let row = &self.forward[kk * nts..(kk + 1) * nts];
            let mut acc = Complex64::new(0.0, 0.0);
            for (w, &s) in row.iter().zip(samples) {
                acc += w * s;
            }
            *c = acc * scale;
        }
    }

    pub fn idft(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(coeffs.len())?;
        let nts = self.sample_count();
        Ok((0..nts)
            .map(|n| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (kk, c) in coeffs.iter().enumerate() {
                    acc += c * self.forward[kk * nts + n].conj();
                }
                acc
            })
            .collect())
    }

    /// Inverse transform keeping only the real part.
    pub fn idft_real(&self, coeffs: &[Complex64]) -> Result<Vec<f64>> {
        self.check_len(coeffs.len())?;
        let mut out = vec![0.0; coeffs.len()];
        self.idft_real_into(coeffs, &mut out);
        Ok(out)
    }

    /// Unchecked real inverse transform; lengths must equal `Nts`.
    pub fn idft_real_into(&self, coeffs: &[Complex64], out: &mut [f64]) {
        let nts = self.sample_count();
        for (n, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (kk, c) in coeffs.iter().enumerate() {
                let w = self.forward[kk * nts + n];
                // Re(c · conj(w))
                acc += c.re * w.re + c.im * w.im;
            }
            *o = acc;
        }
    }

    /// Derivative of the trigonometric interpolant at the sample instants.
    pub fn differentiate(&self, samples: &[f64]) -> Result<Vec<f64>> {
        let mut c = self.dft(samples)?;
        for (ci, ik) in c.iter_mut().zip(self.wavenumbers()) {
            *ci *= ik;
        }
        self.idft_real(&c)
    }

    /// Row-major `Nts × Nts` Time-Spectral matrix.
    pub fn d_matrix(&self) -> &[f64] {
        &self.d_matrix
    }

    /// `D · samples`.
    pub fn apply_ts(&self, samples: &[f64]) -> Result<Vec<f64>> {
        self.check_len(samples.len())?;
        let nts = self.sample_count();
        Ok(self
            .d_matrix
            .chunks_exact(nts)
            .map(|row| row.iter().zip(samples).map(|(d, s)| d * s).sum())
            .collect())
    }
}

/// Forward transform with the harmonic count inferred from the length.
pub fn dft(samples: &[f64]) -> Result<Vec<Complex64>> {
    SpectralOperator::from_samples(samples.len(), 1.0)?.dft(samples)
}

/// Inverse transform with the harmonic count inferred from the length.
pub fn idft(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    SpectralOperator::from_samples(coeffs.len(), 1.0)?.idft(coeffs)
}

pub fn fourier_differentiate(samples: &[f64], period: f64) -> Result<Vec<f64>> {
    SpectralOperator::from_samples(samples.len(), period)?.differentiate(samples)
}

/// Time-Spectral matrix `d_{n,K} = (π/T)(-1)^{n-K} csc(π(n-K)/Nts)`.
pub fn ts_matrix(harmonics: usize, period: f64) -> Result<Vec<f64>> {
    if harmonics == 0 {
        return Err(Error::InvalidParameter("harmonic count must be at least 1".into()));
    }
    let nts = 2 * harmonics + 1;
    let mut d = vec![0.0; nts * nts];
    // fill the upper triangle and mirror so that D = -Dᵀ holds bitwise
    for n in 0..nts {
        for kk in n + 1..nts {
            let m = n as i64 - kk as i64;
            let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let v = PI / period * sign / (PI * m as f64 / nts as f64).sin();
            d[n * nts + kk] = v;
            d[kk * nts + n] = -v;
        }
    }
    Ok(d)
}

/// Largest `|d/dt Ω - reference|` over cells and instants, where each
/// entry of `volumes` is one cell's volume history.
pub fn volume_derivative_convergence(
    volumes: &[Vec<f64>],
    period: f64,
    reference: &[Vec<f64>],
) -> Result<f64> {
    if volumes.len() != reference.len() {
        return Err(Error::DimensionMismatch { expected: volumes.len(), actual: reference.len() });
    }
    let Some(first) = volumes.first() else {
        return Ok(0.0);
    };
    let op = SpectralOperator::from_samples(first.len(), period)?;
    let mut worst: f64 = 0.0;
    for (v, r) in volumes.iter().zip(reference) {
        let d = op.differentiate(v)?;
        if r.len() != d.len() {
            return Err(Error::DimensionMismatch { expected: d.len(), actual: r.len() });
        }
        for (a, b) in d.iter().zip(r) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}
