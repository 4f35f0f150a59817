use rustfft::num_complex::Complex as FftComplex;
use rustfft::FftPlanner;

use super::ChargeTrace;
use crate::error::{domain, Result};
use crate::scalar::Real;

/// Which qubit's ⟨σ_z⟩ to analyse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubit {
    A,
    B,
}

/// Outcome of the period analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Oscillation<T: Real = f64> {
    /// Signal is constant to 1e−9.
    None,
    Periodic {
        /// Mean spacing of rising zero crossings.
        period: T,
        /// Period of the dominant spectral peak, as a cross-check.
        spectral_period: T,
        rising_crossings: usize,
    },
}

impl<T: Real> Oscillation<T> {
    pub fn period(&self) -> Option<T> {
        match self {
            Self::None => None,
            Self::Periodic { period, .. } => Some(*period),
        }
    }
}

/// Dominant oscillation period of ⟨σ_z⟩ for one qubit.
pub fn oscillation_period<T: Real>(trace: &ChargeTrace<T>, which: Qubit) -> Result<Oscillation<T>> {
    let signal = match which {
        Qubit::A => &trace.sz_a,
        Qubit::B => &trace.sz_b,
    };
    signal_period(&trace.times, signal)
}

/// Zero-crossing period of a sampled signal after removing its mean.
///
/// Needs at least four rising crossings (three full periods).
pub fn signal_period<T: Real>(times: &[T], signal: &[T]) -> Result<Oscillation<T>> {
    if times.len() != signal.len() || times.len() < 3 {
        return domain("signal needs matching times and at least three samples");
    }
    let (lo, hi) = signal
        .iter()
        .fold((signal[0], signal[0]), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if hi - lo <= T::tol(1e-9) {
        return Ok(Oscillation::None);
    }
    let mean = signal.iter().fold(T::zero(), |a, &x| a + x) / T::from_int(signal.len() as i64);

    let mut crossings = Vec::new();
    for i in 0..signal.len() - 1 {
        let (a, b) = (signal[i] - mean, signal[i + 1] - mean);
        if a < T::zero() && b >= T::zero() {
            let frac = a / (a - b);
            crossings.push(times[i] + frac * (times[i + 1] - times[i]));
        }
    }
    if crossings.len() < 4 {
        return domain(format!(
            "signal spans fewer than three oscillation periods ({} rising crossings)",
            crossings.len()
        ));
    }
    let n = crossings.len();
    let period = (crossings[n - 1] - crossings[0]) / T::from_int(n as i64 - 1);
    let spectral_period = spectral_peak_period(times, signal, mean);
    Ok(Oscillation::Periodic {
        period,
        spectral_period,
        rising_crossings: n,
    })
}

/// Period of the largest non-DC bin of a zero-padded FFT, refined by a
/// parabolic fit. Uses only the uniformly spaced prefix of the samples.
fn spectral_peak_period<T: Real>(times: &[T], signal: &[T], mean: T) -> T {
    let dt = (times[1] - times[0]).as_f64();
    let mut n = 2;
    while n < times.len() {
        let step = (times[n] - times[n - 1]).as_f64();
        if (step - dt).abs() > 1e-9 * dt.abs() {
            break;
        }
        n += 1;
    }
    let padded = (8 * n).next_power_of_two();
    let mut buf: Vec<FftComplex<f64>> = signal[..n]
        .iter()
        .map(|&x| FftComplex::new((x - mean).as_f64(), 0.0))
        .chain(std::iter::repeat(FftComplex::new(0.0, 0.0)))
        .take(padded)
        .collect();
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);
    let mag: Vec<f64> = buf[..padded / 2].iter().map(|c| c.norm()).collect();
    let k = (1..mag.len()).max_by(|&i, &j| mag[i].total_cmp(&mag[j])).unwrap_or(1);
    let offset = if k + 1 < mag.len() {
        let (a, b, c) = (mag[k - 1], mag[k], mag[k + 1]);
        let denom = a - 2.0 * b + c;
        if denom != 0.0 {
            0.5 * (a - c) / denom
        } else {
            0.0
        }
    } else {
        0.0
    };
    let freq = (k as f64 + offset) / (padded as f64 * dt);
    T::lit(1.0 / freq)
}
