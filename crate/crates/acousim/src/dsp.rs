//! Shared DSP helpers: FFT convolution and windowed-sinc FIR design.

use rustfft::{num_complex::Complex, FftPlanner};
use std::f64::consts::PI;

/// Full linear convolution via FFT, length |a| + |b| − 1.
pub fn fft_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let out_len = a.len() + b.len() - 1;
    // Direct form is faster for tiny kernels.
    if a.len().min(b.len()) <= 64 {
        let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut out = vec![0.0; out_len];
        for (i, &s) in short.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            for (j, &l) in long.iter().enumerate() {
                out[i + j] += s * l;
            }
        }
        return out;
    }
    let n = out_len.next_power_of_two();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);

    let mut fa: Vec<Complex<f64>> = a.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fa.resize(n, Complex::new(0.0, 0.0));
    let mut fb: Vec<Complex<f64>> = b.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fb.resize(n, Complex::new(0.0, 0.0));
    fft.process(&mut fa);
    fft.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    ifft.process(&mut fa);
    fa.truncate(out_len);
    fa.iter().map(|c| c.re / n as f64).collect()
}

/// Centered "same"-length convolution with a symmetric odd-length kernel;
/// zero phase for linear-phase kernels.
pub fn convolve_same(signal: &[f64], kernel: &[f64]) -> Vec<f64> {
    assert!(kernel.len() % 2 == 1, "kernel length must be odd");
    let full = fft_convolve(signal, kernel);
    let half = kernel.len() / 2;
    full[half..half + signal.len()].to_vec()
}

/// Hann-windowed sinc lowpass with the given normalized cutoff (cycles per
/// sample, 0 < cutoff < 0.5), odd length, unit DC gain.
pub fn lowpass_hann(cutoff: f64, taps: usize) -> Vec<f64> {
    assert!(taps % 2 == 1 && cutoff > 0.0 && cutoff < 0.5);
    let m = (taps - 1) as f64;
    let mut h: Vec<f64> = (0..taps)
        .map(|i| {
            let x = i as f64 - m / 2.0;
            let sinc = if x == 0.0 {
                2.0 * cutoff
            } else {
                (2.0 * PI * cutoff * x).sin() / (PI * x)
            };
            let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / m).cos();
            sinc * w
        })
        .collect();
    let sum: f64 = h.iter().sum();
    for v in &mut h {
        *v /= sum;
    }
    h
}

fn bessel_i0(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let x2 = x * x / 4.0;
    for k in 1..50 {
        term *= x2 / (k * k) as f64;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// Kaiser-windowed sinc lowpass; `attenuation_db` sets the window shape.
pub fn lowpass_kaiser(cutoff: f64, taps: usize, attenuation_db: f64) -> Vec<f64> {
    assert!(taps % 2 == 1 && cutoff > 0.0 && cutoff < 0.5);
    let beta = if attenuation_db > 50.0 {
        0.1102 * (attenuation_db - 8.7)
    } else if attenuation_db >= 21.0 {
        0.5842 * (attenuation_db - 21.0).powf(0.4) + 0.07886 * (attenuation_db - 21.0)
    } else {
        0.0
    };
    let m = (taps - 1) as f64;
    let denom = bessel_i0(beta);
    let mut h: Vec<f64> = (0..taps)
        .map(|i| {
            let x = i as f64 - m / 2.0;
            let sinc = if x == 0.0 {
                2.0 * cutoff
            } else {
                (2.0 * PI * cutoff * x).sin() / (PI * x)
            };
            let r = 2.0 * i as f64 / m - 1.0;
            sinc * bessel_i0(beta * (1.0 - r * r).max(0.0).sqrt()) / denom
        })
        .collect();
    let sum: f64 = h.iter().sum();
    for v in &mut h {
        *v /= sum;
    }
    h
}

/// Windowed-sinc fractional-delay kernel values for a delay of `frac`
/// samples (|frac| ≤ 0.5) with the given odd tap count (Hann window).
pub fn fractional_delay_kernel(frac: f64, taps: usize) -> Vec<f64> {
    assert!(taps % 2 == 1);
    let half = (taps / 2) as isize;
    (0..taps as isize)
        .map(|i| {
            let x = (i - half) as f64 - frac;
            let sinc = if x == 0.0 { 1.0 } else { (PI * x).sin() / (PI * x) };
            // Hann window centered on the delayed peak.
            let u = ((i - half) as f64 - frac) / (half as f64 + 1.0);
            let w = if u.abs() >= 1.0 {
                0.0
            } else {
                0.5 + 0.5 * (PI * u).cos()
            };
            sinc * w
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fft_convolve_matches_direct() {
        let a: Vec<f64> = (0..200).map(|i| ((i * 7 % 13) as f64) - 6.0).collect();
        let b: Vec<f64> = (0..150).map(|i| ((i * 5 % 11) as f64) - 5.0).collect();
        let fast = fft_convolve(&a, &b);
        let mut direct = vec![0.0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                direct[i + j] += x * y;
            }
        }
        for (f, d) in fast.iter().zip(&direct) {
            assert_relative_eq!(f, d, epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn lowpass_passes_dc_and_blocks_stopband() {
        let h = lowpass_kaiser(0.1, 255, 80.0);
        // DC gain 1.
        assert_relative_eq!(h.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        // Response at 0.3 cycles/sample is deep in the stopband.
        let (mut re, mut im) = (0.0, 0.0);
        for (i, &v) in h.iter().enumerate() {
            let ph = 2.0 * PI * 0.3 * i as f64;
            re += v * ph.cos();
            im -= v * ph.sin();
        }
        let mag = (re * re + im * im).sqrt();
        assert!(mag < 1e-3, "stopband leakage {mag}");
    }

    #[test]
    fn fractional_delay_integer_case_is_identity() {
        let k = fractional_delay_kernel(0.0, 81);
        assert_relative_eq!(k[40], 1.0, epsilon = 1e-12);
        for (i, &v) in k.iter().enumerate() {
            if i != 40 {
                assert!(v.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fractional_delay_shifts_peak() {
        // Delay a band-limited pulse by 0.25 samples; the interpolated signal
        // sampled back at integer positions must match the analytic shift.
        let taps = 81;
        let k = fractional_delay_kernel(0.25, taps);
        // Evaluate the kernel against a pure sinusoid: phase delay must be
        // close to 0.25 samples at moderate frequencies.
        let freq: f64 = 0.1;
        let (mut re, mut im) = (0.0, 0.0);
        for (i, &v) in k.iter().enumerate() {
            let ph = 2.0 * PI * freq * (i as f64 - (taps / 2) as f64);
            re += v * ph.cos();
            im -= v * ph.sin();
        }
        let phase_delay = im.atan2(re) / (2.0 * PI * freq);
        assert_relative_eq!(phase_delay, 0.25, epsilon = 1e-3);
    }
}
