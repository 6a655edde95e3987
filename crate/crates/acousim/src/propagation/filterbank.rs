//! Octave-band FIR decomposition whose band responses sum exactly to a unit
//! impulse, so band-wise gain application never colors a flat spectrum.

use crate::dsp;
use crate::scene::OCTAVE_BANDS;

use super::image::N_BANDS;

/// Linear-phase band filters at the simulation rate. Bands whose lower edge
/// reaches Nyquist collapse into the highest usable band.
pub struct FilterBank {
    /// One odd-length kernel per octave band; empty kernels mark collapsed bands.
    pub filters: Vec<Vec<f64>>,
    pub taps: usize,
}

impl FilterBank {
    pub fn new(sample_rate: f64, taps: usize) -> Self {
        assert!(taps % 2 == 1);
        // Upper band edges: geometric midpoints between octave centers.
        let edges: Vec<f64> = OCTAVE_BANDS.iter().map(|c| c * 2f64.sqrt()).collect();
        let nyquist_guard = 0.499 * sample_rate;

        // Highest band whose lower edge is still below Nyquist.
        let mut top = N_BANDS - 1;
        while top > 0 && edges[top - 1] >= nyquist_guard {
            top -= 1;
        }

        let mut filters: Vec<Vec<f64>> = vec![Vec::new(); N_BANDS];
        let mut prev_lp: Option<Vec<f64>> = None;
        for (b, filter) in filters.iter_mut().enumerate().take(top) {
            let lp = dsp::lowpass_hann(edges[b] / sample_rate, taps);
            *filter = match &prev_lp {
                None => lp.clone(),
                Some(p) => lp.iter().zip(p).map(|(a, b)| a - b).collect(),
            };
            prev_lp = Some(lp);
        }
        // Top band: delta minus the last lowpass, so the bank telescopes to δ.
        let mut h = vec![0.0; taps];
        h[taps / 2] = 1.0;
        if let Some(p) = &prev_lp {
            for (v, q) in h.iter_mut().zip(p) {
                *v -= q;
            }
        }
        filters[top] = h;
        Self { filters, taps }
    }

    /// Band-filter each train and sum; zero-phase, output length preserved.
    pub fn synthesize(&self, band_trains: &[Vec<f64>]) -> Vec<f64> {
        assert_eq!(band_trains.len(), N_BANDS);
        let len = band_trains.iter().map(|t| t.len()).max().unwrap_or(0);
        let mut out = vec![0.0; len];
        for (train, filter) in band_trains.iter().zip(&self.filters) {
            if train.is_empty() {
                continue;
            }
            let contribution = if filter.is_empty() {
                // Collapsed band: fold into the top usable band unfiltered.
                train.clone()
            } else {
                dsp::convolve_same(train, filter)
            };
            for (o, c) in out.iter_mut().zip(&contribution) {
                *o += c;
            }
        }
        out
    }

    /// Index of the band holding a given frequency.
    pub fn band_of(freq_hz: f64) -> usize {
        let edges: Vec<f64> = OCTAVE_BANDS.iter().map(|c| c * 2f64.sqrt()).collect();
        for (b, &e) in edges.iter().enumerate().take(N_BANDS - 1) {
            if freq_hz < e {
                return b;
            }
        }
        N_BANDS - 1
    }
}
