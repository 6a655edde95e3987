//! Band-wise room impulse response synthesis from image sources and an
//! optional ray-traced tail.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dsp;
use crate::geom::Vec3;
use crate::scene::Directivity;

use super::filterbank::FilterBank;
use super::image::{ImageSource, N_BANDS};
use super::ray::RayHistogram;
use super::{AirAbsorptionModel, PropagationError};

/// Impulse response between one speaker and one microphone.
#[derive(Debug, Clone)]
pub struct Rir {
    pub samples: Vec<f64>,
    pub sample_rate_hz: f64,
    pub source_id: String,
    pub mic_id: String,
}

#[derive(Debug, Clone)]
pub struct RirParams {
    pub sample_rate: f64,
    pub speed_of_sound: f64,
    /// Odd tap count of the windowed-sinc fractional delay kernel.
    pub frac_delay_taps: usize,
    /// Odd tap count of each octave band filter.
    pub filter_taps: usize,
    /// Seed for the noise carrier of the ray-traced tail.
    pub tail_seed: u64,
}

impl Default for RirParams {
    fn default() -> Self {
        Self {
            sample_rate: 250_000.0,
            speed_of_sound: 343.0,
            frac_delay_taps: 81,
            filter_taps: 2047,
            tail_seed: 0,
        }
    }
}

/// Builds the RIR: each image contributes 1/(4πd)·g_refl·g_air·g_dir at its
/// propagation delay, realized with a windowed-sinc fractional delay and the
/// unity-sum octave filter bank.
#[allow(clippy::too_many_arguments)]
pub fn synthesize_rir(
    images: &[ImageSource],
    ray_tail: Option<&RayHistogram>,
    mic_position: &Vec3,
    mic_directivity: &Directivity,
    speaker_directivity: &Directivity,
    air: &AirAbsorptionModel,
    params: &RirParams,
    source_id: &str,
    mic_id: &str,
) -> Result<Rir, PropagationError> {
    let fs = params.sample_rate;
    let v = params.speed_of_sound;
    let half_kernel = params.frac_delay_taps / 2;

    let mut max_delay: f64 = 0.0;
    for im in images {
        let d = (im.position - mic_position).norm();
        if d < 1e-9 {
            return Err(PropagationError::MicAtImagePosition);
        }
        max_delay = max_delay.max(d / v * fs);
    }
    if let Some(tail) = ray_tail {
        max_delay = max_delay.max(tail.bins.len() as f64);
    }
    let len = max_delay.ceil() as usize + params.frac_delay_taps + params.filter_taps;
    let mut band_trains = vec![vec![0.0f64; len]; N_BANDS];

    for im in images {
        let offset = im.position - mic_position;
        let d = offset.norm();
        let to_image = offset / d;
        let mic_gain = mic_directivity.gain(&to_image);
        // Emission direction unfolds through the mirrors: flip the speaker
        // orientation on axes with odd reflection parity.
        let mut orient = Vec3::from(speaker_directivity.orientation);
        for k in 0..3 {
            if im.axis_parity[k] {
                orient[k] = -orient[k];
            }
        }
        let spk = Directivity {
            pattern: speaker_directivity.pattern,
            orientation: [orient.x, orient.y, orient.z],
        };
        let spk_gain = spk.gain(&(-to_image));

        let delay = d / v * fs;
        let n0 = delay.round() as usize;
        let frac = delay - n0 as f64;
        let kernel = dsp::fractional_delay_kernel(frac, params.frac_delay_taps);
        let spread = 1.0 / (4.0 * std::f64::consts::PI * d);
        let base = spread * spk_gain * mic_gain;
        for b in 0..N_BANDS {
            let amp = base * im.band_gain[b] * air.factor(b, d);
            if amp == 0.0 {
                continue;
            }
            // Kernel peak sits at index half_kernel + frac, so starting the
            // kernel at n0 − half_kernel centers the tap at the true delay.
            let train = &mut band_trains[b];
            for (i, &k) in kernel.iter().enumerate() {
                let pos = n0 + i;
                if pos >= half_kernel {
                    if let Some(slot) = train.get_mut(pos - half_kernel) {
                        *slot += amp * k;
                    }
                }
            }
        }
    }

    // Ray-traced tail: band-limited noise shaped by the per-bin energy.
    if let Some(tail) = ray_tail {
        let mut rng = ChaCha8Rng::seed_from_u64(params.tail_seed);
        let normal = Normal::new(0.0, 1.0).unwrap();
        for (bin, energies) in tail.bins.iter().enumerate() {
            if bin >= len {
                break;
            }
            let noise: f64 = normal.sample(&mut rng);
            for b in 0..N_BANDS {
                if energies[b] > 0.0 {
                    band_trains[b][bin] += energies[b].sqrt() * noise;
                }
            }
        }
    }

    let bank = FilterBank::new(fs, params.filter_taps);
    let samples = bank.synthesize(&band_trains);
    debug_assert!(samples.iter().all(|s| s.is_finite()));

    Ok(Rir {
        samples,
        sample_rate_hz: fs,
        source_id: source_id.to_string(),
        mic_id: mic_id.to_string(),
    })
}
