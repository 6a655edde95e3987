//! Stochastic ray tracing producing a time-binned energy histogram at the
//! microphone detection sphere. Supports single-material rooms with
//! omnidirectional transducers only.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::Vec3;
use crate::scene::{Directivity, Room};

use super::image::{on_surface, plane_intersection, N_BANDS};
use super::{AirAbsorptionModel, PropagationError};

/// Energy arriving per time bin per band; bin width is one simulation sample.
#[derive(Debug, Clone)]
pub struct RayHistogram {
    pub bins: Vec<[f64; N_BANDS]>,
    pub bin_dt: f64,
}

impl RayHistogram {
    pub fn total_energy(&self) -> [f64; N_BANDS] {
        let mut sum = [0.0; N_BANDS];
        for bin in &self.bins {
            for b in 0..N_BANDS {
                sum[b] += bin[b];
            }
        }
        sum
    }
}

#[derive(Debug, Clone)]
pub struct RayParams {
    pub n_rays: usize,
    pub seed: u64,
    /// Microphone detection sphere radius in m.
    pub detection_radius: f64,
    /// Terminate a band when its reflection loss falls below this fraction.
    pub energy_cutoff: f64,
    /// Path length cap expressed as a time, typically an RT60 bound.
    pub max_path_seconds: f64,
    pub sample_rate: f64,
    pub speed_of_sound: f64,
}

impl Default for RayParams {
    fn default() -> Self {
        Self {
            n_rays: 100_000,
            seed: 0,
            detection_radius: 0.25,
            energy_cutoff: 1e-7,
            max_path_seconds: 2.0,
            sample_rate: 250_000.0,
            speed_of_sound: 343.0,
        }
    }
}

/// Probability that an isotropic ray from distance `d` crosses a sphere of
/// radius `r` (exact solid-angle fraction).
fn hit_probability(d: f64, r: f64) -> f64 {
    if d <= r {
        return 1.0;
    }
    (1.0 - (1.0 - (r / d) * (r / d)).sqrt()) / 2.0
}

pub fn trace_rays(
    room: &Room,
    source: &Vec3,
    mic: &Vec3,
    source_directivity: &Directivity,
    mic_directivity: &Directivity,
    air: &AirAbsorptionModel,
    params: &RayParams,
) -> Result<RayHistogram, PropagationError> {
    let first = room.surfaces[0].material.band_vector();
    if room
        .surfaces
        .iter()
        .any(|s| s.material.band_vector() != first)
    {
        return Err(PropagationError::MixedMaterialsUnsupported);
    }
    if source_directivity.pattern != 1.0 || mic_directivity.pattern != 1.0 {
        return Err(PropagationError::DirectionalTransducerUnsupported(
            "ray tracing",
        ));
    }
    if !room.contains(source) {
        return Err(PropagationError::SourceOutsideRoom);
    }

    let max_path = params.max_path_seconds * params.speed_of_sound;
    let n_bins = (params.max_path_seconds * params.sample_rate).ceil() as usize + 1;
    let mut bins = vec![[0.0; N_BANDS]; n_bins];
    let refl: Vec<f64> = first.iter().map(|a| 1.0 - a).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let r = params.detection_radius;

    for _ in 0..params.n_rays {
        // Uniform direction on the sphere.
        let z: f64 = rng.gen_range(-1.0..1.0f64);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let rho = (1.0 - z * z).sqrt();
        let mut dir = Vec3::new(rho * phi.cos(), rho * phi.sin(), z);

        let mut pos = *source;
        let mut traveled = 0.0;
        let mut refl_energy = [1.0f64; N_BANDS];

        loop {
            // Nearest surface hit along the ray.
            let far = pos + dir * (2.0 * max_path + 1.0);
            let mut t_hit = f64::INFINITY;
            let mut hit_surface = None;
            for s in &room.surfaces {
                if let Some(t) = plane_intersection(s, &pos, &far) {
                    if t > 1e-9 && t < t_hit {
                        let q = pos + t * (far - pos);
                        if on_surface(room, s, &q) {
                            t_hit = t;
                            hit_surface = Some(s);
                        }
                    }
                }
            }
            let Some(surface) = hit_surface else {
                break; // numerical escape through a corner
            };
            let seg_len = t_hit * (far - pos).norm();

            // Detection sphere crossing within this segment.
            let to_mic = mic - pos;
            let t_closest = to_mic.dot(&dir);
            if t_closest > 0.0 && t_closest < seg_len {
                let closest = pos + dir * t_closest;
                let miss = (mic - closest).norm();
                if miss < r {
                    let d_total = traveled + t_closest;
                    if d_total <= max_path {
                        let bin =
                            ((d_total / params.speed_of_sound) * params.sample_rate) as usize;
                        if bin < n_bins {
                            // Weight chosen so the expectation reproduces the
                            // image-source energy 1/(4πd)² per matching path.
                            let p_hit = hit_probability(d_total, r);
                            let spread = 1.0
                                / (16.0 * std::f64::consts::PI.powi(2)
                                    * d_total
                                    * d_total
                                    * p_hit
                                    * params.n_rays as f64);
                            for b in 0..N_BANDS {
                                let att = (-2.0 * air.coefficients[b] * d_total).exp();
                                bins[bin][b] += refl_energy[b] * att * spread;
                            }
                        }
                    }
                }
            }

            // Reflect.
            traveled += seg_len;
            if traveled > max_path {
                break;
            }
            pos += dir * seg_len;
            dir -= 2.0 * dir.dot(&surface.normal) * surface.normal;
            let mut alive = false;
            for b in 0..N_BANDS {
                refl_energy[b] *= refl[b];
                if refl_energy[b] >= params.energy_cutoff {
                    alive = true;
                }
            }
            if !alive {
                break;
            }
            // Nudge off the surface to avoid re-hitting it.
            pos += dir * 1e-9;
        }
    }

    Ok(RayHistogram {
        bins,
        bin_dt: 1.0 / params.sample_rate,
    })
}
