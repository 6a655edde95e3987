//! Physical simulation stage: sound speed, air absorption, image-source
//! enumeration, stochastic ray tracing and band-wise RIR synthesis.

pub mod air;
pub mod filterbank;
pub mod image;
pub mod ray;
pub mod rir;
pub mod sim;

use thiserror::Error;

pub use air::{air_absorption_coefficient, air_absorption_factor, AirAbsorptionModel};
pub use image::{enumerate_images_general, enumerate_images_shoebox, ImageSource};
pub use ray::{trace_rays, RayHistogram, RayParams};
pub use rir::{synthesize_rir, Rir, RirParams};
pub use sim::{simulate_room, SimMode, SimulatedChannel};

#[derive(Debug, Error)]
pub enum PropagationError {
    #[error(transparent)]
    Air(#[from] air::AirError),
    #[error("microphone coincides with an image source position")]
    MicAtImagePosition,
    #[error("ray tracing requires a single shared material on all surfaces")]
    MixedMaterialsUnsupported,
    #[error("directional transducer unsupported in this mode: {0}")]
    DirectionalTransducerUnsupported(&'static str),
    #[error("source position is outside the room")]
    SourceOutsideRoom,
}

/// Speed of sound in air at temperature θ (°C): 331.3·√((273.15+θ)/273.15).
pub fn speed_of_sound(temperature_c: f64) -> f64 {
    331.3 * ((273.15 + temperature_c) / 273.15).sqrt()
}

/// Amplitude of a wave after reflecting off a material with energy
/// absorption α: A·√(1−α).
pub fn reflection_amplitude(a_incident: f64, alpha_material: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&alpha_material));
    a_incident * (1.0 - alpha_material).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn speed_of_sound_values() {
        assert_relative_eq!(speed_of_sound(0.0), 331.3, epsilon = 1e-12);
        assert_relative_eq!(
            speed_of_sound(25.0),
            331.3 * (298.15f64 / 273.15).sqrt(),
            epsilon = 1e-12
        );
        assert_relative_eq!(speed_of_sound(25.0), 346.13, epsilon = 0.01);
    }

    #[test]
    fn reflection_amplitude_cases() {
        assert_relative_eq!(reflection_amplitude(0.8, 0.0), 0.8);
        assert_relative_eq!(reflection_amplitude(0.8, 1.0), 0.0);
        assert_relative_eq!(reflection_amplitude(1.0, 0.43), 0.57f64.sqrt());
        assert_relative_eq!(reflection_amplitude(1.0, 0.43), 0.7550, epsilon = 1e-4);
    }
}
