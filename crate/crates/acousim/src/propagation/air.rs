//! Atmospheric absorption from the classical + relaxation analytic model.
//!
//! The model follows the ISO 9613-1 formulation (oxygen and nitrogen
//! relaxation plus classical viscous losses) at 1 atm, which stays valid
//! through the ultrasonic range used here (up to 50 kHz).

use thiserror::Error;

use crate::scene::{Environment, OCTAVE_BANDS};

#[derive(Debug, Error)]
pub enum AirError {
    #[error("frequency {0} Hz outside the supported 125 Hz – 50 kHz range")]
    BandOutOfRange(f64),
}

/// Absorption coefficient α_abs in Np/m at one frequency.
pub fn air_absorption_coefficient(
    band_hz: f64,
    temperature_c: f64,
    relative_humidity: f64,
) -> Result<f64, AirError> {
    if !(125.0..=50_000.0).contains(&band_hz) {
        return Err(AirError::BandOutOfRange(band_hz));
    }
    let t = temperature_c + 273.15;
    let t0 = 293.15;
    let t01 = 273.16;

    // Saturation vapor pressure ratio and molar water concentration in %.
    let c = -6.8346 * (t01 / t).powf(1.261) + 4.6151;
    let psat = 10f64.powf(c);
    let h = relative_humidity * 100.0 * psat;

    let fr_o = 24.0 + 4.04e4 * h * (0.02 + h) / (0.391 + h);
    let fr_n = (t / t0).powf(-0.5)
        * (9.0 + 280.0 * h * (-4.170 * ((t / t0).powf(-1.0 / 3.0) - 1.0)).exp());

    let f2 = band_hz * band_hz;
    // Bracketed term of the ISO expression; multiplying by 8.686·f² gives
    // dB/m, so f² times the bracket is directly Np/m.
    let classical = 1.84e-11 * (t / t0).sqrt();
    let relaxation = (t / t0).powf(-2.5)
        * (0.01275 * (-2239.1 / t).exp() / (fr_o + f2 / fr_o)
            + 0.1068 * (-3352.0 / t).exp() / (fr_n + f2 / fr_n));
    Ok(f2 * (classical + relaxation))
}

/// Amplitude attenuation factor exp(−α·d) over distance d.
pub fn air_absorption_factor(alpha_np_per_m: f64, distance_m: f64) -> f64 {
    debug_assert!(alpha_np_per_m >= 0.0 && distance_m >= 0.0);
    (-alpha_np_per_m * distance_m).exp()
}

/// Per-octave-band absorption coefficients for an environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AirAbsorptionModel {
    pub coefficients: [f64; OCTAVE_BANDS.len()],
}

impl AirAbsorptionModel {
    pub fn new(env: &Environment) -> Self {
        let mut coefficients = [0.0; OCTAVE_BANDS.len()];
        for (i, &f) in OCTAVE_BANDS.iter().enumerate() {
            coefficients[i] =
                air_absorption_coefficient(f, env.temperature_c, env.relative_humidity)
                    .expect("octave bands are within the model range");
        }
        Self { coefficients }
    }

    /// A lossless-air model, for free-field tests and disabled absorption.
    pub fn disabled() -> Self {
        Self {
            coefficients: [0.0; OCTAVE_BANDS.len()],
        }
    }

    pub fn factor(&self, band: usize, distance_m: f64) -> f64 {
        air_absorption_factor(self.coefficients[band], distance_m)
    }
}
