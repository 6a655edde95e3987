//! Indoor acoustic/ultrasonic simulation and positioning evaluation toolkit.
//!
//! The library is organized along the four pipeline stages:
//! room and transducer modeling ([`scene`]), physical propagation and RIR
//! synthesis ([`propagation`]), received-signal post-processing ([`signal`]),
//! position estimation ([`positioning`]) and result evaluation
//! ([`evaluation`]). The [`pipeline`] module ties them together behind a
//! single TOML configuration with per-stage content-addressed caching.

pub mod geom;
pub mod scene;

pub use geom::Vec3;
