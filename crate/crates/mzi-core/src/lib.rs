//! Core numerics for a two-arm interferometer acting on a Gaussian wave packet.
//!
//! One arm is delayed by `tau` relative to the other, so the packet leaves a
//! detection port as a superposition of two copies of itself separated by
//! `v * tau`. Everything downstream — port densities, detection
//! probabilities, peak and centroid observables, designer amplitudes that
//! place the density peak away from both copies — is built from that picture.
//!
//! The crate is `no_std`-compatible (`alloc` is required): disable the
//! default `std` feature and enable `libm` to get float math in freestanding
//! builds.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("enable either the `std` or the `libm` feature");

extern crate alloc;

pub mod amplitudes;
pub mod analysis;
pub mod density;
pub mod numeric;
pub mod wavepacket;

pub use num_complex::Complex64;
