//! Free Gaussian wave packet: the single-arm profile every density in this
//! crate is assembled from.
//!
//! The packet is kept in its rest frame at the moment of detection, so the
//! only parameters that matter are the spatial width `width` (the `1/e`
//! half-width of the profile, not the rms width), the group velocity
//! `velocity` used to convert arm delays into displacements, and the current
//! `center`. The profile is real and normalized so that the squared profile
//! integrates to one.

// Float-math methods come from the trait in `no_std` builds.
#[cfg(not(feature = "std"))]
use num_traits::Float;

use core::f64::consts::PI;
use core::fmt;

/// Construction errors for [`GaussianPacket`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PacketError {
    /// Width must be finite and strictly positive.
    InvalidWidth(f64),
    /// Velocity must be finite and strictly positive.
    InvalidVelocity(f64),
    /// Center must be finite.
    InvalidCenter(f64),
}

impl fmt::Display for PacketError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PacketError::InvalidWidth(w) => {
                write!(f, "packet width must be positive and finite, got {w}")
            }
            PacketError::InvalidVelocity(v) => {
                write!(f, "packet velocity must be positive and finite, got {v}")
            }
            PacketError::InvalidCenter(c) => write!(f, "packet center must be finite, got {c}"),
        }
    }
}

impl core::error::Error for PacketError {}

/// A normalized Gaussian profile `(pi width^2 / 2)^(-1/4) * exp(-(x - center)^2 / width^2)`.
///
/// `eval(x)^2` integrates to one over the real line for any valid parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    width: f64,
    velocity: f64,
    center: f64,
}

impl GaussianPacket {
    /// Packet of the given width and velocity, centered at the origin.
    pub fn new(width: f64, velocity: f64) -> Result<Self, PacketError> {
        Self::with_center(width, velocity, 0.0)
    }

    /// Packet with an explicit center.
    pub fn with_center(width: f64, velocity: f64, center: f64) -> Result<Self, PacketError> {
        if !width.is_finite() || width <= 0.0 {
            return Err(PacketError::InvalidWidth(width));
        }
        if !velocity.is_finite() || velocity <= 0.0 {
            return Err(PacketError::InvalidVelocity(velocity));
        }
        if !center.is_finite() {
            return Err(PacketError::InvalidCenter(center));
        }
        Ok(Self {
            width,
            velocity,
            center,
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn velocity(&self) -> f64 {
        self.velocity
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    /// Peak value of the profile, `(pi width^2 / 2)^(-1/4)`.
    pub fn peak_value(&self) -> f64 {
        (PI * self.width * self.width / 2.0).powf(-0.25)
    }

    /// The real profile at position `x`.
    ///
    /// # Panics
    ///
    /// Panics if `x` is not finite; positions are caller-controlled grid or
    /// quadrature nodes, so a non-finite value is a logic error upstream.
    pub fn eval(&self, x: f64) -> f64 {
        assert!(x.is_finite(), "packet evaluated at non-finite position {x}");
        let u = (x - self.center) / self.width;
        self.peak_value() * (-u * u).exp()
    }

    /// Squared profile `eval(x)^2`; the single-arm probability density.
    pub fn density(&self, x: f64) -> f64 {
        let g = self.eval(x);
        g * g
    }

    /// The same packet after spending an extra `delay` in flight: the center
    /// moves back by `velocity * delay` relative to the undelayed copy.
    ///
    /// # Panics
    ///
    /// Panics if the displaced center is not finite.
    pub fn shifted(&self, delay: f64) -> Self {
        let center = self.center - self.velocity * delay;
        assert!(
            center.is_finite(),
            "packet shifted to non-finite center {center}"
        );
        Self { center, ..*self }
    }
}
