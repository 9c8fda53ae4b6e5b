//! Detected densities at an interferometer port and their closed-form
//! observables.
//!
//! A port sees `a1 * G(x) + a2 * G(x + v*tau)`: the undelayed copy of the
//! packet weighted by `a1` plus the delayed copy, displaced upstream by the
//! pointer shift `v*tau`, weighted by `a2`. The squared modulus of that sum
//! is evaluated through its three-term expansion (two single-copy terms plus
//! the interference term), and the detection probability, centroid and
//! wide-packet asymptote all come from Gaussian overlap integrals that are
//! known in closed form.

use num_complex::Complex64;
// Float-math methods come from the trait in `no_std` builds.
#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::vec::Vec;

use core::f64::consts::PI;
use core::fmt;

use crate::numeric::trapezoid;
use crate::wavepacket::{GaussianPacket, PacketError};

/// Tolerance on the amplitude budget `|a1|^2 + |a2|^2 <= 1` of one port.
pub const AMPLITUDE_BUDGET_TOL: f64 = 1e-12;

/// A port is dark when `|a1 + a2|` falls below this; the wide-packet peak is
/// undefined there.
pub const DARK_PORT_TOL: f64 = 1e-14;

/// Detection probabilities below this are treated as a dark port when they
/// appear in a denominator.
pub const VANISHING_NORM_TOL: f64 = 1e-15;

/// Errors from density construction and evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityError {
    /// Underlying packet was invalid.
    Packet(PacketError),
    /// Port amplitudes must be finite.
    NonFiniteAmplitude,
    /// `|a1|^2 + |a2|^2` exceeds one beyond [`AMPLITUDE_BUDGET_TOL`].
    AmplitudeBudget { total: f64 },
    /// Arm delay must be finite and non-negative.
    InvalidDelay(f64),
    /// Detection probability fell outside `[0, 1]` beyond tolerance; the
    /// amplitude pair cannot come from a conserving configuration.
    InvalidProbability { value: f64 },
    /// Denominator probability is numerically zero: the port is dark.
    VanishingNorm { probability: f64 },
    /// `|a1 + a2|` is numerically zero: no wide-packet peak exists.
    DarkPort,
    /// Requested tail formula outside its regime.
    WrongRegime(&'static str),
    /// A superposition needs at least one term.
    EmptySuperposition,
    /// Tabulated profile input was malformed.
    BadSamples(&'static str),
}

impl fmt::Display for DensityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityError::Packet(e) => write!(f, "{e}"),
            DensityError::NonFiniteAmplitude => write!(f, "port amplitudes must be finite"),
            DensityError::AmplitudeBudget { total } => {
                write!(
                    f,
                    "port amplitude budget |a1|^2 + |a2|^2 = {total} exceeds 1"
                )
            }
            DensityError::InvalidDelay(tau) => {
                write!(f, "arm delay must be finite and non-negative, got {tau}")
            }
            DensityError::InvalidProbability { value } => write!(
                f,
                "detection probability {value} is outside [0, 1]; amplitude pair is not conserving"
            ),
            DensityError::VanishingNorm { probability } => {
                write!(
                    f,
                    "port is dark (detection probability {probability}); observable undefined"
                )
            }
            DensityError::DarkPort => {
                write!(
                    f,
                    "port amplitudes cancel (|a1 + a2| ~ 0); wide-packet peak undefined"
                )
            }
            DensityError::WrongRegime(what) => write!(f, "{what}"),
            DensityError::EmptySuperposition => write!(f, "superposition needs at least one term"),
            DensityError::BadSamples(what) => write!(f, "{what}"),
        }
    }
}

impl core::error::Error for DensityError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            DensityError::Packet(e) => Some(e),
            _ => None,
        }
    }
}

impl From<PacketError> for DensityError {
    fn from(e: PacketError) -> Self {
        DensityError::Packet(e)
    }
}

/// One detection port of the interferometer: an amplitude pair, the packet,
/// and the arm delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPathConfig {
    a1: Complex64,
    a2: Complex64,
    packet: GaussianPacket,
    delay: f64,
}

impl TwoPathConfig {
    /// Validates the amplitude budget of the port and the delay sign. The
    /// budget may be below one: the remainder belongs to the other port.
    pub fn new(
        a1: Complex64,
        a2: Complex64,
        packet: GaussianPacket,
        delay: f64,
    ) -> Result<Self, DensityError> {
        if !(a1.re.is_finite() && a1.im.is_finite() && a2.re.is_finite() && a2.im.is_finite()) {
            return Err(DensityError::NonFiniteAmplitude);
        }
        let total = a1.norm_sqr() + a2.norm_sqr();
        if total > 1.0 + AMPLITUDE_BUDGET_TOL {
            return Err(DensityError::AmplitudeBudget { total });
        }
        if !delay.is_finite() || delay < 0.0 {
            return Err(DensityError::InvalidDelay(delay));
        }
        Ok(Self {
            a1,
            a2,
            packet,
            delay,
        })
    }

    pub fn a1(&self) -> Complex64 {
        self.a1
    }

    pub fn a2(&self) -> Complex64 {
        self.a2
    }

    pub fn packet(&self) -> &GaussianPacket {
        &self.packet
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }

    /// Pointer shift between the two copies.
    pub fn v_tau(&self) -> f64 {
        self.packet.velocity() * self.delay
    }

    /// Complex port amplitude `a1 * G(x) + a2 * G(x + v*tau)`.
    pub fn amplitude(&self, x: f64) -> Complex64 {
        let g1 = self.packet.eval(x);
        let g2 = self.packet.eval(x + self.v_tau());
        self.a1 * g1 + self.a2 * g2
    }

    /// Port density via the three-term expansion
    /// `|a1|^2 G^2 + |a2|^2 G'^2 + 2 Re[conj(a2) a1] G G'`,
    /// clamped at zero against rounding dust near destructive nodes.
    pub fn density(&self, x: f64) -> f64 {
        let g1 = self.packet.eval(x);
        let g2 = self.packet.eval(x + self.v_tau());
        let d = self.a1.norm_sqr() * g1 * g1
            + self.a2.norm_sqr() * g2 * g2
            + 2.0 * (self.a2.conj() * self.a1).re * g1 * g2;
        d.max(0.0)
    }

    /// Single-copy reference density `G(x)^2` of the undelayed arm.
    pub fn free_density(&self, x: f64) -> f64 {
        self.packet.density(x)
    }

    /// Gaussian overlap of the two copies, `exp(-(v*tau)^2 / (2 width^2))`.
    fn overlap(&self) -> f64 {
        let s = self.v_tau() / self.packet.width();
        (-0.5 * s * s).exp()
    }

    fn raw_probability(&self) -> f64 {
        self.a1.norm_sqr()
            + self.a2.norm_sqr()
            + 2.0 * (self.a2.conj() * self.a1).re * self.overlap()
    }

    /// Total probability detected at this port,
    /// `|a1|^2 + |a2|^2 + 2 Re[conj(a2) a1] exp(-(v tau)^2 / 2 width^2)`.
    ///
    /// Values outside `[0, 1]` beyond tolerance mean the pair cannot belong
    /// to any conserving four-amplitude configuration and are rejected.
    pub fn detection_probability(&self) -> Result<f64, DensityError> {
        let p = self.raw_probability();
        if !(-AMPLITUDE_BUDGET_TOL..=1.0 + AMPLITUDE_BUDGET_TOL).contains(&p) {
            return Err(DensityError::InvalidProbability { value: p });
        }
        Ok(p.clamp(0.0, 1.0))
    }

    /// Centroid of the port density (not renormalized by the peak
    /// convention):
    /// `-v tau (|a2|^2 + Re[conj(a2) a1] overlap) / probability`.
    pub fn mean_position(&self) -> Result<f64, DensityError> {
        let p = self.raw_probability();
        if p <= VANISHING_NORM_TOL {
            return Err(DensityError::VanishingNorm { probability: p });
        }
        let numerator = self.a2.norm_sqr() + (self.a2.conj() * self.a1).re * self.overlap();
        Ok(self.packet.center() - self.v_tau() * numerator / p)
    }

    /// Wide-packet peak position; see [`asymptotic_peak`].
    pub fn asymptotic_peak(&self) -> Result<f64, DensityError> {
        Ok(self.packet.center() + asymptotic_peak(self.a1, self.a2, self.v_tau())?)
    }

    /// Wide-packet density; see [`asymptotic_density`].
    pub fn asymptotic_density(&self, x: f64) -> Result<f64, DensityError> {
        asymptotic_density(
            x - self.packet.center(),
            self.a1,
            self.a2,
            self.v_tau(),
            self.packet.width(),
        )
    }

    /// Window guaranteed to hold all of the port's probability mass to below
    /// quadrature tolerance: twelve widths beyond the outermost copy centers.
    pub fn quadrature_window(&self) -> (f64, f64) {
        let c = self.packet.center();
        let w = 12.0 * self.packet.width();
        (c - self.v_tau() - w, c + w)
    }
}

/// Peak position of the wide-packet density, `-Re[v tau a2 / (a1 + a2)]`.
///
/// Unlike the centroid this can sit ahead of both copies or behind the
/// delayed one; it is the position an actual peak search converges to as the
/// width grows.
pub fn asymptotic_peak(a1: Complex64, a2: Complex64, v_tau: f64) -> Result<f64, DensityError> {
    let sum = a1 + a2;
    if sum.norm_sqr() <= DARK_PORT_TOL * DARK_PORT_TOL {
        return Err(DensityError::DarkPort);
    }
    Ok(-v_tau * (a2 / sum).re)
}

/// Wide-packet limit of the port density: a single Gaussian bump of the
/// packet's own width, centered on [`asymptotic_peak`] and carrying mass
/// `|a1 + a2|^2`:
/// `|a1 + a2|^2 (pi width^2 / 2)^(-1/2) exp(-2 (x - peak)^2 / width^2)`.
pub fn asymptotic_density(
    x: f64,
    a1: Complex64,
    a2: Complex64,
    v_tau: f64,
    width: f64,
) -> Result<f64, DensityError> {
    let peak = asymptotic_peak(a1, a2, v_tau)?;
    let mass = (a1 + a2).norm_sqr();
    let u = (x - peak) / width;
    Ok(mass * (PI * width * width / 2.0).powf(-0.5) * (-2.0 * u * u).exp())
}

/// Density over the single-copy reference, `P(x) / G(x)^2`, for a port whose
/// wide-packet peak sits ahead of both copies:
/// `|a1|^2 (1 - beta exp(-v tau (2x + v tau) / width^2))^2` with
/// `beta = peak / (peak + v tau)`.
///
/// Strictly below one for every `x > 0`: the advanced peak never lifts the
/// front tail above the free packet's.
pub fn tail_ratio_front(cfg: &TwoPathConfig, x: f64) -> Result<f64, DensityError> {
    let peak = cfg.asymptotic_peak()?;
    if peak <= 0.0 {
        return Err(DensityError::WrongRegime(
            "front tail formula needs an advanced peak (> 0)",
        ));
    }
    let v_tau = cfg.v_tau();
    let beta = peak / (peak + v_tau);
    let w = cfg.packet().width();
    let g_ratio = (-v_tau * (2.0 * x + v_tau) / (w * w)).exp();
    let t = 1.0 - beta * g_ratio;
    Ok(cfg.a1().norm_sqr() * t * t)
}

/// Density over the delayed-copy reference, `P(x) / G(x + v tau)^2`, for a
/// port whose wide-packet peak sits behind the delayed copy:
/// `|a2|^2 (1 - gamma exp(v tau (2x + v tau) / width^2))^2` with
/// `gamma = (|peak| - v tau) / |peak|`.
///
/// Strictly below one for every `x < -v tau`: the delayed peak never lifts
/// the rear tail above the delayed copy's own.
pub fn tail_ratio_rear(cfg: &TwoPathConfig, x: f64) -> Result<f64, DensityError> {
    let peak = cfg.asymptotic_peak()?;
    if peak >= 0.0 {
        return Err(DensityError::WrongRegime(
            "rear tail formula needs a delayed peak (< 0)",
        ));
    }
    let v_tau = cfg.v_tau();
    let magnitude = -peak;
    let gamma = (magnitude - v_tau) / magnitude;
    let w = cfg.packet().width();
    let g_ratio = (v_tau * (2.0 * x + v_tau) / (w * w)).exp();
    let t = 1.0 - gamma * g_ratio;
    Ok(cfg.a2().norm_sqr() * t * t)
}

/// A superposition of arbitrarily many delayed copies,
/// `sum_k a_k G(x + shift_k)`, generalizing the two-path port.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionSpec {
    terms: Vec<(Complex64, f64)>,
    packet: GaussianPacket,
}

impl SuperpositionSpec {
    /// `terms` are `(amplitude, shift)` pairs with non-negative finite
    /// shifts (`shift = v * tau_k` for a delay `tau_k`).
    pub fn new(terms: Vec<(Complex64, f64)>, packet: GaussianPacket) -> Result<Self, DensityError> {
        if terms.is_empty() {
            return Err(DensityError::EmptySuperposition);
        }
        for &(a, s) in &terms {
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(DensityError::NonFiniteAmplitude);
            }
            if !s.is_finite() || s < 0.0 {
                return Err(DensityError::InvalidDelay(s));
            }
        }
        Ok(Self { terms, packet })
    }

    /// The two-path port as a superposition.
    pub fn two_path(cfg: &TwoPathConfig) -> Self {
        Self {
            terms: alloc::vec![(cfg.a1(), 0.0), (cfg.a2(), cfg.v_tau())],
            packet: *cfg.packet(),
        }
    }

    pub fn terms(&self) -> &[(Complex64, f64)] {
        &self.terms
    }

    pub fn packet(&self) -> &GaussianPacket {
        &self.packet
    }

    pub fn amplitude(&self, x: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for &(a, s) in &self.terms {
            total += a * self.packet.eval(x + s);
        }
        total
    }

    pub fn density(&self, x: f64) -> f64 {
        self.amplitude(x).norm_sqr()
    }

    /// Wide-packet peak of the superposition,
    /// `-Re[sum_k a_k shift_k / sum_k a_k]`; the two-term case reduces to
    /// [`asymptotic_peak`].
    pub fn weighted_peak(&self) -> Result<f64, DensityError> {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut weighted = Complex64::new(0.0, 0.0);
        for &(a, s) in &self.terms {
            sum += a;
            weighted += a * s;
        }
        if sum.norm_sqr() <= DARK_PORT_TOL * DARK_PORT_TOL {
            return Err(DensityError::DarkPort);
        }
        Ok(self.packet.center() - (weighted / sum).re)
    }

    /// Window twelve widths beyond the outermost copy centers.
    pub fn quadrature_window(&self) -> (f64, f64) {
        let mut max_shift: f64 = 0.0;
        let mut min_shift = f64::INFINITY;
        for &(_, s) in &self.terms {
            max_shift = max_shift.max(s);
            min_shift = min_shift.min(s);
        }
        let c = self.packet.center();
        let w = 12.0 * self.packet.width();
        (c - max_shift - w, c - min_shift + w)
    }
}

/// A density tabulated on a strictly increasing grid, with its trapezoid
/// mass.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    positions: Vec<f64>,
    values: Vec<f64>,
    mass: f64,
}

impl DensityProfile {
    /// Samples `f` on `n >= 2` equally spaced points over `[lo, hi]`.
    pub fn sample<F: Fn(f64) -> f64>(
        f: F,
        lo: f64,
        hi: f64,
        n: usize,
    ) -> Result<Self, DensityError> {
        if n < 2 {
            return Err(DensityError::BadSamples(
                "profile needs at least two samples",
            ));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(DensityError::BadSamples(
                "profile window must be finite and ordered",
            ));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let positions: Vec<f64> = (0..n).map(|i| lo + h * i as f64).collect();
        let values: Vec<f64> = positions.iter().map(|&x| f(x)).collect();
        Self::from_columns(positions, values)
    }

    /// Wraps existing columns, validating shape and finiteness.
    pub fn from_columns(positions: Vec<f64>, values: Vec<f64>) -> Result<Self, DensityError> {
        if positions.len() != values.len() {
            return Err(DensityError::BadSamples(
                "position and value columns differ in length",
            ));
        }
        if positions.len() < 2 {
            return Err(DensityError::BadSamples(
                "profile needs at least two samples",
            ));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DensityError::BadSamples(
                "positions must be strictly increasing",
            ));
        }
        if positions
            .iter()
            .chain(values.iter())
            .any(|v| !v.is_finite())
        {
            return Err(DensityError::BadSamples("profile samples must be finite"));
        }
        if values.iter().any(|&v| v < 0.0) {
            return Err(DensityError::BadSamples(
                "density samples must be non-negative",
            ));
        }
        let mass = trapezoid(&positions, &values);
        Ok(Self {
            positions,
            values,
            mass,
        })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Trapezoid mass of the tabulated density.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Grid position and value of the largest sample.
    pub fn peak(&self) -> (f64, f64) {
        let mut best = 0;
        for i in 1..self.values.len() {
            if self.values[i] > self.values[best] {
                best = i;
            }
        }
        (self.positions[best], self.values[best])
    }

    /// Same grid rescaled to unit trapezoid mass.
    pub fn normalized(&self) -> Result<Self, DensityError> {
        if self.mass <= VANISHING_NORM_TOL {
            return Err(DensityError::VanishingNorm {
                probability: self.mass,
            });
        }
        let values: Vec<f64> = self.values.iter().map(|v| v / self.mass).collect();
        let mass = trapezoid(&self.positions, &values);
        Ok(Self {
            positions: self.positions.clone(),
            values,
            mass,
        })
    }
}
