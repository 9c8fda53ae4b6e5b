//! Path amplitudes for the two-arm interferometer and the designer maps that
//! produce them.
//!
//! A run is described by four complex path amplitudes: `a1`, `a2` feed the
//! bright detector, `a3`, `a4` the complementary one. Probability
//! conservation fixes `|a1|^2 + |a2|^2 + |a3|^2 + |a4|^2 = 1` together with
//! the port form `a1 * conj(a2) + a3 * conj(a4) = 0`, which is what makes the
//! two detection probabilities sum to one independent of the arm delay.
//!
//! The designer maps run the construction backwards: given the pointer shift
//! `-v*tau` of the delayed copy and a requested peak position, they return
//! amplitudes whose detected density peaks there — including positions ahead
//! of both copies or behind the delayed one.

use num_complex::Complex64;
// Float-math methods come from the trait in `no_std` builds.
#[cfg(not(feature = "std"))]
use num_traits::Float;

use core::fmt;

/// Absolute tolerance on the conservation residuals of a [`PathSet`].
pub const CONSERVATION_TOL: f64 = 1e-12;

/// Tolerance on the norm of a [`QubitState`] accepted by [`QubitState::new`].
pub const NORM_TOL: f64 = 1e-12;

/// Tolerance on the orthonormality residual accepted by
/// [`amplitudes_from_states`]. Looser than [`NORM_TOL`] so that states read
/// back from 12-digit text still pass.
pub const ORTHONORMALITY_TOL: f64 = 1e-9;

/// Errors from amplitude construction and the designer maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmplitudeError {
    /// Pointer shift must be finite and nonzero.
    InvalidShift(f64),
    /// Requested peak must be finite.
    InvalidPeak(f64),
    /// Requested peak coincides with the pointer shift; the designer map has
    /// a pole there.
    SingularTarget { shift: f64, peak: f64 },
    /// State vector norm differs from one by more than [`NORM_TOL`].
    NotNormalized { norm_sq: f64 },
    /// Cannot normalize the zero vector.
    ZeroState,
    /// Preselection has a vanishing component, so no postselection can route
    /// both slits to a detector.
    DegeneratePreselection,
    /// Postselection pair is not orthonormal within [`ORTHONORMALITY_TOL`].
    NotOrthonormal { residual: f64 },
    /// Ratio formulas need strictly positive, finite inputs.
    OutOfDomain(&'static str),
    /// Rear-of-both-copies peaks diverge when the requested magnitude equals
    /// the copy separation.
    DelayPole { peak_magnitude: f64, v_tau: f64 },
}

impl fmt::Display for AmplitudeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmplitudeError::InvalidShift(y) => {
                write!(f, "pointer shift must be finite and nonzero, got {y}")
            }
            AmplitudeError::InvalidPeak(z) => write!(f, "peak target must be finite, got {z}"),
            AmplitudeError::SingularTarget { shift, peak } => write!(
                f,
                "peak target {peak} coincides with the pointer shift {shift}; designer map is singular there"
            ),
            AmplitudeError::NotNormalized { norm_sq } => {
                write!(f, "state norm^2 is {norm_sq}, expected 1")
            }
            AmplitudeError::ZeroState => write!(f, "cannot normalize the zero state"),
            AmplitudeError::DegeneratePreselection => {
                write!(f, "preselection has a zero component; both slits must be populated")
            }
            AmplitudeError::NotOrthonormal { residual } => {
                write!(f, "postselection pair is not orthonormal (residual {residual})")
            }
            AmplitudeError::OutOfDomain(what) => write!(f, "{what}"),
            AmplitudeError::DelayPole { peak_magnitude, v_tau } => write!(
                f,
                "peak magnitude {peak_magnitude} sits on the pole at the copy separation {v_tau}"
            ),
        }
    }
}

impl core::error::Error for AmplitudeError {}

/// Conservation residuals of a [`PathSet`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationReport {
    /// `| sum |a_i|^2 - 1 |`.
    pub budget_residual: f64,
    /// `| a1 * conj(a2) + a3 * conj(a4) |`.
    pub port_residual: f64,
}

impl ConservationReport {
    /// Both residuals within `tol`. A set that satisfies only the budget form
    /// does not conserve probability port by port and is not accepted.
    pub fn is_conserving(&self, tol: f64) -> bool {
        self.budget_residual <= tol && self.port_residual <= tol
    }
}

/// The four path amplitudes of one interferometer configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSet {
    pub a1: Complex64,
    pub a2: Complex64,
    pub a3: Complex64,
    pub a4: Complex64,
}

impl PathSet {
    pub fn new(a1: Complex64, a2: Complex64, a3: Complex64, a4: Complex64) -> Self {
        Self { a1, a2, a3, a4 }
    }

    /// Amplitude pair feeding the bright detector.
    pub fn d1_pair(&self) -> (Complex64, Complex64) {
        (self.a1, self.a2)
    }

    /// Amplitude pair feeding the complementary detector.
    pub fn d2_pair(&self) -> (Complex64, Complex64) {
        (self.a3, self.a4)
    }

    pub fn conservation(&self) -> ConservationReport {
        let budget =
            self.a1.norm_sqr() + self.a2.norm_sqr() + self.a3.norm_sqr() + self.a4.norm_sqr();
        let port = self.a1 * self.a2.conj() + self.a3 * self.a4.conj();
        ConservationReport {
            budget_residual: (budget - 1.0).abs(),
            port_residual: port.norm_sqr().sqrt(),
        }
    }

    /// Both conservation forms hold within [`CONSERVATION_TOL`].
    pub fn is_conserving(&self) -> bool {
        self.conservation().is_conserving(CONSERVATION_TOL)
    }
}

/// A normalized two-component state, stored in the slit basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    c1: Complex64,
    c2: Complex64,
}

impl QubitState {
    /// Accepts components whose norm is already one within [`NORM_TOL`].
    pub fn new(c1: Complex64, c2: Complex64) -> Result<Self, AmplitudeError> {
        let norm_sq = c1.norm_sqr() + c2.norm_sqr();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(AmplitudeError::NotNormalized { norm_sq });
        }
        Ok(Self { c1, c2 })
    }

    /// Rescales arbitrary components to unit norm and removes the global
    /// phase, making the first nonzero component real and positive. This is
    /// the canonical form used when states are read from user input, so that
    /// physically identical inputs produce identical output bytes.
    pub fn normalized(c1: Complex64, c2: Complex64) -> Result<Self, AmplitudeError> {
        let norm_sq = c1.norm_sqr() + c2.norm_sqr();
        if !norm_sq.is_finite() {
            return Err(AmplitudeError::NotNormalized { norm_sq });
        }
        if norm_sq < 1e-300 {
            return Err(AmplitudeError::ZeroState);
        }
        let inv = 1.0 / norm_sq.sqrt();
        let (c1, c2) = (c1 * inv, c2 * inv);
        let (c1, c2) = if c1.norm_sqr() > 0.0 {
            let phase = c1 / Complex64::new(c1.norm_sqr().sqrt(), 0.0);
            (Complex64::new(c1.norm_sqr().sqrt(), 0.0), c2 * phase.conj())
        } else {
            (c1, Complex64::new(c2.norm_sqr().sqrt(), 0.0))
        };
        Ok(Self { c1, c2 })
    }

    /// Component on the first slit.
    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    /// Component on the second slit.
    pub fn c2(&self) -> Complex64 {
        self.c2
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.c1.conj() * other.c1 + self.c2.conj() * other.c2
    }
}

/// Where the detected density peak should sit, in the detection-plane
/// coordinate where the undelayed copy is centered at the origin and the
/// delayed copy at the pointer shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignTarget {
    pointer_shift: f64,
    peak_target: f64,
}

impl DesignTarget {
    /// `pointer_shift` is the center of the delayed copy (`-v*tau`, so
    /// negative for a positive delay); `peak_target` is the requested peak
    /// position. The map is singular when the two coincide.
    pub fn new(pointer_shift: f64, peak_target: f64) -> Result<Self, AmplitudeError> {
        if !pointer_shift.is_finite() || pointer_shift == 0.0 {
            return Err(AmplitudeError::InvalidShift(pointer_shift));
        }
        if !peak_target.is_finite() {
            return Err(AmplitudeError::InvalidPeak(peak_target));
        }
        if (peak_target - pointer_shift).abs() <= 1e-9 * pointer_shift.abs().max(1.0) {
            return Err(AmplitudeError::SingularTarget {
                shift: pointer_shift,
                peak: peak_target,
            });
        }
        Ok(Self {
            pointer_shift,
            peak_target,
        })
    }

    pub fn pointer_shift(&self) -> f64 {
        self.pointer_shift
    }

    pub fn peak_target(&self) -> f64 {
        self.peak_target
    }

    /// The amplitude ratio `a2 / a1 = peak / (shift - peak)` realizing the
    /// target in the wide-packet limit.
    pub fn amplitude_ratio(&self) -> f64 {
        self.peak_target / (self.pointer_shift - self.peak_target)
    }
}

/// Real, conserving amplitudes that put the wide-packet density peak of the
/// bright port at the target position.
///
/// The set is the symmetric-preselection special case: `a3 = a2` and
/// `a4 = -a1`, so both conservation forms hold by construction.
pub fn design_symmetric(target: &DesignTarget) -> PathSet {
    let q = target.amplitude_ratio();
    let a1 = 1.0 / (2.0 * (1.0 + q * q)).sqrt();
    let a2 = q * a1;
    PathSet::new(
        Complex64::new(a1, 0.0),
        Complex64::new(a2, 0.0),
        Complex64::new(a2, 0.0),
        Complex64::new(-a1, 0.0),
    )
}

/// Orthonormal postselection pair realizing the target peak for an arbitrary
/// preselection with both slit components nonzero.
///
/// Returns `(d1, d2)`: `d1` is the bright-port state, `d2` spans the rest of
/// the qubit space. The residual overall phase of `d2` is chosen so that all
/// four path amplitudes of [`amplitudes_from_states`] come out real, which
/// also collapses the pair to [`design_symmetric`] for a balanced real
/// preselection.
pub fn design_states(
    pre: &QubitState,
    target: &DesignTarget,
) -> Result<(QubitState, QubitState), AmplitudeError> {
    let c1 = pre.c1();
    let c2 = pre.c2();
    if c1.norm_sqr() < 1e-300 || c2.norm_sqr() < 1e-300 {
        return Err(AmplitudeError::DegeneratePreselection);
    }
    let q = target.amplitude_ratio();
    let inv_n = 1.0 / (1.0 / c1.norm_sqr() + q * q / c2.norm_sqr()).sqrt();
    let d1c1 = Complex64::new(inv_n, 0.0) / c1.conj();
    let d1c2 = Complex64::new(inv_n * q, 0.0) / c2.conj();
    // d2 is the orthogonal complement; its free overall phase is set to the
    // product of the preselection phases so the port-2 amplitudes are real.
    let twist = (c1 / c1.norm_sqr().sqrt()) * (c2 / c2.norm_sqr().sqrt());
    let d2c1 = d1c2.conj() * twist;
    let d2c2 = -d1c1.conj() * twist;
    Ok((QubitState::new(d1c1, d1c2)?, QubitState::new(d2c1, d2c2)?))
}

/// Path amplitudes of a full pre/postselection triple:
/// `a1 = <d1|slit1><slit1|pre>` and so on.
pub fn amplitudes_from_states(
    pre: &QubitState,
    d1: &QubitState,
    d2: &QubitState,
) -> Result<PathSet, AmplitudeError> {
    let residual = (d1.inner(d1).re - 1.0)
        .abs()
        .max((d2.inner(d2).re - 1.0).abs())
        .max(d1.inner(d2).norm_sqr().sqrt());
    if residual > ORTHONORMALITY_TOL {
        return Err(AmplitudeError::NotOrthonormal { residual });
    }
    Ok(PathSet::new(
        d1.c1.conj() * pre.c1,
        d1.c2.conj() * pre.c2,
        d2.c1.conj() * pre.c1,
        d2.c2.conj() * pre.c2,
    ))
}

/// Amplitude ratio `a2 / a1` that places the wide-packet peak a distance
/// `peak` ahead of the undelayed copy: `-peak / (peak + v_tau)`.
pub fn ratio_for_advancement(peak: f64, v_tau: f64) -> Result<f64, AmplitudeError> {
    if !peak.is_finite() || peak <= 0.0 {
        return Err(AmplitudeError::OutOfDomain(
            "advancement needs a finite peak distance > 0",
        ));
    }
    if !v_tau.is_finite() || v_tau <= 0.0 {
        return Err(AmplitudeError::OutOfDomain(
            "advancement needs a finite copy separation > 0",
        ));
    }
    Ok(-peak / (peak + v_tau))
}

/// Amplitude ratio `a2 / a1` that places the wide-packet peak a distance
/// `peak_magnitude` behind the undelayed copy: `-m / (m - v_tau)`.
///
/// The map diverges at `peak_magnitude == v_tau` (the peak cannot sit on the
/// delayed copy itself); that pole is reported as an error.
pub fn ratio_for_delay(peak_magnitude: f64, v_tau: f64) -> Result<f64, AmplitudeError> {
    if !peak_magnitude.is_finite() || peak_magnitude <= 0.0 {
        return Err(AmplitudeError::OutOfDomain(
            "delay needs a finite peak magnitude > 0",
        ));
    }
    if !v_tau.is_finite() || v_tau <= 0.0 {
        return Err(AmplitudeError::OutOfDomain(
            "delay needs a finite copy separation > 0",
        ));
    }
    if (peak_magnitude - v_tau).abs() <= 1e-12 * peak_magnitude.max(v_tau) {
        return Err(AmplitudeError::DelayPole {
            peak_magnitude,
            v_tau,
        });
    }
    Ok(-peak_magnitude / (peak_magnitude - v_tau))
}
