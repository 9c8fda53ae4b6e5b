//! Scans and derived observables built on top of the closed-form densities:
//! peak searches across packet widths, exact-versus-asymptote comparisons,
//! transit-time inference from the peak shift, and the Larmor-precession
//! reading of the same clock.

use alloc::vec::Vec;
use num_complex::Complex64;

use core::fmt;

use crate::amplitudes::PathSet;
use crate::density::{asymptotic_peak, DensityError, TwoPathConfig};
use crate::numeric::{golden_max, integrate};
use crate::wavepacket::{GaussianPacket, PacketError};

/// Relative quadrature tolerance for masses and moments.
pub const QUAD_REL_TOL: f64 = 1e-10;

/// Coarse grid size used to bracket peaks and count extrema.
pub const SCAN_GRID: usize = 2048;

/// Golden-section refinement target as a fraction of the bracket width.
pub const PEAK_REFINE_TOL: f64 = 1e-8;

/// Grid values below this are treated as identically dark.
pub const DARK_VALUE_TOL: f64 = 1e-30;

/// Local minima must dip below this fraction of the lesser neighboring
/// maximum to count as interference nodes rather than plateau dust.
pub const MINIMUM_DIP_FACTOR: f64 = 0.999;

/// Default zero-crossing band for [`infer_time_inside`], as a fraction of
/// the free transit time.
pub const ZERO_CROSSING_EPS_SCALE: f64 = 1e-12;

/// Errors from the analysis layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalysisError {
    Packet(PacketError),
    Density(DensityError),
    /// Search bracket must be finite with `lo < hi`.
    InvalidBracket {
        lo: f64,
        hi: f64,
    },
    /// Every sample in the bracket is numerically zero.
    DarkBracket,
    /// Density mass in the window is numerically zero.
    VanishingMass {
        mass: f64,
    },
    /// Width ladder malformed.
    InvalidLadder(&'static str),
    /// Scan parameters malformed.
    InvalidScan(&'static str),
    /// Transit geometry malformed.
    InvalidGeometry(&'static str),
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::Packet(e) => write!(f, "{e}"),
            AnalysisError::Density(e) => write!(f, "{e}"),
            AnalysisError::InvalidBracket { lo, hi } => {
                write!(f, "search bracket [{lo}, {hi}] must be finite and ordered")
            }
            AnalysisError::DarkBracket => write!(f, "density vanishes on the whole bracket"),
            AnalysisError::VanishingMass { mass } => {
                write!(f, "density mass {mass} in the window is numerically zero")
            }
            AnalysisError::InvalidLadder(what) => write!(f, "{what}"),
            AnalysisError::InvalidScan(what) => write!(f, "{what}"),
            AnalysisError::InvalidGeometry(what) => write!(f, "{what}"),
        }
    }
}

impl core::error::Error for AnalysisError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            AnalysisError::Packet(e) => Some(e),
            AnalysisError::Density(e) => Some(e),
            _ => None,
        }
    }
}

impl From<PacketError> for AnalysisError {
    fn from(e: PacketError) -> Self {
        AnalysisError::Packet(e)
    }
}

impl From<DensityError> for AnalysisError {
    fn from(e: DensityError) -> Self {
        AnalysisError::Density(e)
    }
}

/// Scan window holding both copies, the expected peak, and six widths of
/// margin: `[min(-v_tau, peak) - 6w, max(0, peak) + 6w]`.
pub fn scan_window(v_tau: f64, peak_shift: f64, width: f64) -> (f64, f64) {
    let lo = (-v_tau).min(peak_shift) - 6.0 * width;
    let hi = 0.0f64.max(peak_shift) + 6.0 * width;
    (lo, hi)
}

/// Global maximum of `f` on the bracket: coarse scan on [`SCAN_GRID`] points,
/// then golden-section refinement of the winning cell down to
/// [`PEAK_REFINE_TOL`] times the bracket width.
pub fn find_peak<F: Fn(f64) -> f64>(f: F, bracket: (f64, f64)) -> Result<f64, AnalysisError> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(AnalysisError::InvalidBracket { lo, hi });
    }
    let n = SCAN_GRID;
    let h = (hi - lo) / (n - 1) as f64;
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    let mut xs = Vec::with_capacity(n);
    for i in 0..n {
        let x = lo + h * i as f64;
        xs.push(x);
        let v = f(x);
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    // Negated on purpose: an all-NaN sample set must land here too, not
    // reach the refinement stage.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(best_value > DARK_VALUE_TOL) {
        return Err(AnalysisError::DarkBracket);
    }
    let wlo = xs[best.saturating_sub(1)];
    let whi = xs[(best + 1).min(n - 1)];
    Ok(golden_max(f, wlo, whi, PEAK_REFINE_TOL * (hi - lo)))
}

/// Centroid `int x f / int f` over the bracket via adaptive quadrature at
/// [`QUAD_REL_TOL`].
pub fn center_of_mass<F: Fn(f64) -> f64>(f: F, bracket: (f64, f64)) -> Result<f64, AnalysisError> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(AnalysisError::InvalidBracket { lo, hi });
    }
    let mass = integrate(&f, lo, hi, QUAD_REL_TOL);
    if mass <= crate::density::VANISHING_NORM_TOL {
        return Err(AnalysisError::VanishingMass { mass });
    }
    let moment = integrate(|x| x * f(x), lo, hi, QUAD_REL_TOL);
    Ok(moment / mass)
}

/// Strict grid extrema of tabulated samples. Maxima are strict interior
/// local maxima; between each pair of consecutive maxima the lowest sample
/// is reported as a minimum if it dips below [`MINIMUM_DIP_FACTOR`] times
/// the lesser of the two. Positions are grid points.
fn grid_extrema(xs: &[f64], vs: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut max_idx = Vec::new();
    for i in 1..vs.len().saturating_sub(1) {
        if vs[i] > vs[i - 1] && vs[i] > vs[i + 1] {
            max_idx.push(i);
        }
    }
    let mut minima = Vec::new();
    for pair in max_idx.windows(2) {
        let (l, r) = (pair[0], pair[1]);
        let mut lowest = l + 1;
        for i in (l + 1)..r {
            if vs[i] < vs[lowest] {
                lowest = i;
            }
        }
        if vs[lowest] < MINIMUM_DIP_FACTOR * vs[l].min(vs[r]) {
            minima.push(xs[lowest]);
        }
    }
    (max_idx.into_iter().map(|i| xs[i]).collect(), minima)
}

/// One rung of a width scan at the bright port.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthScanRecord {
    pub width: f64,
    /// Refined global density maximum.
    pub peak_x: f64,
    /// Density centroid over the scan window.
    pub com_x: f64,
    /// Detection probability of the port.
    pub p_detect: f64,
    /// Grid positions of the strict local maxima.
    pub maxima_x: Vec<f64>,
    /// Grid positions of the interference nodes.
    pub minima_x: Vec<f64>,
}

/// Scans the bright port of `set` at one packet width. Velocity is fixed to
/// one, so `v_tau` doubles as the arm delay.
pub fn scan_record(
    set: &PathSet,
    v_tau: f64,
    width: f64,
) -> Result<WidthScanRecord, AnalysisError> {
    if !v_tau.is_finite() || v_tau < 0.0 {
        return Err(AnalysisError::InvalidScan(
            "copy separation must be finite and non-negative",
        ));
    }
    let (a1, a2) = set.d1_pair();
    let packet = GaussianPacket::new(width, 1.0)?;
    let cfg = TwoPathConfig::new(a1, a2, packet, v_tau)?;
    // A dark port has no wide-packet peak; fall back to scanning the region
    // spanned by the two copies.
    let shift = asymptotic_peak(a1, a2, v_tau).unwrap_or(0.0);
    let window = scan_window(v_tau, shift, width);
    let (lo, hi) = window;

    let h = (hi - lo) / (SCAN_GRID - 1) as f64;
    let xs: Vec<f64> = (0..SCAN_GRID).map(|i| lo + h * i as f64).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| cfg.density(x)).collect();
    let (maxima_x, minima_x) = grid_extrema(&xs, &vs);

    Ok(WidthScanRecord {
        width,
        peak_x: find_peak(|x| cfg.density(x), window)?,
        com_x: center_of_mass(|x| cfg.density(x), window)?,
        p_detect: cfg.detection_probability()?,
        maxima_x,
        minima_x,
    })
}

/// Scans the bright port across a strictly increasing width ladder of at
/// least two rungs.
pub fn width_scan(
    set: &PathSet,
    v_tau: f64,
    ladder: &[f64],
) -> Result<Vec<WidthScanRecord>, AnalysisError> {
    if ladder.len() < 2 {
        return Err(AnalysisError::InvalidLadder(
            "width ladder needs at least two rungs",
        ));
    }
    if ladder.iter().any(|w| !w.is_finite() || *w <= 0.0) {
        return Err(AnalysisError::InvalidLadder(
            "ladder widths must be positive and finite",
        ));
    }
    if ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AnalysisError::InvalidLadder(
            "ladder widths must be strictly increasing",
        ));
    }
    ladder.iter().map(|&w| scan_record(set, v_tau, w)).collect()
}

/// Exact port density against its wide-packet asymptote and the free packet,
/// tabulated on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileComparison {
    pub positions: Vec<f64>,
    /// Raw port density.
    pub exact: Vec<f64>,
    /// Raw wide-packet asymptote (mass `|a1 + a2|^2`).
    pub asymptotic: Vec<f64>,
    /// Free single-copy density `G(x)^2` (unit mass).
    pub free: Vec<f64>,
    /// Refined position of the exact density maximum.
    pub exact_peak: f64,
    /// Closed-form wide-packet peak position.
    pub asymptotic_peak: f64,
    /// `asymptotic_peak - exact_peak`; shrinks as the packet widens.
    pub peak_offset: f64,
    /// Sup distance between the unit-mass normalized exact and asymptotic
    /// densities on the grid.
    pub sup_distance: f64,
    pub detection_probability: f64,
    /// For advanced peaks: whether the raw exact density stayed strictly
    /// below the free packet at every sampled `x > 0`. `None` when the peak
    /// is not advanced.
    pub front_bound_ok: Option<bool>,
}

/// Tabulates the exact density, its asymptote and the free packet on
/// `resolution` grid points over the scan window.
pub fn compare_profiles(
    cfg: &TwoPathConfig,
    resolution: usize,
) -> Result<ProfileComparison, AnalysisError> {
    if resolution < 16 {
        return Err(AnalysisError::InvalidScan(
            "comparison grid needs at least 16 points",
        ));
    }
    let center = cfg.packet().center();
    let shift = asymptotic_peak(cfg.a1(), cfg.a2(), cfg.v_tau())?;
    let (lo, hi) = scan_window(cfg.v_tau(), shift, cfg.packet().width());
    let (lo, hi) = (lo + center, hi + center);

    let h = (hi - lo) / (resolution - 1) as f64;
    let positions: Vec<f64> = (0..resolution).map(|i| lo + h * i as f64).collect();
    let exact: Vec<f64> = positions.iter().map(|&x| cfg.density(x)).collect();
    let asymptotic: Vec<f64> = positions
        .iter()
        .map(|&x| cfg.asymptotic_density(x))
        .collect::<Result<_, _>>()?;
    let free: Vec<f64> = positions.iter().map(|&x| cfg.free_density(x)).collect();

    let p = cfg.detection_probability()?;
    if p <= crate::density::VANISHING_NORM_TOL {
        return Err(AnalysisError::VanishingMass { mass: p });
    }
    let asym_mass = (cfg.a1() + cfg.a2()).norm_sqr();
    let mut sup_distance: f64 = 0.0;
    for (e, a) in exact.iter().zip(&asymptotic) {
        sup_distance = sup_distance.max((e / p - a / asym_mass).abs());
    }

    let exact_peak = find_peak(|x| cfg.density(x), (lo, hi))?;
    let front_bound_ok = if shift > 0.0 {
        Some(
            positions
                .iter()
                .zip(exact.iter().zip(&free))
                .filter(|(&x, _)| x - center > 0.0)
                .all(|(_, (&e, &g))| e < g),
        )
    } else {
        None
    };

    Ok(ProfileComparison {
        positions,
        exact,
        asymptotic,
        free,
        exact_peak,
        asymptotic_peak: center + shift,
        peak_offset: center + shift - exact_peak,
        sup_distance,
        detection_probability: p,
        front_bound_ok,
    })
}

/// How a transit-time reading compares against the free-flight expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// `0 < t <= L/v + tau`.
    Normal,
    /// `|t|` within the zero band: the particle spent no resolvable time
    /// inside.
    ZeroCrossing,
    /// `t < 0`: the peak left before it arrived.
    Negative,
    /// `t` exceeds the free transit plus the full arm delay.
    AbnormalDelay,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Normal => "normal",
            Classification::ZeroCrossing => "zero-crossing",
            Classification::Negative => "negative",
            Classification::AbnormalDelay => "abnormal-delay",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Transit time read off the peak shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeInference {
    pub distance: f64,
    pub velocity: f64,
    pub peak_shift: f64,
    pub delay: f64,
    /// `distance / velocity`.
    pub free_transit: f64,
    /// `free_transit - peak_shift / velocity`.
    pub time_inside: f64,
    /// Half-width of the band classified as a zero crossing.
    pub zero_epsilon: f64,
    pub classification: Classification,
}

/// Infers the time spent inside a region of length `distance` from the
/// observed peak shift, with the default zero band
/// [`ZERO_CROSSING_EPS_SCALE`] times the free transit.
pub fn infer_time_inside(
    distance: f64,
    velocity: f64,
    peak_shift: f64,
    delay: f64,
) -> Result<TimeInference, AnalysisError> {
    let eps = ZERO_CROSSING_EPS_SCALE * distance / velocity;
    infer_time_inside_with_epsilon(distance, velocity, peak_shift, delay, eps)
}

/// Same inference with an explicit zero band.
pub fn infer_time_inside_with_epsilon(
    distance: f64,
    velocity: f64,
    peak_shift: f64,
    delay: f64,
    zero_epsilon: f64,
) -> Result<TimeInference, AnalysisError> {
    if !distance.is_finite() || distance <= 0.0 {
        return Err(AnalysisError::InvalidGeometry(
            "region length must be positive and finite",
        ));
    }
    if !velocity.is_finite() || velocity <= 0.0 {
        return Err(AnalysisError::InvalidGeometry(
            "velocity must be positive and finite",
        ));
    }
    if !peak_shift.is_finite() {
        return Err(AnalysisError::InvalidGeometry("peak shift must be finite"));
    }
    if !delay.is_finite() || delay < 0.0 {
        return Err(AnalysisError::InvalidGeometry(
            "arm delay must be finite and non-negative",
        ));
    }
    if !zero_epsilon.is_finite() || zero_epsilon < 0.0 {
        return Err(AnalysisError::InvalidGeometry(
            "zero band must be finite and non-negative",
        ));
    }
    let free_transit = distance / velocity;
    let time_inside = free_transit - peak_shift / velocity;
    let classification = if time_inside.abs() <= zero_epsilon {
        Classification::ZeroCrossing
    } else if time_inside < 0.0 {
        Classification::Negative
    } else if time_inside > free_transit + delay {
        Classification::AbnormalDelay
    } else {
        Classification::Normal
    };
    Ok(TimeInference {
        distance,
        velocity,
        peak_shift,
        delay,
        free_transit,
        time_inside,
        zero_epsilon,
        classification,
    })
}

/// A spin clock riding the two arms: precession frequency `omega` and the
/// time each arm spends in the field region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LarmorConfig {
    /// Time in the field along the undelayed arm.
    pub time_undelayed: f64,
    /// Time in the field along the delayed arm.
    pub time_delayed: f64,
    pub a1: Complex64,
    pub a2: Complex64,
    pub omega: f64,
}

/// Postselected precession angle
/// `omega * Re[(t1 a1 + t2 a2) / (a1 + a2)]`.
///
/// With equal times the angle is exactly `omega * t` for any bright pair;
/// with unequal times the same amplitude-weighted average that shifts the
/// density peak shows up in the clock reading.
pub fn larmor_angle(cfg: &LarmorConfig) -> Result<f64, AnalysisError> {
    if !cfg.time_undelayed.is_finite() || cfg.time_undelayed < 0.0 {
        return Err(AnalysisError::InvalidGeometry(
            "field times must be finite and non-negative",
        ));
    }
    if !cfg.time_delayed.is_finite() || cfg.time_delayed < 0.0 {
        return Err(AnalysisError::InvalidGeometry(
            "field times must be finite and non-negative",
        ));
    }
    if !cfg.omega.is_finite() {
        return Err(AnalysisError::InvalidGeometry(
            "precession frequency must be finite",
        ));
    }
    let sum = cfg.a1 + cfg.a2;
    if sum.norm_sqr() <= crate::density::DARK_PORT_TOL * crate::density::DARK_PORT_TOL {
        return Err(AnalysisError::Density(DensityError::DarkPort));
    }
    let weighted = (cfg.a1 * cfg.time_undelayed + cfg.a2 * cfg.time_delayed) / sum;
    Ok(cfg.omega * weighted.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitudes::{design_symmetric, DesignTarget};

    fn fig_set() -> PathSet {
        design_symmetric(&DesignTarget::new(-1.0, 2.0).unwrap())
    }

    fn fig_config(width: f64) -> TwoPathConfig {
        let (a1, a2) = fig_set().d1_pair();
        let packet = GaussianPacket::new(width, 1.0).unwrap();
        TwoPathConfig::new(a1, a2, packet, 1.0).unwrap()
    }

    #[test]
    fn peak_marches_toward_the_asymptote_as_the_packet_widens() {
        // Reference positions for the (3, -2)/sqrt(26) pair at v tau = 1.
        let expect = [
            (1.0, 0.197787177323764, 1e-6),
            (2.0, 0.6166630989859082, 1e-6),
            (5.0, 1.3521418836656847, 1e-6),
            (50.0, 1.9881161542876093, 1e-4),
        ];
        for (width, want, tol) in expect {
            let cfg = fig_config(width);
            let shift = cfg.asymptotic_peak().unwrap();
            let window = scan_window(cfg.v_tau(), shift, width);
            let peak = find_peak(|x| cfg.density(x), window).unwrap();
            assert!(
                (peak - want).abs() < tol,
                "width {width}: peak {peak}, want {want}"
            );
        }
    }

    #[test]
    fn find_peak_validates_and_detects_darkness() {
        assert!(matches!(
            find_peak(|_| 1.0, (1.0, 1.0)),
            Err(AnalysisError::InvalidBracket { .. })
        ));
        assert!(matches!(
            find_peak(|_| 0.0, (0.0, 1.0)),
            Err(AnalysisError::DarkBracket)
        ));
        let x = find_peak(|x| -(x - 0.25) * (x - 0.25) + 1.0, (-1.0, 1.0)).unwrap();
        assert!((x - 0.25).abs() < 1e-7);
    }

    #[test]
    fn centroid_agrees_with_the_closed_form() {
        let cfg = fig_config(5.0);
        let shift = cfg.asymptotic_peak().unwrap();
        let window = scan_window(cfg.v_tau(), shift, 5.0);
        let com = center_of_mass(|x| cfg.density(x), window).unwrap();
        assert!((com - cfg.mean_position().unwrap()).abs() < 1e-9);
        assert!(matches!(
            center_of_mass(|_| 0.0, (0.0, 1.0)),
            Err(AnalysisError::VanishingMass { .. })
        ));
    }

    #[test]
    fn narrow_packet_scan_sees_two_bumps_and_the_node() {
        let record = scan_record(&fig_set(), 1.0, 0.1).unwrap();
        assert_eq!(record.maxima_x.len(), 2, "maxima at {:?}", record.maxima_x);
        assert!((record.maxima_x[0] + 1.0).abs() < 0.01);
        assert!(record.maxima_x[1].abs() < 0.01);
        assert_eq!(record.minima_x.len(), 1);
        // Destructive node of the (3, -2) pair sits at -0.502, not midway.
        assert!(
            (record.minima_x[0] + 0.502).abs() < 0.01,
            "node at {}",
            record.minima_x[0]
        );
        assert!(record.peak_x.abs() < 0.01);
        assert!((record.com_x - -4.0 / 13.0).abs() < 1e-6);
    }

    #[test]
    fn wide_packet_scan_is_a_single_bump() {
        let record = scan_record(&fig_set(), 1.0, 50.0).unwrap();
        assert_eq!(record.maxima_x.len(), 1);
        assert!(record.minima_x.is_empty());
        assert!((record.peak_x - 1.9881161542876093).abs() < 1e-4);
        assert!((record.p_detect - 0.03851).abs() < 1e-4);
    }

    #[test]
    fn width_scan_validates_the_ladder() {
        let set = fig_set();
        assert!(matches!(
            width_scan(&set, 1.0, &[1.0]),
            Err(AnalysisError::InvalidLadder(_))
        ));
        assert!(matches!(
            width_scan(&set, 1.0, &[1.0, 1.0]),
            Err(AnalysisError::InvalidLadder(_))
        ));
        assert!(matches!(
            width_scan(&set, 1.0, &[-1.0, 1.0]),
            Err(AnalysisError::InvalidLadder(_))
        ));
        let records = width_scan(&set, 1.0, &[1.0, 5.0]).unwrap();
        assert_eq!(records.len(), 2);
        assert!(records[0].peak_x < records[1].peak_x);
    }

    #[test]
    fn comparison_tracks_peak_offset_and_sup_distance() {
        let cfg = fig_config(5.0);
        let cmp = compare_profiles(&cfg, 2001).unwrap();
        assert!((cmp.exact_peak - 1.3521418836656847).abs() < 1e-5);
        assert!((cmp.asymptotic_peak - 2.0).abs() < 1e-12);
        assert!((cmp.peak_offset - 0.6479).abs() < 1e-3);
        assert_eq!(cmp.front_bound_ok, Some(true));
        // Normalized sup distance at this width, frozen as a regression band.
        assert!(
            cmp.sup_distance > 3.0e-2 && cmp.sup_distance < 4.0e-2,
            "sup {}",
            cmp.sup_distance
        );
        let wide = compare_profiles(&fig_config(50.0), 2001).unwrap();
        // At width 50 the residual is a fraction of a percent of the
        // normalized peak height.
        let peak_height =
            wide.exact.iter().cloned().fold(0.0f64, f64::max) / wide.detection_probability;
        let ratio = wide.sup_distance / peak_height;
        assert!(ratio > 2.0e-3 && ratio < 2.8e-3, "residual ratio {ratio}");
    }

    #[test]
    fn comparison_rejects_dark_ports_and_tiny_grids() {
        let packet = GaussianPacket::new(1.0, 1.0).unwrap();
        let dark = TwoPathConfig::new(
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.5, 0.0),
            packet,
            1.0,
        )
        .unwrap();
        assert!(matches!(
            compare_profiles(&dark, 2001),
            Err(AnalysisError::Density(DensityError::DarkPort))
        ));
        let cfg = fig_config(2.0);
        assert!(matches!(
            compare_profiles(&cfg, 8),
            Err(AnalysisError::InvalidScan(_))
        ));
    }

    #[test]
    fn transit_classification_covers_all_regimes() {
        // Free transit 10, delay 1.
        let normal = infer_time_inside(10.0, 1.0, 2.0, 1.0).unwrap();
        assert_eq!(normal.classification, Classification::Normal);
        assert!((normal.time_inside - 8.0).abs() < 1e-15);

        let zero = infer_time_inside(10.0, 1.0, 10.0, 1.0).unwrap();
        assert_eq!(zero.classification, Classification::ZeroCrossing);

        let negative = infer_time_inside(10.0, 1.0, 11.0, 1.0).unwrap();
        assert_eq!(negative.classification, Classification::Negative);
        assert!((negative.time_inside - -1.0).abs() < 1e-15);

        let abnormal = infer_time_inside(10.0, 1.0, -2.0, 1.0).unwrap();
        assert_eq!(abnormal.classification, Classification::AbnormalDelay);
        assert!((abnormal.time_inside - 12.0).abs() < 1e-15);

        // The boundary L/v + tau itself is still normal.
        let edge = infer_time_inside(10.0, 1.0, -1.0, 1.0).unwrap();
        assert_eq!(edge.classification, Classification::Normal);
    }

    #[test]
    fn transit_inference_validates_geometry() {
        assert!(matches!(
            infer_time_inside(0.0, 1.0, 1.0, 0.0),
            Err(AnalysisError::InvalidGeometry(_))
        ));
        assert!(matches!(
            infer_time_inside(1.0, -1.0, 1.0, 0.0),
            Err(AnalysisError::InvalidGeometry(_))
        ));
        assert!(matches!(
            infer_time_inside(1.0, 1.0, f64::NAN, 0.0),
            Err(AnalysisError::InvalidGeometry(_))
        ));
        assert!(matches!(
            infer_time_inside_with_epsilon(1.0, 1.0, 0.5, 0.0, -1.0),
            Err(AnalysisError::InvalidGeometry(_))
        ));
    }

    #[test]
    fn larmor_reading_matches_the_peak_clock() {
        let (a1, a2) = fig_set().d1_pair();
        // Equal field times: every bright pair reads omega * t exactly.
        let equal = LarmorConfig {
            time_undelayed: 0.7,
            time_delayed: 0.7,
            a1,
            a2,
            omega: 3.0,
        };
        assert!((larmor_angle(&equal).unwrap() - 2.1).abs() < 1e-12);
        // Field only on the delayed arm: the clock reads the same
        // amplitude-weighted average that advances the peak to +2, so
        // phi / omega = -2.
        let clock = LarmorConfig {
            time_undelayed: 0.0,
            time_delayed: 1.0,
            a1,
            a2,
            omega: 2.0,
        };
        assert!((larmor_angle(&clock).unwrap() - -4.0).abs() < 1e-12);

        let dark = LarmorConfig {
            time_undelayed: 0.0,
            time_delayed: 1.0,
            a1: Complex64::new(0.5, 0.0),
            a2: Complex64::new(-0.5, 0.0),
            omega: 1.0,
        };
        assert!(matches!(
            larmor_angle(&dark),
            Err(AnalysisError::Density(DensityError::DarkPort))
        ));
        let bad = LarmorConfig {
            time_undelayed: -1.0,
            time_delayed: 1.0,
            a1,
            a2,
            omega: 1.0,
        };
        assert!(matches!(
            larmor_angle(&bad),
            Err(AnalysisError::InvalidGeometry(_))
        ));
    }
}
