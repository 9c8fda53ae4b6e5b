//! Quadrature and derivative-free search used by the analysis layer.
//!
//! The integrands here are smooth Gaussian bumps, possibly narrow compared to
//! the integration window, so the integrator seeds an adaptive Simpson
//! recursion from a fixed composite grid fine enough that no bump can slip
//! between the seed nodes of the windows this crate produces.

use alloc::vec::Vec;

/// Number of seed segments for [`integrate`]. Analysis windows span at most a
/// few hundred packet widths, so 256 segments keep every Gaussian feature
/// wider than a seed node spacing.
const SEED_SEGMENTS: usize = 256;

/// Hard cap on bisection depth per seed segment.
const MAX_DEPTH: u32 = 48;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        // Richardson extrapolation of the two half-interval estimates.
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[lo, hi]` with relative
/// tolerance `rel_tol` (relative to the integral of `|f|`).
///
/// # Panics
///
/// Panics if the bounds are not finite and ordered or if `rel_tol` is not a
/// positive finite number.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> f64 {
    assert!(
        lo.is_finite() && hi.is_finite() && lo < hi,
        "bad quadrature bounds [{lo}, {hi}]"
    );
    assert!(
        rel_tol.is_finite() && rel_tol > 0.0,
        "bad quadrature tolerance {rel_tol}"
    );

    let span = hi - lo;
    let h = span / SEED_SEGMENTS as f64;
    // Sample the seed grid once; reuse the values for the magnitude estimate
    // that converts the relative tolerance into an absolute one.
    let nodes: Vec<f64> = (0..=SEED_SEGMENTS).map(|i| lo + h * i as f64).collect();
    let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
    let mut magnitude = 0.0;
    for i in 0..SEED_SEGMENTS {
        magnitude += 0.5 * h * (values[i].abs() + values[i + 1].abs());
    }
    if magnitude == 0.0 {
        return 0.0;
    }
    let eps = rel_tol * magnitude / SEED_SEGMENTS as f64;

    let mut total = 0.0;
    for i in 0..SEED_SEGMENTS {
        let (a, b) = (nodes[i], nodes[i + 1]);
        let (fa, fb) = (values[i], values[i + 1]);
        let fm = f(0.5 * (a + b));
        let whole = simpson(fa, fm, fb, b - a);
        total += adaptive(&f, a, b, fa, fm, fb, whole, eps, MAX_DEPTH);
    }
    total
}

/// Trapezoid rule over tabulated samples at strictly increasing positions.
///
/// # Panics
///
/// Panics if the slices differ in length or hold fewer than two samples.
pub fn trapezoid(positions: &[f64], values: &[f64]) -> f64 {
    assert_eq!(positions.len(), values.len(), "mismatched sample columns");
    assert!(
        positions.len() >= 2,
        "trapezoid rule needs at least two samples"
    );
    let mut total = 0.0;
    for i in 1..positions.len() {
        total += 0.5 * (positions[i] - positions[i - 1]) * (values[i] + values[i - 1]);
    }
    total
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// Returns the abscissa of the maximum once the bracket has shrunk below
/// `tol`. On non-unimodal input it still converges, to one of the local
/// maxima inside the bracket.
///
/// # Panics
///
/// Panics if the bracket is not finite and ordered or if `tol` is not
/// positive.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    assert!(
        lo.is_finite() && hi.is_finite() && lo < hi,
        "bad search bracket [{lo}, {hi}]"
    );
    assert!(tol.is_finite() && tol > 0.0, "bad search tolerance {tol}");
    // 1/phi, the golden bracket shrink factor per probe.
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut b = hi - INV_PHI * (hi - lo);
    let mut c = lo + INV_PHI * (hi - lo);
    let mut fb = f(b);
    let mut fc = f(c);
    while hi - lo > tol {
        if fb > fc {
            hi = c;
            c = b;
            fc = fb;
            b = hi - INV_PHI * (hi - lo);
            fb = f(b);
        } else {
            lo = b;
            b = c;
            fb = fc;
            c = lo + INV_PHI * (hi - lo);
            fc = f(c);
        }
    }
    0.5 * (lo + hi)
}
