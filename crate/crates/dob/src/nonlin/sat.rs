//! Smooth saturation used by the observer to bound internal signals.

/// Globally bounded C1 saturation: identity on [lo, hi], constant at
/// hi + width/2 above hi + width (mirrored below lo), cubic Hermite blend
/// in between. Monotone nondecreasing with derivative 1 at the band edges
/// of the identity region and 0 at the plateaus.
pub fn smooth_sat(v: f64, lo: f64, hi: f64, width: f64) -> f64 {
    assert!(lo < hi, "saturation interval is empty");
    assert!(width > 0.0, "blend width must be positive");
    if v >= lo && v <= hi {
        v
    } else if v >= hi + width {
        hi + 0.5 * width
    } else if v <= lo - width {
        lo - 0.5 * width
    } else if v > hi {
        let t = (v - hi) / width;
        hi + width * t * (1.0 - 0.5 * t)
    } else {
        let t = (lo - v) / width;
        lo - width * t * (1.0 - 0.5 * t)
    }
}
