//! Power unit conversions.
//!
//! Powers are configured in dBm and used in watts. These are power ratios,
//! so the factor is 10, not 20.

/// dBm to watts: `P[W] = 10^((P[dBm] - 30) / 10)`.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Watts to dBm.
pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Linear power ratio to dB.
pub fn ratio_to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}
