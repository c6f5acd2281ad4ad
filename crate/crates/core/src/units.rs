//! Power-ratio decibel conversions (`10 log10`).

/// `10^(x_db / 10)`.
pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

/// `10 log10 x`; `-inf` for `x = 0`.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
