//! Binomial concentration helpers for statistical assertions.
//!
//! Empirical checks throughout the crate use a 4-sigma band around the
//! expected count (false-alarm rate ~6e-5 per check), plus half a count of
//! continuity slack.

/// Standard deviation of a Binomial(n, p) count.
pub fn binomial_sigma(trials: u64, p: f64) -> f64 {
    (trials as f64 * p * (1.0 - p)).sqrt()
}

/// Whether `successes` is within 4 sigma of `trials * p`.
pub fn within_4_sigma(successes: u64, trials: u64, p: f64) -> bool {
    let mean = trials as f64 * p;
    (successes as f64 - mean).abs() <= 4.0 * binomial_sigma(trials, p) + 0.5
}

/// Lower 4-sigma bound on an empirical rate with true rate `p`.
pub fn rate_lower_4_sigma(p: f64, trials: u64) -> f64 {
    p - 4.0 * binomial_sigma(trials, p) / trials as f64
}
