//! Monte Carlo experiments on top of the engine.
//!
//! Replicates run in parallel on rayon but are always merged by replicate
//! index, and every seed is derived from the experiment seed with the
//! counter-based hash, so aggregates do not depend on thread count or order.

mod fate;
mod fit;
mod redwins;
mod scan;
mod setting;
mod stats;
mod three_color;

pub use fate::{
    aggregate, estimate_origin_fate, origin_of, run_replicate, run_seeds, FateConfig, FateEstimate, ReplicateOutcome,
};
pub use fit::{
    crossing_log_q, fit_exponent, geometric_grid, isotonic_decreasing, ols, planted_logistic_rows, ExponentFit,
};
pub use redwins::{
    check_red_wins, red_wins_certificate, RedWinsGeometry, RedWinsParams, RedWinsReport, MAX_WINDOW_SITES,
};
pub use scan::{
    monotonicity_flags, phase_scan, phase_scan_with, scan_cell, MonotonicityFlag, ScanParams, ScanReport, ScanRow, Side,
};
pub use setting::Setting;
pub use stats::{wilson, Proportion, Z95};
pub use three_color::{empty_components, three_color_experiment, EmptyComponent, ThreeColorParams};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "GROWTHLAB_THREADS";

/// Sizes the global rayon pool from `GROWTHLAB_THREADS` if it is set.
/// Returns the number of threads in use.
pub fn configure_threads() -> crate::Result<usize> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize =
            v.trim().parse().map_err(|_| crate::Error::invalid(format!("{THREADS_ENV}={v} is not a thread count")))?;
        if n == 0 {
            return Err(crate::Error::invalid(format!("{THREADS_ENV} must be at least 1")));
        }
        // a pool that is already built keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(rayon::current_num_threads())
}
