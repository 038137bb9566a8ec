use super::schedule::Schedule;
use crate::error::{Error, Result};
use crate::lattice::{lcm, ModelSpec};

/// L-infinity radius beyond which the initial state cannot affect a window
/// within `t_ticks`.
///
/// Each update of species `s` moves influence by at most the max-norm of its
/// neighborhood, and `s` updates `floor(t / period)` times, so
/// `ceil(t * sum_s maxnorm_s / period_s)` bounds the reach. Computed exactly
/// over a common denominator.
pub fn window_dependence_radius(model: &ModelSpec, t_ticks: u64) -> Result<u64> {
    let schedule = Schedule::for_model(model)?;
    let overflow = || Error::TickOverflow(format!("dependence radius for {t_ticks} ticks"));
    let den = schedule.period_ticks().iter().fold(1u64, |d, &p| lcm(d, p)) as u128;
    let mut num: u128 = 0;
    for (s, &p) in model.species.iter().zip(schedule.period_ticks()) {
        let term = (s.neighborhood.max_norm() as u128)
            .checked_mul(t_ticks as u128)
            .and_then(|v| v.checked_mul(den / p as u128))
            .ok_or_else(overflow)?;
        num = num.checked_add(term).ok_or_else(overflow)?;
    }
    u64::try_from(num.div_ceil(den)).map_err(|_| overflow())
}
