//! Domain types, deterministic randomness and initial configurations.

mod model;
mod neighborhood;
pub mod rng;
mod sample;

pub(crate) use model::lcm;
pub use model::{default_rgb, CellState, Color, Lattice, ModelSpec, Period, Species, Topology, MAX_SPECIES, NEVER};
pub use neighborhood::{Axis, Neighborhood, Offset};
pub use rng::coin;
pub use sample::{sample_initial, two_stage_sample, TwoStageSample};

/// Blue growing horizontally with range `tau` (undirected).
pub fn blue_line(tau: u32) -> crate::Result<Species> {
    Ok(Species::new(1, "blue", Neighborhood::line(tau, Axis::X, false)?, Period::ONE))
}

/// Blue with `B = {e1}`: spreads one site to the left per unit time.
pub fn blue_leftward() -> Species {
    Species::new(1, "blue", Neighborhood::line(1, Axis::X, true).expect("range 1"), Period::ONE)
}

/// Red growing vertically with range `rho` (undirected) and period `r`.
pub fn red_line(rho: u32, r: Period) -> crate::Result<Species> {
    Ok(Species::new(2, "red", Neighborhood::line(rho, Axis::Y, false)?, r))
}

/// Red growing through the L1 ball of radius `rho` with period `r`.
pub fn red_ball(rho: u32, r: Period) -> crate::Result<Species> {
    Ok(Species::new(2, "red", Neighborhood::l1_ball(rho)?, r))
}
