//! Synchronous evolution to fixation.
//!
//! [`run_to_fixation`] is the production engine; [`run_reference`] rescans
//! every site and exists to check it.

mod engine;
mod radius;
mod result;
mod schedule;

pub use engine::{default_horizon, run_reference, run_to_fixation, FrontierEngine};
pub use radius::window_dependence_radius;
pub use result::SimResult;
pub use schedule::Schedule;
