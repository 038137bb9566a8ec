//! The continuous comparison process: the `(f, g, h)` recurrence, its
//! eigen-structure, and breakthrough times through horizontal obstacles.

mod breakthrough;
mod recurrence;

pub use breakthrough::{breakthrough, canonical_obstacles, Breakthrough, Segment};
pub use recurrence::{
    advance_triple, eigenvalues, initial_triple, lambda_of, layer_table, ContinuumConfig, LayerRow, Triple,
};
