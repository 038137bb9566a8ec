use crate::lattice::{Lattice, NEVER};

/// Outcome of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimResult {
    /// Final configuration, including per-site coloring ticks.
    pub lattice: Lattice,
    /// Last tick at which any site was colored (0 if none was).
    pub fixation_tick: u32,
    /// The horizon was reached while some species could still grow.
    pub horizon_capped: bool,
    /// Site counts per species, aligned with `lattice.model().species`.
    pub counts: Vec<usize>,
    pub empty: usize,
}

impl SimResult {
    pub(crate) fn new(lattice: Lattice, fixation_tick: u32, horizon_capped: bool) -> Self {
        let census = lattice.census();
        let counts = lattice.model().species.iter().map(|s| census[s.id as usize]).collect();
        let empty = census[0];
        debug_assert!(lattice.colors().iter().zip(lattice.colored_at()).all(|(&c, &t)| (c == 0) == (t == NEVER)));
        Self { lattice, fixation_tick, horizon_capped, counts, empty }
    }

    /// Fixation time in model time units.
    pub fn fixation_time(&self) -> f64 {
        self.fixation_tick as f64 / self.lattice.tick_scale() as f64
    }

    pub fn fraction(&self, species_index: usize) -> f64 {
        self.counts[species_index] as f64 / self.lattice.len() as f64
    }

    pub fn empty_fraction(&self) -> f64 {
        self.empty as f64 / self.lattice.len() as f64
    }

    /// Final color byte at `(x, y)`.
    pub fn color(&self, x: usize, y: usize) -> u8 {
        self.lattice.color_at(x, y)
    }
}
