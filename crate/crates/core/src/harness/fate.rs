use rayon::prelude::*;
use serde::Serialize;

use super::stats::Proportion;
use crate::dynamics::{default_horizon, run_to_fixation};
use crate::error::{Error, Result};
use crate::lattice::rng::replicate_seed;
use crate::lattice::{sample_initial, ModelSpec, Topology};

/// How replicates are laid out.
#[derive(Debug, Clone, PartialEq)]
pub struct FateConfig {
    /// Side of the square lattice.
    pub l: usize,
    pub replicates: u64,
    pub seed: u64,
    /// `Torus` runs to fixation. `DeadBoundary` emulates the plane around the
    /// center site and should come with a horizon sized by the dependence radius.
    pub topology: Topology,
    /// Defaults to [`default_horizon`].
    pub horizon_ticks: Option<u64>,
}

impl FateConfig {
    pub fn new(l: usize, replicates: u64, seed: u64) -> Self {
        Self { l, replicates, seed, topology: Topology::Torus, horizon_ticks: None }
    }
}

/// One replicate, reduced to what the aggregates need.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateOutcome {
    pub seed: u64,
    /// Final color byte of the origin (the center site).
    pub origin: u8,
    /// Final fraction per species, aligned with the model's species.
    pub fractions: Vec<f64>,
    pub empty_fraction: f64,
    pub fixation_time: f64,
    pub horizon_capped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FateEstimate {
    pub labels: Vec<String>,
    pub replicates: u64,
    /// Origin fate per species, aligned with `labels`.
    pub species: Vec<Proportion>,
    pub empty: Proportion,
    pub mean_fraction: Vec<f64>,
    pub mean_empty_fraction: f64,
    pub mean_fixation_time: f64,
    /// Replicates stopped by the horizon before fixating.
    pub horizon_hits: u64,
}

impl FateEstimate {
    pub fn by_label(&self, label: &str) -> Option<&Proportion> {
        self.labels.iter().position(|l| l == label).map(|i| &self.species[i])
    }

    pub fn mean_fraction_of(&self, label: &str) -> Option<f64> {
        self.labels.iter().position(|l| l == label).map(|i| self.mean_fraction[i])
    }
}

/// The site whose fate is recorded.
pub fn origin_of(l: usize) -> (usize, usize) {
    (l / 2, l / 2)
}

/// Runs one replicate of `template` on an `l x l` lattice with the given seed.
pub fn run_replicate(template: &ModelSpec, cfg: &FateConfig, seed: u64) -> Result<ReplicateOutcome> {
    let mut model = template.clone();
    model.width = cfg.l;
    model.height = cfg.l;
    model.topology = cfg.topology;
    model.seed = seed;
    let horizon = match cfg.horizon_ticks {
        Some(h) => h,
        None => default_horizon(&model)?,
    };
    let res = run_to_fixation(sample_initial(model)?, horizon)?;
    let (ox, oy) = origin_of(cfg.l);
    Ok(ReplicateOutcome {
        seed,
        origin: res.color(ox, oy),
        fractions: (0..res.counts.len()).map(|i| res.fraction(i)).collect(),
        empty_fraction: res.empty_fraction(),
        fixation_time: res.fixation_time(),
        horizon_capped: res.horizon_capped,
    })
}

/// Aggregates replicates in the order given.
pub fn aggregate(template: &ModelSpec, outcomes: &[ReplicateOutcome]) -> FateEstimate {
    let n = outcomes.len() as u64;
    let k = template.species.len();
    let mut wins = vec![0u64; k];
    let mut empty = 0u64;
    let mut frac = vec![0.0; k];
    let (mut frac_empty, mut fix, mut hits) = (0.0, 0.0, 0u64);
    for o in outcomes {
        match template.species_index(o.origin) {
            Some(i) => wins[i] += 1,
            None => empty += 1,
        }
        for (f, x) in frac.iter_mut().zip(&o.fractions) {
            *f += x;
        }
        frac_empty += o.empty_fraction;
        fix += o.fixation_time;
        hits += o.horizon_capped as u64;
    }
    let mean = |x: f64| if n == 0 { f64::NAN } else { x / n as f64 };
    FateEstimate {
        labels: template.species.iter().map(|s| s.label.clone()).collect(),
        replicates: n,
        species: wins.iter().map(|&w| Proportion::new(w, n)).collect(),
        empty: Proportion::new(empty, n),
        mean_fraction: frac.into_iter().map(mean).collect(),
        mean_empty_fraction: mean(frac_empty),
        mean_fixation_time: mean(fix),
        horizon_hits: hits,
    }
}

/// Runs the replicates for explicit seeds in parallel, keeping their order.
pub fn run_seeds(template: &ModelSpec, cfg: &FateConfig, seeds: &[u64]) -> Result<Vec<ReplicateOutcome>> {
    seeds.par_iter().map(|&s| run_replicate(template, cfg, s)).collect()
}

/// Origin-fate probabilities over `cfg.replicates` independent runs of
/// `template` (its size, topology and seed are overridden).
pub fn estimate_origin_fate(template: &ModelSpec, cfg: &FateConfig) -> Result<FateEstimate> {
    if cfg.l < 8 {
        return Err(Error::invalid(format!("lattice side {} is below 8", cfg.l)));
    }
    if cfg.replicates == 0 {
        return Err(Error::invalid("at least one replicate is required"));
    }
    let seeds: Vec<u64> = (0..cfg.replicates).map(|i| replicate_seed(cfg.seed, i)).collect();
    let outcomes = run_seeds(template, cfg, &seeds)?;
    let est = aggregate(template, &outcomes);
    if est.horizon_hits > 0 {
        log::warn!("{} of {} replicates reached the horizon before fixating", est.horizon_hits, est.replicates);
    }
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{blue_line, red_ball, Period};

    fn model(p: f64, q: f64) -> ModelSpec {
        ModelSpec::new(1, 1, Topology::Torus)
            .with_species(blue_line(1).unwrap(), p)
            .with_species(red_ball(1, Period::ONE).unwrap(), q)
    }

    #[test]
    fn red_alone_always_wins() {
        let est = estimate_origin_fate(&model(0.0, 0.05), &FateConfig::new(32, 20, 1)).unwrap();
        assert_eq!(est.by_label("red").unwrap().successes, 20);
        assert_eq!(est.mean_fraction_of("red"), Some(1.0));
        assert_eq!(est.horizon_hits, 0);
    }

    #[test]
    fn probabilities_partition() {
        let est = estimate_origin_fate(&model(0.05, 0.01), &FateConfig::new(24, 37, 9)).unwrap();
        let total: u64 = est.species.iter().map(|p| p.successes).sum::<u64>() + est.empty.successes;
        assert_eq!(total, 37);
        let s: f64 = est.species.iter().map(|p| p.estimate).sum::<f64>() + est.empty.estimate;
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_lattice_rejected() {
        assert!(estimate_origin_fate(&model(0.1, 0.1), &FateConfig::new(4, 1, 0)).is_err());
        assert!(estimate_origin_fate(&model(0.1, 0.1), &FateConfig::new(8, 0, 0)).is_err());
    }

    #[test]
    fn horizon_hits_are_counted() {
        let mut cfg = FateConfig::new(40, 5, 2);
        cfg.horizon_ticks = Some(1);
        let est = estimate_origin_fate(&model(0.01, 0.01), &cfg).unwrap();
        assert_eq!(est.horizon_hits, 5);
    }
}
