use serde::Serialize;

use super::fate::{estimate_origin_fate, FateConfig, FateEstimate};
use crate::error::Result;
use crate::lattice::{Axis, Lattice, ModelSpec, Neighborhood, Period, Species, Topology};

/// Blue and red one-dimensional, green through the L1 ball of radius 1, all with period 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeColorParams {
    pub p_blue: f64,
    pub p_red: f64,
    pub p_green: f64,
    /// `B = {e1}`, `R = {e2}` instead of `{±e1}`, `{±e2}`.
    pub directed: bool,
}

impl ThreeColorParams {
    pub fn model(&self, l: usize) -> Result<ModelSpec> {
        let b = Neighborhood::line(1, Axis::X, self.directed)?;
        let r = Neighborhood::line(1, Axis::Y, self.directed)?;
        let m = ModelSpec::new(l, l, Topology::Torus)
            .with_species(Species::new(1, "blue", b, Period::ONE), self.p_blue)
            .with_species(Species::new(2, "red", r, Period::ONE), self.p_red)
            .with_species(Species::new(3, "green", Neighborhood::l1_ball(1)?, Period::ONE), self.p_green);
        m.validate()?;
        Ok(m)
    }
}

pub fn three_color_experiment(params: &ThreeColorParams, cfg: &FateConfig) -> Result<FateEstimate> {
    estimate_origin_fate(&params.model(cfg.l)?, cfg)
}

/// A 4-connected component of empty sites on the torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmptyComponent {
    pub size: usize,
    /// Distinct columns and rows touched.
    pub columns: usize,
    pub rows: usize,
    pub rectangular: bool,
}

/// Whether `set` (distinct members of `0..n`) is one cyclic interval.
fn cyclic_interval(set: &[usize], n: usize) -> bool {
    let mut member = vec![false; n];
    for &i in set {
        member[i] = true;
    }
    // members whose successor is missing: one per maximal run
    let ends = set.iter().filter(|&&i| !member[(i + 1) % n]).count();
    ends <= 1
}

/// Empty components of a torus configuration. A component is rectangular
/// when its columns and rows each form a cyclic interval and it fills their
/// product.
pub fn empty_components(lattice: &Lattice) -> Vec<EmptyComponent> {
    let (w, h) = (lattice.width(), lattice.height());
    let colors = lattice.colors();
    let mut seen = vec![false; colors.len()];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..colors.len() {
        if colors[start] != 0 || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut cols = vec![false; w];
        let mut rows = vec![false; h];
        let mut size = 0;
        while let Some(i) = stack.pop() {
            size += 1;
            let (x, y) = (i % w, i / w);
            cols[x] = true;
            rows[y] = true;
            for (dx, dy) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                if let Some(j) = lattice.wrap(x as i64 + dx, y as i64 + dy) {
                    if colors[j] == 0 && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        let cs: Vec<usize> = (0..w).filter(|&x| cols[x]).collect();
        let rs: Vec<usize> = (0..h).filter(|&y| rows[y]).collect();
        let rectangular = cyclic_interval(&cs, w) && cyclic_interval(&rs, h) && size == cs.len() * rs.len();
        out.push(EmptyComponent { size, columns: cs.len(), rows: rs.len(), rectangular });
    }
    out
}
