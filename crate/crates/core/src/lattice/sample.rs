use super::model::{Lattice, ModelSpec};
use super::rng::{uniform, STREAM_BLUE_MARK, STREAM_INIT, STREAM_RED_MARK};
use crate::error::{Error, Result};

/// Independent categorical draw per site: species `i` with probability
/// `densities[i]`, empty otherwise. Each site's draw is keyed by
/// `(seed, x, y)` alone.
pub fn sample_initial(model: ModelSpec) -> Result<Lattice> {
    let mut lattice = Lattice::empty(model)?;
    let model = lattice.model().clone();
    if model.densities.iter().all(|&d| d == 0.0) {
        return Ok(lattice);
    }
    let mut cumulative = Vec::with_capacity(model.species.len());
    let mut acc = 0.0;
    for (s, &d) in model.species.iter().zip(&model.densities) {
        acc += d;
        cumulative.push((acc, s.id));
    }
    let w = model.width;
    for (i, (color, at)) in lattice.colors.iter_mut().zip(lattice.colored_at.iter_mut()).enumerate() {
        let (x, y) = (i % w, i / w);
        let u = uniform(model.seed, STREAM_INIT, x as i64, y as i64, 0);
        if let Some(&(_, id)) = cumulative.iter().find(|(c, _)| u < *c) {
            *color = id;
            *at = 0;
        }
    }
    Ok(lattice)
}

/// Output of [`two_stage_sample`].
#[derive(Debug, Clone)]
pub struct TwoStageSample {
    /// Sites marked red in the first stage.
    pub red: Vec<bool>,
    /// Sites marked potentially blue in the second stage (independent of `red`).
    pub potentially_blue: Vec<bool>,
    /// Realized configuration: red wins over a potentially-blue mark.
    pub lattice: Lattice,
}

impl TwoStageSample {
    pub fn is_red(&self, x: usize, y: usize) -> bool {
        self.red[self.lattice.index(x, y)]
    }

    pub fn is_potentially_blue(&self, x: usize, y: usize) -> bool {
        self.potentially_blue[self.lattice.index(x, y)]
    }
}

/// Builds the initial configuration in two independent stages: red marks
/// with probability `q`, then potentially-blue marks with probability
/// `p / (1 - q)`. A site is red if marked red, blue if potentially blue and
/// not red, and empty otherwise, which reproduces the one-stage law with
/// densities `(p, q)`.
///
/// By convention the first species of `model` is blue and the second is red;
/// `model.densities` is ignored.
pub fn two_stage_sample(model: ModelSpec, p: f64, q: f64) -> Result<TwoStageSample> {
    if model.species.len() < 2 {
        return Err(Error::invalid("two-stage sampling needs a blue and a red species"));
    }
    if !(0.0..1.0).contains(&q) {
        return Err(Error::invalid(format!("red density q = {q} must lie in [0, 1)")));
    }
    if !(p >= 0.0) || p + q > 1.0 + 1e-12 {
        return Err(Error::DensityOverflow(p + q));
    }
    let blue_id = model.species[0].id;
    let red_id = model.species[1].id;
    let p_prime = p / (1.0 - q);
    let mut lattice = Lattice::empty(model)?;
    let seed = lattice.model().seed;
    let w = lattice.width();
    let n = lattice.len();
    let mut red = vec![false; n];
    let mut potentially_blue = vec![false; n];
    for i in 0..n {
        let (x, y) = ((i % w) as i64, (i / w) as i64);
        red[i] = uniform(seed, STREAM_RED_MARK, x, y, 0) < q;
        potentially_blue[i] = uniform(seed, STREAM_BLUE_MARK, x, y, 0) < p_prime;
        let color = if red[i] {
            red_id
        } else if potentially_blue[i] {
            blue_id
        } else {
            0
        };
        if color != 0 {
            lattice.colors[i] = color;
            lattice.colored_at[i] = 0;
        }
    }
    Ok(TwoStageSample { red, potentially_blue, lattice })
}
